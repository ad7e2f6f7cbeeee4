"""Solvable quotient algebras B_r and exact descriptions of their modules.

B_r is the (r+1)-dimensional Lie algebra spanned by d0, ..., dr with
bracket [di, dj] = (j - i) d_{i+j}, where d_{i+j} is read as zero once
i + j exceeds r.  A module is described by r+1 linear operators on an
explicit carrier; the bracket relations are checked exhaustively on a
window of basis vectors and the window that passed is recorded as the
description's validation certificate.

Carriers are either finite dimensional (basis keys 0..dim-1), the
polynomial space Q[x] (basis keys are x-degrees), or a tensor product of
two carriers (basis keys are pairs).  All elements are exact keyed
vectors (:class:`virabench.exact.Vec`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from random import Random

from .exact import ONE, ZERO, Poly, RatMatrix, Vec, frac, kron, mat_inverse, mat_mul, nullspace, rat

MAX_RANK = 6  # keeps the exact factorials in the polynomial mode action small


# ---------------------------------------------------------------------------
# operators


@dataclass(frozen=True)
class ScalarMult:
    c: object

    def __call__(self, v: Vec) -> Vec:
        return self.c * v


@dataclass(frozen=True)
class PolyMult:
    """Multiplication by a polynomial in the carrier variable x."""

    p: Poly

    def __call__(self, v: Vec) -> Vec:
        out = {}
        for k, a in v.iter_items():
            for j, b in enumerate(self.p.coeffs):
                if b:
                    key = k + j
                    out[key] = out.get(key, ZERO) + a * b
        return Vec._raw({k: c for k, c in out.items() if c})


@dataclass(frozen=True)
class UnitShift:
    """Substitution f(x) -> f(x + c); degree preserving, invertible."""

    c: object

    def __call__(self, v: Vec) -> Vec:
        out = {}
        for k, a in v.iter_items():
            for j in range(k + 1):
                coef = a * math.comb(k, j) * self.c ** (k - j)
                if coef:
                    out[j] = out.get(j, ZERO) + coef
        return Vec._raw({k: c for k, c in out.items() if c})


@dataclass(frozen=True)
class MatrixOp:
    """Square matrix acting on a finite-dimensional carrier, e_j -> sum_i A[i][j] e_i."""

    entries: tuple

    def __call__(self, v: Vec) -> Vec:
        out = {}
        for j, a in v.iter_items():
            for i, row in enumerate(self.entries):
                c = row[j] * a
                if c:
                    out[i] = out.get(i, ZERO) + c
        return Vec._raw({k: c for k, c in out.items() if c})


@dataclass(frozen=True)
class OpSum:
    ops: tuple

    def __call__(self, v: Vec) -> Vec:
        out = Vec()
        for op in self.ops:
            out = out + op(v)
        return out


@dataclass(frozen=True)
class OpCompose:
    """Operator product; ops[-1] is applied first, like function composition."""

    ops: tuple

    def __call__(self, v: Vec) -> Vec:
        for op in reversed(self.ops):
            v = op(v)
        return v


@dataclass(frozen=True)
class ZeroOp:
    def __call__(self, v: Vec) -> Vec:
        return Vec()


@dataclass(frozen=True)
class TensorOp:
    """left (x) right on a tensor carrier with pair keys."""

    left: object
    right: object

    def __call__(self, v: Vec) -> Vec:
        acc: dict = {}
        for (k1, k2), c in v.iter_items():
            kron(self.left(Vec.basis(k1)), self.right(Vec.basis(k2))).add_scaled_into(acc, c)
        return Vec._raw(acc)


IDENTITY = ScalarMult(ONE)


def matrix_op(rows) -> MatrixOp:
    return MatrixOp(tuple(tuple(rat(c) for c in row) for row in rows))


# ---------------------------------------------------------------------------
# carriers


@dataclass(frozen=True)
class FiniteDim:
    dim: int

    def window_keys(self, cap: int | None = None) -> tuple:
        return tuple(range(self.dim))


@dataclass(frozen=True)
class PolyCarrier:
    """Q[x] carrier; ``cap`` is the default x-degree window for probes."""

    cap: int = 8

    def window_keys(self, cap: int | None = None) -> tuple:
        n = self.cap if cap is None else cap
        return tuple(range(n + 1))


@dataclass(frozen=True)
class TensorCarrier:
    left: object
    right: object

    def window_keys(self, cap: int | None = None) -> tuple:
        return tuple(
            (a, b)
            for a in self.left.window_keys(cap)
            for b in self.right.window_keys(cap)
        )


def _check_ops_fit_carrier(op, carrier) -> None:
    if isinstance(op, (OpSum, OpCompose)):
        for sub in op.ops:
            _check_ops_fit_carrier(sub, carrier)
        return
    if isinstance(op, TensorOp):
        if not isinstance(carrier, TensorCarrier):
            raise ValueError("tensor operator on a non-tensor carrier")
        _check_ops_fit_carrier(op.left, carrier.left)
        _check_ops_fit_carrier(op.right, carrier.right)
        return
    if isinstance(op, (PolyMult, UnitShift)) and isinstance(carrier, FiniteDim):
        raise ValueError("polynomial-carrier operator on a finite-dimensional carrier")
    if isinstance(op, MatrixOp):
        if not isinstance(carrier, FiniteDim):
            raise ValueError("matrix operator needs a finite-dimensional carrier")
        n = carrier.dim
        if len(op.entries) != n or any(len(r) != n for r in op.entries):
            raise ValueError("matrix operator shape does not match carrier dimension")


# ---------------------------------------------------------------------------
# module descriptions


@dataclass
class BrModuleDesc:
    """A B_r-module given by rank, carrier, and one operator per generator.

    ``validation`` records the basis window on which all bracket residuals
    were checked to vanish exactly; it is None until a check passes.
    """

    rank: int
    carrier: object
    ops: tuple
    name: str = "br-module"
    validation: int | None = None

    def __post_init__(self):
        if not 0 <= self.rank <= MAX_RANK:
            raise ValueError(f"rank must be between 0 and {MAX_RANK}")
        self.ops = tuple(self.ops)
        if len(self.ops) != self.rank + 1:
            raise ValueError("need exactly rank+1 operators")
        for op in self.ops:
            _check_ops_fit_carrier(op, self.carrier)
        self._op_cache: dict = {}
        self._g_cache: dict = {}

    def window_keys(self, cap: int | None = None) -> tuple:
        return self.carrier.window_keys(cap)

    def basis(self, key) -> Vec:
        return Vec.basis(key)

    def apply_basis(self, i: int, key) -> Vec:
        try:
            return self._op_cache[(i, key)]
        except KeyError:
            out = self.ops[i](Vec.basis(key))
            self._op_cache[(i, key)] = out
            return out

    def apply(self, i: int, v: Vec) -> Vec:
        """Action of the i-th generator; zero beyond the rank."""
        if i > self.rank:
            return Vec()
        acc: dict = {}
        for key, c in v.iter_items():
            self.apply_basis(i, key).add_scaled_into(acc, c)
        return Vec._raw(acc)

    def describe(self) -> str:
        return self.name


@dataclass(frozen=True)
class ResidualWitness:
    i: int
    j: int
    key: object
    residual: Vec


@dataclass
class BrValidationReport:
    module: str
    window: int
    checked: int
    witnesses: list[ResidualWitness] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.witnesses


def validate_br_module(M: BrModuleDesc, window: int) -> BrValidationReport:
    """Check [di, dj] = (j - i) d_{i+j} on every basis vector of the window.

    Nonzero residuals are reported with the witnessing basis vector, never
    raised.  On an all-zero run the description's certificate is extended
    to the checked window.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    report = BrValidationReport(M.describe(), window, 0)
    keys = M.window_keys(window)
    for i in range(M.rank + 1):
        for j in range(M.rank + 1):
            for key in keys:
                v = M.basis(key)
                resid = (
                    M.apply(i, M.apply(j, v))
                    - M.apply(j, M.apply(i, v))
                    - (j - i) * M.apply(i + j, v)
                )
                report.checked += 1
                if resid:
                    report.witnesses.append(ResidualWitness(i, j, key, resid))
    if report.ok:
        M.validation = max(M.validation or 0, window)
    return report


def br_g_action(M: BrModuleDesc, m: int, v: Vec) -> Vec:
    """Polynomial mode action g(m) v = sum_i m^(i+1) d_i v / (i+1)!."""
    acc: dict = {}
    for key, c in v.iter_items():
        try:
            gkey = M._g_cache[(m, key)]
        except KeyError:
            inner: dict = {}
            for i in range(M.rank + 1):
                coef = frac(m ** (i + 1), math.factorial(i + 1))
                if coef:
                    M.apply_basis(i, key).add_scaled_into(inner, coef)
            gkey = Vec._raw(inner)
            M._g_cache[(m, key)] = gkey
        gkey.add_scaled_into(acc, c)
    return Vec._raw(acc)


# ---------------------------------------------------------------------------
# stock fixtures


def make_m_gamma(gamma, r: int = 1) -> BrModuleDesc:
    """One-dimensional module: d0 acts by gamma, every higher generator by 0."""
    if r < 0:
        raise ValueError("rank must be nonnegative")
    g = rat(gamma)
    ops = (ScalarMult(g),) + tuple(ZeroOp() for _ in range(r))
    name = f"Mgamma({g})" if r == 1 else f"Mgamma({g},{r})"
    M = BrModuleDesc(r, FiniteDim(1), ops, name=name)
    validate_br_module(M, 1)
    return M


def make_shift_module_b1(cap: int = 8) -> BrModuleDesc:
    """Infinite-dimensional B_1 fixture on Q[x]: d0 = -x*, d1 = f(x) -> f(x+1).

    The unit shift is degree preserving with unit leading coefficient, so
    d1 has no kernel; probes treat its irreducibility as an outcome, not
    an assumption.
    """
    ops = (PolyMult(Poly((0, -1))), UnitShift(ONE))
    M = BrModuleDesc(1, PolyCarrier(cap), ops, name="shiftB1")
    validate_br_module(M, cap)
    return M


def make_broken_fixture() -> BrModuleDesc:
    """Deliberately invalid B_1 description: d0 scalar, d1 identity.

    [d0, d1] = 0 while the relations demand d1, so validation must report
    a -identity residual on every basis vector.  Used as a negative
    control; never certified.
    """
    ops = (ScalarMult(ONE), ScalarMult(ONE))
    return BrModuleDesc(1, FiniteDim(2), ops, name="broken_fixture")


def make_mixed_fixture() -> BrModuleDesc:
    """Valid reducible B_1 module whose d1 is neither zero nor injective.

    d0 = diag(1, 0), d1 = E12 satisfy [d0, d1] = d1; d1 kills e0 and maps
    e1 to e0, so kernel and image are both proper.
    """
    ops = (matrix_op([[1, 0], [0, 0]]), matrix_op([[0, 1], [0, 0]]))
    M = BrModuleDesc(1, FiniteDim(2), ops, name="mixed_fixture")
    validate_br_module(M, 2)
    return M


def tensor_br(M1: BrModuleDesc, M2: BrModuleDesc) -> BrModuleDesc:
    """Tensor product module: each generator acts as di (x) 1 + 1 (x) di."""
    if M1.rank != M2.rank:
        raise ValueError("tensor of modules with different ranks")
    if M1.validation is None or M2.validation is None:
        raise ValueError("tensor factors must be validated first")
    ops = tuple(
        OpSum((TensorOp(M1.ops[i], IDENTITY), TensorOp(IDENTITY, M2.ops[i])))
        for i in range(M1.rank + 1)
    )
    M = BrModuleDesc(
        M1.rank,
        TensorCarrier(M1.carrier, M2.carrier),
        ops,
        name=f"tensor({M1.name},{M2.name})",
    )
    window = min(M1.validation, M2.validation, 4)
    report = validate_br_module(M, window)
    if not report.ok:
        raise AssertionError("tensor of validated modules failed validation")
    return M


def adjoint_module(r: int) -> BrModuleDesc:
    """B_r acting on itself: di e_j = (j - i) e_{i+j}, zero past the rank."""
    n = r + 1
    ops = []
    for i in range(n):
        rows = [[ZERO] * n for _ in range(n)]
        for j in range(n):
            if i + j <= r and j - i != 0:
                rows[i + j][j] = frac(j - i)
        ops.append(MatrixOp(tuple(tuple(row) for row in rows)))
    M = BrModuleDesc(r, FiniteDim(n), tuple(ops), name=f"adjoint(B{r})")
    validate_br_module(M, n)
    return M


def random_matrix_module(rng: Random, r: int) -> BrModuleDesc:
    """Random validated matrix module of rank r (dimension at most 5).

    Built from the adjoint module, optionally padded with a scalar line,
    with a random rational shift of d0 (which commutes with everything)
    and a random unit-triangular change of basis.  The construction is
    exact, so validation must pass; it is still run and certified.
    """
    base = adjoint_module(r)
    mats = [list(map(list, op.entries)) for op in base.ops]
    n = r + 1
    if n < 5 and rng.random() < 0.5:
        gamma = frac(rng.randint(-3, 3), rng.randint(1, 3))
        for idx, mat in enumerate(mats):
            for row in mat:
                row.append(ZERO)
            mat.append([ZERO] * (n + 1))
            if idx == 0:
                mat[n][n] = gamma
        n += 1
    shift = frac(rng.randint(-3, 3), rng.randint(1, 3))
    for i in range(n):
        mats[0][i][i] += shift
    lower = [[frac(int(i == j)) for j in range(n)] for i in range(n)]
    upper = [[frac(int(i == j)) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            lower[i][j] = frac(rng.randint(-2, 2))
            upper[j][i] = frac(rng.randint(-2, 2))
    p = mat_mul(RatMatrix(n, lower), RatMatrix(n, upper))
    pinv = mat_inverse(p)
    ops = []
    for mat in mats:
        conj = mat_mul(mat_mul(p, RatMatrix(n, mat)), pinv)
        ops.append(MatrixOp(conj.rows))
    M = BrModuleDesc(
        r, FiniteDim(n), tuple(ops), name=f"matrix-br(r={r},dim={n})"
    )
    report = validate_br_module(M, n)
    if not report.ok:
        raise AssertionError("randomly generated module failed validation")
    return M


# ---------------------------------------------------------------------------
# top-generator dichotomy


class DrDichotomy(Enum):
    ZERO = "Zero"
    INJECTIVE_ON_WINDOW = "InjectiveOnWindow"
    MIXED = "Mixed"


def dr_dichotomy(M: BrModuleDesc, window: int) -> DrDichotomy:
    """Classify the top generator's action on a window of basis vectors.

    For an irreducible module the top generator acts as zero or acts
    bijectively, so a Mixed outcome is evidence of reducibility.
    """
    keys = M.window_keys(window)
    images = [M.apply(M.rank, M.basis(k)) for k in keys]
    if not any(images):
        return DrDichotomy.ZERO
    support = sorted({k for img in images for k in img.support()})
    index = {k: i for i, k in enumerate(support)}
    cols = []
    for img in images:
        col = [ZERO] * len(support)
        for k, c in img.items():
            col[index[k]] = c
        cols.append(col)
    mat = RatMatrix(len(keys), list(map(tuple, zip(*cols))))
    if nullspace(mat):
        return DrDichotomy.MIXED
    return DrDichotomy.INJECTIVE_ON_WINDOW
