"""Exact scalars, dense polynomials, sparse indexed vectors, and rational
linear algebra.

Everything in this module is pure and exact: scalars are
arbitrary-precision rationals (gmpy2's mpq when available, stdlib
Fraction otherwise; both are always in lowest terms with positive
denominator), there is no floating point anywhere, and row reduction is
plain rational Gaussian elimination with first-nonzero pivoting, so
reduced bases are canonical and runs are reproducible.
"""

from __future__ import annotations

import numbers
import re
from collections.abc import Mapping
from fractions import Fraction
from typing import Iterable, Sequence

try:
    from gmpy2 import mpq as _mpq

    def frac(a=0, b=1):
        return _mpq(a, b)

    Rational = type(_mpq())
except ImportError:  # pragma: no cover - exercised only without gmpy2

    def frac(a=0, b=1):
        return Fraction(a, b)

    Rational = Fraction

_RATIONAL_RE = re.compile(r"[+-]?\d+(?:/\d+)?")

ZERO = frac(0)
ONE = frac(1)


def rat(x):
    """Coerce an int, a "p/q" string, or any exact rational to the scalar type.

    Floats are rejected: nothing in this package is allowed to round.
    """
    if isinstance(x, numbers.Rational):
        return frac(x)
    if isinstance(x, str):
        s = x.strip()
        if not _RATIONAL_RE.fullmatch(s):
            raise ValueError(f"not an exact rational literal: {x!r}")
        num, _, den = s.partition("/")
        return frac(int(num), int(den)) if den else frac(int(num))
    raise TypeError(f"exact scalar expected, got {type(x).__name__}: {x!r}")


class Poly:
    """Dense univariate polynomial over Fraction.

    ``coeffs[k]`` is the coefficient of the k-th power.  The zero
    polynomial is the empty tuple and there is never a trailing zero
    coefficient, so equality of values is equality of representations.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple = tuple(cs)

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((rat(c),))

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        if k < 0:
            raise ValueError("monomial power must be nonnegative")
        return cls((0,) * k + (rat(c),))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            return ZERO
        return self.coeffs[-1]

    def coeff(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return ZERO

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Poly):
            if not self.coeffs or not other.coeffs:
                return Poly()
            out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if not a:
                    continue
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
            return Poly(out)
        c = rat(other)
        return Poly(tuple(c * a for a in self.coeffs))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, point):
        """Exact evaluation by Horner's rule."""
        p = rat(point)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * p + c
        return acc

    def shift(self, m) -> "Poly":
        return poly_shift(self, m)

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)!r})"


def poly_shift(f: Poly, m) -> Poly:
    """Substitute t - m for the variable of ``f`` and expand.

    Degree and leading coefficient are preserved.
    """
    tm = Poly((-rat(m), ONE))
    out = Poly()
    for c in reversed(f.coeffs):
        out = out * tm + Poly.const(c)
    return out


def poly_divmod_linear(f: Poly, root) -> tuple[Poly, Fraction]:
    """Exact synthetic division of ``f`` by the monic linear (t - root).

    Returns (quotient, remainder); the remainder equals f(root).
    """
    r = rat(root)
    q: list = []
    acc = ZERO
    for c in reversed(f.coeffs):
        acc = acc * r + c
        q.append(acc)
    rem = q.pop() if q else ZERO
    return Poly(reversed(q)), rem


class Vec:
    """Finitely supported map from index keys to nonzero Fractions.

    Keys are ints or (nested) tuples of ints; within a given module they
    are homogeneous, so the canonical sorted order used by :meth:`items`
    is total.  Zero entries are never stored.
    """

    __slots__ = ("_d",)

    def __init__(self, entries=()):
        d = {}
        it = entries.items() if isinstance(entries, Mapping) else entries
        for k, c in it:
            c = rat(c)
            if c:
                d[k] = d.get(k, ZERO) + c
                if not d[k]:
                    del d[k]
        self._d: dict = d

    @classmethod
    def _raw(cls, d: dict) -> "Vec":
        # internal fast path: d must already map keys to nonzero Fractions
        v = cls.__new__(cls)
        v._d = d
        return v

    @classmethod
    def basis(cls, key, c=1) -> "Vec":
        return cls(((key, rat(c)),))

    def items(self) -> list:
        return sorted(self._d.items())

    def iter_items(self):
        """Unsorted view for order-insensitive accumulation loops."""
        return self._d.items()

    def support(self) -> list:
        return sorted(self._d)

    def __getitem__(self, key):
        return self._d.get(key, ZERO)

    def __contains__(self, key) -> bool:
        return key in self._d

    def __len__(self) -> int:
        return len(self._d)

    def __bool__(self) -> bool:
        return bool(self._d)

    def __eq__(self, other) -> bool:
        return isinstance(other, Vec) and self._d == other._d

    def __neg__(self) -> "Vec":
        return Vec._raw({k: -c for k, c in self._d.items()})

    def __add__(self, other: "Vec") -> "Vec":
        if not other._d:
            return self
        d = dict(self._d)
        for k, c in other._d.items():
            s = d.get(k)
            if s is None:
                d[k] = c
            elif s + c:
                d[k] = s + c
            else:
                del d[k]
        return Vec._raw(d)

    def __sub__(self, other: "Vec") -> "Vec":
        if not other._d:
            return self
        d = dict(self._d)
        for k, c in other._d.items():
            s = d.get(k)
            if s is None:
                d[k] = -c
            elif s - c:
                d[k] = s - c
            else:
                del d[k]
        return Vec._raw(d)

    def __mul__(self, other):
        c = rat(other)
        if not c:
            return Vec()
        return Vec._raw({k: c * a for k, a in self._d.items()})

    __rmul__ = __mul__

    def add_scaled_into(self, acc: dict, scale) -> None:
        """Accumulate scale * self into a plain dict (hot-loop helper)."""
        for k, c in self._d.items():
            s = acc.get(k)
            v = c * scale
            if s is None:
                acc[k] = v
            elif s + v:
                acc[k] = s + v
            else:
                del acc[k]

    def __repr__(self) -> str:
        return f"Vec({self.items()!r})"


# The concrete element aliases used across the package: Laurent-type
# elements, carrier elements of a B_r-module description, and elements of
# a tensor module are all finitely supported exact vectors.
LaurentVec = Vec
BrElement = Vec
FElement = Vec


def kron(a: Vec, b: Vec) -> Vec:
    """Tensor of two keyed vectors: keys are pairs, coefficients multiply."""
    out = {}
    for ka, ca in a._d.items():
        for kb, cb in b._d.items():
            out[(ka, kb)] = ca * cb
    return Vec._raw(out)


class RatMatrix:
    """Immutable exact matrix with Fraction entries, stored row-major."""

    __slots__ = ("cols", "rows")

    def __init__(self, cols: int, rows: Iterable[Sequence] = ()):
        if cols < 0:
            raise ValueError("cols must be nonnegative")
        self.cols = cols
        rws = []
        for row in rows:
            row = tuple(rat(c) for c in row)
            if len(row) != cols:
                raise ValueError(f"row length {len(row)} != cols {cols}")
            rws.append(row)
        self.rows: tuple = tuple(rws)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def rank(self) -> int:
        return len(rref(self).rows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RatMatrix)
            and self.cols == other.cols
            and self.rows == other.rows
        )

    def __repr__(self) -> str:
        return f"RatMatrix(cols={self.cols}, rows={len(self.rows)})"


def rref(mat: RatMatrix) -> RatMatrix:
    """Canonical reduced row echelon form.

    First-nonzero pivoting, pivots normalized to 1, eliminated above and
    below, zero rows dropped.  The output depends only on the row space.
    """
    rows = [list(r) for r in mat.rows]
    out: list[list[Fraction]] = []
    pivots: list[int] = []
    for row in rows:
        row = _reduce_against(row, out, pivots)
        p = _first_nonzero(row)
        if p is None:
            continue
        inv = 1 / row[p]
        row = [c * inv for c in row]
        for other in out:
            if other[p]:
                f = other[p]
                for j in range(p, len(row)):
                    other[j] -= f * row[j]
        at = 0
        while at < len(pivots) and pivots[at] < p:
            at += 1
        out.insert(at, row)
        pivots.insert(at, p)
    return RatMatrix(mat.cols, out)


def _first_nonzero(row: Sequence):
    for j, c in enumerate(row):
        if c:
            return j
    return None


def _reduce_against(row, basis_rows, pivots):
    row = list(row)
    for brow, p in zip(basis_rows, pivots):
        if row[p]:
            f = row[p]
            for j in range(p, len(row)):
                row[j] -= f * brow[j]
    return row


def span_insert(basis: RatMatrix, v: Sequence) -> tuple[RatMatrix, bool]:
    """Insert ``v`` into a canonical RREF span basis.

    Returns the reduced basis of span(basis + {v}) and whether ``v`` was
    outside the old row space.  ``basis`` must already be in canonical
    RREF (as produced by this function or by :func:`rref`).
    """
    v = [rat(c) for c in v]
    if len(v) != basis.cols:
        raise ValueError(f"vector length {len(v)} != basis cols {basis.cols}")
    rows = [list(r) for r in basis.rows]
    pivots = [_first_nonzero(r) for r in rows]
    red = _reduce_against(v, rows, pivots)
    p = _first_nonzero(red)
    if p is None:
        return basis, False
    inv = 1 / red[p]
    red = [c * inv for c in red]
    for row in rows:
        if row[p]:
            f = row[p]
            for j in range(p, len(red)):
                row[j] -= f * red[j]
    at = 0
    while at < len(pivots) and pivots[at] < p:
        at += 1
    rows.insert(at, red)
    return RatMatrix(basis.cols, rows), True


def row_space_contains(basis: RatMatrix, v: Sequence) -> bool:
    _, was_new = span_insert(basis, v)
    return not was_new


def nullspace(mat: RatMatrix) -> list[tuple]:
    """Basis of the right kernel, one vector per free column."""
    r = rref(mat)
    pivots = [_first_nonzero(row) for row in r.rows]
    pivot_set = set(pivots)
    free = [j for j in range(mat.cols) if j not in pivot_set]
    out = []
    for fcol in free:
        v = [ZERO] * mat.cols
        v[fcol] = ONE
        for row, p in zip(r.rows, pivots):
            v[p] = -row[fcol]
        out.append(tuple(v))
    return out


def mat_inverse(mat: RatMatrix) -> RatMatrix:
    """Exact inverse of a square matrix; raises on singular input."""
    n = mat.cols
    if len(mat.rows) != n:
        raise ValueError("inverse of a non-square matrix")
    aug = RatMatrix(2 * n, [row + tuple(frac(int(i == j)) for j in range(n))
                            for i, row in enumerate(mat.rows)])
    red = rref(aug)
    if len(red.rows) != n or any(_first_nonzero(r) != i for i, r in enumerate(red.rows)):
        raise ValueError("singular matrix")
    return RatMatrix(n, [row[n:] for row in red.rows])


def mat_mul(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    if a.cols != b.nrows:
        raise ValueError("shape mismatch")
    bt = list(zip(*b.rows)) if b.rows else [[] for _ in range(b.cols)]
    rows = []
    for ra in a.rows:
        rows.append(tuple(sum(x * y for x, y in zip(ra, col)) for col in bt))
    return RatMatrix(b.cols, rows)


def lagrange_basis(nodes: Sequence) -> list[Poly]:
    """Exact Lagrange basis polynomials for distinct nodes."""
    pts = [rat(x) for x in nodes]
    if len(set(pts)) != len(pts):
        raise ValueError("interpolation nodes must be distinct")
    out = []
    for i, xi in enumerate(pts):
        num = Poly.const(1)
        den = ONE
        for j, xj in enumerate(pts):
            if i == j:
                continue
            num = num * Poly((-xj, 1))
            den *= xi - xj
        out.append(num * (1 / den))
    return out


def interpolated_coefficient(samples: Sequence[tuple], power: int):
    """Coefficient of ``k**power`` of the polynomial through ``samples``.

    ``samples`` is a sequence of (node, value) pairs whose values live in
    any exact linear space (Vec, Poly, Fraction).  The underlying
    dependence on the node must be polynomial of degree < len(samples);
    with that guarantee the returned coefficient is exact.
    """
    if power >= len(samples):
        raise ValueError(
            f"need at least {power + 1} samples to read the k^{power} coefficient"
        )
    basis = lagrange_basis([n for n, _ in samples])
    acc = None
    for (_, val), lag in zip(samples, basis):
        term = lag.coeff(power) * val
        acc = term if acc is None else acc + term
    return acc


def small_fractions(lo=-9, hi=9, dmax=4):
    """Deterministic list of small rationals, for sweep-style tests."""
    seen = set()
    out = []
    for den in range(1, dmax + 1):
        for num in range(lo, hi + 1):
            q = frac(num, den)
            if q not in seen:
                seen.add(q)
                out.append(q)
    return out
