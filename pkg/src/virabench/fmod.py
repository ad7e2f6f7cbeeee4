"""Tensor modules F(M, W): a B_r-module description tensored with a module
that carries both the Virasoro and the Laurent action.

On a pure tensor v (x) w the structure is

    x^m (v (x) w) = v (x) x^m w,
    d_m (v (x) w) = v (x) d_m w + (g(m) v) (x) x^m w,
    c = 0,

where g(m) v is the polynomial mode action of the B_r description.
Elements are kept in coordinates against the deterministic product basis
(carrier key major, inner key minor), so equality is decidable and exact.
Nesting is allowed to arbitrary depth; :func:`flatten` removes one level
at a time by re-associating coordinates onto a tensor-product carrier.
"""

from __future__ import annotations

import math

from .avmod import AModule, Caps, OmegaModule
from .bralg import BrModuleDesc, br_g_action, tensor_br, validate_br_module
from .exact import Vec, frac, kron, rat


class FModule:
    """The tensor module built from a B_r description and an inner module.

    The description must carry a validation certificate; if it does not,
    it is checked here on a default window and construction fails loudly
    on a bad description.
    """

    def __init__(self, br: BrModuleDesc, inner):
        if br.validation is None:
            report = validate_br_module(br, 6)
            if not report.ok:
                w = report.witnesses[0]
                raise ValueError(
                    f"module description {br.describe()} fails the bracket "
                    f"relations at (i={w.i}, j={w.j}, key={w.key})"
                )
        self.br = br
        self.inner = inner
        self._dcache: dict[tuple[int, object], Vec] = {}
        self._xcache: dict[tuple[int, object], Vec] = {}

    def _d_basis(self, m: int, key) -> Vec:
        try:
            return self._dcache[(m, key)]
        except KeyError:
            bk, ik = key
            v = Vec.basis(bk)
            w = self.inner.basis(ik)
            dw = self.inner.coords(self.inner.d(m, w))
            xw = self.inner.coords(self.inner.x(m, w))
            out = kron(v, dw) + kron(br_g_action(self.br, m, v), xw)
            self._dcache[(m, key)] = out
            return out

    def _x_basis(self, m: int, key) -> Vec:
        try:
            return self._xcache[(m, key)]
        except KeyError:
            bk, ik = key
            xw = self.inner.coords(self.inner.x(m, self.inner.basis(ik)))
            out = kron(Vec.basis(bk), xw)
            self._xcache[(m, key)] = out
            return out

    def d(self, m: int, e: Vec) -> Vec:
        acc: dict = {}
        for key, c in e.iter_items():
            self._d_basis(m, key).add_scaled_into(acc, c)
        return Vec._raw(acc)

    def x(self, m: int, e: Vec) -> Vec:
        acc: dict = {}
        for key, c in e.iter_items():
            self._x_basis(m, key).add_scaled_into(acc, c)
        return Vec._raw(acc)

    def g(self, m: int, e: Vec) -> Vec:
        return self.x(-m, self.d(m, e))

    def c(self, e: Vec) -> Vec:
        return Vec()

    def zero(self) -> Vec:
        return Vec()

    def basis(self, key) -> Vec:
        return Vec.basis(key)

    def coords(self, e: Vec) -> Vec:
        return e

    def from_coords(self, coords) -> Vec:
        return coords if isinstance(coords, Vec) else Vec(coords)

    def window_keys(self, caps: Caps) -> tuple:
        return tuple(
            (bk, ik)
            for bk in self.br.window_keys(caps.carrier)
            for ik in self.inner.window_keys(caps)
        )

    def tensor(self, v: Vec, w) -> Vec:
        """Pure tensor of a carrier element and an inner element."""
        return kron(v, self.inner.coords(w))

    def describe(self) -> str:
        return f"F({self.br.describe()},{self.inner.describe()})"


def flatten(F1: FModule) -> tuple[FModule, object]:
    """Remove one level of nesting: F(M1, F(M2, W)) -> F(M1 (x) M2, W).

    Returns the flat module and the coordinate re-association map
    (a1, (a2, wk)) -> ((a1, a2), wk), which must intertwine both actions.
    """
    if not isinstance(F1.inner, FModule):
        raise ValueError("flatten needs a nested tensor module")
    if F1.br.rank != F1.inner.br.rank:
        raise ValueError("flatten needs equal ranks on both levels")
    flat = FModule(tensor_br(F1.br, F1.inner.br), F1.inner.inner)

    def reassociate(e: Vec) -> Vec:
        return Vec((((a, b), wk), c) for (a, (b, wk)), c in e.items())

    return flat, reassociate


def f_weight_action(F: FModule, m: int, e: Vec) -> Vec:
    """Direct single-tensor action when the inner module has a weight basis.

    For an inner Laurent module the action collapses to
        d_m (v (x) x^n) = ((n + alpha + beta*m) v + g(m) v) (x) x^{n+m},
    evaluated here from scratch (the polynomial mode sum is written out
    inline) as an independent cross-check of the generic composite.
    """
    inner = F.inner
    if not isinstance(inner, AModule):
        raise ValueError("weight-basis action needs a Laurent inner module")
    out = Vec()
    for (bk, n), c in e.items():
        v = Vec.basis(bk)
        acted = (n + inner.alpha + inner.beta * m) * v
        for i in range(F.br.rank + 1):
            coef = frac(m ** (i + 1), math.factorial(i + 1))
            if coef:
                acted = acted + coef * F.br.ops[i](v)
        out = out + c * kron(acted, Vec.basis(n + m))
    return out


def weight_evidence(module, caps: Caps, samples=(0, 1, -1, "1/2")):
    """Window-scale weight-module evidence for the zero-mode action.

    Returns ("weight", detail) when the zero mode acts diagonally on the
    window basis, ("non-weight", detail) when d_0 - a has no kernel on the
    window for every sampled scalar a, and ("indeterminate", detail) if an
    eigenvector exists without the action being diagonal.
    """
    keys = module.window_keys(caps)
    diagonal = True
    eigs = {}
    for key in keys:
        img = module.coords(module.d(0, module.basis(key)))
        supp = img.support()
        if supp not in ([], [key]):
            diagonal = False
            break
        eigs[key] = img[key]
    if diagonal:
        return "weight", {"eigenvalues": eigs}
    from .exact import RatMatrix, nullspace

    key_list = list(keys)
    for a in samples:
        a = rat(a)
        support: dict = {}
        cols = []
        for key in key_list:
            img = module.coords(module.d(0, module.basis(key))) - a * Vec.basis(key)
            cols.append(img)
            for k in img.support():
                support.setdefault(k, len(support))
        rows = [[frac(0)] * len(key_list) for _ in range(len(support))]
        for jcol, img in enumerate(cols):
            for k, cval in img.items():
                rows[support[k]][jcol] = cval
        if nullspace(RatMatrix(len(key_list), list(map(tuple, rows)))):
            return "indeterminate", {"kernel_at": a}
    return "non-weight", {"injective_shifts": list(samples)}
