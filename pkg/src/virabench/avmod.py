"""The concrete Virasoro/Laurent module families over exact rationals.

Two classical families carry both a Virasoro action (operators d_m) and a
Laurent multiplication action (operators x^m), with the central element
acting as zero:

* Omega(lambda, beta): polynomials in t, with
      d_m f = lambda^m (t - beta*m) f(t - m),
      x^m f = lambda^m f(t - m).
* A(alpha, beta): Laurent basis x^n, with
      d_m x^n = (n + alpha + beta*m) x^{n+m},
      x^m x^n = x^{n+m}.

The mode operator g(m) = x^{-m} d_m is always computed as that literal
composite (d_m first), never through a closed form, so the identities the
composite is supposed to satisfy are exercised on the actual definition.

The shifted factorial basis h_m^n = prod_{j=m+1}^{m+n} (t - j) of Q[t] and
its exact change-of-basis round trip also live here.
"""

from __future__ import annotations

from dataclasses import dataclass
from .exact import ONE, ZERO, Poly, Vec, frac, poly_shift, rat


@dataclass(frozen=True)
class Caps:
    """Window sizes for basis sweeps and probes.

    ``inner`` caps the t-degree of polynomial elements (or the absolute
    Laurent index); ``carrier`` caps the x-degree of a polynomial carrier
    in a module description.
    """

    inner: int = 5
    carrier: int = 5


class OmegaModule:
    """Q[t] with the rank-one free action of the zero mode.

    Elements are :class:`Poly`; basis keys are t-degrees.  The scaling
    constant must be nonzero so that every power lambda^m exists.
    """

    def __init__(self, lam, beta):
        self.lam = rat(lam)
        self.beta = rat(beta)
        if not self.lam:
            raise ValueError("the scaling constant must be nonzero")
        self._shift_pows: dict[tuple[int, int], Poly] = {}
        self._dcache: dict[tuple[int, int], Poly] = {}

    def _shifted_power(self, m: int, k: int) -> Poly:
        # (t - m)^k, cached; the workhorse of both actions on basis monomials
        try:
            return self._shift_pows[(m, k)]
        except KeyError:
            p = Poly((-frac(m), ONE)) ** k
            self._shift_pows[(m, k)] = p
            return p

    def d(self, m: int, f: Poly) -> Poly:
        out = Poly()
        for k, c in enumerate(f.coeffs):
            if not c:
                continue
            try:
                base = self._dcache[(m, k)]
            except KeyError:
                lin = Poly((-self.beta * m, ONE))
                base = (self.lam ** m) * (lin * self._shifted_power(m, k))
                self._dcache[(m, k)] = base
            out = out + c * base
        return out

    def x(self, m: int, f: Poly) -> Poly:
        scale = self.lam ** m
        out = Poly()
        for k, c in enumerate(f.coeffs):
            if c:
                out = out + (c * scale) * self._shifted_power(m, k)
        return out

    def g(self, m: int, f: Poly) -> Poly:
        return self.x(-m, self.d(m, f))

    def c(self, f: Poly) -> Poly:
        return Poly()

    def zero(self) -> Poly:
        return Poly()

    def basis(self, key: int) -> Poly:
        return Poly.monomial(key)

    def coords(self, f: Poly) -> Vec:
        return Vec((k, c) for k, c in enumerate(f.coeffs) if c)

    def from_coords(self, coords) -> Poly:
        items = coords.items() if isinstance(coords, Vec) else coords
        out = Poly()
        for k, c in items:
            out = out + Poly.monomial(k, c)
        return out

    def window_keys(self, caps: Caps) -> tuple:
        return tuple(range(caps.inner + 1))

    def describe(self) -> str:
        from .grammar import format_rational

        return f"Omega({format_rational(self.lam)},{format_rational(self.beta)})"


class AModule:
    """Laurent basis x^n with the intermediate-series action.

    Elements are keyed vectors over integer indices; the module action
    shifts support by m and never grows it.
    """

    def __init__(self, alpha, beta):
        self.alpha = rat(alpha)
        self.beta = rat(beta)

    def d(self, m: int, v: Vec) -> Vec:
        return Vec(
            (n + m, c * (n + self.alpha + self.beta * m)) for n, c in v.items()
        )

    def x(self, m: int, v: Vec) -> Vec:
        return Vec((n + m, c) for n, c in v.items())

    def g(self, m: int, v: Vec) -> Vec:
        return self.x(-m, self.d(m, v))

    def c(self, v: Vec) -> Vec:
        return Vec()

    def zero(self) -> Vec:
        return Vec()

    def basis(self, key: int) -> Vec:
        return Vec.basis(key)

    def coords(self, v: Vec) -> Vec:
        return v

    def from_coords(self, coords) -> Vec:
        return coords if isinstance(coords, Vec) else Vec(coords)

    def window_keys(self, caps: Caps) -> tuple:
        return tuple(range(-caps.inner, caps.inner + 1))

    def describe(self) -> str:
        from .grammar import format_rational

        return f"A({format_rational(self.alpha)},{format_rational(self.beta)})"


def g_of(module, m: int, v):
    """The mode operator as the literal composite x^{-m} after d_m."""
    return module.x(-m, module.d(m, v))


# ---------------------------------------------------------------------------
# shifted factorial basis


def h_poly(m: int, n: int) -> Poly:
    """h_m^n = (t - (m+1)) (t - (m+2)) ... (t - (m+n)); h_m^0 = 1.

    Monic of degree n for every anchor m.
    """
    if n < 0:
        raise ValueError("h basis index must be nonnegative")
    out = Poly.const(1)
    for j in range(m + 1, m + n + 1):
        out = out * Poly((-frac(j), ONE))
    return out


@dataclass(frozen=True)
class HBasisCoords:
    """Coordinates of a polynomial in the h basis anchored at ``anchor``."""

    anchor: int
    coords: tuple


def to_h_basis(f: Poly, m: int) -> HBasisCoords:
    """Exact expansion of f in the h basis anchored at m.

    Greedy top-down elimination works because h_m^n is monic of degree n.
    """
    coords = [ZERO] * (f.degree + 1 if f else 0)
    rem = f
    while rem:
        n = rem.degree
        c = rem.leading
        coords[n] = c
        rem = rem - c * h_poly(m, n)
    return HBasisCoords(m, tuple(coords))


def from_h_basis(c: HBasisCoords) -> Poly:
    out = Poly()
    for n, coef in enumerate(c.coords):
        if coef:
            out = out + coef * h_poly(c.anchor, n)
    return out
