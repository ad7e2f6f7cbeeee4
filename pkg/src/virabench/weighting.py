"""The weighting construction: turn zero-mode-free modules into weight
modules by passing to quotients along d_0 - n.

For the polynomial module Omega(lambda, beta) the zero mode acts as
multiplication by t, so the ideal generated by d_0 - n cuts out
(t - n) Q[t] and the quotient at integer n is one dimensional, realized
by evaluation at t = n.  Collecting the quotients over all integers gives
a weight module whose action table, after rescaling the class of 1 at
weight n by lambda^n, is free of lambda:

    d_m : weight n -> weight n+m with coefficient n + m (1 - beta),

which is exactly the Laurent-basis table of A(0, 1 - beta).  The same
construction applied to a tensor module F(M, Omega(lambda, beta)) lands
on F(M, A(0, 1 - beta)), coordinate for coordinate.

Everything here is computed through the module operators plus exact
evaluation; the closed forms above are used only by the test suites as
independent oracles.
"""

from __future__ import annotations

from dataclasses import dataclass

from .avmod import AModule, OmegaModule
from .bralg import BrModuleDesc
from .exact import ZERO, Poly, Vec, kron, poly_divmod_linear, rat
from .fmod import FModule


def weight_quotient_omega(W: OmegaModule, n: int):
    """Quotient map of Omega by the ideal generated by d_0 - n.

    The returned functional sends f to its class coordinate against the
    class of 1; concretely it is exact evaluation at t = n, with kernel
    (t - n) Q[t].
    """

    def functional(f: Poly):
        return f(n)

    return functional


def omega_quotient_dim_is_one(W: OmegaModule, n: int, degree_cap: int) -> bool:
    """Exact-division check that the quotient at n is one dimensional.

    Every monomial t^k must differ from n^k * 1 by a multiple of (t - n),
    verified by synthetic division with exact zero remainder.
    """
    for k in range(degree_cap + 1):
        f = Poly.monomial(k) - Poly.const(rat(n) ** k)
        _, rem = poly_divmod_linear(f, n)
        if rem:
            return False
    return True


def weighted_action_omega(W: OmegaModule, m: int, n: int, rescaled: bool = False):
    """Coefficient of the weighted action from weight n to weight n + m.

    Computed through the actual module operator on the class of 1
    followed by the quotient map, never from a closed form.  With
    ``rescaled`` the classes are renormalized by lambda^n, which removes
    every power of lambda from the table.
    """
    image = W.d(m, Poly.const(1))
    coeff = weight_quotient_omega(W, n + m)(image)
    if rescaled:
        coeff *= W.lam ** (-m)
    return coeff


def omega_weight_table(W: OmegaModule, window: int, rescaled: bool = True) -> dict:
    return {
        (m, n): weighted_action_omega(W, m, n, rescaled=rescaled)
        for m in range(-window, window + 1)
        for n in range(-window, window + 1)
    }


def a_action_table(A: AModule, window: int) -> dict:
    """Laurent-basis action coefficients of d_m on x^n, read off the module op."""
    table = {}
    for m in range(-window, window + 1):
        for n in range(-window, window + 1):
            img = A.d(m, Vec.basis(n))
            for key in img.support():
                if key != n + m:
                    raise AssertionError("Laurent action left its diagonal line")
            table[(m, n)] = img[n + m]
    return table


def weight_f_action(F: FModule, m: int, n: int, v: Vec, rescaled: bool = True) -> Vec:
    """Weighted action on a tensor module with polynomial inner part.

    The class of v (x) 1 at weight n is acted on by d_m and reduced at
    weight n + m by evaluating every inner coordinate polynomial at
    t = n + m.  Returns the resulting element of the weight module as a
    keyed vector over (carrier key, n + m).
    """
    inner = F.inner
    if not isinstance(inner, OmegaModule):
        raise ValueError("weighting is implemented for polynomial inner modules")
    e = kron(v, Vec.basis(0))  # v (x) 1 in product coordinates
    de = F.d(m, e)
    carrier = {}
    for (bk, tdeg), c in de.items():
        carrier[bk] = carrier.get(bk, ZERO) + c * rat(n + m) ** tdeg
    out = Vec(carrier.items())
    if rescaled:
        out = (inner.lam ** (-m)) * out
    return kron(out, Vec.basis(n + m))


def weight_f_table(F: FModule, window: int, carrier_cap: int) -> dict:
    """Rescaled weighted-action operators of a tensor module, one per (m, n).

    Each entry maps every carrier window key to the image carrier element
    at weight n + m.
    """
    keys = F.br.window_keys(carrier_cap)
    table = {}
    for m in range(-window, window + 1):
        for n in range(-window, window + 1):
            cols = {}
            for bk in keys:
                img = weight_f_action(F, m, n, Vec.basis(bk))
                cols[bk] = Vec((k0, c) for (k0, _), c in img.items())
            table[(m, n)] = cols
    return table


def f_over_a_counterpart(F: FModule) -> FModule:
    """The weight module the construction should land on: F(M, A(0, 1 - beta))."""
    inner = F.inner
    if not isinstance(inner, OmegaModule):
        raise ValueError("weighting is implemented for polynomial inner modules")
    return FModule(F.br, AModule(0, 1 - inner.beta))


def render_table(table: dict) -> str:
    """Deterministic line-oriented rendering of an action table."""
    from .grammar import format_rational

    lines = []
    for key in sorted(table):
        val = table[key]
        if not isinstance(val, dict):
            lines.append(f"m={key[0]} n={key[1]}: {format_rational(val)}")
        else:
            cols = []
            for bk in sorted(val):
                img = val[bk]
                entries = ",".join(
                    f"{k}:{format_rational(c)}" for k, c in img.items()
                )
                cols.append(f"{bk}->[{entries}]")
            lines.append(f"m={key[0]} n={key[1]}: " + " ".join(cols))
    return "\n".join(lines)


@dataclass
class LambdaInvarianceReport:
    module: str
    beta: object
    lambdas: tuple
    window: int
    tables: dict  # lambda -> rendered table
    identical: bool

    @property
    def canonical(self) -> str:
        return self.tables[self.lambdas[0]]


def lambda_invariance_report(
    M: BrModuleDesc | None,
    beta,
    lambdas,
    window: int = 5,
    carrier_cap: int = 4,
) -> LambdaInvarianceReport:
    """Rescaled weighted-action tables across a list of scaling constants.

    With ``M`` None the plain polynomial module is weighted; otherwise the
    tensor module F(M, Omega(lambda, beta)).  The rescaled tables must be
    identical across lambdas, while changing beta moves some entry.
    """
    beta = rat(beta)
    lambdas = tuple(rat(x) for x in lambdas)
    tables = {}
    for lam in lambdas:
        W = OmegaModule(lam, beta)
        if M is None:
            tables[lam] = render_table(omega_weight_table(W, window))
        else:
            tables[lam] = render_table(
                weight_f_table(FModule(M, W), window, carrier_cap)
            )
    first = tables[lambdas[0]]
    identical = all(tables[lam] == first for lam in lambdas)
    name = "Omega" if M is None else f"F({M.describe()},Omega)"
    return LambdaInvarianceReport(name, beta, lambdas, window, tables, identical)
