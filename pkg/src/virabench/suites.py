"""Named identity suites, runnable individually or en masse.

Every suite checks an operator identity exhaustively over a mode window
and a basis window, to exact equality.  A failing instance never aborts
the run; it is recorded with a full witness (operator indices, the basis
element, both sides in canonical form, and a command line that reruns the
offending suite).

The shipped runs sweep a fixed list of six rational parameter tuples
(lambda, beta, alpha, gamma), including the reducibility boundary values
beta in {0, 1}; determinism is preferred over random fuzzing so reports
diff cleanly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from random import Random

from .avmod import AModule, Caps, OmegaModule, h_poly
from .bralg import (
    BrModuleDesc,
    br_g_action,
    make_m_gamma,
    make_shift_module_b1,
    random_matrix_module,
    tensor_br,
)
from .exact import Poly, Vec, rat
from .fmod import FModule, f_weight_action, flatten
from .weighting import (
    a_action_table,
    f_over_a_counterpart,
    omega_weight_table,
    weight_f_action,
)

PARAM_SWEEP: tuple[tuple[Fraction, Fraction, Fraction, Fraction], ...] = (
    (Fraction(1), Fraction(0), Fraction(0), Fraction(0)),
    (Fraction(1), Fraction(1), Fraction(1), Fraction(1)),
    (Fraction(2), Fraction(3), Fraction(1, 2), Fraction(2)),
    (Fraction(1, 3), Fraction(-1, 2), Fraction(-1), Fraction(1, 3)),
    (Fraction(2), Fraction(1), Fraction(0), Fraction(-1, 2)),
    (Fraction(5, 2), Fraction(2, 3), Fraction(3, 4), Fraction(-2)),
)

SUITE_IDS = ("bracket", "av", "g", "gm", "flatten", "h", "weighting")


@dataclass
class Failure:
    op: str
    lhs: str
    rhs: str
    witness: str
    repro: str


@dataclass
class SuiteResult:
    suite: str
    module: str
    window: int
    params: dict
    checks: int = 0
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, ok: bool, op: str, fmt, lhs, rhs, witness: str):
        """Count a check; on failure, render both sides with ``fmt``.

        Formatting is deferred to the failing case so that exhaustive
        passing runs never pay for string building.
        """
        self.checks += 1
        if not ok:
            repro = f"virabench verify {self.suite} --window {self.window} --json"
            self.failures.append(Failure(op, fmt(lhs), fmt(rhs), witness, repro))


def _fmt(module):
    from .grammar import format_element

    return lambda e: format_element(module, e)


def _basis_elements(module, caps: Caps):
    return [(key, module.basis(key)) for key in module.window_keys(caps)]


# ---------------------------------------------------------------------------
# suites on modules carrying both actions


def suite_virasoro_bracket(module, window: int = 4, caps: Caps = Caps()) -> SuiteResult:
    """[d_i, d_j] v = (j - i) d_{i+j} v, with the central element acting as 0."""
    res = SuiteResult("bracket", module.describe(), window, {})
    fmt = _fmt(module)
    for key, v in _basis_elements(module, caps):
        for i in range(-window, window + 1):
            d_i_v = module.d(i, v)
            for j in range(-window, window + 1):
                lhs = module.d(i, module.d(j, v)) - module.d(j, d_i_v)
                rhs = (j - i) * module.d(i + j, v)
                res.record(lhs == rhs, f"[d_{i},d_{j}]", fmt, lhs, rhs, f"basis {key}")
    return res


def suite_av_compat(module, window: int = 4, caps: Caps = Caps()) -> SuiteResult:
    """Derivation compatibility of the two actions:
    m x^{n+m} v = d_n x^m v - x^m d_n v."""
    res = SuiteResult("av", module.describe(), window, {})
    fmt = _fmt(module)
    for key, v in _basis_elements(module, caps):
        for n in range(-window, window + 1):
            dnv = module.d(n, v)
            for m in range(-window, window + 1):
                lhs = m * module.x(n + m, v)
                rhs = module.d(n, module.x(m, v)) - module.x(m, dnv)
                res.record(
                    lhs == rhs, f"compat m={m} n={n}", fmt, lhs, rhs, f"basis {key}"
                )
    return res


def suite_g(module, window: int = 4, caps: Caps = Caps()) -> SuiteResult:
    """The mode-operator laws, with g computed as the literal composite:

    * [g(m), g(k)] v = -k g(k) v + m g(m) v + (k - m) g(m+k) v,
    * g(m) x^n v - x^n g(m) v = n x^n v,
    * the reconstruction d_m v = x^m g(m) v.
    """
    res = SuiteResult("g", module.describe(), window, {})
    fmt = _fmt(module)
    for key, v in _basis_elements(module, caps):
        gs = {m: module.g(m, v) for m in range(-2 * window, 2 * window + 1)}
        for m in range(-window, window + 1):
            for k in range(-window, window + 1):
                lhs = module.g(m, gs[k]) - module.g(k, gs[m])
                rhs = -k * gs[k] + m * gs[m] + (k - m) * gs[m + k]
                res.record(
                    lhs == rhs, f"[g({m}),g({k})]", fmt, lhs, rhs, f"basis {key}"
                )
        for m in range(-window, window + 1):
            for n in range(-window, window + 1):
                lhs = module.g(m, module.x(n, v)) - module.x(n, gs[m])
                rhs = n * module.x(n, v)
                res.record(
                    lhs == rhs, f"g({m})x^{n} twist", fmt, lhs, rhs, f"basis {key}"
                )
            lhs = module.x(m, gs[m])
            rhs = module.d(m, v)
            res.record(
                lhs == rhs, f"d_{m} = x^{m} g({m})", fmt, lhs, rhs, f"basis {key}"
            )
    return res


def suite_gm_law(M: BrModuleDesc, window: int = 5, cap: int = 5) -> SuiteResult:
    """The polynomial mode action makes the description a module for the
    mode bracket: [g(m), g(k)] v = -k g(k) v + m g(m) v + (k - m) g(m+k) v."""
    res = SuiteResult("gm", M.describe(), window, {})

    def fmt(v: Vec) -> str:
        from .grammar import format_br_vec

        return format_br_vec(v)

    for key in M.window_keys(cap):
        v = M.basis(key)
        gs = {m: br_g_action(M, m, v) for m in range(-2 * window, 2 * window + 1)}
        for m in range(-window, window + 1):
            for k in range(-window, window + 1):
                lhs = br_g_action(M, m, gs[k]) - br_g_action(M, k, gs[m])
                rhs = -k * gs[k] + m * gs[m] + (k - m) * gs[m + k]
                res.record(
                    lhs == rhs, f"[g({m}),g({k})]", fmt, lhs, rhs, f"carrier key {key}"
                )
    return res


def suite_flatten(M1: BrModuleDesc, M2: BrModuleDesc, W, window: int = 4,
                  caps: Caps = Caps(inner=4, carrier=2)) -> SuiteResult:
    """The re-association map of a nested tensor module intertwines both
    actions with the flattened module, coordinate for coordinate."""
    nested = FModule(M1, FModule(M2, W))
    flat, reassoc = flatten(nested)
    res = SuiteResult(
        "flatten", f"{nested.describe()} ~ {flat.describe()}", window, {}
    )
    fmt = _fmt(flat)
    for key in nested.window_keys(caps):
        e = nested.basis(key)
        mapped = reassoc(e)
        for m in range(-window, window + 1):
            lhs = reassoc(nested.d(m, e))
            rhs = flat.d(m, mapped)
            res.record(lhs == rhs, f"map d_{m}", fmt, lhs, rhs, f"basis {key}")
            lhs = reassoc(nested.x(m, e))
            rhs = flat.x(m, mapped)
            res.record(lhs == rhs, f"map x^{m}", fmt, lhs, rhs, f"basis {key}")
    return res


def suite_h_identities(lam, beta, window: int = 4, nmax: int = 5) -> SuiteResult:
    """Anchored-factorial basis identities:

    * h_m^n - h_{m+1}^n = n h_{m+1}^{n-1},
    * d_m h_k^n = lambda^m (t - m beta) h_{k+m}^n,
    * x^m h_k^n = lambda^m h_{k+m}^n.
    """
    W = OmegaModule(lam, beta)
    res = SuiteResult("h", W.describe(), window, {"nmax": str(nmax)})
    from .grammar import format_poly

    for n in range(nmax + 1):
        for m in range(-window, window + 1):
            lhs = h_poly(m, n) - h_poly(m + 1, n)
            rhs = n * h_poly(m + 1, n - 1) if n else Poly()
            res.record(
                lhs == rhs, f"difference n={n} m={m}", format_poly,
                lhs, rhs, f"h_{m}^{n}",
            )
        for k in range(-window, window + 1):
            for m in range(-window, window + 1):
                scale = rat(lam) ** m
                lin = Poly((-rat(beta) * m, rat(1)))
                lhs = W.d(m, h_poly(k, n))
                rhs = scale * (lin * h_poly(k + m, n))
                res.record(
                    lhs == rhs, f"d_{m} h_{k}^{n}", format_poly, lhs, rhs, f"h_{k}^{n}"
                )
                lhs = W.x(m, h_poly(k, n))
                rhs = scale * h_poly(k + m, n)
                res.record(
                    lhs == rhs, f"x^{m} h_{k}^{n}", format_poly, lhs, rhs, f"h_{k}^{n}"
                )
    return res


def suite_weighting(lam, beta, window: int = 5, carrier_cap: int = 4) -> SuiteResult:
    """Weighted tables against the Laurent family they must reproduce.

    The rescaled table of the weighted polynomial module must equal the
    A(0, 1 - beta) table entry for entry, and the weighted tensor-module
    action must match the tensor module over A(0, 1 - beta) for both the
    one-dimensional and the shift carrier.
    """
    W = OmegaModule(lam, beta)
    res = SuiteResult("weighting", W.describe(), window, {})
    left = omega_weight_table(W, window)
    right = a_action_table(AModule(0, 1 - rat(beta)), window)
    from .grammar import format_rational

    for key in sorted(left):
        res.record(
            left[key] == right[key],
            f"table m={key[0]} n={key[1]}",
            format_rational, left[key], right[key],
            "weighted class of 1",
        )
    for M in (make_m_gamma(Fraction(1, 2)), make_shift_module_b1()):
        F = FModule(M, W)
        G = f_over_a_counterpart(F)
        fmt = _fmt(G)
        for bk in M.window_keys(carrier_cap):
            v = Vec.basis(bk)
            for m in range(-window, window + 1):
                for n in range(-window, window + 1):
                    lhs = weight_f_action(F, m, n, v)
                    rhs = G.d(m, G.tensor(v, Vec.basis(n)))
                    res.record(
                        lhs == rhs, f"tensor weighting m={m} n={n}", fmt, lhs, rhs,
                        f"{F.describe()} carrier key {bk}",
                    )
    return res


# ---------------------------------------------------------------------------
# shipped fixture runs


def sweep_modules(lam, beta, alpha, gamma) -> list:
    """The five module families exercised at one parameter tuple."""
    shift = make_shift_module_b1()
    return [
        OmegaModule(lam, beta),
        AModule(alpha, beta),
        FModule(make_m_gamma(gamma), OmegaModule(lam, beta)),
        FModule(shift, OmegaModule(lam, beta)),
        FModule(shift, AModule(alpha, beta)),
    ]


def gm_default_modules(gamma=Fraction(2)) -> list[BrModuleDesc]:
    shift = make_shift_module_b1()
    mods = [make_m_gamma(gamma), shift, tensor_br(shift, shift)]
    rng = Random(20260810)
    for i in range(10):
        mods.append(random_matrix_module(rng, 1 + i % 3))
    return mods


def flatten_default_configs() -> list[tuple[BrModuleDesc, BrModuleDesc, object]]:
    shift = make_shift_module_b1()
    return [
        (make_m_gamma(0), make_m_gamma(0), OmegaModule(1, 2)),
        (make_m_gamma(2), make_m_gamma(Fraction(-1, 2)), OmegaModule(1, 3)),
        (shift, shift, OmegaModule(1, 1)),
    ]


def run_selected(
    selector: str,
    window: int | None = None,
    caps: Caps | None = None,
    params: tuple | None = None,
    gm_module: BrModuleDesc | None = None,
) -> list[SuiteResult]:
    """Assemble and run the shipped configuration of one suite (or all).

    ``params`` restricts the parameter sweep to a single
    (lambda, beta, alpha, gamma) tuple; ``gm_module`` substitutes the
    module list of the mode-law suite.
    """
    if selector == "all":
        out = []
        for name in SUITE_IDS:
            out.extend(run_selected(name, window, caps, params, gm_module))
        return out
    if selector not in SUITE_IDS:
        raise ValueError(f"unknown suite {selector!r}; choose from {SUITE_IDS} or 'all'")
    sweep = [params] if params else list(PARAM_SWEEP)
    caps = caps or Caps()
    results: list[SuiteResult] = []

    if selector in ("bracket", "av", "g"):
        fn = {
            "bracket": suite_virasoro_bracket,
            "av": suite_av_compat,
            "g": suite_g,
        }[selector]
        w = window if window is not None else 4
        for lam, beta, alpha, gamma in sweep:
            for module in sweep_modules(lam, beta, alpha, gamma):
                r = fn(module, w, caps)
                r.params = _param_dict(lam, beta, alpha, gamma)
                results.append(r)
    elif selector == "gm":
        w = window if window is not None else 5
        modules = [gm_module] if gm_module is not None else gm_default_modules()
        for M in modules:
            results.append(suite_gm_law(M, w, cap=min(caps.carrier, 5)))
    elif selector == "flatten":
        w = window if window is not None else 4
        for M1, M2, Winner in flatten_default_configs():
            small = Caps(inner=min(caps.inner, 4), carrier=min(caps.carrier, 2))
            results.append(suite_flatten(M1, M2, Winner, w, small))
    elif selector == "h":
        w = window if window is not None else 4
        for lam, beta, alpha, gamma in sweep:
            r = suite_h_identities(lam, beta, w)
            r.params = _param_dict(lam, beta, alpha, gamma)
            results.append(r)
    elif selector == "weighting":
        w = window if window is not None else 5
        if params:
            lam_beta = [(params[0], params[1])]
        else:
            lam_beta = [
                (lam, beta)
                for lam in (Fraction(1), Fraction(2), Fraction(1, 3))
                for beta in (Fraction(0), Fraction(1), Fraction(3), Fraction(-1, 2))
            ]
        for lam, beta in lam_beta:
            r = suite_weighting(lam, beta, w, carrier_cap=min(caps.carrier, 4))
            r.params = {"lambda": str(lam), "beta": str(beta)}
            results.append(r)
    return results


def _param_dict(lam, beta, alpha, gamma) -> dict:
    return {
        "lambda": str(lam),
        "beta": str(beta),
        "alpha": str(alpha),
        "gamma": str(gamma),
    }
