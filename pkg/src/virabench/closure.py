"""Truncated submodule generation over exact rationals.

Starting from a nonzero seed, the probe repeatedly applies every windowed
operator (the Virasoro modes d_m for |m| <= mode_window by default, with
the Laurent operators x^m available as an opt-in), inserting each image
into a canonical reduced span.  Degree caps make the run finite; the
leakage policy keeps the verdicts honest:

* an image whose coordinates stay inside the window is inserted exactly;
* an image with support beyond the caps is never inserted, not even
  truncated; it is recorded as a leak together with its in-window part.

Verdicts, strongest sound claim first:

* FullWindowReached: the span of in-window images is the entire window
  space.  Every inserted vector genuinely lies in the generated
  submodule, so truncation cannot have fabricated this.
* ProperInvariantSubspaceFound: the span stabilized at a proper subspace,
  and the in-window part of every leaked image also lies in the span.
  This is window-bounded evidence of reducibility, never an unbounded
  claim; the leak count is reported.
* Inconclusive: the span stabilized at a proper subspace but some leak
  projects outside it (enlarging the caps could change the verdict), or
  the sweep limit was hit.

Identical configurations produce identical verdicts and identical bases:
operator order is fixed (modes ascending) and the span is kept in
canonical reduced row echelon form, which depends only on the subspace.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .avmod import AModule, Caps, OmegaModule, h_poly
from .bralg import make_m_gamma
from .exact import (
    ONE,
    ZERO,
    frac,
    Poly,
    RatMatrix,
    Vec,
    interpolated_coefficient,
    row_space_contains,
    span_insert,
)
from .fmod import FModule


@dataclass(frozen=True)
class ProbeConfig:
    seed: object
    mode_window: int = 4
    caps: Caps = Caps(inner=6, carrier=4)
    max_sweeps: int = 50
    op_set: str = "d"  # "d" (submodules of the Lie action) or "dx"

    def __post_init__(self):
        if self.mode_window < 1 or self.caps.inner < 1 or self.caps.carrier < 1:
            raise ValueError("windows and caps must be at least 1")
        if self.op_set not in ("d", "dx"):
            raise ValueError("op_set must be 'd' or 'dx'")


@dataclass(frozen=True)
class ProperInvariantSubspaceFound:
    keys: tuple
    basis: RatMatrix
    dim: int
    full_dim: int
    leaks: int


@dataclass(frozen=True)
class FullWindowReached:
    dim: int
    leaks: int


@dataclass(frozen=True)
class Inconclusive:
    dim: int
    full_dim: int
    leaks: int
    reason: str
    keys: tuple = ()
    basis: RatMatrix | None = None


def generate(module, cfg: ProbeConfig):
    """Run the windowed closure from the configured seed."""
    keys = module.window_keys(cfg.caps)
    index = {k: i for i, k in enumerate(keys)}
    full = len(keys)
    seed = module.coords(cfg.seed)
    if not seed:
        raise ValueError("closure seed must be nonzero")
    if any(k not in index for k in seed.support()):
        raise ValueError("closure seed must lie inside the window caps")

    def as_row(coords: Vec):
        row = [ZERO] * full
        for k, c in coords.items():
            row[index[k]] = c
        return row

    basis = RatMatrix(full)
    basis, _ = span_insert(basis, as_row(seed))
    leak_rows: list[list[Fraction]] = []
    leak_count = 0
    ops = ["d"] if cfg.op_set == "d" else ["d", "x"]

    sweeps = 0
    while True:
        if basis.nrows == full:
            return FullWindowReached(dim=full, leaks=leak_count)
        if sweeps >= cfg.max_sweeps:
            return Inconclusive(
                dim=basis.nrows, full_dim=full, leaks=leak_count,
                reason="sweep limit reached", keys=keys, basis=basis,
            )
        sweeps += 1
        changed = False
        for row in list(basis.rows):
            elem = module.from_coords(
                Vec((keys[i], c) for i, c in enumerate(row) if c)
            )
            for m in range(-cfg.mode_window, cfg.mode_window + 1):
                for opname in ops:
                    img = module.d(m, elem) if opname == "d" else module.x(m, elem)
                    coords = module.coords(img)
                    if not coords:
                        continue
                    if all(k in index for k in coords.support()):
                        basis, new = span_insert(basis, as_row(coords))
                        changed = changed or new
                        if basis.nrows == full:
                            return FullWindowReached(dim=full, leaks=leak_count)
                    else:
                        leak_count += 1
                        leak_rows.append(
                            as_row(Vec((k, c) for k, c in coords.items() if k in index))
                        )
        if not changed:
            break

    for row in leak_rows:
        if any(row) and not row_space_contains(basis, row):
            return Inconclusive(
                dim=basis.nrows, full_dim=full, leaks=leak_count,
                reason="a truncated image escapes the span", keys=keys, basis=basis,
            )
    return ProperInvariantSubspaceFound(
        keys=keys, basis=basis, dim=basis.nrows, full_dim=full, leaks=leak_count
    )


# ---------------------------------------------------------------------------
# seed sweeps and reducibility verdicts


def default_seed_elements(module) -> list[tuple[str, object]]:
    """Deterministic seed sweep for a module, labeled for reports.

    Polynomial modules get the anchored-factorial seeds h_0^0, h_0^1,
    h_0^2 plus the plain monomials t and t^2 (the latter detect the
    degree-shifted submodule line).  Laurent modules get x^-1, x^0, x^1.
    Tensor modules sweep carrier basis keys up to degree 2 against the
    inner seeds.
    """
    if isinstance(module, OmegaModule):
        polys = [h_poly(0, 0), h_poly(0, 1), h_poly(0, 2), Poly.monomial(1), Poly.monomial(2)]
        names = ["h0^0", "h0^1", "h0^2", "t", "t^2"]
        return list(zip(names, polys))
    if isinstance(module, AModule):
        return [(f"x^{n}", Vec.basis(n)) for n in (-1, 0, 1)]
    if isinstance(module, FModule):
        carrier_keys = module.br.window_keys(2)[:3]
        out = []
        for bk in carrier_keys:
            for label, w in default_seed_elements(module.inner):
                out.append((f"v[{bk}] (x) {label}", module.tensor(Vec.basis(bk), w)))
        return out
    raise TypeError(f"no default seeds for {type(module).__name__}")


@dataclass
class ReducibilityOutcome:
    module: str
    reducible: bool | None  # None when some run was inconclusive
    witness_seed: str | None
    verdicts: list = field(default_factory=list)  # (seed label, verdict)


def reducibility_probe(module, cfg_base: ProbeConfig | None = None, seeds=None) -> ReducibilityOutcome:
    """Sweep seeds and report the strongest sound reducibility verdict.

    Reducible as soon as one seed closes up on a proper invariant
    subspace; irreducible evidence when every seed reaches the full
    window; inconclusive otherwise.
    """
    if cfg_base is None:
        cfg_base = ProbeConfig(seed=None)
    if seeds is None:
        seeds = default_seed_elements(module)
    outcome = ReducibilityOutcome(module.describe(), None, None)
    all_full = True
    for label, seed in seeds:
        verdict = generate(module, replace(cfg_base, seed=seed))
        outcome.verdicts.append((label, verdict))
        if isinstance(verdict, ProperInvariantSubspaceFound):
            outcome.reducible = True
            outcome.witness_seed = label
            return outcome
        if not isinstance(verdict, FullWindowReached):
            all_full = False
    if all_full:
        outcome.reducible = False
    return outcome


def reducibility_m_gamma(gamma, lam, beta, cfg: ProbeConfig | None = None) -> ReducibilityOutcome:
    """Reducibility probe for the tensor of a one-dimensional module with
    the polynomial module; proper closure is expected exactly on the
    parameter boundary gamma == beta."""
    F = FModule(make_m_gamma(gamma), OmegaModule(lam, beta))
    return reducibility_probe(F, cfg)


# ---------------------------------------------------------------------------
# interpolation extractions used by the irreducibility bookkeeping


def extract_dsquared_component(F: FModule, u: Vec, m: int, k_samples) -> Vec:
    """Top-degree coefficient of the split double action d_k d_{m-k} u.

    Each product-basis coordinate of d_k d_{m-k} u is a polynomial in k of
    degree at most 2r + 2 (the inner scaling constant must be 1 so no
    exponential in k appears).  Interpolating at the sampled integers and
    reading the k^(2r+2) coefficient isolates the component carried by
    the squared top generator, a scalar multiple of
    sum_n (d_r^2 v_n) (x) h_m^n for seeds assembled in the anchored basis.
    """
    if not isinstance(F.inner, OmegaModule):
        raise ValueError("the extraction needs a polynomial inner module")
    if F.inner.lam != 1:
        raise ValueError(
            "the extraction interpolates in the mode index, which requires "
            "the inner scaling constant to be 1"
        )
    r = F.br.rank
    nodes = sorted(set(int(k) for k in k_samples))
    if len(nodes) < 2 * r + 3:
        raise ValueError(f"need at least {2 * r + 3} distinct sample modes")
    samples = [(k, F.d(k, F.d(m - k, u))) for k in nodes]
    out = interpolated_coefficient(samples, 2 * r + 2)
    return out if out is not None else Vec()


def anchor_leading_coefficient(family, degree: int) -> Vec:
    """Leading anchor coefficient of a family of elements indexed by m.

    ``family`` maps integer anchors m to elements whose coordinates are
    polynomials in m of degree at most ``degree``; the m^degree
    coefficient is returned.  For families of the form
    sum_n w_n (x) h_m^n with n <= degree this lands on a scalar multiple
    of w_degree (x) 1.
    """
    items = sorted((int(m), v) for m, v in dict(family).items())
    if len(items) < degree + 1:
        raise ValueError(f"need at least {degree + 1} anchors")
    out = interpolated_coefficient(items, degree)
    return out if out is not None else Vec()


def span_contains_element(module, keys, basis: RatMatrix, element) -> bool:
    """Membership of an element in a window span produced by a probe."""
    coords = module.coords(element)
    index = {k: i for i, k in enumerate(keys)}
    if any(k not in index for k in coords.support()):
        return False
    row = [ZERO] * len(keys)
    for k, c in coords.items():
        row[index[k]] = c
    return row_space_contains(basis, row)


def closure_span(module, cfg: ProbeConfig):
    """Run the probe and return (keys, basis) regardless of the verdict."""
    keys = module.window_keys(cfg.caps)
    verdict = generate(module, cfg)
    if isinstance(verdict, FullWindowReached):
        full = RatMatrix(
            len(keys),
            [[frac(int(i == j)) for j in range(len(keys))] for i in range(len(keys))],
        )
        return keys, full
    if verdict.basis is None:
        raise RuntimeError("probe returned no basis")
    return keys, verdict.basis
