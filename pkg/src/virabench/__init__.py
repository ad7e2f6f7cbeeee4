"""Exact-arithmetic workbench for Virasoro module constructions.

Library layout:

* :mod:`virabench.exact`      scalars, polynomials, keyed vectors, linear algebra
* :mod:`virabench.bralg`      solvable quotient algebras and module descriptions
* :mod:`virabench.avmod`      the polynomial and Laurent module families
* :mod:`virabench.fmod`       tensor modules and flattening
* :mod:`virabench.weighting`  the weighting construction
* :mod:`virabench.closure`    windowed submodule probes
* :mod:`virabench.suites`     named identity suites
* :mod:`virabench.cli`        command line front end
"""

from .avmod import AModule, Caps, OmegaModule, from_h_basis, h_poly, to_h_basis
from .bralg import (
    BrModuleDesc,
    br_g_action,
    dr_dichotomy,
    make_broken_fixture,
    make_m_gamma,
    make_mixed_fixture,
    make_shift_module_b1,
    tensor_br,
    validate_br_module,
)
from .closure import (
    FullWindowReached,
    Inconclusive,
    ProbeConfig,
    ProperInvariantSubspaceFound,
    generate,
    reducibility_m_gamma,
    reducibility_probe,
)
from .exact import Poly, RatMatrix, Rational, Vec, poly_shift, rat, span_insert
from .fmod import FModule, f_weight_action, flatten
from .weighting import (
    lambda_invariance_report,
    omega_weight_table,
    weight_f_action,
    weighted_action_omega,
)

__version__ = "0.1.0"
