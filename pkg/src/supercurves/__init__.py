"""Exact super linear algebra, super theta functions, and SKP tau machinery.

The library works over a finite Grassmann algebra Lambda = C[beta_1..beta_n]
and provides: Berezinians/quasideterminants/super Cramer's rule, Riemann theta
functions with nilpotent-augmented arguments and the super theta operator
construction, period-matrix invariants of generic SKP curves, tau and Baker
functions on a finite-rank truncation of the super Grassmannian, and the
closed-form super elliptic tau function.
"""

from .errors import (
    BigCellError,
    DimensionError,
    DomainError,
    NotInvertibleError,
    ParityError,
    SupercurvesError,
)
from .grassmann import GrassmannScalar, RealStructure
from .supermatrix import (
    SuperLinearSystem,
    SuperMatrix,
    berezinian,
    berezinian_star,
    det_even,
    invert_matrix,
    oracle_solve,
    quasideterminant,
    solve_cramer,
    solve_via_inverse,
)
from .theta import (
    SuperThetaFunction,
    ThetaContext,
    build_super_theta,
    check_multipliers,
    theta,
    theta_derivative,
)
from .jacobian import (
    DualPeriodVector,
    PeriodData,
    bilinear_check,
    connecting_map,
    dual_cohomology,
    lattice_generators,
    pair_relation_check,
    projectedness_flags,
    riemann_roch,
)
from .sgr import (
    HeisenbergElement,
    TruncatedFrame,
    TruncationWindow,
    baker_tau_quotient_check,
    baker_vectors,
    big_cell_test,
    cocycle,
    multiplication_matrix,
    standard_frame,
    tau,
)
from .elliptic import SuperEllipticData, baker_matrix, tau_closed_form, tau_ratio

__all__ = [
    "BigCellError",
    "DimensionError",
    "DomainError",
    "DualPeriodVector",
    "GrassmannScalar",
    "HeisenbergElement",
    "NotInvertibleError",
    "ParityError",
    "PeriodData",
    "RealStructure",
    "SuperEllipticData",
    "SuperLinearSystem",
    "SuperMatrix",
    "SuperThetaFunction",
    "SupercurvesError",
    "ThetaContext",
    "TruncatedFrame",
    "TruncationWindow",
    "baker_matrix",
    "baker_tau_quotient_check",
    "baker_vectors",
    "berezinian",
    "berezinian_star",
    "big_cell_test",
    "bilinear_check",
    "build_super_theta",
    "check_multipliers",
    "cocycle",
    "connecting_map",
    "det_even",
    "dual_cohomology",
    "invert_matrix",
    "lattice_generators",
    "multiplication_matrix",
    "oracle_solve",
    "pair_relation_check",
    "projectedness_flags",
    "quasideterminant",
    "riemann_roch",
    "solve_cramer",
    "solve_via_inverse",
    "standard_frame",
    "tau",
    "tau_closed_form",
    "tau_ratio",
    "theta",
    "theta_derivative",
]

__version__ = "0.1.0"
