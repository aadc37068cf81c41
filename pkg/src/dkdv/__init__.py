"""Exact-arithmetic engine for the matrix-resolvent form of the discrete KdV
hierarchy: shift-operator identities, the resolvent recursion, tau-structure
correlators, closed-form matrix-model correlators with a combinatorial
oracle, and Hodge-number extraction."""

from .algebra import (
    BiSeries,
    EPS,
    LOGX,
    LaurentSeries,
    Matrix2,
    MultiSeries,
    NotCleanlyDivisible,
    SeriesDepthError,
    SitePolynomial,
    X,
    ZP,
    divide_by_sq_diff,
    poly,
    poly_shift,
    series_mul,
    w,
)
from .diffop import (
    DerivationOnSymbol,
    DiffOp,
    FlowDerivation,
    apply_derivation,
    kdv_flow,
    m_coeff,
    verify_flow_equivalence,
    verify_operator_identities,
)
from .gue import (
    GueResolvent,
    HodgeTable,
    InconsistentSystem,
    NonTruncating,
    OddPowerPresent,
    SpecializationMismatch,
    UnexpectedPowers,
    b_series,
    bernoulli_numbers,
    correlator_poly,
    correlator_table,
    e_series,
    extract_ag,
    gue_resolvent,
    hodge_free_series,
    hypergeom_trunc,
    k_point,
    modified_correlators,
    one_point,
    solve_H_numbers,
    two_point,
)
from .oracle import (
    GluingCensus,
    RouteMismatch,
    TooLarge,
    census,
    connected_cumulant,
    direct_expectation,
    wick_moment,
)
from .reports import Check, Report
from .resolvent import (
    LaxMatrix,
    LaxMismatch,
    RecursionInconsistent,
    ResolventSeries,
    assemble_resolvent,
    crosscheck_operator,
    lax_matrix,
    mr_recursion,
    toda_reduced_series,
    verify_resolvent_equations,
    verify_toda_identities,
    verify_zero_curvature,
)
from .suites import SUITES, run_suites
from .taustructure import (
    d2_check,
    derivation_correlator,
    kpoint_log_tau,
    omega,
    omega_table,
    reduced_two_point,
    solve_shift2_difference,
    verify_tau_structure,
)

__version__ = "0.1.0"
