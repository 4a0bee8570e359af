"""Numerical laboratory for weighted polynomial approximation on model manifolds.

The package builds graded spaces of entire functions attached to a
plurisubharmonic exhaustion psi on four concrete model geometries,
computes best uniform approximations on compact sets, extracts
convergence rates and order/type data, and audits the curvature and
volume-growth hypotheses that govern those rates.
"""

__version__ = "0.1.0"

from .manifold_models import (
    CompactSample,
    ConfigurationError,
    DomainError,
    Exp,
    ExpOfMonomial,
    FourierFinite,
    FunctionSpec,
    ManifoldModel,
    ModelValidationError,
    Point,
    Polynomial,
    PolynomialFn,
    RationalPole,
    TorusGeometricKernel,
    basis_enumerate,
    classic,
    default_mesh_size,
    eval_basis,
    eval_function,
    graph_complement,
    make_point,
    mapped_polynomial,
    psi_plus,
    psi_value,
    sample_compact,
    torus,
)
from .polyspace import (
    PsiPolynomial,
    poly_add,
    poly_eval,
    poly_scale,
    poly_sub,
    poly_to_record,
    space_dimension,
    zero_polynomial,
)
from .minimax import (
    ApproxProblem,
    ApproxRecord,
    ApproxSolution,
    approx_sweep,
    build_problem,
    orthonormalize,
    records_to_csv,
    solve_minimax,
)
from .extremal import (
    ExtremalEstimate,
    christoffel_estimate,
    christoffel_log_phi,
    reference_extremal,
)
from .asymptotics import (
    OrderTypeEstimate,
    RateReport,
    TelescopeResult,
    growth_series_bound,
    order_type_estimate,
    rate_limsup,
    telescope_extend,
    usable_records,
    winiarski_check,
)
from .curvature import (
    CompensatorAudit,
    HermitianFormSample,
    VolumeEstimate,
    VolumeGrowthFit,
    compensator_check,
    metric_form,
    ricci_potential,
    volume_growth_fit,
    volume_sublevel,
)
