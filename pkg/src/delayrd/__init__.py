"""Certified dynamics for a delayed reaction-diffusion equation on the line.

The package integrates the equation

    du/dt = Laplacian(u) - mu*u + sigma*u(x, t - tau) + f(u(x, t - tau)) + g(x)

with the method of steps on a large periodic box, computes the explicit
a-priori constants (absorbing radius, energy bounds), locates the roots of
the characteristic equation to split the linear flow, measures the
squeezing of trajectory differences against the analytic bounds, and turns
the pieces into computable Hausdorff/fractal dimension certificates for the
attractor.
"""

from .model import (
    ConfigError,
    DissipativityReport,
    ForcingSpec,
    Grid,
    NonlinearitySpec,
    ProblemParameters,
    RunOptions,
    check_dissipativity,
    evaluate_forcing,
    evaluate_nonlinearity,
    parse_config,
    serialize_config,
)
from .semigroup import (
    Field,
    SemigroupStepper,
    apply_semigroup,
    field_norm,
    gradient_norm,
    semigroup_decay_check,
)
from .solver import (
    CutoffRadius,
    DivergenceError,
    HistorySegment,
    Trajectory,
    constant_history,
    far_field_mass,
    history_from_function,
    integrate,
    segment_at,
    segment_norm,
    smooth_cutoff,
    split_fields,
)
from .estimates import (
    EstimateSet,
    absorbing_time,
    compute_estimates,
    verify_absorption,
    verify_energy_integral,
    verify_far_field,
)
from .spectrum import (
    ModeRoots,
    SpectralData,
    characteristic_roots,
    dichotomy_constant,
    dirichlet_eigenvalues,
    linear_delay_evolve,
    spectral_partition,
    with_dichotomy,
)
from .squeezing import (
    ProjectionSet,
    analytic_bounds,
    make_projections,
    measure_contraction,
    project_P,
    project_Q,
    project_R,
)
from .dimension import (
    DimensionCertificate,
    covering_bound,
    covering_bruteforce,
    eta,
    fractal_bound,
    hausdorff_bound,
    optimize_certificate,
    zeta,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "CutoffRadius",
    "DimensionCertificate",
    "DissipativityReport",
    "DivergenceError",
    "EstimateSet",
    "Field",
    "ForcingSpec",
    "Grid",
    "HistorySegment",
    "ModeRoots",
    "NonlinearitySpec",
    "ProblemParameters",
    "ProjectionSet",
    "RunOptions",
    "SemigroupStepper",
    "SpectralData",
    "Trajectory",
    "absorbing_time",
    "analytic_bounds",
    "apply_semigroup",
    "characteristic_roots",
    "check_dissipativity",
    "compute_estimates",
    "constant_history",
    "covering_bound",
    "covering_bruteforce",
    "dichotomy_constant",
    "dirichlet_eigenvalues",
    "eta",
    "evaluate_forcing",
    "evaluate_nonlinearity",
    "far_field_mass",
    "field_norm",
    "fractal_bound",
    "gradient_norm",
    "hausdorff_bound",
    "history_from_function",
    "integrate",
    "linear_delay_evolve",
    "make_projections",
    "measure_contraction",
    "optimize_certificate",
    "parse_config",
    "project_P",
    "project_Q",
    "project_R",
    "segment_at",
    "segment_norm",
    "semigroup_decay_check",
    "serialize_config",
    "smooth_cutoff",
    "spectral_partition",
    "split_fields",
    "verify_absorption",
    "verify_energy_integral",
    "verify_far_field",
    "with_dichotomy",
    "zeta",
]
