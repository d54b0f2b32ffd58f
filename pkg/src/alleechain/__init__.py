"""Numerical laboratory for a ratio-dependent three-species food chain
with a strong Allee effect in the top predator."""

from .model import DimensionalParams, Params, StatePoint, nondimensionalize, ratio_response, reaction
from .equilibria import (
    CubicCoefficients,
    Equilibrium,
    all_equilibria,
    boundary_equilibria,
    coexistence_with_allee,
    cubic_real_roots,
    interior_equilibrium,
    jacobian,
)
from .turing import (
    DiffusionMatrix,
    DispersionCubic,
    GCoefficients,
    TuringVerdict,
    dispersion_cubic,
    dispersion_table,
    g_coefficients,
    g_min,
    growth_rates,
    routh_hurwitz_stable,
    turing_point,
    turing_unstable,
    turing_verdict_at,
)
from .solver1d import (
    FieldState1D,
    Grid1D,
    StepControl,
    build_grid,
    enforce_neumann,
    init_perturbation,
    run1d,
    run1d_batch,
)
from .solver2d import (
    FieldState2D,
    Grid2D,
    init_cos2,
    init_random,
    laplacian_5pt,
    make_grid2d,
    run2d,
    step2d,
)
from .analysis import (
    DecayRecord,
    FitResult,
    NormReport,
    ScenarioOutcome,
    classify_pattern,
    decay_experiment,
    h1_error,
    linear_fit,
    loglog_fit,
    norms,
    overexploitation_scenario,
)
from .errors import ConfigError, SolverError
from . import presets

__version__ = "0.1.0"
