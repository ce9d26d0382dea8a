"""Exact moments, limits and simulation for multi-draw Polya urns."""
from .asymptotics import (
    LimitResult,
    characteristic_polynomial,
    characteristic_roots,
    closed_form_roots,
    covariance_limit,
    gamma_prefactor,
    normalized_moment_limit,
)
from .combinatorics import StirlingCache, falling_factorial, generalized_binomial, stirling_first, stirling_second
from .errors import (
    BadParameter,
    DegenerateUrn,
    MissingMoment,
    ModelMismatch,
    NoConvergence,
    NonPositiveCount,
    NonRealResult,
    OutOfRangeState,
    RequiresCEquals1,
    RootFindingFailed,
    SameColor,
    SpecError,
    StateSpaceTooLarge,
    UnsupportedModel,
    UrnError,
)
from .model import Model, TransitionDistribution, UrnSpec, iter_grid, total_balls, transition_distribution, validate_spec
from .moments import (
    MomentTable,
    closed_form_expectation,
    covariance_multicolor,
    factorial_moment_c1,
    friedman_martingale_coefficients,
    moment,
    moment_stream,
    moment_table,
    recurrence_coefficients,
    second_moment_closed_form,
)
from .oracle import StateDistribution, exact_distribution, lemma_bound_residuals, lemma_transition_sum, lemma_transition_sum_expanded, oracle_moment
from .simulate import SimulationSummary, estimate_moments, martingale_diagnostic, sample_final_states, simulate_path

__version__ = "0.1.0"
