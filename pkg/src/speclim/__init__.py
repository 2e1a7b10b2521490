"""Asymptotic spectral-efficiency predictors for multi-antenna ad-hoc links.

Random-matrix limits of the per-link SINR with transmit-side CSI restricted
to the link's own channel, together with a seeded Monte-Carlo simulator that
validates the predictions at desk scale.
"""

from .capacity import (
    AsymptoticPrediction,
    CapacityBounds,
    LinkRealization,
    asymptotic_capacity,
    capacity_bounds,
    csi_gain_ratio,
    exact_capacity,
    lower_bound_capacity,
    no_csi_mean_capacity,
    spatial_capacity_normalized,
    spatial_mean_capacity,
    tx_covariance,
    upper_bound_capacity,
)
from .beta_solver import (
    BetaProblem,
    SpatialBetaProblem,
    beta_equal_power,
    beta_spatial_approx,
    beta_two_class,
    solve_beta_generic,
    solve_beta_spatial,
    two_class_coefficients,
)
from .errors import ConfigError, NumericalError
from .interference import (
    Edf,
    InterferenceLaw,
    PathLossScenario,
    PowerModel,
    analytic_H,
    build_phi,
    empirical_vs_analytic_distance,
    path_loss,
    sample_positions,
    sample_stream_powers,
)
from .montecarlo import (
    AggregateStats,
    ExperimentConfig,
    PowerSpec,
    TrialRecord,
    aggregate,
    convergence_report,
    run_constant_pathloss,
    run_csi_gain,
    run_spatial,
)
from .mp_law import MpParams, lambda_star, lambda_star_limit, mp_cdf, mp_inverse_cdf, mp_pdf
from .randmat import (
    SeedSpec,
    SvdResult,
    isotropic_unit_vector,
    quadratic_form_inverse,
    sample_cn_matrix,
    svd,
    wishart_squared_singular_values,
)

__all__ = [name for name in dir() if not name.startswith("_")]
