"""Link-level toolkit for reflect-array assisted multi-antenna downlinks.

Builds statistical channel models for a base station serving a single user
through a set of passive reflecting surfaces, designs the surface phase
profiles from channel statistics alone, predicts the ergodic rate in closed
form, and validates the prediction against an exact Monte Carlo simulation
that includes channel estimation error.
"""

from .analysis import (
    MixedLosRate,
    PureLosGap,
    StatMatrices,
    build_moment_matrices,
    cascade_second_moment,
    closed_form_rate,
    mixed_los_rate,
    moment_matrices_from_c,
    pure_los_limit_gap,
    pure_los_rate,
    rate_quadratic_forms,
    rayleigh_rate,
    siso_uncorrelated_rate,
)
from .beamforming import (
    ConvergenceError,
    DegenerateChannelError,
    aligned_phases,
    mrt_vector,
    phase_extract,
    power_iteration,
    random_reflection,
    solve_statistical_reflection,
)
from .channel import ChannelRealization, complex_normal, matrix_sqrt_psd, sample_channels
from .config import (
    METHODS,
    ConfigError,
    SystemConfig,
    db_to_linear,
    linear_to_db,
    load_config,
    parse_config_text,
    with_layout,
)
from .estimation import CsiEstimates, estimation_error_variance, sample_estimates
from .geometry import DeploymentGeometry, sample_geometry
from .harness import CSV_HEADER, RateReport, emit_csv, render_csv, run_scenario, run_sweep
from .scenario import (
    ChannelStatistics,
    build_statistics,
    correlation_block,
    los_matrix,
    los_power_frac,
    los_vector,
    nlos_power_frac,
    pathloss,
    rician_k,
    synthetic_statistics,
)
from .simulator import (
    McEstimate,
    grid_search_from_stats,
    grid_search_reflection,
    instantaneous_snr,
    monte_carlo_rate,
)
from .streams import derive_seed, keyed_rng

__version__ = "0.1.0"

__all__ = [
    "CSV_HEADER",
    "ChannelRealization",
    "ChannelStatistics",
    "ConfigError",
    "ConvergenceError",
    "CsiEstimates",
    "DegenerateChannelError",
    "DeploymentGeometry",
    "METHODS",
    "McEstimate",
    "MixedLosRate",
    "PureLosGap",
    "RateReport",
    "StatMatrices",
    "SystemConfig",
    "aligned_phases",
    "build_moment_matrices",
    "build_statistics",
    "cascade_second_moment",
    "closed_form_rate",
    "complex_normal",
    "correlation_block",
    "db_to_linear",
    "derive_seed",
    "emit_csv",
    "estimation_error_variance",
    "grid_search_from_stats",
    "grid_search_reflection",
    "instantaneous_snr",
    "keyed_rng",
    "linear_to_db",
    "load_config",
    "los_matrix",
    "los_power_frac",
    "los_vector",
    "matrix_sqrt_psd",
    "mixed_los_rate",
    "moment_matrices_from_c",
    "monte_carlo_rate",
    "mrt_vector",
    "nlos_power_frac",
    "parse_config_text",
    "pathloss",
    "phase_extract",
    "power_iteration",
    "pure_los_limit_gap",
    "pure_los_rate",
    "random_reflection",
    "rate_quadratic_forms",
    "rayleigh_rate",
    "render_csv",
    "rician_k",
    "run_scenario",
    "run_sweep",
    "sample_channels",
    "sample_estimates",
    "sample_geometry",
    "siso_uncorrelated_rate",
    "solve_statistical_reflection",
    "synthetic_statistics",
    "with_layout",
]
