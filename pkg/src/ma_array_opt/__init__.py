"""Movable-antenna array placement and transmit beamforming optimizer."""

from .baselines import (
    BaselineResult,
    ao_optimize,
    aps_baseline,
    fpa_baseline,
    grid_oracle,
)
from .eigen import EigenResult, NumericError, normalize_phase, principal_eigenpair
from .estimators import AntennaArrayDesigner
from .model import (
    ChannelGram,
    ConfigError,
    ConstraintViolationError,
    ScenarioConfig,
    achievable_rate,
    beam_gain,
    build_gram,
    check_positions,
    effective_snr,
    fpa_positions,
    optimal_beamformer,
    snr_upper_bound,
    steering_matrix,
    steering_vector,
    uniform_positions,
    upper_bound,
)
from .optimizer import (
    MMIterate,
    MMOptions,
    MMTrace,
    SolveResult,
    coupling_gradient,
    curvature_bound,
    mm_optimize,
    pairwise_coupling,
    project_positions,
    rayleigh_quotient,
    solve_surrogate,
)

__version__ = "0.1.0"

__all__ = [
    "AntennaArrayDesigner",
    "BaselineResult",
    "ChannelGram",
    "ConfigError",
    "ConstraintViolationError",
    "EigenResult",
    "MMIterate",
    "MMOptions",
    "MMTrace",
    "NumericError",
    "ScenarioConfig",
    "SolveResult",
    "achievable_rate",
    "ao_optimize",
    "aps_baseline",
    "beam_gain",
    "build_gram",
    "check_positions",
    "coupling_gradient",
    "curvature_bound",
    "effective_snr",
    "fpa_baseline",
    "fpa_positions",
    "grid_oracle",
    "mm_optimize",
    "normalize_phase",
    "optimal_beamformer",
    "pairwise_coupling",
    "principal_eigenpair",
    "project_positions",
    "rayleigh_quotient",
    "snr_upper_bound",
    "solve_surrogate",
    "steering_matrix",
    "steering_vector",
    "uniform_positions",
    "upper_bound",
]
