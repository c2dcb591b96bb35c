"""Error-probability bounds and receiver benchmarks for locating one
anomalous-noise Gaussian bosonic channel among identical background
channels (environment localization)."""

from .advantage import (
    AdvantageReport,
    additive_advantage_threshold,
    advantage_condition,
    advantage_region,
    advantage_report,
    fidelity_advantage_probes,
)
from .bounds import (
    CpfScenario,
    ErrorBoundSet,
    error_bounds,
    fid_additive,
    fid_additive_choi,
    fid_choi,
    fid_classical,
    fid_thermal,
    fid_thermal_choi,
)
from .errors import (
    DegenerateScenarioWarning,
    DegenerateSpecError,
    DomainError,
    EnvlocError,
    NumericalInstabilityError,
    UnsupportedProtocolError,
)
from .gaussian import (
    OMEGA,
    ChannelKind,
    PhaseInsensitiveChannel,
    TwoModeCovariance,
    apply_channel,
    discard_mode,
    gaussian_fidelity,
    symplectic_eigenvalues,
    tmsv_cm,
    two_mode_squeeze,
    vacuum_cm,
)
from .mle import (
    MleEvaluation,
    MleSpec,
    Ordering,
    ReturnStatePipeline,
    count_cdf_below,
    mle_advantage_probes,
    mle_error,
    mle_error_classical,
    mle_error_info,
    mle_error_quantum,
    mle_scaling_bounds,
    return_state_cm,
    return_state_variance,
    thermal_pmf,
    thermal_sum_pmf,
)
from .scenarios import (
    CODATA2018,
    BlackbodyPixel,
    FigureCurve,
    FigureRow,
    PhysicalConstants,
    additive_scenario,
    blackbody_induced_noise,
    eavesdropper_scenario,
    figure_curve,
    imaging_scenario,
)
from .simulate import SimulationResult, run_mle_trials, sample_total_count

__version__ = "0.1.0"

__all__ = [
    "AdvantageReport",
    "BlackbodyPixel",
    "ChannelKind",
    "CODATA2018",
    "CpfScenario",
    "DegenerateScenarioWarning",
    "DegenerateSpecError",
    "DomainError",
    "EnvlocError",
    "ErrorBoundSet",
    "FigureCurve",
    "FigureRow",
    "MleEvaluation",
    "MleSpec",
    "NumericalInstabilityError",
    "OMEGA",
    "Ordering",
    "PhaseInsensitiveChannel",
    "PhysicalConstants",
    "ReturnStatePipeline",
    "SimulationResult",
    "TwoModeCovariance",
    "UnsupportedProtocolError",
    "additive_advantage_threshold",
    "additive_scenario",
    "advantage_condition",
    "advantage_region",
    "advantage_report",
    "apply_channel",
    "blackbody_induced_noise",
    "count_cdf_below",
    "discard_mode",
    "eavesdropper_scenario",
    "error_bounds",
    "fid_additive",
    "fid_additive_choi",
    "fid_choi",
    "fid_classical",
    "fid_thermal",
    "fid_thermal_choi",
    "fidelity_advantage_probes",
    "figure_curve",
    "gaussian_fidelity",
    "imaging_scenario",
    "mle_advantage_probes",
    "mle_error",
    "mle_error_classical",
    "mle_error_info",
    "mle_error_quantum",
    "mle_scaling_bounds",
    "return_state_cm",
    "return_state_variance",
    "run_mle_trials",
    "sample_total_count",
    "symplectic_eigenvalues",
    "thermal_pmf",
    "thermal_sum_pmf",
    "tmsv_cm",
    "two_mode_squeeze",
    "vacuum_cm",
]
