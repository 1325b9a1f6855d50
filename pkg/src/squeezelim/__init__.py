"""Quantum-noise limits of lossy cavity-enhanced interferometers.

Library for the shot-noise-limited sensitivity of a Fabry-Perot force
sensor with an internal parametric squeezer, externally injected squeezed
vacuum, and optional phase-sensitive output amplification, under the three
optical decoherence channels (injection, internal, readout loss).

Two noise models are provided: an exact frequency-domain two-photon
input-output solver (`full_model`) and the single-mode closed forms with
their family of analytic limits (`single_mode`), plus numerical machinery
for optimal-gain search, bandwidth, and sensitivity-bandwidth products
(`optimize`) and a deterministic sweep/figure driver (`cli`).
"""

from .errors import BracketError, ConfigError, NonConvergenceError, ThresholdError
from .full_model import (
    PortCoefficients,
    io_coefficients,
    noise_psd_closed,
    noise_psd_sum,
    sensitivity_full,
    threshold_gain,
    transfer_sq_closed,
)
from .optimize import (
    BandwidthResult,
    OptimizationResult,
    bandwidth,
    golden_section,
    numeric_optimal_gain,
    sbp_gain,
    snr_gain,
)
from .params import (
    C_LIGHT,
    HBAR,
    CavityParams,
    FullModelParams,
    NormalizationConstants,
    SqueezeSettings,
    ValidationReport,
    beta_from_db,
    db_from_beta,
    map_single_mode_to_full,
    norm_constants,
    q_threshold,
    validate,
)
from .single_mode import (
    LimitReport,
    amplification_crossover_eps_read,
    decoherence_limit,
    full_opt_sensitivity,
    limit_injection,
    limit_output_amp_only,
    limit_q0,
    limit_q0_infsqz,
    limit_q0_nosqz,
    limit_report,
    limit_threshold,
    noise_sm,
    optimal_gain,
    optimal_gain_general,
    optimal_sensitivity,
    qcrb,
    qcrb_direct,
    sensitivity_sm,
    sensitivity_sm_general,
    transfer_sq_sm,
)
from .spectra import (
    SensitivitySpectrum,
    default_omega_grid,
    sensitivity_spectrum,
    sensitivity_value,
)

__version__ = "0.1.0"

__all__ = [
    "BandwidthResult",
    "BracketError",
    "C_LIGHT",
    "CavityParams",
    "ConfigError",
    "FullModelParams",
    "HBAR",
    "LimitReport",
    "NonConvergenceError",
    "NormalizationConstants",
    "OptimizationResult",
    "PortCoefficients",
    "SensitivitySpectrum",
    "SqueezeSettings",
    "ThresholdError",
    "ValidationReport",
    "amplification_crossover_eps_read",
    "bandwidth",
    "beta_from_db",
    "db_from_beta",
    "decoherence_limit",
    "default_omega_grid",
    "full_opt_sensitivity",
    "golden_section",
    "io_coefficients",
    "limit_injection",
    "limit_output_amp_only",
    "limit_q0",
    "limit_q0_infsqz",
    "limit_q0_nosqz",
    "limit_report",
    "limit_threshold",
    "map_single_mode_to_full",
    "noise_psd_closed",
    "noise_psd_sum",
    "noise_sm",
    "norm_constants",
    "numeric_optimal_gain",
    "optimal_gain",
    "optimal_gain_general",
    "optimal_sensitivity",
    "q_threshold",
    "qcrb",
    "qcrb_direct",
    "sbp_gain",
    "sensitivity_full",
    "sensitivity_sm",
    "sensitivity_sm_general",
    "sensitivity_spectrum",
    "sensitivity_value",
    "snr_gain",
    "threshold_gain",
    "transfer_sq_closed",
    "transfer_sq_sm",
    "validate",
]
