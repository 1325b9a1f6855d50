"""Domain types, physical constants, and parameter validation.

The sensor is a Fabry-Perot cavity with a parametric gain medium inside
(internal squeezing), squeezed vacuum injected at the readout port
(external squeezing), and an optional phase-sensitive amplifier in front
of the photodetector (output amplification).  Three loss channels are
tracked: internal round-trip loss, readout loss (propagation plus
detection), and injection loss on the external squeezed field.

Conventions
-----------
q       : internal double-pass power gain factor.  Positive q squeezes the
          signal (phase) quadrature, negative q amplifies it.  The model is
          valid for |q| < q_th = T_c + eps_int.
beta    : external squeeze factor in power, beta = 10^(dB/10) >= 1.
zeta    : output amplification factor in power, >= 1.
G       : single-pass amplitude gain of the medium on the amplified
          (amplitude) quadrature, related to q by G = exp(q/4).

All types are immutable after construction and safe to share between
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

HBAR = 1.054571817e-34  # J s (CODATA)
C_LIGHT = 299792458.0   # m/s

# Beyond this the high-finesse / small-gain expansion is dubious.
SINGLE_MODE_VALIDITY = 0.1

# Complex denominators smaller than this are treated as on-threshold.
DENOMINATOR_GUARD = 1e-12


@dataclass(frozen=True)
class CavityParams:
    """Geometry, power, and loss budget of the sensor cavity.

    T_c        power transmissivity of the coupling (front) mirror, in (0,1)
    eps_int    internal power loss per round trip, in [0,1)
    eps_read   readout power loss incl. detection inefficiency, in [0,1)
    eps_inj    injection power loss on the external squeezed field, in [0,1)
    tau        cavity single-pass time [s]
    L          cavity/arm length used for strain referencing [m]
    P_c        fixed intracavity power [W]
    wavelength carrier wavelength [m]
    """

    T_c: float
    eps_int: float = 0.0
    eps_read: float = 0.0
    eps_inj: float = 0.0
    tau: float = 1e-8
    L: float = C_LIGHT * 1e-8
    P_c: float = 1e3
    wavelength: float = 1.064e-6


@dataclass(frozen=True)
class SqueezeSettings:
    """Internal gain q, external squeeze factor beta, output amplification zeta."""

    q: float = 0.0
    beta: float = 1.0
    zeta: float = 1.0


@dataclass(frozen=True)
class FullModelParams:
    """Amplitude-domain parameters of the exact input-output solver.

    r_c, r_b   amplitude reflectivities of coupling and back mirror
    r_int      amplitude reflectivity of the internal-loss port
    r_i        amplitude reflectivity of the injection-loss port
    r_d        amplitude reflectivity of the readout-loss port
    G          single-pass amplitude gain on the amplified quadrature
    tau        single-pass time [s]
    zeta       output amplification (power)

    Transmissivities follow from r^2 + t^2 = 1 and are never stored.
    """

    r_c: float
    r_b: float = 1.0
    r_int: float = 0.0
    r_i: float = 0.0
    r_d: float = 0.0
    G: float = 1.0
    tau: float = 1e-8
    zeta: float = 1.0

    @property
    def t_c(self) -> float:
        return math.sqrt(1.0 - self.r_c ** 2)

    @property
    def t_b(self) -> float:
        return math.sqrt(1.0 - self.r_b ** 2)

    @property
    def t_int(self) -> float:
        return math.sqrt(1.0 - self.r_int ** 2)

    @property
    def t_i(self) -> float:
        return math.sqrt(1.0 - self.r_i ** 2)

    @property
    def t_d(self) -> float:
        return math.sqrt(1.0 - self.r_d ** 2)


@dataclass(frozen=True)
class NormalizationConstants:
    """Strain-referencing prefactor N0 = hbar*lambda*c / (8*pi*P_c*L^2).

    Every strain-referred sensitivity in this package is N0 times a
    dimensionless spectral factor.  N0 is always recomputed from its
    constituents.
    """

    hbar: float
    c: float
    N0: float


def norm_constants(params: CavityParams) -> NormalizationConstants:
    N0 = HBAR * params.wavelength * C_LIGHT / (8.0 * math.pi * params.P_c * params.L ** 2)
    return NormalizationConstants(hbar=HBAR, c=C_LIGHT, N0=N0)


def q_threshold(params: CavityParams) -> float:
    """Parametric oscillation threshold of the internal gain: q_th = T_c + eps_int."""
    return params.T_c + params.eps_int


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validate(): failures are reported, never raised."""

    ok: bool
    violations: tuple = ()
    warnings: tuple = ()
    q_margin: float = float("nan")  # q_th - |q|; negative means over threshold


def validate(params: CavityParams, settings: SqueezeSettings) -> ValidationReport:
    """Check all structural invariants of a parameter set.

    Returns a report carrying every violated invariant plus the distance to
    the internal-gain threshold.  A warning (not a violation) is recorded
    when T_c + eps_int + |q| exceeds the single-mode validity bound.
    """
    bad = []
    warn = []

    if not 0.0 < params.T_c < 1.0:
        bad.append(f"T_c={params.T_c!r} outside (0,1)")
    for name in ("eps_int", "eps_read", "eps_inj"):
        val = getattr(params, name)
        if not 0.0 <= val < 1.0:
            bad.append(f"{name}={val!r} outside [0,1)")
    for name in ("tau", "L", "P_c", "wavelength"):
        val = getattr(params, name)
        if not val > 0.0:
            bad.append(f"{name}={val!r} must be positive")

    if not settings.beta >= 1.0:
        bad.append(f"beta={settings.beta!r} must be >= 1")
    if not settings.zeta >= 1.0:
        bad.append(f"zeta={settings.zeta!r} must be >= 1")

    q_th = q_threshold(params)
    margin = q_th - abs(settings.q)
    if 0.0 < params.T_c < 1.0 and margin <= 0.0:
        bad.append(
            f"|q|={abs(settings.q)!r} at or above threshold q_th={q_th!r} "
            f"(margin {margin!r})"
        )

    if params.T_c + params.eps_int + abs(settings.q) > SINGLE_MODE_VALIDITY:
        warn.append(
            "T_c + eps_int + |q| = "
            f"{params.T_c + params.eps_int + abs(settings.q):.4g} > "
            f"{SINGLE_MODE_VALIDITY}: single-mode approximation is marginal"
        )

    return ValidationReport(
        ok=not bad,
        violations=tuple(bad),
        warnings=tuple(warn),
        q_margin=margin,
    )


def require_valid(params: CavityParams, settings: SqueezeSettings) -> None:
    """Raise if a parameter set is unusable for noise evaluation."""
    from .errors import ThresholdError

    report = validate(params, settings)
    if report.ok:
        return
    if report.q_margin <= 0.0 and len(report.violations) == 1:
        raise ThresholdError(report.violations[0])
    raise ValueError("; ".join(report.violations))


def map_single_mode_to_full(params: CavityParams, settings: SqueezeSettings) -> FullModelParams:
    """Express a single-mode parameter set in amplitude-domain form.

    The back mirror is taken perfectly reflective (its residual
    transmission is folded into eps_int), and the double-pass power gain q
    maps to the single-pass amplitude gain G = exp(q/4).  Below the
    single-mode threshold the mapped point is strictly below the full-model
    threshold as well; the explicit check here guards direct constructions.
    """
    from .errors import ThresholdError

    require_valid(params, settings)
    fp = FullModelParams(
        r_c=math.sqrt(1.0 - params.T_c),
        r_b=1.0,
        r_int=math.sqrt(params.eps_int),
        r_i=math.sqrt(params.eps_inj),
        r_d=math.sqrt(params.eps_read),
        G=math.exp(settings.q / 4.0),
        tau=params.tau,
        zeta=settings.zeta,
    )
    loop = fp.r_b * fp.r_c * fp.t_int
    if max(fp.G ** 2, fp.G ** -2) * loop >= 1.0:
        raise ThresholdError(
            f"mapped gain G={fp.G!r} is at or above the full-model threshold "
            f"G_th={(loop) ** -0.5!r}"
        )
    return fp


def beta_from_db(db: float) -> float:
    """Convert a squeeze level quoted in dB to the power factor beta."""
    return 10.0 ** (db / 10.0)


def db_from_beta(beta: float) -> float:
    return 10.0 * math.log10(beta)


def with_updates(params: CavityParams, **kwargs) -> CavityParams:
    """Functional update helper for sweep drivers."""
    return replace(params, **kwargs)
