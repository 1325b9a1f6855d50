"""Single-mode closed forms: noise, transfer, sensitivity, and analytic limits.

Within one free spectral range and for T_c, eps, |q| << 1 the cavity reduces
to a single Lorentzian mode.  With the resonance factor

    D(Omega) = (q + T_c + eps_int)^2 + 16 Omega^2 tau^2

the readout-quadrature noise density and signal power transfer are

    S_n = [D - 4 q T_c (1-eps_read)
              - (1 - 1/beta)(1-eps_read) ((q - T_c + eps_int)^2
                                          + 16 Omega^2 tau^2)] / D
    |T|^2 = (8 pi P_c / (hbar lambda c)) * 4 T_c (1-eps_read) / D

and the strain-referred sensitivity is S_hh = N0 * S_n / |T~|^2 with
|T~|^2 the dimensionless part of |T|^2 and N0 the normalization prefactor.

The named analytic limits below all refer to Omega = 0 unless stated:

* qcrb               -- lossless bound N0 (T_c - q)^2 / (beta T_c)
* limit_q0           -- loss-induced reference without internal squeezing
                        (the lossless squeezed-shot-noise floor N0 T_c/(4 beta)
                        is subtracted, so the lossless case gives zero)
* limit_threshold    -- loss-induced limit with at-threshold internal
                        squeezing; independent of beta
* optimal_sensitivity-- exact minimum over q of the total sensitivity and
                        the gain that attains it
* full_opt_sensitivity - optimized sensitivity including injection loss and
                        output amplification, any Omega
* limit_output_amp_only - q = 0, zeta -> inf, beta -> inf limit

These evaluators are pure functions; the general (eps_inj, zeta) case at
arbitrary q is covered by `sensitivity_sm_general` and the full model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ThresholdError
from .params import (
    CavityParams,
    SqueezeSettings,
    norm_constants,
    q_threshold,
    require_valid,
)


def _check_reduced_case(settings: SqueezeSettings, params: CavityParams, op: str) -> None:
    if settings.zeta != 1.0 or params.eps_inj != 0.0:
        raise ValueError(
            f"{op} covers the zeta=1, eps_inj=0 case; use the general "
            "evaluators or the full model instead"
        )


def _resonance(params: CavityParams, q: float, omega):
    w = np.asarray(omega, dtype=float)
    return (q + params.T_c + params.eps_int) ** 2 + 16.0 * (w * params.tau) ** 2


def noise_sm(params: CavityParams, settings: SqueezeSettings, omega):
    """Readout-quadrature noise spectral density, vacuum-normalized."""
    _check_reduced_case(settings, params, "noise_sm")
    require_valid(params, settings)
    q, beta = settings.q, settings.beta
    T_c, e_int, e_r = params.T_c, params.eps_int, params.eps_read
    D = _resonance(params, q, omega)
    w = np.asarray(omega, dtype=float)
    out = (
        D
        - 4.0 * q * T_c * (1.0 - e_r)
        - (1.0 - 1.0 / beta) * (1.0 - e_r)
        * ((q - T_c + e_int) ** 2 + 16.0 * (w * params.tau) ** 2)
    ) / D
    return out if np.ndim(out) else float(out)


def transfer_sq_sm(params: CavityParams, settings: SqueezeSettings, omega):
    """Signal power transfer |T|^2 including the 8 pi P_c/(hbar lambda c) factor."""
    _check_reduced_case(settings, params, "transfer_sq_sm")
    require_valid(params, settings)
    signal_norm = 8.0 * math.pi * params.P_c / (
        norm_constants(params).hbar * params.wavelength * norm_constants(params).c
    )
    D = _resonance(params, settings.q, omega)
    out = signal_norm * 4.0 * params.T_c * (1.0 - params.eps_read) / D
    return out if np.ndim(out) else float(out)


def sensitivity_sm(params: CavityParams, settings: SqueezeSettings, omega):
    """Strain-referred sensitivity S_hh(Omega) = N0 * S_n / |T~|^2."""
    _check_reduced_case(settings, params, "sensitivity_sm")
    require_valid(params, settings)
    N0 = norm_constants(params).N0
    q, beta = settings.q, settings.beta
    T_c, e_int, e_r = params.T_c, params.eps_int, params.eps_read
    D = _resonance(params, q, omega)
    w = np.asarray(omega, dtype=float)
    num = (
        D
        - 4.0 * q * T_c * (1.0 - e_r)
        - (1.0 - 1.0 / beta) * (1.0 - e_r)
        * ((q - T_c + e_int) ** 2 + 16.0 * (w * params.tau) ** 2)
    )
    out = N0 * num / (4.0 * T_c * (1.0 - e_r))
    return out if np.ndim(out) else float(out)


def sensitivity_sm_general(params: CavityParams, settings: SqueezeSettings, omega):
    """Single-mode sensitivity extended with injection loss and output gain.

    The injected field reaching the cavity carries
    s_v = (1-eps_inj)/beta + eps_inj in the readout quadrature, and the
    output amplifier multiplies the pre-detection field by zeta.  Reduces
    exactly to sensitivity_sm at eps_inj = 0, zeta = 1.
    """
    require_valid(params, settings)
    N0 = norm_constants(params).N0
    q, beta, zeta = settings.q, settings.beta, settings.zeta
    T_c, e_int, e_r = params.T_c, params.eps_int, params.eps_read
    s_v = (1.0 - params.eps_inj) / beta + params.eps_inj
    D = _resonance(params, q, omega)
    w = np.asarray(omega, dtype=float)
    filtered = 4.0 * q * T_c + (1.0 - s_v) * (
        (q - T_c + e_int) ** 2 + 16.0 * (w * params.tau) ** 2
    )
    num = e_r * D / (zeta * (1.0 - e_r)) + D - filtered
    out = N0 * num / (4.0 * T_c)
    return out if np.ndim(out) else float(out)


# ---------------------------------------------------------------------------
# analytic limits (Omega = 0 unless stated otherwise)
# ---------------------------------------------------------------------------

def qcrb(params: CavityParams, settings: SqueezeSettings) -> float:
    """Lossless quantum bound N0 (T_c - q)^2 / (beta T_c); zero at threshold."""
    N0 = norm_constants(params).N0
    return N0 * (params.T_c - settings.q) ** 2 / (settings.beta * params.T_c)


def qcrb_direct(params: CavityParams, settings: SqueezeSettings) -> float:
    """Lossless sensitivity evaluated directly: N0 (T_c - q)^2 / (4 beta T_c).

    A factor 4 below qcrb() at every (q, beta); both are exposed and the
    ratio is reported, no silent reconciliation.
    """
    return qcrb(params, settings) / 4.0


def limit_q0(params: CavityParams, beta: float) -> float:
    """Loss-induced reference sensitivity without internal squeezing (q = 0).

    Total Omega=0 sensitivity at q=0 minus the lossless squeezed-shot-noise
    floor N0 T_c / (4 beta).  At beta = 1 this equals
    N0/(1-eps_read) (T_c eps_read/4 + eps_int/2 + eps_int^2/(4 T_c)),
    and for beta -> inf
    N0/(1-eps_read) (T_c eps_read/4 + (2-eps_read) eps_int/2
                     + eps_read eps_int^2/(4 T_c)).
    """
    N0 = norm_constants(params).N0
    T_c, e_int, e_r = params.T_c, params.eps_int, params.eps_read
    num = (
        (T_c + e_int) ** 2
        - (1.0 - 1.0 / beta) * (1.0 - e_r) * (T_c - e_int) ** 2
        - T_c ** 2 * (1.0 - e_r) / beta
    )
    return N0 * num / (4.0 * T_c * (1.0 - e_r))


def limit_q0_nosqz(params: CavityParams) -> float:
    """Closed form of limit_q0 at beta = 1."""
    N0 = norm_constants(params).N0
    T_c, e_int, e_r = params.T_c, params.eps_int, params.eps_read
    return N0 / (1.0 - e_r) * (
        T_c * e_r / 4.0 + e_int / 2.0 + e_int ** 2 / (4.0 * T_c)
    )


def limit_q0_infsqz(params: CavityParams) -> float:
    """Closed form of limit_q0 in the infinite-external-squeezing limit."""
    N0 = norm_constants(params).N0
    T_c, e_int, e_r = params.T_c, params.eps_int, params.eps_read
    return N0 / (1.0 - e_r) * (
        T_c * e_r / 4.0
        + (2.0 - e_r) * e_int / 2.0
        + e_r * e_int ** 2 / (4.0 * T_c)
    )


def limit_threshold(params: CavityParams) -> float:
    """Loss-induced limit with internal squeezing at threshold.

    N0/(1-eps_read) (T_c eps_read + eps_int + eps_int^2/(4 T_c)); the same
    value with and without external squeezing.  Four times limit_q0(beta=1)
    as eps_int -> 0: at-threshold operation deamplifies the signal by 6 dB.
    """
    N0 = norm_constants(params).N0
    T_c, e_int, e_r = params.T_c, params.eps_int, params.eps_read
    return N0 / (1.0 - e_r) * (T_c * e_r + e_int + e_int ** 2 / (4.0 * T_c))


def optimal_gain(params: CavityParams, beta: float) -> float:
    """Internal gain minimizing the Omega=0 sensitivity (unclamped).

    q_opt = T_c (1 - 2 beta eps_read / (1 + eps_read (beta - 1))) - eps_int.
    Reduces to q_th - 2 (T_c eps_read + eps_int) at beta = 1 and approaches
    -q_th (maximal signal amplification) for beta -> inf.
    """
    e_r = params.eps_read
    return (
        params.T_c * (1.0 - 2.0 * beta * e_r / (1.0 + e_r * (beta - 1.0)))
        - params.eps_int
    )


def optimal_sensitivity(params: CavityParams, beta: float):
    """Minimum Omega=0 sensitivity over the internal gain, and its argmin.

    Returns (S_opt, q_opt, clamped).  S_opt = N0 (T_c eps_read /
    (1 + eps_read (beta-1)) + eps_int) is the exact minimum of
    sensitivity_sm over q; q_opt is clamped into (-q_th, q_th) with the
    flag set when the analytic optimum sits on the boundary (lossless
    case: threshold operation).
    """
    N0 = norm_constants(params).N0
    T_c, e_int, e_r = params.T_c, params.eps_int, params.eps_read
    s_opt = N0 * (T_c * e_r / (1.0 + e_r * (beta - 1.0)) + e_int)
    q_opt = optimal_gain(params, beta)
    q_th = q_threshold(params)
    # Keep the returned gain strictly evaluable (same guard as the
    # numeric search uses for its bracket).
    edge = q_th * (1.0 - 1e-6)
    clamped = False
    if q_opt >= edge:
        q_opt, clamped = edge, True
    elif q_opt <= -edge:
        q_opt, clamped = -edge, True
    return s_opt, q_opt, clamped


def optimal_gain_general(params: CavityParams, beta: float, zeta: float) -> float:
    """Optimal gain with injection loss and output amplification included.

    q_opt = T_c (w - eps_read)/(w + eps_read) - eps_int with
    w = zeta s_v (1 - eps_read), s_v = (1-eps_inj)/beta + eps_inj.
    For zeta -> inf this tends to T_c - eps_int.
    """
    e_r = params.eps_read
    s_v = (1.0 - params.eps_inj) / beta + params.eps_inj
    w = zeta * s_v * (1.0 - e_r)
    return params.T_c * (w - e_r) / (w + e_r) - params.eps_int


def full_opt_sensitivity(params: CavityParams, beta: float, zeta: float, omega):
    """Optimized sensitivity with injection loss and output amplification.

    Evaluates, for the gain optimized at Omega = 0,

        S_hh(Omega) = N0 [ T_c eps_read (1 - (1-beta) eps_inj) / M
                           + eps_int
                           + 4 Omega^2 tau^2 M /
                             (T_c beta zeta (1 - eps_read)) ]
        M = beta eps_read + zeta (1 - eps_read)(1 - (1-beta) eps_inj)

    which reduces exactly to optimal_sensitivity at eps_inj=0, zeta=1,
    Omega=0, to the injection-loss limit for beta -> inf, and to
    N0 eps_int for zeta -> inf (readout loss fully compensated).
    """
    N0 = norm_constants(params).N0
    T_c, e_int, e_r, e_i = params.T_c, params.eps_int, params.eps_read, params.eps_inj
    w = np.asarray(omega, dtype=float)
    inj = 1.0 - (1.0 - beta) * e_i
    M = beta * e_r + zeta * (1.0 - e_r) * inj
    out = N0 * (
        T_c * e_r * inj / M
        + e_int
        + 4.0 * (w * params.tau) ** 2 * M / (T_c * beta * zeta * (1.0 - e_r))
    )
    return out if np.ndim(out) else float(out)


def limit_injection(params: CavityParams, zeta: float) -> float:
    """Infinite-external-squeezing limit with injection loss present.

    N0 [ T_c eps_read eps_inj / (eps_read + zeta eps_inj (1 - eps_read))
         + eps_int ], at Omega = 0.  Without output amplification the
    injected state's impurity caps the benefit; zeta -> inf removes the
    readout-loss term entirely.
    """
    N0 = norm_constants(params).N0
    T_c, e_int, e_r, e_i = params.T_c, params.eps_int, params.eps_read, params.eps_inj
    if e_r == 0.0 and e_i == 0.0:
        return N0 * e_int
    return N0 * (T_c * e_r * e_i / (e_r + zeta * e_i * (1.0 - e_r)) + e_int)


def limit_output_amp_only(params: CavityParams) -> float:
    """q = 0, zeta -> inf, beta -> inf limit: output amplification alone.

    N0 (eps_int + eps_inj (T_c - eps_int)^2 / (4 T_c)).  Coincides with the
    internal-squeezing limit N0 eps_int when there is no injection loss.
    """
    N0 = norm_constants(params).N0
    T_c, e_int, e_i = params.T_c, params.eps_int, params.eps_inj
    return N0 * (e_int + e_i * (T_c - e_int) ** 2 / (4.0 * T_c))


def decoherence_limit(params: CavityParams) -> float:
    """Ultimate internal-loss floor N0 * eps_int (beta -> inf at q = -q_th)."""
    return norm_constants(params).N0 * params.eps_int


def amplification_crossover_eps_read(
    params: CavityParams, beta: float, lo: float = 1e-6, hi: float = 0.999
) -> float:
    """Readout loss at which the optimal internal gain changes sign.

    Above this value it is optimal to amplify the signal quadrature inside
    the cavity (q_opt < 0).  Found by bisection on the closed-form
    optimal_gain; returns nan when no sign change exists in (lo, hi).
    """
    def f(e_r):
        return optimal_gain(
            CavityParams(
                T_c=params.T_c, eps_int=params.eps_int, eps_read=e_r,
                eps_inj=params.eps_inj, tau=params.tau, L=params.L,
                P_c=params.P_c, wavelength=params.wavelength,
            ),
            beta,
        )

    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0.0:
        return float("nan")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0 or hi - lo < 1e-15:
            return mid
        if f_lo * f_mid < 0.0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class LimitReport:
    """All named analytic limiting-case values for one parameter set.

    Everything is strain-referred (1/Hz-equivalent).  The two documented
    model discrepancies are carried as data: the ratio between the quoted
    lossless bound and the direct lossless evaluation (a constant 4), and
    the numerically located readout loss where the optimal gain switches
    to amplification.
    """

    qcrb: float
    qcrb_direct: float
    qcrb_direct_ratio: float
    ref_no_isqz_nosqz: float
    ref_no_isqz_infsqz: float
    ref_no_isqz: float
    at_threshold: float
    optimal: float
    q_opt: float
    q_opt_clamped: bool
    q_th: float
    decoherence_limit: float
    full_opt0: float
    inj_limit: float
    zeta_inf_limit: float
    output_amp_only_limit: float
    amplification_crossover_eps_read: float


def limit_report(params: CavityParams, settings: SqueezeSettings) -> LimitReport:
    """Assemble every analytic limit for one parameter set."""
    require_valid(params, settings)
    beta, zeta = settings.beta, settings.zeta
    s_opt, q_opt, clamped = optimal_sensitivity(params, beta)
    return LimitReport(
        qcrb=qcrb(params, settings),
        qcrb_direct=qcrb_direct(params, settings),
        qcrb_direct_ratio=4.0,
        ref_no_isqz_nosqz=limit_q0_nosqz(params),
        ref_no_isqz_infsqz=limit_q0_infsqz(params),
        ref_no_isqz=limit_q0(params, beta),
        at_threshold=limit_threshold(params),
        optimal=s_opt,
        q_opt=q_opt,
        q_opt_clamped=clamped,
        q_th=q_threshold(params),
        decoherence_limit=decoherence_limit(params),
        full_opt0=full_opt_sensitivity(params, beta, zeta, 0.0),
        inj_limit=limit_injection(params, zeta),
        zeta_inf_limit=decoherence_limit(params),
        output_amp_only_limit=limit_output_amp_only(params),
        amplification_crossover_eps_read=amplification_crossover_eps_read(params, beta),
    )
