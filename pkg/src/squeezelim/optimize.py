"""Numerical machinery: gain optimization, bandwidth, SNR and SBP figures.

The 1-D searches are deliberately simple and derivative-free: the Omega=0
sensitivity is a quadratic-over-constant in q (unimodal on the open
threshold interval), and the sensitivity grows monotonically with |Omega|
below the free-spectral-range edge, so golden-section and bisection are
robust even next to the threshold boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import BracketError, NonConvergenceError
from .full_model import sensitivity_full
from .params import (
    CavityParams,
    SqueezeSettings,
    map_single_mode_to_full,
    norm_constants,
    q_threshold,
)
from .single_mode import optimal_sensitivity, sensitivity_sm_general
from .spectra import sensitivity_value

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

Q_BRACKET_GUARD = 1e-6     # fraction of q_th kept clear of the threshold
Q_TOL = 1e-10              # absolute tolerance of the gain search
BANDWIDTH_RTOL = 1e-11     # relative tolerance of the half-maximum search
SNR_GAIN_CAP = 1e12


def golden_section(f, a: float, b: float, tol: float, max_iter: int = 200):
    """Minimize a unimodal f on [a, b]; returns (x, f(x), n_evals)."""
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    n = 2
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
        n += 1
    else:
        raise NonConvergenceError(
            f"golden-section search did not reach tol={tol} in {max_iter} iterations"
        )
    x = 0.5 * (a + b)
    return x, f(x), n + 1


def _sensitivity_of_q(params: CavityParams, settings: SqueezeSettings, omega, model: str):
    """Objective factory: strain-referred sensitivity as a function of q."""
    if model == "single_mode":
        def f(q):
            return sensitivity_sm_general(params, replace(settings, q=q), omega)
    elif model == "full":
        N0 = norm_constants(params).N0

        def f(q):
            fp = map_single_mode_to_full(params, replace(settings, q=q))
            return sensitivity_full(fp, settings.beta, omega, N0)
    else:
        raise ValueError(f"unknown model {model!r}")
    return f


@dataclass(frozen=True)
class OptimizationResult:
    q_star: float
    S_star: float
    n_evals: int
    converged: bool
    clamped: bool


def numeric_optimal_gain(
    params: CavityParams,
    beta: float,
    zeta: float = 1.0,
    omega: float = 0.0,
    model: str = "single_mode",
) -> OptimizationResult:
    """Brute-force counterpart of the analytic optimal gain.

    Minimizes the strain-referred sensitivity over q on the guarded
    interval (-q_th + delta, q_th - delta), delta = 1e-6 q_th.  The clamped
    flag marks an optimum pressed against either boundary, which is where
    the analytic formula lands in the lossless or infinitely squeezed
    limits.
    """
    settings = SqueezeSettings(q=0.0, beta=beta, zeta=zeta)
    f = _sensitivity_of_q(params, settings, omega, model)
    q_th = q_threshold(params)
    delta = Q_BRACKET_GUARD * q_th
    lo, hi = -q_th + delta, q_th - delta
    q_star, s_star, n = golden_section(f, lo, hi, Q_TOL)
    clamped = (hi - q_star) < 10.0 * Q_TOL or (q_star - lo) < 10.0 * Q_TOL
    if clamped:
        q_star = hi if (hi - q_star) < 10.0 * Q_TOL else lo
        s_star = f(q_star)
        n += 1
    return OptimizationResult(
        q_star=q_star, S_star=s_star, n_evals=n, converged=True, clamped=clamped
    )


@dataclass(frozen=True)
class BandwidthResult:
    omega_hwhm: float
    S_peak: float
    sbp: float  # (1 / S_peak) * omega_hwhm


def bandwidth(
    params: CavityParams, settings: SqueezeSettings, model: str = "single_mode"
) -> BandwidthResult:
    """Half-width half-maximum of the sensitivity.

    Finds Omega > 0 with S_hh(Omega) = 2 S_hh(0) by growing a bracket
    geometrically from Omega = 1/(100 tau) and bisecting; fails with
    BracketError if no doubling occurs below Omega = pi/(4 tau), the edge
    of single-mode validity.
    """
    s0 = sensitivity_value(params, settings, 0.0, model)
    target = 2.0 * s0
    omega_max = math.pi / (4.0 * params.tau)

    lo = 0.0
    hi = min(1.0 / (100.0 * params.tau), omega_max)
    while sensitivity_value(params, settings, hi, model) < target:
        if hi >= omega_max:
            raise BracketError(
                f"sensitivity does not double below pi/(4 tau) = {omega_max:.6g} rad/s"
            )
        lo = hi
        hi = min(2.0 * hi, omega_max)

    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if sensitivity_value(params, settings, mid, model) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= BANDWIDTH_RTOL * hi:
            break
    else:
        raise NonConvergenceError("bandwidth bisection did not converge")

    w = 0.5 * (lo + hi)
    return BandwidthResult(omega_hwhm=w, S_peak=s0, sbp=w / s0)


def snr_gain(params: CavityParams, beta: float, q: float, omega: float = 0.0) -> float:
    """Sensitivity ratio S_hh(q=0) / S_hh(q) at one frequency (> 1 helps).

    Diverging ratios (lossless threshold operation) are capped at 1e12.
    """
    ref = sensitivity_sm_general(params, SqueezeSettings(q=0.0, beta=beta), omega)
    val = sensitivity_sm_general(params, SqueezeSettings(q=q, beta=beta), omega)
    if val <= ref / SNR_GAIN_CAP:
        return SNR_GAIN_CAP
    return min(ref / val, SNR_GAIN_CAP)


def sbp_gain(
    params: CavityParams,
    beta: float,
    reference: str = "external_only",
    model: str = "single_mode",
) -> float:
    """Sensitivity-bandwidth product at the optimal gain over a reference.

    SBP := (1 / S_hh(0)) * Omega_hwhm.  reference selects the baseline:
    "external_only" compares against (q=0, same beta); "none" against the
    coherent detector (q=0, beta=1), whose SBP is the standard
    sensitivity-bandwidth limit.
    """
    _, q_opt, _ = optimal_sensitivity(params, beta)
    opt = bandwidth(params, SqueezeSettings(q=q_opt, beta=beta), model)
    if reference == "external_only":
        ref_settings = SqueezeSettings(q=0.0, beta=beta)
    elif reference == "none":
        ref_settings = SqueezeSettings(q=0.0, beta=1.0)
    else:
        raise ValueError(f"unknown reference {reference!r}")
    ref = bandwidth(params, ref_settings, model)
    return opt.sbp / ref.sbp
