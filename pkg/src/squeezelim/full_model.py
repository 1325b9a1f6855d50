"""Exact frequency-domain two-photon input-output model of the sensor cavity.

Fields are tracked in the two-photon quadrature picture: the amplitude
quadrature x is amplified by G per pass through the gain medium, the phase
quadrature y (which carries the signal) is deamplified by 1/G.  One cavity
round trip reflects off the back mirror (r_b), traverses the medium twice,
passes the internal-loss beamsplitter (r_int), and accumulates the
propagation phase e^{2i*Omega*tau}.  The injected field v passes an
injection-loss beamsplitter (r_i) before entering through the coupling
mirror (r_c); the outgoing field is amplified by zeta^{+1/2} in y (and
deamplified in x) before the readout-loss beamsplitter (r_d).

Port naming:  v (injected external field), n_i (injection-loss vacuum),
n_c (back-mirror vacuum), n_int (internal-loss vacuum), n_d (readout-loss
vacuum), s (signal, phase quadrature only).

Normalization: an all-vacuum input yields unit noise spectral density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ThresholdError
from .params import DENOMINATOR_GUARD, FullModelParams

NOISE_PORTS = ("v", "n_i", "n_c", "n_int", "n_d")
PORTS = NOISE_PORTS + ("s",)


def threshold_gain(fp: FullModelParams) -> float:
    """Gain at which the amplified quadrature turns unstable at resonance.

    The x-quadrature round-trip map diverges when G^2 r_b r_c t_int = 1,
    i.e. G_th = (r_b r_c sqrt(1 - eps_int))^(-1/2).  A zero-linewidth
    cavity (r_b = r_c = 1, lossless) has G_th = 1.
    """
    loop = fp.r_b * fp.r_c * fp.t_int
    if loop <= 0.0:
        return math.inf
    return loop ** -0.5


def _check_below_threshold(fp: FullModelParams) -> None:
    loop = fp.r_b * fp.r_c * fp.t_int
    if max(fp.G ** 2, fp.G ** -2) * loop >= 1.0:
        raise ThresholdError(
            f"G={fp.G!r} outside the stable interval "
            f"({loop ** 0.5:.9g}, {loop ** -0.5:.9g})"
        )


def _loop_denominator(fp: FullModelParams, omega, g2):
    """1 - r_c r_b t_int g^2 e^{2i Omega tau} with an underflow guard."""
    phase = np.exp(2j * np.asarray(omega, dtype=float) * fp.tau)
    den = 1.0 - fp.r_c * fp.r_b * fp.t_int * g2 * phase
    if np.any(np.abs(den) < DENOMINATOR_GUARD):
        raise ThresholdError("round-trip denominator vanished (on threshold)")
    return den, phase


@dataclass(frozen=True)
class PortCoefficients:
    """Complex transfer coefficients into the two output quadratures.

    coeff_x / coeff_y map each input port (and the signal s) to the output
    quadratures d^x and d^y; readout loss and the output amplifier are
    already folded in, so summing S_in * |coeff|^2 over all ports gives the
    output spectral density directly.
    """

    omega: float
    coeff_x: dict
    coeff_y: dict


def _quadrature_coeffs(fp: FullModelParams, omega, g: float, amp: float):
    """Coefficients for the quadrature whose per-pass gain is g.

    amp is the output-amplifier amplitude factor applied before the
    readout-loss beamsplitter (sqrt(zeta) in y, 1/sqrt(zeta) in x).
    """
    den, phase2 = _loop_denominator(fp, omega, g * g)
    half_phase = np.exp(1j * np.asarray(omega, dtype=float) * fp.tau)

    tc, tb, tint, ti, td = fp.t_c, fp.t_b, fp.t_int, fp.t_i, fp.t_d
    rc, rb, rint, ri, rd = fp.r_c, fp.r_b, fp.r_int, fp.r_i, fp.r_d

    circ = rb * tint * g * g * phase2  # round trip seen from the coupling mirror
    pre = amp * td

    # Intracavity field b per unit input, then output d = t_c b - r_c (input).
    cv = pre * ti * (tc * tc * circ / den - rc)
    cni = pre * ri * (tc * tc * circ / den - rc)
    cnc = pre * tc * tb * tint * g * half_phase / den
    cnint = pre * tc * rint / den
    cs = pre * tc * tint * g * half_phase / den
    cnd = rd * np.ones_like(den)
    return {"v": cv, "n_i": cni, "n_c": cnc, "n_int": cnint, "n_d": cnd, "s": cs}


def io_coefficients(fp: FullModelParams, omega: float) -> PortCoefficients:
    """Solve the input-output relations at one sideband frequency."""
    _check_below_threshold(fp)
    sz = math.sqrt(fp.zeta)
    cx = _quadrature_coeffs(fp, omega, fp.G, 1.0 / sz)
    cy = _quadrature_coeffs(fp, omega, 1.0 / fp.G, sz)
    cx["s"] = np.zeros_like(cx["s"])  # signal enters the phase quadrature only
    return PortCoefficients(
        omega=omega,
        coeff_x={k: complex(v) for k, v in cx.items()},
        coeff_y={k: complex(v) for k, v in cy.items()},
    )


def noise_psd_sum(fp: FullModelParams, beta: float, omega, quadrature: str = "y"):
    """Output noise density as an explicit sum over input ports.

    Total output variance = sum over ports of S_in |coeff|^2, with the
    injected field carrying S_vv = 1/beta in the squeezed (readout)
    quadrature and beta in the anti-squeezed one; every loss port carries
    vacuum.  This is the independent oracle for the closed-form expression.
    """
    _check_below_threshold(fp)
    sz = math.sqrt(fp.zeta)
    if quadrature == "y":
        coeffs = _quadrature_coeffs(fp, omega, 1.0 / fp.G, sz)
        s_v = 1.0 / beta
    elif quadrature == "x":
        coeffs = _quadrature_coeffs(fp, omega, fp.G, 1.0 / sz)
        s_v = beta
    else:
        raise ValueError(f"unknown quadrature {quadrature!r}")
    total = s_v * np.abs(coeffs["v"]) ** 2
    for port in ("n_i", "n_c", "n_int", "n_d"):
        total = total + np.abs(coeffs[port]) ** 2
    return total if np.ndim(total) else float(total)


def noise_psd_closed(fp: FullModelParams, beta: float, omega, quadrature: str = "y"):
    """Closed-form output noise density of the homodyne readout quadrature.

    Groups the port sum into three terms S1, S2, S3 sharing the resonance
    denominator |D|^2 = G^4 + R_b R_c (1-eps_int)
    - 2 G^2 sqrt(R_b R_c (1-eps_int)) cos(2 Omega tau).
    The x-quadrature follows from the symmetry (G, beta, zeta) ->
    (1/G, 1/beta, 1/zeta).
    """
    _check_below_threshold(fp)
    if quadrature == "x":
        flipped = FullModelParams(
            r_c=fp.r_c, r_b=fp.r_b, r_int=fp.r_int, r_i=fp.r_i, r_d=fp.r_d,
            G=1.0 / fp.G, tau=fp.tau, zeta=1.0 / fp.zeta,
        )
        return noise_psd_closed(flipped, 1.0 / beta, omega, quadrature="y")
    if quadrature != "y":
        raise ValueError(f"unknown quadrature {quadrature!r}")

    G, zeta = fp.G, fp.zeta
    Rb, Rc = fp.r_b ** 2, fp.r_c ** 2
    Tb, Tc = 1.0 - Rb, 1.0 - Rc
    eps_int = fp.r_int ** 2
    eps_i = fp.r_i ** 2
    eps_read = fp.r_d ** 2

    cos2 = np.cos(2.0 * np.asarray(omega, dtype=float) * fp.tau)
    loop = math.sqrt(Rb * Rc * (1.0 - eps_int))
    Dsq = G ** 4 + Rb * Rc * (1.0 - eps_int) - 2.0 * G ** 2 * loop * cos2
    if np.any(Dsq < DENOMINATOR_GUARD ** 2):
        raise ThresholdError("resonance denominator vanished (on threshold)")

    s_inj = eps_i + (1.0 - eps_i) / beta  # injected field after injection loss
    s1 = -Rb * Rc + zeta * (G ** 2 * Tc * (Tb - G ** 2) + Rb * s_inj)
    s2 = G ** 4 + Rb * Rc - zeta * (s_inj * (Rb + G ** 4 * Rc) + G ** 2 * Tb * Tc)
    s3 = 2.0 * G ** 2 * (-1.0 + zeta * (1.0 - (1.0 - beta) * eps_i) / beta)

    out = 1.0 - (1.0 - eps_read) / Dsq * (s1 * eps_int + s2 + s3 * loop * cos2)
    return out if np.ndim(out) else float(out)


def transfer_sq_closed(fp: FullModelParams, omega):
    """Dimensionless spectral shape of the signal power transfer.

    |T(Omega)|^2 = zeta G^2 T_c (1-eps_read)(1-eps_int) / |D(Omega)|^2.
    Strain referencing (the 8 pi P_c / (hbar lambda c) signal normalization)
    is applied by the sensitivity evaluators, not here.
    """
    _check_below_threshold(fp)
    G = fp.G
    Rb, Rc = fp.r_b ** 2, fp.r_c ** 2
    Tc = 1.0 - Rc
    eps_int = fp.r_int ** 2
    eps_read = fp.r_d ** 2

    cos2 = np.cos(2.0 * np.asarray(omega, dtype=float) * fp.tau)
    loop = math.sqrt(Rb * Rc * (1.0 - eps_int))
    Dsq = G ** 4 + Rb * Rc * (1.0 - eps_int) - 2.0 * G ** 2 * loop * cos2
    if np.any(Dsq < DENOMINATOR_GUARD ** 2):
        raise ThresholdError("resonance denominator vanished (on threshold)")

    out = fp.zeta * G ** 2 * Tc * (1.0 - eps_read) * (1.0 - eps_int) / Dsq
    return out if np.ndim(out) else float(out)


def sensitivity_full(fp: FullModelParams, beta: float, omega, N0: float):
    """Strain-referred sensitivity N0 * S_n(Omega) / |T(Omega)|^2."""
    return N0 * noise_psd_closed(fp, beta, omega) / transfer_sq_closed(fp, omega)
