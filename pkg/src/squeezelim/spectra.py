"""Sensitivity spectra over frequency grids, with provenance metadata."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .full_model import sensitivity_full
from .params import (
    CavityParams,
    SqueezeSettings,
    map_single_mode_to_full,
    norm_constants,
)
from .single_mode import sensitivity_sm_general


@dataclass(frozen=True)
class SensitivitySpectrum:
    """Strain-referred noise spectral density on a frequency grid.

    omega is strictly increasing (rad/s); S_hh entries are positive and
    finite for below-threshold parameters and even in omega.  meta snapshots
    the parameters and the model that produced the values.
    """

    omega: np.ndarray
    S_hh: np.ndarray
    meta: dict


def default_omega_grid(params: CavityParams, points: int = 200) -> np.ndarray:
    """Logarithmic grid from Omega = 1/(1000 tau) to 1/(2 tau).

    Resolves both the sub-linewidth plateau and the rolloff while staying
    within single-mode validity.
    """
    return np.logspace(
        np.log10(1.0 / (1000.0 * params.tau)),
        np.log10(1.0 / (2.0 * params.tau)),
        points,
    )


def sensitivity_value(
    params: CavityParams,
    settings: SqueezeSettings,
    omega,
    model: str = "single_mode",
):
    """Strain-referred sensitivity at one frequency (or array) for a model."""
    if model == "single_mode":
        return sensitivity_sm_general(params, settings, omega)
    if model == "full":
        fp = map_single_mode_to_full(params, settings)
        return sensitivity_full(fp, settings.beta, omega, norm_constants(params).N0)
    raise ValueError(f"unknown model {model!r}")


def sensitivity_spectrum(
    params: CavityParams,
    settings: SqueezeSettings,
    omega=None,
    model: str = "single_mode",
) -> SensitivitySpectrum:
    """Evaluate S_hh on a grid with either noise model."""
    if omega is None:
        omega = default_omega_grid(params)
    omega = np.asarray(omega, dtype=float)
    if omega.ndim != 1 or omega.size < 1 or np.any(np.diff(omega) <= 0.0):
        raise ValueError("omega must be a strictly increasing 1-D grid")

    values = sensitivity_value(params, settings, omega, model)

    meta = {
        "model": model,
        "cavity": params,
        "squeeze": settings,
    }
    return SensitivitySpectrum(omega=omega, S_hh=np.asarray(values), meta=meta)
