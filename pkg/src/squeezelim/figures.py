"""Built-in study presets emitting the reference datasets fig2..fig5.

Each dataset is one CSV per sub-panel with the defining parameters in the
header.  Only the physically pinned values are hard-coded (T_c = 0.01,
the quoted internal-loss levels, 15 dB external squeezing where a level is
stated); the sweep grids and curve families are documented defaults.

fig2  sensitivity improvement from optimal internal squeezing over the
      no-internal-squeezing case, vs readout loss (top: per external
      squeeze level; bottom: per internal loss at 15 dB)
fig3  internal squeezing alone (no external squeezing): SNR gain and
      bandwidth reduction vs internal gain, per readout loss
fig4  optimal internal squeezing vs the at-threshold reference, with the
      optimal gain relative to threshold (top: vs readout loss per squeeze
      level; bottom: vs internal loss per readout loss, 15 dB)
fig5  detection bandwidth and sensitivity-bandwidth product at optimal
      gain, vs readout loss, against the coherent-light detector and the
      external-squeezing-only baseline
"""

from __future__ import annotations

import math
import os

import numpy as np

from .optimize import bandwidth
from .params import (
    CavityParams,
    SqueezeSettings,
    beta_from_db,
    q_threshold,
)
from .runner import config_hash, fmt, write_csv
from .single_mode import (
    amplification_crossover_eps_read,
    limit_q0,
    limit_threshold,
    optimal_sensitivity,
    sensitivity_sm,
)
from .spectra import sensitivity_value

FIGURES = ("fig2", "fig3", "fig4", "fig5")

_BASE = dict(T_c=0.01, tau=1e-8)


def _params(eps_int, eps_read):
    return CavityParams(
        T_c=_BASE["T_c"], eps_int=eps_int, eps_read=eps_read, tau=_BASE["tau"]
    )


def _param_header(**kwargs):
    return ["params: " + " ".join(f"{k}={fmt(v)}" for k, v in kwargs.items())]


def _emit_fig2_panel(path, cfg_hash, curve_name, curve_values, eps_read_grid, fixed):
    """Improvement from optimal internal squeezing vs readout loss."""
    columns = (
        curve_name, "eps_read", "s_q0", "limit_q0", "s_opt", "q_opt",
        "improvement_total", "improvement_ref",
    )
    rows = []
    for cv in curve_values:
        for e_r in eps_read_grid:
            if curve_name == "beta_db":
                beta = beta_from_db(cv)
                p = _params(fixed["eps_int"], float(e_r))
            else:  # eps_int curves at fixed external squeezing
                beta = beta_from_db(fixed["beta_db"])
                p = _params(cv, float(e_r))
            s_q0 = sensitivity_sm(p, SqueezeSettings(q=0.0, beta=beta), 0.0)
            ref = limit_q0(p, beta)
            s_opt, q_opt, _ = optimal_sensitivity(p, beta)
            rows.append(
                (cv, e_r, s_q0, ref, s_opt, q_opt, s_q0 / s_opt, ref / s_opt)
            )
    extra = _param_header(T_c=_BASE["T_c"], tau=_BASE["tau"], **fixed) + [
        f"curves: {curve_name} in " + " ".join(fmt(v) for v in curve_values),
        "improvement_total = S_hh(q=0)/S_hh(q_opt); "
        "improvement_ref = limit_q0/S_hh(q_opt)",
    ]
    write_csv(path, os.path.basename(path), cfg_hash, columns, rows, extra)


def _emit_fig3(path, cfg_hash):
    """SNR gain and bandwidth reduction vs internal gain, no external squeezing."""
    eps_reads = (0.02, 0.05, 0.1, 0.2)
    p0 = _params(0.0, 0.0)
    q_grid = np.linspace(0.0, 0.98 * q_threshold(p0), 50)
    columns = (
        "eps_read", "q", "s_hh", "snr_gain", "omega_hwhm", "bw_ratio", "sbp_ratio",
    )
    rows = []
    for e_r in eps_reads:
        p = _params(0.0, e_r)
        base = bandwidth(p, SqueezeSettings(q=0.0, beta=1.0))
        for q in q_grid:
            st = SqueezeSettings(q=float(q), beta=1.0)
            s = sensitivity_sm(p, st, 0.0)
            bw = bandwidth(p, st)
            rows.append(
                (
                    e_r, q, s, base.S_peak / s, bw.omega_hwhm,
                    bw.omega_hwhm / base.omega_hwhm, bw.sbp / base.sbp,
                )
            )
    extra = _param_header(T_c=_BASE["T_c"], eps_int=0.0, beta_db=0.0, tau=_BASE["tau"]) + [
        "curves: eps_read in " + " ".join(fmt(v) for v in eps_reads),
        "snr_gain = S_hh(q=0)/S_hh(q); ratios vs the q=0 configuration",
    ]
    write_csv(path, os.path.basename(path), cfg_hash, columns, rows, extra)


def _emit_fig4_panel(path, cfg_hash, axis, curve_name, curve_values, axis_grid, fixed):
    """Optimal internal squeezing vs the at-threshold reference."""
    columns = (
        curve_name, axis, "s_opt", "at_threshold", "ratio_vs_threshold",
        "q_opt", "q_opt_over_q_th",
    )
    rows = []
    for cv in curve_values:
        for av in axis_grid:
            if curve_name == "beta_db":
                beta = beta_from_db(cv)
                p = _params(fixed["eps_int"], float(av))
            else:  # eps_read curves, axis = eps_int
                beta = beta_from_db(fixed["beta_db"])
                p = _params(float(av), cv)
            s_opt, q_opt, _ = optimal_sensitivity(p, beta)
            thr = limit_threshold(p)
            rows.append((cv, av, s_opt, thr, s_opt / thr, q_opt, q_opt / q_threshold(p)))
    extra = _param_header(T_c=_BASE["T_c"], tau=_BASE["tau"], **fixed) + [
        f"curves: {curve_name} in " + " ".join(fmt(v) for v in curve_values),
        "gain below zero marks the parametric-amplification regime",
    ]
    write_csv(path, os.path.basename(path), cfg_hash, columns, rows, extra)


def _emit_fig5(path, cfg_hash):
    """Bandwidth and SBP at optimal gain vs coherent / external-only baselines."""
    beta_dbs = (6.0, 10.0, 15.0)
    eps_int = 1e-4
    eps_read_grid = np.logspace(math.log10(1e-3), math.log10(0.5), 40)
    columns = (
        "beta_db", "eps_read", "q_opt",
        "omega_hwhm_opt", "omega_hwhm_ext", "omega_hwhm_ssbl",
        "s_opt", "s_ext", "s_ssbl",
        "bw_ratio_ssbl", "bw_ratio_ext",
        "sbp_ratio_ssbl", "sbp_ratio_ext", "sbp_ext_over_ssbl",
    )
    rows = []
    crossovers = []
    for bdb in beta_dbs:
        beta = beta_from_db(bdb)
        crossovers.append(
            amplification_crossover_eps_read(_params(eps_int, 0.0), beta)
        )
        for e_r in eps_read_grid:
            p = _params(eps_int, float(e_r))
            _, q_opt, _ = optimal_sensitivity(p, beta)
            opt = bandwidth(p, SqueezeSettings(q=q_opt, beta=beta))
            ext = bandwidth(p, SqueezeSettings(q=0.0, beta=beta))
            ssbl = bandwidth(p, SqueezeSettings(q=0.0, beta=1.0))
            rows.append(
                (
                    bdb, e_r, q_opt,
                    opt.omega_hwhm, ext.omega_hwhm, ssbl.omega_hwhm,
                    opt.S_peak, ext.S_peak, ssbl.S_peak,
                    opt.omega_hwhm / ssbl.omega_hwhm,
                    opt.omega_hwhm / ext.omega_hwhm,
                    opt.sbp / ssbl.sbp, opt.sbp / ext.sbp, ext.sbp / ssbl.sbp,
                )
            )
    extra = _param_header(T_c=_BASE["T_c"], eps_int=eps_int, tau=_BASE["tau"]) + [
        "curves: beta_db in " + " ".join(fmt(v) for v in beta_dbs),
        "sbp-unity contact (q_opt = 0) at eps_read = "
        + " ".join(fmt(v) for v in crossovers),
        "ssbl reference: q=0, beta=1; ext reference: q=0, same beta",
    ]
    write_csv(path, os.path.basename(path), cfg_hash, columns, rows, extra)


def emit_figure_datasets(figure: str, out_dir: str) -> list:
    """Write the CSV dataset(s) for one figure preset; returns the paths."""
    if figure not in FIGURES:
        raise ValueError(f"unknown figure {figure!r}; choose from {FIGURES}")
    os.makedirs(out_dir, exist_ok=True)
    cfg_hash = config_hash({"figure": figure, "base": _BASE})
    paths = []

    if figure == "fig2":
        grid = np.logspace(-4, math.log10(0.5), 60)
        top = os.path.join(out_dir, "fig2_top.csv")
        _emit_fig2_panel(
            top, cfg_hash, "beta_db", (6.0, 10.0, 15.0), grid, {"eps_int": 1e-3}
        )
        bottom = os.path.join(out_dir, "fig2_bottom.csv")
        _emit_fig2_panel(
            bottom, cfg_hash, "eps_int", (1e-4, 1e-3, 1e-2), grid, {"beta_db": 15.0}
        )
        paths += [top, bottom]
    elif figure == "fig3":
        path = os.path.join(out_dir, "fig3.csv")
        _emit_fig3(path, cfg_hash)
        paths.append(path)
    elif figure == "fig4":
        top = os.path.join(out_dir, "fig4_top.csv")
        _emit_fig4_panel(
            top, cfg_hash, "eps_read", "beta_db", (6.0, 10.0, 15.0),
            np.logspace(-3, math.log10(0.5), 50), {"eps_int": 1e-3},
        )
        bottom = os.path.join(out_dir, "fig4_bottom.csv")
        _emit_fig4_panel(
            bottom, cfg_hash, "eps_int", "eps_read", (0.01, 0.05, 0.1, 0.2),
            np.logspace(-5, -2, 50), {"beta_db": 15.0},
        )
        paths += [top, bottom]
    elif figure == "fig5":
        path = os.path.join(out_dir, "fig5.csv")
        _emit_fig5(path, cfg_hash)
        paths.append(path)
    return paths
