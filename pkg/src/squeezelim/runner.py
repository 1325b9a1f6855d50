"""Deterministic scenario runner: config parsing, sweeps, CSV/JSON output.

Output files are byte-identical across runs of the same configuration on
the same build: numbers are serialized with 12 significant digits, rows
are emitted in sweep order, and headers carry the tool version and a hash
of the canonical configuration instead of timestamps.
"""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import __version__
from .errors import ConfigError
from .optimize import bandwidth, numeric_optimal_gain, snr_gain
from .params import (
    CavityParams,
    SqueezeSettings,
    beta_from_db,
    norm_constants,
    q_threshold,
    validate,
)
from .single_mode import (
    limit_q0,
    limit_report,
    limit_threshold,
    optimal_sensitivity,
    qcrb,
)
from .spectra import default_omega_grid, sensitivity_spectrum, sensitivity_value

SBP_DEFINITION = "SBP = omega_hwhm / S_hh(0): peak inverse sensitivity times HWHM bandwidth"

SWEEP_AXES = ("eps_read", "eps_int", "eps_inj", "beta_db", "q", "zeta", "omega")
TASKS = ("spectrum", "limits", "optimize", "bandwidth", "sweep")
MODELS = ("single_mode", "full", "both")

RESULT_COLUMNS = (
    "axis_value",
    "S_hh0",
    "q_opt",
    "q_star",
    "omega_hwhm",
    "sbp",
    "snr_gain",
    "qcrb",
    "ref_no_isqz",
    "at_threshold",
    "optimal",
    "decoherence_limit",
    "model",
)


def fmt(x) -> str:
    """Serialize one value with 12 significant digits (bit-stable)."""
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return "true" if x else "false"
    return f"{float(x):.12g}"


def json_ready(obj):
    """Round floats for stable JSON output."""
    if isinstance(obj, dict):
        return {k: json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_ready(v) for v in obj]
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(fmt(obj))
    return obj


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    start: float
    stop: float
    points: int
    scale: str = "linear"

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.logspace(np.log10(self.start), np.log10(self.stop), self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class ScenarioConfig:
    cavity: CavityParams
    squeeze: SqueezeSettings
    model: str = "single_mode"
    task: str = "limits"
    sweep: SweepSpec | None = None
    out_path: str = "squeezelim_out.csv"
    out_format: str = "csv"
    raw: dict | None = None


def _get(section: dict, field: str, path: str, default=None, required=False):
    if field not in section:
        if required:
            raise ConfigError(f"{path}.{field}", "missing required field")
        return default
    return section[field]


def _number(section, field, path, default=None, required=False):
    val = _get(section, field, path, default, required)
    if val is None:
        return None
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{path}.{field}", f"expected a number, got {val!r}")
    return float(val)


def parse_config(data: dict) -> ScenarioConfig:
    """Build a validated ScenarioConfig from a JSON-compatible mapping."""
    if not isinstance(data, dict):
        raise ConfigError("<root>", "configuration must be a JSON object")
    unknown = set(data) - {"cavity", "squeeze", "model", "task", "sweep", "output"}
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown top-level section")

    cav = data.get("cavity", {})
    if not isinstance(cav, dict):
        raise ConfigError("cavity", "must be an object")
    params = CavityParams(
        T_c=_number(cav, "T_c", "cavity", required=True),
        eps_int=_number(cav, "eps_int", "cavity", 0.0),
        eps_read=_number(cav, "eps_read", "cavity", 0.0),
        eps_inj=_number(cav, "eps_inj", "cavity", 0.0),
        tau=_number(cav, "tau", "cavity", 1e-8),
        L=_number(cav, "L", "cavity", CavityParams.L),
        P_c=_number(cav, "P_c", "cavity", CavityParams.P_c),
        wavelength=_number(cav, "wavelength", "cavity", CavityParams.wavelength),
    )

    sqz = data.get("squeeze", {})
    if not isinstance(sqz, dict):
        raise ConfigError("squeeze", "must be an object")
    if "beta" in sqz and "beta_db" in sqz:
        raise ConfigError("squeeze.beta", "give either beta or beta_db, not both")
    if "beta_db" in sqz:
        beta = beta_from_db(_number(sqz, "beta_db", "squeeze"))
    else:
        beta = _number(sqz, "beta", "squeeze", 1.0)
    settings = SqueezeSettings(
        q=_number(sqz, "q", "squeeze", 0.0),
        beta=beta,
        zeta=_number(sqz, "zeta", "squeeze", 1.0),
    )

    model = _get(data, "model", "<root>", "single_mode")
    if model not in MODELS:
        raise ConfigError("model", f"must be one of {MODELS}, got {model!r}")
    task = _get(data, "task", "<root>", "limits")
    if task not in TASKS:
        raise ConfigError("task", f"must be one of {TASKS}, got {task!r}")

    sweep = None
    if task == "sweep":
        sw = data.get("sweep")
        if not isinstance(sw, dict):
            raise ConfigError("sweep", "task 'sweep' requires a sweep object")
        axis = _get(sw, "axis", "sweep", required=True)
        if axis not in SWEEP_AXES:
            raise ConfigError("sweep.axis", f"must be one of {SWEEP_AXES}, got {axis!r}")
        start = _number(sw, "start", "sweep", required=True)
        stop = _number(sw, "stop", "sweep", required=True)
        points = _get(sw, "points", "sweep", required=True)
        if not isinstance(points, int) or points < 2:
            raise ConfigError("sweep.points", f"must be an integer >= 2, got {points!r}")
        scale = _get(sw, "scale", "sweep", "linear")
        if scale not in ("linear", "log"):
            raise ConfigError("sweep.scale", f"must be 'linear' or 'log', got {scale!r}")
        if not start < stop:
            raise ConfigError("sweep.start", f"start {start!r} must be < stop {stop!r}")
        if scale == "log" and start <= 0.0:
            raise ConfigError("sweep.start", "log scale requires start > 0")
        sweep = SweepSpec(axis=axis, start=start, stop=stop, points=points, scale=scale)

    out = data.get("output", {})
    if not isinstance(out, dict):
        raise ConfigError("output", "must be an object")
    out_format = _get(out, "format", "output", "csv")
    if out_format not in ("csv", "json"):
        raise ConfigError("output.format", f"must be 'csv' or 'json', got {out_format!r}")
    default_name = f"squeezelim_{task}.{out_format}"
    out_path = _get(out, "path", "output", default_name)

    report = validate(params, settings)
    if not report.ok:
        raise ConfigError("cavity/squeeze", "; ".join(report.violations))

    return ScenarioConfig(
        cavity=params,
        squeeze=settings,
        model=model,
        task=task,
        sweep=sweep,
        out_path=out_path,
        out_format=out_format,
        raw=data,
    )


def load_config(path: str) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            "<file>", f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return parse_config(data)


def config_hash(data) -> str:
    canon = json.dumps(data, sort_keys=True, separators=(",", ":"), default=repr)
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def n_threads() -> int:
    raw = os.environ.get("SQUEEZELIM_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def header_lines(dataset: str, cfg_hash: str, extra=()) -> list:
    lines = [
        f"# squeezelim {__version__}",
        f"# dataset: {dataset}",
        f"# config-hash: {cfg_hash}",
        f"# sbp-definition: {SBP_DEFINITION}",
    ]
    lines.extend(f"# {item}" for item in extra)
    return lines


def write_csv(path: str, dataset: str, cfg_hash: str, columns, rows, extra=()) -> None:
    lines = header_lines(dataset, cfg_hash, extra)
    lines.append("# columns: " + ",".join(columns))
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_json(path: str, dataset: str, cfg_hash: str, payload) -> None:
    doc = {
        "tool": f"squeezelim {__version__}",
        "dataset": dataset,
        "config_hash": cfg_hash,
        "sbp_definition": SBP_DEFINITION,
        "data": json_ready(payload),
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _apply_axis(cfg: ScenarioConfig, axis: str, value: float):
    params, settings = cfg.cavity, cfg.squeeze
    omega = 0.0
    if axis in ("eps_read", "eps_int", "eps_inj"):
        params = replace(params, **{axis: float(value)})
    elif axis == "beta_db":
        settings = replace(settings, beta=beta_from_db(float(value)))
    elif axis == "q":
        settings = replace(settings, q=float(value))
    elif axis == "zeta":
        settings = replace(settings, zeta=float(value))
    elif axis == "omega":
        omega = float(value)
    return params, settings, omega


def _limits_payload(params: CavityParams, settings: SqueezeSettings) -> dict:
    rep = limit_report(params, settings)
    payload = {k: getattr(rep, k) for k in rep.__dataclass_fields__}
    payload["N0"] = norm_constants(params).N0
    payload["beta"] = settings.beta
    payload["zeta"] = settings.zeta
    return payload


def _sweep_row(cfg: ScenarioConfig, model: str, value: float):
    params, settings, omega = _apply_axis(cfg, cfg.sweep.axis, value)
    report = validate(params, settings)
    if not report.ok:
        point = f"sweep point {cfg.sweep.axis}={fmt(value)}"
        if report.q_margin <= 0.0:
            from .errors import ThresholdError

            raise ThresholdError(f"{point}: {'; '.join(report.violations)}")
        raise ConfigError(point, "; ".join(report.violations))
    s_opt, q_opt, _ = optimal_sensitivity(params, settings.beta)
    res = numeric_optimal_gain(
        params, settings.beta, settings.zeta, omega, model=model
    )
    bw = bandwidth(params, settings, model=model)
    # S_hh0 reports the sensitivity at the sweep's evaluation frequency
    # (Omega = 0 unless the sweep axis is omega).
    s0 = float(sensitivity_value(params, settings, omega, model))
    return (
        value,
        s0,
        q_opt,
        res.q_star,
        bw.omega_hwhm,
        bw.sbp,
        snr_gain(params, settings.beta, settings.q, omega),
        qcrb(params, settings),
        limit_q0(params, settings.beta),
        limit_threshold(params),
        s_opt,
        norm_constants(params).N0 * params.eps_int,
        model,
    )


def run(cfg: ScenarioConfig) -> str:
    """Execute one scenario; returns the output path."""
    cfg_hash = config_hash(cfg.raw if cfg.raw is not None else "{}")
    params, settings = cfg.cavity, cfg.squeeze
    models = ("single_mode", "full") if cfg.model == "both" else (cfg.model,)

    if cfg.task == "limits":
        payload = _limits_payload(params, settings)
        if cfg.out_format == "csv":
            cols = sorted(k for k in payload if k != "q_opt_clamped")
            write_csv(
                cfg.out_path, "limits", cfg_hash, cols, [[payload[c] for c in cols]]
            )
        else:
            write_json(cfg.out_path, "limits", cfg_hash, payload)
        return cfg.out_path

    if cfg.task == "optimize":
        rows = []
        for model in models:
            s_opt, q_opt, clamped = optimal_sensitivity(params, settings.beta)
            res = numeric_optimal_gain(
                params, settings.beta, settings.zeta, 0.0, model=model
            )
            rows.append(
                {
                    "model": model,
                    "q_opt_analytic": q_opt,
                    "q_opt_clamped": clamped,
                    "S_opt_analytic": s_opt,
                    "q_star": res.q_star,
                    "S_star": res.S_star,
                    "n_evals": res.n_evals,
                    "converged": res.converged,
                    "boundary": res.clamped,
                }
            )
        if cfg.out_format == "csv":
            cols = list(rows[0].keys())
            write_csv(
                cfg.out_path, "optimize", cfg_hash, cols,
                [[r[c] for c in cols] for r in rows],
            )
        else:
            write_json(cfg.out_path, "optimize", cfg_hash, rows)
        return cfg.out_path

    if cfg.task == "bandwidth":
        rows = []
        for model in models:
            bw = bandwidth(params, settings, model=model)
            rows.append(
                {
                    "model": model,
                    "omega_hwhm": bw.omega_hwhm,
                    "S_peak": bw.S_peak,
                    "sbp": bw.sbp,
                }
            )
        if cfg.out_format == "csv":
            cols = list(rows[0].keys())
            write_csv(
                cfg.out_path, "bandwidth", cfg_hash, cols,
                [[r[c] for c in cols] for r in rows],
            )
        else:
            write_json(cfg.out_path, "bandwidth", cfg_hash, rows)
        return cfg.out_path

    if cfg.task == "spectrum":
        omega = default_omega_grid(params)
        columns = ["omega"] + [f"S_hh_{m}" for m in models]
        data = [omega]
        for model in models:
            data.append(sensitivity_spectrum(params, settings, omega, model).S_hh)
        rows = list(zip(*data))
        if cfg.out_format == "csv":
            write_csv(cfg.out_path, "spectrum", cfg_hash, columns, rows)
        else:
            write_json(
                cfg.out_path, "spectrum", cfg_hash,
                [dict(zip(columns, row)) for row in rows],
            )
        return cfg.out_path

    # task == "sweep"
    values = cfg.sweep.values()
    jobs = [(model, float(v)) for model in models for v in values]
    workers = n_threads()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda mv: _sweep_row(cfg, mv[0], mv[1]), jobs))
    else:
        rows = [_sweep_row(cfg, model, v) for model, v in jobs]

    columns = (cfg.sweep.axis,) + RESULT_COLUMNS[1:]
    extra = [f"sweep: {cfg.sweep.axis} {cfg.sweep.scale} "
             f"[{fmt(cfg.sweep.start)}, {fmt(cfg.sweep.stop)}] x{cfg.sweep.points}"]
    if cfg.out_format == "csv":
        write_csv(cfg.out_path, "sweep", cfg_hash, columns, rows, extra)
    else:
        write_json(
            cfg.out_path, "sweep", cfg_hash,
            [dict(zip(columns, row)) for row in rows],
        )
    return cfg.out_path
