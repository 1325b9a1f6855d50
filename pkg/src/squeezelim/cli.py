"""Command-line entry point.

    squeezelim run <config.json>
    squeezelim figure <fig2|fig3|fig4|fig5> --out <dir>
    squeezelim limits --tc ... --eps-int ... --eps-read ... --sqz-db ...

Exit codes: 0 success, 1 configuration error, 2 numerical failure
(threshold hit or non-convergence at an identified point).
SQUEEZELIM_THREADS caps sweep parallelism.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import BracketError, ConfigError, NonConvergenceError, ThresholdError
from .figures import FIGURES, emit_figure_datasets
from .params import CavityParams, SqueezeSettings, beta_from_db, validate
from .runner import config_hash, json_ready, load_config, run, write_json, _limits_payload


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="squeezelim",
        description="Quantum-noise limits of lossy cavity-enhanced "
        "interferometers with internal and external squeezing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a scenario configuration file")
    p_run.add_argument("config", help="path to a JSON scenario configuration")

    p_fig = sub.add_parser("figure", help="emit a built-in study dataset")
    p_fig.add_argument("figure", choices=FIGURES)
    p_fig.add_argument("--out", required=True, help="output directory")

    p_lim = sub.add_parser("limits", help="print the analytic limit report")
    p_lim.add_argument("--tc", type=float, required=True, help="coupling power transmissivity")
    p_lim.add_argument("--eps-int", type=float, default=0.0, help="internal loss per round trip")
    p_lim.add_argument("--eps-read", type=float, default=0.0, help="readout loss")
    p_lim.add_argument("--eps-inj", type=float, default=0.0, help="injection loss")
    p_lim.add_argument("--sqz-db", type=float, default=0.0, help="external squeezing [dB]")
    p_lim.add_argument("--zeta", type=float, default=1.0, help="output amplification (power)")
    p_lim.add_argument("--tau", type=float, default=1e-8, help="single-pass time [s]")
    p_lim.add_argument("--out", default=None, help="write JSON here instead of stdout")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            cfg = load_config(args.config)
            path = run(cfg)
            print(f"wrote {path}")
        elif args.command == "figure":
            for path in emit_figure_datasets(args.figure, args.out):
                print(f"wrote {path}")
        elif args.command == "limits":
            params = CavityParams(
                T_c=args.tc,
                eps_int=args.eps_int,
                eps_read=args.eps_read,
                eps_inj=args.eps_inj,
                tau=args.tau,
            )
            settings = SqueezeSettings(
                q=0.0, beta=beta_from_db(args.sqz_db), zeta=args.zeta
            )
            report = validate(params, settings)
            if not report.ok:
                raise ConfigError("parameters", "; ".join(report.violations))
            payload = _limits_payload(params, settings)
            if args.out:
                write_json(args.out, "limits", config_hash(vars(args)), payload)
                print(f"wrote {args.out}")
            else:
                print(json.dumps(json_ready(payload), indent=2, sort_keys=True))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (ThresholdError, BracketError, NonConvergenceError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
