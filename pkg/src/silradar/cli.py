"""Command-line interface.

Subcommands:
    run       execute the full pipeline and write CSVs, figures, report
    antenna   antenna-only analysis (pattern CSV + gain breakdown)
    validate  parse and validate a scenario without running anything

Exit codes: 0 success, 2 scenario error, 3 runtime/numeric error,
4 estimation error.
"""

import argparse
import sys
from pathlib import Path

from .errors import EstimationError, ScenarioError, SilRadarError
from .pipeline import analyze_antenna, run_pipeline
from .scenario import parse_scenario

EXIT_OK = 0
EXIT_SCENARIO = 2
EXIT_RUNTIME = 3
EXIT_ESTIMATION = 4


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="silradar",
        description="Self-injection-locked CW radar vital-sign simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--scenario", type=Path, default=None,
                       help="scenario file (defaults apply when omitted)")
        p.add_argument("--out", type=Path, default=None,
                       help="output directory (overrides run.output_dir)")
        p.add_argument("--seed", type=int, default=None,
                       help="override run.seed (64-bit unsigned)")
        p.add_argument("--duration", type=float, default=None,
                       help="override run.duration_s in seconds")
        p.add_argument("--no-figures", action="store_true",
                       help="skip PNG rendering")

    add_common(sub.add_parser("run", help="run the vital-sign pipeline"))
    add_common(sub.add_parser("antenna", help="analyze the antenna system"))
    add_common(sub.add_parser("validate", help="validate a scenario file"))
    return parser


def _load_scenario(args):
    text = ""
    if args.scenario is not None:
        text = args.scenario.read_text(encoding="utf-8")
    overrides = {}
    if args.seed is not None:
        overrides["run.seed"] = args.seed
    if args.duration is not None:
        overrides["run.duration_s"] = args.duration
    if args.out is not None:
        overrides["run.output_dir"] = str(args.out)
    return parse_scenario(text, overrides=overrides)


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        scenario = _load_scenario(args)
        if args.command == "validate":
            print("scenario OK")
            return EXIT_OK

        if args.command == "run":
            report = run_pipeline(scenario, out_dir=args.out,
                                  render_figures=not args.no_figures)
            print(f"respiration_est_hz: {report.respiration_est_hz:.6g} "
                  f"(true {report.respiration_true_hz:.6g}, "
                  f"err {report.respiration_abs_err_hz:.3g})")
            print(f"heartbeat_est_hz: {report.heartbeat_est_hz:.6g} "
                  f"(true {report.heartbeat_true_hz:.6g}, "
                  f"err {report.heartbeat_abs_err_hz:.3g})")
            print(f"antenna_gain_dbi: {report.antenna_gain_dbi:.4g}")
            print(f"link_snr_db: {report.link_snr_db:.4g}")
            out = args.out if args.out is not None else scenario.output_dir
            print(f"outputs written to {out}")
            return EXIT_OK

        analysis, _ = analyze_antenna(scenario, out_dir=args.out,
                                      render_figures=not args.no_figures)
        print(f"directivity_dbi: {analysis.directivity_dbi:.4f}")
        print(f"efficiency_term_db: {analysis.efficiency_term_db:.4f}")
        print(f"fss_delta_db: {analysis.fss_delta_db:.4f}")
        print(f"antenna_gain_dbi: {analysis.total_gain_dbi:.4f}")
        for cut in ("e_plane", "h_plane"):
            fn = analysis.first_null_deg[cut]
            fn_txt = "absent" if fn is None else f"{fn:.2f}"
            print(f"{cut}: hpbw {analysis.hpbw_deg[cut]:.2f} deg, "
                  f"first-null width {fn_txt} deg")
        for n, h in enumerate(analysis.prs_heights_m):
            print(f"prs_resonance_n{n}_m: {h:.6g}")
        out = args.out if args.out is not None else scenario.output_dir
        print(f"outputs written to {out}")
        return EXIT_OK

    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    except EstimationError as exc:
        print(f"estimation error: {exc}", file=sys.stderr)
        return EXIT_ESTIMATION
    except (SilRadarError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
