"""Command-line front end.

Subcommands: ``sweep``, ``compare-subsets``, ``plot``, ``pattern`` (with
``synth`` / ``import`` / ``shadow``), and ``replay``.  Every run writes a
JSON manifest recording the resolved configuration; ``replay`` re-executes a
manifest and reproduces the primary outputs byte for byte.

Exit codes: 0 success, 2 bad flags or argument values, 3 unreadable or
malformed pattern/sweep files.

``DIRMOD_THREADS`` caps sweep concurrency (0 = one worker per CPU, unset =
serial).  Results do not depend on the worker count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .antenna import canonical_antenna
from .engine import DmScheme, DmSessionConfig
from .pattern import (
    PatternFormatError,
    apply_shadowing,
    parse_pattern_csv,
    synthesize_pattern,
    write_pattern_csv,
)
from .sweep import (
    ber_sweep,
    extract_regions,
    parse_sweep_csv,
    subset_table,
    write_sweep_csv,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FILE = 3


def _fail_usage(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _fail_file(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_FILE


def _parse_ports(text: str) -> tuple[int, ...]:
    try:
        ports = tuple(int(tok) for tok in text.split(",") if tok.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"ports must be comma-separated integers, got {text!r}")
    if not ports:
        raise argparse.ArgumentTypeError("ports list is empty")
    return ports


def _parse_float_list(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(tok) for tok in text.split(",") if tok.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("list is empty")
    return vals


def _workers_from_env() -> int | None:
    raw = os.environ.get("DIRMOD_THREADS")
    if raw is None or raw.strip() == "":
        return None
    try:
        val = int(raw)
    except ValueError:
        raise SystemExit(_fail_usage(f"DIRMOD_THREADS must be an integer, got {raw!r}"))
    if val < 0:
        raise SystemExit(_fail_usage(f"DIRMOD_THREADS must be >= 0, got {val}"))
    return val


def _load_pattern(path: str | None, synth_step: float):
    """Resolve the session pattern: a CSV file if given, else the canonical
    synthesized set.  Returns (pattern, source descriptor for the manifest)."""
    if path is None:
        return (
            synthesize_pattern(canonical_antenna(), step_deg=synth_step),
            {"kind": "synth", "step_deg": synth_step},
        )
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise PatternFormatError(f"cannot read pattern file {path}: {exc}") from exc
    return parse_pattern_csv(text), {"kind": "file", "path": str(p.resolve())}


def _write_manifest(
    path: Path, command: str, args: dict, pattern_source: dict | None, outputs: list[str]
) -> None:
    payload = {
        "tool": "dirmod",
        "version": __version__,
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "command": command,
        "args": args,
        "pattern_source": pattern_source,
        "outputs": outputs,
    }
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _run_sweep(args: dict) -> int:
    if not (0.0 <= args["lu"] < 360.0):
        return _fail_usage(f"--lu must be in [0, 360), got {args['lu']}")
    if args["symbols"] < 1:
        return _fail_usage(f"--symbols must be >= 1, got {args['symbols']}")
    if args["seed"] < 0 or args["seed"] >= 2**64:
        return _fail_usage(f"--seed must be an unsigned 64-bit integer, got {args['seed']}")
    if not (0.0 < args["step"] <= 360.0) or abs(360.0 / args["step"] - round(360.0 / args["step"])) > 1e-9:
        return _fail_usage(f"--step must divide 360 evenly, got {args['step']}")
    if not (0.0 < args["threshold"] <= 1.0):
        return _fail_usage(f"--threshold must be in (0, 1], got {args['threshold']}")

    try:
        pattern, source = _load_pattern(args["pattern"], args["step"])
    except PatternFormatError as exc:
        return _fail_file(str(exc))

    try:
        session = DmSessionConfig(
            scheme=DmScheme(args["scheme"]),
            active_port_ids=tuple(args["ports"]),
            phi_lu_deg=args["lu"],
            snr_db=args["snr_db"],
            n_symbols=args["symbols"],
            seed=args["seed"],
            reference_port_id=args["reference_port"],
            an_power_ratio=args["an_power_ratio"],
        )
        out_dir = Path(args["out_dir"])
        out_dir.mkdir(parents=True, exist_ok=True)
        sweep = ber_sweep(session, pattern, step_deg=args["step"], workers=_workers_from_env())
        report = extract_regions(sweep, args["threshold"])
    except ValueError as exc:
        return _fail_usage(str(exc))

    sweep_path = out_dir / "sweep.csv"
    regions_path = out_dir / "regions.json"
    sweep_path.write_text(write_sweep_csv(sweep), encoding="utf-8")
    regions_path.write_text(report.to_json(), encoding="utf-8")
    _write_manifest(
        out_dir / "manifest.json", "sweep", args, source, [sweep_path.name, regions_path.name]
    )
    print(f"wrote {sweep_path} and {regions_path}")
    return EXIT_OK


def _run_compare_subsets(args: dict) -> int:
    if args["symbols"] < 1:
        return _fail_usage(f"--symbols must be >= 1, got {args['symbols']}")
    for lu in args["lu_list"]:
        if not (0.0 <= lu < 360.0):
            return _fail_usage(f"--lu-list entries must be in [0, 360), got {lu}")
    try:
        pattern, source = _load_pattern(args["pattern"], args["step"])
    except PatternFormatError as exc:
        return _fail_file(str(exc))
    try:
        out_dir = Path(args["out_dir"])
        out_dir.mkdir(parents=True, exist_ok=True)
        report = subset_table(
            pattern,
            snr_db=args["snr_db"],
            n_symbols=args["symbols"],
            seed=args["seed"],
            phi_lu_list=args["lu_list"],
            subsets=[args["subsets"]] if args["subsets"] else None,
            include_switched_full=args["include_switched_full"],
            threshold=args["threshold"],
            step_deg=args["step"],
            workers=_workers_from_env(),
        )
    except ValueError as exc:
        return _fail_usage(str(exc))
    json_path = out_dir / "table.json"
    csv_path = out_dir / "table.csv"
    json_path.write_text(report.to_json(), encoding="utf-8")
    csv_path.write_text(report.to_csv(), encoding="utf-8")
    _write_manifest(
        out_dir / "manifest.json", "compare-subsets", args, source, [json_path.name, csv_path.name]
    )
    print(f"wrote {json_path} and {csv_path}")
    return EXIT_OK


def _run_plot(args: dict) -> int:
    curves = []
    labels = args["labels"] or [Path(p).stem for p in args["inputs"]]
    if len(labels) != len(args["inputs"]):
        return _fail_usage(
            f"got {len(labels)} labels for {len(args['inputs'])} input files"
        )
    for label, path in zip(labels, args["inputs"]):
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            return _fail_file(f"cannot read sweep file {path}: {exc}")
        try:
            angles, ber, _ = parse_sweep_csv(text)
        except ValueError as exc:
            return _fail_file(f"{path}: {exc}")
        curves.append((label, angles, ber))

    from .plot import render_sweep_svg

    out = Path(args["out"])
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    render_sweep_svg(
        curves, str(out), threshold=args["threshold"], lu_deg=args["lu"], title=args["title"]
    )
    manifest = out.with_name(out.stem + ".manifest.json")
    plot_args = dict(args)
    plot_args["inputs"] = [str(Path(p).resolve()) for p in args["inputs"]]
    _write_manifest(manifest, "plot", plot_args, None, [out.name])
    print(f"wrote {out}")
    return EXIT_OK


def _run_pattern(args: dict) -> int:
    mode = args["pattern_cmd"]
    out = Path(args["out"])
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    source = None
    try:
        if mode == "synth":
            if not (0.0 < args["step"] <= 360.0):
                return _fail_usage(f"--step must be in (0, 360], got {args['step']}")
            pattern = synthesize_pattern(canonical_antenna(), step_deg=args["step"])
            source = {"kind": "synth", "step_deg": args["step"]}
        else:
            src = Path(args["src"])
            try:
                text = src.read_text(encoding="utf-8")
            except OSError as exc:
                return _fail_file(f"cannot read pattern file {src}: {exc}")
            pattern = parse_pattern_csv(text)
            source = {"kind": "file", "path": str(src.resolve())}
            if mode == "shadow":
                pattern = apply_shadowing(
                    pattern, args["center"], args["width"], args["depth_db"]
                )
    except PatternFormatError as exc:
        return _fail_file(str(exc))
    except ValueError as exc:
        return _fail_usage(str(exc))
    out.write_text(write_pattern_csv(pattern), encoding="utf-8")
    manifest = out.with_name(out.stem + ".manifest.json")
    _write_manifest(manifest, "pattern", args, source, [out.name])
    print(f"wrote {out}")
    return EXIT_OK


_RUNNERS = {
    "sweep": _run_sweep,
    "compare-subsets": _run_compare_subsets,
    "plot": _run_plot,
    "pattern": _run_pattern,
}


def _run_replay(args: dict) -> int:
    path = Path(args["manifest"])
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        return _fail_file(f"cannot read manifest {path}: {exc}")
    except json.JSONDecodeError as exc:
        return _fail_file(f"manifest {path} is not valid JSON: {exc}")
    command = payload.get("command")
    if command not in _RUNNERS:
        return _fail_usage(f"manifest command {command!r} is not replayable")
    replay_args = dict(payload.get("args", {}))
    if args["out_dir"] is not None:
        if command in ("sweep", "compare-subsets"):
            replay_args["out_dir"] = args["out_dir"]
        elif command == "plot" or command == "pattern":
            old = Path(replay_args["out"])
            replay_args["out"] = str(Path(args["out_dir"]) / old.name)
    # tuple-typed fields arrive from JSON as lists
    for key in ("ports", "lu_list", "subsets", "labels", "inputs"):
        if key in replay_args and isinstance(replay_args[key], list):
            replay_args[key] = tuple(replay_args[key])
    return _RUNNERS[command](replay_args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dirmod",
        description="Directional-modulation azimuth security simulator",
    )
    parser.add_argument("--version", action="version", version=f"dirmod {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run a BER sweep over azimuth")
    p_sweep.add_argument("--scheme", choices=["switched", "multiport"], default="switched")
    p_sweep.add_argument("--ports", type=_parse_ports, default=(1, 2, 3, 4, 5),
                         help="comma-separated active port ids (default 1,2,3,4,5)")
    p_sweep.add_argument("--lu", type=float, default=45.0, help="secure (LU) azimuth, degrees")
    p_sweep.add_argument("--snr-db", type=float, default=12.0)
    p_sweep.add_argument("--symbols", type=int, default=100000)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--step", type=float, default=1.0, help="sweep grid step, degrees")
    p_sweep.add_argument("--reference-port", type=int, default=None,
                         help="pin the switched-scheme reference port")
    p_sweep.add_argument("--an-power-ratio", type=float, default=0.0,
                         help="multiport artificial-noise power relative to signal")
    p_sweep.add_argument("--threshold", type=float, default=1e-2,
                         help="secure-region BER threshold (default 1e-2)")
    p_sweep.add_argument("--pattern", default=None,
                         help="pattern CSV to use instead of the canonical synthesized set")
    p_sweep.add_argument("--out-dir", default=".", help="directory for sweep.csv / regions.json")

    p_cmp = sub.add_parser("compare-subsets", help="compare port subsets in a table")
    p_cmp.add_argument("--snr-db", type=float, default=12.0)
    p_cmp.add_argument("--symbols", type=int, default=20000)
    p_cmp.add_argument("--seed", type=int, default=0)
    p_cmp.add_argument("--step", type=float, default=1.0)
    p_cmp.add_argument("--lu-list", type=_parse_float_list, default=(45.0, 135.0, 225.0, 315.0),
                       help="comma-separated steering directions to average over")
    p_cmp.add_argument("--subsets", type=_parse_ports, default=None,
                       help="evaluate a single custom port subset instead of the built-in four")
    p_cmp.add_argument("--include-switched-full", action="store_true",
                       help="prepend a switched-scheme row for the full port set")
    p_cmp.add_argument("--threshold", type=float, default=1e-2)
    p_cmp.add_argument("--pattern", default=None)
    p_cmp.add_argument("--out-dir", default=".")

    p_plot = sub.add_parser("plot", help="render sweep CSV(s) to an SVG")
    p_plot.add_argument("inputs", nargs="+", help="sweep CSV file(s)")
    p_plot.add_argument("--labels", type=lambda s: [t.strip() for t in s.split(",")],
                        default=None, help="comma-separated curve labels")
    p_plot.add_argument("--lu", type=float, default=None, help="annotate the LU direction")
    p_plot.add_argument("--threshold", type=float, default=1e-2)
    p_plot.add_argument("--title", default=None)
    p_plot.add_argument("--out", default="sweep.svg")

    p_pat = sub.add_parser("pattern", help="synthesize, validate, or shadow pattern files")
    pat_sub = p_pat.add_subparsers(dest="pattern_cmd", required=True)
    p_synth = pat_sub.add_parser("synth", help="write the canonical five-port pattern")
    p_synth.add_argument("--step", type=float, default=1.0)
    p_synth.add_argument("--out", default="pattern.csv")
    p_imp = pat_sub.add_parser("import", help="validate and normalize a pattern CSV")
    p_imp.add_argument("src")
    p_imp.add_argument("--out", default="pattern.csv")
    p_shadow = pat_sub.add_parser("shadow", help="apply a raised-cosine shadowing mask")
    p_shadow.add_argument("src")
    p_shadow.add_argument("--center", type=float, required=True)
    p_shadow.add_argument("--width", type=float, required=True)
    p_shadow.add_argument("--depth-db", type=float, required=True)
    p_shadow.add_argument("--out", default="pattern.csv")

    p_replay = sub.add_parser("replay", help="re-run a recorded manifest")
    p_replay.add_argument("manifest")
    p_replay.add_argument("--out-dir", default=None,
                          help="redirect outputs (default: original locations)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    args = vars(ns)
    command = args.pop("command")
    if command == "replay":
        return _run_replay(args)
    return _RUNNERS[command](args)


if __name__ == "__main__":
    raise SystemExit(main())
