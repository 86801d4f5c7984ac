"""Command-line entry point.

Subcommands: ``tau`` (print the correlation summary), ``plot`` (write SVG
and/or geometry JSON), ``generate`` (synthesize a dataset with a target
tau), and ``serve`` (run the HTTP service).  Exit codes: 0 success, 1 data
error, 2 usage error.  The RANKPLOT_OUT_DIR environment variable, when set,
is the base directory for relative output paths.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from ._anchoring import AnchorPolicy, TransformConfig, TransformMode
from .dataset import (
    ColumnSpec,
    DatasetError,
    RankedDataset,
    parse_csv,
    parse_worldbank_pair,
    to_csv,
)
from .geometry import ClockMode, geometry_document, tau_for_config
from .kendall import TauResult, generate_permutation_with_target_tau
from .render import PlotStyle, RenderConfig, UnknownStyleToken, render_styled

__all__ = ["main", "run"]

OUT_DIR_ENV = "RANKPLOT_OUT_DIR"


def _out_path(path: str) -> Path:
    base = os.environ.get(OUT_DIR_ENV)
    p = Path(path)
    if base and not p.is_absolute():
        return Path(base) / p
    return p


def _selector(token: str | None):
    if token is None:
        return None
    return int(token) if token.isdigit() else token


def _load_dataset(args) -> RankedDataset:
    data = Path(args.input).read_bytes()
    if args.worldbank:
        if not args.input2 or args.year is None:
            raise DatasetError("--worldbank needs --input2 and --year")
        return parse_worldbank_pair(data, Path(args.input2).read_bytes(), args.year)
    if args.x is None or args.y is None:
        raise DatasetError("--x and --y column selectors are required")
    spec = ColumnSpec(
        x_column=_selector(args.x),
        y_column=_selector(args.y),
        label_column=_selector(args.label),
    )
    return parse_csv(data, spec)


def _transform_config(args) -> TransformConfig:
    return TransformConfig(
        mode=TransformMode(args.mode),
        anchor_policy=AnchorPolicy(args.anchor),
        tie_epsilon=args.epsilon,
    )


def _summary_line(result: TauResult, m: int) -> str:
    counts = result.counts
    tau = "undefined" if result.tau is None else f"{result.tau:.6g}"
    return (
        f"tau={tau} c={counts.c} d={counts.d} t_x={counts.t_x} "
        f"t_y={counts.t_y} t_xy={counts.t_xy} total={counts.total} m={m}"
    )


def _add_ingest_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--input", required=True, help="input CSV path")
    parser.add_argument("--x", help="x column (name or 0-based index)")
    parser.add_argument("--y", help="y column (name or 0-based index)")
    parser.add_argument("--label", help="label column (name or 0-based index)")
    parser.add_argument(
        "--worldbank",
        action="store_true",
        help="treat --input/--input2 as World Bank indicator exports",
    )
    parser.add_argument("--input2", help="second indicator export (worldbank mode)")
    parser.add_argument("--year", type=int, help="year column to join on")
    parser.add_argument(
        "--epsilon", type=float, default=0.0, help="tie tolerance (default exact)"
    )


def _add_transform_flags(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--mode",
        choices=[m.value for m in TransformMode],
        default=TransformMode.TRANSLATE_ROTATE.value,
    )
    parser.add_argument(
        "--anchor",
        choices=[p.value for p in AnchorPolicy],
        default=AnchorPolicy.MIN_X_THEN_MIN_Y.value,
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankplot",
        description="Kendall tau-b and rigid-transform rank correlation plots",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_tau = sub.add_parser("tau", help="compute tau-b and print the summary line")
    _add_ingest_flags(p_tau)

    p_plot = sub.add_parser("plot", help="render an SVG and/or geometry JSON")
    _add_ingest_flags(p_plot)
    _add_transform_flags(p_plot)
    p_plot.add_argument(
        "--style",
        default="segments",
        help="comma-joined layer tokens: lines,segments,points,density,clock,heatmap",
    )
    p_plot.add_argument(
        "--clock-mode",
        choices=[m.value for m in ClockMode],
        default=ClockMode.CALIBRATED.value,
    )
    p_plot.add_argument("--out", help="SVG output path")
    p_plot.add_argument("--json", dest="json_out", help="geometry JSON output path")
    p_plot.add_argument("--width", type=int, default=720)
    p_plot.add_argument("--height", type=int, default=560)

    p_gen = sub.add_parser("generate", help="write a CSV with a target tau")
    p_gen.add_argument("--m", type=int, required=True, help="observation count")
    p_gen.add_argument("--tau", type=float, required=True, help="target tau in [-1, 1]")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True, help="CSV output path")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--store", help="directory for write-through persistence")
    p_serve.add_argument(
        "--cors", help="comma-separated allowed origins for the web UI"
    )
    p_serve.add_argument("--ui", help="directory of static web UI files to serve")
    return parser


def run(argv: list[str]) -> int:
    """Execute one invocation; returns the process exit code."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "tau":
            dataset = _load_dataset(args)
            config = TransformConfig(tie_epsilon=args.epsilon)
            result = tau_for_config(dataset, config)
            print(_summary_line(result, len(dataset)))
            return 0

        if args.command == "plot":
            try:
                style = PlotStyle.from_tokens(args.style, _transform_config(args))
            except UnknownStyleToken as exc:
                parser.error(str(exc))  # exits 2
            dataset = _load_dataset(args)
            config = _transform_config(args)
            result = tau_for_config(dataset, config)
            if args.out:
                svg = render_styled(
                    dataset,
                    style,
                    RenderConfig(width=args.width, height=args.height),
                    clock_mode=ClockMode(args.clock_mode),
                )
                path = _out_path(args.out)
                path.parent.mkdir(parents=True, exist_ok=True)
                path.write_text(svg, encoding="utf-8")
            if args.json_out:
                doc = geometry_document(dataset, config)
                path = _out_path(args.json_out)
                path.parent.mkdir(parents=True, exist_ok=True)
                path.write_text(json.dumps(doc), encoding="utf-8")
            print(_summary_line(result, len(dataset)))
            return 0

        if args.command == "generate":
            dataset = generate_permutation_with_target_tau(args.m, args.tau, args.seed)
            path = _out_path(args.out)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(to_csv(dataset), encoding="utf-8")
            result = tau_for_config(dataset, TransformConfig())
            print(_summary_line(result, len(dataset)))
            return 0

        if args.command == "serve":
            import uvicorn

            from .service import create_app

            origins = [o.strip() for o in args.cors.split(",")] if args.cors else ()
            app = create_app(
                store_dir=args.store, cors_origins=origins, ui_dir=args.ui
            )
            uvicorn.run(app, host=args.host, port=args.port)
            return 0
    except (DatasetError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable: argparse enforces a known command")


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
