"""Command-line front end: figures <kind> --in ... --out ...

Exit codes: 0 rendered, 2 schema/usage errors (missing files, unknown
columns, mismatched axes).
"""

from __future__ import annotations

import argparse
from pathlib import Path

from .plots import FigureRequest, render
from .schemas import SchemaError

__all__ = ["main"]


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render figure layouts from tunneling-run CSV artifacts.")
    sub = parser.add_subparsers(dest="kind", required=True)

    ts = sub.add_parser("timeseries", help="rate/entropy curves versus time")
    ts.add_argument("--in", dest="inputs", action="append", required=True,
                    metavar="QUANTUM_CSV", help="quantum series CSV; repeatable")
    ts.add_argument("--classical", action="append", default=[], metavar="CLASSICAL_CSV",
                    help="classical series CSV; repeatable (one per curve or one shared)")
    ts.add_argument("--gamma", action="append", default=[], type=float,
                    help="coupling label per --in, in order; selects the line style")
    ts.add_argument("--layout", choices=("overlay", "panels"), default="overlay",
                    help="overlay: rate+entropy panels; panels: one panel per curve")
    ts.add_argument("--out", required=True, help="output SVG path")

    sw = sub.add_parser("sweep", help="summary statistics versus the swept parameter")
    sw.add_argument("--in", dest="inputs", action="append", required=True,
                    metavar="SUMMARY_CSV")
    sw.add_argument("--log-x", action="store_true", help="logarithmic parameter axis")
    sw.add_argument("--x-label", default="gamma", help="parameter axis label")
    sw.add_argument("--inset", help="spectrum CSV to draw as an inset")
    sw.add_argument("--out", required=True, help="output SVG path")

    sp = sub.add_parser("spectrum", help="spectral density versus energy")
    sp.add_argument("--in", dest="inputs", action="append", required=True,
                    metavar="SPECTRUM_CSV")
    sp.add_argument("--out", required=True, help="output SVG path")
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        request = FigureRequest(
            kind=args.kind,
            inputs=tuple(args.inputs),
            output=Path(args.out),
            classical=tuple(getattr(args, "classical", ())),
            gammas=tuple(getattr(args, "gamma", ())),
            layout=getattr(args, "layout", "overlay"),
            log_x=getattr(args, "log_x", False),
            x_label=getattr(args, "x_label", "gamma"),
            inset=Path(args.inset) if getattr(args, "inset", None) else None,
        )
        out = render(request)
    except (SchemaError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}")
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
