import argparse
import sys
from pathlib import Path

from .plotting import PlotSpec, render
from .schema import SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irsfigs",
        description="Render rate-vs-elements comparison plots from sweep CSVs")
    parser.add_argument("--csv", required=True, help="input sweep CSV")
    parser.add_argument("--fig", required=True, choices=("a", "b", "c"),
                        help="panel layout")
    parser.add_argument("--out", required=True, help="output PNG path")
    parser.add_argument("--dpi", type=int, default=150)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(input_csv=Path(args.csv), output_path=Path(args.out),
                    figure=f"fig_{args.fig}", dpi=args.dpi)
    try:
        render(spec)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
