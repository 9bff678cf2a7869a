"""``plot`` command line: curves and dataset projections."""

from __future__ import annotations

import argparse
import sys

from .render import PlotSpec, plot_dataset_projection, plot_mistake_curves


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="plot")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curves", help="mean cumulative mistake curves")
    p.add_argument("--in", dest="infile", required=True, help="aggregate CSV")
    p.add_argument("--out", required=True, help="output PNG")
    p.add_argument("--traces", nargs="*", default=None,
                   help="per-seed trace CSVs (default: traces/ next to the aggregate)")

    p = sub.add_parser("data", help="dataset projection scatter")
    p.add_argument("--in", dest="infile", required=True, help="dataset file")
    p.add_argument("--out", required=True, help="output PNG")

    args = parser.parse_args(argv)
    try:
        if args.command == "curves":
            out = plot_mistake_curves(
                PlotSpec(aggregate_csv=args.infile, out_path=args.out,
                         trace_csvs=args.traces)
            )
        else:
            out = plot_dataset_projection(args.infile, args.out)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
