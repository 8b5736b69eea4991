"""make-figures: regenerate the paper-style figures from engine CSV output.

    make-figures --in <dir> --out <dir> [--only fig2,fig3,...]

Expected inputs in --in (produced by the phaseonium-engine CLI):

    fig2   temp_ratio.csv + temp_ratio_boundary.csv
    fig3   engine_sweep.csv
    cycle  a cascade_steps_*.csv (the first one in sorted order)
    fig4   mi_vs_work.csv

Figures whose inputs are absent are skipped with a note unless they were
requested explicitly via --only, in which case the run fails.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import (
    FIGURE_IDS,
    plot_cycle,
    plot_efficiency_map,
    plot_mi_work,
    plot_temp_ratio,
)


def _render(figure_id: str, in_dir: Path, out_dir: Path) -> Path | None:
    if figure_id == "fig2":
        csv = in_dir / "temp_ratio.csv"
        boundary = in_dir / "temp_ratio_boundary.csv"
        if not (csv.exists() and boundary.exists()):
            return None
        return plot_temp_ratio(csv, boundary, out_dir / "fig2_temp_ratio.png")[-1]
    if figure_id == "fig3":
        csv = in_dir / "engine_sweep.csv"
        if not csv.exists():
            return None
        return plot_efficiency_map(csv, out_dir / "fig3_efficiency_map.png")[-1]
    if figure_id == "cycle":
        candidates = sorted(in_dir.glob("cascade_steps_*.csv"))
        if not candidates:
            return None
        return plot_cycle(candidates[0], out_dir / "cycle_cascade.png")[-1]
    if figure_id == "fig4":
        csv = in_dir / "mi_vs_work.csv"
        if not csv.exists():
            return None
        return plot_mi_work(csv, out_dir / "fig4_mi_vs_work.png")[-1]
    raise ValueError(f"unknown figure id {figure_id!r}; known: {', '.join(FIGURE_IDS)}")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="make-figures", description=__doc__)
    parser.add_argument("--in", dest="in_dir", type=Path, required=True)
    parser.add_argument("--out", dest="out_dir", type=Path, required=True)
    parser.add_argument(
        "--only",
        type=lambda s: [x.strip() for x in s.split(",") if x.strip()],
        default=None,
        help="comma-separated figure ids (default: all available)",
    )
    args = parser.parse_args(argv)
    wanted = args.only if args.only is not None else list(FIGURE_IDS)
    for figure_id in wanted:
        if figure_id not in FIGURE_IDS:
            print(f"error: unknown figure id {figure_id!r}", file=sys.stderr)
            return 1

    args.out_dir.mkdir(parents=True, exist_ok=True)
    made = 0
    try:
        for figure_id in wanted:
            out = _render(figure_id, args.in_dir, args.out_dir)
            if out is None:
                if args.only is not None:
                    print(f"error: inputs for {figure_id} not found in {args.in_dir}", file=sys.stderr)
                    return 1
                print(f"{figure_id}: inputs not found, skipped")
                continue
            print(f"{figure_id}: {out}")
            made += 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if made == 0:
        print("error: nothing to do", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
