"""Average minimum monitoring success probability vs. sweep value.

Reads the sweep runner's results.csv and draws one line per scheme with
standard-error bars. The input file is never modified, and the rendered
output is deterministic for a deterministic input.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
# stable element ids so identical inputs render byte-identical SVGs
matplotlib.rcParams["svg.hashsalt"] = "cfsurv-plots"
import matplotlib.pyplot as plt  # noqa: E402

EXPECTED_COLUMNS = ("scheme", "sweep_var", "sweep_value", "trial",
                    "min_success_prob", "per_link_success_prob",
                    "greedy_iterations", "bisection_iterations", "error")

# fixed scheme -> style map so legends stay stable across figures
STYLE = {
    "cf-greedy-ppa": dict(color="#1f77b4", marker="o", linestyle="-"),
    "cf-greedy-epa": dict(color="#ff7f0e", marker="s", linestyle="--"),
    "cf-random-ppa": dict(color="#2ca02c", marker="^", linestyle="-."),
    "cf-random-epa": dict(color="#d62728", marker="v", linestyle=":"),
    "col-greedy-ppa": dict(color="#9467bd", marker="D", linestyle="-"),
    "col-greedy-epa": dict(color="#8c564b", marker="P", linestyle="--"),
    "col-random-ppa": dict(color="#e377c2", marker="X", linestyle="-."),
    "col-random-epa": dict(color="#7f7f7f", marker="*", linestyle=":"),
}
FALLBACK_STYLE = dict(color="#17becf", marker=".", linestyle="-")

AXIS_LABEL = {"M": "number of monitoring nodes M",
              "K": "number of untrusted pairs K"}


class SchemaError(ValueError):
    """results.csv does not match the sweep runner's schema."""


@dataclass
class PlotSpec:
    input_csv: str
    axis: str                       # "M" or "K"
    output: str
    schemes: tuple = ()             # empty filter means every scheme
    fmt: str = "svg"

    def __post_init__(self):
        if self.axis not in ("M", "K"):
            raise ValueError("axis must be 'M' or 'K'")


def load_rows(path: str, axis: str) -> list[dict]:
    """Parse and validate results.csv; keeps only clean rows on this axis."""
    p = Path(path)
    if not p.exists():
        raise SchemaError(f"input file not found: {path}")
    with open(p, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        if tuple(header) != EXPECTED_COLUMNS:
            raise SchemaError(
                f"{path}: header {header!r} does not match the sweep "
                f"runner schema {list(EXPECTED_COLUMNS)!r}")
        rows = []
        for i, rec in enumerate(reader, start=2):
            if len(rec) != len(EXPECTED_COLUMNS):
                raise SchemaError(f"{path}:{i}: expected "
                                  f"{len(EXPECTED_COLUMNS)} fields, "
                                  f"got {len(rec)}")
            row = dict(zip(EXPECTED_COLUMNS, rec))
            if row["error"]:
                continue
            if row["sweep_var"] != axis:
                continue
            try:
                rows.append({
                    "scheme": row["scheme"],
                    "sweep_value": int(row["sweep_value"]),
                    "min_success_prob": float(row["min_success_prob"]),
                })
            except ValueError as exc:
                raise SchemaError(f"{path}:{i}: bad numeric field: {exc}") \
                    from None
    if not rows:
        raise SchemaError(f"{path}: no usable rows for axis {axis!r}")
    return rows


def group_stats(rows: list[dict], schemes: tuple = ()) -> dict:
    """{scheme: (values, means, std_errors)} sorted by sweep value."""
    wanted = set(schemes) if schemes else None
    groups: dict = {}
    for r in rows:
        if wanted is not None and r["scheme"] not in wanted:
            continue
        groups.setdefault(r["scheme"], {}).setdefault(
            r["sweep_value"], []).append(r["min_success_prob"])
    out = {}
    for scheme in sorted(groups):
        values = sorted(groups[scheme])
        means = np.array([np.mean(groups[scheme][v]) for v in values])
        ses = np.array([
            (np.std(groups[scheme][v], ddof=1)
             / np.sqrt(len(groups[scheme][v])))
            if len(groups[scheme][v]) > 1 else 0.0
            for v in values])
        out[scheme] = (np.array(values), means, ses)
    return out


def render(spec: PlotSpec) -> dict:
    """Draw the comparison figure; returns the plotted group statistics."""
    rows = load_rows(spec.input_csv, spec.axis)
    stats = group_stats(rows, spec.schemes)
    if not stats:
        raise SchemaError("scheme filter matched no rows")

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for scheme, (values, means, ses) in stats.items():
        style = STYLE.get(scheme, FALLBACK_STYLE)
        ax.errorbar(values, means, yerr=ses, label=scheme, capsize=3,
                    **style)
    ax.set_xlabel(AXIS_LABEL[spec.axis])
    ax.set_ylabel("average minimum monitoring success probability")
    ax.set_ylim(0.0, 1.0)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(spec.output, format=spec.fmt,
                metadata={"Date": None} if spec.fmt == "svg" else None)
    plt.close(fig)
    return stats


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="plot",
        description="Plot average minimum monitoring success probability "
                    "per scheme from a sweep results.csv.")
    ap.add_argument("--in", dest="input_csv", required=True,
                    help="path to results.csv")
    ap.add_argument("--axis", required=True, choices=("M", "K"),
                    help="sweep variable on the x axis")
    ap.add_argument("--out", required=True, help="output image path")
    ap.add_argument("--scheme", action="append", default=[],
                    help="scheme id filter; repeatable; default all")
    ap.add_argument("--format", default=None,
                    help="image format (default: from --out suffix, "
                         "else svg)")
    args = ap.parse_args(argv)

    fmt = args.format or (Path(args.out).suffix.lstrip(".") or "svg")
    try:
        spec = PlotSpec(input_csv=args.input_csv, axis=args.axis,
                        output=args.out, schemes=tuple(args.scheme),
                        fmt=fmt)
        render(spec)
    except (SchemaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
