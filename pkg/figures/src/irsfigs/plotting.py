"""Rate-vs-elements comparison plots from sweep CSVs.

One series per (N, method) pair: solid line through the closed-form values,
markers with +/-1 standard-error bars for the Monte Carlo estimates, both in
the series color. Output is always PNG with version metadata stripped, so
identical inputs give identical bytes.
"""

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .schema import RateRow, load_rows  # noqa: E402

FIGURES = ("fig_a", "fig_b", "fig_c")
_PANEL_TAG = {"fig_a": "(a)", "fig_b": "(b)", "fig_c": "(c)"}


@dataclass(frozen=True)
class PlotSpec:
    input_csv: Path
    output_path: Path
    figure: str = "fig_b"
    dpi: int = 150

    def validate(self) -> None:
        if self.figure not in FIGURES:
            raise ValueError(f"figure must be one of {FIGURES}, "
                             f"got {self.figure!r}")
        if self.dpi < 1:
            raise ValueError(f"dpi must be >= 1, got {self.dpi}")
        if not Path(self.input_csv).exists():
            raise ValueError(f"input CSV not found: {self.input_csv}")


def series_groups(rows: list[RateRow]) -> dict[tuple[int, str], list[RateRow]]:
    """Rows keyed by (N, method), points sorted by total element count."""
    groups: dict[tuple[int, str], list[RateRow]] = {}
    for row in rows:
        groups.setdefault((row.N, row.method), []).append(row)
    out = {}
    for key in sorted(groups):
        out[key] = sorted(groups[key], key=lambda r: r.total_elements)
    return out


def build_figure(rows: list[RateRow], figure: str = "fig_b"):
    """Assemble the matplotlib figure; separated from render for tests."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for idx, ((n_surf, method), pts) in enumerate(series_groups(rows).items()):
        color = f"C{idx}"
        xs = [p.total_elements for p in pts]
        ax.errorbar(xs, [p.rate_mc for p in pts],
                    yerr=[p.mc_std_error for p in pts],
                    fmt="o", color=color, capsize=3,
                    label=f"N={n_surf}, {method}")
        ana = [(p.total_elements, p.rate_analytical) for p in pts
               if p.rate_analytical is not None]
        if ana:
            # tick markers keep single-point series visible (a one-point
            # line has no segments to draw)
            ax.plot([a[0] for a in ana], [a[1] for a in ana],
                    "-", marker="_", markersize=12, color=color)
    ax.set_xlabel("Total reflecting elements NL")
    ax.set_ylabel("Ergodic rate (bits/s/Hz)")
    ax.set_title(_PANEL_TAG[figure])
    ax.grid(True, alpha=0.3)
    if rows:
        ax.legend()
    return fig, ax


def render(spec: PlotSpec) -> Path:
    """Read the CSV, draw the figure, write a PNG; returns the output path."""
    spec.validate()
    rows = load_rows(spec.input_csv)
    fig, _ = build_figure(rows, spec.figure)
    out = Path(spec.output_path)
    try:
        # Software tag carries the renderer version; drop it so repeated
        # runs produce byte-identical files
        fig.savefig(out, format="png", dpi=spec.dpi,
                    metadata={"Software": None})
    finally:
        plt.close(fig)
    return out


def error_bar_misses(rows: list[RateRow]) -> list[tuple[RateRow, float]]:
    """Rows whose closed-form value falls outside the +/-1 SE Monte Carlo
    bar, with the deviation measured in standard errors.

    An empty result means every analytical point on the plot lies inside
    its error bar.
    """
    misses = []
    for row in rows:
        if row.rate_analytical is None:
            continue
        gap = abs(row.rate_analytical - row.rate_mc)
        if gap > row.mc_std_error:
            dev = gap / row.mc_std_error if row.mc_std_error > 0 else float("inf")
            misses.append((row, dev))
    return misses
