"""Figure rendering for the CLI report path.

Each helper takes the records a subcommand just wrote and saves one PNG
next to the delimited output.  Figures are a convenience view; the CSV
and JSON files remain the canonical results.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_STYLE = {
    "figure.figsize": (6.4, 4.0),
    "figure.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 9,
}


def _new_axes(title: str):
    plt.rcParams.update(_STYLE)
    fig, ax = plt.subplots()
    ax.set_title(title)
    return fig, ax


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path)
    plt.close(fig)
    return path


def save_ratio_plot(records: Sequence[Mapping], path: Path, *, title: str) -> Path:
    """Per-pattern ratios against the predicted density line."""
    fig, ax = _new_axes(title)
    ratios = [r["ratio"] for r in records]
    kappas = [r["kappa"] for r in records]
    ax.scatter(kappas, ratios, s=18, label="measured ratio")
    if records:
        ax.axhline(records[0]["predicted"], color="crimson", lw=1, label="predicted")
    ax.set_xlabel("kappa = k/n")
    ax.set_ylabel("ratio")
    ax.legend()
    return _save(fig, path)


def save_decay_plot(rows: Sequence[Mapping], path: Path, *, total: int, title: str) -> Path:
    """Measured divisibility counts against the predicted power-law ceiling."""
    fig, ax = _new_axes(title)
    qs = [row["q"] for row in rows]
    counts = [max(row["count"], 1) for row in rows]
    ceiling = [total * q ** (-row["predicted_exponent"]) for q, row in zip(qs, rows)]
    ax.loglog(qs, counts, "o", ms=4, label="measured count")
    ax.loglog(qs, ceiling, "-", lw=1, color="crimson", label="total * q^(-theta)")
    ax.set_xlabel("q")
    ax.set_ylabel("members divisible by q")
    ax.legend()
    return _save(fig, path)


def save_deviation_plot(records: Sequence[Mapping], path: Path, *, title: str, target: float = 0.5) -> Path:
    """Residue-split deviations |plus/total - 1/2| per experiment."""
    fig, ax = _new_axes(title)
    devs = [r["deviation"] for r in records]
    ax.bar(range(len(devs)), devs, width=0.8)
    ax.set_xlabel("experiment #")
    ax.set_ylabel(f"|plus/total - {target}|")
    return _save(fig, path)


def save_dyadic_plot(records: Sequence[Mapping], path: Path, *, title: str) -> Path:
    """Dyadic square-divisibility sums next to their reference curve."""
    fig, ax = _new_axes(title)
    a_vals = [r["a"] for r in records]
    ax.plot(a_vals, [max(r["value"], 1e-9) for r in records], "o-", ms=4, label="sum over window")
    ax.plot(a_vals, [r["reference"] for r in records], "--", lw=1, color="crimson", label="reference")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("window start A")
    ax.set_ylabel("sum of counts")
    ax.legend()
    return _save(fig, path)


def save_ff_plot(records: Sequence[Mapping], path: Path, *, title: str) -> Path:
    """f(p), F(p) against the reference bounds."""
    fig, ax = _new_axes(title)
    ps = [r["p"] for r in records]
    ax.plot(ps, [r["f"] for r in records], "o-", ms=4, label="f(p)")
    ax.plot(ps, [r["F"] for r in records], "s-", ms=4, label="F(p)")
    ax.plot(ps, [r["bound_12p14"] for r in records], "--", lw=1, label="12 p^(1/4)")
    ax.plot(ps, [r["bound_p319"] for r in records], ":", lw=1, label="p^(3/19)")
    ax.set_xlabel("p")
    ax.set_ylabel("cube dimension")
    ax.legend()
    return _save(fig, path)
