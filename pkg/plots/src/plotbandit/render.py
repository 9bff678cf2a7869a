"""Figure rendering: cumulative-mistake curves and dataset projections."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import (
    find_sibling_traces,
    read_aggregate_csv,
    read_dataset_file,
    verify_against_traces,
)

DPI = 150

#: class colors for the projection scatter: class 1 red, 2 green, 3 blue
CLASS_COLORS = ("tab:red", "tab:green", "tab:blue", "tab:orange", "tab:purple")


@dataclass(frozen=True)
class PlotSpec:
    aggregate_csv: str
    out_path: str
    trace_csvs: Optional[Sequence[str]] = None  # None -> auto-discover
    xlabel: str = "round t"
    ylabel: str = "mean cumulative mistakes"


def plot_mistake_curves(spec: PlotSpec) -> str:
    """One curve per algorithm from an aggregate CSV.

    Before rendering, re-aggregates the per-seed traces (when available)
    and requires agreement within 1e-12, and validates that every curve is
    monotone nondecreasing.
    """
    traces = (
        list(spec.trace_csvs)
        if spec.trace_csvs is not None
        else find_sibling_traces(spec.aggregate_csv)
    )
    if traces:
        verify_against_traces(spec.aggregate_csv, traces)
    rows = read_aggregate_csv(spec.aggregate_csv)
    series: dict[str, list[tuple[int, float]]] = {}
    for row in rows:
        series.setdefault(row["algorithm"], []).append(
            (row["t"], row["mean_cum_mistakes"])
        )
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for name in series:
        pts = sorted(series[name])
        ys = [y for _, y in pts]
        if any(b < a for a, b in zip(ys, ys[1:])):
            plt.close(fig)
            raise ValueError(f"curve {name!r} is not monotone nondecreasing")
        ax.plot([t for t, _ in pts], ys, label=name)
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel)
    if series:
        ax.legend()
    Path(spec.out_path).parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.out_path, dpi=DPI)
    plt.close(fig)
    return spec.out_path


def plot_dataset_projection(dataset_path: str, out_path: str) -> str:
    """Scatter of the first two coordinates, colored by class."""
    ds = read_dataset_file(dataset_path)
    if ds["d"] < 2:
        raise ValueError("projection needs at least two coordinates")
    fig, ax = plt.subplots(figsize=(5, 5))
    for k in range(1, ds["K"] + 1):
        mask = ds["y"] == k
        if mask.any():
            ax.scatter(
                ds["X"][mask, 0], ds["X"][mask, 1], s=4,
                color=CLASS_COLORS[(k - 1) % len(CLASS_COLORS)],
                label=f"class {k}",
            )
    ax.set_aspect("equal")
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    if len(ds["y"]):
        ax.legend(markerscale=3)
    Path(out_path).parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, dpi=DPI)
    plt.close(fig)
    return out_path
