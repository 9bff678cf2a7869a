"""Plotting companion for the bandit-classification experiment outputs.

Consumes only the published file formats (trace/aggregate CSVs and the
dataset text format); it does not import the experiment package.
"""

from .io import read_aggregate_csv, read_dataset_file, read_trace_csv, reaggregate
from .render import PlotSpec, plot_dataset_projection, plot_mistake_curves

__all__ = [
    "PlotSpec",
    "plot_mistake_curves",
    "plot_dataset_projection",
    "read_aggregate_csv",
    "read_dataset_file",
    "read_trace_csv",
    "reaggregate",
]
