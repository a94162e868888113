"""Comparison-curve rendering for cfsurv sweep results."""

from .render import PlotSpec, group_stats, load_rows, render

__version__ = "0.1.0"
