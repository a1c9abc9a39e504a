"""Rendering of exported flip-trick data: sphere figures and board animations."""

from .render import PlotSpec, SchemaError, animate, plot_curve, plot_homotopy, render

__all__ = ["PlotSpec", "SchemaError", "animate", "plot_curve", "plot_homotopy", "render"]
