# -*- coding: utf-8 -*-

"""Figures for trim sweeps and flight logs.

Heights are drawn positive up; the logs store north-east-down positions.
"""

from typing import Optional, Sequence

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
from scipy.constants import golden

__all__ = [
    "ONE_COL_WIDTH_INCH",
    "TWO_COL_WIDTH_INCH",
    "range_frame",
    "ylabel_top",
    "plot_sweep",
    "plot_trajectory",
    "plot_relative_distance",
]

ONE_COL_WIDTH_INCH = 5
TWO_COL_WIDTH_INCH = 7.2
ONE_COL_GOLDEN_RATIO_HEIGHT_INCH = ONE_COL_WIDTH_INCH / golden
TWO_COL_GOLDEN_RATIO_HEIGHT_INCH = TWO_COL_WIDTH_INCH / golden


def range_frame(ax: plt.Axes, x, y, pad: float = 0.1) -> None:
    """Limit the spines to the data range and move them outward."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x = x[np.isfinite(x)]
    y = y[np.isfinite(y)]
    if x.size == 0 or y.size == 0:
        return
    x_min, x_max = x.min(), x.max()
    y_min, y_max = y.min(), y.max()
    if x_max > x_min:
        ax.set_xlim(x_min - pad * (x_max - x_min), x_max + pad * (x_max - x_min))
    if y_max > y_min:
        ax.set_ylim(y_min - pad * (y_max - y_min), y_max + pad * (y_max - y_min))
    ax.spines["left"].set_position(("outward", 10))
    ax.spines["bottom"].set_position(("outward", 10))
    ax.spines["bottom"].set_bounds(x_min, x_max)
    ax.spines["left"].set_bounds(y_min, y_max)


def ylabel_top(label: str, ax: Optional[plt.Axes] = None, x_pad: float = 0.01, y_pad: float = 0.02) -> None:
    """Horizontal y label placed just above the top visible tick."""
    ax = ax or plt.gca()
    ticks = ax.get_yticks()
    to_axes = ax.transData + ax.transAxes.inverted()
    tick_y = to_axes.transform(np.column_stack([np.zeros_like(ticks), ticks]))[:, 1]
    tick_y = tick_y[(tick_y > -1e-5) & (tick_y < 1.0 + 1e-5)]
    pos_y = tick_y[-1] + 0.1 if tick_y.size else 1.0

    major = ax.yaxis.get_major_ticks()
    pos_x = 0.0
    if major:
        bbox = ax.get_window_extent().transformed(ax.figure.dpi_scale_trans.inverted())
        pos_x = -(major[-1].get_pad() / 72.0) / bbox.width

    text = ax.set_ylabel(label, horizontalalignment="right", multialignment="right")
    ax.yaxis.set_label_coords(pos_x - x_pad, pos_y + y_pad)
    text.set_rotation(0)


_SWEEP_PANELS = (
    ("power_hp", "power / hp"),
    ("theta_F_deg", r"$\theta$ / deg"),
    ("phi_F_deg", r"$\phi$ / deg"),
    ("beta1c_deg", r"$\beta_{1c}$ / deg"),
    ("col_pct", "collective / %"),
    ("lon_pct", "longitudinal / %"),
    ("lat_pct", "lateral / %"),
    ("ped_pct", "pedal / %"),
)


def plot_sweep(sweep: pd.DataFrame, columns: Sequence[str] = tuple(c for c, _ in _SWEEP_PANELS)):
    """Trim quantities against airspeed, one panel per column."""
    labels = dict(_SWEEP_PANELS)
    n_cols = 2
    n_rows = int(np.ceil(len(columns) / n_cols))
    fig, axes = plt.subplots(
        n_rows, n_cols, figsize=(TWO_COL_WIDTH_INCH, n_rows * ONE_COL_GOLDEN_RATIO_HEIGHT_INCH / 1.5)
    )
    axes = np.atleast_1d(axes).ravel()
    for ax, column in zip(axes, columns):
        ax.plot(sweep["speed_kts"], sweep[column], marker="o", ms=3)
        range_frame(ax, sweep["speed_kts"], sweep[column])
        ax.set_xlabel("airspeed / kts")
        ylabel_top(labels.get(column, column), ax)
    for ax in axes[len(columns) :]:
        ax.set_visible(False)
    fig.tight_layout()
    return fig


def plot_trajectory(log: pd.DataFrame):
    """Top, side and rear views of helicopter and ship tracks (m, height up)."""
    fig, axes = plt.subplots(1, 3, figsize=(TWO_COL_WIDTH_INCH, TWO_COL_GOLDEN_RATIO_HEIGHT_INCH / 1.5))
    views = (
        ("east_m", "north_m", False, "east / m", "north / m"),
        ("north_m", "down_m", True, "north / m", "height / m"),
        ("east_m", "down_m", True, "east / m", "height / m"),
    )
    for ax, (x_col, y_col, flip, x_label, y_label) in zip(axes, views):
        sign = -1.0 if flip else 1.0
        ax.plot(log[x_col], sign * log[y_col], label="helicopter")
        ax.plot(log[f"ship_{x_col}"], sign * log[f"ship_{y_col}"], ls="--", label="ship")
        range_frame(ax, np.r_[log[x_col], log[f"ship_{x_col}"]], sign * np.r_[log[y_col], log[f"ship_{y_col}"]])
        ax.set_xlabel(x_label)
        ylabel_top(y_label, ax)
    axes[0].legend(frameon=False)
    fig.tight_layout()
    return fig


def plot_relative_distance(log: pd.DataFrame):
    """Ship minus helicopter position against time, height component reversed."""
    fig, ax = plt.subplots(figsize=(ONE_COL_WIDTH_INCH, ONE_COL_GOLDEN_RATIO_HEIGHT_INCH))
    components = (("dX_m", 1.0, r"$\Delta X$"), ("dY_m", 1.0, r"$\Delta Y$"), ("dZ_m", -1.0, r"$-\Delta Z$"))
    for column, sign, label in components:
        ax.plot(log["time_s"], sign * log[column], label=label)
    values = np.r_[log["dX_m"], log["dY_m"], -log["dZ_m"]]
    range_frame(ax, log["time_s"], values)
    ax.set_xlabel("time / s")
    ylabel_top("distance / m", ax)
    ax.legend(frameon=False)
    fig.tight_layout()
    return fig
