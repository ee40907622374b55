#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This file is part of decentviab package.

This module contains the figure writers: two dimensional slices of
grid sets and the coupling norm curve of a delta sweep. Figures are
written as SVG through the Agg backend.

Copyright (C) 2026  decentviab developers

This program is free software: you can redistribute it and/or modify
it under the terms of the GNU Lesser General Public License as published by
the Free Software Foundation, either version 3 of the License, or
(at your option) any later version.

This program is distributed in the hope that it will be useful,
but WITHOUT ANY WARRANTY; without even the implied warranty of
MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
GNU Lesser General Public License for more details.

You should have received a copy of the GNU Lesser General Public License
along with this program. If not, see <http://www.gnu.org/licenses/>.
"""

import csv
import logging

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from scipy import ndimage  # noqa: E402

from .errors import ParameterError  # noqa: E402

__all__ = ["parse_slice", "slice_outline", "plot_slice", "plot_delta_sweep",
           "read_delta_sweep"]

logger = logging.getLogger(__name__)


def parse_slice(text, dim):
    """
    Parses a slice description "i,j" or "i,j:k=v,l=w" (fixed values for
    other axes).

    :returns: (axes, fixed)
    :rtype: tuple
    :exception: ParameterError - malformed description or bad axes

    TEST:

    >>> parse_slice("0,2:1=0.5", 3)
    ([0, 2], {1: 0.5})
    >>> parse_slice("0,0", 2) # doctest: +IGNORE_EXCEPTION_DETAIL
    Traceback (most recent call last):
    ParameterError: bad slice
    """
    try:
        head, _, tail = text.partition(":")
        axes = [int(a) for a in head.split(",")]
        fixed = {}
        for item in filter(None, tail.split(",")):
            key, value = item.split("=")
            fixed[int(key)] = float(value)
    except ValueError:
        errmsg = "Malformed slice '{0}', expected 'i,j[:k=v,...]'".format(
            text)
        raise ParameterError(errmsg)
    if dim == 1:
        return [0, 0], {}
    if len(axes) != 2 or axes[0] == axes[1] or \
            min(axes) < 0 or max(axes) >= dim:
        errmsg = "Slice '{0}' needs two distinct axes below {1}".format(
            text, dim)
        raise ParameterError(errmsg)
    for key in fixed:
        if key in axes or not 0 <= key < dim:
            errmsg = "Fixed axis {0} is invalid for slice '{1}'".format(
                key, text)
            raise ParameterError(errmsg)
    return axes, fixed


def slice_outline(cut):
    """Occupied cells of a two dimensional cut with an empty neighbour."""
    inner = ndimage.binary_erosion(cut, border_value=0)
    return cut & ~inner


def plot_slice(gs, axes, fixed, path, csv_path=None, title=None):
    """
    Draws a two dimensional cut of ``gs`` and optionally writes the
    outline nodes to ``csv_path``.

    An empty cut gives blank axes with an annotation.

    :returns: number of occupied nodes in the cut
    :rtype: int
    """
    cut = gs.slice2d(axes, fixed)
    xs = gs.box.axis(axes[0])
    if gs.dim > 1:
        ys = gs.box.axis(axes[1])
    else:
        ys = np.zeros(1)
    fig, ax = plt.subplots(figsize=(5, 5))
    if cut.any():
        dx = gs.box.h[axes[0]] / 2.0
        dy = gs.box.h[axes[1]] / 2.0 if gs.dim > 1 else 0.5
        ax.imshow(cut.T.astype(float), origin="lower", cmap="Greens",
                  vmin=0.0, vmax=1.0, interpolation="nearest",
                  extent=(xs[0] - dx, xs[-1] + dx, ys[0] - dy, ys[-1] + dy),
                  aspect="auto")
    else:
        ax.set_xlim(xs[0], xs[-1])
        ax.set_ylim(ys[0] - 0.5, ys[-1] + 0.5)
        ax.text(0.5, 0.5, "empty set", transform=ax.transAxes,
                ha="center", va="center", color="gray")
    ax.set_xlabel("z{0}".format(axes[0]))
    if gs.dim > 1:
        ax.set_ylabel("z{0}".format(axes[1]))
    ax.grid(True, alpha=0.2)
    if title:
        ax.set_title(title)
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)

    if csv_path is not None:
        outline = slice_outline(cut)
        with open(csv_path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["x", "y"])
            for i, j in np.argwhere(outline):
                writer.writerow(["{0:.12g}".format(xs[i]),
                                 "{0:.12g}".format(ys[j])])
    logger.debug("Slice %s of %r: %d nodes", axes, gs, int(cut.sum()))
    return int(cut.sum())


def read_delta_sweep(path):
    """
    Reads a delta sweep CSV.

    :returns: (delta, feasible, f, upper_bound, gamma_norm) arrays, the
        last one a float
    :exception: ParameterError - unreadable file
    """
    try:
        with open(path, newline="") as f:
            rows = list(csv.DictReader(f))
        delta = np.array([float(r["delta"]) for r in rows])
        feasible = np.array([bool(int(r["feasible"])) for r in rows])
        f_val = np.array([float(r["f"]) for r in rows])
        bound = np.array([float(r["upper_bound"]) for r in rows])
        gamma = float(rows[0]["gamma_norm"]) if rows else float("nan")
    except (IOError, OSError, KeyError, ValueError) as e:
        errmsg = "Cannot read delta sweep {0}: {1}".format(path, e)
        raise ParameterError(errmsg)
    return delta, feasible, f_val, bound, gamma


def _infeasible_band(delta, feasible):
    neg = delta[(delta < 0) & feasible]
    pos = delta[(delta > 0) & feasible]
    low = neg.max() if len(neg) else delta.min()
    high = pos.min() if len(pos) else delta.max()
    return low, high


def plot_delta_sweep(delta, feasible, f_val, bound, gamma_norm, path,
                     delta_star=None):
    """
    Draws the coupling norm f against delta on a symmetric log axis, the
    coupling bound, the asymptote at the norm of Gamma and the band of
    infeasible deltas around zero.
    """
    delta = np.asarray(delta, dtype=float)
    feasible = np.asarray(feasible, dtype=bool)
    if delta.size == 0:
        raise ParameterError("Empty delta sweep")
    fig, ax = plt.subplots(figsize=(8, 4.5))
    f_val = np.asarray(f_val, dtype=float)
    bound = np.asarray(bound, dtype=float)
    for n, side in enumerate((delta < 0, delta > 0)):
        keep = side & feasible & np.isfinite(f_val)
        ax.plot(delta[keep], f_val[keep], "b.-", lw=1,
                label="f(delta)" if n == 0 else None)
        keep = side & feasible & np.isfinite(bound)
        ax.plot(delta[keep], bound[keep], "k:", lw=1,
                label="bound" if n == 0 else None)
    if np.isfinite(gamma_norm):
        ax.axhline(gamma_norm, color="r", ls="--", lw=1,
                   label="norm of Gamma")
    low, high = _infeasible_band(delta, feasible)
    ax.axvspan(low, high, color="gray", alpha=0.25, lw=0, label="infeasible")
    if delta_star is not None:
        ax.axvline(delta_star, color="g", lw=1, label="optimum")
    ax.set_xscale("symlog", linthresh=1.0)
    ax.set_xlabel("delta")
    ax.set_ylabel("coupling norm")
    ax.legend(loc="upper right", fontsize=8)
    ax.grid(True, alpha=0.2)
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)
    return path
