#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This file is part of decentviab package.

This module contains the uniform node grid over an axis-aligned box.

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

import numpy as np

from ..errors import ParameterError

__all__ = ["GridBox"]


class GridBox(object):
    """
    Node-centred uniform grid: ``nodes[i]`` equally spaced nodes from
    ``lower[i]`` to ``upper[i]`` (both included) on every axis.
    Occupancy arrays over the grid have shape ``nodes`` in C order, the
    last axis running fastest.

    TEST: cell widths

    >>> b = GridBox([-1.0, 0.0], [1.0, 1.0], [5, 3])
    >>> b.h.tolist(), b.size
    ([0.5, 0.5], 15)
    """

    ###############
    #  CONSTANTS  #
    ###############

    #: Relative tolerance when snapping coordinates to node indices
    SNAP_TOL = 1e-9

    ####################
    #  OBJECT METHODS  #
    ####################

    def __init__(self, lower, upper, nodes):
        """
        :param lower: per-axis lower bounds
        :param upper: per-axis upper bounds
        :param nodes: per-axis node counts, each at least 2
        :exception: ParameterError - inconsistent or degenerate box
        """
        lower = np.atleast_1d(np.asarray(lower, dtype=float))
        upper = np.atleast_1d(np.asarray(upper, dtype=float))
        nodes = np.atleast_1d(np.asarray(nodes))
        if not (lower.ndim == upper.ndim == nodes.ndim == 1
                and len(lower) == len(upper) == len(nodes)
                and len(lower) > 0):
            errmsg = "lower, upper and nodes must be equal length vectors"
            raise ParameterError(errmsg)
        if np.any(np.asarray(nodes, dtype=float) != np.round(nodes)):
            errmsg = "Node counts must be integers, got {0}".format(
                nodes.tolist())
            raise ParameterError(errmsg)
        nodes = nodes.astype(int)
        if np.any(nodes < 2):
            errmsg = "Every axis needs at least 2 nodes, got {0}".format(
                nodes.tolist())
            raise ParameterError(errmsg)
        if np.any(~np.isfinite(lower)) or np.any(~np.isfinite(upper)) \
                or np.any(lower >= upper):
            errmsg = "Need finite lower < upper on every axis"
            raise ParameterError(errmsg)
        self.lower = lower
        self.upper = upper
        self.nodes = tuple(int(n) for n in nodes)
        self.h = (upper - lower) / (nodes - 1)

    def __eq__(self, other):
        if not isinstance(other, GridBox):
            return NotImplemented
        return (self.nodes == other.nodes
                and np.allclose(self.lower, other.lower, rtol=0, atol=1e-12)
                and np.allclose(self.upper, other.upper, rtol=0, atol=1e-12))

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash((self.nodes, tuple(self.lower), tuple(self.upper)))

    def __repr__(self):
        return "GridBox(lower={0}, upper={1}, nodes={2})".format(
            self.lower.tolist(), self.upper.tolist(), list(self.nodes))

    @property
    def dim(self):
        return len(self.nodes)

    @property
    def shape(self):
        return self.nodes

    @property
    def size(self):
        return int(np.prod(self.nodes, dtype=np.int64))

    @property
    def half_cell(self):
        """Half the cell diagonal in the infinity norm."""
        return float(np.max(self.h)) / 2.0

    def axis(self, i):
        """Node coordinates along axis ``i``."""
        return np.linspace(self.lower[i], self.upper[i], self.nodes[i])

    def axes(self):
        return [self.axis(i) for i in range(self.dim)]

    def node_coordinates(self):
        """
        Coordinates of every node, one row per node in C order.

        :rtype: numpy.ndarray of shape (size, dim)

        TEST:

        >>> GridBox([0.0], [1.0], [3]).node_coordinates().ravel().tolist()
        [0.0, 0.5, 1.0]
        """
        mesh = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def coordinates_of(self, index):
        """Coordinates of nodes given by integer index rows (P, dim)."""
        index = np.atleast_2d(index)
        return self.lower + index * self.h

    def nearest_index(self, point):
        """
        Integer index of the node nearest to ``point``, clipped to the grid.

        TEST:

        >>> GridBox([-1.0], [1.0], [41]).nearest_index([1.0]).tolist()
        [40]
        """
        point = np.asarray(point, dtype=float)
        idx = np.rint((point - self.lower) / self.h).astype(int)
        return np.clip(idx, 0, np.array(self.nodes) - 1)

    def index_range(self, lo, hi):
        """
        Smallest node index range [a, b] covering the coordinates
        [lo, hi] per axis (rows of ``lo`` and ``hi`` are points).

        :returns: (a, b, inside) with ``inside`` False where the range
            leaves the grid
        :rtype: tuple
        """
        lo = np.atleast_2d(lo)
        hi = np.atleast_2d(hi)
        a = np.floor((lo - self.lower) / self.h + self.SNAP_TOL).astype(
            np.int64)
        b = np.ceil((hi - self.lower) / self.h - self.SNAP_TOL).astype(
            np.int64)
        b = np.maximum(a, b)
        top = np.array(self.nodes, dtype=np.int64) - 1
        inside = np.all((a >= 0) & (b <= top), axis=1)
        return a, b, inside

    def sub_box(self, axes):
        """Grid restricted to the given ordered axes."""
        axes = list(axes)
        return GridBox(self.lower[axes], self.upper[axes],
                       [self.nodes[i] for i in axes])

    def product(self, other):
        """Grid over the Cartesian product of both boxes."""
        return GridBox(np.concatenate([self.lower, other.lower]),
                       np.concatenate([self.upper, other.upper]),
                       list(self.nodes) + list(other.nodes))

    def to_json(self):
        return {"dim": self.dim,
                "lower": self.lower.tolist(),
                "upper": self.upper.tolist(),
                "nodes": list(self.nodes)}

    @classmethod
    def from_json(cls, obj):
        """
        :exception: ParameterError - missing keys or dimension mismatch
        """
        try:
            box = cls(obj["lower"], obj["upper"], obj["nodes"])
        except (KeyError, TypeError) as e:
            errmsg = "Invalid grid description: {0}".format(e)
            raise ParameterError(errmsg)
        if "dim" in obj and int(obj["dim"]) != box.dim:
            errmsg = "Grid dim {0} does not match {1} axes".format(
                obj["dim"], box.dim)
            raise ParameterError(errmsg)
        return box


if __name__ == "__main__":
    import doctest
    doctest.testmod()
