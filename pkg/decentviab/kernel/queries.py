#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This file is part of decentviab package.

This module contains the membership queries the kernel engine asks
grid sets: box containment through a summed-area table and the inner
distance field used by the invariance engine.

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

import itertools

import numpy as np
from scipy import ndimage

__all__ = ["SummedAreaTable", "distance_field", "field_members",
           "field_at"]

#: Field values above this fraction of a cell below zero count as members
FIELD_TOL = 1e-9


class SummedAreaTable(object):
    """
    Inclusive prefix sums of the occupancy of a grid set, answering
    "is every node of this index range occupied" in 2^dim lookups.

    A box is contained in the set (nodes plus fully occupied cells) iff
    all nodes of the smallest index range covering it are occupied.

    TEST:

    >>> from decentviab.grid import GridBox, GridSet
    >>> gs = GridSet(GridBox([0.0], [4.0], [5]), [0, 1, 1, 1, 0])
    >>> sat = SummedAreaTable(gs)
    >>> sat.contains_boxes([[2.0], [2.0]], [[1.0], [1.5]]).tolist()
    [True, False]
    """

    def __init__(self, gs):
        self.box = gs.box
        table = np.pad(gs.occupancy.astype(np.int64),
                       [(1, 0)] * gs.dim, mode="constant")
        for axis in range(gs.dim):
            table = np.cumsum(table, axis=axis)
        self.table = table
        self._corners = list(itertools.product((0, 1), repeat=gs.dim))

    def count(self, a, b):
        """
        Number of occupied nodes in the inclusive index ranges [a, b]
        (rows of ``a`` and ``b``), which must lie inside the grid.
        """
        a = np.atleast_2d(a)
        b = np.atleast_2d(b)
        total = np.zeros(len(a), dtype=np.int64)
        flat = self.table.ravel()
        shape = self.table.shape
        for corner in self._corners:
            pick = np.array(corner, dtype=bool)
            idx = np.where(pick, b + 1, a)
            sign = -1 if (len(corner) - sum(corner)) % 2 else 1
            total += sign * flat[np.ravel_multi_index(idx.T, shape)]
        return total

    def contains_boxes(self, centers, radii=None):
        """
        Tells for every row whether the box [c - r, c + r] lies in the set.

        :param centers: array (P, dim)
        :param radii: per-axis half widths, (P, dim), (dim,) or None
        :returns: boolean array of length P; boxes leaving the grid are
            never contained
        """
        centers = np.atleast_2d(np.asarray(centers, dtype=float))
        if radii is None:
            lo = hi = centers
        else:
            radii = np.asarray(radii, dtype=float)
            lo = centers - radii
            hi = centers + radii
        a, b, inside = self.box.index_range(lo, hi)
        out = np.zeros(len(centers), dtype=bool)
        if not inside.any():
            return out
        a, b = a[inside], b[inside]
        need = np.prod(b - a + 1, axis=1)
        out[inside] = self.count(a, b) == need
        return out

    def contains_points(self, points):
        """Points lying in the set (corner query with zero radius)."""
        return self.contains_boxes(points)


def distance_field(gs):
    """
    Lower bound of the infinity norm distance from every node to the
    complement of the set: (chessboard cells to the nearest empty node,
    with the outside of the grid empty, minus one) times the smallest
    cell width; empty nodes get minus one cell.

    TEST:

    >>> from decentviab.grid import GridBox, GridSet
    >>> gs = GridSet.full(GridBox([-1.0], [1.0], [5]))
    >>> distance_field(gs).tolist()
    [0.0, 0.5, 1.0, 0.5, 0.0]
    """
    h = float(np.min(gs.box.h))
    padded = np.pad(gs.occupancy, 1, mode="constant", constant_values=False)
    if not padded.any():
        return np.full(gs.box.shape, -h)
    cells = ndimage.distance_transform_cdt(padded, metric="chessboard")
    cells = cells[tuple(slice(1, -1) for _ in range(gs.dim))]
    field = (cells.astype(float) - 1.0) * h
    field[~gs.occupancy] = -h
    return field


def field_members(box, field):
    """Nodes whose field value certifies membership."""
    return field >= -FIELD_TOL * float(np.min(box.h))


def field_at(box, field, points):
    """
    Lower bound of the distance from arbitrary points to the complement
    of the set described by ``field``, from the corners of the cell
    holding each point: max over corners of field(c) - ||y - c||, and 0
    when all corners are members. Points off the grid get -inf.

    :param GridBox box: grid of the field
    :param field: array of shape ``box.shape``
    :param points: array (P, dim)
    :rtype: numpy.ndarray
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    tol = FIELD_TOL * box.h
    rel = (points - box.lower) / box.h
    top = np.array(box.nodes) - 1
    off = np.any((points < box.lower - tol) | (points > box.upper + tol),
                 axis=1)
    base = np.clip(np.floor(rel).astype(np.int64), 0, top - 1)
    best = np.full(len(points), -np.inf)
    all_members = np.ones(len(points), dtype=bool)
    member_tol = -FIELD_TOL * float(np.min(box.h))
    for corner in itertools.product((0, 1), repeat=box.dim):
        idx = base + np.array(corner, dtype=np.int64)
        value = field[tuple(idx.T)]
        coords = box.lower + idx * box.h
        gap = np.max(np.abs(points - coords), axis=1)
        best = np.maximum(best, value - gap)
        all_members &= value >= member_tol
    best = np.where(all_members, np.maximum(best, 0.0), best)
    best[off] = -np.inf
    return best
