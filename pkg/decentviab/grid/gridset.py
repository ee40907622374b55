#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This file is part of decentviab package.

This module contains the grid set: a boolean occupancy over the nodes of
a GridBox, standing for its nodes together with every grid cell whose
corner nodes are all occupied. Sets are immutable; every operation
returns a new set.

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

import logging

import numpy as np
from scipy import ndimage

from ..errors import (EmptySetError, GridMismatchError, ParameterError,
                      ResourceCapError)
from ..settings import DEFAULTS
from .controlbox import ControlBox
from .gridbox import GridBox

__all__ = ["GridSet", "volume_fraction", "check_same_grid"]

logger = logging.getLogger(__name__)


def check_same_grid(*sets):
    """
    :exception: GridMismatchError - the sets live on different grids
    """
    first = sets[0].box
    for other in sets[1:]:
        if other.box != first:
            errmsg = "Grid mismatch: {0} versus {1}".format(first, other.box)
            raise GridMismatchError(errmsg)


class GridSet(object):
    """
    Occupancy of the nodes of a :class:`GridBox`.

    TEST: a half-filled segment

    >>> box = GridBox([0.0], [1.0], [5])
    >>> s = GridSet.from_predicate(box, lambda x: x[:, 0] <= 0.5)
    >>> s.count, s.occupancy.tolist()
    (3, [True, True, True, False, False])
    """

    ####################
    #  CLASS METHODS   #
    ####################

    @classmethod
    def from_predicate(cls, box, predicate):
        """
        Samples a membership predicate at every node.

        :param GridBox box: grid
        :param predicate: callable mapping an (N, dim) array of points to
            N booleans
        :rtype: GridSet
        """
        pts = box.node_coordinates()
        mask = np.asarray(predicate(pts), dtype=bool)
        if mask.shape != (box.size,):
            errmsg = "Predicate returned shape {0}, expected ({1},)".format(
                mask.shape, box.size)
            raise ParameterError(errmsg)
        return cls(box, mask.reshape(box.shape))

    @classmethod
    def full(cls, box):
        return cls(box, np.ones(box.shape, dtype=bool))

    @classmethod
    def empty(cls, box):
        return cls(box, np.zeros(box.shape, dtype=bool))

    ####################
    #  OBJECT METHODS  #
    ####################

    def __init__(self, box, occupancy):
        """
        :param GridBox box: grid
        :param occupancy: boolean array of shape ``box.shape`` (or flat)
        :exception: ParameterError - wrong number of nodes
        """
        occupancy = np.array(occupancy, dtype=bool)
        if occupancy.size != box.size:
            errmsg = "Occupancy has {0} entries, grid has {1} nodes".format(
                occupancy.size, box.size)
            raise ParameterError(errmsg)
        occupancy = occupancy.reshape(box.shape)
        occupancy.flags.writeable = False
        self.box = box
        self.occupancy = occupancy

    def __eq__(self, other):
        if not isinstance(other, GridSet):
            return NotImplemented
        return self.box == other.box and \
            bool(np.array_equal(self.occupancy, other.occupancy))

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __len__(self):
        return self.count

    def __repr__(self):
        return "GridSet({0} of {1} nodes, dim={2})".format(
            self.count, self.box.size, self.box.dim)

    @property
    def dim(self):
        return self.box.dim

    @property
    def count(self):
        return int(np.count_nonzero(self.occupancy))

    def is_empty(self):
        return not bool(self.occupancy.any())

    def issubset(self, other):
        check_same_grid(self, other)
        return not bool(np.any(self.occupancy & ~other.occupancy))

    def union(self, other):
        check_same_grid(self, other)
        return GridSet(self.box, self.occupancy | other.occupancy)

    def intersection(self, other):
        check_same_grid(self, other)
        return GridSet(self.box, self.occupancy & other.occupancy)

    def difference(self, other):
        check_same_grid(self, other)
        return GridSet(self.box, self.occupancy & ~other.occupancy)

    def occupied_indices(self):
        """Integer indices of occupied nodes, one row per node."""
        return np.argwhere(self.occupancy)

    def occupied_points(self):
        """Coordinates of occupied nodes, one row per node in C order."""
        idx = self.occupied_indices()
        if len(idx) == 0:
            return np.zeros((0, self.dim))
        return self.box.coordinates_of(idx)

    def contains_node(self, point):
        """Occupancy of the node nearest to ``point``."""
        return bool(self.occupancy[tuple(self.box.nearest_index(point))])

    def project(self, axes):
        """
        Existential projection onto the ordered ``axes``: a node of the
        sub-grid is occupied iff some node above it is.

        :param axes: ordered subset of axis indices
        :rtype: GridSet

        TEST: an L-shaped set

        >>> box = GridBox([0.0, 0.0], [1.0, 1.0], [3, 3])
        >>> occ = [[1, 0, 0], [1, 0, 0], [1, 1, 1]]
        >>> s = GridSet(box, occ)
        >>> s.project([1]).occupancy.tolist()
        [True, True, True]
        >>> s.project([0]).occupancy.tolist()
        [True, True, True]
        """
        axes = [int(a) for a in axes]
        if not axes or len(set(axes)) != len(axes) or \
                min(axes) < 0 or max(axes) >= self.dim:
            errmsg = "Invalid projection axes {0} for dim {1}".format(
                axes, self.dim)
            raise ParameterError(errmsg)
        other = tuple(i for i in range(self.dim) if i not in axes)
        kept = sorted(axes)
        occ = self.occupancy.any(axis=other) if other else self.occupancy
        occ = np.transpose(occ, [kept.index(a) for a in axes])
        return GridSet(self.box.sub_box(axes), occ)

    def cross_product(self, other, node_cap=None):
        """
        Product set over the product grid.

        :param GridSet other: set over the trailing axes
        :param int node_cap: largest node count allowed (default 1e7)
        :rtype: GridSet
        :exception: ResourceCapError - product grid above the cap
        """
        node_cap = DEFAULTS.node_cap if node_cap is None else node_cap
        size = self.box.size * other.box.size
        if size > node_cap:
            errmsg = "Product grid has {0} nodes, cap is {1}".format(
                size, node_cap)
            raise ResourceCapError(errmsg, nodes=size, cap=node_cap)
        occ = np.multiply.outer(self.occupancy, other.occupancy)
        return GridSet(self.box.product(other.box), occ)

    def interval_hull(self):
        """
        Tightest box containing the occupied nodes, inflated by half a
        cell per axis.

        :rtype: ControlBox
        :exception: EmptySetError - empty set

        TEST: one node

        >>> box = GridBox([0.0], [1.0], [5])
        >>> GridSet(box, [0, 0, 1, 0, 0]).interval_hull()
        ControlBox([0.375], [0.625])
        """
        if self.is_empty():
            raise EmptySetError("Interval hull of an empty set")
        idx = self.occupied_indices()
        lo = self.box.lower + idx.min(axis=0) * self.box.h
        hi = self.box.lower + idx.max(axis=0) * self.box.h
        return ControlBox(lo - self.box.h / 2.0, hi + self.box.h / 2.0)

    def erode(self, radius):
        """
        Keeps the nodes whose whole neighbourhood of ceil(radius / h_i)
        cells per axis is occupied; nodes outside the grid count as
        empty.

        :param float radius: infinity norm radius, nonnegative
        :rtype: GridSet
        """
        if radius < 0:
            errmsg = "Erosion radius must be nonnegative, got {0}".format(
                radius)
            raise ParameterError(errmsg)
        cells = np.ceil(radius / self.box.h - GridBox.SNAP_TOL).astype(int)
        cells = np.maximum(cells, 0)
        if not np.any(cells) or self.is_empty():
            return GridSet(self.box, self.occupancy)
        structure = np.ones(tuple(2 * c + 1 for c in cells), dtype=bool)
        occ = ndimage.binary_erosion(self.occupancy, structure=structure,
                                     border_value=0)
        return GridSet(self.box, occ)

    def dilate(self, cells=1):
        """Adds every node within ``cells`` cells (Chebyshev) of the set."""
        if cells <= 0:
            return GridSet(self.box, self.occupancy)
        structure = np.ones((2 * cells + 1,) * self.dim, dtype=bool)
        occ = ndimage.binary_dilation(self.occupancy, structure=structure)
        return GridSet(self.box, occ)

    def boundary(self):
        """Occupied nodes with an empty (or off-grid) neighbour."""
        return self.difference(self.erode(float(np.max(self.box.h))))

    def sup_norm_of_set(self):
        """
        Largest infinity norm of an occupied node plus half a cell.

        :exception: EmptySetError - empty set

        TEST: full box

        >>> box = GridBox([-1.0, -1.0], [1.0, 1.0], [5, 5])
        >>> GridSet.full(box).sup_norm_of_set()
        1.25
        """
        if self.is_empty():
            raise EmptySetError("Supremum norm of an empty set")
        pts = self.occupied_points()
        return float(np.max(np.abs(pts))) + self.box.half_cell

    def slice2d(self, axes, fixed=None):
        """
        Two dimensional cut through the set.

        :param axes: pair of axes kept (rows, columns)
        :param dict fixed: coordinate for every other axis (default: the
            node nearest to zero)
        :returns: boolean array of shape (nodes[axes[0]], nodes[axes[1]])
        :rtype: numpy.ndarray
        :exception: ParameterError - bad axes
        """
        axes = [int(a) for a in axes]
        if self.dim == 1:
            return self.occupancy.reshape(-1, 1)
        if len(axes) != 2 or axes[0] == axes[1] or \
                min(axes) < 0 or max(axes) >= self.dim:
            errmsg = "A slice needs two distinct axes below {0}".format(
                self.dim)
            raise ParameterError(errmsg)
        fixed = dict((int(k), float(v)) for k, v in (fixed or {}).items())
        index = []
        for i in range(self.dim):
            if i in axes:
                index.append(slice(None))
            else:
                value = fixed.get(i, 0.0)
                pos = int(np.clip(np.rint((value - self.box.lower[i]) /
                                          self.box.h[i]),
                                  0, self.box.nodes[i] - 1))
                index.append(pos)
        cut = self.occupancy[tuple(index)]
        if axes[0] > axes[1]:
            cut = cut.T
        return np.array(cut)


def volume_fraction(inner, outer):
    """
    Ratio of occupied node counts, 0 when ``outer`` is empty.

    :exception: GridMismatchError - different grids

    TEST: half box

    >>> box = GridBox([0.0], [1.0], [4])
    >>> volume_fraction(GridSet(box, [1, 1, 0, 0]), GridSet.full(box))
    0.5
    """
    check_same_grid(inner, outer)
    total = outer.count
    if total == 0:
        return 0.0
    return inner.count / float(total)


if __name__ == "__main__":
    import doctest
    doctest.testmod()
    doctest.testfile("../../tests/testfile_gridset.txt")
