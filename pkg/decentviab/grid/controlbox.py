#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This file is part of decentviab package.

This module contains the hyper-rectangular input set and its sampling.

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

from ..errors import ParameterError

__all__ = ["ControlBox"]


class ControlBox(object):
    """
    Axis-aligned box [lower, upper] of inputs (also used for the interval
    hull of a grid set). A box of dimension 0 stands for "no input".

    TEST: infinity norm radius

    >>> ControlBox([-0.5, 0.5], [0.5, 1.0]).radius
    1.0
    """

    def __init__(self, lower, upper):
        """
        :exception: ParameterError - lower above upper on some axis
        """
        self.lower = np.asarray(lower, dtype=float).reshape(-1)
        self.upper = np.asarray(upper, dtype=float).reshape(-1)
        if self.lower.shape != self.upper.shape:
            errmsg = "Input bounds have different lengths"
            raise ParameterError(errmsg)
        if np.any(self.lower > self.upper) or \
                not np.all(np.isfinite(self.lower)) or \
                not np.all(np.isfinite(self.upper)):
            errmsg = "Need finite u_min <= u_max, got {0} and {1}".format(
                self.lower.tolist(), self.upper.tolist())
            raise ParameterError(errmsg)

    def __repr__(self):
        return "ControlBox({0}, {1})".format(self.lower.tolist(),
                                             self.upper.tolist())

    def __eq__(self, other):
        if not isinstance(other, ControlBox):
            return NotImplemented
        return (self.lower.shape == other.lower.shape
                and np.allclose(self.lower, other.lower)
                and np.allclose(self.upper, other.upper))

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    @property
    def dim(self):
        return len(self.lower)

    @property
    def radius(self):
        """Largest infinity norm of a point of the box."""
        if self.dim == 0:
            return 0.0
        return float(np.max(np.maximum(np.abs(self.lower),
                                       np.abs(self.upper))))

    @property
    def center(self):
        return (self.lower + self.upper) / 2.0

    def contains(self, u, tol=1e-12):
        u = np.asarray(u, dtype=float)
        return bool(np.all(u >= self.lower - tol) and
                    np.all(u <= self.upper + tol))

    def samples(self, per_axis=3):
        """
        Product grid of ``per_axis`` values per axis, endpoints included;
        degenerate axes contribute one value.

        :param int per_axis: values per axis, at least 2
        :returns: array of shape (count, dim)
        :rtype: numpy.ndarray

        TEST: endpoints and midpoint

        >>> ControlBox([-1.0], [1.0]).samples(3).ravel().tolist()
        [-1.0, 0.0, 1.0]

        TEST: no input

        >>> ControlBox([], []).samples().shape
        (1, 0)
        """
        if per_axis < 2:
            errmsg = "Need at least 2 samples per axis, got {0}".format(
                per_axis)
            raise ParameterError(errmsg)
        if self.dim == 0:
            return np.zeros((1, 0))
        values = [np.unique(np.linspace(lo, hi, per_axis))
                  for lo, hi in zip(self.lower, self.upper)]
        return np.array(list(itertools.product(*values)), dtype=float)

    def to_json(self):
        return {"lower": self.lower.tolist(), "upper": self.upper.tolist()}

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(obj["lower"], obj["upper"])
        except (KeyError, TypeError) as e:
            errmsg = "Invalid box description: {0}".format(e)
            raise ParameterError(errmsg)


if __name__ == "__main__":
    import doctest
    doctest.testmod()
