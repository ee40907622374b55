#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This file is part of decentviab package.

This module contains the constraint shapes accepted in configuration
files. Every shape answers vectorized membership queries over arrays
of points, one point per row.

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
from ..linalg import matrix_from_json, matrix_to_json

__all__ = ["Shape", "BoxShape", "BallShape", "UnionShape",
           "IntersectionShape", "TransformedShape", "FullShape",
           "shape_from_json"]

#: Slack granted to points sitting on a boundary
TOLERANCE = 1e-9


class Shape(object):
    """Base of all shapes."""

    #: Name used in the "type" field of the JSON description
    kind = None

    def __init__(self, dim):
        self.dim = int(dim)

    def contains(self, points):
        """
        :param points: array of shape (N, dim)
        :returns: boolean array of length N
        """
        raise NotImplementedError()

    def __call__(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != self.dim:
            errmsg = "{0} shape of dim {1} queried with {2} coordinates"
            raise ParameterError(errmsg.format(self.kind, self.dim,
                                               points.shape[1]))
        return self.contains(points)


class FullShape(Shape):
    kind = "full"

    def contains(self, points):
        return np.ones(len(points), dtype=bool)

    def to_json(self):
        return {"type": self.kind, "dim": self.dim}


class BoxShape(Shape):
    """
    Axis-aligned box.

    TEST:

    >>> s = BoxShape([-1.0, -1.0], [1.0, 1.0])
    >>> s([[0.0, 1.0], [0.0, 1.5]]).tolist()
    [True, False]
    """
    kind = "box"

    def __init__(self, lower, upper):
        self.lower = np.asarray(lower, dtype=float).reshape(-1)
        self.upper = np.asarray(upper, dtype=float).reshape(-1)
        if self.lower.shape != self.upper.shape or \
                np.any(self.lower > self.upper):
            errmsg = "Box needs lower <= upper of equal lengths"
            raise ParameterError(errmsg)
        super(BoxShape, self).__init__(len(self.lower))

    def contains(self, points):
        return np.all((points >= self.lower - TOLERANCE) &
                      (points <= self.upper + TOLERANCE), axis=1)

    def to_json(self):
        return {"type": self.kind, "lower": self.lower.tolist(),
                "upper": self.upper.tolist()}


class BallShape(Shape):
    """
    Norm ball ``||x - center|| <= radius`` with the 1, 2 or infinity norm.

    TEST: the 2-norm ball excludes the corner the infinity ball keeps

    >>> BallShape([0.0, 0.0], 1.0, 2)([[0.8, 0.8]]).tolist()
    [False]
    >>> BallShape([0.0, 0.0], 1.0, "inf")([[0.8, 0.8]]).tolist()
    [True]
    """
    kind = "ball"

    #: Accepted spellings of the norm order
    NORMS = {"1": 1, "1.0": 1, "2": 2, "2.0": 2, "inf": np.inf,
             "infinity": np.inf}

    def __init__(self, center, radius, norm="inf"):
        self.center = np.asarray(center, dtype=float).reshape(-1)
        self.radius = float(radius)
        key = str(norm).lower()
        if key not in self.NORMS:
            errmsg = "Unsupported ball norm '{0}'".format(norm)
            raise ParameterError(errmsg)
        if self.radius < 0:
            errmsg = "Ball radius must be nonnegative"
            raise ParameterError(errmsg)
        self.norm = self.NORMS[key]
        super(BallShape, self).__init__(len(self.center))

    def contains(self, points):
        d = np.linalg.norm(points - self.center, ord=self.norm, axis=1)
        return d <= self.radius + TOLERANCE

    def to_json(self):
        norm = "inf" if self.norm == np.inf else int(self.norm)
        return {"type": self.kind, "center": self.center.tolist(),
                "radius": self.radius, "norm": norm}


class _Composite(Shape):

    def __init__(self, parts):
        parts = list(parts)
        if not parts:
            errmsg = "{0} needs at least one part".format(self.kind)
            raise ParameterError(errmsg)
        dims = set(p.dim for p in parts)
        if len(dims) != 1:
            errmsg = "{0} parts have different dimensions {1}".format(
                self.kind, sorted(dims))
            raise ParameterError(errmsg)
        self.parts = parts
        super(_Composite, self).__init__(dims.pop())

    def to_json(self):
        return {"type": self.kind, "parts": [p.to_json() for p in self.parts]}


class UnionShape(_Composite):
    kind = "union"

    def contains(self, points):
        out = np.zeros(len(points), dtype=bool)
        for part in self.parts:
            out |= part.contains(points)
        return out


class IntersectionShape(_Composite):
    kind = "intersection"

    def contains(self, points):
        out = np.ones(len(points), dtype=bool)
        for part in self.parts:
            out &= part.contains(points)
        return out


class TransformedShape(Shape):
    """
    Shape ``{z : T z in inner}``: lets a constraint stated in original
    coordinates be sampled on a grid of transformed coordinates.

    TEST: a swap of axes

    >>> inner = BoxShape([0.0, -1.0], [2.0, 1.0])
    >>> s = TransformedShape([[0.0, 1.0], [1.0, 0.0]], inner)
    >>> s([[0.5, 1.5]]).tolist()
    [True]
    """
    kind = "transformed"

    def __init__(self, matrix, inner):
        self.matrix = np.asarray(matrix, dtype=float)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != inner.dim:
            errmsg = "Transform of shape {0} does not map into dim {1}"
            raise ParameterError(errmsg.format(self.matrix.shape, inner.dim))
        self.inner = inner
        super(TransformedShape, self).__init__(self.matrix.shape[1])

    def contains(self, points):
        return self.inner.contains(points @ self.matrix.T)

    def to_json(self):
        return {"type": self.kind, "matrix": matrix_to_json(self.matrix),
                "shape": self.inner.to_json()}


def shape_from_json(obj, dim=None):
    """
    Builds a shape from its JSON description.

    :param dict obj: description with a "type" field
    :param int dim: expected dimension, checked when given
    :rtype: Shape
    :exception: ParameterError - unknown type, missing field or
        dimension mismatch

    TEST: a union of a ball and a box

    >>> s = shape_from_json({"type": "union", "parts": [
    ...     {"type": "ball", "center": [0, 0], "radius": 1, "norm": 2},
    ...     {"type": "box", "lower": [0, 0], "upper": [2, 2]}]})
    >>> s([[1.5, 1.5], [-0.9, -0.9]]).tolist()
    [True, False]
    """
    if not isinstance(obj, dict) or "type" not in obj:
        errmsg = "A shape must be an object with a 'type' field"
        raise ParameterError(errmsg)
    kind = obj["type"]
    try:
        if kind == "box":
            shape = BoxShape(obj["lower"], obj["upper"])
        elif kind == "ball":
            shape = BallShape(obj["center"], obj["radius"],
                              obj.get("norm", "inf"))
        elif kind == "union":
            shape = UnionShape(shape_from_json(p) for p in obj["parts"])
        elif kind == "intersection":
            shape = IntersectionShape(shape_from_json(p)
                                      for p in obj["parts"])
        elif kind == "transformed":
            shape = TransformedShape(
                matrix_from_json(obj["matrix"], "transform"),
                shape_from_json(obj["shape"]))
        elif kind == "full":
            shape = FullShape(obj["dim"])
        else:
            errmsg = "Unknown shape type '{0}'".format(kind)
            raise ParameterError(errmsg)
    except KeyError as e:
        errmsg = "Shape '{0}' misses field {1}".format(kind, e)
        raise ParameterError(errmsg)
    if dim is not None and shape.dim != dim:
        errmsg = "Shape has dim {0}, expected {1}".format(shape.dim, dim)
        raise ParameterError(errmsg)
    return shape


if __name__ == "__main__":
    import doctest
    doctest.testmod()
