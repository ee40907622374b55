# -*- coding: utf-8 -*-

"""
This file is part of decentviab package.

This module contains the linear time-invariant system types: the plain
system dx/dt = A x + B u and its block partition at a split index k.

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

from .errors import ParameterError
from .linalg import as_matrix, matrix_from_json, matrix_to_json

__all__ = ["LtiSystem", "PartitionedSystem"]


class LtiSystem(object):
    """
    Continuous time system dx/dt = A x + B u with constant matrices.

    The input matrix may have zero columns (an uncontrolled system).

    TEST: state and input counts

    >>> s = LtiSystem([[0.0, 1.0], [0.0, 0.0]], [[0.0], [1.0]])
    >>> s.n, s.p
    (2, 1)
    """

    def __init__(self, A, B):
        """
        :param A: square state matrix (n x n)
        :param B: input matrix (n x p), p may be zero
        :exception: ParameterError - inconsistent shapes
        """
        self.A = as_matrix(A, "A")
        n = self.A.shape[0]
        if self.A.shape[1] != n:
            errmsg = "A must be square, got shape {0}".format(self.A.shape)
            raise ParameterError(errmsg)
        B = np.array(B, dtype=float)
        if B.size == 0:
            B = np.zeros((n, 0))
        if B.ndim != 2 or B.shape[0] != n:
            errmsg = "B has shape {0}, expected {1} rows".format(B.shape, n)
            raise ParameterError(errmsg)
        if not np.all(np.isfinite(B)):
            errmsg = "B has non finite entries"
            raise ParameterError(errmsg)
        self.B = B

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def p(self):
        return self.B.shape[1]

    def partition(self, k):
        """
        :param int k: dimension of the upper block
        :returns: partitioned view of this system
        :rtype: PartitionedSystem
        """
        return PartitionedSystem(self, k)

    def eigenvalues(self):
        return np.linalg.eigvals(self.A)

    def to_json(self):
        return {"A": matrix_to_json(self.A),
                "B": {"rows": self.n, "cols": self.p,
                      "data": [float(v) for v in self.B.ravel()]}}

    @classmethod
    def from_json(cls, obj):
        """
        :param dict obj: ``{"A": matrix, "B": matrix}``
        :rtype: LtiSystem
        """
        try:
            a = matrix_from_json(obj["A"], "A")
            b = matrix_from_json(obj["B"], "B")
        except (KeyError, TypeError):
            errmsg = "System object needs 'A' and 'B' matrices"
            raise ParameterError(errmsg)
        return cls(a, b)

    def __repr__(self):
        return "LtiSystem(n={0}, p={1})".format(self.n, self.p)


class PartitionedSystem(object):
    """
    An LTI system cut at index k into the blocks

        A = [[A11, A12], [A21, A22]],  B = [[B1], [B2]]

    with A11 of size k x k.

    TEST: block shapes of a 3-state split after the first state

    >>> ps = LtiSystem(np.eye(3), np.ones((3, 1))).partition(1)
    >>> ps.A12.shape, ps.A21.shape, ps.B2.shape
    ((1, 2), (2, 1), (2, 1))
    """

    def __init__(self, sys, k):
        k = int(k)
        if not 1 <= k < sys.n:
            errmsg = "Split index must satisfy 1 <= k < {0}, got {1}".format(
                sys.n, k)
            raise ParameterError(errmsg)
        self.sys = sys
        self.k = k
        A, B = sys.A, sys.B
        self.A11 = A[:k, :k].copy()
        self.A12 = A[:k, k:].copy()
        self.A21 = A[k:, :k].copy()
        self.A22 = A[k:, k:].copy()
        self.B1 = B[:k, :].copy()
        self.B2 = B[k:, :].copy()

    @property
    def n(self):
        return self.sys.n

    @property
    def p(self):
        return self.sys.p

    @property
    def m(self):
        """Dimension of the lower block."""
        return self.sys.n - self.k

    def __repr__(self):
        return "PartitionedSystem(n={0}, p={1}, k={2})".format(
            self.n, self.p, self.k)
