#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This file is part of decentviab package.

This module contains the dense linear algebra primitives used by the
decomposition and kernel modules: the matrix norm of the bounds,
pseudoinverse, matrix exponential, zero-order-hold input matrix,
singular values and guarded linear solves.

All functions are pure: they never modify their arguments.

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
import scipy.linalg

from .errors import ComputationError, ParameterError, SingularMatrixError
from .settings import DEFAULTS, NORM_COLUMN, NORM_ROW

__all__ = [
    "as_matrix",
    "matrix_from_json",
    "matrix_to_json",
    "induced_norm",
    "pseudoinverse",
    "rank",
    "expm",
    "zoh_input_matrix",
    "largest_singular_value",
    "condition_number",
    "solve",
    "inverse",
    "sylvester_kron",
]

logger = logging.getLogger(__name__)

#: Condition number above which a square matrix is treated as singular
SINGULAR_COND = 1e14


def as_matrix(data, name="matrix"):
    """
    Converts ``data`` into a finite two dimensional float array.

    :param data: nested sequence or array
    :param string name: name used in error messages
    :returns: a fresh float array with at least one row and one column
    :rtype: numpy.ndarray
    :exception: ParameterError - wrong dimension, empty or non finite

    TEST: nested lists

    >>> as_matrix([[1, 2], [3, 4]]).shape
    (2, 2)

    TEST: NaN entry

    >>> as_matrix([[1.0, float("nan")]]) # doctest: +IGNORE_EXCEPTION_DETAIL
    Traceback (most recent call last):
    ParameterError: matrix has non finite entries
    """
    m = np.array(data, dtype=float)
    if m.ndim != 2:
        errmsg = "{0} must be two dimensional, got shape {1}".format(
            name, m.shape)
        raise ParameterError(errmsg)
    if m.shape[0] < 1 or m.shape[1] < 1:
        errmsg = "{0} must have at least one row and one column".format(name)
        raise ParameterError(errmsg)
    if not np.all(np.isfinite(m)):
        errmsg = "{0} has non finite entries".format(name)
        raise ParameterError(errmsg)
    return m


def matrix_from_json(obj, name="matrix"):
    """
    Reads a matrix stored as ``{rows, cols, data}`` with row-major data.

    A zero ``cols`` value is accepted and yields an empty-width matrix
    (null input matrices of uncontrolled subsystems).

    :param dict obj: decoded JSON object
    :returns: matrix of shape (rows, cols)
    :rtype: numpy.ndarray
    :exception: ParameterError - missing keys or wrong entry count

    TEST:

    >>> matrix_from_json({"rows": 2, "cols": 1, "data": [1, 2]}).tolist()
    [[1.0], [2.0]]
    """
    try:
        rows = int(obj["rows"])
        cols = int(obj["cols"])
        data = [float(v) for v in obj["data"]]
    except (KeyError, TypeError, ValueError) as e:
        errmsg = "{0}: malformed matrix object ({1})".format(name, e)
        raise ParameterError(errmsg)
    if rows < 1 or cols < 0 or len(data) != rows * cols:
        errmsg = "{0}: {1} entries do not fill {2}x{3}".format(
            name, len(data), rows, cols)
        raise ParameterError(errmsg)
    m = np.array(data, dtype=float).reshape(rows, cols)
    if not np.all(np.isfinite(m)):
        errmsg = "{0} has non finite entries".format(name)
        raise ParameterError(errmsg)
    return m


def matrix_to_json(m):
    """
    :param numpy.ndarray m: two dimensional array
    :returns: ``{rows, cols, data}`` with row-major data
    :rtype: dict
    """
    m = np.asarray(m, dtype=float)
    return {"rows": int(m.shape[0]),
            "cols": int(m.shape[1]),
            "data": [float(v) for v in m.ravel(order="C")]}


def induced_norm(m, kind=None):
    """
    Returns the matrix norm used by every feasibility condition and
    bound: the maximum absolute column sum, or the maximum absolute row
    sum when ``kind`` is ``"row"``.

    :param m: matrix
    :param string kind: "column" (default) or "row"
    :returns: nonnegative norm
    :rtype: float

    TEST: column sums are 4 and 6

    >>> induced_norm([[1, -2], [3, 4]])
    6.0

    TEST: row sums are 3 and 7

    >>> induced_norm([[1, -2], [3, 4]], kind="row")
    7.0
    """
    kind = kind or DEFAULTS.norm
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        return 0.0
    a = np.abs(m)
    if kind == NORM_COLUMN:
        return float(a.sum(axis=0).max())
    if kind == NORM_ROW:
        return float(a.sum(axis=1).max())
    errmsg = "Unknown norm kind '{0}'".format(kind)
    raise ParameterError(errmsg)


def pseudoinverse(m, rank_factor=None):
    """
    Moore-Penrose pseudoinverse through the singular value decomposition.

    Singular values below ``max(rows, cols) * sigma_max * rank_factor``
    are treated as zero.

    :param m: matrix
    :param float rank_factor: relative rank tolerance (default 1e-12)
    :returns: pseudoinverse with the transposed shape
    :rtype: numpy.ndarray

    TEST: zero matrix

    >>> pseudoinverse([[0.0, 0.0, 0.0]]).shape
    (3, 1)
    """
    m = np.asarray(m, dtype=float)
    rows, cols = m.shape
    if m.size == 0:
        return np.zeros((cols, rows))
    if rank_factor is None:
        rank_factor = DEFAULTS.rank_factor
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((cols, rows))
    tol = max(rows, cols) * s[0] * rank_factor
    inv_s = np.zeros_like(s)
    keep = s > tol
    inv_s[keep] = 1.0 / s[keep]
    return (vt.T * inv_s) @ u.T


def rank(m, rank_factor=None):
    """
    Numerical rank with the same tolerance as :func:`pseudoinverse`.

    TEST:

    >>> rank([[1.0, 2.0], [2.0, 4.0]])
    1
    """
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        return 0
    if rank_factor is None:
        rank_factor = DEFAULTS.rank_factor
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > max(m.shape) * s[0] * rank_factor))


def expm(m, t=1.0):
    """
    Matrix exponential of ``t * m`` (scaling and squaring with a degree
    13 Pade approximant, as implemented by :func:`scipy.linalg.expm`).

    :param m: square matrix
    :param float t: time scaling
    :returns: exp(t m)
    :rtype: numpy.ndarray
    :exception: ParameterError - non square input
    :exception: ComputationError - overflow

    TEST: nilpotent matrix, the series terminates

    >>> bool(np.allclose(expm([[0.0, 1.0], [0.0, 0.0]]), [[1.0, 1.0], [0.0, 1.0]]))
    True
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        errmsg = "expm needs a square matrix, got shape {0}".format(m.shape)
        raise ParameterError(errmsg)
    with np.errstate(over="ignore", invalid="ignore"):
        e = scipy.linalg.expm(float(t) * m)
    if not np.all(np.isfinite(e)):
        errmsg = "Matrix exponential overflowed (norm {0:.3g}, t={1})".format(
            induced_norm(m), t)
        raise ComputationError(errmsg)
    return e


def zoh_input_matrix(a, b, q):
    """
    Input matrix of the zero-order-hold discretization,
    integral over [0, q] of exp(A s) ds times B, read from the upper right
    block of the exponential of the augmented matrix [[A, B], [0, 0]].

    :param a: square state matrix (n x n)
    :param b: input matrix (n x p), p may be zero
    :param float q: step length, q > 0
    :returns: matrix of shape (n, p)
    :rtype: numpy.ndarray

    TEST: A = 0, B = I

    >>> bool(np.allclose(zoh_input_matrix([[0.0]], [[1.0]], 0.5), 0.5))
    True
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or b.ndim != 2 or b.shape[0] != n:
        errmsg = "Shapes {0} and {1} are not compatible".format(
            a.shape, b.shape)
        raise ParameterError(errmsg)
    if q <= 0:
        errmsg = "Step length must be positive, got {0}".format(q)
        raise ParameterError(errmsg)
    p = b.shape[1]
    if p == 0:
        return np.zeros((n, 0))
    aug = np.zeros((n + p, n + p))
    aug[:n, :n] = a
    aug[:n, n:] = b
    return expm(aug, q)[:n, n:]


def largest_singular_value(m):
    """
    TEST:

    >>> round(largest_singular_value([[0.0, 2.0], [0.0, 0.0]]), 12)
    2.0
    """
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[0])


def condition_number(m):
    """2-norm condition number, ``inf`` for singular input."""
    m = np.asarray(m, dtype=float)
    s = np.linalg.svd(m, compute_uv=False)
    if s[-1] == 0.0:
        return float("inf")
    return float(s[0] / s[-1])


def _check_invertible(a, what):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        errmsg = "{0} must be square, got shape {1}".format(what, a.shape)
        raise ParameterError(errmsg)
    cond = condition_number(a)
    if not np.isfinite(cond) or cond > SINGULAR_COND:
        errmsg = "{0} is singular (condition number {1:.3g})".format(
            what, cond)
        raise SingularMatrixError(errmsg, condition=cond)
    return a


def solve(a, b, what="matrix"):
    """
    Solves ``a x = b``.

    :exception: SingularMatrixError - ``a`` numerically singular
    """
    a = _check_invertible(a, what)
    return np.linalg.solve(a, np.asarray(b, dtype=float))


def inverse(a, what="matrix"):
    """
    Inverse of a square matrix.

    :exception: SingularMatrixError - ``a`` numerically singular
    """
    a = _check_invertible(a, what)
    return np.linalg.inv(a)


def sylvester_kron(a, b, c):
    """
    Solves ``a X + X b = c`` by the Kronecker product formulation
    (I kron a + b^T kron I) vec(X) = vec(c), with column-major vec.

    :param a: square (m x m)
    :param b: square (n x n)
    :param c: right-hand side (m x n)
    :returns: X of shape (m, n)
    :rtype: numpy.ndarray
    :exception: SingularMatrixError - a and -b share an eigenvalue

    TEST: scalar case 2x + 3x = 10

    >>> sylvester_kron([[2.0]], [[3.0]], [[10.0]]).tolist()
    [[2.0]]
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = c.shape
    k = np.kron(np.eye(n), a) + np.kron(b.T, np.eye(m))
    x = solve(k, c.reshape(-1, order="F"), what="Sylvester operator")
    return x.reshape((m, n), order="F")


if __name__ == "__main__":
    import doctest
    doctest.testmod()
