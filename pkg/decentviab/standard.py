#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This file is part of decentviab package.

This module contains the standard Riccati similarity transformation,
which block diagonalizes the state matrix by solving

    R(L) = L A11 - A22 L - L A12 L + A21 = 0
    X M - M N + A12 = 0,   X = A11 - A12 L,  N = A22 + L A12

and reports whether the transformed input matrix has disjoint input
structure across the two blocks.

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

from .errors import DivergenceError, ResidualError
from .linalg import inverse, induced_norm, sylvester_kron
from .riccati import DecompositionResult, _transform
from .settings import DEFAULTS

__all__ = ["standard_riccati", "input_support", "riccati_residual",
           "sylvester_residual"]

logger = logging.getLogger(__name__)


def riccati_residual(ps, L):
    """R(L) = L A11 - A22 L - L A12 L + A21."""
    return L @ ps.A11 - ps.A22 @ L - L @ ps.A12 @ L + ps.A21


def sylvester_residual(ps, L, M):
    """S(M) = (A11 - A12 L) M - M (A22 + L A12) + A12."""
    X = ps.A11 - ps.A12 @ L
    N = ps.A22 + L @ ps.A12
    return X @ M - M @ N + ps.A12


def input_support(B, k, tol=None):
    """
    Assigns every input coordinate to the block rows of ``B`` where it
    acts, an entry counting when its magnitude exceeds ``tol``.

    :param B: transformed input matrix (n x p)
    :param int k: split index
    :param float tol: support threshold (default 1e-9)
    :returns: (disjoint, {"upper": [...], "lower": [...]})
    :rtype: tuple

    TEST: each input drives one block

    >>> input_support(np.array([[1.0, 0.0], [0.0, 2.0]]), 1)
    (True, {'upper': [0], 'lower': [1]})

    TEST: a shared input

    >>> input_support(np.array([[1.0], [1.0]]), 1)[0]
    False
    """
    tol = DEFAULTS.support_tol if tol is None else tol
    B = np.asarray(B, dtype=float)
    upper = np.any(np.abs(B[:k, :]) > tol, axis=0)
    lower = np.any(np.abs(B[k:, :]) > tol, axis=0)
    disjoint = not bool(np.any(upper & lower))
    support = {"upper": [int(i) for i in np.flatnonzero(upper)],
               "lower": [int(i) for i in np.flatnonzero(lower)]}
    return disjoint, support


def standard_riccati(ps, max_iter=None, tol=None, settings=DEFAULTS):
    """
    Computes the standard transformation by iterating

        L_{k+1} = A22^-1 (L_k A11 - L_k A12 L_k + A21)

    from L_0 = A22^-1 A21, then solving the Sylvester equation in M
    directly through its Kronecker form.

    :param PartitionedSystem ps: partitioned system
    :param int max_iter: iteration cap (default 100)
    :param float tol: stop when two iterates differ less (default 1e-12)
    :returns: a decomposition with ``kind == "standard"`` whose state
        matrix is block diagonal
    :rtype: DecompositionResult
    :exception: SingularMatrixError - A22 is singular
    :exception: DivergenceError - the L iteration diverges or stalls
    :exception: ResidualError - a residual or a zero block check fails
    """
    max_iter = settings.max_iter if max_iter is None else int(max_iter)
    tol = settings.iter_tol if tol is None else float(tol)
    norm = settings.norm

    inv22 = inverse(ps.A22, what="A22")
    L = inv22 @ ps.A21
    guard = settings.divergence_factor * max(induced_norm(L, norm), 1.0)
    trace = [induced_norm(L, norm)]
    iterations = 0
    for iterations in range(1, max_iter + 1):
        L_next = inv22 @ (L @ ps.A11 - L @ ps.A12 @ L + ps.A21)
        step = induced_norm(L_next - L, norm)
        L = L_next
        size = induced_norm(L, norm)
        trace.append(size)
        if not np.isfinite(size) or size > guard:
            errmsg = "L iteration diverged at iteration {0}".format(
                iterations)
            raise DivergenceError(errmsg, trace=trace)
        if step <= tol:
            break
    else:
        errmsg = "L iteration did not converge in {0} iterations".format(
            max_iter)
        raise DivergenceError(errmsg, trace=trace)

    residual_l = induced_norm(riccati_residual(ps, L), norm)
    if residual_l > settings.residual_tol:
        errmsg = "Riccati residual {0:.3g} above {1:.1g}".format(
            residual_l, settings.residual_tol)
        raise ResidualError(errmsg, residual=residual_l)

    X = ps.A11 - ps.A12 @ L
    N = ps.A22 + L @ ps.A12
    M = sylvester_kron(X, -N, -ps.A12)
    residual_m = induced_norm(sylvester_residual(ps, L, M), norm)
    if residual_m > settings.residual_tol:
        errmsg = "Sylvester residual {0:.3g} above {1:.1g}".format(
            residual_m, settings.residual_tol)
        raise ResidualError(errmsg, residual=residual_m)

    T1, T2, T, transformed, cond = _transform(ps, L, M, settings)
    k = ps.k
    zero_upper = float(np.max(np.abs(transformed.A[:k, k:])))
    zero_lower = float(np.max(np.abs(transformed.A[k:, :k])))
    if max(zero_upper, zero_lower) > settings.zero_tol:
        errmsg = ("Off diagonal blocks not zero: {0:.3g}, {1:.3g}").format(
            zero_upper, zero_lower)
        raise ResidualError(errmsg, zero_block_a=zero_upper,
                            zero_block_lower=zero_lower)

    disjoint, support = (input_support(transformed.B, k,
                                       settings.support_tol)
                         if ps.p else (True, {"upper": [], "lower": []}))
    logger.info("Standard transformation: %d iterations, disjoint input %s",
                iterations, disjoint)
    diagnostics = {
        "iterations_l": iterations,
        "residual_riccati": residual_l,
        "residual_sylvester": residual_m,
        "zero_block_a": zero_upper,
        "zero_block_lower": zero_lower,
        "condition_T": cond,
        "eig_upper": np.linalg.eigvals(transformed.A[:k, :k]),
        "eig_lower": np.linalg.eigvals(transformed.A[k:, k:]),
    }
    return DecompositionResult(ps, "standard", L, M, T1, T2, T, transformed,
                               transformed.A[k:, :k].copy(),
                               diagnostics=diagnostics,
                               disjoint_input=disjoint,
                               input_support=support)


if __name__ == "__main__":
    import doctest
    doctest.testmod()
