#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This file is part of decentviab package.

This module contains a sampling check of viability: a point is
certified when some piecewise constant input sequence keeps its exact
trajectory inside the constraint over the horizon.

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

from ..errors import ParameterError
from ..linalg import as_matrix, expm, zoh_input_matrix

__all__ = ["certify_point"]

logger = logging.getLogger(__name__)


def _inside(K, points):
    return np.asarray(K(np.atleast_2d(points)), dtype=bool)


def certify_point(A, B, x0, K, U, tau, samples=200, seed=0, pieces=20,
                  checks=10, center=None):
    """
    Looks for an input sequence keeping x0 viable.

    Tries ``samples`` random sequences of ``pieces`` constant inputs
    drawn uniformly from U, plus a greedy sequence that picks on every
    piece the sampled input bringing the state closest (infinity norm)
    to ``center`` while staying inside K. Trajectories use the exact
    zero-order-hold discretization and are checked ``checks`` times per
    piece.

    :param A: state matrix (n x n)
    :param B: input matrix (n x p), p may be zero
    :param x0: initial state
    :param K: membership predicate on (N, n) arrays, e.g. a shape or
        a grid set query
    :param ControlBox U: input set
    :param float tau: horizon
    :param int samples: number of random sequences
    :param int seed: seed of the random generator
    :param center: point the greedy sequence steers to (default origin)
    :returns: True when some sequence stays inside K
    :rtype: bool

    TEST: unstable scalar without input leaves [-1, 1]

    >>> from decentviab.grid import ControlBox
    >>> from decentviab.grid.shapes import BoxShape
    >>> K = BoxShape([-1.0], [1.0])
    >>> certify_point([[1.0]], np.zeros((1, 0)), [0.9], K,
    ...               ControlBox([], []), 1.0, samples=5)
    False
    """
    A = as_matrix(A, "A")
    n = A.shape[0]
    B = np.array(B, dtype=float).reshape(n, -1) if np.size(B) else \
        np.zeros((n, 0))
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if x0.shape != (n,) or U.dim != B.shape[1]:
        errmsg = "certify_point: inconsistent state or input dimensions"
        raise ParameterError(errmsg)
    if not tau > 0 or pieces < 1 or checks < 1:
        errmsg = "certify_point needs tau > 0 and positive step counts"
        raise ParameterError(errmsg)
    if not _inside(K, x0)[0]:
        return False

    dt = float(tau) / (pieces * checks)
    flow = expm(A, dt)
    inp = zoh_input_matrix(A, B, dt)
    center = np.zeros(n) if center is None else np.asarray(center, float)

    # greedy sequence
    candidates = U.samples(5) if U.dim else np.zeros((1, 0))
    candidates = np.vstack([candidates, U.center.reshape(1, -1)])
    x = x0.copy()
    alive = True
    for _ in range(pieces):
        best, best_gap = None, np.inf
        for u in candidates:
            y = x.copy()
            ok = True
            for _check in range(checks):
                y = flow @ y + inp @ u
                if not _inside(K, y)[0]:
                    ok = False
                    break
            if ok:
                gap = np.max(np.abs(y - center)) if n else 0.0
                if gap < best_gap:
                    best, best_gap = y, gap
        if best is None:
            alive = False
            break
        x = best
    if alive:
        logger.debug("certified by the greedy sequence")
        return True

    # random sequences, simulated together
    rng = np.random.default_rng(seed)
    X = np.tile(x0, (samples, 1))
    alive = np.ones(samples, dtype=bool)
    span = U.upper - U.lower
    for _ in range(pieces):
        u = U.lower + rng.random((samples, U.dim)) * span
        drive = u @ inp.T
        for _check in range(checks):
            X = X @ flow.T + drive
            alive &= _inside(K, X)
        if not alive.any():
            return False
    return bool(alive.any())
