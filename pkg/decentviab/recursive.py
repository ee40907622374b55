#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This file is part of decentviab package.

This module contains the recursive application of the modified
transformation: each stage splits the uppermost (controlled) subsystem
again, so the final system has one controlled subsystem on top and
externally trivially uncontrollable subsystems below it, coupled
downwards only.

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

from .errors import DecentViabError, ParameterError, ResidualError, StageError
from .riccati import decompose
from .settings import DEFAULTS
from .system import LtiSystem

__all__ = ["RecursiveDecomposition", "recursive_decompose"]

logger = logging.getLogger(__name__)


class RecursiveDecomposition(list):
    """
    List of the stage decompositions, outermost first, together with the
    composed transformation ``T`` over the full state and the system
    ``transformed`` = (T^-1 A T, T^-1 B).
    """

    def __init__(self, stages, T, transformed, splits):
        super(RecursiveDecomposition, self).__init__(stages)
        self.T = T
        self.transformed = transformed
        self.splits = list(splits)

    @property
    def block_sizes(self):
        """
        Dimensions of the subsystems from top to bottom.

        TEST:

        >>> r = RecursiveDecomposition([], np.eye(6), None, [4, 2])
        >>> r.block_sizes
        [2, 2, 2]
        """
        n = self.T.shape[0]
        bounds = [n] + self.splits + [0]
        return [bounds[i] - bounds[i + 1] for i in range(len(bounds) - 1)][::-1]

    def to_json(self):
        return {
            "splits": self.splits,
            "block_sizes": self.block_sizes,
            "T": self.T.tolist(),
            "A_transformed": self.transformed.A.tolist(),
            "B_transformed": self.transformed.B.tolist(),
            "stages": [s.to_json() for s in self],
        }


def _stage_delta(delta_policy, index):
    if isinstance(delta_policy, (list, tuple)):
        if index >= len(delta_policy):
            errmsg = "No delta given for stage {0}".format(index + 1)
            raise ParameterError(errmsg)
        return delta_policy[index]
    return delta_policy


def _check_splits(n, splits):
    previous = n
    for k in splits:
        if int(k) != k or not 1 <= k < previous:
            errmsg = ("Splits must be strictly decreasing integers within "
                      "[1, {0}), got {1}").format(n, splits)
            raise ParameterError(errmsg)
        previous = k


def recursive_decompose(sys, splits, delta_policy="auto", relaxation=1.0,
                        max_iter=None, settings=DEFAULTS):
    """
    Decomposes ``sys`` at every split in turn, each stage acting on the
    controlled upper subsystem left by the previous one.

    :param LtiSystem sys: system in original coordinates
    :param list splits: upper block dimensions, strictly decreasing
    :param delta_policy: "auto", a real value, or one entry per stage
    :param float relaxation: relaxation of the contraction conditions
    :returns: stage results plus the composed transformation
    :rtype: RecursiveDecomposition
    :exception: ParameterError - invalid splits
    :exception: StageError - a stage failed; ``completed`` holds the
        finished stages
    :exception: ResidualError - the composed system misses a zero block

    TEST: no split is the identity

    >>> s = LtiSystem(np.eye(2), [[1.0], [0.0]])
    >>> r = recursive_decompose(s, [])
    >>> len(r), bool(np.allclose(r.T, np.eye(2)))
    (0, True)
    """
    splits = [int(k) for k in splits]
    _check_splits(sys.n, splits)
    n = sys.n
    stages = []
    T = np.eye(n)
    current = sys
    for index, k in enumerate(splits):
        delta = _stage_delta(delta_policy, index)
        logger.info("Recursive stage %d: split %d of %d states",
                    index + 1, k, current.n)
        try:
            result = decompose(current.partition(k), delta=delta,
                               relaxation=relaxation, max_iter=max_iter,
                               settings=settings)
        except DecentViabError as e:
            errmsg = "Stage {0} (split {1}) failed: {2}".format(
                index + 1, k, e)
            raise StageError(errmsg, completed=stages, stage=index + 1,
                             cause=e.to_dict())
        stages.append(result)
        embed = np.eye(n)
        embed[:current.n, :current.n] = result.T
        T = T @ embed
        A_up, B_up = result.upper_subsystem()
        current = LtiSystem(A_up, B_up)

    A = np.linalg.solve(T, sys.A @ T)
    B = np.linalg.solve(T, sys.B) if sys.p else np.zeros((n, 0))
    for k in splits:
        worst = float(np.max(np.abs(A[:k, k:])))
        if worst > settings.zero_tol:
            errmsg = "Composed system has |A[:{0}, {0}:]| = {1:.3g}".format(
                k, worst)
            raise ResidualError(errmsg, zero_block_a=worst)
    if splits and sys.p:
        worst = float(np.max(np.abs(B[splits[-1]:, :])))
        if worst > settings.zero_tol:
            errmsg = "Composed input matrix drives lower blocks ({0:.3g})"
            raise ResidualError(errmsg.format(worst), zero_block_b=worst)
    return RecursiveDecomposition(stages, T, LtiSystem(A, B), splits)


if __name__ == "__main__":
    import doctest
    doctest.testmod()
