#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This file is part of decentviab package.

This module contains the bound on how much the invariance kernel of a
driven subsystem shrinks over one step: an infinity norm ball of radius

    r = ||Delta|| * sup ||w|| * eta(q),   eta(s) = (exp(s ||A||) - 1) / ||A||

where w ranges over the box bounding the driving state.

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

from collections import namedtuple

import numpy as np

from ..errors import ParameterError
from ..linalg import largest_singular_value, induced_norm

__all__ = ["eta", "taylor_reference", "ShrinkageBound", "shrinkage_bound"]

#: Below this norm eta falls back to its limit s
ETA_ZERO = 1e-14

#: Erosion applied at one step and the numbers it is made of
ShrinkageBound = namedtuple(
    "ShrinkageBound",
    ("q", "eta", "coupling_norm", "vbox_radius", "radius", "taylor"))


def eta(norm_a, s):
    """
    (exp(s ||A||) - 1) / ||A||, equal to s in the limit ||A|| -> 0.

    :param float norm_a: norm of the state matrix, nonnegative
    :param float s: time, nonnegative
    :rtype: float

    TEST: zero time

    >>> eta(3.0, 0.0)
    0.0

    TEST: vanishing norm

    >>> eta(0.0, 0.25)
    0.25

    TEST: unit norm

    >>> round(eta(1.0, 0.1), 5)
    0.10517
    """
    if norm_a < 0 or s < 0:
        errmsg = "eta needs nonnegative arguments, got {0} and {1}".format(
            norm_a, s)
        raise ParameterError(errmsg)
    if norm_a <= ETA_ZERO:
        return float(s)
    return float(np.expm1(s * norm_a) / norm_a)


def taylor_reference(A, q):
    """
    Second order reference q + (q^2 / 2) sigma_max(A) sqrt(n), reported
    next to the applied radius.
    """
    A = np.asarray(A, dtype=float)
    return q + 0.5 * q * q * largest_singular_value(A) * np.sqrt(A.shape[0])


def shrinkage_bound(spec, vbox, q, norm=None):
    """
    Erosion radius of one invariance step.

    The radius is ||Delta|| |v|_inf eta(q) with ||Delta|| taken in
    ``norm``. Only the row norm bounds the infinity norm of Delta v, so
    with the column norm the radius can fall short of the drift when the
    row sums of Delta exceed its column sums.

    :param SubsystemSpec spec: driven subsystem
    :param ControlBox vbox: box bounding the driving state over the step
        (None when the subsystem is not driven)
    :param float q: step length
    :param string norm: norm used for Delta and A
    :rtype: ShrinkageBound

    TEST: matched drift, one unit of coupling

    >>> from decentviab.kernel.subsystem import SubsystemSpec
    >>> from decentviab.grid.controlbox import ControlBox
    >>> spec = SubsystemSpec([[0.0]], None, [[1.0]])
    >>> b = shrinkage_bound(spec, ControlBox([-1.0], [1.0]), 0.01)
    >>> round(b.radius, 12)
    0.01
    """
    e = eta(induced_norm(spec.A, norm), q)
    cnorm = spec.coupling_norm(norm)
    if vbox is None or cnorm == 0.0:
        radius_v = 0.0 if vbox is None else vbox.radius
        return ShrinkageBound(q, e, cnorm, radius_v, 0.0,
                              taylor_reference(spec.A, q))
    if vbox.dim != spec.coupling.shape[1]:
        errmsg = "Driving box has dim {0}, coupling expects {1}".format(
            vbox.dim, spec.coupling.shape[1])
        raise ParameterError(errmsg)
    return ShrinkageBound(q, e, cnorm, vbox.radius, cnorm * vbox.radius * e,
                          taylor_reference(spec.A, q))
