#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This file is part of decentviab package.

This module contains the invariance kernel of a driven, uncontrolled
subsystem. The driving state only enters through the box bounding it,
and its effect over a step is absorbed by eroding the set with the
shrinkage bound. The kernel is carried across steps as an inner
distance field so that erosion radii accumulate without rounding to the
grid at every step.

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

from ..errors import EmptySetError, ParameterError
from ..grid.controlbox import ControlBox
from ..grid.gridset import GridSet
from ..linalg import expm, induced_norm
from ..settings import NORM_ROW
from .queries import distance_field, field_at, field_members
from .shrinkage import eta, shrinkage_bound
from .viab import KernelResult, discretize_constraint

__all__ = ["inv_field_step", "inv_step_etuc", "invariance_kernel_etuc"]

logger = logging.getLogger(__name__)


class _FlowBounds(object):
    """Flows at the sub-sample times and their row-sum norms."""

    def __init__(self, spec, sp):
        q = float(sp.q)
        m_t = int(sp.time_samples)
        s = q / m_t
        self.flows = [expm(spec.A, j * s) for j in range(m_t)]
        row = induced_norm(spec.A, NORM_ROW)
        self.growth = [induced_norm(f, NORM_ROW) * np.exp(s * row)
                       for f in self.flows]
        self.drift = eta(row, s)
        self.A = spec.A


def _check_etuc(spec):
    if not spec.etuc:
        errmsg = "Invariance steps need an uncontrolled subsystem"
        raise ParameterError(errmsg)


def inv_field_step(spec, box, field, vbox, sp, flows=None, norm=None):
    """
    One backward invariance step on an inner distance field.

    For a node x and y_j = exp(t_j A) x the new value is

        min_j (rho(y_j) - eta_row(s) ||A y_j||) / (||exp(t_j A)|| e^(s ||A||)) - r

    with rho the field read at y_j and r the shrinkage radius, all
    geometric norms row sums (induced infinity norm). The result never
    exceeds the old field.

    :returns: (new field, ShrinkageBound of the step)
    :rtype: tuple
    """
    _check_etuc(spec)
    flows = _FlowBounds(spec, sp) if flows is None else flows
    bound = shrinkage_bound(spec, vbox, float(sp.q), norm)
    points = box.node_coordinates()
    value = np.full(len(points), np.inf)
    for flow, growth in zip(flows.flows, flows.growth):
        y = points @ flow.T
        rho = field_at(box, field, y)
        slack = flows.drift * np.max(np.abs(y @ flows.A.T), axis=1)
        value = np.minimum(value, (rho - slack) / growth)
    new = np.minimum(value.reshape(box.shape) - bound.radius, field)
    return new, bound


def inv_step_etuc(spec, current, vbox, sp, norm=None):
    """
    One backward invariance step on grid sets.

    :param SubsystemSpec spec: uncontrolled subsystem with coupling
    :param GridSet current: kernel of the later step
    :param ControlBox vbox: box bounding the driving state
    :param StepParams sp: sampling, ``q`` set
    :returns: retained nodes, a subset of ``current``
    :rtype: GridSet
    :exception: ParameterError - controlled subsystem or q unset
    """
    if sp.q is None:
        raise ParameterError("Step length q is not set")
    if current.dim != spec.dim:
        errmsg = "Grid dim {0} does not match subsystem dim {1}".format(
            current.dim, spec.dim)
        raise ParameterError(errmsg)
    if current.is_empty():
        return current
    field, _ = inv_field_step(spec, current.box, distance_field(current),
                              vbox, sp, norm=norm)
    occ = field_members(current.box, field) & current.occupancy
    return GridSet(current.box, occ)


def invariance_kernel_etuc(spec, K, vboxes, tau, N, sp, norm=None):
    """
    Invariance kernel over [0, tau] by N backward steps.

    :param SubsystemSpec spec: uncontrolled subsystem
    :param GridSet K: sampled constraint
    :param vboxes: one ControlBox per step, ``vboxes[i]`` bounding the
        driving state over step i (the interval hull of the driving
        kernel at step i + 1); a single box is used for every step
    :param float tau: horizon
    :param int N: number of steps
    :param StepParams sp: sampling
    :returns: kernel C_0, trace C_0, ..., C_N and the shrinkage bound of
        every step
    :rtype: KernelResult
    :exception: ParameterError - wrong number of boxes
    :exception: EmptySetError - empty constraint
    """
    _check_etuc(spec)
    sp = sp.for_horizon(tau, N)
    if vboxes is None or isinstance(vboxes, ControlBox):
        vboxes = [vboxes] * N
    vboxes = list(vboxes)
    if len(vboxes) != N:
        errmsg = "Expected {0} driving boxes, got {1}".format(N, len(vboxes))
        raise ParameterError(errmsg)
    if spec.coupled and any(v is None for v in vboxes):
        errmsg = "A coupled subsystem needs a driving box at every step"
        raise ParameterError(errmsg)
    if K.is_empty():
        raise EmptySetError("The state constraint is empty; the problem is "
                            "ill-posed")
    constraint = discretize_constraint(K, sp)
    box = K.box
    flows = _FlowBounds(spec, sp)
    field = distance_field(constraint)
    trace = [None] * (N + 1)
    bounds = [None] * N
    trace[N] = constraint
    for i in range(N - 1, -1, -1):
        field, bounds[i] = inv_field_step(spec, box, field, vboxes[i], sp,
                                          flows, norm)
        occ = field_members(box, field) & trace[i + 1].occupancy
        trace[i] = GridSet(box, occ)
        logger.debug("invariance step %d: r=%.3g, %d nodes", i,
                     bounds[i].radius, trace[i].count)
        if trace[i].is_empty() and i > 0:
            logger.warning("Invariance kernel empty at step %d", i)
            for k in range(i - 1, -1, -1):
                bounds[k] = shrinkage_bound(spec, vboxes[k], float(sp.q),
                                            norm)
                trace[k] = trace[i]
            break
    return KernelResult(trace[0], trace, bounds)
