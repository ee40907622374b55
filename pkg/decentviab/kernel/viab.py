#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This file is part of decentviab package.

This module contains the grid viability kernel of a controlled
subsystem under piecewise constant (zero-order hold) inputs.

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
from concurrent.futures import ThreadPoolExecutor
import logging

import numpy as np

from ..errors import EmptySetError, ParameterError
from ..grid.gridset import GridSet, check_same_grid
from ..linalg import expm, zoh_input_matrix
from .queries import SummedAreaTable
from .subsystem import MARGIN_AUTO

__all__ = ["StepOperators", "KernelResult", "step_operators", "viab_step",
           "viability_kernel", "discretize_constraint"]

logger = logging.getLogger(__name__)

#: Outcome of a kernel computation; ``trace[i]`` is the set at step i,
#: ``trace[0]`` the kernel and ``trace[-1]`` the discretized constraint
KernelResult = namedtuple("KernelResult", ("kernel", "trace", "bounds"))

#: Matrices of one step: flows and input maps at the sub-sample times,
#: at the step end, and the excursion gain over one sub-interval
StepOperators = namedtuple(
    "StepOperators", ("flows", "inputs", "flow_q", "input_q", "excursion"))

#: Candidate nodes per worker chunk
CHUNK = 1 << 16


def step_operators(spec, sp):
    """
    Precomputes exp(t A), int_0^t exp(s A) B ds at the sub-sample times
    t_j = j q / m_t (j < m_t), the same at t = q, and the excursion gain
    W = int_0^(q/m_t) exp(s |A|) ds bounding |x(t_j + s) - x(t_j)| by
    W |A x(t_j) + B u| entrywise.

    :rtype: StepOperators
    """
    q = float(sp.q)
    m_t = int(sp.time_samples)
    s = q / m_t
    dim = spec.dim
    flows, inputs = [], []
    for j in range(m_t):
        t = j * s
        if j == 0:
            flows.append(np.eye(dim))
            inputs.append(np.zeros((dim, spec.p)))
        else:
            flows.append(expm(spec.A, t))
            inputs.append(zoh_input_matrix(spec.A, spec.B, t))
    flow_q = expm(spec.A, q)
    input_q = zoh_input_matrix(spec.A, spec.B, q)
    excursion = zoh_input_matrix(np.abs(spec.A), np.eye(dim), s)
    return StepOperators(flows, inputs, flow_q, input_q, excursion)


def discretize_constraint(K, sp):
    """
    Constraint actually used by the kernels: the sampled set eroded by
    ``sp.constraint_erosion`` cells.
    """
    cells = int(sp.constraint_erosion)
    if cells == 0:
        return K
    return K.erode(cells * float(np.max(K.box.h)))


def _retained(spec, sp, ops, points, controls, constraint_sat, target_sat):
    """Nodes (rows of ``points``) kept by some sampled control."""
    keep = np.zeros(len(points), dtype=bool)
    explicit = None if sp.margin == MARGIN_AUTO else float(sp.margin)
    for u in controls:
        todo = ~keep
        if not todo.any():
            break
        x0 = points[todo]
        ok = np.ones(len(x0), dtype=bool)
        bu = spec.B @ u
        for flow, inp in zip(ops.flows, ops.inputs):
            xj = x0 @ flow.T + inp @ u
            if explicit is None:
                radius = np.abs(xj @ spec.A.T + bu) @ ops.excursion.T
            else:
                radius = explicit
            ok &= constraint_sat.contains_boxes(xj, radius)
            if not ok.any():
                break
        if ok.any():
            end = x0[ok] @ ops.flow_q.T + ops.input_q @ u
            ok[ok] = target_sat.contains_points(end)
        keep[np.flatnonzero(todo)[ok]] = True
    return keep


def viab_step(spec, current, constraint, U, sp, ops=None,
              constraint_sat=None):
    """
    One backward step of the viability kernel: a node of ``current`` is
    kept when some sampled constant input u keeps the flow inside
    ``constraint`` over [0, q] (checked on every sub-interval with the
    excursion box) and brings it into ``current`` at time q.

    :param SubsystemSpec spec: subsystem, inputs optional
    :param GridSet current: target set (kernel of the later step)
    :param GridSet constraint: running constraint
    :param ControlBox U: input set
    :param StepParams sp: sampling, ``q`` set
    :returns: retained nodes, a subset of ``current``
    :rtype: GridSet
    :exception: GridMismatchError - sets on different grids
    :exception: ParameterError - dimensions disagree or q unset
    """
    check_same_grid(current, constraint)
    if sp.q is None:
        raise ParameterError("Step length q is not set")
    if current.dim != spec.dim:
        errmsg = "Grid dim {0} does not match subsystem dim {1}".format(
            current.dim, spec.dim)
        raise ParameterError(errmsg)
    if U.dim != spec.p:
        errmsg = "Input box dim {0} does not match {1} inputs".format(
            U.dim, spec.p)
        raise ParameterError(errmsg)
    if current.is_empty():
        return current

    ops = step_operators(spec, sp) if ops is None else ops
    constraint_sat = (SummedAreaTable(constraint) if constraint_sat is None
                      else constraint_sat)
    target_sat = SummedAreaTable(current)
    controls = U.samples(int(sp.control_samples))
    index = current.occupied_indices()
    points = current.box.coordinates_of(index)

    chunks = [slice(i, i + CHUNK) for i in range(0, len(points), CHUNK)]

    def run(chunk):
        return _retained(spec, sp, ops, points[chunk], controls,
                         constraint_sat, target_sat)

    if int(sp.threads) > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=int(sp.threads)) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(c) for c in chunks]
    keep = np.concatenate(parts) if parts else np.zeros(0, dtype=bool)

    occ = np.zeros(current.box.shape, dtype=bool)
    kept = index[keep]
    occ[tuple(kept.T)] = True
    return GridSet(current.box, occ)


def viability_kernel(spec, K, U, tau, N, sp):
    """
    Viability kernel over [0, tau] by N backward steps of length tau / N.

    :param SubsystemSpec spec: subsystem
    :param GridSet K: sampled constraint
    :param ControlBox U: input set
    :param float tau: horizon
    :param int N: number of steps
    :param StepParams sp: sampling
    :returns: the kernel V_0 and the trace V_0, ..., V_N with V_N the
        discretized constraint
    :rtype: KernelResult
    :exception: EmptySetError - empty constraint
    """
    sp = sp.for_horizon(tau, N)
    if K.is_empty():
        raise EmptySetError("The state constraint is empty; the problem is "
                            "ill-posed")
    constraint = discretize_constraint(K, sp)
    if constraint.is_empty():
        raise EmptySetError("The state constraint vanishes after erosion")
    ops = step_operators(spec, sp)
    constraint_sat = SummedAreaTable(constraint)
    trace = [None] * (N + 1)
    trace[N] = constraint
    for i in range(N - 1, -1, -1):
        trace[i] = viab_step(spec, trace[i + 1], constraint, U, sp, ops,
                             constraint_sat)
        logger.debug("viability step %d: %d nodes", i, trace[i].count)
        if trace[i].is_empty() and i > 0:
            logger.warning("Viability kernel empty at step %d", i)
            for k in range(i - 1, -1, -1):
                trace[k] = trace[i]
            break
    return KernelResult(trace[0], trace, None)
