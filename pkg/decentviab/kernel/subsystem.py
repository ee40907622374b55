#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This file is part of decentviab package.

This module contains the description of a subsystem handed to the
kernel engine and the sampling parameters of one time step.

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

from dataclasses import dataclass, replace

import numpy as np

from ..errors import ParameterError
from ..linalg import as_matrix, induced_norm

__all__ = ["SubsystemSpec", "StepParams", "MARGIN_AUTO"]

#: Margin policy deriving inter-sample excursions from the dynamics
MARGIN_AUTO = "auto"


class SubsystemSpec(object):
    """
    Dynamics dx/dt = A x + B u + Delta w of one subsystem, where ``w`` is
    the state of the subsystem driving it.

    TEST: a null input matrix marks the subsystem uncontrolled

    >>> s = SubsystemSpec([[0.0]], np.zeros((1, 0)), [[1.0]])
    >>> s.etuc, s.dim, s.coupled
    (True, 1, True)
    """

    def __init__(self, A, B=None, coupling=None):
        """
        :param A: square state matrix
        :param B: input matrix (dim x p), None or zero width for no input
        :param coupling: matrix Delta (dim x k), None when not driven
        :exception: ParameterError - inconsistent shapes
        """
        self.A = as_matrix(A, "A")
        dim = self.A.shape[0]
        if self.A.shape != (dim, dim):
            errmsg = "A must be square, got shape {0}".format(self.A.shape)
            raise ParameterError(errmsg)
        self.B = self._block(B, dim, "B")
        self.coupling = self._block(coupling, dim, "coupling")

    @staticmethod
    def _block(m, dim, name):
        if m is None:
            return np.zeros((dim, 0))
        m = np.array(m, dtype=float)
        if m.size == 0:
            return np.zeros((dim, 0))
        if m.ndim == 1:
            m = m.reshape(dim, -1)
        if m.ndim != 2 or m.shape[0] != dim:
            errmsg = "{0} has shape {1}, expected {2} rows".format(
                name, m.shape, dim)
            raise ParameterError(errmsg)
        return m

    def __repr__(self):
        return "SubsystemSpec(dim={0}, inputs={1}, etuc={2})".format(
            self.dim, self.B.shape[1], self.etuc)

    @property
    def dim(self):
        return self.A.shape[0]

    @property
    def p(self):
        return self.B.shape[1]

    @property
    def etuc(self):
        """True when no input acts on the subsystem."""
        return self.B.shape[1] == 0 or not bool(np.any(self.B))

    @property
    def coupled(self):
        return self.coupling.shape[1] > 0 and bool(np.any(self.coupling))

    def coupling_norm(self, norm=None):
        if self.coupling.shape[1] == 0:
            return 0.0
        return induced_norm(self.coupling, norm)

    @classmethod
    def upper_of(cls, decomposition):
        """Controlled upper subsystem of a decomposition."""
        A, B = decomposition.upper_subsystem()
        return cls(A, B)

    @classmethod
    def lower_of(cls, decomposition):
        """Lower subsystem of a decomposition, driven by the upper state."""
        A, B, delta = decomposition.lower_subsystem()
        return cls(A, B, delta)


@dataclass(frozen=True)
class StepParams(object):
    """
    Sampling of one kernel step.

    ``q`` is the step length (None lets the kernel derive tau / N),
    ``control_samples`` the values per input axis, ``time_samples`` the
    sub-intervals checked against the running constraint, ``margin``
    either "auto" or an explicit infinity norm radius,
    ``constraint_erosion`` the number of cells the sampled constraint is
    eroded by before use and ``threads`` the worker count of a step.
    """

    q: float = None
    control_samples: int = 3
    time_samples: int = 4
    margin: object = MARGIN_AUTO
    constraint_erosion: int = 0
    threads: int = 1

    def __post_init__(self):
        self.validate()

    def validate(self):
        """
        :exception: ParameterError - out of range value

        TEST:

        >>> StepParams(q=0.0)
        Traceback (most recent call last):
        ...
        decentviab.errors.ParameterError: Step length must be positive, got 0.0
        """
        if self.q is not None and not self.q > 0:
            errmsg = "Step length must be positive, got {0}".format(self.q)
            raise ParameterError(errmsg)
        if int(self.control_samples) < 2:
            errmsg = "Need at least 2 control samples per axis"
            raise ParameterError(errmsg)
        if int(self.time_samples) < 1:
            errmsg = "Need at least 1 time sample per step"
            raise ParameterError(errmsg)
        if self.margin != MARGIN_AUTO:
            try:
                value = float(self.margin)
            except (TypeError, ValueError):
                value = -1.0
            if not value >= 0:
                errmsg = "Margin must be 'auto' or a nonnegative radius"
                raise ParameterError(errmsg)
        if int(self.constraint_erosion) < 0:
            errmsg = "Constraint erosion must be a nonnegative cell count"
            raise ParameterError(errmsg)
        if int(self.threads) < 1:
            errmsg = "Thread count must be positive"
            raise ParameterError(errmsg)

    def for_horizon(self, tau, steps):
        """
        Returns a copy whose step length is tau / steps.

        :exception: ParameterError - bad horizon, or a preset q that
            disagrees with tau / steps
        """
        if not tau > 0:
            errmsg = "Horizon must be positive, got {0}".format(tau)
            raise ParameterError(errmsg)
        if int(steps) != steps or steps < 1:
            errmsg = "Step count must be a positive integer, got {0}".format(
                steps)
            raise ParameterError(errmsg)
        q = float(tau) / int(steps)
        if self.q is not None and abs(self.q - q) > 1e-12 * max(q, 1.0):
            errmsg = "Step length {0} disagrees with tau/N = {1}".format(
                self.q, q)
            raise ParameterError(errmsg)
        return replace(self, q=q)

    def to_json(self):
        return {"q": self.q, "control_samples": int(self.control_samples),
                "time_samples": int(self.time_samples),
                "margin": self.margin,
                "constraint_erosion": int(self.constraint_erosion),
                "threads": int(self.threads)}
