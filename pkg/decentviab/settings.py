# -*- coding: utf-8 -*-

"""
This file is part of decentviab package.

This module contains the numerical defaults shared by every module.

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

from .errors import ParameterError

#: Max column absolute sum (induced 1-norm); default for all bounds
NORM_COLUMN = "column"
#: Max row absolute sum (induced infinity-norm)
NORM_ROW = "row"

NORM_KINDS = (NORM_COLUMN, NORM_ROW)


@dataclass(frozen=True)
class Settings(object):
    """
    Numerical defaults. Functions accept keyword overrides; this object
    only supplies the values used when none is given.
    """

    #: Matrix norm used by feasibility conditions and bounds
    norm: str = NORM_COLUMN
    #: Stop criterion on the norm of two successive iterates
    iter_tol: float = 1e-12
    #: Acceptance threshold for equation residuals
    residual_tol: float = 1e-8
    #: Acceptance threshold for structural zero blocks
    zero_tol: float = 1e-6
    #: Default iteration cap of the contractions
    max_iter: int = 100
    #: Default and maximum relaxation of the feasibility conditions
    relaxation: float = 1.0
    max_relaxation: float = 10.0
    #: Iterates larger than this factor times their bound diverged
    divergence_factor: float = 1e6
    #: Condition number of T above which a warning is logged
    cond_warning: float = 1e6
    #: Node count above which products are not materialized
    node_cap: int = 10 ** 7
    #: Relative factor of the SVD rank tolerance
    rank_factor: float = 1e-12
    #: Absolute entry threshold used to detect input support
    support_tol: float = 1e-9

    def with_overrides(self, **kwargs):
        """
        Returns a copy with some fields replaced.

        :exception: ParameterError - unknown norm or relaxation above max

        TEST:

        >>> Settings().with_overrides(norm="row").norm
        'row'
        """
        s = replace(self, **kwargs)
        s.validate()
        return s

    def validate(self):
        if self.norm not in NORM_KINDS:
            errmsg = "Unknown norm kind '{0}', expected one of {1}".format(
                self.norm, NORM_KINDS)
            raise ParameterError(errmsg)
        if not 0 < self.relaxation <= self.max_relaxation:
            errmsg = "Relaxation factor must lie in (0, {0}]".format(
                self.max_relaxation)
            raise ParameterError(errmsg, relaxation=self.relaxation)


#: Module wide defaults
DEFAULTS = Settings()


def check_relaxation(relaxation, settings=DEFAULTS):
    """
    Validates a relaxation factor against the allowed range.

    :param float relaxation: factor scaling the right-hand side
    :returns: the factor as float
    :rtype: float
    :exception: ParameterError - factor not in (0, max_relaxation]

    TEST:

    >>> check_relaxation(10)
    10.0
    """
    relaxation = float(relaxation)
    if not 0 < relaxation <= settings.max_relaxation:
        errmsg = "Relaxation factor {0} outside (0, {1}]".format(
            relaxation, settings.max_relaxation)
        raise ParameterError(errmsg)
    return relaxation
