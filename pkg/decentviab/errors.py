#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This file is part of decentviab package.

This module contains the exceptions raised by the decomposition,
grid and kernel modules. Every exception derives from a builtin so
callers may keep catching ValueError or ArithmeticError.

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

__all__ = [
    "DecentViabError",
    "ParameterError",
    "GridMismatchError",
    "EmptySetError",
    "SingularMatrixError",
    "FeasibilityError",
    "SolvabilityError",
    "DivergenceError",
    "ResidualError",
    "ComputationError",
    "ResourceCapError",
    "StageError",
]


class DecentViabError(Exception):
    """
    Root of every error raised by the package.

    Subclasses set :attr:`kind` (short machine name) and
    :attr:`exit_code` (value returned by the command line front end).
    """

    ###############
    #  CONSTANTS  #
    ###############

    #: Machine readable name of the error family
    kind = "error"

    #: Exit code used by the command line interface
    exit_code = 2

    ####################
    #  OBJECT METHODS  #
    ####################

    def __init__(self, errmsg, **details):
        """
        :param string errmsg: human readable description
        :param dict details: extra values (norms, traces) kept for reports
        """
        super(DecentViabError, self).__init__(errmsg)
        self.details = details

    def to_dict(self):
        """
        Returns a JSON friendly description of the error.

        :returns: dictionary with kind, message and details
        :rtype: dict

        TEST:

        >>> e = FeasibilityError("cond1 violated", lhs=2.0, rhs=1.0)
        >>> d = e.to_dict()
        >>> d["kind"], d["message"], d["details"]["lhs"]
        ('feasibility', 'cond1 violated', 2.0)
        """
        details = {}
        for key, value in self.details.items():
            details[key] = _jsonable(value)
        return {"kind": self.kind,
                "message": str(self),
                "details": details}


def _jsonable(value):
    if hasattr(value, "tolist"):
        return value.tolist()
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return dict((k, _jsonable(v)) for k, v in value.items())
    if isinstance(value, (int, float, str, bool)) or value is None:
        return value
    return repr(value)


class ParameterError(DecentViabError, ValueError):
    """Invalid argument or configuration value."""
    kind = "parameter"
    exit_code = 1


class GridMismatchError(ParameterError):
    """Two grid sets that must share a box do not."""
    kind = "grid-mismatch"


class EmptySetError(ParameterError):
    """
    A set that must be nonempty is empty (for a constraint set this is
    the ill-posed case).
    """
    kind = "empty-set"
    exit_code = 2


class SingularMatrixError(DecentViabError, ArithmeticError):
    kind = "singular"


class FeasibilityError(DecentViabError, ArithmeticError):
    """A sufficient condition for convergence is not met."""
    kind = "feasibility"


class SolvabilityError(FeasibilityError):
    """Column space of B2 transposed is not inside that of B1 transposed."""
    kind = "solvability"


class DivergenceError(DecentViabError, ArithmeticError):
    """
    A fixed point iteration left its guard ball or ran out of
    iterations. ``details["trace"]`` holds the iterate norms.
    """
    kind = "divergence"


class ResidualError(DecentViabError, ArithmeticError):
    """A computed solution failed its post verification."""
    kind = "residual"


class ComputationError(DecentViabError, ArithmeticError):
    kind = "computation"


class ResourceCapError(DecentViabError, MemoryError):
    """Requested grid exceeds the configured node cap."""
    kind = "resource-cap"
    exit_code = 3


class StageError(DecentViabError, ArithmeticError):
    """
    A stage of a recursive decomposition failed.

    ``completed`` keeps the results of the stages that finished.
    """
    kind = "stage"

    def __init__(self, errmsg, completed=None, **details):
        super(StageError, self).__init__(errmsg, **details)
        self.completed = list(completed or [])


if __name__ == "__main__":
    import doctest
    doctest.testmod()
