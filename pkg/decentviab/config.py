#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This file is part of decentviab package.

This module contains the run configuration: one JSON document per
command, read into dataclasses. Matrices are written as
{rows, cols, data} with row-major data; sets are shape descriptions
(see decentviab.grid.shapes).

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

from dataclasses import dataclass, field
import json
import logging

from .errors import ParameterError
from .grid.controlbox import ControlBox
from .grid.gridbox import GridBox
from .grid.gridset import GridSet
from .grid.shapes import shape_from_json
from .kernel.subsystem import StepParams, SubsystemSpec
from .linalg import matrix_from_json
from .settings import DEFAULTS, NORM_KINDS
from .system import LtiSystem

__all__ = ["SystemSpec", "GridConfig", "KernelConfig", "PipelineConfig",
           "ProductTerm", "load_json", "system_spec_from_json",
           "kernel_config_from_json", "pipeline_config_from_json",
           "SCHEMA_VERSION"]

logger = logging.getLogger(__name__)

#: Version of the configuration layout understood by this release
SCHEMA_VERSION = 1

#: Accepted transformation kinds
TRANSFORMS = ("modified", "standard")


def load_json(path):
    """
    Reads a JSON document.

    :exception: ParameterError - unreadable file or malformed JSON
    """
    try:
        with open(path) as f:
            obj = json.load(f)
    except (IOError, OSError) as e:
        errmsg = "Cannot read {0}: {1}".format(path, e)
        raise ParameterError(errmsg)
    except ValueError as e:
        errmsg = "Malformed JSON in {0}: {1}".format(path, e)
        raise ParameterError(errmsg)
    if not isinstance(obj, dict):
        errmsg = "{0}: the configuration must be a JSON object".format(path)
        raise ParameterError(errmsg)
    version = obj.get("version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        errmsg = "{0}: unsupported configuration version {1}".format(
            path, version)
        raise ParameterError(errmsg)
    return obj


def _require(obj, key, where):
    if key not in obj:
        errmsg = "{0}: missing field '{1}'".format(where, key)
        raise ParameterError(errmsg)
    return obj[key]


def _positive_int(value, name):
    try:
        ivalue = int(value)
    except (TypeError, ValueError):
        ivalue = 0
    if ivalue != value or ivalue < 1:
        errmsg = "{0} must be a positive integer, got {1!r}".format(
            name, value)
        raise ParameterError(errmsg)
    return ivalue


def _positive_float(value, name):
    try:
        fvalue = float(value)
    except (TypeError, ValueError):
        fvalue = float("nan")
    if not fvalue > 0:
        errmsg = "{0} must be positive, got {1!r}".format(name, value)
        raise ParameterError(errmsg)
    return fvalue


def _delta(value):
    if value == "auto":
        return value
    try:
        return float(value)
    except (TypeError, ValueError):
        errmsg = "delta must be a number or 'auto', got {0!r}".format(value)
        raise ParameterError(errmsg)


def _system(obj):
    sysobj = _require(obj, "system", "config")
    A = matrix_from_json(_require(sysobj, "A", "system"), "A")
    Bobj = sysobj.get("B")
    B = matrix_from_json(Bobj, "B") if Bobj is not None else None
    return LtiSystem(A, B if B is not None else [[]] * A.shape[0])


def _step_params(obj):
    sampling = obj.get("sampling", {})
    try:
        return StepParams(
            control_samples=int(sampling.get("control_samples", 3)),
            time_samples=int(sampling.get("time_samples", 4)),
            margin=sampling.get("margin", "auto"),
            constraint_erosion=int(sampling.get("constraint_erosion", 0)),
            threads=int(sampling.get("threads", 1)))
    except (TypeError, ValueError) as e:
        errmsg = "Invalid sampling block: {0}".format(e)
        raise ParameterError(errmsg)


@dataclass
class SystemSpec(object):
    """Decomposition request."""

    system: LtiSystem
    split: int
    delta: object = "auto"
    transform: str = "modified"
    relaxation: float = 1.0
    max_iter: int = DEFAULTS.max_iter
    tol: float = DEFAULTS.iter_tol
    norm: str = DEFAULTS.norm
    splits: list = field(default_factory=list)
    delta_grid: dict = field(default_factory=dict)

    def settings(self):
        return DEFAULTS.with_overrides(norm=self.norm,
                                       max_iter=self.max_iter,
                                       iter_tol=self.tol)


def system_spec_from_json(obj):
    """
    :rtype: SystemSpec
    :exception: ParameterError - invalid field

    TEST:

    >>> s = system_spec_from_json({
    ...     "system": {"A": {"rows": 2, "cols": 2, "data": [0, 1, 2, 3]},
    ...                "B": {"rows": 2, "cols": 1, "data": [1, 0]}},
    ...     "split": 1, "delta": 50})
    >>> s.split, s.delta, s.transform
    (1, 50.0, 'modified')
    """
    system = _system(obj)
    splits = [int(k) for k in obj.get("splits", [])]
    split = obj.get("split", splits[0] if splits else None)
    if split is None:
        raise ParameterError("config: missing field 'split'")
    split = _positive_int(split, "split")
    if split >= system.n:
        errmsg = "split must be below the state dimension {0}".format(
            system.n)
        raise ParameterError(errmsg)
    transform = obj.get("transform", "modified")
    if transform not in TRANSFORMS:
        errmsg = "transform must be one of {0}".format(TRANSFORMS)
        raise ParameterError(errmsg)
    norm = obj.get("norm", DEFAULTS.norm)
    if norm not in NORM_KINDS:
        errmsg = "norm must be one of {0}".format(NORM_KINDS)
        raise ParameterError(errmsg)
    delta_grid = obj.get("delta_grid", {})
    if not isinstance(delta_grid, dict):
        raise ParameterError("delta_grid must be an object")
    return SystemSpec(
        system=system,
        split=split,
        delta=_delta(obj.get("delta", "auto")),
        transform=transform,
        relaxation=float(obj.get("relaxation", 1.0)),
        max_iter=_positive_int(obj.get("max_iter", DEFAULTS.max_iter),
                               "max_iter"),
        tol=_positive_float(obj.get("tol", DEFAULTS.iter_tol), "tol"),
        norm=norm,
        splits=splits,
        delta_grid=delta_grid)


@dataclass
class GridConfig(object):
    """A grid together with the constraint sampled on it."""

    box: GridBox
    constraint: object

    @classmethod
    def from_json(cls, grid_obj, shape_obj):
        box = GridBox.from_json(grid_obj)
        shape = shape_from_json(shape_obj, dim=box.dim)
        return cls(box, shape)

    def sample(self):
        return GridSet.from_predicate(self.box, self.constraint)


@dataclass
class KernelConfig(object):
    """Single subsystem kernel run."""

    mode: str
    spec: SubsystemSpec
    grid: GridConfig
    inputs: ControlBox
    vbox: ControlBox
    horizon: float
    steps: int
    sampling: StepParams
    norm: str = DEFAULTS.norm
    analytic: dict = None
    certify: dict = None


def kernel_config_from_json(obj, mode=None, steps=None):
    """
    :param dict obj: decoded document
    :param string mode: "viab" or "inv", overriding the document
    :param int steps: step count overriding the document
    :rtype: KernelConfig
    :exception: ParameterError - invalid field, or "inv" without vbox
    """
    mode = mode or obj.get("mode", "viab")
    if mode not in ("viab", "inv"):
        errmsg = "mode must be 'viab' or 'inv', got {0!r}".format(mode)
        raise ParameterError(errmsg)
    sub = _require(obj, "subsystem", "config")
    A = matrix_from_json(_require(sub, "A", "subsystem"), "A")
    B = matrix_from_json(sub["B"], "B") if "B" in sub else None
    coupling = (matrix_from_json(sub["coupling"], "coupling")
                if "coupling" in sub else None)
    spec = SubsystemSpec(A, B, coupling)
    grid = GridConfig.from_json(_require(obj, "grid", "config"),
                                _require(obj, "constraint", "config"))
    if grid.box.dim != spec.dim:
        errmsg = "grid has dim {0}, subsystem {1}".format(grid.box.dim,
                                                          spec.dim)
        raise ParameterError(errmsg)
    inputs = (ControlBox.from_json(obj["inputs"]) if "inputs" in obj
              else ControlBox([], []))
    if inputs.dim != spec.p:
        errmsg = "inputs have dim {0}, subsystem has {1} inputs".format(
            inputs.dim, spec.p)
        raise ParameterError(errmsg)
    vbox = ControlBox.from_json(obj["vbox"]) if "vbox" in obj else None
    if mode == "inv" and vbox is None and spec.coupling.shape[1] > 0:
        raise ParameterError("mode 'inv' needs a 'vbox' driving box")
    steps = steps if steps is not None else _require(obj, "steps", "config")
    return KernelConfig(
        mode=mode, spec=spec, grid=grid, inputs=inputs, vbox=vbox,
        horizon=_positive_float(_require(obj, "horizon", "config"),
                                "horizon"),
        steps=_positive_int(steps, "steps"),
        sampling=_step_params(obj),
        norm=obj.get("norm", DEFAULTS.norm),
        analytic=obj.get("analytic"),
        certify=obj.get("certify"))


@dataclass
class ProductTerm(object):
    """One product constraint K_upper x K_lower in transformed coordinates."""

    upper: object
    lower: object


@dataclass
class PipelineConfig(object):
    """Decentralized run in transformed coordinates."""

    system: SystemSpec
    horizon: float
    steps: int
    upper_box: GridBox
    lower_box: GridBox
    terms: list
    inputs: ControlBox
    sampling: StepParams
    compare: bool = False
    node_cap: int = DEFAULTS.node_cap

    @property
    def constraint_upper(self):
        return self.terms[0].upper

    @property
    def constraint_lower(self):
        return self.terms[0].lower


def pipeline_config_from_json(obj, steps=None, compare=None, delta=None,
                              standard=None):
    """
    :param dict obj: decoded document
    :param int steps: step count overriding the document
    :param bool compare: centralized comparison toggle override
    :param delta: delta policy override
    :param bool standard: force the standard transformation
    :rtype: PipelineConfig
    :exception: ParameterError - invalid field
    """
    system = system_spec_from_json(obj)
    if delta is not None:
        system.delta = _delta(delta)
    if standard:
        system.transform = "standard"
    grids = _require(obj, "grids", "config")
    upper_box = GridBox.from_json(_require(grids, "upper", "grids"))
    lower_box = GridBox.from_json(_require(grids, "lower", "grids"))
    k = system.split
    if upper_box.dim != k or lower_box.dim != system.system.n - k:
        errmsg = "Grids of dims {0} and {1} do not match the split {2}/{3}"
        raise ParameterError(errmsg.format(upper_box.dim, lower_box.dim, k,
                                           system.system.n - k))
    if "terms" in obj:
        raw_terms = obj["terms"]
        if not isinstance(raw_terms, list) or not raw_terms:
            raise ParameterError("terms must be a nonempty list")
    else:
        raw_terms = [_require(obj, "constraint", "config")]
    terms = []
    for term in raw_terms:
        terms.append(ProductTerm(
            shape_from_json(_require(term, "upper", "constraint"), dim=k),
            shape_from_json(_require(term, "lower", "constraint"),
                            dim=system.system.n - k)))
    inputs = ControlBox.from_json(_require(obj, "inputs", "config"))
    if inputs.dim != system.system.p:
        errmsg = "inputs have dim {0}, system has {1} inputs".format(
            inputs.dim, system.system.p)
        raise ParameterError(errmsg)
    steps = steps if steps is not None else _require(obj, "steps", "config")
    return PipelineConfig(
        system=system,
        horizon=_positive_float(_require(obj, "horizon", "config"),
                                "horizon"),
        steps=_positive_int(steps, "steps"),
        upper_box=upper_box,
        lower_box=lower_box,
        terms=terms,
        inputs=inputs,
        sampling=_step_params(obj),
        compare=bool(obj.get("compare", False) if compare is None
                     else compare),
        node_cap=_positive_int(obj.get("node_cap", DEFAULTS.node_cap),
                               "node_cap"))
