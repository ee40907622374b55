#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This file is part of decentviab package.

This module contains the writers of a run output directory: the
decomposition, the kernel traces, the product dump, the back mapped
point cloud, the delta sweep, the run report and the manifest.

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

from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
import csv
import datetime
import json
import logging
import os
import time

import numpy as np

from .__meta__ import __version__
from .errors import ParameterError
from .grid.gridio import write_csv, write_grid, write_trace

__all__ = ["RunManifest", "write_json", "write_decomposition",
           "write_delta_sweep", "write_backmap", "write_kernel_run",
           "write_pipeline_run", "pipeline_report"]

logger = logging.getLogger(__name__)

#: Columns of the delta sweep CSV
SWEEP_COLUMNS = ("delta", "feasible", "f", "upper_bound", "gamma_norm")


def _now():
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


@dataclass
class RunManifest(object):
    """
    Record of one command invocation, written as ``manifest.json``.

    TEST:

    >>> m = RunManifest("kernel", "c.json", "out", seed=3)
    >>> with m.stage("viab"):
    ...     pass
    >>> sorted(m.stages), m.seed
    (['viab'], 3)
    """

    command: str
    config: str
    out: str
    seed: int = 0
    version: str = __version__
    started: str = field(default_factory=_now)
    finished: str = None
    stages: dict = field(default_factory=dict)
    status: str = "running"

    @contextmanager
    def stage(self, name):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.stages[name] = time.perf_counter() - start

    def finish(self, status="ok"):
        self.finished = _now()
        self.status = status

    def write(self):
        return write_json(os.path.join(self.out, "manifest.json"),
                          asdict(self))


def _plain(value):
    if isinstance(value, dict):
        return dict((str(k), _plain(v)) for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return None if np.isnan(value) else str(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def write_json(path, obj):
    """
    Writes ``obj`` with sorted keys; numpy values become plain ones and
    non finite floats become strings.

    :returns: ``path``
    """
    directory = os.path.dirname(path)
    if directory and not os.path.isdir(directory):
        os.makedirs(directory)
    with open(path, "w") as f:
        json.dump(_plain(obj), f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def write_decomposition(out, decomposition):
    return write_json(os.path.join(out, "decomposition.json"),
                      decomposition.to_json())


def write_delta_sweep(path, search):
    """
    Writes the evaluated deltas of a search, smallest delta first.

    :param DeltaSearch search: result of the delta optimization
    """
    if search is None:
        raise ParameterError("No delta search to write")
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(SWEEP_COLUMNS)
        for s in sorted(search.trace, key=lambda s: s.delta):
            writer.writerow(["{0:.12g}".format(s.delta), int(s.feasible),
                             "{0:.12g}".format(s.f),
                             "{0:.12g}".format(s.upper_bound),
                             "{0:.12g}".format(search.gamma_norm)])
    return path


def write_backmap(out, backmap):
    """
    Writes ``backmap.csv`` (node images) and ``backmap_cells.csv`` (corner
    images, one row per corner tagged with its cell).
    """
    n = backmap.points.shape[1] if backmap.points.ndim == 2 else 0
    header = ["x{0}".format(i) for i in range(n)]
    with open(os.path.join(out, "backmap.csv"), "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in backmap.points:
            writer.writerow(["{0:.12g}".format(v) for v in row])
    with open(os.path.join(out, "backmap_cells.csv"), "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["cell", "corner"] + header)
        for c, corners in enumerate(backmap.cells):
            for k, row in enumerate(corners):
                writer.writerow([c, k] + ["{0:.12g}".format(v)
                                          for v in row])


def write_kernel_run(out, result, mode, extra=None):
    """
    Writes the trace of a single kernel run, the kernel nodes as CSV and
    ``report.json``.
    """
    write_trace(os.path.join(out, "trace"), result.trace, prefix=mode)
    write_grid(os.path.join(out, "kernel.grid"), result.kernel)
    write_csv(os.path.join(out, "kernel.csv"), result.kernel)
    report = {"mode": mode,
              "kernel_nodes": result.kernel.count,
              "constraint_nodes": result.trace[-1].count,
              "trace_counts": [gs.count for gs in result.trace]}
    if result.bounds is not None:
        report["shrinkage"] = [b._asdict() for b in result.bounds]
    if extra:
        report.update(extra)
    return write_json(os.path.join(out, "report.json"), report)


def pipeline_report(result, comparison=None, shrinkage=None):
    """
    Report dictionary of a decentralized run.

    :param PipelineResult result: decentralized run
    :param Comparison comparison: centralized comparison, if any
    :param list shrinkage: rows of :func:`decentviab.pipeline.shrinkage_report`
    :rtype: dict
    """
    diag = dict(result.decomposition.diagnostics)
    report = {
        "mode": result.mode,
        "v_nodes": result.v_kernel.count,
        "c_nodes": result.c_kernel.count,
        "v_trace": [gs.count for gs in result.v_trace],
        "c_trace": [gs.count for gs in result.c_trace],
        "product_nodes": (result.product.count if result.materialized
                          else result.v_kernel.count *
                          result.c_kernel.count),
        "materialized": result.materialized,
        "monotone": result.monotone(),
        "runtimes": dict(result.runtimes),
        "residuals": dict((k, v) for k, v in diag.items()
                          if "residual" in k or k.startswith("zero_block")),
        "shrinkage": shrinkage or [],
    }
    if comparison is not None:
        report["comparison"] = {
            "contained": bool(comparison.contained),
            "coverage": float(comparison.coverage),
            "offending": comparison.offending.tolist(),
        }
    return report


def write_pipeline_run(out, result, comparison=None, backmap=None,
                       shrinkage=None):
    """
    Writes the output directory of a decentralized run: decomposition,
    both traces, the product dump when materialized, the back mapped
    cloud and ``report.json``.

    :returns: the report dictionary
    :rtype: dict
    """
    write_decomposition(out, result.decomposition)
    write_trace(os.path.join(out, "vtrace"), result.v_trace, prefix="v")
    write_trace(os.path.join(out, "ctrace"), result.c_trace, prefix="c")
    if result.materialized:
        write_grid(os.path.join(out, "product.grid"), result.product)
    if backmap is not None:
        write_backmap(out, backmap)
    report = pipeline_report(result, comparison, shrinkage)
    write_json(os.path.join(out, "report.json"), report)
    logger.info("Wrote pipeline outputs to %s", out)
    return report
