#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This file is part of decentviab package.

This module contains the command line front end. Every command reads
one JSON configuration, writes its results and a manifest to an output
directory and exits with 0 on success, 1 on usage or configuration
errors, 2 on numerical failures and 3 when a resource cap is hit.
Failures print a JSON error object on standard error.

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

from dataclasses import replace
import argparse
import json
import logging
import os
import sys

import numpy as np

from .__meta__ import __version__
from .config import (kernel_config_from_json, load_json,
                     pipeline_config_from_json, system_spec_from_json)
from .errors import DecentViabError, EmptySetError, ParameterError
from .grid.gridio import read_grid, read_trace, write_grid
from .kernel.certify import certify_point
from .kernel.inv import invariance_kernel_etuc
from .kernel.viab import viability_kernel
from .pipeline import (compare, decompose_from_spec, map_back,
                       run_centralized, run_decentralized,
                       run_union_of_products, shrinkage_report)
from .plot import parse_slice, plot_delta_sweep, plot_slice, read_delta_sweep
from .report import (RunManifest, write_decomposition, write_delta_sweep,
                     write_kernel_run, write_pipeline_run)

__all__ = ["main", "build_parser", "cmd_decompose", "cmd_kernel",
           "cmd_pipeline", "cmd_plot"]

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """Argument parser reporting usage errors as ParameterError."""

    def error(self, message):
        raise ParameterError(message)


def _delta_arg(text):
    if text == "auto":
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            "expected a number or 'auto', got {0!r}".format(text))


def build_parser():
    parser = _Parser(prog="decentviab",
                     description="Riccati decomposition and decentralized "
                                 "viability kernels of LTI systems.")
    parser.add_argument("--version", action="version", version=__version__)
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true",
                           help="log debug messages")
    verbosity.add_argument("-q", "--quiet", action="store_true",
                           help="log errors only")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(p, config=True):
        if config:
            p.add_argument("--config", required=True,
                           help="JSON configuration file")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=0,
                       help="seed of randomized checks (default: 0)")

    p = sub.add_parser("decompose", help="decompose a system")
    common(p)
    p.add_argument("--delta", type=_delta_arg, default=None,
                   help="fixed delta or 'auto'")
    p.add_argument("--standard", action="store_true",
                   help="use the standard Riccati transformation")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("kernel", help="kernel of a single subsystem")
    common(p)
    p.add_argument("--mode", choices=("viab", "inv"), default=None)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("pipeline", help="decentralized kernel computation")
    common(p)
    p.add_argument("--compare", action="store_true", default=None,
                   help="also run the centralized computation")
    p.add_argument("--delta", type=_delta_arg, default=None)
    p.add_argument("--standard", action="store_true")
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("plot", help="slice figures and delta sweeps")
    common(p, config=False)
    p.add_argument("--grid", nargs="*", default=[],
                   help="grid dumps or trace directories")
    p.add_argument("--sweep", default=None, help="delta sweep CSV")
    p.add_argument("--slice", default="0,1",
                   help="axes and fixed values, e.g. '0,1:2=0.0'")
    p.set_defaults(func=cmd_plot)
    return parser


def _ensure_dir(path):
    if not os.path.isdir(path):
        os.makedirs(path)


def _threads(sampling, threads):
    if threads is None:
        return sampling
    return replace(sampling, threads=threads)


#
# Commands
#

def cmd_decompose(args, manifest):
    obj = load_json(args.config)
    spec = system_spec_from_json(obj)
    if args.delta is not None:
        spec.delta = args.delta
    if args.standard:
        spec.transform = "standard"
    with manifest.stage("decomposition"):
        dec = decompose_from_spec(spec)
    write_decomposition(args.out, dec)
    search = getattr(dec, "search", None)
    if search is not None:
        write_delta_sweep(os.path.join(args.out, "delta_sweep.csv"), search)
    diag = getattr(dec, "diagnostics", {})
    print(json.dumps({"delta": getattr(dec, "delta", None),
                      "coupling_norm": diag.get("coupling_norm"),
                      "condition_T": diag.get("condition_T")},
                     sort_keys=True))
    return 0


def _analytic_check(kernel, analytic):
    """Hull of the kernel against an expected box, in cells."""
    lower = np.asarray(analytic["lower"], dtype=float)
    upper = np.asarray(analytic["upper"], dtype=float)
    tol = float(analytic.get("cells", 2))
    if kernel.is_empty():
        return {"expected": [lower, upper], "hull": None,
                "cells_off": None, "within_tolerance": False}
    hull = kernel.interval_hull()
    off = np.max(np.concatenate([np.abs(hull.lower - lower),
                                 np.abs(hull.upper - upper)]) /
                 np.tile(kernel.box.h, 2))
    return {"expected": [lower, upper], "hull": [hull.lower, hull.upper],
            "cells_off": float(off), "within_tolerance": bool(off <= tol)}


def cmd_kernel(args, manifest):
    cfg = kernel_config_from_json(load_json(args.config), args.mode,
                                  args.steps)
    sampling = _threads(cfg.sampling, args.threads)
    K = cfg.grid.sample()
    if K.is_empty():
        raise EmptySetError("The state constraint is empty; the problem "
                            "is ill-posed")
    with manifest.stage(cfg.mode):
        if cfg.mode == "viab":
            result = viability_kernel(cfg.spec, K, cfg.inputs, cfg.horizon,
                                      cfg.steps, sampling)
        else:
            result = invariance_kernel_etuc(cfg.spec, K, cfg.vbox,
                                            cfg.horizon, cfg.steps,
                                            sampling, cfg.norm)
    extra = {}
    if cfg.analytic:
        extra["analytic"] = _analytic_check(result.kernel, cfg.analytic)
    if cfg.certify:
        point = np.asarray(cfg.certify["point"], dtype=float)
        with manifest.stage("certify"):
            viable = certify_point(
                cfg.spec.A, cfg.spec.B, point, cfg.grid.constraint,
                cfg.inputs, cfg.horizon,
                samples=int(cfg.certify.get("samples", 200)),
                seed=args.seed)
        extra["certify"] = {"point": point, "viable": viable,
                            "in_kernel": result.kernel.contains_node(point)}
    write_kernel_run(args.out, result, cfg.mode, extra)
    return 0


def cmd_pipeline(args, manifest):
    cfg = pipeline_config_from_json(load_json(args.config), args.steps,
                                    args.compare, args.delta, args.standard)
    cfg.sampling = _threads(cfg.sampling, args.threads)
    with manifest.stage("decomposition"):
        dec = decompose_from_spec(cfg.system)
    write_decomposition(args.out, dec)
    with manifest.stage("decentralized"):
        if len(cfg.terms) > 1:
            union = run_union_of_products(cfg, dec)
            result = union.results[0]
            result.product = union.union
        else:
            result = run_decentralized(cfg, dec)
    backmap = map_back(result, dec.T) if result.materialized else None
    shrinkage = shrinkage_report(result)
    write_pipeline_run(args.out, result, None, backmap, shrinkage)
    if cfg.compare:
        with manifest.stage("centralized"):
            central = run_centralized(cfg, dec)
        write_grid(os.path.join(args.out, "centralized.grid"), central)
        comparison = compare(result, central)
        write_pipeline_run(args.out, result, comparison, backmap, shrinkage)
        logger.info("Contained: %s, coverage %.3f", comparison.contained,
                    comparison.coverage)
    return 0


def _load_grids(paths):
    for path in paths:
        if os.path.isdir(path):
            trace = read_trace(path)
            yield os.path.basename(os.path.normpath(path)), trace[0]
        else:
            yield os.path.splitext(os.path.basename(path))[0], read_grid(path)


def cmd_plot(args, manifest):
    if not args.grid and not args.sweep:
        raise ParameterError("plot needs --grid or --sweep")
    for name, gs in _load_grids(args.grid):
        axes, fixed = parse_slice(args.slice, gs.dim)
        plot_slice(gs, axes, fixed,
                   os.path.join(args.out, name + ".svg"),
                   os.path.join(args.out, name + "_outline.csv"),
                   title=name)
    if args.sweep:
        delta, feasible, f_val, bound, gamma = read_delta_sweep(args.sweep)
        keep = feasible & np.isfinite(f_val)
        star = float(delta[keep][np.argmin(f_val[keep])]) if keep.any() \
            else None
        plot_delta_sweep(delta, feasible, f_val, bound, gamma,
                         os.path.join(args.out, "delta_sweep.svg"), star)
    return 0


def _configure_logging(args):
    level = logging.INFO
    if getattr(args, "verbose", False):
        level = logging.DEBUG
    elif getattr(args, "quiet", False):
        level = logging.ERROR
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def _report_error(e):
    sys.stderr.write(json.dumps(e.to_dict(), sort_keys=True) + "\n")
    return e.exit_code


def main(argv=None):
    """
    Entry point of the ``decentviab`` command.

    :returns: process exit code
    :rtype: int
    """
    try:
        args = build_parser().parse_args(argv)
    except DecentViabError as e:
        return _report_error(e)
    _configure_logging(args)
    manifest = RunManifest(args.command, getattr(args, "config", None),
                           args.out, seed=args.seed)
    try:
        _ensure_dir(args.out)
        code = args.func(args, manifest)
        manifest.finish("ok")
    except DecentViabError as e:
        manifest.finish(e.kind)
        code = _report_error(e)
    except (IOError, OSError) as e:
        manifest.finish("io")
        code = _report_error(ParameterError(str(e)))
    try:
        manifest.write()
    except (IOError, OSError) as e:
        logger.error("Cannot write the manifest: %s", e)
    return code


if __name__ == "__main__":
    sys.exit(main())
