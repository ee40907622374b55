#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This file is part of decentviab package.

This module contains the decentralized computation: decompose the
system, compute the viability kernel of the controlled upper subsystem
and the invariance kernel of the lower one step by step, take their
product in transformed coordinates, and compare it with a centralized
run on the full grid.

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
import itertools
import logging
import time

import numpy as np

from .errors import (EmptySetError, FeasibilityError, ParameterError,
                     ResourceCapError)
from .grid.controlbox import ControlBox
from .grid.gridset import GridSet, check_same_grid, volume_fraction
from .kernel.inv import invariance_kernel_etuc
from .kernel.subsystem import SubsystemSpec
from .kernel.viab import viability_kernel
from .recursive import recursive_decompose
from .riccati import decompose, default_delta_grid
from .standard import standard_riccati

__all__ = ["PipelineResult", "UnionResult", "Comparison", "BackMap",
           "decompose_from_spec", "subsystem_specs", "run_decentralized",
           "run_centralized", "run_union_of_products", "compare",
           "shrinkage_report", "map_back"]

logger = logging.getLogger(__name__)

#: Outcome of :func:`compare`
Comparison = namedtuple("Comparison", ("contained", "coverage", "offending"))

#: Original coordinate images of a grid set: one point per occupied node
#: and the 2^dim corners of every fully occupied cell
BackMap = namedtuple("BackMap", ("points", "cells", "cell_volume"))


class PipelineResult(object):
    """
    Decentralized kernels of one product constraint.

    ``product`` is None when the product grid exceeds the node cap; the
    pair (``v_kernel``, ``c_kernel``) then stands for it.
    """

    def __init__(self, decomposition, v_trace, c_trace, bounds, product,
                 runtimes, mode):
        self.decomposition = decomposition
        self.v_trace = v_trace
        self.c_trace = c_trace
        self.bounds = bounds
        self.product = product
        self.runtimes = runtimes
        self.mode = mode
        self.comparison = None

    @property
    def v_kernel(self):
        return self.v_trace[0]

    @property
    def c_kernel(self):
        return self.c_trace[0]

    @property
    def materialized(self):
        return self.product is not None

    def monotone(self):
        """True when both traces shrink backwards node-wise."""
        for trace in (self.v_trace, self.c_trace):
            for inner, outer in zip(trace[:-1], trace[1:]):
                if not inner.issubset(outer):
                    return False
        return True

    def __repr__(self):
        return "PipelineResult(mode={0}, V0={1}, C0={2})".format(
            self.mode, self.v_kernel.count, self.c_kernel.count)


class UnionResult(object):
    """Per-term results of a union of product constraints."""

    def __init__(self, results, union):
        self.results = results
        self.union = union

    @property
    def decomposition(self):
        return self.results[0].decomposition


def decompose_from_spec(spec):
    """
    Decomposition requested by a :class:`decentviab.config.SystemSpec`:
    recursive when several splits are given, standard or modified
    otherwise.
    """
    settings = spec.settings()
    if len(spec.splits) > 1:
        return recursive_decompose(spec.system, spec.splits, spec.delta,
                                   spec.relaxation, spec.max_iter, settings)
    ps = spec.system.partition(spec.split)
    if spec.transform == "standard":
        return standard_riccati(ps, spec.max_iter, spec.tol, settings)
    grid = None
    if spec.delta_grid:
        grid = default_delta_grid(
            int(spec.delta_grid.get("points", 48)),
            float(spec.delta_grid.get("low", 1.0)),
            float(spec.delta_grid.get("high", 1e4)))
    return decompose(ps, spec.delta, spec.relaxation, spec.max_iter,
                     spec.tol, settings, grid=grid)


def _restrict(U, columns):
    return ControlBox(U.lower[columns], U.upper[columns])


def subsystem_specs(decomposition, U):
    """
    Subsystems of a two block decomposition in transformed coordinates.

    :returns: (upper spec, upper inputs, lower spec, lower inputs, mode)
        with mode "unidirectional" (modified transformation) or
        "disjoint" (standard transformation with disjoint input)
    :rtype: tuple
    :exception: FeasibilityError - standard transformation whose inputs
        are shared by both blocks
    """
    A_up, B_up = decomposition.upper_subsystem()
    A_lo, B_lo, delta = decomposition.lower_subsystem()
    if decomposition.kind == "modified":
        upper = SubsystemSpec(A_up, B_up)
        lower = SubsystemSpec(A_lo, None, delta)
        return upper, U, lower, ControlBox([], []), "unidirectional"
    if not decomposition.disjoint_input:
        errmsg = ("The standard transformation shares inputs {0} between "
                  "both blocks").format(decomposition.input_support)
        raise FeasibilityError(errmsg)
    up_cols = decomposition.input_support["upper"]
    lo_cols = decomposition.input_support["lower"]
    upper = SubsystemSpec(A_up, B_up[:, up_cols])
    lower = SubsystemSpec(A_lo, B_lo[:, lo_cols])
    return (upper, _restrict(U, up_cols), lower, _restrict(U, lo_cols),
            "disjoint")


def _sample(box, shape, which):
    gs = GridSet.from_predicate(box, shape)
    if gs.is_empty():
        errmsg = "The {0} constraint has no node on its grid".format(which)
        raise EmptySetError(errmsg)
    return gs


def _run_term(cfg, dec, term):
    runtimes = {}
    settings = cfg.system.settings()
    upper, U_up, lower, U_lo, mode = subsystem_specs(dec, cfg.inputs)
    K1 = _sample(cfg.upper_box, term.upper, "upper")
    K2 = _sample(cfg.lower_box, term.lower, "lower")
    N = cfg.steps

    start = time.perf_counter()
    v = viability_kernel(upper, K1, U_up, cfg.horizon, N, cfg.sampling)
    runtimes["upper"] = time.perf_counter() - start

    start = time.perf_counter()
    if mode == "unidirectional":
        fallback = K1.interval_hull()
        vboxes = []
        for i in range(N):
            nxt = v.trace[i + 1]
            vboxes.append(fallback if nxt.is_empty() else
                          nxt.interval_hull())
        c = invariance_kernel_etuc(lower, K2, vboxes, cfg.horizon, N,
                                   cfg.sampling, settings.norm)
    else:
        c = viability_kernel(lower, K2, U_lo, cfg.horizon, N, cfg.sampling)
    runtimes["lower"] = time.perf_counter() - start

    product = None
    size = cfg.upper_box.size * cfg.lower_box.size
    if size <= cfg.node_cap:
        product = v.kernel.cross_product(c.kernel, cfg.node_cap)
    else:
        logger.info("Product grid of %d nodes kept implicit (cap %d)",
                    size, cfg.node_cap)
    logger.info("Decentralized kernels: V0 %d nodes, C0 %d nodes",
                v.kernel.count, c.kernel.count)
    for name, kernel in (("upper", v.kernel), ("lower", c.kernel)):
        if kernel.is_empty():
            logger.warning("The %s kernel is empty", name)
    return PipelineResult(dec, v.trace, c.trace, c.bounds, product,
                          runtimes, mode)


def _check_two_block(dec):
    if not hasattr(dec, "upper_subsystem"):
        errmsg = "The pipeline runs on two block decompositions only"
        raise ParameterError(errmsg)


def run_decentralized(cfg, decomposition=None):
    """
    Runs the decentralized computation for the first product constraint
    of ``cfg``.

    :param PipelineConfig cfg: run configuration
    :param decomposition: precomputed decomposition (computed otherwise)
    :rtype: PipelineResult
    :exception: DecentViabError - decomposition failure, empty
        constraint
    """
    start = time.perf_counter()
    dec = decompose_from_spec(cfg.system) if decomposition is None \
        else decomposition
    elapsed = time.perf_counter() - start
    _check_two_block(dec)
    result = _run_term(cfg, dec, cfg.terms[0])
    result.runtimes["decomposition"] = elapsed
    return result


def run_union_of_products(cfg, decomposition=None):
    """
    Runs the decentralized computation for every product term of
    ``cfg`` and unions the products on the shared grid.

    :rtype: UnionResult
    :exception: ResourceCapError - a product cannot be materialized
    """
    dec = decompose_from_spec(cfg.system) if decomposition is None \
        else decomposition
    _check_two_block(dec)
    results = []
    union = None
    for index, term in enumerate(cfg.terms):
        logger.info("Product term %d of %d", index + 1, len(cfg.terms))
        result = _run_term(cfg, dec, term)
        if result.product is None:
            errmsg = "A union of products needs materialized products"
            raise ResourceCapError(errmsg)
        union = result.product if union is None else \
            union.union(result.product)
        results.append(result)
    return UnionResult(results, union)


def run_centralized(cfg, decomposition):
    """
    Viability kernel of the full transformed system on the product grid.

    :param PipelineConfig cfg: run configuration
    :param decomposition: decomposition giving the transformed system
    :rtype: GridSet
    :exception: ResourceCapError - product grid above the node cap
    """
    box = cfg.upper_box.product(cfg.lower_box)
    if box.size > cfg.node_cap:
        errmsg = ("Centralized grid of {0} nodes exceeds the cap {1}; the "
                  "full order computation is out of reach").format(
                      box.size, cfg.node_cap)
        raise ResourceCapError(errmsg, nodes=box.size, cap=cfg.node_cap)
    K = None
    for term in cfg.terms:
        K1 = GridSet.from_predicate(cfg.upper_box, term.upper)
        K2 = GridSet.from_predicate(cfg.lower_box, term.lower)
        prod = K1.cross_product(K2, cfg.node_cap)
        K = prod if K is None else K.union(prod)
    spec = SubsystemSpec(decomposition.transformed.A,
                         decomposition.transformed.B)
    start = time.perf_counter()
    result = viability_kernel(spec, K, cfg.inputs, cfg.horizon, cfg.steps,
                              cfg.sampling)
    logger.info("Centralized kernel: %d nodes in %.2f s",
                result.kernel.count, time.perf_counter() - start)
    return result.kernel


def _product_set(obj):
    if isinstance(obj, GridSet):
        return obj
    if isinstance(obj, UnionResult):
        return obj.union
    return obj.product


def compare(decentralized, centralized):
    """
    Containment (one cell of tolerance) and coverage of a decentralized
    product against a centralized kernel.

    :param decentralized: PipelineResult, UnionResult or GridSet
    :param GridSet centralized: kernel on the same product grid
    :rtype: Comparison
    :exception: GridMismatchError - different grids

    TEST: identical sets

    >>> from decentviab.grid import GridBox
    >>> s = GridSet.full(GridBox([0.0, 0.0], [1.0, 1.0], [3, 3]))
    >>> c = compare(s, s)
    >>> c.contained, c.coverage
    (True, 1.0)
    """
    product = _product_set(decentralized)
    if product is None:
        errmsg = "Comparison needs a materialized product"
        raise ResourceCapError(errmsg)
    check_same_grid(product, centralized)
    outside = product.difference(centralized.dilate(1))
    coverage = volume_fraction(product, centralized)
    return Comparison(outside.is_empty(), coverage,
                      outside.occupied_points())


def shrinkage_report(result):
    """
    Erosion radius applied at every step with the numbers it is made of.

    :param PipelineResult result: decentralized run
    :returns: one dictionary per step (step 0 first)
    :rtype: list
    """
    rows = []
    for i, b in enumerate(result.bounds or []):
        rows.append({"step": i, "radius": b.radius, "eta": b.eta,
                     "q": b.q, "coupling_norm": b.coupling_norm,
                     "vbox_radius": b.vbox_radius, "taylor": b.taylor})
    return rows


def _cell_corners(gs):
    occ = gs.occupancy
    dim = gs.dim
    offsets = np.array(list(itertools.product((0, 1), repeat=dim)))
    full = np.ones(tuple(n - 1 for n in gs.box.nodes), dtype=bool)
    for off in offsets:
        full &= occ[tuple(slice(o, n - 1 + o)
                          for o, n in zip(off, gs.box.nodes))]
    base = np.argwhere(full)
    return base[:, None, :] + offsets[None, :, :]


def map_back(result, T):
    """
    Maps an occupied product set to original coordinates x = T z.

    :param result: PipelineResult, UnionResult or GridSet in transformed
        coordinates
    :param T: transformation matrix
    :returns: node images (one row per occupied node), corner images of
        every fully occupied cell, shape (cells, 2^dim, n), and the
        volume of one image cell, |det T| times the cell volume
    :rtype: BackMap
    :exception: ResourceCapError - product not materialized

    TEST: identity

    >>> from decentviab.grid import GridBox
    >>> s = GridSet.full(GridBox([0.0], [1.0], [3]))
    >>> m = map_back(s, np.eye(1))
    >>> m.points.ravel().tolist(), m.cells.shape
    ([0.0, 0.5, 1.0], (2, 2, 1))
    """
    gs = _product_set(result)
    if gs is None:
        errmsg = "Back mapping needs a materialized product"
        raise ResourceCapError(errmsg)
    T = np.asarray(T, dtype=float)
    if T.shape != (gs.dim, gs.dim):
        errmsg = "T has shape {0}, grid has dim {1}".format(T.shape, gs.dim)
        raise ParameterError(errmsg)
    points = gs.occupied_points() @ T.T
    corners = _cell_corners(gs)
    if len(corners):
        coords = gs.box.lower + corners * gs.box.h
        cells = coords @ T.T
    else:
        cells = np.zeros((0, 2 ** gs.dim, gs.dim))
    volume = abs(float(np.linalg.det(T))) * float(np.prod(gs.box.h))
    return BackMap(points, cells, volume)
