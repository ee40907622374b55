#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This file is part of decentviab package.

This module contains the modified Riccati similarity transformation.
Given a system partitioned at k, it builds a nonsymmetric algebraic
Riccati equation (NARE) in Z parameterized by a real delta, solves it
and a Sylvester-like NARE in M by fixed point contractions, and
assembles the transformation T = T1 T2 after which

    A'' = [[A11 - A12 L - M dF,  0          ],
           [dF,                  A22 + L A12 + dF M]],   B'' = [[B1], [0]]

so the lower subsystem receives no input (it is externally trivially
uncontrollable) and is driven by the upper one through the coupling
block dF = delta F(Z) only.

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
import logging

import numpy as np

from .errors import (DivergenceError, FeasibilityError, ParameterError,
                     ResidualError, SingularMatrixError, SolvabilityError)
from .linalg import (condition_number, inverse, matrix_to_json, induced_norm,
                     pseudoinverse, rank)
from .settings import DEFAULTS, check_relaxation
from .system import LtiSystem

__all__ = [
    "NareProblem",
    "DecompositionResult",
    "CouplingBoundTerms",
    "Feasibility",
    "ContractionResult",
    "DeltaSample",
    "DeltaSearch",
    "check_solvability",
    "build_nare",
    "feasibility_cond1",
    "solve_contraction1",
    "recover_L",
    "coupling",
    "feasibility_cond2",
    "solve_contraction2",
    "assemble",
    "decompose",
    "optimize_delta",
    "default_delta_grid",
    "coupling_bound_terms",
    "coupling_upper_bound",
    "fit_coupling_curve",
]

logger = logging.getLogger(__name__)

#: Verdict of a sufficient convergence condition.
#: ``ratio`` is the contraction factor whose powers bound the relative
#: error of the iterates; ``bound`` the radius containing the increment.
Feasibility = namedtuple(
    "Feasibility", ("satisfied", "lhs", "rhs", "relaxation", "ratio", "bound"))

#: Outcome of a fixed point contraction
ContractionResult = namedtuple(
    "ContractionResult",
    ("solution", "increment", "iterations", "residual", "trace", "iterates",
     "feasibility"))


###########################
#  PROJECTORS AND BLOCKS  #
###########################

def _projectors(ps):
    """
    Returns (P, S) with P = B1 B1^+ (k x k) and S = B2 B1^+ (m x k).
    """
    b1_pinv = pseudoinverse(ps.B1)
    return ps.B1 @ b1_pinv, ps.B2 @ b1_pinv


def check_solvability(ps):
    """
    Tells whether L B1 + B2 = 0 has a solution, that is whether the row
    space of B2 lies inside the row space of B1.

    :param PartitionedSystem ps: partitioned system
    :returns: True iff rank(B1^T) equals rank([B1^T B2^T])
    :rtype: bool

    TEST: B2 is a multiple of B1

    >>> from decentviab.system import LtiSystem
    >>> s = LtiSystem(np.eye(2), [[1.0], [2.0]])
    >>> check_solvability(s.partition(1))
    True

    TEST: B1 null, B2 not

    >>> s = LtiSystem(np.eye(2), [[0.0], [2.0]])
    >>> check_solvability(s.partition(1))
    False
    """
    if ps.p == 0:
        return True
    stacked = np.hstack([ps.B1.T, ps.B2.T])
    return rank(ps.B1.T) == rank(stacked)


class NareProblem(object):
    """
    Coefficients of the NARE

        Z At11 - At22 Z - Z At12 Z + At21 = 0

    together with the intermediate matrices Xi and Gamma and the
    initialization Z0 = At22^-1 At21, A0 = At11 - At12 Z0.
    """

    def __init__(self, ps, delta, Xi, Gamma, At11, At12, At21, At22, Z0, A0):
        self.ps = ps
        self.delta = delta
        self.Xi = Xi
        self.Gamma = Gamma
        self.At11 = At11
        self.At12 = At12
        self.At21 = At21
        self.At22 = At22
        self.Z0 = Z0
        self.A0 = A0

    def residual(self, Z):
        """R1(Z) = Z At11 - At22 Z - Z At12 Z + At21."""
        return (Z @ self.At11 - self.At22 @ Z - Z @ self.At12 @ Z
                + self.At21)

    def __repr__(self):
        return "NareProblem(delta={0!r}, shape={1})".format(
            self.delta, self.Z0.shape)


def _inverse_shift(P, delta):
    """
    Closed form inverse of (P - (delta + 1) I) for a projector P:
    -(1 / (delta + 1)) (I + P / delta).
    """
    eye = np.eye(P.shape[0])
    return -(1.0 / (delta + 1.0)) * (eye + P / delta)


def _check_delta(delta):
    delta = float(delta)
    if not np.isfinite(delta) or delta in (-1.0, 0.0):
        errmsg = "delta must be finite and differ from -1 and 0, got {0}"
        raise ParameterError(errmsg.format(delta))
    return delta


def build_nare(ps, delta):
    """
    Builds the NARE of the modified transformation for a given delta.

    :param PartitionedSystem ps: partitioned system
    :param float delta: free parameter, not -1 nor 0
    :returns: NARE coefficients
    :rtype: NareProblem
    :exception: SolvabilityError - L B1 + B2 = 0 has no solution
    :exception: ParameterError - delta is -1 or 0
    :exception: SingularMatrixError - B2 B1^+ A12 - A22 is singular
    """
    delta = _check_delta(delta)
    if not check_solvability(ps):
        errmsg = "Row space of B2 is not contained in the row space of B1"
        raise SolvabilityError(errmsg)

    P, S = _projectors(ps)
    eye = np.eye(ps.k)
    Xi = -(P - eye) @ (ps.A11 + ps.A12 @ S)
    Gamma = (ps.A22 @ S + ps.A21) - S @ (ps.A12 @ S + ps.A11)
    W = _inverse_shift(P, delta)

    At11 = Xi @ W
    At21 = Gamma @ W
    At12 = P @ ps.A12 - ps.A12
    At22 = S @ ps.A12 - ps.A22
    try:
        At22_inv = inverse(At22, what="B2 B1^+ A12 - A22")
    except SingularMatrixError as e:
        errmsg = "Z0 undefined: {0}".format(e)
        raise SingularMatrixError(errmsg, **e.details)
    Z0 = At22_inv @ At21
    A0 = At11 - At12 @ Z0
    return NareProblem(ps, delta, Xi, Gamma, At11, At12, At21, At22, Z0, A0)


######################
#  FIRST CONTRACTION #
######################

def feasibility_cond1(nare, relaxation=1.0, norm=None):
    """
    Sufficient condition for the contraction in D = Z - Z0:

        ||At22^-1|| <= relaxation / (3 (||A0|| + ||At12|| ||Z0||))

    :param NareProblem nare: NARE coefficients
    :param float relaxation: factor applied to the right-hand side (<= 10)
    :param string norm: "column" or "row"
    :returns: verdict with both sides, contraction factor and the radius
        of the ball holding D
    :rtype: Feasibility
    """
    relaxation = check_relaxation(relaxation)
    inv22 = inverse(nare.At22, what="B2 B1^+ A12 - A22")
    n_inv = induced_norm(inv22, norm)
    n_a0 = induced_norm(nare.A0, norm)
    n_z0 = induced_norm(nare.Z0, norm)
    denom = n_a0 + induced_norm(nare.At12, norm) * n_z0
    if denom == 0.0:
        return Feasibility(True, n_inv, float("inf"), relaxation, 0.0, 0.0)
    rhs = relaxation / (3.0 * denom)
    bound = 2.0 * n_a0 * n_z0 / denom
    return Feasibility(n_inv <= rhs, n_inv, rhs, relaxation,
                       3.0 * n_inv * denom, bound)


def _iterate(step, start, guard, max_iter, tol, norm, what):
    """
    Runs x_{k+1} = step(x_k) until two iterates are closer than tol.

    Returns (x, iterations, trace of norms, list of iterates).
    """
    x = start
    iterates = [x.copy()]
    trace = [induced_norm(x, norm)]
    for it in range(1, max_iter + 1):
        x_next = step(x)
        delta = induced_norm(x_next - x, norm)
        x = x_next
        size = induced_norm(x, norm)
        iterates.append(x.copy())
        trace.append(size)
        logger.debug("%s iteration %d: |x|=%.3e step=%.3e",
                     what, it, size, delta)
        if not np.isfinite(size) or size > guard:
            errmsg = "{0} diverged at iteration {1} (|x|={2:.3g} > {3:.3g})"
            raise DivergenceError(errmsg.format(what, it, size, guard),
                                  trace=trace)
        if delta <= tol:
            return x, it, trace, iterates
    errmsg = "{0} did not converge in {1} iterations".format(what, max_iter)
    raise DivergenceError(errmsg, trace=trace)


def solve_contraction1(nare, max_iter=None, tol=None, relaxation=1.0,
                       settings=DEFAULTS, enforce=True):
    """
    Solves the NARE by iterating

        D_{k+1} = At22^-1 (Z0 A0 + D_k A0 - Z0 At12 D_k - D_k At12 D_k)

    from D_0 = 0; the solution is Z = Z0 + D.

    :param NareProblem nare: NARE coefficients
    :param int max_iter: iteration cap (default 100)
    :param float tol: stop when two iterates differ less (default 1e-12)
    :param float relaxation: relaxation of the feasibility condition
    :param bool enforce: raise when the feasibility condition fails
    :returns: solution Z, increment D, iteration count, residual norm of
        the NARE, iterate norms and iterates
    :rtype: ContractionResult
    :exception: FeasibilityError - condition violated and ``enforce``
    :exception: DivergenceError - guard exceeded or no convergence
    :exception: ResidualError - residual above the acceptance threshold
    """
    max_iter = settings.max_iter if max_iter is None else int(max_iter)
    tol = settings.iter_tol if tol is None else float(tol)
    norm = settings.norm
    feas = feasibility_cond1(nare, relaxation, norm)
    if not feas.satisfied:
        if enforce:
            errmsg = ("First contraction condition violated for delta={0}: "
                      "{1:.4g} > {2:.4g}").format(nare.delta, feas.lhs,
                                                  feas.rhs)
            raise FeasibilityError(errmsg, lhs=feas.lhs, rhs=feas.rhs,
                                   delta=nare.delta)
        logger.warning("Iterating with violated first condition (delta=%g)",
                       nare.delta)
    elif relaxation > 1.0:
        logger.info("First condition holds with relaxation %g", relaxation)

    inv22 = inverse(nare.At22, what="B2 B1^+ A12 - A22")
    Z0, A0, At12 = nare.Z0, nare.A0, nare.At12
    Z0A0 = Z0 @ A0

    def step(D):
        return inv22 @ (Z0A0 + D @ A0 - Z0 @ At12 @ D - D @ At12 @ D)

    guard = settings.divergence_factor * max(feas.bound, 1.0)
    D, iterations, trace, iterates = _iterate(
        step, np.zeros_like(Z0), guard, max_iter, tol, norm, "Z contraction")
    Z = Z0 + D
    residual = induced_norm(nare.residual(Z), norm)
    if residual > settings.residual_tol:
        errmsg = "NARE residual {0:.3g} above {1:.1g}".format(
            residual, settings.residual_tol)
        raise ResidualError(errmsg, residual=residual)
    if feas.satisfied and relaxation <= 1.0:
        if induced_norm(D, norm) > feas.bound * (1.0 + 1e-9) + 1e-12:
            logger.warning("Increment norm %.3g outside its bound %.3g",
                           induced_norm(D, norm), feas.bound)
    logger.debug("Z contraction converged in %d iterations, residual %.2e",
                 iterations, residual)
    return ContractionResult(Z, D, iterations, residual, trace, iterates,
                             feas)


def recover_L(Z, ps, settings=DEFAULTS):
    """
    L = -B2 B1^+ + Z - Z B1 B1^+, the member of the solution class of
    L B1 + B2 = 0 selected by Z.

    :param Z: NARE solution, (n-k) x k
    :param PartitionedSystem ps: partitioned system
    :returns: L
    :rtype: numpy.ndarray
    :exception: ResidualError - L B1 + B2 is not zero

    TEST: Z = 0 gives -B2 B1^+

    >>> from decentviab.system import LtiSystem
    >>> ps = LtiSystem(np.eye(2), [[2.0], [1.0]]).partition(1)
    >>> recover_L(np.zeros((1, 1)), ps).tolist()
    [[-0.5]]
    """
    P, S = _projectors(ps)
    L = -S + Z - Z @ P
    residual = induced_norm(L @ ps.B1 + ps.B2, settings.norm)
    if residual > settings.residual_tol:
        errmsg = "L B1 + B2 has norm {0:.3g}; solvability is broken".format(
            residual)
        raise ResidualError(errmsg, residual=residual)
    return L


def coupling(Z, delta, ps):
    """
    Coupling block delta F(Z) with
    F(Z) = Z (A12 - B1 B1^+ A12) Z + (A22 - B2 B1^+ A12) Z.
    """
    P, S = _projectors(ps)
    F = Z @ (ps.A12 - P @ ps.A12) @ Z + (ps.A22 - S @ ps.A12) @ Z
    return delta * F


#######################
#  SECOND CONTRACTION #
#######################

def _second_blocks(ps, L, G):
    X = ps.A11 - ps.A12 @ L
    X_inv = inverse(X, what="A11 - A12 L")
    M0 = -X_inv @ ps.A12
    N = ps.A22 + L @ ps.A12
    N0 = N + G @ M0
    return X, X_inv, M0, N, N0


def feasibility_cond2(ps, L, G, relaxation=1.0, norm=None):
    """
    Sufficient condition for the contraction in J = M - M0:

        ||(A11 - A12 L)^-1|| <= relaxation / (3 (||N0|| + ||dF|| ||M0||))

    :param G: coupling block delta F(Z)
    :rtype: Feasibility
    :exception: SingularMatrixError - A11 - A12 L is singular
    """
    relaxation = check_relaxation(relaxation)
    _, X_inv, M0, _, N0 = _second_blocks(ps, L, G)
    n_inv = induced_norm(X_inv, norm)
    n_n0 = induced_norm(N0, norm)
    n_m0 = induced_norm(M0, norm)
    denom = n_n0 + induced_norm(G, norm) * n_m0
    if denom == 0.0:
        return Feasibility(True, n_inv, float("inf"), relaxation, 0.0, 0.0)
    rhs = relaxation / (3.0 * denom)
    bound = 2.0 * n_n0 * n_m0 / denom
    return Feasibility(n_inv <= rhs, n_inv, rhs, relaxation,
                       3.0 * n_inv * denom, bound)


def solve_contraction2(ps, L, Z, delta, max_iter=None, tol=None,
                       relaxation=1.0, settings=DEFAULTS, enforce=True):
    """
    Solves R2(M) = X M - M N - M dF M + A12 = 0, X = A11 - A12 L,
    N = A22 + L A12, by iterating

        J_{k+1} = X^-1 (M0 N0 + J_k N0 + M0 dF J_k + J_k dF J_k)

    from J_0 = 0 with M0 = -X^-1 A12, N0 = N + dF M0; M = M0 + J.

    :returns: solution M, increment J, iterations, residual norm of R2
    :rtype: ContractionResult
    :exception: SingularMatrixError - A11 - A12 L is singular
    :exception: FeasibilityError - condition violated and ``enforce``
    :exception: DivergenceError - guard exceeded or no convergence
    :exception: ResidualError - residual above the acceptance threshold
    """
    max_iter = settings.max_iter if max_iter is None else int(max_iter)
    tol = settings.iter_tol if tol is None else float(tol)
    norm = settings.norm
    G = coupling(Z, delta, ps)
    X, X_inv, M0, N, N0 = _second_blocks(ps, L, G)
    feas = feasibility_cond2(ps, L, G, relaxation, norm)
    if not feas.satisfied:
        if enforce:
            errmsg = ("Second contraction condition violated for delta={0}: "
                      "{1:.4g} > {2:.4g}").format(delta, feas.lhs, feas.rhs)
            raise FeasibilityError(errmsg, lhs=feas.lhs, rhs=feas.rhs,
                                   delta=delta)
        logger.warning("Iterating with violated second condition (delta=%g)",
                       delta)

    M0N0 = M0 @ N0
    M0G = M0 @ G

    def step(J):
        return X_inv @ (M0N0 + J @ N0 + M0G @ J + J @ G @ J)

    guard = settings.divergence_factor * max(feas.bound, 1.0)
    J, iterations, trace, iterates = _iterate(
        step, np.zeros_like(M0), guard, max_iter, tol, norm, "M contraction")
    M = M0 + J
    residual = induced_norm(X @ M - M @ N - M @ G @ M + ps.A12, norm)
    if residual > settings.residual_tol:
        errmsg = "Second NARE residual {0:.3g} above {1:.1g}".format(
            residual, settings.residual_tol)
        raise ResidualError(errmsg, residual=residual)
    logger.debug("M contraction converged in %d iterations, residual %.2e",
                 iterations, residual)
    return ContractionResult(M, J, iterations, residual, trace, iterates,
                             feas)


##############
#  ASSEMBLY  #
##############

class DecompositionResult(object):
    """
    A similarity transformation x = T z with T = T1 T2,

        T1 = [[I, 0], [-L, I]],   T2 = [[I, M], [0, I]],

    and the transformed system (A'', B'') = (T^-1 A T, T^-1 B).

    ``kind`` is "modified" (lower block uncontrolled, coupled by
    ``coupling``) or "standard" (block diagonal state matrix).
    """

    def __init__(self, ps, kind, L, M, T1, T2, T, transformed, coupling,
                 delta=None, Z=None, D=None, J=None, diagnostics=None,
                 disjoint_input=None, input_support=None, search=None):
        self.ps = ps
        self.kind = kind
        self.L = L
        self.M = M
        self.Z = Z
        self.D = D
        self.J = J
        self.T1 = T1
        self.T2 = T2
        self.T = T
        self.transformed = transformed
        self.coupling = coupling
        self.delta = delta
        self.diagnostics = diagnostics or {}
        self.disjoint_input = disjoint_input
        self.input_support = input_support
        self.search = search

    @property
    def k(self):
        return self.ps.k

    def upper_subsystem(self):
        """
        :returns: (A, B) of the upper block in transformed coordinates
        :rtype: tuple
        """
        k = self.k
        Ad, Bd = self.transformed.A, self.transformed.B
        return Ad[:k, :k].copy(), Bd[:k, :].copy()

    def lower_subsystem(self):
        """
        :returns: (A, B, Delta): lower state matrix, lower input block and
            the block through which the upper state drives the lower one
        :rtype: tuple
        """
        k = self.k
        Ad, Bd = self.transformed.A, self.transformed.B
        return Ad[k:, k:].copy(), Bd[k:, :].copy(), Ad[k:, :k].copy()

    def to_json(self):
        def mat(m):
            return None if m is None else matrix_to_json(m)
        out = {
            "kind": self.kind,
            "k": self.k,
            "delta": self.delta,
            "T1": mat(self.T1),
            "T2": mat(self.T2),
            "T": mat(self.T),
            "L": mat(self.L),
            "M": mat(self.M),
            "Z": mat(self.Z),
            "coupling": mat(self.coupling),
            "A_transformed": mat(self.transformed.A),
            "B_transformed": self.transformed.to_json()["B"],
            "disjoint_input": self.disjoint_input,
            "input_support": self.input_support,
            "diagnostics": _json_diagnostics(self.diagnostics),
        }
        if self.search is not None:
            out["delta_search"] = fit_coupling_curve(self.search)
        return out

    def __repr__(self):
        return "DecompositionResult(kind={0}, k={1}, delta={2})".format(
            self.kind, self.k, self.delta)


def _json_diagnostics(diag):
    out = {}
    for key, value in diag.items():
        if isinstance(value, np.ndarray):
            if np.iscomplexobj(value):
                out[key] = [[float(v.real), float(v.imag)] for v in value]
            else:
                out[key] = value.tolist()
        elif isinstance(value, Feasibility):
            out[key] = dict((k, float(v) if not isinstance(v, bool) else v)
                            for k, v in value._asdict().items())
        elif isinstance(value, (np.floating, np.integer)):
            out[key] = value.item()
        else:
            out[key] = value
    return out


def transformation_blocks(ps, L, M):
    """
    :returns: (T1, T2, T) for the given L and M
    :rtype: tuple
    """
    k, m = ps.k, ps.m
    T1 = np.eye(ps.n)
    T1[k:, :k] = -L
    T2 = np.eye(ps.n)
    T2[:k, k:] = M
    return T1, T2, T1 @ T2


def _transform(ps, L, M, settings):
    T1, T2, T = transformation_blocks(ps, L, M)
    cond = condition_number(T)
    if cond > settings.cond_warning:
        logger.warning("Transformation is poorly conditioned (cond=%.3g)",
                       cond)
    A2 = np.linalg.solve(T, ps.sys.A @ T)
    B2 = np.linalg.solve(T, ps.sys.B) if ps.p else np.zeros((ps.n, 0))
    return T1, T2, T, LtiSystem(A2, B2), cond


def assemble(ps, L, M, delta, Z, settings=DEFAULTS, diagnostics=None,
             D=None, J=None):
    """
    Builds T1, T2, T and the transformed system and verifies its
    structural zeros: the upper right block of A'' and the lower block of
    B'' must vanish.

    :returns: the decomposition
    :rtype: DecompositionResult
    :exception: ResidualError - a structural zero block is not zero

    TEST: L = 0 and M = 0 give the identity transformation

    >>> from decentviab.system import LtiSystem
    >>> ps = LtiSystem([[1.0, 0.0], [2.0, 3.0]], [[1.0], [0.0]]).partition(1)
    >>> r = assemble(ps, np.zeros((1, 1)), np.zeros((1, 1)), 2.0,
    ...              np.zeros((1, 1)))
    >>> bool(np.allclose(r.T, np.eye(2)))
    True
    """
    T1, T2, T, transformed, cond = _transform(ps, L, M, settings)
    k = ps.k
    zero_a = float(np.max(np.abs(transformed.A[:k, k:])))
    zero_b = (float(np.max(np.abs(transformed.B[k:, :])))
              if ps.p else 0.0)
    if zero_a > settings.zero_tol or zero_b > settings.zero_tol:
        errmsg = ("Structural zeros violated: |A''12|={0:.3g}, "
                  "|B''2|={1:.3g}").format(zero_a, zero_b)
        raise ResidualError(errmsg, zero_block_a=zero_a, zero_block_b=zero_b)

    G = transformed.A[k:, :k].copy()
    diag = dict(diagnostics or {})
    diag.update({
        "zero_block_a": zero_a,
        "zero_block_b": zero_b,
        "etuc_residual": induced_norm(L @ ps.B1 + ps.B2, settings.norm),
        "condition_T": cond,
        "coupling_norm": induced_norm(G, settings.norm),
        "eig_upper": np.linalg.eigvals(transformed.A[:k, :k]),
        "eig_lower": np.linalg.eigvals(transformed.A[k:, k:]),
    })
    return DecompositionResult(ps, "modified", L, M, T1, T2, T, transformed,
                               G, delta=delta, Z=Z, D=D, J=J,
                               diagnostics=diag)


def decompose(ps, delta="auto", relaxation=1.0, max_iter=None, tol=None,
              settings=DEFAULTS, grid=None):
    """
    Runs the whole modified transformation: NARE in Z, recovery of L,
    NARE in M and assembly.

    :param PartitionedSystem ps: partitioned system
    :param delta: a real value, or "auto" to search it
    :param float relaxation: relaxation of both feasibility conditions
    :returns: the decomposition
    :rtype: DecompositionResult
    """
    search = None
    if isinstance(delta, str):
        if delta != "auto":
            errmsg = "delta must be a number or 'auto', got '{0}'".format(
                delta)
            raise ParameterError(errmsg)
        search = optimize_delta(ps, grid=grid, relaxation=relaxation,
                                settings=settings)
        delta = search.delta_star
        logger.info("Selected delta=%g with coupling norm %.4g",
                    delta, search.f_star)

    nare = build_nare(ps, delta)
    first = solve_contraction1(nare, max_iter, tol, relaxation, settings)
    L = recover_L(first.solution, ps, settings)
    second = solve_contraction2(ps, L, first.solution, nare.delta, max_iter,
                                tol, relaxation, settings)
    diagnostics = {
        "iterations_z": first.iterations,
        "iterations_m": second.iterations,
        "residual_r1": first.residual,
        "residual_r2": second.residual,
        "cond1": first.feasibility,
        "cond2": second.feasibility,
        "relaxation": float(relaxation),
        "gamma_norm": induced_norm(nare.Gamma, settings.norm),
    }
    result = assemble(ps, L, second.solution, nare.delta, first.solution,
                      settings, diagnostics, D=first.increment,
                      J=second.increment)
    result.search = search
    return result


####################
#  DELTA SEARCH    #
####################

#: One evaluation of the coupling norm
DeltaSample = namedtuple("DeltaSample",
                         ("delta", "feasible", "f", "upper_bound"))

#: Outcome of the delta search
DeltaSearch = namedtuple("DeltaSearch",
                         ("delta_star", "f_star", "trace", "gamma_norm"))


def default_delta_grid(points=48, low=1.0, high=1e4):
    """
    Symmetric log-spaced grid of candidate deltas, -1 and 0 excluded.

    TEST:

    >>> g = default_delta_grid()
    >>> len(g), -1.0 in g, float(g.max())
    (95, False, 10000.0)
    """
    pos = np.logspace(np.log10(low), np.log10(high), points)
    neg = -pos[pos != 1.0]
    return np.concatenate([neg[::-1], pos])


def _evaluate_delta(ps, delta, relaxation, settings):
    """
    Returns (feasible, f) for one delta; infeasible values give f = inf.
    """
    try:
        nare = build_nare(ps, delta)
        feas1 = feasibility_cond1(nare, relaxation, settings.norm)
        if not feas1.satisfied:
            return False, float("inf")
        first = solve_contraction1(nare, relaxation=relaxation,
                                   settings=settings)
        L = recover_L(first.solution, ps, settings)
        G = coupling(first.solution, delta, ps)
        feas2 = feasibility_cond2(ps, L, G, relaxation, settings.norm)
        if not feas2.satisfied:
            return False, float("inf")
        return True, induced_norm(G, settings.norm)
    except (SingularMatrixError, DivergenceError, ResidualError) as e:
        logger.debug("delta=%g rejected: %s", delta, e)
        return False, float("inf")


def _better(a, b):
    """Strict order on (f, |delta|) pairs; ties go to smaller |delta|."""
    fa, da = a
    fb, db = b
    if fa != fb:
        return fa < fb
    return abs(da) < abs(db)


def optimize_delta(ps, grid=None, relaxation=1.0, refine_steps=20,
                   settings=DEFAULTS):
    """
    Minimizes f(delta) = ||delta F(Z(delta))|| over the deltas for which
    both contraction conditions hold: a sweep over ``grid`` followed by
    a ternary refinement (on log |delta|) between the neighbours of the
    best grid point.

    :param PartitionedSystem ps: partitioned system
    :param grid: candidate deltas (default :func:`default_delta_grid`)
    :param float relaxation: relaxation of both conditions
    :param int refine_steps: number of refinement steps
    :returns: minimizer, minimum, grid trace and ||Gamma||
    :rtype: DeltaSearch
    :exception: SolvabilityError - L B1 + B2 = 0 has no solution
    :exception: FeasibilityError - no feasible delta on the grid
    """
    if not check_solvability(ps):
        errmsg = "Row space of B2 is not contained in the row space of B1"
        raise SolvabilityError(errmsg)
    relaxation = check_relaxation(relaxation)
    grid = default_delta_grid() if grid is None else np.asarray(grid, float)
    grid = np.array(sorted(d for d in grid if d not in (-1.0, 0.0)))

    trace = []
    best = None
    for delta in grid:
        feasible, f = _evaluate_delta(ps, delta, relaxation, settings)
        try:
            ub = coupling_upper_bound(ps, delta, settings.norm)
        except SingularMatrixError:
            ub = float("nan")
        trace.append(DeltaSample(float(delta), feasible,
                                 f if feasible else float("nan"), ub))
        if feasible and (best is None or _better((f, delta), best)):
            best = (f, float(delta))

    if best is None:
        errmsg = ("No feasible delta on the search grid at relaxation {0}; "
                  "try a larger relaxation factor (up to 10)").format(
                      relaxation)
        raise FeasibilityError(errmsg, relaxation=relaxation)

    f_best, d_best = best
    same_sign = grid[np.sign(grid) == np.sign(d_best)]
    idx = int(np.argmin(np.abs(same_sign - d_best)))
    lo = abs(same_sign[max(idx - 1, 0)])
    hi = abs(same_sign[min(idx + 1, len(same_sign) - 1)])
    lo, hi = min(lo, hi), max(lo, hi)
    sign = np.sign(d_best)
    a, b = np.log(lo), np.log(hi)
    for _ in range(refine_steps):
        if b - a < 1e-12:
            break
        m1 = a + (b - a) / 3.0
        m2 = b - (b - a) / 3.0
        d1, d2 = sign * np.exp(m1), sign * np.exp(m2)
        if d1 == -1.0 or d2 == -1.0:
            break
        _, f1 = _evaluate_delta(ps, d1, relaxation, settings)
        _, f2 = _evaluate_delta(ps, d2, relaxation, settings)
        for f, d in ((f1, d1), (f2, d2)):
            if np.isfinite(f) and _better((f, d), (f_best, d_best)):
                f_best, d_best = f, float(d)
        if f1 <= f2:
            b = m2
        else:
            a = m1

    P, S = _projectors(ps)
    Gamma = (ps.A22 @ S + ps.A21) - S @ (ps.A12 @ S + ps.A11)
    logger.info("delta search: %d feasible of %d, best delta=%g f=%.4g",
                sum(1 for s in trace if s.feasible), len(trace),
                d_best, f_best)
    return DeltaSearch(d_best, f_best, trace,
                       induced_norm(Gamma, settings.norm))


def fit_coupling_curve(search):
    """
    Summarizes a delta search by the curve |c0 / delta + c1| + c2 with
    c2 the minimum, c1 = ||Gamma|| - c2 and c0 = -c1 delta*.

    :param DeltaSearch search: result of :func:`optimize_delta`
    :returns: dictionary with c0, c1, c2 and delta_star
    :rtype: dict
    """
    c2 = float(search.f_star)
    c1 = float(search.gamma_norm) - c2
    return {"c0": -c1 * search.delta_star, "c1": c1, "c2": c2,
            "delta_star": float(search.delta_star)}


####################
#  COUPLING BOUND  #
####################

#: Terms of the conservative bound on the coupling norm
CouplingBoundTerms = namedtuple("CouplingBoundTerms",
                                ("a", "b", "alpha", "beta", "gamma"))


def coupling_bound_terms(ps, norm=None):
    """
    alpha = ||A12 - B1 B1^+ A12||, beta = ||A22 - B2 B1^+ A12||,
    gamma = ||Gamma|| ||(A22 - B2 B1^+ A12)^-1||, b = 3 ||B1 B1^+|| gamma
    beta and a = alpha (b / beta)^2.

    :rtype: CouplingBoundTerms
    :exception: SingularMatrixError - A22 - B2 B1^+ A12 is singular
    """
    P, S = _projectors(ps)
    lower = ps.A22 - S @ ps.A12
    lower_inv = inverse(lower, what="A22 - B2 B1^+ A12")
    Gamma = (ps.A22 @ S + ps.A21) - S @ (ps.A12 @ S + ps.A11)
    alpha = induced_norm(ps.A12 - P @ ps.A12, norm)
    beta = induced_norm(lower, norm)
    gamma = induced_norm(Gamma, norm) * induced_norm(lower_inv, norm)
    b = 3.0 * induced_norm(P, norm) * gamma * beta
    a = alpha * (b / beta) ** 2 if beta > 0 else 0.0
    return CouplingBoundTerms(a, b, alpha, beta, gamma)


def coupling_upper_bound(ps, delta, norm=None):
    """
    Conservative upper bound on ||delta F(Z)||:

        (1/|d|) ((|d| + 1) / |d + 1|)^2 a + ((|d| + 1) / |d + 1|) b

    :param PartitionedSystem ps: partitioned system
    :param float delta: free parameter, not -1 nor 0
    :rtype: float
    """
    delta = _check_delta(delta)
    t = coupling_bound_terms(ps, norm)
    ratio = (abs(delta) + 1.0) / abs(delta + 1.0)
    return ratio ** 2 * t.a / abs(delta) + ratio * t.b


if __name__ == "__main__":
    import doctest
    doctest.testmod()
    doctest.testfile("../tests/testfile_riccati.txt")
