import math

import numpy as np
import pytest

from decentviab.errors import EmptySetError, ParameterError
from decentviab.grid import ControlBox, GridBox, GridSet
from decentviab.grid.shapes import BallShape, BoxShape
from decentviab.kernel import (certify_point, eta, inv_step_etuc,
                               invariance_kernel_etuc, shrinkage_bound,
                               StepParams, SubsystemSpec, viab_step,
                               viability_kernel)

NO_INPUT = ControlBox([], [])


def sampled(box, shape):
    return GridSet.from_predicate(box, shape)


def extent(gs):
    pts = gs.occupied_points()
    return float(pts.min()), float(pts.max())


@pytest.fixture
def line():
    return GridBox([-1.0], [1.0], [101])


@pytest.fixture
def square():
    return GridBox([-1.0, -1.0], [1.0, 1.0], [41, 41])


#
# Test for viability_kernel(spec, K, U, tau, N, sp)
#

def test_unstable_scalar_matches_closed_form(line):
    K = GridSet.full(line)
    r = viability_kernel(SubsystemSpec([[1.0]]), K, NO_INPUT, 1.0, 2,
                         StepParams())
    lo, hi = extent(r.kernel)
    bound = math.exp(-1.0)
    assert abs(hi - bound) <= 2 * line.h[0]
    assert abs(lo + bound) <= 2 * line.h[0]
    assert r.kernel.issubset(K)


def test_stable_scalar_keeps_the_eroded_constraint(line):
    K = GridSet.full(line)
    r = viability_kernel(SubsystemSpec([[-1.0]]), K, NO_INPUT, 1.0, 10,
                         StepParams())
    assert K.erode(2 * line.h[0]).issubset(r.kernel)


def test_integrator_holds_with_zero_input(line):
    K = GridSet.full(line)
    spec = SubsystemSpec([[0.0]], [[1.0]])
    r = viability_kernel(spec, K, ControlBox([-1.0], [1.0]), 1.0, 5,
                         StepParams())
    assert r.kernel == K


def test_trace_is_monotone(line):
    K = GridSet.full(line)
    r = viability_kernel(SubsystemSpec([[1.0]]), K, NO_INPUT, 1.0, 4,
                         StepParams())
    assert len(r.trace) == 5
    assert r.trace[4] == K
    for i in range(4):
        assert r.trace[i].issubset(r.trace[i + 1])


def test_threads_do_not_change_the_kernel(square):
    K = sampled(square, BallShape([0.0, 0.0], 0.9, 2))
    spec = SubsystemSpec([[0.0, 1.0], [0.5, 0.0]], [[0.0], [1.0]])
    U = ControlBox([-1.0], [1.0])
    one = viability_kernel(spec, K, U, 1.0, 5, StepParams(threads=1))
    two = viability_kernel(spec, K, U, 1.0, 5, StepParams(threads=2))
    assert one.kernel == two.kernel


def test_empty_constraint_is_ill_posed(line):
    with pytest.raises(EmptySetError) as e:
        viability_kernel(SubsystemSpec([[1.0]]), GridSet.empty(line),
                         NO_INPUT, 1.0, 2, StepParams())
    assert e.value.exit_code == 2


def test_constraint_erosion_empties_a_thin_set(line):
    K = GridSet.from_predicate(line, lambda x: np.abs(x[:, 0]) <= 0.01)
    with pytest.raises(EmptySetError):
        viability_kernel(SubsystemSpec([[1.0]]), K, NO_INPUT, 1.0, 2,
                         StepParams(constraint_erosion=1))


@pytest.mark.parametrize("tau, steps", [(0.0, 2), (1.0, 0), (1.0, 1.5)])
def test_bad_horizon(line, tau, steps):
    with pytest.raises(ParameterError):
        viability_kernel(SubsystemSpec([[1.0]]), GridSet.full(line),
                         NO_INPUT, tau, steps, StepParams())


#
# Test for viab_step(spec, current, constraint, U, sp)
#

def test_step_needs_matching_inputs(line):
    K = GridSet.full(line)
    with pytest.raises(ParameterError):
        viab_step(SubsystemSpec([[1.0]], [[1.0]]), K, K, NO_INPUT,
                  StepParams(q=0.1))


def test_step_needs_q(line):
    K = GridSet.full(line)
    with pytest.raises(ParameterError):
        viab_step(SubsystemSpec([[1.0]]), K, K, NO_INPUT, StepParams())


def test_step_of_empty_set_is_empty(line):
    K = GridSet.full(line)
    out = viab_step(SubsystemSpec([[1.0]]), GridSet.empty(line), K,
                    NO_INPUT, StepParams(q=0.1))
    assert out.is_empty()


#
# Counter-example: a shared input couples two unstable scalars
#

def test_shared_input_corner_is_not_viable(square):
    K = GridSet.full(square)
    U = ControlBox([-1.0], [1.0])
    sp = StepParams()
    full = viability_kernel(SubsystemSpec(np.eye(2), [[1.0], [-1.0]]),
                            K, U, 1.0, 20, sp)
    corner = (40, 40)
    assert not full.kernel.occupancy[corner]

    first = viability_kernel(SubsystemSpec([[1.0]], [[1.0]]),
                             K.project([0]), U, 1.0, 20, sp)
    second = viability_kernel(SubsystemSpec([[1.0]], [[-1.0]]),
                              K.project([1]), U, 1.0, 20, sp)
    product = first.kernel.cross_product(second.kernel)
    assert product.occupancy[corner]
    assert full.kernel.issubset(product)


def test_corner_cannot_be_certified():
    K = BoxShape([-1.0, -1.0], [1.0, 1.0])
    assert not certify_point(np.eye(2), [[1.0], [-1.0]], [1.0, 1.0], K,
                             ControlBox([-1.0], [1.0]), 1.0, samples=500,
                             seed=0)


#
# Test for certify_point(A, B, x0, K, U, tau)
#

def test_origin_of_a_stable_system_is_certified():
    K = BoxShape([-1.0, -1.0], [1.0, 1.0])
    assert certify_point(-np.eye(2), [[1.0], [0.0]], [0.0, 0.0], K,
                         ControlBox([-1.0], [1.0]), 1.0, samples=10)


def test_point_outside_is_never_certified():
    K = BoxShape([-1.0], [1.0])
    assert not certify_point([[-1.0]], [[1.0]], [1.5], K,
                             ControlBox([-1.0], [1.0]), 1.0)


def test_certify_checks_dimensions():
    K = BoxShape([-1.0], [1.0])
    with pytest.raises(ParameterError):
        certify_point([[1.0]], [[1.0]], [0.0, 0.0], K,
                      ControlBox([-1.0], [1.0]), 1.0)


#
# Test for eta(norm_a, s) and shrinkage_bound(spec, vbox, q)
#

def test_eta_is_close_to_its_series():
    q = 0.01
    assert abs(eta(1.0, q) - (q + q * q / 2.0)) <= q ** 3


def test_eta_grows_with_the_norm():
    assert eta(0.0, 0.5) < eta(1.0, 0.5) < eta(2.0, 0.5)


def test_eta_rejects_negative_time():
    with pytest.raises(ParameterError):
        eta(1.0, -0.1)


def test_no_coupling_no_shrinkage():
    b = shrinkage_bound(SubsystemSpec([[0.0]]), None, 0.1)
    assert b.radius == 0.0
    b = shrinkage_bound(SubsystemSpec([[0.0]], None, [[0.0]]),
                        ControlBox([-5.0], [5.0]), 0.1)
    assert b.radius == 0.0


def test_shrinkage_scales_with_its_factors():
    spec = SubsystemSpec([[-2.0]], None, [[0.5, -0.5]])
    vbox = ControlBox([-0.2, -1.0], [0.4, 0.5])
    b = shrinkage_bound(spec, vbox, 0.05)
    assert b.coupling_norm == 0.5
    assert b.vbox_radius == 1.0
    assert b.radius == pytest.approx(0.5 * 1.0 * eta(2.0, 0.05))
    assert b.taylor == pytest.approx(0.05 + 0.5 * 0.05 ** 2 * 2.0)


def test_row_norm_bounds_the_infinity_norm_drift():
    spec = SubsystemSpec([[-1.0]], None, [[0.5, 0.5]])
    vbox = ControlBox([-1.0, -1.0], [1.0, 1.0])
    column = shrinkage_bound(spec, vbox, 0.1)
    row = shrinkage_bound(spec, vbox, 0.1, norm="row")
    assert column.coupling_norm == 0.5
    assert row.coupling_norm == 1.0
    drift = max(abs(0.5 * a + 0.5 * b) for a in (-1.0, 1.0)
                for b in (-1.0, 1.0))
    assert row.radius >= drift * row.eta
    assert column.radius < drift * column.eta


def test_shrinkage_checks_the_box_dimension():
    spec = SubsystemSpec([[0.0]], None, [[1.0]])
    with pytest.raises(ParameterError):
        shrinkage_bound(spec, ControlBox([0.0, 0.0], [1.0, 1.0]), 0.1)


#
# Test for invariance_kernel_etuc(spec, K, vboxes, tau, N, sp)
#

def test_matched_drift_closed_form(line):
    K = GridSet.full(line)
    spec = SubsystemSpec([[0.0]], None, [[1.0]])
    r = invariance_kernel_etuc(spec, K, ControlBox([-1.0], [1.0]), 0.5, 50,
                               StepParams())
    lo, hi = extent(r.kernel)
    assert abs(hi - 0.5) <= 2 * line.h[0]
    assert abs(lo + 0.5) <= 2 * line.h[0]
    assert len(r.bounds) == 50
    assert all(b.radius == pytest.approx(0.01) for b in r.bounds)


def test_matched_drift_never_shrinks_more_than_the_bound(line):
    K = GridSet.full(line)
    spec = SubsystemSpec([[0.0]], None, [[1.0]])
    N, q = 20, 0.02
    r = invariance_kernel_etuc(spec, K, ControlBox([-1.0], [1.0]), N * q, N,
                               StepParams())
    h = line.h[0]
    for i in range(N + 1):
        expected = 1.0 - (N - i) * q - h
        inner = GridSet.from_predicate(
            line, lambda x: np.abs(x[:, 0]) <= expected)
        assert inner.issubset(r.trace[i])
        if i < N:
            assert r.trace[i].issubset(r.trace[i + 1])


def test_uncoupled_invariance_equals_viability(square):
    K = sampled(square, BallShape([0.2, 0.0], 0.7, 2))
    spec = SubsystemSpec(np.zeros((2, 2)))
    inv = invariance_kernel_etuc(spec, K, None, 1.0, 5, StepParams())
    viab = viability_kernel(spec, K, NO_INPUT, 1.0, 5, StepParams())
    assert inv.kernel == viab.kernel == K


def test_invariance_rejects_controlled_subsystems(line):
    spec = SubsystemSpec([[0.0]], [[1.0]])
    with pytest.raises(ParameterError):
        invariance_kernel_etuc(spec, GridSet.full(line), None, 1.0, 2,
                               StepParams())


def test_coupled_invariance_needs_driving_boxes(line):
    spec = SubsystemSpec([[0.0]], None, [[1.0]])
    with pytest.raises(ParameterError):
        invariance_kernel_etuc(spec, GridSet.full(line), None, 1.0, 2,
                               StepParams())
    with pytest.raises(ParameterError):
        invariance_kernel_etuc(spec, GridSet.full(line),
                               [ControlBox([-1.0], [1.0])] * 3, 1.0, 2,
                               StepParams())


#
# Test for inv_step_etuc(spec, current, vbox, sp)
#

def test_single_invariance_step(line):
    spec = SubsystemSpec([[0.0]], None, [[1.0]])
    out = inv_step_etuc(spec, GridSet.full(line), ControlBox([-1.0], [1.0]),
                        StepParams(q=0.1))
    lo, hi = extent(out)
    assert hi == pytest.approx(0.9, abs=2 * line.h[0])
    assert lo == pytest.approx(-0.9, abs=2 * line.h[0])


def test_invariance_step_needs_q(line):
    spec = SubsystemSpec([[0.0]], None, [[1.0]])
    with pytest.raises(ParameterError):
        inv_step_etuc(spec, GridSet.full(line), ControlBox([-1.0], [1.0]),
                      StepParams())
