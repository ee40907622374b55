import numpy as np
import pytest

from decentviab.errors import (FeasibilityError, ParameterError,
                               SingularMatrixError, SolvabilityError)
from decentviab.linalg import induced_norm
from decentviab.riccati import (build_nare, check_solvability, coupling,
                                coupling_upper_bound, decompose,
                                default_delta_grid, feasibility_cond1,
                                feasibility_cond2, fit_coupling_curve,
                                optimize_delta, recover_L,
                                solve_contraction1, solve_contraction2)
from decentviab.settings import DEFAULTS
from decentviab.system import LtiSystem

from reference_systems import (CART_A, CART_A2, CART_B, CART_B2, EX4D_A,
                               EX4D_B, SIXD_A, SIXD_A2, SIXD_B)

#: Row-sum norm under which the four and six state examples are feasible
ROW = DEFAULTS.with_overrides(norm="row")


@pytest.fixture
def cart():
    return LtiSystem(CART_A, CART_B).partition(2)


@pytest.fixture
def sixd():
    return LtiSystem(SIXD_A, SIXD_B).partition(3)


@pytest.fixture
def ex4d():
    return LtiSystem(EX4D_A, EX4D_B).partition(2)


@pytest.fixture(scope="module")
def ex4d_search():
    return optimize_delta(LtiSystem(EX4D_A, EX4D_B).partition(2),
                          relaxation=2, settings=ROW)


def both_conditions(ps, delta, relaxation=1.0):
    nare = build_nare(ps, delta)
    if not feasibility_cond1(nare, relaxation).satisfied:
        return False
    first = solve_contraction1(nare, relaxation=relaxation)
    L = recover_L(first.solution, ps)
    G = coupling(first.solution, delta, ps)
    return feasibility_cond2(ps, L, G, relaxation).satisfied


#
# Test for decompose(ps, delta, ...) on the inverted pendulum cart
#

def test_cart_transformed_matrices(cart):
    r = decompose(cart, delta=100, relaxation=10, max_iter=500)
    assert np.allclose(r.transformed.A, CART_A2, atol=1e-3)
    assert np.allclose(r.transformed.B.ravel(), CART_B2,
                       atol=1e-3)


def test_cart_certificates(cart):
    r = decompose(cart, delta=100, relaxation=10, max_iter=500)
    assert induced_norm(r.L @ cart.B1 + cart.B2) <= 1e-8
    assert r.diagnostics["zero_block_a"] <= 1e-6
    assert r.diagnostics["zero_block_b"] <= 1e-6
    assert r.diagnostics["residual_r1"] <= 1e-8
    assert r.diagnostics["residual_r2"] <= 1e-8
    assert r.kind == "modified"
    assert np.allclose(r.T, r.T1 @ r.T2)


def test_cart_transformation_is_similarity(cart):
    r = decompose(cart, delta=100, relaxation=10, max_iter=500)
    assert np.allclose(r.T @ r.transformed.A, cart.sys.A @ r.T, atol=1e-10)
    eig = np.sort_complex(np.linalg.eigvals(cart.sys.A))
    eig2 = np.sort_complex(np.concatenate([r.diagnostics["eig_upper"],
                                           r.diagnostics["eig_lower"]]))
    assert np.allclose(eig, eig2, atol=1e-8)


def test_cart_subsystems(cart):
    r = decompose(cart, delta=100, relaxation=10, max_iter=500)
    A_up, B_up = r.upper_subsystem()
    A_lo, B_lo, delta = r.lower_subsystem()
    assert A_up.shape == (2, 2) and B_up.shape == (2, 1)
    assert A_lo.shape == (2, 2) and delta.shape == (2, 2)
    assert np.allclose(B_lo, 0.0, atol=1e-6)
    assert np.allclose(delta, r.coupling)


def test_cart_json(cart):
    d = decompose(cart, delta=100, relaxation=10, max_iter=500).to_json()
    assert d["kind"] == "modified"
    assert d["delta"] == 100.0
    assert d["T"]["rows"] == 4 and len(d["T"]["data"]) == 16
    assert "delta_search" not in d


#
# Test for decompose(ps, delta=-25) on the six state example
#

def test_sixd_transformed_matrices(sixd):
    r = decompose(sixd, delta=-25, relaxation=10, max_iter=1000,
                  settings=ROW)
    assert np.allclose(r.transformed.A, SIXD_A2, atol=1e-3)
    expected_b = np.vstack([SIXD_B[:3], np.zeros((3, 2))])
    assert np.allclose(r.transformed.B, expected_b, atol=1e-3)


#
# Test for optimize_delta(ps) on the four state example
#

def test_ex4d_small_deltas_are_infeasible(ex4d):
    for delta in range(-14, 15):
        if delta in (-1, 0):
            continue
        assert not both_conditions(ex4d, float(delta))


@pytest.mark.slow
def test_ex4d_optimizer(ex4d_search):
    search = ex4d_search
    assert 30.0 <= search.delta_star <= 80.0
    assert search.f_star <= 2.2
    assert any(s.feasible for s in search.trace)
    assert any(not s.feasible for s in search.trace)


@pytest.mark.parametrize("norm", ["column", "row"])
def test_ex4d_large_delta_approaches_gamma_norm(ex4d, norm):
    delta = 1e6
    nare = build_nare(ex4d, delta)
    first = solve_contraction1(nare, enforce=False, max_iter=1000,
                               settings=DEFAULTS.with_overrides(norm=norm))
    f = induced_norm(coupling(first.solution, delta, ex4d), norm)
    gamma = induced_norm(nare.Gamma, norm)
    assert abs(f - gamma) <= 0.05 * gamma


@pytest.mark.slow
def test_decompose_auto_attaches_search(ex4d):
    r = decompose(ex4d, delta="auto", relaxation=2, max_iter=1000,
                  settings=ROW)
    assert r.search is not None
    assert r.delta == r.search.delta_star
    curve = r.to_json()["delta_search"]
    assert curve["c1"] + curve["c2"] == pytest.approx(r.search.gamma_norm)


@pytest.mark.slow
def test_fit_coupling_curve_passes_through_minimum(ex4d_search):
    search = ex4d_search
    c = fit_coupling_curve(search)
    d = search.delta_star
    assert abs(c["c0"] / d + c["c1"]) + c["c2"] == pytest.approx(c["c2"])


#
# Test for build_nare(ps, delta) error paths
#

@pytest.mark.parametrize("delta", [-1.0, 0.0, float("nan")])
def test_forbidden_delta(cart, delta):
    with pytest.raises(ParameterError):
        build_nare(cart, delta)


def test_solvability_failure():
    ps = LtiSystem(np.eye(3) * -1.0, [[0.0], [0.0], [1.0]]).partition(2)
    assert not check_solvability(ps)
    with pytest.raises(SolvabilityError):
        decompose(ps, delta=10.0)
    with pytest.raises(FeasibilityError):
        decompose(ps, delta="auto")


def test_singular_lower_block():
    A = [[1.0, 1.0], [0.0, 0.0]]
    ps = LtiSystem(A, [[1.0], [0.0]]).partition(1)
    with pytest.raises(SingularMatrixError):
        build_nare(ps, 5.0)


def test_relaxation_out_of_range(cart):
    nare = build_nare(cart, 100.0)
    with pytest.raises(ParameterError):
        feasibility_cond1(nare, relaxation=11.0)


def test_infeasible_delta_fails_cleanly(ex4d):
    with pytest.raises(FeasibilityError) as e:
        decompose(ex4d, delta=5.0)
    d = e.value.to_dict()
    assert d["kind"] == "feasibility"
    assert d["details"]["lhs"] > d["details"]["rhs"]


#
# Test for coupling_upper_bound(ps, delta)
#

def test_coupling_upper_bound_is_finite(ex4d):
    for delta in (-100.0, -2.0, 3.0, 50.0, 1e4):
        ub = coupling_upper_bound(ex4d, delta)
        assert np.isfinite(ub) and ub >= 0.0
    with pytest.raises(ParameterError):
        coupling_upper_bound(ex4d, -1.0)


def test_ex4d_coupling_near_its_minimum(ex4d):
    delta = 50.0
    nare = build_nare(ex4d, delta)
    first = solve_contraction1(nare, relaxation=2, max_iter=1000,
                               settings=ROW, enforce=False)
    f = induced_norm(coupling(first.solution, delta, ex4d), "row")
    assert abs(f - 1.82) <= 0.3
    assert f <= coupling_upper_bound(ex4d, delta, "row")


@pytest.mark.parametrize("norm", ["column", "row"])
def test_coupling_upper_bound_stays_above_gamma_norm(ex4d, norm):
    gamma = induced_norm(build_nare(ex4d, 1e6).Gamma, norm)
    for delta in (-1e6, -1e3, 1e3, 1e6):
        assert coupling_upper_bound(ex4d, delta, norm) >= gamma


@pytest.mark.slow
def test_coupling_upper_bound_dominates_the_search_trace(ex4d_search):
    search = ex4d_search
    checked = [s for s in search.trace
               if s.feasible and np.isfinite(s.upper_bound)]
    assert checked
    for s in checked:
        assert s.upper_bound >= s.f
    assert abs(search.f_star - 1.82) <= 0.3
    assert search.gamma_norm == pytest.approx(2.37, abs=0.05)


#
# Test for solve_contraction1 / solve_contraction2 on two time scale systems
#

#: Candidate deltas wide enough for strongly separated time scales
WIDE_GRID = default_delta_grid(high=1e10)


def two_time_scale(seed, n, eps=0.1):
    """Random system whose lower block runs eps times slower."""
    rng = np.random.default_rng(seed)
    k = n // 2
    p = 1 if n == 4 else 2
    A = rng.normal(size=(n, n))
    B = rng.normal(size=(n, p))
    A[k:, :] *= eps
    B[k:, :] *= eps
    return LtiSystem(A, B).partition(k)


def check_certificate(result, feas):
    assert result.residual <= 1e-8
    assert induced_norm(result.increment) <= feas.bound * (1 + 1e-9) + 1e-12
    if feas.ratio <= 0.25:
        assert result.iterations <= 25
    final = induced_norm(result.increment)
    for k, iterate in enumerate(result.iterates):
        error = induced_norm(iterate - result.increment)
        assert error <= feas.ratio ** k * final + 1e-10


def certified_contractions(seed, eps):
    """
    Solves both equations of one random system at its best delta, or at
    the largest candidate when no delta passes both conditions, and
    checks the certificates of every contraction whose condition holds.
    Returns how many contractions were checked.
    """
    ps = two_time_scale(seed, 4 if seed % 2 == 0 else 6, eps)
    try:
        delta = optimize_delta(ps, grid=WIDE_GRID).delta_star
    except FeasibilityError:
        delta = float(WIDE_GRID[-1])
    try:
        nare = build_nare(ps, delta)
    except SingularMatrixError:
        return 0
    feas1 = feasibility_cond1(nare)
    if not feas1.satisfied:
        return 0
    first = solve_contraction1(nare, max_iter=200)
    check_certificate(first, feas1)

    L = recover_L(first.solution, ps)
    G = coupling(first.solution, delta, ps)
    try:
        feas2 = feasibility_cond2(ps, L, G)
    except SingularMatrixError:
        return 1
    if not feas2.satisfied:
        return 1
    second = solve_contraction2(ps, L, first.solution, delta, max_iter=200)
    check_certificate(second, feas2)
    return 2


def test_solver_certificates():
    checked = [certified_contractions(seed, 0.1) for seed in range(20)]
    assert sum(1 for c in checked if c >= 1) >= 10


def test_solver_certificates_with_separated_time_scales():
    checked = [certified_contractions(seed, 1e-4) for seed in range(20)]
    assert sum(1 for c in checked if c == 2) >= 5
