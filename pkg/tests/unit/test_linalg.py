import numpy as np
import pytest

from decentviab.errors import (ComputationError, ParameterError,
                               SingularMatrixError)
from decentviab.linalg import (as_matrix, condition_number, expm, inverse,
                               largest_singular_value, matrix_from_json,
                               matrix_to_json, induced_norm, pseudoinverse,
                               rank, solve, sylvester_kron,
                               zoh_input_matrix)


#
# Test for induced_norm(m, kind)
#

def test_norm_of_printed_cart_input():
    B = [[0.0], [-0.0033], [0.0], [-0.0005]]
    assert induced_norm(B) == pytest.approx(0.0038)


def test_norm_kinds_differ_on_rectangular_matrix():
    m = np.array([[1.0, 1.0, 1.0]])
    assert induced_norm(m, "column") == 1.0
    assert induced_norm(m, "row") == 3.0


def test_norm_unknown_kind():
    with pytest.raises(ParameterError):
        induced_norm(np.eye(2), "frobenius")


def test_norm_is_submultiplicative():
    rng = np.random.default_rng(7)
    for _ in range(20):
        a = rng.normal(size=(3, 3))
        b = rng.normal(size=(3, 3))
        assert induced_norm(a @ b) <= induced_norm(a) * induced_norm(b) + 1e-12


#
# Test for pseudoinverse(m) and rank(m)
#

@pytest.mark.parametrize("shape", [(3, 2), (2, 3), (4, 4)])
def test_pseudoinverse_penrose_identities(shape):
    rng = np.random.default_rng(11)
    m = rng.normal(size=shape)
    p = pseudoinverse(m)
    assert p.shape == shape[::-1]
    assert np.allclose(m @ p @ m, m, atol=1e-10)
    assert np.allclose(p @ m @ p, p, atol=1e-10)
    assert np.allclose((m @ p).T, m @ p, atol=1e-10)


def test_pseudoinverse_of_rank_one_column():
    b = np.array([[0.0], [-0.0033]])
    p = pseudoinverse(b)
    assert np.allclose(p @ b, [[1.0]])
    assert np.allclose(b @ p, [[0.0, 0.0], [0.0, 1.0]])


def test_rank_deficient():
    m = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 0.0, 1.0]])
    assert rank(m) == 2
    assert rank(np.zeros((2, 2))) == 0


#
# Test for expm(m, t) and zoh_input_matrix(a, b, q)
#

def test_expm_diagonal():
    e = expm(np.diag([1.0, -2.0]), 0.5)
    assert np.allclose(e, np.diag(np.exp([0.5, -1.0])))


def test_expm_rotation_is_orthogonal():
    e = expm([[0.0, 1.0], [-1.0, 0.0]], np.pi / 2)
    assert np.allclose(e, [[0.0, 1.0], [-1.0, 0.0]], atol=1e-12)


def test_expm_overflow():
    with pytest.raises(ComputationError):
        expm([[1000.0]], 1.0)


def test_expm_rejects_rectangular():
    with pytest.raises(ParameterError):
        expm(np.ones((2, 3)))


def test_zoh_scalar_decay():
    q = 0.3
    g = zoh_input_matrix([[-1.0]], [[2.0]], q)
    assert g[0, 0] == pytest.approx(2.0 * (1.0 - np.exp(-q)))


def test_zoh_without_inputs():
    assert zoh_input_matrix(np.eye(3), np.zeros((3, 0)), 0.1).shape == (3, 0)


def test_zoh_rejects_nonpositive_step():
    with pytest.raises(ParameterError):
        zoh_input_matrix([[0.0]], [[1.0]], 0.0)


#
# Test for solve, inverse and condition_number
#

def test_singular_solve():
    with pytest.raises(SingularMatrixError) as e:
        solve([[1.0, 2.0], [2.0, 4.0]], [1.0, 1.0])
    assert e.value.exit_code == 2


def test_inverse_roundtrip():
    a = np.array([[2.0, 1.0], [1.0, 3.0]])
    assert np.allclose(inverse(a) @ a, np.eye(2))


def test_condition_number_of_singular_matrix():
    assert condition_number(np.zeros((2, 2))) == float("inf")
    assert condition_number(np.eye(3)) == pytest.approx(1.0)


def test_largest_singular_value_of_empty():
    assert largest_singular_value(np.zeros((2, 0))) == 0.0


#
# Test for sylvester_kron(a, b, c)
#

def test_sylvester_random_residual():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(3, 3)) + 5.0 * np.eye(3)
    b = rng.normal(size=(2, 2)) + 5.0 * np.eye(2)
    c = rng.normal(size=(3, 2))
    x = sylvester_kron(a, b, c)
    assert np.allclose(a @ x + x @ b, c, atol=1e-10)


def test_sylvester_shared_eigenvalue():
    with pytest.raises(SingularMatrixError):
        sylvester_kron([[1.0]], [[-1.0]], [[1.0]])


#
# Test for matrix_from_json(obj) and as_matrix(data)
#

def test_matrix_json_row_major():
    m = matrix_from_json({"rows": 2, "cols": 3, "data": [1, 2, 3, 4, 5, 6]})
    assert m[1, 0] == 4.0
    assert matrix_to_json(m)["data"] == [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]


@pytest.mark.parametrize("obj", [
    {"rows": 2, "cols": 2, "data": [1, 2, 3]},
    {"rows": 2, "data": [1, 2]},
    {"rows": 1, "cols": 1, "data": ["x"]},
    {"rows": 1, "cols": 1, "data": [float("inf")]},
])
def test_malformed_matrix_json(obj):
    with pytest.raises(ParameterError):
        matrix_from_json(obj)


def test_zero_width_matrix_json():
    assert matrix_from_json({"rows": 3, "cols": 0, "data": []}).shape == (3, 0)


def test_as_matrix_rejects_vectors():
    with pytest.raises(ParameterError):
        as_matrix([1.0, 2.0])
