import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hklab import quat as Q

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
quats = arrays(np.float64, (4,), elements=finite)


def unit(q):
    n = np.linalg.norm(q)
    return q / n


# -- frozen multiplication table ------------------------------------------------

@pytest.mark.parametrize("p, q, expected", [
    (Q.I, Q.J, Q.K),
    (Q.J, Q.K, Q.I),
    (Q.K, Q.I, Q.J),
    (Q.J, Q.I, -Q.K),
    (Q.I, Q.I, -Q.ONE),
    (Q.K, Q.K, -Q.ONE),
])
def test_hamilton_table(p, q, expected):
    np.testing.assert_array_equal(Q.qmul(p, q), expected)


def test_ijk_is_minus_one():
    np.testing.assert_array_equal(Q.qmul(Q.qmul(Q.I, Q.J), Q.K), -Q.ONE)


def test_frozen_product():
    # (1 + 2i + 3j + 4k)(5 + 6i + 7j + 8k), worked by hand
    p = np.array([1.0, 2, 3, 4])
    q = np.array([5.0, 6, 7, 8])
    np.testing.assert_array_equal(Q.qmul(p, q), [-60.0, 12, 30, 24])


@given(quats, quats, quats)
def test_associativity(p, q, r):
    lhs = Q.qmul(Q.qmul(p, q), r)
    rhs = Q.qmul(p, Q.qmul(q, r))
    scale = 1 + np.linalg.norm(p) * np.linalg.norm(q) * np.linalg.norm(r)
    assert np.max(np.abs(lhs - rhs)) <= 1e-13 * scale


@given(quats, quats)
def test_norm_is_multiplicative(p, q):
    assert np.isclose(Q.qnorm(Q.qmul(p, q)), Q.qnorm(p) * Q.qnorm(q), rtol=1e-12, atol=1e-12)


@given(quats, quats)
def test_conjugate_reverses_products(p, q):
    lhs = Q.qconj(Q.qmul(p, q))
    rhs = Q.qmul(Q.qconj(q), Q.qconj(p))
    assert np.allclose(lhs, rhs, atol=1e-12)


@given(quats.filter(lambda q: np.linalg.norm(q) > 1e-3))
def test_inverse(q):
    np.testing.assert_allclose(Q.qmul(q, Q.qinv(q)), Q.ONE, atol=1e-12)


@pytest.mark.parametrize("alpha", [1, 2, 3])
def test_exp_unit_quarter_turn(alpha):
    np.testing.assert_allclose(Q.exp_unit(alpha, np.pi / 2), Q.UNITS[alpha - 1], atol=1e-15)


@pytest.mark.parametrize("q", [Q.ONE, Q.I, np.array([0.5, -1.0, 2.0, 0.25])])
def test_left_right_matrices(q):
    x = np.array([0.3, -0.7, 1.1, 2.0])
    np.testing.assert_allclose(Q.left_matrix(q) @ x, Q.qmul(q, x), atol=1e-15)
    np.testing.assert_allclose(Q.right_matrix(q) @ x, Q.qmul(x, q), atol=1e-15)


# -- Sp(1) -> SO(3) ----------------------------------------------------------------

def test_so3_frozen_quarter_turn():
    # conjugation by exp(i pi/4) rotates j -> k and k -> -j
    R = Q.so3_from_unit(Q.exp_unit(1, np.pi / 4))
    np.testing.assert_allclose(R, [[1, 0, 0], [0, 0, 1], [0, -1, 0]], atol=1e-15)


@settings(max_examples=50)
@given(quats.filter(lambda q: np.linalg.norm(q) > 1e-2),
       quats.filter(lambda q: np.linalg.norm(q) > 1e-2))
def test_so3_composition_order(p, q):
    a, b = unit(p), unit(q)
    Ra, Rb, Rab = (Q.so3_from_unit(x) for x in (a, b, Q.qmul(a, b)))
    np.testing.assert_allclose(Rab, Rb @ Ra, atol=1e-12)
    np.testing.assert_allclose(Ra @ Ra.T, np.eye(3), atol=1e-12)
    assert np.isclose(np.linalg.det(Ra), 1.0)


def test_so3_kernel_and_batch():
    rng = np.random.default_rng(3)
    u = Q.random_unit(rng, 5)
    R = Q.so3_from_unit(u)
    assert R.shape == (5, 3, 3)
    np.testing.assert_allclose(R, Q.so3_from_unit(-u), atol=1e-15)
    np.testing.assert_allclose(Q.so3_from_unit(-Q.ONE), np.eye(3), atol=1e-15)


def test_so3_rejects_non_unit():
    with pytest.raises(ValueError):
        Q.so3_from_unit(np.array([2.0, 0, 0, 0]))


# -- vectors and Sp(n) -------------------------------------------------------------

def test_hermitian_product_frozen():
    z = np.array([[0.0, 1.0, 0.0, 0.0]])       # i
    w = np.array([[0.0, 0.0, 1.0, 0.0]])       # j
    # conj(i) j = -k
    np.testing.assert_array_equal(Q.herm_inner(z, w), -Q.K)


@given(arrays(np.float64, (2, 4), elements=finite), arrays(np.float64, (2, 4), elements=finite))
def test_hermitian_symmetry(z, w):
    np.testing.assert_allclose(Q.herm_inner(w, z), Q.qconj(Q.herm_inner(z, w)), atol=1e-11)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_random_sp_n_is_symplectic(n):
    A = Q.random_sp_n(np.random.default_rng(n), n)
    assert Q.symplectic_residual(A) < 1e-12
    M = Q.sp_matrix(A)
    np.testing.assert_allclose(M.T @ M, np.eye(4 * n), atol=1e-12)


@pytest.mark.parametrize("n", [1, 2])
def test_sp_n_preserves_hermitian_product(n):
    rng = np.random.default_rng(10 + n)
    A = Q.random_sp_n(rng, n)
    z, w = rng.standard_normal((2, n, 4))
    np.testing.assert_allclose(Q.herm_inner(Q.mat_vec(A, z), Q.mat_vec(A, w)), Q.herm_inner(z, w), atol=1e-12)


def test_flat_roundtrip():
    z = np.arange(8.0).reshape(2, 4)
    np.testing.assert_array_equal(Q.from_flat(Q.to_flat(z)), z)


def test_value_types():
    p = Q.Quaternion(1, 2, 3, 4)
    q = Q.Quaternion(5, 6, 7, 8)
    assert (p * q).isclose(Q.Quaternion(-60, 12, 30, 24))
    assert (p * p.inverse()).isclose(Q.Quaternion(1))
    with pytest.raises(ValueError):
        Q.UnitQuaternion(1, 1, 0, 0)
    with pytest.raises(ValueError):
        Q.QMatrix(np.eye(2))
    A = Q.QMatrix.identity(2)
    v = Q.QVector(np.arange(8.0))
    np.testing.assert_array_equal((A @ v).entries, v.entries)
    assert Q.herm_inner_q(v, v).isclose(Q.Quaternion(v.norm2()))
