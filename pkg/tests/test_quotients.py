import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hklab import forms as F
from hklab import heisenberg as H
from hklab import metric as Mt
from hklab import quat as Q
from hklab import quotients as Qt

seeds = st.integers(0, 2**32 - 1)


@pytest.mark.parametrize("alpha", [1, 2, 3])
@settings(max_examples=20)
@given(seed=seeds)
def test_p_alpha_is_a_homomorphism(alpha, seed):
    rng = np.random.default_rng(seed)
    p, q = rng.standard_normal((2, H.dim(2)))
    lhs = Qt.p_alpha(alpha, H.m_mul(p, q))
    rhs = Qt.quotient_mul(alpha, Qt.p_alpha(alpha, p), Qt.p_alpha(alpha, q))
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


@pytest.mark.parametrize("alpha", [1, 2, 3])
def test_forms_descend(alpha):
    rng = np.random.default_rng(alpha)
    p, V = rng.standard_normal((2, 50, H.dim(1)))
    np.testing.assert_allclose(Qt.omega_hat(alpha, Qt.p_alpha(alpha, p), Qt.p_alpha(alpha, V)),
                               F.omega_eval(alpha, p, V), atol=1e-12)
    a = 0.5
    np.testing.assert_allclose(Qt.eta_hat(alpha, Qt.p_alpha(alpha, p), Qt.p_alpha(alpha, V), a),
                               F.eta_eval(alpha, p, V, a), atol=1e-12)


@pytest.mark.parametrize("alpha", [1, 2, 3])
def test_section_lands_in_n_alpha(alpha):
    z = np.random.default_rng(alpha).standard_normal((20, 8))
    assert np.all(Qt.in_n_alpha(alpha, Qt.section_h(alpha, z), tol=1e-12))
    assert not Qt.in_n_alpha(alpha, np.ones(5))


def test_section_frozen():
    z = np.array([1.0, 2.0, 0.0, 0.0])
    # h_1(1 + 2i) = (-5/2, (1 + 2i) i) = (-5/2, -2 + i)
    np.testing.assert_array_equal(Qt.section_h(1, z), [-2.5, -2.0, 1.0, 0.0, 0.0])


@pytest.mark.parametrize("alpha", [1, 2, 3])
def test_section_pushforward_table(alpha):
    z = Mt.sample_ball(np.random.default_rng(alpha), 30, 2)
    got, want = Qt.section_pushforward_table(alpha, z)
    np.testing.assert_allclose(got, want, atol=1e-12)


def test_quotient_point_roundtrip():
    q = np.arange(5.0)
    qp = Qt.QuotientPoint.from_array(2, q)
    np.testing.assert_array_equal(qp.to_array(), q)


@settings(max_examples=25)
@given(seed=seeds)
def test_phi_is_a_homomorphism(seed):
    rng = np.random.default_rng(seed)
    q1, q2 = rng.standard_normal((2, 1 + 4 * 2))
    lhs = Qt.phi_iso(Qt.quotient_mul(1, q1, q2))
    rhs = Qt.n_mul(Qt.phi_iso(q1), Qt.phi_iso(q2))
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_phi_hat_frozen():
    # x = 1 + 2i + 3j + 4k = (1 + 2i) + (3 + 4i) j -> (1 + 2i, 3 - 4i)
    np.testing.assert_array_equal(Qt.phi_hat(np.array([1.0, 2, 3, 4])), [1, 2, 3, -4])


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
def test_phi_pulls_back_contact_forms(a):
    rng = np.random.default_rng(int(4 * a))
    q, V = rng.standard_normal((2, 40, 5))
    np.testing.assert_allclose(Qt.omega_N(Qt.phi_iso(q), Qt.phi_iso_pushforward(V)),
                               Qt.omega_hat(1, q, V), atol=1e-12)
    np.testing.assert_allclose(Qt.eta_N(Qt.phi_iso(q), Qt.phi_iso_pushforward(V), a),
                               Qt.eta_hat(1, q, V, a), atol=1e-12)


def test_anti_holomorphy():
    U = np.random.default_rng(9).standard_normal((30, 8))
    np.testing.assert_allclose(Qt.phi_hat(F.j_hat(1, U)), Qt.j_prime_C(Qt.phi_hat(U)), atol=1e-15)


def test_g_n_at_origin_and_unitary_invariance():
    assert Qt.normalization_constant_N(1) == -2.0
    np.testing.assert_allclose(Qt.gram_N(np.zeros(4), 1.0), np.eye(4), atol=1e-15)
    rng = np.random.default_rng(4)
    U = Qt.unitary_real(Qt.random_unitary(rng, 2))
    np.testing.assert_allclose(U.T @ U, np.eye(4), atol=1e-12)
    y, X, Y = rng.standard_normal((3, 4))
    g0 = X @ Qt.gram_N(y, 1.5) @ Y
    g1 = (U @ X) @ Qt.gram_N(U @ y, 1.5) @ (U @ Y)
    assert g1 == pytest.approx(g0, abs=1e-12)


def test_lift_diagram_commutes():
    rng = np.random.default_rng(2)
    A = Q.random_sp_n(rng, 1)
    hmap = Qt.linear_isometry(A, Q.random_unit(rng))
    lifted = Qt.lift_map(hmap)
    p = rng.standard_normal((10, H.dim(1)))
    np.testing.assert_array_equal(lifted(p)[..., 3:], hmap(p[..., 3:]))


def test_lift_preserves_d_over_sp_n():
    rng = np.random.default_rng(3)
    lifted = Qt.lift_map(Qt.linear_isometry(Q.random_sp_n(rng, 2), Q.ONE))
    p = rng.standard_normal(H.dim(2))
    V = F.horizontal_lift(p, rng.standard_normal(8))
    W = F.pushforward(lifted, p, V)
    np.testing.assert_allclose(F.omega_vec(lifted(p), W), 0, atol=1e-12)
