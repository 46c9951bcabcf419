import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hklab import heisenberg as H
from hklab import forms as F
from hklab import quat as Q

seeds = st.integers(0, 2**32 - 1)


def points(rng, n, m=None):
    shape = (H.dim(n),) if m is None else (m, H.dim(n))
    return rng.standard_normal(shape)


def test_frozen_product():
    # (0, i) (0, j): t = -Im(conj(i) j) = -Im(-k) = k
    p = H.join(np.zeros(3), Q.I[None])
    q = H.join(np.zeros(3), Q.J[None])
    np.testing.assert_array_equal(H.m_mul(p, q), [0, 0, 1, 0, 1, 1, 0])


@pytest.mark.parametrize("n", [1, 2])
@settings(max_examples=25)
@given(seed=seeds)
def test_group_axioms(n, seed):
    rng = np.random.default_rng(seed)
    p, q, r = points(rng, n, 3)
    e = H.identity(n)
    np.testing.assert_allclose(H.m_mul(H.m_mul(p, q), r), H.m_mul(p, H.m_mul(q, r)), atol=1e-12)
    np.testing.assert_allclose(H.m_mul(p, H.m_inv(p)), e, atol=1e-12)
    np.testing.assert_allclose(H.m_mul(e, p), p, atol=0)


@pytest.mark.parametrize("n", [1, 2])
def test_center(n):
    rng = np.random.default_rng(n)
    p = points(rng, n)
    c = np.zeros(H.dim(n))
    c[:3] = rng.standard_normal(3)
    np.testing.assert_allclose(H.m_mul(c, p), H.m_mul(p, c), atol=1e-15)


def test_mismatched_dimensions():
    with pytest.raises(ValueError):
        H.m_mul(H.identity(1), H.identity(2))


def test_mpoint_roundtrip():
    p = np.arange(11.0)
    mp = H.MPoint.from_array(p)
    assert mp.n == 2
    np.testing.assert_array_equal(mp.to_array(), p)


@pytest.mark.parametrize("n", [1, 2])
@settings(max_examples=20, deadline=None)
@given(seed=seeds)
def test_em_action_is_an_action(n, seed):
    rng = np.random.default_rng(seed)
    h1, h2 = H.EMElement.random(rng, n), H.EMElement.random(rng, n)
    p = points(rng, n)
    lhs = H.em_act(h1 @ h2, p)
    rhs = H.em_act(h1, H.em_act(h2, p))
    np.testing.assert_allclose(lhs, rhs, atol=1e-11)
    np.testing.assert_allclose(H.em_act(H.em_inverse(h1), H.em_act(h1, p)), p, atol=1e-11)


@pytest.mark.parametrize("n", [1, 2])
def test_em_pullback_of_omega(n):
    # h^* omega = alpha omega conj(alpha)
    rng = np.random.default_rng(7)
    h = H.EMElement.random(rng, n)
    p, V = points(rng, n, 2)
    pulled = F.pullback_omega(lambda x: H.em_act(h, x), p, V)
    expected = Q.qmul(Q.qmul(h.alpha, F.omega_quat(p, V)), Q.qconj(h.alpha))[1:]
    np.testing.assert_allclose(pulled, expected, atol=1e-9)


def test_em_validation():
    with pytest.raises(ValueError):
        H.EMElement(np.zeros(3), np.zeros((1, 4)), 2 * Q.mat_identity(1))
    with pytest.raises(ValueError):
        H.EMElement(np.zeros(3), np.zeros((1, 4)), Q.mat_identity(1), np.array([2.0, 0, 0, 0]))


@pytest.mark.parametrize("alpha", [1, 2, 3])
def test_rho_is_one_parameter_group(alpha):
    rng = np.random.default_rng(alpha)
    p = points(rng, 1)
    a = 0.7
    s, t = 0.3, -1.1
    e = np.zeros(3)
    e[alpha - 1] = 1.0
    lhs = H.rho_act(alpha, (s + t) * e, p, a)
    rhs = H.rho_act(alpha, s * e, H.rho_act(alpha, t * e, p, a), a)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


@pytest.mark.parametrize("alpha", [1, 2, 3])
def test_xi_generates_rho(alpha):
    rng = np.random.default_rng(20 + alpha)
    p = points(rng, 2)
    a, eps = 1.3, 1e-6
    e = np.zeros(3)
    e[alpha - 1] = eps
    fd = (H.rho_act(alpha, e, p, a) - H.rho_act(alpha, -e, p, a)) / (2 * eps)
    np.testing.assert_allclose(fd, H.xi_field(alpha, p, a), atol=1e-8)


def test_rho_rejects_bad_index():
    with pytest.raises(ValueError):
        H.rho_act(4, np.zeros(3), H.identity(1), 1.0)
