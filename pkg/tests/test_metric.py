import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hklab import forms as F
from hklab import heisenberg as H
from hklab import metric as Mt
from hklab import quat as Q

seeds = st.integers(0, 2**32 - 1)
A_VALUES = [0.5, 1.0, 2.0]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_normalization_constant(n):
    # d omega_1(J_1 X, X) = 2 |X|^2 for the conventions used here
    assert Mt.normalization_constant(n) == 2.0


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("a", A_VALUES)
def test_lift_route_matches_closed_form(n, a):
    res = Mt.conformal_identity_residual(n, a, 200, np.random.default_rng(1))
    assert res.max() < 1e-12


def test_gram_frozen_value():
    z = np.array([1.0, 0.0, 0.0, 0.0])
    np.testing.assert_allclose(Mt.gram_lift(z, 1.0), 0.5 * np.eye(4), atol=1e-15)
    np.testing.assert_allclose(Mt.gram_lift(np.zeros(8), 2.0), np.eye(8), atol=0)


@pytest.mark.parametrize("alpha", [1, 2, 3])
@settings(max_examples=20, deadline=None)
@given(seed=seeds)
def test_metric_independent_of_index_and_fiber(alpha, seed):
    rng = np.random.default_rng(seed)
    z = Mt.sample_ball(rng, 1, 2)[0]
    t = rng.standard_normal(3)
    G1 = Mt.gram_lift(z, 1.5)
    np.testing.assert_allclose(Mt.gram_lift(z, 1.5, alpha=alpha, t=t), G1, atol=1e-12)


@settings(max_examples=20, deadline=None)
@given(seed=seeds)
def test_sp_invariance(seed):
    rng = np.random.default_rng(seed)
    A = Q.random_sp_n(rng, 2)
    al = Q.random_unit(rng)
    z, X, Y = rng.standard_normal((3, 8))
    h = lambda x: Q.to_flat(Q.right_mul(Q.mat_vec(A, Q.from_flat(x)), Q.qconj(al)))  # noqa: E731
    g = Mt.MetricField(2, 0.5)
    assert g.eval(h(z), h(X), h(Y)) == pytest.approx(g.eval(z, X, Y), abs=1e-12)


def test_metric_field_validation():
    with pytest.raises(ValueError):
        Mt.MetricField(1, -1.0)
    with pytest.raises(ValueError):
        Mt.MetricField(1, 1.0, route="other")


def test_sample_ball():
    z = Mt.sample_ball(np.random.default_rng(0), 500, 2, radius=2.0)
    assert z.shape == (500, 8)
    assert np.all(np.linalg.norm(z, axis=-1) <= 2.0)
    zq = z.reshape(500, 2, 4)
    assert np.all(np.linalg.norm(zq, axis=-1) >= 1e-3)


@pytest.mark.parametrize("alpha", [1, 2, 3])
def test_tau_roundtrip_and_differential(alpha):
    rng = np.random.default_rng(alpha)
    x, X = rng.standard_normal((2, 8))
    np.testing.assert_allclose(Mt.tau_inv(alpha, 0.7, Mt.tau(alpha, 0.7, x)), x, atol=1e-14)
    h = 1e-6
    fd = (Mt.tau(alpha, 0.7, x + h * X) - Mt.tau(alpha, 0.7, x - h * X)) / (2 * h)
    np.testing.assert_allclose(Mt.dtau(alpha, 0.7, x, X), fd, atol=1e-8)


@pytest.mark.parametrize("alpha", [1, 2, 3])
def test_pi_alpha_is_invariant_under_r_alpha(alpha):
    rng = np.random.default_rng(alpha + 4)
    p = rng.standard_normal(H.dim(1))
    t = rng.standard_normal(3)
    a = 1.0
    np.testing.assert_allclose(Mt.pi_alpha(alpha, H.rho_act(alpha, t, p, a), a), Mt.pi_alpha(alpha, p, a),
                               atol=1e-12)


@pytest.mark.parametrize("alpha", [1, 2, 3])
def test_l_inverse(alpha):
    u = np.random.default_rng(alpha).standard_normal(8)
    np.testing.assert_allclose(Mt.l_matrix(alpha, 2.0, u) @ Mt.l_inverse(alpha, 2.0, u), np.eye(8), atol=1e-12)


@pytest.mark.parametrize("a", A_VALUES)
@pytest.mark.parametrize("alpha", [1, 2, 3])
def test_omega_well_defined_and_pullback(alpha, a):
    rng = np.random.default_rng(int(4 * a) + 10 * alpha)
    u = Mt.sample_ball(rng, 1, 1)[0]
    U, V = rng.standard_normal((2, 4))
    direct = Mt.omega_descended(alpha, a, u, U, V)
    assert Mt.omega_descended_from(alpha, a, u, U, V, rng.standard_normal(3)) == pytest.approx(direct, abs=1e-9)
    p = rng.standard_normal(H.dim(1))
    X, Y = rng.standard_normal((2, H.dim(1)))
    assert Mt.pi_alpha_pullback_residual(alpha, a, p, X, Y) < 1e-9


@pytest.mark.parametrize("alpha", [1, 2, 3])
def test_theta_antisymmetric(alpha):
    z = np.random.default_rng(2).standard_normal(4)
    T = Mt.theta_matrix(alpha, Mt.MetricField(1, 1.0), z)
    np.testing.assert_allclose(T, -T.T, atol=1e-15)
    # Theta of f delta with J_alpha is f J_alpha
    f = 1.0 / (1.0 + z @ z)
    np.testing.assert_allclose(T, f * F.j_matrix(alpha, 1), atol=1e-14)
