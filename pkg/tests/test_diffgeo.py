import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hklab import dual as D
from hklab import diffgeo as G
from hklab import harness
from hklab import metric as Mt

BACKENDS = ["fd", "dual"]
seeds = st.integers(0, 2**32 - 1)


# -- hyper-dual numbers ----------------------------------------------------------

def test_hessian_of_polynomial_is_exact():
    def f(x):
        return x[0] ** 3 * x[1] + 2.0 * x[1] * x[1]

    val, grad, hess = D.hessian(f, np.array([2.0, -1.0]))
    assert val == -6.0
    np.testing.assert_array_equal(grad, [-12.0, 4.0])
    np.testing.assert_array_equal(hess, [[-12.0, 12.0], [12.0, 4.0]])


@pytest.mark.parametrize("fn, d1, d2", [
    (D.exp, np.exp, np.exp),
    (D.sin, np.cos, lambda x: -np.sin(x)),
    (D.cos, lambda x: -np.sin(x), lambda x: -np.cos(x)),
    (D.log, lambda x: 1 / x, lambda x: -1 / x ** 2),
    (D.sqrt, lambda x: 0.5 / np.sqrt(x), lambda x: -0.25 * x ** -1.5),
    (D.arcsinh, lambda x: 1 / np.sqrt(1 + x * x), lambda x: -x * (1 + x * x) ** -1.5),
])
@given(x=st.floats(0.1, 5.0))
def test_elementary_derivatives(fn, d1, d2, x):
    val, g, h = D.hessian(lambda y: fn(y[0]), np.array([x]))
    assert g[0] == pytest.approx(d1(x), rel=1e-12)
    assert h[0, 0] == pytest.approx(d2(x), rel=1e-12, abs=1e-14)


@settings(max_examples=25)
@given(seed=seeds)
def test_jacobian_of_quotient(seed):
    x = np.random.default_rng(seed).uniform(0.5, 2.0, 3)
    J = D.jacobian(lambda y: D.stack([y[0] / y[1], y[1] * y[2]]), x)
    expected = [[1 / x[1], -x[0] / x[1] ** 2, 0], [0, x[2], x[1]]]
    np.testing.assert_allclose(J, expected, rtol=1e-13)


def test_jvp_of_constant_function():
    np.testing.assert_array_equal(D.jvp(lambda y: np.ones(2), np.zeros(3), np.ones(3)), np.zeros(2))


# -- harness metrics: known values --------------------------------------------------

@pytest.mark.parametrize("backend", BACKENDS)
def test_flat_space(backend):
    c = G.curvature(harness.flat(4), np.ones(4), backend)
    assert np.abs(c.riemann).max() == 0.0
    assert c.scalar == 0.0


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("r", [0.5, 1.0, 3.0])
def test_round_sphere(backend, r):
    c = G.curvature(harness.round_sphere(r), np.array([0.9, 0.3]), backend)
    assert c.scalar == pytest.approx(2 / r ** 2, abs=1e-5)
    assert c.symmetry_residual() < 1e-6


@pytest.mark.parametrize("m, scalar", [(1, 8.0), (2, 24.0)])
def test_fubini_study_scalar(m, scalar):
    x = np.linspace(0.1, 0.4, 2 * m)
    c = G.curvature(harness.fubini_study(m), x)
    assert c.scalar == pytest.approx(scalar, abs=1e-8)


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("metric, flat", [
    (harness.fubini_study(2), True),
    (harness.bergman_ball(2), True),
    (harness.sphere_times_hyperbolic(), True),
    (harness.sphere_times_plane(), False),
])
def test_bochner_tensor(backend, metric, flat):
    x = np.array([0.2, -0.1, 0.3, 0.15])
    res = G.bochner_tensor(metric, harness.complex_structure(2), x, backend)
    assert res.reliable
    if flat:
        assert res.norm < 1e-5
    else:
        assert res.norm > 0.1


# -- closed-form conformal oracle ---------------------------------------------------

def _phi_generic(x):
    return 0.3 * D.sin(x[..., 0]) + 0.1 * x[..., 1] * x[..., 2] - 0.05 * (x * x).sum(axis=-1)


@pytest.mark.parametrize("backend", BACKENDS)
@settings(max_examples=10, deadline=None)
@given(seed=seeds)
def test_conformal_oracle(backend, seed):
    x = np.random.default_rng(seed).uniform(-1, 1, 4)
    _, dphi, hess = D.hessian(_phi_generic, x)
    Gm = harness.conformal(_phi_generic, 4)
    np.testing.assert_allclose(G.christoffel(Gm, x, backend), G.conformal_christoffel(dphi), atol=1e-7)
    c = G.curvature(Gm, x, backend)
    ric, s_scaled = G.conformal_ricci(dphi, hess)
    np.testing.assert_allclose(c.ricci, ric, atol=1e-5)
    assert c.scalar == pytest.approx(s_scaled * np.exp(-2 * _phi_generic(x)), abs=1e-5)


def riemann_norm2_closed(a):
    """|Riem|^2 of f delta on R^4 at |z| = 1 by hand: conformal Ricci at
    x = e_1 plus the Weyl-free identity |R|^2 = 2|Ric|^2 - S^2/3."""
    q = 1.0 + a
    r11 = 6 * a / q - 6 * a * a / q ** 2
    rjj = 6 * a / q - 4 * a * a / q ** 2
    ric2 = q * q * (r11 ** 2 + 3 * rjj ** 2)
    S = q * (r11 + 3 * rjj)
    return 2 * ric2 - S * S / 3


@pytest.mark.parametrize("a, frozen", [(0.5, 41 / 3), (1.0, 39.0), (2.0, 320 / 3)])
def test_riemann_norm_of_g_a(a, frozen):
    assert riemann_norm2_closed(a) == pytest.approx(frozen, rel=1e-14)
    z = np.array([1.0, 0, 0, 0])
    for backend in BACKENDS:
        c = G.curvature(Mt.MetricField(1, a), z, backend)
        assert c.riemann_norm2() == pytest.approx(frozen, rel=1e-7)


@pytest.mark.parametrize("a", [0.5, 2.0])
def test_fd_and_dual_agree(a):
    z = np.array([0.3, -0.2, 0.5, 0.1])
    g = Mt.MetricField(1, a)
    cf, cd = (G.curvature(g, z, be) for be in BACKENDS)
    np.testing.assert_allclose(cf.ricci, cd.ricci, atol=1e-6)
    np.testing.assert_allclose(cf.gamma, cd.gamma, atol=1e-8)


# -- forms, transport, geodesics ---------------------------------------------------

@pytest.mark.parametrize("backend", BACKENDS)
def test_d_of_exact_form_vanishes(backend):
    # theta = d(x0 x1 x2) has d theta = 0; theta itself has known components
    def theta(x):
        return D.stack([x[..., 1] * x[..., 2], x[..., 0] * x[..., 2], x[..., 0] * x[..., 1]], axis=-1)

    x = np.array([0.5, -1.0, 2.0])
    dth = G.numeric_d(theta, 1, x, backend)
    assert np.abs(dth).max() < 1e-8
    # d(x0 dx1) = dx0 ^ dx1
    d2 = G.numeric_d(lambda y: D.stack([0.0 * y[..., 0], y[..., 0], 0.0 * y[..., 0]], axis=-1), 1, x, backend)
    assert d2[0, 1] == pytest.approx(1.0) and d2[1, 0] == pytest.approx(-1.0)


def test_flat_holonomy_is_trivial():
    loop = G.LoopSpec.rectangle(np.zeros(4), 0, 1, 0.5, steps_per_edge=10)
    res = G.parallel_transport(harness.flat(4), loop)
    np.testing.assert_allclose(res.P, np.eye(4), atol=1e-14)
    with pytest.raises(ValueError):
        G.LoopSpec(np.zeros((2, 4)))


def test_sphere_holonomy_angle():
    # a small coordinate square on S^2 rotates vectors by the enclosed area
    th0, d = 1.0, 0.1
    loop = G.LoopSpec(np.array([[th0, 0.0], [th0 + d, 0.0], [th0 + d, d], [th0, d]]), 200)
    res = G.parallel_transport(harness.round_sphere(1.0), loop)
    area = d * (np.cos(th0) - np.cos(th0 + d))
    g = np.diag([1.0, np.sin(th0) ** 2])
    e = res.P[:, 0]
    cos_angle = e @ g @ np.array([1.0, 0]) / np.sqrt(e @ g @ e)
    assert np.arccos(min(1.0, cos_angle)) == pytest.approx(area, rel=1e-3)


def test_radial_geodesic_of_g_a():
    # along a ray g_a-arclength is asinh(sqrt(a) r)/sqrt(a), so r(s) = sinh(sqrt(a) s)/sqrt(a)
    a = 1.0
    g = Mt.MetricField(1, a, route="closed")
    res = G.geodesic(g, np.zeros(4), np.array([1.0, 0, 0, 0]), 1.0, h=1e-2)
    assert not res.blew_up
    assert res.x[-1, 0] == pytest.approx(np.sinh(np.sqrt(a)) / np.sqrt(a), abs=1e-8)
    assert res.speed_drift < 1e-8


def test_backend_lookup():
    assert G.get_backend("fd").mode == "fd"
    with pytest.raises(ValueError):
        G.get_backend("symbolic")


@pytest.mark.parametrize("backend", BACKENDS)
def test_batched_transport_matches_single_loops(backend):
    g = Mt.MetricField(1, 1.0)
    rng = np.random.default_rng(0)
    loops = [G.LoopSpec.rectangle(b, 0, 2, 0.2, steps_per_edge=5) for b in Mt.sample_ball(rng, 3, 1, radius=1.0)]
    many = G.parallel_transport_many(g, loops, backend)
    for L, r in zip(loops, many):
        np.testing.assert_allclose(G.parallel_transport(g, L, backend).P, r.P, atol=1e-13)
    with pytest.raises(ValueError):
        G.parallel_transport_many(g, [loops[0], G.LoopSpec(loops[1].vertices, 7)])
