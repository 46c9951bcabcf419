"""The lift-built metric g_a and the descended 2-forms Omega_alpha."""

from __future__ import annotations

import numpy as np

from .. import diffgeo as G
from .. import forms as F
from .. import metric as Mt
from .core import assert_item, both_backends, measure_item, sample_points


def theta_via_omega(alpha, a, x, backend):
    """``tau_alpha^* Omega_alpha / c`` with ``d tau`` from a derivative backend."""
    n = len(x) // 4
    _, jac = G.get_backend(backend).d1(lambda y: Mt.tau(alpha, a, y), x)
    T = jac.T  # row i: image of e_i
    M = Mt.omega_descended_matrix(alpha, a, Mt.tau(alpha, a, x))
    return T @ M @ T.T / Mt.normalization_constant(n)


def audit_metric(ctx):
    n, a, m = ctx.n, ctx.a, ctx.count()
    out = []
    g = Mt.MetricField(n, a)

    rng = ctx.rng("metric.conformal")
    out.append(assert_item(ctx, "metric.conformal",
                           "d eta_alpha(J_alpha lift X, lift Y) / c = f(z) <X, Y> with c fixed at the origin",
                           Mt.conformal_identity_residual(n, a, m, rng), 1e-10))

    rng = ctx.rng("metric.index_independence")
    z = Mt.sample_ball(rng, m, n)
    G1 = Mt.gram_lift(z, a, 1)
    res = np.max([np.abs(Mt.gram_lift(z, a, al) - G1).max(axis=(1, 2)) for al in (2, 3)], axis=0)
    out.append(assert_item(ctx, "metric.index_independence",
                           "the lift construction gives the same metric for alpha = 1, 2, 3", res, 1e-10))

    rng = ctx.rng("metric.fiber_independence")
    z = Mt.sample_ball(rng, m, n)
    t = 3.0 * rng.standard_normal((m, 3))
    res = np.abs(Mt.gram_lift(z, a, 1, t) - Mt.gram_lift(z, a, 1)).max(axis=(1, 2))
    out.append(assert_item(ctx, "metric.fiber_independence",
                           "the lift construction does not depend on the point over z", res, 1e-12))

    rng = ctx.rng("metric.hermitian")
    z = Mt.sample_ball(rng, m, n)
    Gm = g.gram(z)
    res = np.max([
        np.abs(np.einsum("ki,...kl,lj->...ij", F.j_matrix(al, n), Gm, F.j_matrix(al, n)) - Gm).max(axis=(1, 2))
        for al in (1, 2, 3)
    ], axis=0)
    res = np.maximum(res, np.abs(Gm - np.swapaxes(Gm, 1, 2)).max(axis=(1, 2)))
    out.append(assert_item(ctx, "metric.hermitian",
                           "g_a is symmetric and hermitian for J_1, J_2, J_3", res, 1e-10))

    out.append(assert_item(ctx, "metric.positive", "g_a is positive definite",
                           np.linalg.eigvalsh(Gm).min(axis=1), 0.0, comparison=">"))

    res = np.abs(g.gram(np.zeros(4 * n)) - np.eye(4 * n)).max()
    out.append(assert_item(ctx, "metric.origin", "g_a is the euclidean metric at the origin", [res], 1e-12))

    rng = ctx.rng("omega.well_defined")
    u = Mt.sample_ball(rng, m, n)
    U = rng.standard_normal((m, 4 * n))
    V = rng.standard_normal((m, 4 * n))
    t = rng.standard_normal((m, 3))
    res = []
    for i in range(m):
        al = i % 3 + 1
        first = Mt.omega_descended(al, a, u[i], U[i], V[i])
        second = Mt.omega_descended_from(al, a, u[i], U[i], V[i], t[i])
        res.append(first - second)
    out.append(assert_item(ctx, "omega.well_defined",
                           "Omega_alpha is the same from two preimages in one orbit of the solvable group",
                           res, 1e-9))

    rng = ctx.rng("omega.pullback")
    p = sample_points(rng, m, n)
    X = rng.standard_normal(p.shape)
    Y = rng.standard_normal(p.shape)
    res = np.max([Mt.pi_alpha_pullback_residual(al, a, p, X, Y) for al in (1, 2, 3)], axis=0)
    out.append(assert_item(ctx, "omega.pullback",
                           "pi_alpha^* Omega_alpha = d eta_alpha on all tangent vectors of M", res, 1e-9))

    rng = ctx.rng("omega.j_invariance")
    u = Mt.sample_ball(rng, min(m, 200), n)
    res = []
    for uu in u:
        for al in (1, 2, 3):
            W = Mt.omega_descended_matrix(al, a, uu)
            Jh = Mt.j_descended_matrix(al, a, uu)
            res.append(np.abs(Jh.T @ W @ Jh - W).max())
    out.append(assert_item(ctx, "omega.j_invariance",
                           "Omega_alpha is invariant under the complex structure induced through pi_alpha",
                           res, 1e-9))

    rng = ctx.rng("metric.theta_vs_omega")
    x = Mt.sample_ball(rng, ctx.count(50), n)

    def disc(backend):
        return [
            np.abs(theta_via_omega(al, a, xi, backend) - Mt.theta_matrix(al, g, xi)).max()
            for xi in x for al in (1, 2, 3)
        ]

    out.append(measure_item(ctx, "metric.theta_vs_omega",
                            "fundamental form Theta_alpha of g_a compared with tau_alpha^* Omega_alpha / c",
                            both_backends(disc)))
    return out
