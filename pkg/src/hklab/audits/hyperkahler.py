"""Closedness of the fundamental forms, curvature and holonomy of g_a.

Geometric claims are MEASURE items (both backends, recorded
either way); the analytically forced identities are ASSERT items.
Curvature items run for n = 1 only, form items for every n.
"""

from __future__ import annotations

import numpy as np

from .. import diffgeo as G
from .. import forms as F
from .. import metric as Mt
from .core import assert_item, both_backends, measure_item, sample_points
from .metric import theta_via_omega

CURVATURE_MAX_N = 1


def _d_norms(form_of, points, backend):
    """``|d form_alpha|`` at each point for alpha = 1, 2, 3."""
    return [
        G.form_norm(G.numeric_d(lambda x, al=al: form_of(al, x), 2, x, backend))
        for x in points for al in (1, 2, 3)
    ]


def radial_geodesic(n, a, T, backend, h=1e-2):
    """Unit-speed geodesic of g_a from the origin along the first axis, with
    the closed-form radius ``sinh(sqrt(a) s) / sqrt(a)`` for comparison."""
    g = Mt.MetricField(n, a, route="closed")
    v0 = np.zeros(4 * n)
    v0[0] = 1.0
    res = G.geodesic(g, np.zeros(4 * n), v0, T, backend, h=h, blowup=1e6)
    exact = np.sinh(np.sqrt(a) * res.s) / np.sqrt(a)
    return res, exact


def audit_hyperkahler(ctx):
    n, a = ctx.n, ctx.a
    out = []
    g = Mt.MetricField(n, a)
    cnt = ctx.count(100)

    rng = ctx.rng("hk.dd_eta")
    pts = sample_points(rng, cnt, n)

    def dd(be):
        return [
            np.abs(G.numeric_d(lambda q, al=al: F.d_eta_matrix(al, q, a), 2, p, be)).max()
            for p in pts for al in (1, 2, 3)
        ]

    out.append(assert_item(ctx, "hk.dd_eta", "d(d eta_alpha) = 0",
                           np.concatenate([dd(be) for be in ctx.assert_backends()]), 1e-8))

    rng = ctx.rng("hk.omega_well_defined")
    u = Mt.sample_ball(rng, cnt, n)
    U, V = rng.standard_normal((2, cnt, 4 * n))
    t = rng.standard_normal((cnt, 3))
    res = [
        Mt.omega_descended(al, a, u[i], U[i], V[i]) - Mt.omega_descended_from(al, a, u[i], U[i], V[i], t[i])
        for i in range(cnt) for al in (1, 2, 3)
    ]
    out.append(assert_item(ctx, "hk.omega_well_defined",
                           "Omega_alpha does not depend on the preimage in M", res, 1e-9))

    rng = ctx.rng("hk.omega_pullback")
    p = sample_points(rng, cnt, n)
    X, Y = rng.standard_normal((2,) + p.shape)
    res = np.max([Mt.pi_alpha_pullback_residual(al, a, p, X, Y) for al in (1, 2, 3)], axis=0)
    out.append(assert_item(ctx, "hk.omega_pullback", "pi_alpha^* Omega_alpha = d eta_alpha", res, 1e-9))

    rng = ctx.rng("hk.d_theta")
    x = Mt.sample_ball(rng, cnt, n)
    out.append(measure_item(
        ctx, "hk.d_theta", "|d Theta_alpha| for Theta_alpha = g_a(., J_alpha .), lift route",
        both_backends(lambda be: _d_norms(lambda al, y: Mt.theta_matrix(al, g, y), x, be))))
    out.append(measure_item(
        ctx, "hk.d_theta_omega", "|d (tau_alpha^* Omega_alpha / c)|, descended-form route",
        both_backends(lambda be: _d_norms(lambda al, y: Mt.theta_via_omega_matrix(al, a, y), x, be))))
    out.append(measure_item(
        ctx, "hk.d_omega", "|d Omega_alpha| on H^n",
        both_backends(lambda be: _d_norms(lambda al, y: Mt.omega_descended_matrix(al, a, y), x, be))))

    rng = ctx.rng("hk.radial_geodesic")
    T = 3.0
    per = {}
    traces = {}
    for be in ("fd", "dual"):
        res_, exact = radial_geodesic(n, a, T, be)
        per[be] = np.abs(res_.x[:, 0] - exact) / np.maximum(1.0, exact)
        traces[be] = (res_, exact)
    res_, exact = traces["dual"]
    ctx.add_table(f"geodesic_n{n}_a{a:g}", ("s", "r_numeric_dual", "r_numeric_fd", "r_closed_form"),
                  zip(res_.s, res_.x[:, 0], traces["fd"][0].x[:, 0], exact))
    out.append(measure_item(
        ctx, "hk.radial_geodesic", "radial geodesic of g_a against sinh(sqrt(a) s) / sqrt(a) (relative)",
        per, extra={"speed_drift": res_.speed_drift, "blew_up": res_.blew_up, "T": T}))

    if n > CURVATURE_MAX_N:
        return out

    rng = ctx.rng("hk.curvature")
    x = Mt.sample_ball(rng, cnt, n)
    curv = {be: [G.curvature(g, xi, be) for xi in x] for be in ("fd", "dual")}
    out.append(measure_item(ctx, "hk.ricci", "|Ric(g_a)|",
                            {be: [c.ricci_norm() for c in cs] for be, cs in curv.items()}))
    out.append(measure_item(ctx, "hk.scalar", "scalar curvature of g_a",
                            {be: [c.scalar for c in cs] for be, cs in curv.items()}))
    ctx.add_table(f"curvature_n{n}_a{a:g}", ("a", "x1", "x2", "x3", "x4", "scalar", "ricci_norm", "riemann_norm2"),
                  [(a, *xi[:4], c.scalar, c.ricci_norm(), c.riemann_norm2()) for xi, c in zip(x, curv["dual"])])

    Js = [F.j_matrix(al, n) for al in (1, 2, 3)]
    out.append(measure_item(ctx, "hk.nabla_j", "|nabla J_alpha| for the Levi-Civita connection of g_a",
                            both_backends(lambda be: [G.nabla_J(g, G.constant_field(J), xi, be)
                                                      for xi in x for J in Js])))

    rng = ctx.rng("hk.holonomy")
    loops = []
    for base in Mt.sample_ball(rng, ctx.count(100), n, radius=1.5):
        i, j = rng.choice(4 * n, size=2, replace=False)
        loops.append(G.LoopSpec.rectangle(base, int(i), int(j), 0.2, steps_per_edge=25))
    out.append(measure_item(ctx, "hk.holonomy",
                            "deviation of coordinate-loop holonomy from Sp(n) (commutant of J_1, J_2, J_3)",
                            both_backends(lambda be: G.holonomy_deviations(g, loops, Js, be))))
    return out
