"""Validation of the numerical-geometry layer against closed forms and
between its two derivative backends."""

from __future__ import annotations

import numpy as np

from .. import diffgeo as G
from .. import dual as D
from .. import forms as F
from .. import harness as Hm
from .. import metric as Mt
from .core import agreement, assert_item, sample_points

TOL = 1e-5
BACKEND_TOL = 1e-6


def _phi_generic(x):
    return 0.3 * D.sin(x[..., 0]) + 0.2 * x[..., 1] * x[..., 2] + 0.1 * x[..., 3] * x[..., 3]


def _phi_generic_derivs(x):
    d = np.zeros_like(x)
    d[0] = 0.3 * np.cos(x[0])
    d[1] = 0.2 * x[2]
    d[2] = 0.2 * x[1]
    d[3] = 0.2 * x[3]
    h = np.zeros((len(x), len(x)))
    h[0, 0] = -0.3 * np.sin(x[0])
    h[1, 2] = h[2, 1] = 0.2
    h[3, 3] = 0.2
    return d, h


def _phi_ga_derivs(a):
    """``g_a = exp(2 phi) delta`` with ``phi = -log(1 + a |x|^2) / 2``."""

    def derivs(x):
        q = 1.0 + a * (x @ x)
        d = -a * x / q
        h = -a / q * np.eye(len(x)) + 2.0 * a * a * np.outer(x, x) / (q * q)
        return d, h

    return derivs


def _conformal_cases(ctx, rng, count):
    n, a = ctx.n, ctx.a
    N = 4 * n
    gen = Hm.conformal(_phi_generic, 4)
    cases = []
    for x in 0.7 * rng.standard_normal((count, 4)):
        cases.append(("generic", gen, x, _phi_generic_derivs))
    ga_derivs = _phi_ga_derivs(a)
    for route in ("closed", "lift"):
        g = Mt.MetricField(n, a, route=route)
        for x in Mt.sample_ball(rng, count, n):
            cases.append((f"g_a/{route}", g, x, ga_derivs))
    return N, cases


def audit_oracles(ctx):
    out = []
    count = ctx.count(100)
    backends = ("fd", "dual")
    agree = []

    rng = ctx.rng("oracle.conformal")
    _, cases = _conformal_cases(ctx, rng, count)
    res_gamma, res_ric, res_scal = [], [], []
    rows = []
    for name, g, x, derivs in cases:
        dphi, hess = derivs(x)
        phi_val = 0.5 * np.log(np.asarray(g(x), dtype=float)[0, 0])
        ric_cf, s_scaled = G.conformal_ricci(dphi, hess)
        s_cf = s_scaled * np.exp(-2.0 * phi_val)
        gam_cf = G.conformal_christoffel(dphi)
        per = {}
        for be in backends:
            c = G.curvature(g, x, be)
            per[be] = c
            res_gamma.append(np.abs(c.gamma - gam_cf).max())
            res_ric.append(np.abs(0.5 * (c.ricci + c.ricci.T) - ric_cf).max())
            res_scal.append(abs(c.scalar - s_cf))
        agree.append(agreement(per["fd"].riemann, per["dual"].riemann))
        agree.append(agreement(per["fd"].gamma, per["dual"].gamma))
        rows.append((name, *x[:4], s_cf, per["fd"].scalar, per["dual"].scalar))
    ctx.add_table(f"oracle_conformal_n{ctx.n}_a{ctx.a:g}", ("metric", "x1", "x2", "x3", "x4", "scalar_closed", "scalar_fd", "scalar_dual"), rows)
    out.append(assert_item(ctx, "oracle.conformal_christoffel",
                           "Christoffel symbols of exp(2 phi) delta against the closed conformal formula",
                           res_gamma, TOL))
    out.append(assert_item(ctx, "oracle.conformal_ricci",
                           "Ricci and scalar curvature of exp(2 phi) delta against the closed conformal formulas",
                           np.maximum(res_ric, res_scal), TOL))

    rng = ctx.rng("oracle.flat", use_a=False)
    res = []
    for x in rng.standard_normal((count, 4)):
        for be in backends:
            c = G.curvature(Hm.scaled_flat(4, 2.5), x, be)
            res.append(max(np.abs(c.gamma).max(), np.abs(c.riemann).max()))
    out.append(assert_item(ctx, "oracle.flat", "a constant metric has vanishing connection and curvature",
                           res, TOL, a=False))

    rng = ctx.rng("oracle.sphere", use_a=False)
    res = []
    for r in (0.5, 1.0, 2.0):
        for th in rng.uniform(0.3, np.pi - 0.3, max(1, count // 3)):
            x = np.array([th, rng.uniform(0, 2 * np.pi)])
            per = {be: G.curvature(Hm.round_sphere(r), x, be) for be in backends}
            for c in per.values():
                res.append(max(abs(c.scalar - 2.0 / r**2), c.symmetry_residual()))
            agree.append(agreement(per["fd"].riemann, per["dual"].riemann))
    out.append(assert_item(ctx, "oracle.sphere", "round 2-sphere of radius r has scalar curvature 2 / r^2",
                           res, TOL, a=False))

    rng = ctx.rng("oracle.holomorphic", use_a=False)
    res = []
    for m_ in (1, 2):
        for G_, sign, scale in ((Hm.fubini_study(m_), 1.0, 0.6), (Hm.bergman_ball(m_), -1.0, 0.25)):
            for y in scale * rng.standard_normal((max(1, count // 10), 2 * m_)):
                per = {be: G.curvature(G_, y, be) for be in backends}
                for c in per.values():
                    res.append(abs(c.scalar - sign * 4.0 * m_ * (m_ + 1)))
                agree.append(agreement(per["fd"].riemann, per["dual"].riemann))
    out.append(assert_item(ctx, "oracle.holomorphic",
                           "Fubini-Study and Bergman metrics have scalar curvature +-4 m (m + 1)",
                           res, TOL, a=False))

    rng = ctx.rng("oracle.bochner", use_a=False)
    res, witness = [], []
    J1, J2 = Hm.complex_structure(1), Hm.complex_structure(2)
    flat_cases = [(Hm.fubini_study(1), J1, 0.6), (Hm.fubini_study(2), J2, 0.6),
                  (Hm.bergman_ball(2), J2, 0.25), (Hm.sphere_times_hyperbolic(), J2, 0.3)]
    for G_, J, scale in flat_cases:
        for y in scale * rng.standard_normal((max(1, count // 10), J.shape[0])):
            for be in backends:
                b = G.bochner_tensor(G_, J, y, be)
                res.append(max(b.norm, b.nabla_J))
    for y in 0.3 * rng.standard_normal((max(1, count // 10), 4)):
        witness.append(G.bochner_tensor(Hm.sphere_times_plane(), J2, y, "dual").norm)
    out.append(assert_item(ctx, "oracle.bochner_flat",
                           "Bochner tensor vanishes for Fubini-Study, Bergman and S^2 x H^2",
                           res, TOL, a=False))
    out.append(assert_item(ctx, "oracle.bochner_witness",
                           "Bochner tensor of S^2 x R^2 does not vanish", witness, 0.1, comparison=">", a=False))

    rng = ctx.rng("oracle.exterior_d")
    res = []
    n, a = ctx.n, ctx.a
    for p in sample_points(rng, count, n):
        for al in (1, 2, 3):
            want = F.d_eta_matrix(al, p, a)
            for be in backends:
                got = G.numeric_d(lambda q, al=al: F.eta_coeffs(q, a)[..., al - 1, :], 1, p, be)
                res.append(np.abs(got - want).max())
    out.append(assert_item(ctx, "oracle.exterior_d",
                           "numerical exterior derivative of eta_alpha against the analytic d eta_alpha",
                           res, 1e-8))

    out.append(assert_item(ctx, "oracle.backend_agreement",
                           "finite-difference and hyper-dual curvature agree (relative)", agree, BACKEND_TOL))
    return out
