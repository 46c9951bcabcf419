"""Identities of the contact forms, their derivatives and the hypercomplex
structure on D."""

from __future__ import annotations

import numpy as np

from .. import forms as F
from .. import heisenberg as H
from .. import quat as Q
from .core import assert_item, sample_points

CYCLIC = ((1, 2, 3), (2, 3, 1), (3, 1, 2))


def _horizontal(rng, p):
    m, d = p.shape
    return F.horizontal_lift(p, rng.standard_normal((m, d - 3)))


def _em_pullback_residuals(rng, n, m, translate, a=None):
    """Residuals of ``h^* omega = alpha omega conj(alpha)`` (or of the eta
    version when ``a`` is given) over ``m`` (h, p, V) triples."""
    per_h = 10
    out = []
    for _ in range(max(1, m // per_h)):
        h = H.EMElement.random(rng, n, translate=translate)
        if not translate:
            h = H.EMElement(rng.standard_normal(3), np.zeros((n, 4)), h.A, h.alpha)
        p = sample_points(rng, per_h, n)
        V = rng.standard_normal(p.shape)
        R = h.rotation()

        def act(q, h=h):
            return H.em_act(h, q)

        if a is None:
            got = F.pullback_omega(act, p, V)
            want = F.omega_vec(p, V) @ R
        else:
            got = F.pullback_eta(act, p, V, a)
            want = F.eta_vec(p, V, a) @ R
        out.append(np.abs(got - want).max(axis=1))
    return np.concatenate(out)


def audit_forms(ctx):
    n, a, m = ctx.n, ctx.a, ctx.count()
    out = []

    rng = ctx.rng("forms.omega_xi")
    p = sample_points(rng, m, n)
    want = 1.0 + a * F.norm2_z(p)
    res = [F.omega_eval(al, p, H.xi_field(al, p, a)) - want for al in (1, 2, 3)]
    out.append(assert_item(ctx, "forms.omega_xi", "omega_alpha(xi_alpha) = 1 + a |z|^2",
                           np.max(np.abs(res), axis=0), 1e-12))

    rng = ctx.rng("forms.eta_xi")
    p = sample_points(rng, m, n)
    res = [F.eta_eval(al, p, H.xi_field(al, p, a), a) - 1.0 for al in (1, 2, 3)]
    out.append(assert_item(ctx, "forms.eta_xi", "eta_alpha(xi_alpha) = 1",
                           np.max(np.abs(res), axis=0), 1e-12))

    rng = ctx.rng("forms.deta_xi")
    p = sample_points(rng, m, n)
    X = rng.standard_normal(p.shape)
    res = [F.d_eta_eval(al, p, H.xi_field(al, p, a), X, a) for al in (1, 2, 3)]
    out.append(assert_item(ctx, "forms.deta_xi", "d eta_alpha(xi_alpha, X) = 0 for every tangent X",
                           np.max(np.abs(res), axis=0), 1e-10))

    rng = ctx.rng("forms.deta_central")
    p = sample_points(rng, m, n)
    X = rng.standard_normal(p.shape)
    res = []
    for al, be, ga in CYCLIC:
        for other in (be, ga):
            T = np.broadcast_to(H.central_basis(other, n), p.shape)
            res.append(F.d_eta_eval(al, p, T, X, a))
    out.append(assert_item(ctx, "forms.deta_central",
                           "d eta_alpha(d/dt_beta, X) = d eta_alpha(d/dt_gamma, X) = 0",
                           np.max(np.abs(res), axis=0), 1e-10))

    rng = ctx.rng("forms.deta_on_D")
    p = sample_points(rng, m, n)
    X, Y = _horizontal(rng, p), _horizontal(rng, p)
    f = F.f_eval(p, a)
    res = [F.d_eta_eval(al, p, X, Y, a) - f * F.d_omega_eval(al, p, X, Y) for al in (1, 2, 3)]
    out.append(assert_item(ctx, "forms.deta_on_D", "d eta_alpha = f d omega_alpha on D",
                           np.max(np.abs(res), axis=0), 1e-12))

    rng = ctx.rng("forms.j_relation")
    p = sample_points(rng, m, n)
    X, Y = _horizontal(rng, p), _horizontal(rng, p)
    res = []
    for al, be, ga in CYCLIC:
        lhs = F.d_eta_eval(al, p, X, Y, a)
        rhs = F.J_RELATION_SIGN * F.d_eta_eval(be, p, F.j_on_D(ga, p, X), Y, a)
        res.append(lhs - rhs)
    out.append(assert_item(ctx, "forms.j_relation",
                           "d eta_alpha(X, Y) = d eta_beta(J_gamma X, Y) on D for cyclic (alpha, beta, gamma)",
                           np.max(np.abs(res), axis=0), 1e-10))

    rng = ctx.rng("forms.reciprocity")
    p = sample_points(rng, m, n)
    X, Y = _horizontal(rng, p), _horizontal(rng, p)
    vals = [F.d_eta_eval(al, p, F.j_on_D(al, p, X), Y, a) for al in (1, 2, 3)]
    res = np.max(np.abs([vals[0] - vals[1], vals[1] - vals[2]]), axis=0)
    out.append(assert_item(ctx, "forms.reciprocity",
                           "d eta_1(J_1 X, Y) = d eta_2(J_2 X, Y) = d eta_3(J_3 X, Y) on D", res, 1e-10))

    rng = ctx.rng("forms.j_invariance")
    p = sample_points(rng, m, n)
    X, Y = _horizontal(rng, p), _horizontal(rng, p)
    res = [
        F.d_eta_eval(al, p, F.j_on_D(al, p, X), F.j_on_D(al, p, Y), a) - F.d_eta_eval(al, p, X, Y, a)
        for al in (1, 2, 3)
    ]
    out.append(assert_item(ctx, "forms.j_invariance", "d eta_alpha(J_alpha X, J_alpha Y) = d eta_alpha(X, Y) on D",
                           np.max(np.abs(res), axis=0), 1e-10))

    rng = ctx.rng("forms.j_quaternion")
    p = sample_points(rng, m, n)
    X = _horizontal(rng, p)
    J1, J2, J3 = (lambda V, al=al: F.j_on_D(al, p, V) for al in (1, 2, 3))
    res = [J1(J1(X)) + X, J2(J2(X)) + X, J3(J3(X)) + X, J1(J2(X)) - J3(X),
           np.abs(F.omega_vec(p, J1(X))) + np.abs(F.omega_vec(p, J2(X)))]
    out.append(assert_item(ctx, "forms.j_quaternion",
                           "J_alpha^2 = -1, J_1 J_2 = J_3 and J_alpha preserves D",
                           np.max([np.abs(r).max(axis=1) for r in res], axis=0), 1e-12))

    rng = ctx.rng("forms.omega_equivariance")
    out.append(assert_item(ctx, "forms.omega_equivariance",
                           "h^* omega = alpha omega conj(alpha) for h = ((t, v), A alpha) in E(M)",
                           _em_pullback_residuals(rng, n, m, translate=True), 1e-10))

    rng = ctx.rng("forms.eta_equivariance")
    out.append(assert_item(ctx, "forms.eta_equivariance",
                           "h^* eta_alpha = sum_beta eta_beta a_beta_alpha for h in R^3 x| Sp(n) Sp(1)",
                           _em_pullback_residuals(rng, n, m, translate=False, a=a), 1e-10))

    rng = ctx.rng("forms.translation_witness")
    p = sample_points(rng, m, n)
    V = rng.standard_normal(p.shape)
    u = np.zeros((n, 4))
    u[0, 0] = 1.0
    h = H.EMElement.translation(np.zeros(3), u)
    got = F.pullback_eta(lambda q: H.em_act(h, q), p, V, a)
    diff = np.abs(got - F.eta_vec(p, V, a)).max(axis=1)
    out.append(assert_item(ctx, "forms.translation_witness",
                           "a left translation by u != 0 in H^n does not preserve eta_alpha",
                           diff, 0.01, comparison="sup>"))

    rng = ctx.rng("forms.bracket_generating")
    p = sample_points(rng, min(m, 100), n)
    d = H.dim(n)
    res, svals = [], []
    for q in p:
        fields = [lambda x, i=i: F.horizontal_lift(x, np.eye(4 * n)[i] + 0.0 * x[..., 3:]) for i in range(4 * n)]
        br = np.array([F.lie_bracket(fields[i], fields[j], q) for i in range(4 * n) for j in range(i + 1, 4 * n)])
        res.append(np.abs(br[:, 3:]).max())
        svals.append(np.linalg.svd(br[:, :3], compute_uv=False).min())
    out.append(assert_item(ctx, "forms.bracket_center",
                           "brackets of horizontal fields are central", res, 1e-12))
    out.append(assert_item(ctx, "forms.bracket_span",
                           "brackets of horizontal fields span the center R^3", svals, 0.5, comparison=">"))

    rng = ctx.rng("forms.d_basis")
    p = sample_points(rng, m, n)
    B = F.d_basis(p)
    om = np.abs(F.omega_vec(p[:, None, :], B)).max(axis=(1, 2))
    lifted = F.horizontal_lift(p[:, None, :], B[..., 3:])
    same = np.abs(lifted - B).max(axis=(1, 2))
    rank_def = np.array([4 * n - np.linalg.matrix_rank(b, tol=1e-10) for b in B], dtype=float)
    out.append(assert_item(ctx, "forms.d_basis",
                           "v_k, w_k, u_k, s_k are horizontal lifts and form a basis of D where all z_k != 0",
                           np.max([om, same, rank_def], axis=0), 1e-12))
    return out
