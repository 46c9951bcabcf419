"""The quotient M / R^2, its section N_alpha and the isomorphism with the
complex Heisenberg group N."""

from __future__ import annotations

import numpy as np

from .. import diffgeo as G
from .. import forms as F
from .. import heisenberg as H
from .. import metric as Mt
from .. import quotients as Qt
from .core import assert_item, both_backends, measure_item, sample_points

BOCHNER_MAX_N = 1


def _quotient_points(rng, m, n):
    return np.concatenate([rng.standard_normal((m, 1)), Mt.sample_ball(rng, m, n)], axis=1)


def antimetric_grams(z, a, backend):
    """Gram matrices of ``(psi o tau_1)^* g_N`` and of ``g_a`` at ``z`` with
    the differential of ``psi o tau_1`` from a derivative backend."""
    _, jac = G.get_backend(backend).d1(lambda x: Qt.phi_hat(Mt.tau(1, a, x)), z)
    GN = Qt.gram_N(Qt.phi_hat(Mt.tau(1, a, z)), a)
    return jac.T @ GN @ jac, Mt.gram_lift(z, a)


def audit_quotients(ctx):
    n, a, m = ctx.n, ctx.a, ctx.count()
    out = []
    d = H.dim(n)

    rng = ctx.rng("quot.p_alpha_hom")
    p, q = sample_points(rng, m, n), sample_points(rng, m, n)
    res = [np.abs(Qt.p_alpha(al, H.m_mul(p, q)) - Qt.quotient_mul(al, Qt.p_alpha(al, p), Qt.p_alpha(al, q))).max(axis=1)
           for al in (1, 2, 3)]
    out.append(assert_item(ctx, "quot.p_alpha_hom", "p_alpha: M -> M / R^2 is a homomorphism",
                           np.max(res, axis=0), 1e-12))

    rng = ctx.rng("quot.projections")
    p = sample_points(rng, m, n)
    res = []
    for al in (1, 2, 3):
        qa = Qt.p_alpha(al, p)
        res.append(np.abs(Qt.pi_hat(qa) - p[:, 3:]).max(axis=1))
        res.append(np.abs(Qt.pi_hat_alpha(al, qa, a) - Mt.pi_alpha(al, p, a)).max(axis=1))
    out.append(assert_item(ctx, "quot.projections", "pi = pi_hat o p_alpha and pi_alpha = pi_hat_alpha o p_alpha",
                           np.max(res, axis=0), 1e-12))

    rng = ctx.rng("quot.forms_descend")
    p = sample_points(rng, m, n)
    V = rng.standard_normal((m, d))
    res = []
    for al in (1, 2, 3):
        qa, Va = Qt.p_alpha(al, p), Qt.p_alpha(al, V)
        res.append(Qt.omega_hat(al, qa, Va) - F.omega_eval(al, p, V))
        res.append(Qt.eta_hat(al, qa, Va, a) - F.eta_eval(al, p, V, a))
        res.append(np.abs(Qt.xi_hat(al, qa, a) - Qt.p_alpha(al, H.xi_field(al, p, a))).max(axis=1))
    out.append(assert_item(ctx, "quot.forms_descend",
                           "omega_alpha, eta_alpha and xi_alpha descend to M / R^2",
                           np.max(np.abs(res), axis=0), 1e-12))

    rng = ctx.rng("quot.section_image")
    z = Mt.sample_ball(rng, m, n)
    res = [Qt.section_h(al, z)[:, 0] + 0.5 * (Qt.section_h(al, z)[:, 1:] ** 2).sum(1) for al in (1, 2, 3)]
    out.append(assert_item(ctx, "quot.section_image", "h_alpha(z) lies in N_alpha = {(-|w|^2 / 2, w)}",
                           np.max(np.abs(res), axis=0), 1e-12))

    rng = ctx.rng("quot.section_table")
    z = Mt.sample_ball(rng, m, n)
    res = []
    for al in (1, 2, 3):
        got, want = Qt.section_pushforward_table(al, z)
        res.append(np.abs(got - want).max(axis=(1, 2, 3)))
    out.append(assert_item(ctx, "quot.section_table",
                           "h_alpha_* of v_k, J_1 v_k, J_2 v_k, J_3 v_k against the tabulated quotient vectors",
                           np.max(res, axis=0), 1e-10))

    rng = ctx.rng("quot.section_horizontality", use_a=False)
    z = Mt.sample_ball(rng, ctx.count(200), n)
    X = rng.standard_normal(z.shape)

    def defect(be):
        vals = []
        for al in (1, 2, 3):
            for zi, Xi in zip(z, X):
                _, jac = G.get_backend(be).d1(lambda y, al=al: Qt.section_h(al, y), zi)
                vals.append(Qt.omega_hat(al, Qt.section_h(al, zi), jac @ Xi))
        return vals

    out.append(measure_item(ctx, "quot.section_horizontality",
                            "omega_hat_alpha on h_alpha_* X (tangency of the section to the quotient of D)",
                            both_backends(defect), a=False))

    rng = ctx.rng("quot.phi_hom", use_a=False)
    q1, q2 = _quotient_points(rng, m, n), _quotient_points(rng, m, n)
    res = np.abs(Qt.phi_iso(Qt.quotient_mul(1, q1, q2)) - Qt.n_mul(Qt.phi_iso(q1), Qt.phi_iso(q2))).max(axis=1)
    out.append(assert_item(ctx, "quot.phi_hom", "phi: M / R^2 -> N is a homomorphism", res, 1e-12, a=False))

    rng = ctx.rng("quot.phi_omega", use_a=False)
    q = _quotient_points(rng, m, n)
    V = rng.standard_normal(q.shape)
    res = Qt.omega_N(Qt.phi_iso(q), Qt.phi_iso_pushforward(V)) - Qt.omega_hat(1, q, V)
    out.append(assert_item(ctx, "quot.phi_omega", "phi^* omega_N = omega_hat_1", res, 1e-10, a=False))

    rng = ctx.rng("quot.phi_eta")
    q = _quotient_points(rng, m, n)
    V = rng.standard_normal(q.shape)
    res = Qt.eta_N(Qt.phi_iso(q), Qt.phi_iso_pushforward(V), a) - Qt.eta_hat(1, q, V, a)
    out.append(assert_item(ctx, "quot.phi_eta", "phi^* eta_N = eta_hat_1", res, 1e-10))

    rng = ctx.rng("quot.anti_holomorphy", use_a=False)
    U = rng.standard_normal((m, 4 * n))
    res = np.abs(Qt.phi_hat(F.j_hat(1, U)) - Qt.j_prime_C(Qt.phi_hat(U))).max(axis=1)
    out.append(assert_item(ctx, "quot.anti_holomorphy", "phi_hat_* J_1 = J'_C phi_hat_* with J'_C v = conj(i) v",
                           res, 1e-10, a=False))

    rng = ctx.rng("quot.unitary_invariance")
    res = []
    for _ in range(max(1, m // 10)):
        Ur = Qt.unitary_real(Qt.random_unitary(rng, 2 * n))
        y = Mt.sample_ball(rng, 10, n)
        X, Y = rng.standard_normal((2, 10, 4 * n))
        g0 = np.einsum("mi,mij,mj->m", X, Qt.gram_N(y, a), Y)
        g1 = np.einsum("mi,mij,mj->m", X @ Ur.T, Qt.gram_N(y @ Ur.T, a), Y @ Ur.T)
        res.append(g1 - g0)
    out.append(assert_item(ctx, "quot.unitary_invariance", "g_N is invariant under U(2n)",
                           np.concatenate(res), 1e-10))

    rng = ctx.rng("quot.antimetric")
    z = Mt.sample_ball(rng, ctx.count(200), n)

    def signed(be, sign):
        vals = []
        for zi in z:
            pulled, ga = antimetric_grams(zi, a, be)
            vals.append(np.abs(pulled - sign * ga).max())
        return vals

    for sign, tag in ((-1.0, "minus"), (1.0, "plus")):
        out.append(measure_item(
            ctx, f"quot.antimetric_{tag}",
            f"(psi o tau_1)^* g_N against {'-' if sign < 0 else '+'}g_a",
            both_backends(lambda be, s=sign: signed(be, s))))

    if n > BOCHNER_MAX_N:
        return out

    rng = ctx.rng("quot.bochner_gN")
    y = Mt.sample_ball(rng, ctx.count(100), n, radius=1.5)
    J = Qt.complex_i(n)
    gN = lambda x: Qt.gram_N(x, a)  # noqa: E731
    res = {be: [G.bochner_tensor(gN, J, yi, be) for yi in y] for be in ("fd", "dual")}
    nablas = [b.nabla_J for b in res["dual"]]
    out.append(measure_item(
        ctx, "quot.bochner_gN", "Bochner tensor norm of g_N on C^2n (valid only where g_N is Kaehler)",
        {be: [b.norm for b in bs] for be, bs in res.items()},
        extra={"nabla_J_max": max(nablas), "kaehler": all(b.reliable for b in res["dual"])}))
    return out
