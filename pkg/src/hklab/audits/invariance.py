"""Invariance of f, eta and d eta_1 o J_1 under R^3 x| Sp(n) Sp(1), the
transformation law of J under it and the translation counterexample."""

from __future__ import annotations

import numpy as np

from .. import forms as F
from .. import heisenberg as H
from .. import quat as Q
from .core import assert_item, sample_points

PER_H = 10


def _linear_elements(rng, n, count, with_sp1=True):
    for _ in range(count):
        A = Q.random_sp_n(rng, n)
        alpha = Q.random_unit(rng) if with_sp1 else Q.ONE
        yield H.EMElement(rng.standard_normal(3), np.zeros((n, 4)), A, alpha)


def _deta_j1(p, X, Y, a):
    return F.d_eta_eval(1, p, F.j_on_D(1, p, X), Y, a)


def _pulled_deta_j1(h, p, X, Y, a):
    act = lambda q: H.em_act(h, q)  # noqa: E731
    hp = act(p)
    return _deta_j1(hp, F.pushforward(act, p, X), F.pushforward(act, p, Y), a)


def audit_invariance(ctx):
    n, a, m = ctx.n, ctx.a, ctx.count()
    out = []
    count = max(1, m // PER_H)

    rng = ctx.rng("inv.f")
    res = []
    for h in _linear_elements(rng, n, count):
        p = sample_points(rng, PER_H, n)
        res.append(F.f_eval(H.em_act(h, p), a) - F.f_eval(p, a))
    out.append(assert_item(ctx, "inv.f", "f is invariant under R^3 x| Sp(n) Sp(1)",
                           np.concatenate(res), 1e-12))

    rng = ctx.rng("inv.eta_sp_n")
    res = []
    for h in _linear_elements(rng, n, count, with_sp1=False):
        p = sample_points(rng, PER_H, n)
        V = rng.standard_normal(p.shape)
        got = F.pullback_eta(lambda q, h=h: H.em_act(h, q), p, V, a)
        res.append(np.abs(got - F.eta_vec(p, V, a)).max(axis=1))
    out.append(assert_item(ctx, "inv.eta_sp_n", "h^* eta_alpha = eta_alpha for h in R^3 x Sp(n)",
                           np.concatenate(res), 1e-10))

    rng = ctx.rng("inv.deta_j1")
    res = []
    for h in _linear_elements(rng, n, count):
        p = sample_points(rng, PER_H, n)
        X = F.horizontal_lift(p, rng.standard_normal((PER_H, 4 * n)))
        Y = F.horizontal_lift(p, rng.standard_normal((PER_H, 4 * n)))
        res.append(_pulled_deta_j1(h, p, X, Y, a) - _deta_j1(p, X, Y, a))
    out.append(assert_item(ctx, "inv.deta_j1",
                           "d eta_1 o J_1 on D is invariant under R^3 x| Sp(n) Sp(1)",
                           np.concatenate(res), 1e-10))

    rng = ctx.rng("inv.j_transform")
    res = []
    for h in _linear_elements(rng, n, count):
        p = sample_points(rng, PER_H, n)
        X = F.horizontal_lift(p, rng.standard_normal((PER_H, 4 * n)))
        act = lambda q, h=h: H.em_act(h, q)  # noqa: E731
        hp = act(p)
        hX = F.pushforward(act, p, X)
        R = h.rotation()
        worst = np.zeros(PER_H)
        for be in (1, 2, 3):
            lhs = F.pushforward(act, p, F.j_on_D(be, p, X))
            rhs = sum(R[be - 1, ga - 1] * F.j_on_D(ga, hp, hX) for ga in (1, 2, 3))
            worst = np.maximum(worst, np.abs(lhs - rhs).max(axis=1))
        res.append(worst)
    out.append(assert_item(ctx, "inv.j_transform",
                           "h_* J_beta = sum_gamma a_beta_gamma J_gamma h_* on D",
                           np.concatenate(res), 1e-10))

    rng = ctx.rng("inv.translation_witness")
    p = sample_points(rng, m, n)
    X = F.horizontal_lift(p, rng.standard_normal((m, 4 * n)))
    Y = F.horizontal_lift(p, rng.standard_normal((m, 4 * n)))
    u = np.zeros((n, 4))
    u[0, 0] = 1.0
    h = H.EMElement.translation(np.zeros(3), u)
    diff = _pulled_deta_j1(h, p, X, Y, a) - _deta_j1(p, X, Y, a)
    out.append(assert_item(ctx, "inv.translation_witness",
                           "translation by e_1 does not preserve d eta_1 o J_1",
                           diff, 0.01, comparison="sup>"))
    return out
