"""Isometries of g_a: invariance under Sp(n) Sp(1), the translation
counterexample, curvature separation of the family and the lift of a map of
H^n to M through the section N_0."""

from __future__ import annotations

import numpy as np

from .. import diffgeo as G
from .. import forms as F
from .. import heisenberg as H
from .. import metric as Mt
from .. import quat as Q
from .. import quotients as Qt
from .core import assert_item, measure_item, sample_points

PER_H = 10
SEPARATION_A = (0.5, 1.0, 2.0)


def _random_linear(rng, n, with_sp1=True):
    A = Q.random_sp_n(rng, n)
    alpha = Q.random_unit(rng) if with_sp1 else Q.ONE
    return Qt.linear_isometry(A, alpha)


def riemann_norm2_at(n, a, z, backend):
    return G.curvature(Mt.MetricField(n, a), z, backend).riemann_norm2()


def audit_metric_isometry(ctx):
    n, a, m = ctx.n, ctx.a, ctx.count()
    out = []
    g = Mt.MetricField(n, a)

    rng = ctx.rng("iso.sp_invariance")
    res = []
    for _ in range(max(1, m // PER_H)):
        h = _random_linear(rng, n)
        z = Mt.sample_ball(rng, PER_H, n)
        X, Y = rng.standard_normal((2, PER_H, 4 * n))
        M = h.matrix
        res.append(g.eval(h(z), X @ M.T, Y @ M.T) - g.eval(z, X, Y))
    out.append(assert_item(ctx, "iso.sp_invariance",
                           "z -> A z conj(alpha) preserves g_a for A in Sp(n), alpha in Sp(1)",
                           np.concatenate(res), 1e-10))

    rng = ctx.rng("iso.linear_orthogonal")
    res = []
    for _ in range(max(1, m // PER_H)):
        h = _random_linear(rng, n)
        M = h.matrix
        z = Mt.sample_ball(rng, PER_H, n)
        res.append(max(np.abs(M.T @ M - np.eye(4 * n)).max(),
                       np.abs(h(np.zeros(4 * n))).max(),
                       np.abs(np.linalg.norm(h(z), axis=1) - np.linalg.norm(z, axis=1)).max()))
    out.append(assert_item(ctx, "iso.linear_orthogonal",
                           "z -> A z conj(alpha) is linear orthogonal and fixes the origin", res, 1e-12))

    rng = ctx.rng("iso.translation_witness")
    z = Mt.sample_ball(rng, m, n)
    X, Y = rng.standard_normal((2, m, 4 * n))
    u = np.zeros(4 * n)
    u[0] = 1.0
    diff = g.eval(z + u, X, Y) - g.eval(z, X, Y)
    out.append(assert_item(ctx, "iso.translation_witness", "translation z -> z + e_1 does not preserve g_a",
                           diff, 0.01, comparison="sup>"))

    z0 = np.zeros(4 * n)
    z0[0] = 1.0
    per = {be: [riemann_norm2_at(n, a, z0, be)] for be in ("fd", "dual")}
    out.append(measure_item(ctx, "iso.riemann_norm2", "|Riem(g_a)|^2 at z = (1, 0, ..., 0)", per))

    values = {}
    noise = 0.0
    for a_ in SEPARATION_A:
        fd, du = (riemann_norm2_at(n, a_, z0, be) for be in ("fd", "dual"))
        values[f"riem2_a{a_:g}"] = du
        noise = max(noise, abs(fd - du))
    sep = abs(values["riem2_a0.5"] - values["riem2_a2"])
    values["backend_noise"] = noise
    values["separation"] = sep
    ctx.add_table(f"riemann_vs_a_n{n}", ("a", "riemann_norm2"), [(a_, values[f"riem2_a{a_:g}"]) for a_ in SEPARATION_A])
    ratio = sep / noise if noise > 0 else np.inf
    out.append(assert_item(ctx, "iso.family_separation",
                           "|Riem|^2 at (1, 0, ..., 0) separates g_0.5 from g_2 by more than 10x backend noise",
                           [ratio], 10.0, comparison=">", a=False, extra=values))
    return out


def audit_lift_construction(ctx):
    n, m = ctx.n, ctx.count()
    out = []
    pi = lambda p: p[..., 3:]  # noqa: E731

    rng = ctx.rng("lift.identity", use_a=False)
    p = sample_points(rng, m, n)
    ident = Qt.lift_map(lambda z: z)
    out.append(assert_item(ctx, "lift.identity", "the lift of the identity is the identity",
                           np.abs(ident(p) - p).max(axis=1), 1e-12, a=False))

    rng = ctx.rng("lift.diagram", use_a=False)
    res = []
    for _ in range(max(1, m // PER_H)):
        h = _random_linear(rng, n)
        p = sample_points(rng, PER_H, n)
        res.append(np.abs(pi(Qt.lift_map(h)(p)) - h(pi(p))).max(axis=1))
    out.append(assert_item(ctx, "lift.diagram", "pi o h_lift = h o pi", np.concatenate(res), 0.0, a=False))

    for claim, with_sp1, locus in (
        ("lift.preserves_D_sp_n", False, "the lift of z -> A z maps D onto D"),
        ("lift.preserves_D", True, "the lift of z -> A z conj(alpha) maps D onto D"),
    ):
        rng = ctx.rng(claim, use_a=False)
        res = []
        for _ in range(max(1, m // PER_H)):
            h = _random_linear(rng, n, with_sp1)
            lifted = Qt.lift_map(h)
            p = sample_points(rng, PER_H, n)
            X = F.horizontal_lift(p, rng.standard_normal((PER_H, 4 * n)))
            res.append(np.abs(F.pullback_omega(lifted, p, X)).max(axis=1))
        out.append(assert_item(ctx, claim, locus, np.concatenate(res), 1e-9, a=False))

    rng = ctx.rng("lift.right_unit", use_a=False)
    p = sample_points(rng, m, n)
    X = F.horizontal_lift(p, rng.standard_normal((m, 4 * n)))
    alpha = Q.random_unit(rng)
    lifted = Qt.lift_map(Qt.linear_isometry(Q.mat_identity(n), alpha))
    out.append(assert_item(ctx, "lift.right_unit",
                           "the lift of right multiplication by a unit quaternion maps D into ker omega",
                           np.abs(F.pullback_omega(lifted, p, X)).max(axis=1), 1e-9, a=False))
    return out
