"""Quaternion algebra, Sp(1) -> SO(3), group axioms of M and the E(M) action."""

from __future__ import annotations

import numpy as np

from .. import heisenberg as H
from .. import quat as Q
from .core import assert_item

TOL = 1e-12


def _quats(rng, m):
    return rng.standard_normal((m, 4))


def audit_algebra(ctx):
    out = []
    m = ctx.count()
    n = ctx.n

    rng = ctx.rng("quat.relations", use_a=False)
    one, i, j, k = Q.ONE, Q.I, Q.J, Q.K
    rel = [
        Q.qmul(i, i) + one, Q.qmul(j, j) + one, Q.qmul(k, k) + one,
        Q.qmul(Q.qmul(i, j), k) + one,
        Q.qmul(i, j) - k, Q.qmul(j, k) - i, Q.qmul(k, i) - j,
        Q.qmul(j, i) + k,
    ]
    p, q = _quats(rng, m), _quats(rng, m)
    conj_rule = Q.qconj(Q.qmul(p, q)) - Q.qmul(Q.qconj(q), Q.qconj(p))
    out.append(assert_item(
        ctx, "quat.relations", "unit relations i^2 = j^2 = k^2 = ijk = -1 and conj(pq) = conj(q) conj(p)",
        np.concatenate([np.abs(np.array(rel)).max(axis=1), np.abs(conj_rule).max(axis=1)]), TOL, a=False))

    rng = ctx.rng("quat.associativity", use_a=False)
    p, q, r = _quats(rng, m), _quats(rng, m), _quats(rng, m)
    res = Q.qmul(Q.qmul(p, q), r) - Q.qmul(p, Q.qmul(q, r))
    out.append(assert_item(ctx, "quat.associativity", "quaternion product is associative",
                           np.abs(res).max(axis=1), TOL, a=False))

    rng = ctx.rng("quat.norm", use_a=False)
    p, q = _quats(rng, m), _quats(rng, m)
    res = Q.qnorm(Q.qmul(p, q)) - Q.qnorm(p) * Q.qnorm(q)
    out.append(assert_item(ctx, "quat.norm", "|pq| = |p| |q|", res, TOL, a=False))

    rng = ctx.rng("quat.so3_hom", use_a=False)
    al, be = Q.random_unit(rng, m), Q.random_unit(rng, m)
    Ra, Rb = Q.so3_from_unit(al), Q.so3_from_unit(be)
    Rab = Q.so3_from_unit(Q.qmul(al, be))
    # (a_bc) acts on row vectors: the matrix of alpha beta is R_beta R_alpha,
    # i.e. alpha -> R_alpha^T is the homomorphism
    res_hom = np.abs(Rab - Rb @ Ra).max(axis=(1, 2))
    eye = np.eye(3)
    res_orth = np.abs(np.einsum("...ji,...jk->...ik", Ra, Ra) - eye).max(axis=(1, 2))
    res_det = np.abs(np.linalg.det(Ra) - 1.0)
    res_kernel = np.abs(Q.so3_from_unit(-al) - Ra).max(axis=(1, 2))
    out.append(assert_item(
        ctx, "quat.so3_hom", "alpha -> rotation of Im H is a homomorphism onto SO(3) with kernel +-1",
        np.concatenate([res_hom, res_orth, res_det, res_kernel]), TOL, a=False))

    rng = ctx.rng("quat.sp_n", use_a=False)
    worst = []
    for _ in range(min(m, 200)):
        A = Q.random_sp_n(rng, n)
        z = rng.standard_normal((n, 4))
        w = rng.standard_normal((n, 4))
        ip = Q.herm_inner(Q.mat_vec(A, z), Q.mat_vec(A, w)) - Q.herm_inner(z, w)
        worst.append(max(Q.symplectic_residual(A), float(np.abs(ip).max())))
    out.append(assert_item(ctx, "quat.sp_n", "Sp(n) preserves the quaternionic hermitian product",
                           worst, TOL, a=False))

    d = H.dim(n)
    rng = ctx.rng("group.axioms", use_a=False)
    p, q, r = (rng.standard_normal((m, d)) for _ in range(3))
    e = H.identity(n)
    res = np.concatenate([
        np.abs(H.m_mul(H.m_mul(p, q), r) - H.m_mul(p, H.m_mul(q, r))).max(axis=1),
        np.abs(H.m_mul(p, e) - p).max(axis=1),
        np.abs(H.m_mul(e, p) - p).max(axis=1),
        np.abs(H.m_mul(p, H.m_inv(p))).max(axis=1),
        np.abs(H.m_mul(H.m_inv(p), p)).max(axis=1),
    ])
    out.append(assert_item(ctx, "group.axioms", "associativity, identity and inverses of the group law on M",
                           res, TOL, a=False))

    rng = ctx.rng("group.center", use_a=False)
    p = rng.standard_normal((m, d))
    c = np.zeros((m, d))
    c[:, :3] = rng.standard_normal((m, 3))
    res = np.abs(H.m_mul(p, c) - H.m_mul(c, p)).max(axis=1)
    out.append(assert_item(ctx, "group.center", "the R^3 factor is central", res, TOL, a=False))

    rng = ctx.rng("em.action", use_a=False)
    worst = []
    ident = H.EMElement.identity(n)
    for _ in range(m):
        h1 = H.EMElement.random(rng, n)
        h2 = H.EMElement.random(rng, n)
        p = rng.standard_normal((8, d))
        comp = np.abs(H.em_act(h1, H.em_act(h2, p)) - H.em_act(h1 @ h2, p)).max()
        inv = np.abs(H.em_act(H.em_inverse(h1), H.em_act(h1, p)) - p).max()
        idn = np.abs(H.em_act(ident, p) - p).max()
        # left translations by M are automorphisms of the Carnot structure:
        # h(p q) = h(p) * (linear part of h)(q)
        q = rng.standard_normal((8, d))
        lin = H.EMElement.linear(h1.A, h1.alpha)
        hom = np.abs(H.em_act(h1, H.m_mul(p, q)) - H.m_mul(H.em_act(h1, p), H.em_act(lin, q))).max()
        worst.append(max(comp, inv, idn, hom))
    out.append(assert_item(ctx, "em.action",
                           "E(M) acts on M: composition, inverses, identity and compatibility with the group law",
                           worst, TOL, a=False))
    return out
