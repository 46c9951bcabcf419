"""Carnot-Caratheodory length estimates for horizontal curves.

Horizontal curves ``sigma = (t, z)`` on ``[0, 1]`` are generated from a
seeded control ``z' = u(s)`` (a random trigonometric polynomial); the
central part follows ``t_alpha' = -Im_alpha<z, z'>`` so that
``omega(sigma') = 0``.  The length is ``L = int sqrt(f(z)) |z'| ds``, the
length of ``sigma'`` for ``d eta(J ., .) / c`` on D, accumulated in the same
RK4 integration.
"""

from __future__ import annotations

import numpy as np

from .. import forms as F
from .core import CCBound, assert_item

STEPS = 400
TOL = 1e-4


class Controls:
    """``u(s) = sum_k (b_k cos(2 pi k s) + c_k sin(2 pi k s)) + d`` per curve."""

    def __init__(self, rng, count, n, modes=4):
        scale = np.exp(rng.uniform(np.log(0.01), np.log(10.0), count))
        self.b = rng.standard_normal((count, modes, 4 * n)) * scale[:, None, None]
        self.c = rng.standard_normal((count, modes, 4 * n)) * scale[:, None, None]
        self.d = rng.standard_normal((count, 4 * n)) * scale[:, None]
        # every fourth curve is closed (no drift term): endpoint z = 0
        self.d[::4] = 0.0
        self.k = 2 * np.pi * np.arange(1, modes + 1)

    def __call__(self, s):
        cs = np.cos(self.k * s)[None, :, None]
        sn = np.sin(self.k * s)[None, :, None]
        return (self.b * cs + self.c * sn).sum(axis=1) + self.d


def _rhs(n, a, p, zdot):
    x = p[:, 3:]
    dt = -np.einsum("mj,ajk,mk->ma", x, F.k_matrices(n), zdot)
    f = F.f_eval(p, a)
    speed = np.sqrt(f) * np.linalg.norm(zdot, axis=1)
    return np.concatenate([dt, zdot, speed[:, None]], axis=1), np.concatenate([dt, zdot], axis=1)


def integrate_horizontal(control, count, n, a, steps=STEPS):
    """RK4 integration of the horizontal curves; returns endpoints, lengths
    and the worst ``|omega(sigma')| / (1 + |sigma| |sigma'|)`` met along the
    way."""
    y = np.zeros((count, 3 + 4 * n + 1))
    h = 1.0 / steps
    worst = np.zeros(count)

    def f(s, yy):
        p = yy[:, :-1]
        out, vel = _rhs(n, a, p, control(s))
        scale = 1.0 + np.linalg.norm(p, axis=1) * np.linalg.norm(vel, axis=1)
        return out, np.abs(F.omega_vec(p, vel)).max(axis=1) / scale

    for i in range(steps):
        s = i * h
        k1, w1 = f(s, y)
        k2, _ = f(s + h / 2, y + h / 2 * k1)
        k3, _ = f(s + h / 2, y + h / 2 * k2)
        k4, _ = f(s + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        worst = np.maximum(worst, w1)
    return y[:, :-1], y[:, -1], worst


def lower_bound(x, n, a):
    """``log(1 + |x_1| + ... + |x_n|) / (n A)``."""
    blocks = np.linalg.norm(x.reshape(x.shape[:-1] + (n, 4)), axis=-1).sum(axis=-1)
    return np.log1p(blocks) / (n * CCBound(a).A)


def upper_bound(gamma_norm, a):
    """``log(|gamma| + sqrt(1 + |gamma|^2)) / B``."""
    return np.arcsinh(gamma_norm) / CCBound(a).B


def radial_length(gamma, a, steps=STEPS):
    """Length of ``mu(s) = (0, s gamma)``, ``s`` in ``[0, 1]``, by RK4
    quadrature, and the worst relative ``|omega(mu')|`` along it."""
    m, d = gamma.shape
    n = d // 4
    L = np.zeros(m)
    worst = np.zeros(m)
    h = 1.0 / steps
    vel = np.concatenate([np.zeros((m, 3)), gamma], axis=1)

    def speed(s):
        p = np.concatenate([np.zeros((m, 3)), s * gamma], axis=1)
        return np.sqrt(F.f_eval(p, a)) * np.linalg.norm(gamma, axis=1), p

    for i in range(steps):
        s = i * h
        k1, p = speed(s)
        k2, _ = speed(s + h / 2)
        k4, _ = speed(s + h)
        L += h / 6 * (k1 + 4 * k2 + k4)
        scale = 1.0 + np.linalg.norm(p, axis=1) * np.linalg.norm(vel, axis=1)
        worst = np.maximum(worst, np.abs(F.omega_vec(p, vel)).max(axis=1) / scale)
    return L, worst


def audit_cc_bounds(ctx):
    n, a, m = ctx.n, ctx.a, ctx.count()
    out = []
    cc = CCBound(a)
    out.append(assert_item(ctx, "cc.constants", "A = max(1, sqrt a) >= 1 and 0 < B = sqrt(min(1, a)) <= 1",
                           [max(0.0, 1.0 - cc.A), max(0.0, cc.B - 1.0), 0.0 if cc.B > 0 else 1.0], 0.0))

    rng = ctx.rng("cc.lower_bound")
    ctrl = Controls(rng, m, n)
    end, L, worst = integrate_horizontal(ctrl, m, n, a)
    lb = lower_bound(end[:, 3:], n, a)
    ctx.add_table(f"cc_lower_n{n}_a{a:g}", ("curve", "endpoint_norm", "length", "lower_bound"),
                  [(i, float(np.linalg.norm(end[i, 3:])), L[i], lb[i]) for i in range(m)])
    out.append(assert_item(ctx, "cc.curves_horizontal", "generated curves are tangent to D",
                           worst, 1e-12))
    out.append(assert_item(ctx, "cc.lower_bound",
                           "L(sigma) >= log(1 + |x_1| + ... + |x_n|) / (n A) for horizontal sigma from 0 to x",
                           np.maximum(lb - L, 0.0), TOL))

    rng = ctx.rng("cc.upper_bound")
    dirs = rng.standard_normal((m, 4 * n))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    norms = np.exp(rng.uniform(np.log(1e-3), np.log(1e3), m))
    norms[0] = 1.0
    gamma = dirs * norms[:, None]
    Lr, worst = radial_length(gamma, a)
    ub = upper_bound(norms, a)
    ctx.add_table(f"cc_radial_n{n}_a{a:g}", ("gamma_norm", "length", "upper_bound"), zip(norms, Lr, ub))
    out.append(assert_item(ctx, "cc.radial_horizontal", "radial segments mu(s) = (0, s gamma) are horizontal",
                           worst, 1e-12))
    out.append(assert_item(ctx, "cc.upper_bound",
                           "L(mu) <= log(|gamma| + sqrt(1 + |gamma|^2)) / B for radial segments",
                           np.maximum(Lr - ub, 0.0), TOL))
    return out
