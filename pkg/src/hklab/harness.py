"""Reference metrics with known curvature, used to validate :mod:`hklab.diffgeo`.

Every metric is a callable ``G(x) -> (N, N)`` compatible with the
hyper-dual shims.  Complex coordinates are real pairs
``zeta_m = y_{2m-1} + i y_{2m}``.
"""

from __future__ import annotations

import numpy as np

from . import dual as D


def _outer(u, v):
    return D.einsum("...i,...j->...ij", u, v)


def _scale(s, M):
    return D.einsum("...,...ij->...ij", s, M)


def flat(N):
    E = np.eye(N)

    def G(x):
        return np.broadcast_to(E, np.shape(D.value(x))[:-1] + (N, N))

    return G


def scaled_flat(N, c):
    E = c * np.eye(N)

    def G(x):
        return np.broadcast_to(E, np.shape(D.value(x))[:-1] + (N, N))

    return G


def round_sphere(r):
    """``r^2 (d theta^2 + sin^2 theta d phi^2)``; scalar curvature ``2 / r^2``."""

    def G(x):
        th = x[..., 0]
        s = D.sin(th)
        zero = 0.0 * th
        return D.stack(
            [D.stack([zero + r * r, zero], -1), D.stack([zero, r * r * s * s], -1)], -2
        )

    return G


def conformal(phi, N):
    """``exp(2 phi(x)) delta``."""
    E = np.eye(N)

    def G(x):
        return _scale(D.exp(2.0 * phi(x)), E + 0.0 * _outer(x, x))

    return G


def complex_structure(m):
    """Multiplication by ``i`` on ``C^m`` in real coordinates."""
    return np.kron(np.eye(m), np.array([[0.0, -1.0], [1.0, 0.0]]))


def _im_form(m):
    return np.kron(np.eye(m), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def fubini_study(m):
    """Fubini-Study metric on the affine chart ``C^m`` (holomorphic sectional
    curvature 4)::

        g = [(1 + |z|^2) |X|^2 - |<z, X>|^2] / (1 + |z|^2)^2
    """
    S = _im_form(m)
    E = np.eye(2 * m)

    def G(y):
        r2 = (y * y).sum(axis=-1)
        w = D.einsum("...i,ij->...j", y, S)
        num = _scale(1.0 + r2, E + 0.0 * _outer(y, y)) - _outer(y, y) - _outer(w, w)
        return _scale(1.0 / ((1.0 + r2) * (1.0 + r2)), num)

    return G


def bergman_ball(m):
    """Bergman metric of the unit ball (holomorphic sectional curvature -4)."""
    S = _im_form(m)
    E = np.eye(2 * m)

    def G(y):
        r2 = (y * y).sum(axis=-1)
        w = D.einsum("...i,ij->...j", y, S)
        num = _scale(1.0 - r2, E + 0.0 * _outer(y, y)) + _outer(y, y) + _outer(w, w)
        return _scale(1.0 / ((1.0 - r2) * (1.0 - r2)), num)

    return G


def _block2(G1, G2):
    def G(x):
        a = G1(x[..., :2])
        b = G2(x[..., 2:])
        za = 0.0 * a
        top = D.concatenate([a, za], axis=-1)
        bot = D.concatenate([za, b], axis=-1)
        return D.concatenate([top, bot], axis=-2)

    return G


def _stereo_sphere():
    E = np.eye(2)

    def G(u):
        r2 = (u * u).sum(axis=-1)
        return _scale(4.0 / ((1.0 + r2) * (1.0 + r2)), E + 0.0 * _outer(u, u))

    return G


def _poincare_disk():
    E = np.eye(2)

    def G(v):
        r2 = (v * v).sum(axis=-1)
        return _scale(4.0 / ((1.0 - r2) * (1.0 - r2)), E + 0.0 * _outer(v, v))

    return G


def sphere_times_hyperbolic():
    """``S^2(1) x H^2(-1)``: Kaehler and conformally flat, so Bochner flat."""
    return _block2(_stereo_sphere(), _poincare_disk())


def sphere_times_plane():
    """``S^2(1) x R^2``: Kaehler but not Bochner flat."""

    def flat2(v):
        return np.eye(2) + 0.0 * _outer(v, v)

    return _block2(_stereo_sphere(), flat2)
