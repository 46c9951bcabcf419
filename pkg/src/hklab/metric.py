"""The metric family ``g_a`` on ``H^n`` and the objects it is compared with.

``g_a`` is assembled from the contact data on M: for tangent vectors
``X_hat, Y_hat`` of ``H^n`` at ``z``,

    g_a(X_hat, Y_hat) = d eta_alpha(J_alpha lift(X_hat), lift(Y_hat)) / c

evaluated at any point ``p`` over ``z``.  The constant ``c`` is measured once
at the origin (:func:`normalization_constant`) so that ``g_a(0)`` is the
identity.  The closed form ``f(z) * delta`` is implemented separately and
compared against the lift-based evaluator.

The module also provides the twist maps ``tau_alpha``, the orbit maps
``pi_alpha`` of the solvable groups, the 2-forms ``Omega_alpha`` they
descend to and the fundamental forms ``Theta_alpha = g o J_alpha``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import dual as D
from . import forms as F
from . import heisenberg as H
from . import quat as Q


@lru_cache(maxsize=None)
def normalization_constant(n=1):
    """``c`` with ``d omega_1(J_1 X, Y) = c g_H(pi_* X, pi_* Y)``, measured at
    the origin on the first coordinate vector."""
    p = H.identity(n)
    e = np.zeros(4 * n)
    e[0] = 1.0
    X = F.horizontal_lift(p, e)
    return float(F.d_omega_eval(1, p, F.j_on_D(1, p, X), X))


def point_over(z, t=None):
    """A point ``(t, z)`` of M over ``z`` (flat coordinates)."""
    if t is None:
        t = 0.0 * z[..., :3]
    else:
        t = np.broadcast_to(np.asarray(t, dtype=float), np.shape(D.value(z))[:-1] + (3,))
    return D.concatenate([t, z], axis=-1)


def lift_frame(p):
    """Horizontal lifts of the coordinate vectors of ``H^n`` at ``p``:
    shape ``(..., 4n, 3 + 4n)``."""
    n = H.n_of(p)
    E = np.eye(4 * n)
    pb = D.expand_dims(p, -2)
    return F.horizontal_lift(pb, E + 0.0 * pb[..., 3:])


def gram_lift(z, a, alpha=1, t=None):
    """Gram matrix of ``g_a`` at ``z`` through the lift construction."""
    n = np.shape(D.value(z))[-1] // 4
    p = point_over(z, t)
    L = lift_frame(p)  # rows: lifts of e_i
    pb = D.expand_dims(p, -2)
    JL = F.horizontal_lift(pb, F.j_matrix(alpha, n).T + 0.0 * pb[..., 3:])
    M = F.d_eta_matrix(alpha, p, a)
    G = D.einsum("...ia,...ab,...jb->...ij", JL, M, L)
    return G / normalization_constant(n)


def gram_closed(z, a):
    """Closed form ``f(z) * identity``."""
    n = np.shape(D.value(z))[-1] // 4
    f = 1.0 / (1.0 + a * (z * z).sum(axis=-1))
    return D.einsum("...,ij->...ij", f, np.eye(4 * n))


@dataclass(frozen=True)
class MetricField:
    """``g_a`` on ``H^n``.

    ``route='lift'`` evaluates through the contact forms; ``route='closed'``
    uses ``f(z) * identity``.
    """

    n: int
    a: float
    route: str = "lift"
    alpha: int = 1

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("a must be positive")
        if self.route not in ("lift", "closed"):
            raise ValueError("route must be 'lift' or 'closed'")

    @property
    def dim(self):
        return 4 * self.n

    def gram(self, z, t=None):
        if self.route == "closed":
            return gram_closed(z, self.a)
        return gram_lift(z, self.a, self.alpha, t)

    __call__ = gram

    def eval(self, z, X, Y, t=None):
        G = self.gram(z, t)
        return D.einsum("...i,...ij,...j->...", X, G, Y)


def metric_eval(g: MetricField, z, X, Y, t=None):
    return g.eval(z, X, Y, t)


def conformal_identity_residual(n, a, samples, rng):
    """Largest ``|g_lift(X, Y) - f(z) X.Y|`` over seeded points and vectors."""
    z = sample_ball(rng, samples, n)
    X = rng.standard_normal((samples, 4 * n))
    Y = rng.standard_normal((samples, 4 * n))
    lift = MetricField(n, a).eval(z, X, Y)
    closed = (X * Y).sum(-1) / (1.0 + a * (z * z).sum(-1))
    return np.abs(lift - closed)


def sample_ball(rng, size, n, radius=2.0, min_coord=1e-3):
    """Uniform points of the ball of the given radius in ``R^{4n}``, redrawn
    where some ``|z_k| < min_coord``."""
    out = np.empty((size, 4 * n))
    filled = 0
    while filled < size:
        m = size - filled
        g = rng.standard_normal((m, 4 * n))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        r = radius * rng.random(m) ** (1.0 / (4 * n))
        pts = g * r[:, None]
        blocks = np.linalg.norm(pts.reshape(m, n, 4), axis=2)
        pts = pts[(blocks >= min_coord).all(axis=1)]
        out[filled:filled + len(pts)] = pts
        filled += len(pts)
    return out


# -- twist maps ---------------------------------------------------------------

def _as_z(x):
    return x.reshape(x.shape[:-1] + (x.shape[-1] // 4, 4))


def _as_flat(z):
    return z.reshape(z.shape[:-2] + (z.shape[-2] * 4,))


def tau(alpha, a, x):
    """``tau_alpha(z) = z exp(i_alpha a |z|^2 / 2)`` on flat coordinates."""
    r2 = (x * x).sum(axis=-1)
    return _as_flat(Q.right_mul(_as_z(x), Q.exp_unit(alpha, 0.5 * a * r2)))


def tau_inv(alpha, a, x):
    r2 = (x * x).sum(axis=-1)
    return _as_flat(Q.right_mul(_as_z(x), Q.exp_unit(alpha, -0.5 * a * r2)))


def dtau(alpha, a, x, X):
    """Differential of ``tau_alpha``:
    ``(X + a (z . X) z i_alpha) exp(i_alpha a |z|^2 / 2)``."""
    r2 = (x * x).sum(axis=-1)
    dot = (x * X).sum(axis=-1)
    zi = _as_flat(Q.right_mul(_as_z(x), Q.UNITS[alpha - 1]))
    inner = X + a * dot[..., None] * zi
    return _as_flat(Q.right_mul(_as_z(inner), Q.exp_unit(alpha, 0.5 * a * r2)))


def dtau_matrix(alpha, a, x):
    n = np.shape(D.value(x))[-1] // 4
    E = np.eye(4 * n)
    xb = D.expand_dims(x, -2)
    return dtau(alpha, a, xb, E + 0.0 * xb)  # row i: image of e_i


@dataclass(frozen=True)
class TwistMap:
    alpha: int
    a: float

    def __call__(self, x):
        return tau(self.alpha, self.a, x)

    def inverse(self, x):
        return tau_inv(self.alpha, self.a, x)

    def differential(self, x, X):
        return dtau(self.alpha, self.a, x, X)


# -- orbit maps of the solvable groups and the descended forms ----------------

def pi_alpha(alpha, p, a):
    """Orbit map of ``R_alpha``: ``(s, u) -> u exp(-i_alpha a s_alpha)``."""
    s = p[..., alpha - 1]
    u = _as_z(p[..., 3:])
    return _as_flat(Q.right_mul(u, Q.exp_unit(alpha, -a * s)))


def a_rep(alpha, a, t):
    """``A_t^(alpha) = exp(i_alpha t a)``."""
    return Q.exp_unit(alpha, a * t)


def l_matrix(alpha, a, u):
    """Matrix of ``W -> pi_alpha_*(lift W)`` at ``(0, u)``:
    ``I + a b c^T`` with ``b = u i_alpha`` and ``c^T W = Im_alpha<u, W>``."""
    n = np.shape(D.value(u))[-1] // 4
    b = _as_flat(Q.right_mul(_as_z(u), Q.UNITS[alpha - 1]))
    c = D.einsum("...j,jk->...k", u, F.k_matrices(n)[alpha - 1])
    return np.eye(4 * n) + a * D.einsum("...i,...j->...ij", b, c)


def l_inverse(alpha, a, u):
    """Sherman-Morrison inverse ``I - a b c^T / (1 + a |u|^2)``."""
    n = np.shape(D.value(u))[-1] // 4
    b = _as_flat(Q.right_mul(_as_z(u), Q.UNITS[alpha - 1]))
    c = D.einsum("...j,jk->...k", u, F.k_matrices(n)[alpha - 1])
    denom = 1.0 + a * (u * u).sum(axis=-1)
    outer = D.einsum("...i,...j,...->...ij", b, c, 1.0 / denom)
    return np.eye(4 * n) - a * outer


def omega_descended_matrix(alpha, a, u):
    """Matrix of ``Omega_alpha`` at ``u``, evaluated from ``p = (0, u)``.

    A vector ``U`` at ``u`` is the image of the horizontal lift of
    ``L^{-1} U``; ``Omega_alpha(U, V) = d eta_alpha`` of those lifts.
    """
    Linv = l_inverse(alpha, a, u)  # [i, j]: column j is L^{-1} e_j
    p = point_over(u)
    lifts = F.horizontal_lift(D.expand_dims(p, -2), D.swapaxes(Linv, -1, -2))
    # row j of lifts: horizontal lift of L^{-1} e_j
    M = F.d_eta_matrix(alpha, p, a)
    return D.einsum("...ia,...ab,...jb->...ij", lifts, M, lifts)


def omega_descended(alpha, a, u, U, V):
    M = omega_descended_matrix(alpha, a, u)
    return D.einsum("...i,...ij,...j->...", U, M, V)


def omega_descended_from(alpha, a, u, U, V, t):
    """``Omega_alpha`` evaluated from the second preimage ``t . (0, u)``
    (``t`` a scalar for ``rho_alpha(t)`` or a triple acting through
    :func:`hklab.heisenberg.rho_act`).

    Preimages of ``U, V`` in ``D`` are found by solving with the numerical
    Jacobian of ``pi_alpha`` restricted to horizontal lifts there.
    """
    u = np.asarray(u, dtype=float)
    n = u.shape[-1] // 4
    p0 = point_over(u)
    t = np.asarray(t, dtype=float)
    if t.ndim == 0:
        t = np.eye(3)[alpha - 1] * t
    p = H.rho_act(alpha, t, p0, a)
    frame = lift_frame(p)  # (4n, dim)
    Jpi = D.jacobian(lambda q: pi_alpha(alpha, q, a), p)  # (4n, dim)
    Mlin = Jpi @ frame.T  # column j: pi_alpha_* of lift e_j
    W = np.linalg.solve(Mlin, np.stack([U, V], axis=-1))
    X = F.horizontal_lift(p, W[:, 0])
    Y = F.horizontal_lift(p, W[:, 1])
    return float(F.d_eta_eval(alpha, p, X, Y, a))


def pi_alpha_pullback_residual(alpha, a, p, X, Y):
    """``|Omega_alpha(pi_alpha_* X, pi_alpha_* Y) - d eta_alpha(X, Y)|`` for
    arbitrary (not necessarily horizontal) tangent vectors of M."""
    u = pi_alpha(alpha, p, a)
    U = D.jvp(lambda q: pi_alpha(alpha, q, a), p, X)
    V = D.jvp(lambda q: pi_alpha(alpha, q, a), p, Y)
    return np.abs(omega_descended(alpha, a, u, U, V) - F.d_eta_eval(alpha, p, X, Y, a))


def j_descended_matrix(alpha, a, u):
    """``J_hat_alpha = L J_alpha L^{-1}`` acting on column vectors at ``u``
    (the structure induced on ``H^n`` through ``pi_alpha``)."""
    n = np.shape(u)[-1] // 4
    Jm = F.j_matrix(alpha, n)
    return l_matrix(alpha, a, u) @ Jm @ l_inverse(alpha, a, u)


# -- fundamental 2-forms ------------------------------------------------------

def theta_matrix(alpha, g: MetricField, z):
    """``Theta_alpha(X, Y) = g(X, J_alpha Y)`` as a matrix."""
    G = g.gram(z)
    Jm = F.j_matrix(alpha, g.n)
    return D.einsum("...ik,kj->...ij", G, Jm)


def theta_eval(alpha, g: MetricField, z, X, Y):
    return D.einsum("...i,...ij,...j->...", X, theta_matrix(alpha, g, z), Y)


def theta_via_omega_matrix(alpha, a, x):
    """``tau_alpha^* Omega_alpha / c`` as a matrix at ``x``."""
    n = np.shape(D.value(x))[-1] // 4
    T = dtau_matrix(alpha, a, x)  # row i: image of e_i
    M = omega_descended_matrix(alpha, a, tau(alpha, a, x))
    return D.einsum("...ia,...ab,...jb->...ij", T, M, T) / normalization_constant(n)
