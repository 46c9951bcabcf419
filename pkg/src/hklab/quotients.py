"""Quotients of M by two-dimensional central subgroups and the complex
Heisenberg group N.

``M / R^2`` (for ``alpha`` in 1..3 the subgroup spanned by the two central
directions other than ``t_alpha``) is stored as the flat array
``[t_alpha, x_1, ..., x_4n]`` with the law
``(s, z)(s', z') = (s + s' - Im_alpha<z, z'>, z + z')``.

The complex Heisenberg group ``N = R x C^{2n}`` uses real coordinates
``[t, y_1, ..., y_4n]`` with ``zeta_m = y_{2m-1} + i y_{2m}`` and the law
``(t, zeta)(t', zeta') = (t + t' - Im(conj(zeta) . zeta'), zeta + zeta')``.
A quaternionic coordinate ``x_1 + i x_2 + j x_3 + k x_4`` is split as
``z + w j`` with ``z = x_1 + i x_2``, ``w = x_3 + i x_4``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import dual as D
from . import forms as F
from . import heisenberg as H
from . import metric as Mt
from . import quat as Q


# -- M / R^2 ------------------------------------------------------------------

@dataclass(frozen=True)
class QuotientPoint:
    """A point ``(t_alpha, z)`` of ``M / R^2`` for the ``alpha``-th choice of
    the central plane."""

    alpha: int
    t: float
    z: np.ndarray

    def to_array(self):
        return np.concatenate([[self.t], np.asarray(self.z, dtype=float).ravel()])

    @classmethod
    def from_array(cls, alpha, q):
        q = np.asarray(q, dtype=float)
        return cls(alpha, float(q[0]), q[1:].copy())


def p_alpha(alpha, p):
    """Quotient map ``M -> M / R^2`` keeping ``t_alpha``."""
    return D.concatenate([p[..., alpha - 1:alpha], p[..., 3:]], axis=-1)


def quotient_mul(alpha, q1, q2):
    n = (np.shape(q1)[-1] - 1) // 4
    K = F.k_matrices(n)[alpha - 1]
    x1, x2 = q1[..., 1:], q2[..., 1:]
    s = q1[..., 0] + q2[..., 0] - np.einsum("...j,jk,...k->...", x1, K, x2)
    return np.concatenate([s[..., None], x1 + x2], axis=-1)


def pi_hat(q):
    return q[..., 1:]


def pi_hat_alpha(alpha, q, a):
    """``(t_alpha, z) -> z exp(-i_alpha a t_alpha)``."""
    z = q[..., 1:]
    zq = z.reshape(z.shape[:-1] + (z.shape[-1] // 4, 4))
    out = Q.right_mul(zq, Q.exp_unit(alpha, -a * q[..., 0]))
    return out.reshape(z.shape)


def omega_hat(alpha, q, V):
    """``omega_hat_alpha = dt_alpha + Im_alpha<z, dz>`` on ``M / R^2``
    (its pullback by ``p_alpha`` is ``omega_alpha``)."""
    n = (np.shape(D.value(q))[-1] - 1) // 4
    K = F.k_matrices(n)[alpha - 1]
    return V[..., 0] + D.einsum("...j,jk,...k->...", q[..., 1:], K, V[..., 1:])


def xi_hat(alpha, q, a):
    """Image of ``xi_alpha`` in ``M / R^2``: ``d/dt_alpha + a z i_alpha``."""
    z = q[..., 1:]
    zq = z.reshape(z.shape[:-1] + (z.shape[-1] // 4, 4))
    dz = Q.right_mul(zq, Q.UNITS[alpha - 1]).reshape(z.shape) * a
    return np.concatenate([np.ones(z.shape[:-1] + (1,)), dz], axis=-1)


def eta_hat(alpha, q, V, a):
    return omega_hat(alpha, q, V) / omega_hat(alpha, q, xi_hat(alpha, q, a))


def section_h(alpha, z):
    """``h_alpha(z) = (-|z|^2 / 2, z i_alpha)``."""
    zq = z.reshape(z.shape[:-1] + (z.shape[-1] // 4, 4))
    zi = Q.right_mul(zq, Q.UNITS[alpha - 1]).reshape(z.shape)
    return D.concatenate([D.expand_dims(-0.5 * (z * z).sum(-1), -1), zi], axis=-1)


def in_n_alpha(alpha, q, tol=0.0):
    """Membership in ``N_alpha = {(-|w|^2/2, w)}``."""
    w = q[..., 1:]
    return np.abs(q[..., 0] + 0.5 * (w * w).sum(-1)) <= tol


def _quotient_image(alpha, V):
    """Image under ``p_alpha_*`` of a tangent vector of M."""
    return p_alpha(alpha, V)


def _barred(alpha_keep, V):
    """Tangent vector of ``M / R^2`` with the central component dropped."""
    out = p_alpha(alpha_keep, V).copy()
    out[..., 0] = 0.0
    return out


# For each alpha: images of (v, J_1 v, J_2 v, J_3 v) as (sign, name) with
# name in {"v", "w", "u", "s"}; a name equal to the kept direction keeps its
# central coefficient, the others are the barred vectors.
SECTION_TABLE = {
    1: ((-1, "w"), (1, "v"), (-1, "s"), (1, "u")),
    2: ((-1, "u"), (1, "s"), (1, "v"), (-1, "w")),
    3: ((-1, "s"), (-1, "u"), (1, "w"), (1, "v")),
}
_NAME_ROW = {"v": 0, "w": 1, "u": 2, "s": 3}


def section_pushforward_table(alpha, z):
    """Pushforwards ``h_alpha_*(J_beta v_k)`` (``J_0 = id``) next to the
    tabulated quotient vectors, both as arrays ``(..., n, 4, 1 + 4n)``.

    The tabulated vectors are the basis fields of ``D`` evaluated at the
    source point ``(0, z)``; a vector named after the kept direction keeps
    its central coefficient and the other two lose it.
    """
    z = np.asarray(z, dtype=float)
    n = z.shape[-1] // 4
    p = Mt.point_over(z)
    basis = F.d_basis(p)
    got = np.zeros(z.shape[:-1] + (n, 4, 1 + 4 * n))
    want = np.zeros_like(got)
    for k in range(n):
        vk = np.zeros_like(z)
        vk[..., 4 * k:4 * k + 4] = z[..., 4 * k:4 * k + 4]
        for beta in range(4):
            X = vk if beta == 0 else F.j_hat(beta, vk)
            got[..., k, beta, :] = D.jvp(lambda y: section_h(alpha, y), z, X)
            sign, name = SECTION_TABLE[alpha][beta]
            V = basis[..., 4 * k + _NAME_ROW[name], :]
            kept = name == "v" or _NAME_ROW[name] == alpha
            img = _quotient_image(alpha, V) if kept else _barred(alpha, V)
            want[..., k, beta, :] = sign * img
    return got, want


def section_horizontality_defect(alpha, z, X):
    """``omega_hat_alpha(h_alpha_* X)`` at ``h_alpha(z)``."""
    q = section_h(alpha, z)
    V = D.jvp(lambda y: section_h(alpha, y), z, X)
    return omega_hat(alpha, q, V)


# -- the lift of a map of H^n through the section N_0 ----------------------------

def n0_section(x):
    """``N_0``-coordinates: ``(-|z|^2/2)(1, 1, 1)``."""
    r = -0.5 * (x * x).sum(axis=-1)
    return D.stack([r, r, r], axis=-1)


def lift_map(hmap):
    """Lift of ``hmap: H^n -> H^n`` to M through ``N_0`` and the central
    action: ``(t, z) = t . (s(z), z) -> t . (s(h z), h z)``."""

    def lifted(p):
        t = p[..., :3]
        z = p[..., 3:]
        hz = hmap(z)
        return D.concatenate([t - n0_section(z) + n0_section(hz), hz], axis=-1)

    return lifted


def linear_isometry(A, alpha):
    """``z -> A z conj(alpha)`` on flat coordinates of ``H^n``."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    M = Q.sp_matrix(A) @ Q.right_matrix_n(Q.qconj(alpha), n)

    def hmap(z):
        return D.einsum("ij,...j->...i", M, z)

    hmap.matrix = M
    return hmap


# -- the complex Heisenberg group N ---------------------------------------------

def _ci(n2):
    """Real matrix of multiplication by ``i`` on ``C^{n2}``."""
    return np.kron(np.eye(n2), np.array([[0.0, -1.0], [1.0, 0.0]]))


@lru_cache(maxsize=None)
def complex_i(n):
    """Multiplication by ``i`` on ``C^{2n}`` in real coordinates."""
    M = _ci(2 * n)
    M.setflags(write=False)
    return M


@lru_cache(maxsize=None)
def _im_form(n):
    """``S`` with ``Im(conj(a) . b) = a^T S b``."""
    S = np.kron(np.eye(2 * n), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    S.setflags(write=False)
    return S


def n_mul(P, Qp):
    n = (np.shape(P)[-1] - 1) // 4
    y1, y2 = P[..., 1:], Qp[..., 1:]
    t = P[..., 0] + Qp[..., 0] - np.einsum("...j,jk,...k->...", y1, _im_form(n), y2)
    return np.concatenate([t[..., None], y1 + y2], axis=-1)


def omega_N(P, V):
    """``omega_N = dt + Im(conj(zeta) . d zeta)``."""
    n = (np.shape(D.value(P))[-1] - 1) // 4
    return V[..., 0] + D.einsum("...j,jk,...k->...", P[..., 1:], _im_form(n), V[..., 1:])


def xi_N(P, a):
    """Generator of ``rho(t)(s, zeta) = (t + s, exp(i a t) zeta)``."""
    n = (np.shape(D.value(P))[-1] - 1) // 4
    y = P[..., 1:]
    dy = a * D.einsum("ij,...j->...i", complex_i(n), y)
    return D.concatenate([1.0 + 0.0 * y[..., :1], dy], axis=-1)


def eta_N(P, V, a):
    return omega_N(P, V) / omega_N(P, xi_N(P, a))


def f_N(P, a):
    return 1.0 / omega_N(P, xi_N(P, a))


def d_eta_N(P, X, Y, a):
    """``d eta_N = df ^ omega_N + f d omega_N`` with
    ``d omega_N(X, Y) = 2 Im(conj(X) . Y)`` and ``df = -2 a f^2 y . dy``."""
    n = (np.shape(D.value(P))[-1] - 1) // 4
    f = f_N(P, a)
    y = P[..., 1:]
    dfX = -2.0 * a * f * f * (y * X[..., 1:]).sum(axis=-1)
    dfY = -2.0 * a * f * f * (y * Y[..., 1:]).sum(axis=-1)
    dom = 2.0 * D.einsum("...j,jk,...k->...", X[..., 1:], _im_form(n), Y[..., 1:])
    return dfX * omega_N(P, Y) - dfY * omega_N(P, X) + f * dom


def lift_N(P, v):
    """Horizontal lift to ``ker omega_N`` of ``v`` in ``C^{2n}``."""
    n = (np.shape(D.value(P))[-1] - 1) // 4
    dt = -D.einsum("...j,jk,...k->...", P[..., 1:], _im_form(n), v)
    return D.concatenate([D.expand_dims(dt, -1), v + 0.0 * P[..., 1:]], axis=-1)


def j_N(v):
    """``J_N``: multiplication by ``i`` on ``C^{2n}``."""
    n = np.shape(D.value(v))[-1] // 4
    return D.einsum("ij,...j->...i", complex_i(n), v)


def j_prime_C(v):
    """Anti-structure ``J'_C(v) = conj(i) v``."""
    return -j_N(v)


@lru_cache(maxsize=None)
def normalization_constant_N(n=1):
    """``c_N`` with ``d eta_N(J_N X, Y) = c_N (X . Y)`` at the origin."""
    P = np.zeros(1 + 4 * n)
    e = np.zeros(4 * n)
    e[0] = 1.0
    return float(d_eta_N(P, lift_N(P, j_N(e)), lift_N(P, e), 1.0))


def gram_N(y, a):
    """Gram matrix of ``g_N`` at ``zeta`` (real coordinates ``y``), built
    from ``d eta_N(J_N lift X, lift Y)`` and normalized at the origin."""
    n = np.shape(D.value(y))[-1] // 4
    P = D.concatenate([0.0 * y[..., :1], y], axis=-1)
    Pb = D.expand_dims(P, -2)
    E = np.eye(4 * n)
    L = lift_N(Pb, E + 0.0 * Pb[..., 1:])
    JL = lift_N(Pb, complex_i(n).T + 0.0 * Pb[..., 1:])
    Pbb = D.expand_dims(Pb, -2)
    G = d_eta_N(Pbb, D.expand_dims(JL, -2), D.expand_dims(L, -3), a)
    return G / normalization_constant_N(n)


# -- the isomorphism phi and the map phi_hat ---------------------------------------

@lru_cache(maxsize=None)
def phi_hat_matrix(n):
    """Real matrix of ``phi_hat(z + w j) = (z, conj(w))``."""
    M = np.zeros((4 * n, 4 * n))
    for k in range(n):
        M[2 * k, 4 * k] = 1.0
        M[2 * k + 1, 4 * k + 1] = 1.0
        M[2 * n + 2 * k, 4 * k + 2] = 1.0
        M[2 * n + 2 * k + 1, 4 * k + 3] = -1.0
    M.setflags(write=False)
    return M


def phi_hat(x):
    n = np.shape(D.value(x))[-1] // 4
    return D.einsum("ij,...j->...i", phi_hat_matrix(n), x)


psi = phi_hat  # the map H^n -> C^{2n} covered by phi


def phi_iso(q):
    """``phi(t, z + w j) = (t, (z, conj(w)))`` from ``M / R^2`` (alpha = 1)."""
    return D.concatenate([q[..., :1], phi_hat(q[..., 1:])], axis=-1)


def phi_iso_pushforward(V):
    return phi_iso(V)  # phi is linear in these coordinates


def anti_isometry_gram(z, a):
    """Gram matrix of ``(psi o tau_1)^* g_N`` at ``z`` and of ``g_a``."""
    n = np.shape(z)[-1] // 4
    T = Mt.dtau_matrix(1, a, z)  # rows: dtau(e_i)
    P = phi_hat_matrix(n)
    TP = np.einsum("...ia,ba->...ib", T, P)  # rows: d(psi tau)(e_i)
    GN = gram_N(phi_hat(Mt.tau(1, a, z)), a)
    pulled = np.einsum("...ia,...ab,...jb->...ij", TP, GN, TP)
    return pulled, Mt.gram_lift(z, a)


def random_unitary(rng, m):
    Z = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    Qm, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Qm * (d / np.abs(d))


def unitary_real(U):
    """Real ``2m x 2m`` matrix of a complex ``m x m`` matrix."""
    m = U.shape[0]
    out = np.zeros((2 * m, 2 * m))
    out[0::2, 0::2] = U.real
    out[0::2, 1::2] = -U.imag
    out[1::2, 0::2] = U.imag
    out[1::2, 1::2] = U.real
    return out
