"""Contact forms on M, their exterior derivatives, the distribution D and the
hypercomplex structure on it.

With ``omega = omega_1 i + omega_2 j + omega_3 k = dt + Im<z, dz>`` the
coefficient of ``x_j dx_k`` in ``omega_alpha`` is
``K_alpha[j, k] = Im_alpha(conj(e_j) e_k)`` for the quaternion units
``e_1..e_4 = 1, i, j, k`` (block diagonal over the ``n`` quaternionic
coordinates).  Hence

* ``omega_alpha(V) = V_t[alpha] + x^T K_alpha V_x``
* ``d omega_alpha(X, Y) = 2 X_x^T K_alpha Y_x``
* ``eta_alpha = f omega_alpha`` with ``f = 1 / (1 + a |z|^2)``
* ``d eta_alpha = df ^ omega_alpha + f d omega_alpha``,
  ``df = -2 a f^2 sum_m x_m dx_m``.

Convention: ``d theta(X, Y) = X theta(Y) - Y theta(X) - theta([X, Y])`` and
``(alpha ^ beta)(X, Y) = alpha(X) beta(Y) - alpha(Y) beta(X)``, no factor 1/2.

All evaluators broadcast over leading axes and accept
:class:`~hklab.dual.HyperDual` inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import dual as D
from . import heisenberg as H
from . import quat as Q

HORIZONTAL_TOL = 1e-12


@lru_cache(maxsize=None)
def _k_blocks():
    e = np.eye(4)
    K = np.zeros((3, 4, 4))
    for j in range(4):
        for k in range(4):
            K[:, j, k] = Q.qmul(Q.qconj(e[j]), e[k])[1:]
    K.setflags(write=False)
    return K


@lru_cache(maxsize=None)
def k_matrices(n):
    """``(3, 4n, 4n)`` antisymmetric matrices ``K_alpha``."""
    K = np.stack([np.kron(np.eye(n), k) for k in _k_blocks()])
    K.setflags(write=False)
    return K


def _x(p):
    return p[..., 3:]


def pi_star(V):
    """Projection of a tangent vector of M to ``T H^n``."""
    return V[..., 3:]


def norm2_z(p):
    x = _x(p)
    return (x * x).sum(axis=-1)


# -- omega ----------------------------------------------------------------

def omega_coeffs(p):
    """Coefficient rows of ``omega_1, omega_2, omega_3`` at ``p``: shape
    ``(..., 3, 3 + 4n)``."""
    n = H.n_of(p)
    zpart = D.einsum("...j,ajk->...ak", _x(p), k_matrices(n))
    eye = np.broadcast_to(np.eye(3), np.shape(D.value(zpart))[:-1] + (3,))
    return D.concatenate([eye + 0.0 * zpart[..., :3], zpart], axis=-1)


def omega_vec(p, V):
    """``(omega_1(V), omega_2(V), omega_3(V))``."""
    n = H.n_of(p)
    return V[..., :3] + D.einsum("...j,ajk,...k->...a", _x(p), k_matrices(n), pi_star(V))


def omega_eval(alpha, p, V):
    return omega_vec(p, V)[..., alpha - 1]


def omega_quat(p, V):
    """``omega(V)`` as an imaginary quaternion ``(..., 4)``."""
    return H.imag_to_quat(omega_vec(p, V))


# -- f and eta ------------------------------------------------------------

def f_eval(p, a):
    """Conformal factor ``1 / (1 + a |z|^2)``."""
    return 1.0 / (1.0 + a * norm2_z(p))


def df_coeffs(p, a):
    """Coefficients of ``df`` on ``d/dt, d/dx``."""
    f = f_eval(p, a)
    x = _x(p)
    dx = -2.0 * a * (f * f)[..., None] * x
    return D.concatenate([0.0 * dx[..., :3], dx], axis=-1)


def df_eval(p, V, a):
    f = f_eval(p, a)
    return -2.0 * a * f * f * (_x(p) * pi_star(V)).sum(axis=-1)


def eta_vec(p, V, a):
    return f_eval(p, a)[..., None] * omega_vec(p, V)


def eta_eval(alpha, p, V, a):
    return f_eval(p, a) * omega_eval(alpha, p, V)


def eta_coeffs(p, a):
    return f_eval(p, a)[..., None, None] * omega_coeffs(p)


# -- exterior derivatives -------------------------------------------------

def d_omega_eval(alpha, p, X, Y):
    """``d omega_alpha(X, Y) = 2 Im_alpha <X_z, Y_z>`` (constant coefficients;
    ``p`` is accepted for a uniform signature)."""
    n = (np.shape(D.value(X))[-1] - 3) // 4
    K = k_matrices(n)[alpha - 1]
    return 2.0 * D.einsum("...j,jk,...k->...", pi_star(X), K, pi_star(Y))


def d_omega_matrix(alpha, n):
    """Dense ``(3+4n, 3+4n)`` matrix of ``d omega_alpha``."""
    M = np.zeros((H.dim(n), H.dim(n)))
    M[3:, 3:] = 2.0 * k_matrices(n)[alpha - 1]
    return M


def d_eta_eval(alpha, p, X, Y, a):
    """``d eta_alpha(X, Y) = df(X) omega_alpha(Y) - df(Y) omega_alpha(X)
    + f d omega_alpha(X, Y)``."""
    f = f_eval(p, a)
    return (
        df_eval(p, X, a) * omega_eval(alpha, p, Y)
        - df_eval(p, Y, a) * omega_eval(alpha, p, X)
        + f * d_omega_eval(alpha, p, X, Y)
    )


def d_eta_matrix(alpha, p, a):
    """Dense matrix ``M`` with ``d eta_alpha(X, Y) = X^T M Y``."""
    n = H.n_of(p)
    df = df_coeffs(p, a)
    om = omega_coeffs(p)[..., alpha - 1, :]
    f = f_eval(p, a)
    wedge = D.einsum("...i,...j->...ij", df, om)
    wedge = wedge - D.einsum("...i,...j->...ij", om, df)
    return wedge + f[..., None, None] * d_omega_matrix(alpha, n)


# -- horizontal distribution ----------------------------------------------

def horizontal_lift(p, vhat):
    """The unique ``V`` in ``D`` at ``p`` with ``pi_* V = vhat``:
    ``V = (-Im<z, vhat>, vhat)``."""
    n = H.n_of(p)
    dt = -D.einsum("...j,ajk,...k->...a", _x(p), k_matrices(n), vhat)
    return D.concatenate([dt, vhat + 0.0 * _x(p)], axis=-1)


def is_horizontal(p, V, tol=HORIZONTAL_TOL):
    return bool(np.all(np.abs(D.value(omega_vec(p, V))) <= tol))


@dataclass(frozen=True)
class HorizontalVec:
    """A tangent vector at ``p`` annihilated by ``omega``."""

    p: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        res = np.abs(omega_vec(self.p, self.V)).max()
        scale = max(1.0, float(np.abs(self.V).max()), float(np.abs(self.p).max()) ** 2)
        if res > HORIZONTAL_TOL * scale:
            raise ValueError(f"vector is not horizontal: |omega(V)| = {res:.3e}")

    @classmethod
    def lift(cls, p, vhat):
        p = np.asarray(p, dtype=float)
        return cls(p, horizontal_lift(p, np.asarray(vhat, dtype=float)))

    def project(self):
        return pi_star(self.V)


def j_hat(alpha, vhat):
    """Standard ``J_alpha`` on ``H^n``: right multiplication by ``conj(i_alpha)``."""
    z = vhat.reshape(vhat.shape[:-1] + (vhat.shape[-1] // 4, 4))
    out = Q.right_mul(z, Q.qconj(Q.UNITS[alpha - 1]))
    return out.reshape(vhat.shape)


@lru_cache(maxsize=None)
def j_matrix(alpha, n):
    """Real ``4n x 4n`` matrix of :func:`j_hat`."""
    M = Q.right_matrix_n(Q.qconj(Q.UNITS[alpha - 1]), n)
    M.setflags(write=False)
    return M


def j_on_D(alpha, p, V):
    """``J_alpha`` on ``D``: lift of ``(pi_* V) conj(i_alpha)``."""
    return horizontal_lift(p, j_hat(alpha, pi_star(V)))


# J_gamma = sign * (d omega_beta|D)^(-1) o (d omega_alpha|D) for cyclic
# (alpha, beta, gamma); measured by :func:`measure_j_sign` and fixed here.
J_RELATION_SIGN = 1.0


def measure_j_sign(n=1, rng=None, samples=8):
    """Compare ``J_gamma`` with ``(d omega_beta|D)^(-1) o (d omega_alpha|D)``.

    Returns the sign ``s`` with ``d omega_alpha(X, Y) = s d omega_beta(J_gamma X, Y)``
    for all cyclic triples together with the worst residual of that identity.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    best = None
    for sign in (1.0, -1.0):
        worst = 0.0
        for alpha in (1, 2, 3):
            beta, gamma = alpha % 3 + 1, (alpha + 1) % 3 + 1
            p = rng.standard_normal((samples, H.dim(n)))
            X = horizontal_lift(p, rng.standard_normal((samples, 4 * n)))
            Y = horizontal_lift(p, rng.standard_normal((samples, 4 * n)))
            lhs = d_omega_eval(alpha, p, X, Y)
            rhs = sign * d_omega_eval(beta, p, j_on_D(gamma, p, X), Y)
            worst = max(worst, float(np.abs(lhs - rhs).max()))
        if best is None or worst < best[1]:
            best = (sign, worst)
    return best


# -- the basis of D built from the radial field ---------------------------

def d_basis(p):
    """Vectors ``v_k, w_k, u_k, s_k`` (k = 1..n) at ``p`` as rows of an
    array of shape ``(..., 4n, 3 + 4n)``, ordered ``v_1, w_1, u_1, s_1, v_2, ...``.

    ``v_k`` is the radial field of the k-th coordinate and
    ``w_k, u_k, s_k = |z_k|^2 d/dt_alpha + (coordinates of z_k conj(i_alpha))``.
    """
    p = np.asarray(p, dtype=float)
    n = H.n_of(p)
    _, z = H.split(p)
    batch = p.shape[:-1]
    out = np.zeros(batch + (4 * n, H.dim(n)))
    r2 = (z * z).sum(axis=-1)
    for k in range(n):
        x1, x2, x3, x4 = (z[..., k, m] for m in range(4))
        cols = slice(3 + 4 * k, 7 + 4 * k)
        out[..., 4 * k, cols] = np.stack([x1, x2, x3, x4], axis=-1)
        out[..., 4 * k + 1, cols] = np.stack([x2, -x1, -x4, x3], axis=-1)
        out[..., 4 * k + 2, cols] = np.stack([x3, x4, -x1, -x2], axis=-1)
        out[..., 4 * k + 3, cols] = np.stack([x4, -x3, x2, -x1], axis=-1)
        for alpha in (1, 2, 3):
            out[..., 4 * k + alpha, alpha - 1] = r2[..., k]
    return out


def barred_basis(p):
    """Quotient images ``w_bar_k, u_bar_k, s_bar_k``: the ``H^n`` parts of
    ``w_k, u_k, s_k`` (central coefficient dropped).  Rows of shape
    ``(..., 3n, 4n)`` ordered ``w_bar_1, u_bar_1, s_bar_1, w_bar_2, ...``."""
    B = d_basis(p)
    n = H.n_of(np.asarray(p))
    rows = [4 * k + m for k in range(n) for m in (1, 2, 3)]
    return B[..., rows, 3:]


@dataclass(frozen=True)
class DBasis:
    """The basis ``{v_k, w_k, u_k, s_k}`` of ``D`` at a base point."""

    p: np.ndarray
    vectors: np.ndarray

    @classmethod
    def at(cls, p):
        p = np.asarray(p, dtype=float)
        return cls(p, d_basis(p))

    def rank(self, tol=1e-10):
        return int(np.linalg.matrix_rank(self.vectors, tol=tol))

    def check(self):
        """Raise if the vectors are not horizontal or not independent."""
        res = np.abs(omega_vec(self.p, self.vectors)).max()
        if res > 1e-12 * max(1.0, float(np.abs(self.p).max()) ** 2):
            raise ValueError(f"basis vector not horizontal ({res:.3e})")
        n = H.n_of(self.p)
        if self.rank() < 4 * n:
            raise ValueError("basis is rank deficient (some z_k = 0)")
        return self


# -- vector-field brackets and pullbacks ----------------------------------

def lie_bracket(F, G, p):
    """``[F, G](p) = DG(p) F(p) - DF(p) G(p)`` for vector fields given as
    functions of the point."""
    p = np.asarray(p, dtype=float)
    return D.jvp(G, p, F(p)) - D.jvp(F, p, G(p))


def pushforward(fmap, p, V):
    return D.jvp(fmap, p, V)


def pullback_omega(fmap, p, V):
    """``(fmap^* omega)(V)`` as a ``(..., 3)`` vector."""
    return omega_vec(fmap(np.asarray(p, dtype=float)), pushforward(fmap, p, V))


def pullback_eta(fmap, p, V, a):
    q = fmap(np.asarray(p, dtype=float))
    return eta_vec(q, pushforward(fmap, p, V), a)
