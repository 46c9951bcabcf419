"""The quaternionic Heisenberg group M = R^3 x H^n and the groups acting on it.

A point ``(t, z)`` is stored as a flat real array
``[t1, t2, t3, x1, ..., x_4n]`` with ``z_k = x_{4k-3} + i x_{4k-2} + j x_{4k-1}
+ k x_{4k}``.  Tangent vectors use the same layout (coefficients on
``d/dt1..3, d/dx1..d/dx_4n``).  The central coordinates are identified with
the imaginary quaternion ``t1 i + t2 j + t3 k``.

Group law::

    (t, z)(s, w) = (t + s - Im<z, w>, z + w)

Every function broadcasts over leading axes and accepts
:class:`~hklab.dual.HyperDual` points where that makes sense.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import dual as D
from . import quat as Q


def dim(n):
    return 3 + 4 * n


def n_of(p):
    return (np.shape(D.value(p))[-1] - 3) // 4


def split(p):
    """Split a flat point into ``t`` of shape ``(..., 3)`` and ``z`` of shape
    ``(..., n, 4)``."""
    t = p[..., :3]
    x = p[..., 3:]
    return t, x.reshape(x.shape[:-1] + (x.shape[-1] // 4, 4))


def join(t, z):
    zf = z.reshape(z.shape[:-2] + (z.shape[-2] * 4,))
    return D.concatenate([t, zf], axis=-1)


def imag_to_quat(t):
    """``(..., 3)`` -> pure imaginary quaternion ``(..., 4)``."""
    return D.concatenate([0.0 * t[..., :1], t], axis=-1)


@dataclass(frozen=True)
class MPoint:
    """A point of M with its central part ``t`` and quaternionic part ``z``."""

    t: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        t = np.array(self.t, dtype=float).reshape(3)
        z = np.array(self.z, dtype=float).reshape(-1, 4)
        t.setflags(write=False)
        z.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "z", z)

    @classmethod
    def from_array(cls, p):
        t, z = split(np.asarray(p, dtype=float))
        return cls(t, z)

    def to_array(self):
        return join(self.t, self.z)

    @property
    def n(self):
        return self.z.shape[0]


def identity(n):
    return np.zeros(dim(n))


def m_mul(p, q):
    """Group product of flat points."""
    if np.shape(D.value(p))[-1] != np.shape(D.value(q))[-1]:
        raise ValueError("points of different dimensions")
    t, z = split(p)
    s, w = split(q)
    return join(t + s - Q.im_part(Q.herm_inner(z, w)), z + w)


def m_inv(p):
    # Im<z, -z> = 0, so the inverse is just the negation
    return -p


# -- the euclidean group E(M) = M x| (Sp(n) . Sp(1)) -------------------------

@dataclass(frozen=True)
class EMElement:
    """Element ``((t, v), A . alpha)`` of E(M).

    ``t`` has shape (3,), ``v`` shape (n, 4), ``A`` shape (n, n, 4) with
    ``A`` symplectic and ``alpha`` a unit quaternion.
    """

    t: np.ndarray
    v: np.ndarray
    A: np.ndarray
    alpha: np.ndarray = field(default_factory=lambda: Q.ONE.copy())

    def __post_init__(self):
        for name, shape in (("t", (3,)), ("alpha", (4,))):
            arr = np.array(getattr(self, name), dtype=float).reshape(shape)
            object.__setattr__(self, name, arr)
        v = np.array(self.v, dtype=float).reshape(-1, 4)
        A = np.array(self.A, dtype=float)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "A", A)
        if A.shape != (v.shape[0], v.shape[0], 4):
            raise ValueError("A must be an n x n quaternionic matrix")
        if Q.symplectic_residual(A) > 1e-10:
            raise ValueError("A is not in Sp(n)")
        if abs(Q.qnorm(self.alpha) - 1.0) > Q.UNIT_TOL:
            raise ValueError("alpha is not a unit quaternion")

    @property
    def n(self):
        return self.v.shape[0]

    @classmethod
    def identity(cls, n):
        return cls(np.zeros(3), np.zeros((n, 4)), Q.mat_identity(n))

    @classmethod
    def translation(cls, t, v):
        v = np.asarray(v, dtype=float).reshape(-1, 4)
        return cls(t, v, Q.mat_identity(v.shape[0]))

    @classmethod
    def linear(cls, A, alpha):
        A = np.asarray(A, dtype=float)
        return cls(np.zeros(3), np.zeros((A.shape[0], 4)), A, alpha)

    @classmethod
    def random(cls, rng, n, translate=True):
        t = rng.standard_normal(3) if translate else np.zeros(3)
        v = rng.standard_normal((n, 4)) if translate else np.zeros((n, 4))
        return cls(t, v, Q.random_sp_n(rng, n), Q.random_unit(rng))

    def rotation(self):
        """The SO(3) matrix ``(a_{bc})`` induced by ``alpha``."""
        return Q.so3_from_unit(self.alpha)

    def linear_part(self, p):
        """``(alpha s conj(alpha), A z conj(alpha))``."""
        s, z = split(p)
        ab = Q.qconj(self.alpha)
        s_rot = Q.qmul(Q.qmul(self.alpha, imag_to_quat(s)), ab)[..., 1:]
        zz = Q.right_mul(Q.mat_vec(self.A, z), ab)
        return join(s_rot, zz)

    def __matmul__(self, other):
        return em_compose(self, other)


def em_act(h: EMElement, p):
    """Action of E(M) on M.

    ``h = ((t, v), A . alpha)`` maps ``(s, z)`` to the left translate by
    ``(t, v)`` of ``(alpha s conj(alpha), A z conj(alpha))``::

        (t + alpha s conj(alpha) - Im<v, A z conj(alpha)>, v + A z conj(alpha))

    so that ``h^* omega = alpha omega conj(alpha)`` and ``em_act`` is a group
    action for the semidirect product law of :func:`em_compose`.
    """
    tv = join(h.t, h.v)
    return m_mul(tv, h.linear_part(p))


def em_compose(h1: EMElement, h2: EMElement) -> EMElement:
    """Product in E(M): ``(h1 h2) p = h1 (h2 p)``."""
    lin = h1.linear_part(join(h2.t, h2.v))
    tv = m_mul(join(h1.t, h1.v), lin)
    t, v = split(tv)
    return EMElement(t, v, Q.mat_mul(h1.A, h2.A), Q.qmul(h1.alpha, h2.alpha))


def em_inverse(h: EMElement) -> EMElement:
    Ainv = Q.mat_conj_t(h.A)
    ainv = Q.qconj(h.alpha)
    lin = EMElement.linear(Ainv, ainv)
    t, v = split(lin.linear_part(-join(h.t, h.v)))
    return EMElement(t, v, Ainv, ainv)


# -- the solvable groups R_alpha ---------------------------------------------

def rho_element(alpha, t_alpha, a, n):
    """``rho_alpha(t_alpha)`` as an element of E(M).

    It translates the center by ``t_alpha`` along ``i_alpha`` and acts through
    the unit quaternion ``exp(-i_alpha a t_alpha)``; on ``H^n`` this is
    ``z -> z exp(i_alpha a t_alpha)``.
    """
    t = np.zeros(3)
    t[alpha - 1] = t_alpha
    q = Q.exp_unit(alpha, -a * float(t_alpha))
    return EMElement(t, np.zeros((n, 4)), Q.mat_identity(n), q)


def rho_act(alpha, t, p, a):
    """Action of ``R_alpha`` with parameter triple ``t = (t1, t2, t3)``.

    ``t_alpha`` acts through ``rho_alpha`` (rotation of ``z`` by
    ``exp(i_alpha a t_alpha)`` and the induced rotation by ``2 a t_alpha`` of
    the complementary central plane); the other two components are central
    translations applied afterwards.
    """
    if alpha not in (1, 2, 3):
        raise ValueError("alpha must be 1, 2 or 3")
    t = np.asarray(t, dtype=float)
    n = n_of(p)
    out = em_act(rho_element(alpha, t[alpha - 1], a, n), p)
    other = t.copy()
    other[alpha - 1] = 0.0
    return m_mul(join(other, np.zeros((n, 4))), out)


def xi_field(alpha, p, a):
    """Infinitesimal generator ``xi_alpha`` of ``rho_alpha`` at ``p``.

    ``xi_1 = d/dt1 + 2a (s3 d/dt2 - s2 d/dt3) + a z i`` and cyclically.
    """
    s, z = split(p)
    b, c = alpha % 3, (alpha + 1) % 3  # cyclic successors, zero-based
    comps = [0.0 * s[..., 0]] * 3
    comps[alpha - 1] = comps[alpha - 1] + 1.0
    comps[b] = 2.0 * a * s[..., c]
    comps[c] = -2.0 * a * s[..., b]
    dt = D.stack(comps, axis=-1)
    dz = Q.right_mul(z, Q.UNITS[alpha - 1]) * a
    return join(dt, dz)


def central_basis(alpha, n):
    """``d/dt_alpha`` as a flat tangent vector."""
    e = np.zeros(dim(n))
    e[alpha - 1] = 1.0
    return e


def xi_bracket_central(alpha, beta, p, a):
    """Analytic bracket ``[xi_alpha, d/dt_beta]``.

    The coefficients of ``xi_alpha`` depend on the central coordinates only
    through the linear rotation term, so the bracket is ``-d/dt_beta`` applied
    to those coefficients.
    """
    n = n_of(p)
    eps = np.zeros(3)
    eps[beta - 1] = 1.0
    # xi_alpha is affine in s: its derivative along d/dt_beta is xi(s + e) - xi(s)
    base = np.zeros(dim(n))
    shifted = base.copy()
    shifted[:3] = eps
    return -(xi_field(alpha, shifted, a) - xi_field(alpha, base, a))
