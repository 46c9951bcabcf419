"""Quaternion, quaternionic vector and quaternionic matrix algebra.

Quaternions are stored scalar-first as ``[w, x, y, z]`` meaning
``w + x i + y j + z k``.  Array functions operate on the last axis and
broadcast over leading axes; a quaternionic n-vector is an array of shape
``(..., n, 4)`` and an ``n x n`` quaternionic matrix has shape ``(n, n, 4)``.

The array functions are written with the arithmetic shims of
:mod:`hklab.dual`, so they also accept :class:`~hklab.dual.HyperDual`
inputs and can be differentiated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dual as D

ONE = np.array([1.0, 0.0, 0.0, 0.0])
I = np.array([0.0, 1.0, 0.0, 0.0])
J = np.array([0.0, 0.0, 1.0, 0.0])
K = np.array([0.0, 0.0, 0.0, 1.0])
UNITS = (I, J, K)  # i_1, i_2, i_3

UNIT_TOL = 1e-12


# -- array level ------------------------------------------------------------

def _structure_constants():
    # C[a, b] = e_a e_b in the basis 1, i, j, k
    C = np.zeros((4, 4, 4))
    table = {(1, 2): (3, 1), (2, 3): (1, 1), (3, 1): (2, 1)}
    for a in range(4):
        C[0, a, a] = C[a, 0, a] = 1.0
    for a in range(1, 4):
        C[a, a, 0] = -1.0
    for (a, b), (c, s) in table.items():
        C[a, b, c] = s
        C[b, a, c] = -s
    return C


_MUL = _structure_constants()


def qmul(p, q):
    """Hamilton product of quaternion arrays ``p`` and ``q``."""
    if not (D.is_dual(p) or D.is_dual(q)):
        return np.einsum("...a,abc,...b->...c", p, _MUL, q)
    p0, p1, p2, p3 = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    q0, q1, q2, q3 = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    return D.stack(
        [
            p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3,
            p0 * q1 + p1 * q0 + p2 * q3 - p3 * q2,
            p0 * q2 - p1 * q3 + p2 * q0 + p3 * q1,
            p0 * q3 + p1 * q2 - p2 * q1 + p3 * q0,
        ],
        axis=-1,
    )


_CONJ = np.array([1.0, -1.0, -1.0, -1.0])


def qconj(q):
    return q * _CONJ


def qnorm2(q):
    return (q * q).sum(axis=-1)


def qnorm(q):
    return np.sqrt(qnorm2(np.asarray(q)))


def qinv(q):
    q = np.asarray(q, dtype=float)
    return qconj(q) / qnorm2(q)[..., None]


def exp_unit(alpha, theta):
    """``exp(i_alpha * theta)`` for ``alpha`` in 1..3; ``theta`` may be an
    array or a :class:`~hklab.dual.HyperDual`."""
    c, s = D.cos(theta), D.sin(theta)
    zero = 0.0 * c
    comps = [c, zero, zero, zero]
    comps[alpha] = s
    return D.stack(comps, axis=-1)


def im_part(q):
    return q[..., 1:]


def herm_inner(z, w):
    """Quaternionic Hermitian product ``sum_k conj(z_k) w_k``.

    ``z`` and ``w`` have shape ``(..., n, 4)``; the result has shape
    ``(..., 4)``.
    """
    if np.shape(D.value(z))[-2:] != np.shape(D.value(w))[-2:]:
        raise ValueError("quaternionic vectors have different lengths")
    return qmul(qconj(z), w).sum(axis=-2)


def right_mul(z, q):
    """``z q`` for a quaternionic vector ``z`` and a scalar quaternion ``q``."""
    q = q if D.is_dual(q) else np.asarray(q, dtype=float)
    if D.is_dual(q):
        return qmul(z, q.reshape(q.shape[:-1] + (1, 4)))
    return qmul(z, q[..., None, :])


def left_mul(q, z):
    q = np.asarray(q, dtype=float)
    return qmul(q[..., None, :], z)


def mat_vec(A, z):
    """``A z`` with ``A`` of shape ``(n, n, 4)`` acting on the left."""
    A = np.asarray(A, dtype=float)
    return qmul(A, z[..., None, :, :]).sum(axis=-2)


def mat_mul(A, B):
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    return qmul(A[:, :, None, :], B[None, :, :, :]).sum(axis=1)


def mat_conj_t(A):
    return qconj(np.swapaxes(np.asarray(A, dtype=float), 0, 1))


def mat_identity(n):
    out = np.zeros((n, n, 4))
    out[np.arange(n), np.arange(n), 0] = 1.0
    return out


def symplectic_residual(A):
    """Largest entry of ``A^* A - I``."""
    A = np.asarray(A, dtype=float)
    return float(np.abs(mat_mul(mat_conj_t(A), A) - mat_identity(A.shape[0])).max())


def left_matrix(q):
    """Real 4x4 matrix of ``x -> q x``."""
    return np.stack([qmul(np.asarray(q, float), e) for e in np.eye(4)], axis=-1)


def right_matrix(q):
    """Real 4x4 matrix of ``x -> x q``."""
    return np.stack([qmul(e, np.asarray(q, float)) for e in np.eye(4)], axis=-1)


def right_matrix_n(q, n):
    """Real ``4n x 4n`` matrix of right multiplication by ``q`` on ``H^n``."""
    return np.kron(np.eye(n), right_matrix(q))


def sp_matrix(A):
    """Real ``4n x 4n`` matrix of ``z -> A z``."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    out = np.zeros((4 * n, 4 * n))
    for r in range(n):
        for c in range(n):
            out[4 * r:4 * r + 4, 4 * c:4 * c + 4] = left_matrix(A[r, c])
    return out


def to_flat(z):
    return z.reshape(z.shape[:-2] + (z.shape[-2] * 4,))


def from_flat(x):
    return x.reshape(x.shape[:-1] + (x.shape[-1] // 4, 4))


def so3_from_unit(alpha):
    """Rotation ``(a_{bc})`` with ``alpha i_b conj(alpha) = sum_c a_{bc} i_c``."""
    alpha = np.asarray(alpha, dtype=float)
    if np.any(np.abs(qnorm(alpha) - 1.0) > UNIT_TOL):
        raise ValueError("so3_from_unit needs a unit quaternion")
    return np.stack([qmul(qmul(alpha, u), qconj(alpha))[..., 1:] for u in UNITS], axis=-2)


def random_unit(rng, size=None):
    shape = (4,) if size is None else (size, 4)
    q = rng.standard_normal(shape)
    return q / qnorm(q)[..., None]


def random_sp_n(seed, n, max_tries=10):
    """Seeded random element of Sp(n) by quaternionic Gram-Schmidt.

    Columns are orthonormalized for the Hermitian product with right scalar
    coefficients, so that ``A^* A = I``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    for _ in range(max_tries):
        M = rng.standard_normal((n, n, 4))
        cols = []
        ok = True
        for c in range(n):
            v = M[:, c, :]
            for u in cols:
                v = v - right_mul(u, herm_inner(u, v))
            nv = np.sqrt(qnorm2(v).sum())
            if nv < 1e-8:
                ok = False
                break
            cols.append(v / nv)
        if ok:
            A = np.stack(cols, axis=1)
            # one re-orthogonalization pass keeps the residual near 1e-16
            cols2 = []
            for c in range(n):
                v = A[:, c, :]
                for u in cols2:
                    v = v - right_mul(u, herm_inner(u, v))
                cols2.append(v / np.sqrt(qnorm2(v).sum()))
            return np.stack(cols2, axis=1)
    raise RuntimeError("random_sp_n: degenerate draws")


# -- value types ------------------------------------------------------------

@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, a):
        a = np.asarray(a, dtype=float)
        return cls(*map(float, a))

    def to_array(self):
        return np.array([self.w, self.x, self.y, self.z])

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return quat_mul(self, other)
        return Quaternion.from_array(self.to_array() * float(other))

    def __rmul__(self, other):
        return Quaternion.from_array(self.to_array() * float(other))

    def __add__(self, other):
        return Quaternion.from_array(self.to_array() + other.to_array())

    def __sub__(self, other):
        return Quaternion.from_array(self.to_array() - other.to_array())

    def __neg__(self):
        return Quaternion.from_array(-self.to_array())

    def conj(self):
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self):
        return float(qnorm(self.to_array()))

    def inverse(self):
        return Quaternion.from_array(qinv(self.to_array()))

    def imag(self):
        return np.array([self.x, self.y, self.z])

    def isclose(self, other, tol=1e-12):
        return bool(np.abs(self.to_array() - other.to_array()).max() <= tol)


@dataclass(frozen=True)
class UnitQuaternion(Quaternion):
    """Quaternion of norm one (checked at construction)."""

    def __post_init__(self):
        if abs(self.norm() - 1.0) > UNIT_TOL:
            raise ValueError(f"not a unit quaternion: |q| = {self.norm()!r}")


@dataclass(frozen=True)
class QVector:
    """Quaternionic n-vector stored as an ``(n, 4)`` array."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float).reshape(-1, 4)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def n(self):
        return self.entries.shape[0]

    def norm2(self):
        return float(qnorm2(self.entries).sum())

    def __add__(self, other):
        return QVector(self.entries + other.entries)

    def right_mul(self, q):
        qa = q.to_array() if isinstance(q, Quaternion) else q
        return QVector(right_mul(self.entries, qa))


@dataclass(frozen=True)
class QMatrix:
    """``n x n`` quaternionic matrix acting by left multiplication."""

    entries: np.ndarray
    symplectic: bool = False

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float)
        if arr.ndim != 3 or arr.shape[0] != arr.shape[1] or arr.shape[2] != 4:
            raise ValueError("QMatrix entries must have shape (n, n, 4)")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        if self.symplectic and symplectic_residual(arr) > 1e-10:
            raise ValueError("matrix flagged symplectic fails A^*A = I")

    @classmethod
    def identity(cls, n):
        return cls(mat_identity(n), symplectic=True)

    @property
    def n(self):
        return self.entries.shape[0]

    def __matmul__(self, other):
        if isinstance(other, QMatrix):
            return QMatrix(mat_mul(self.entries, other.entries),
                           self.symplectic and other.symplectic)
        return QVector(mat_vec(self.entries, other.entries))

    def conj_t(self):
        return QMatrix(mat_conj_t(self.entries), self.symplectic)

    def symplectic_residual(self):
        return symplectic_residual(self.entries)


def quat_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    return Quaternion.from_array(qmul(p.to_array(), q.to_array()))


def herm_inner_q(z: QVector, w: QVector) -> Quaternion:
    """Value-type wrapper of :func:`herm_inner`."""
    if z.n != w.n:
        raise ValueError("quaternionic vectors have different lengths")
    return Quaternion.from_array(herm_inner(z.entries, w.entries))
