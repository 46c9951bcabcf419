"""Numerical Riemannian geometry for metric fields given as functions.

A metric field is any callable ``G(x) -> (N, N)`` written with the shims of
:mod:`hklab.dual` (so that it can be evaluated on hyper-dual numbers).
Derivatives come from a :class:`DiffBackend`, either central finite
differences or forward-mode hyper-dual numbers.

Index conventions (used everywhere):

* ``Gamma[i, j, k] = Gamma^i_{jk}``, ``nabla_{d_j} d_k = Gamma^i_{jk} d_i``
* ``R[i, j, k, l] = R^i_{jkl}`` with ``R(d_k, d_l) d_j = R^i_{jkl} d_i`` and
  ``R(X, Y) Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z``
* ``Ric(Y, Z) = trace(X -> R(X, Y) Z)``, so ``Ric[l, j] = sum_k R[k, j, k, l]``
* ``S = g^{jl} Ric[l, j]``

So the unit round sphere has ``g(R(X, Y) Y, X) > 0`` and scalar curvature 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import dual as D


@dataclass(frozen=True)
class DiffBackend:
    """Derivative provider.

    ``mode='fd'`` uses central differences with step ``h`` for first
    derivatives and a Richardson-extrapolated mixed central difference with
    base step ``h2`` for second derivatives.  ``mode='dual'`` uses hyper-dual
    numbers and is exact up to rounding.
    """

    mode: str = "dual"
    h: float = 1e-5
    h2: float = 2e-3

    def __post_init__(self):
        if self.mode not in ("fd", "dual"):
            raise ValueError("backend mode must be 'fd' or 'dual'")

    def d1(self, fn, x):
        """``(fn(x), dfn)`` with the derivative axis last."""
        x = np.asarray(x, dtype=float)
        if self.mode == "dual":
            out = fn(D.seed(x))
            if not D.is_dual(out):
                v = np.asarray(out, dtype=float)
                return v, np.zeros(v.shape + (x.size,))
            return out.re, np.moveaxis(out.d1, 0, -1)
        m = x.size
        steps = np.eye(m) * self.h
        pts = np.concatenate([x + steps, x - steps])
        vals = np.asarray(fn(pts), dtype=float)
        d = (vals[:m] - vals[m:]) / (2 * self.h)
        return np.asarray(fn(x), dtype=float), np.moveaxis(d, 0, -1)

    def d1_batched(self, fn, x):
        """Like :meth:`d1` for a batch of points ``x`` of shape ``(B, m)``:
        derivatives are taken along the last axis only."""
        x = np.asarray(x, dtype=float)
        m = x.shape[-1]
        eye = np.eye(m).reshape((m,) + (1,) * (x.ndim - 1) + (m,))
        if self.mode == "dual":
            seed = D.HyperDual(x, np.broadcast_to(eye, (m,) + x.shape).copy(),
                               np.zeros((0,) + x.shape), np.zeros((m, 0) + x.shape))
            out = fn(seed)
            if not D.is_dual(out):
                v = np.asarray(out, dtype=float)
                return v, np.zeros(v.shape + (m,))
            return out.re, np.moveaxis(out.d1, 0, -1)
        steps = eye * self.h
        vals = np.asarray(fn(np.concatenate([x + steps, x - steps])), dtype=float)
        d = (vals[:m] - vals[m:]) / (2 * self.h)
        return np.asarray(fn(x), dtype=float), np.moveaxis(d, 0, -1)

    def d2(self, fn, x):
        """``(fn(x), dfn, d2fn)`` with derivative axes last."""
        x = np.asarray(x, dtype=float)
        if self.mode == "dual":
            return D.hessian(fn, x)
        v, d = self.d1(fn, x)

        def mixed(h):
            m = x.size
            e = np.eye(m) * h
            pp = x + e[:, None] + e[None, :]
            pm = x + e[:, None] - e[None, :]
            mp = x - e[:, None] + e[None, :]
            mm = x - e[:, None] - e[None, :]
            pts = np.concatenate([pp, pm, mp, mm]).reshape(4 * m * m, m)
            vals = np.asarray(fn(pts), dtype=float).reshape((4, m, m) + v.shape)
            return (vals[0] - vals[1] - vals[2] + vals[3]) / (4 * h * h)

        dd = (4.0 * mixed(self.h2 / 2) - mixed(self.h2)) / 3.0
        dd = np.moveaxis(np.moveaxis(dd, 0, -1), 0, -1)
        return v, d, dd


FD = DiffBackend("fd")
DUAL = DiffBackend("dual")


def get_backend(name):
    if isinstance(name, DiffBackend):
        return name
    try:
        return {"fd": FD, "dual": DUAL}[name]
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; expected 'fd' or 'dual'") from None


# -- Christoffel symbols and curvature ----------------------------------------

def _gamma_from(g, dg):
    """``dg[..., i, j, l] = d_l g_ij``."""
    ginv = np.linalg.inv(g)
    # lowered: Gamma_{m,jk} = 1/2 (d_j g_mk + d_k g_mj - d_m g_jk)
    low = 0.5 * (
        np.einsum("...mkj->...mjk", dg) + dg - np.einsum("...jkm->...mjk", dg)
    )
    return ginv, np.einsum("...im,...mjk->...ijk", ginv, low)


def christoffel(G: Callable, x, backend=DUAL):
    """Levi-Civita connection coefficients ``Gamma^i_{jk}`` at ``x``."""
    g, dg = get_backend(backend).d1(G, x)
    _check_metric(g)
    return _gamma_from(g, dg)[1]


def _check_metric(g):
    if not np.all(np.isfinite(g)):
        raise ValueError("metric is not finite")
    if np.any(np.abs(np.linalg.det(g)) < 1e-300) or np.any(np.linalg.cond(g) > 1e14):
        raise np.linalg.LinAlgError("singular metric matrix")


@dataclass(frozen=True)
class CurvatureAtPoint:
    """Connection and curvature at one point (see module docstring for the
    index conventions)."""

    g: np.ndarray
    gamma: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float

    def lowered(self):
        """``R_{ijkl} = g_{im} R^m_{jkl}``."""
        return np.einsum("im,mjkl->ijkl", self.g, self.riemann)

    def symmetry_residual(self):
        """Worst violation of the algebraic symmetries and first Bianchi."""
        Rl = self.lowered()
        r1 = np.abs(Rl + np.swapaxes(Rl, 0, 1)).max()
        r2 = np.abs(Rl + np.swapaxes(Rl, 2, 3)).max()
        r3 = np.abs(Rl - np.transpose(Rl, (2, 3, 0, 1))).max()
        R = self.riemann
        bianchi = R + np.einsum("iklj->ijkl", R) + np.einsum("iljk->ijkl", R)
        return float(max(r1, r2, r3, np.abs(bianchi).max()))

    def riemann_norm2(self):
        """Full contraction ``R_{ijkl} R^{ijkl}``."""
        ginv = np.linalg.inv(self.g)
        Rl = self.lowered()
        Ru = np.einsum("ia,jb,kc,ld,abcd->ijkl", ginv, ginv, ginv, ginv, Rl)
        return float(np.einsum("ijkl,ijkl->", Rl, Ru))

    def ricci_norm(self):
        ginv = np.linalg.inv(self.g)
        return float(np.sqrt(abs(np.einsum("ab,cd,ac,bd->", ginv, ginv, self.ricci, self.ricci))))


def curvature(G: Callable, x, backend=DUAL) -> CurvatureAtPoint:
    """Riemann, Ricci and scalar curvature of ``G`` at ``x``."""
    g, dg, d2g = get_backend(backend).d2(G, x)
    _check_metric(g)
    ginv, gam = _gamma_from(g, dg)
    # d_l g^{im} = -g^{ia} d_l g_ab g^{bm}
    dginv = -np.einsum("ia,abl,bm->iml", ginv, dg, ginv)
    # d_l Gamma_{m,jk}
    dlow = 0.5 * (
        np.einsum("mkjl->mjkl", d2g) + np.einsum("mjkl->mjkl", d2g) - np.einsum("jkml->mjkl", d2g)
    )
    low = 0.5 * (
        np.einsum("mkj->mjk", dg) + np.einsum("mjk->mjk", dg) - np.einsum("jkm->mjk", dg)
    )
    dgam = np.einsum("iml,mjk->lijk", dginv, low) + np.einsum("im,mjkl->lijk", ginv, dlow)
    R = (
        np.einsum("kilj->ijkl", dgam)
        - np.einsum("likj->ijkl", dgam)
        + np.einsum("ikm,mlj->ijkl", gam, gam)
        - np.einsum("ilm,mkj->ijkl", gam, gam)
    )
    ric = np.einsum("kjkl->lj", R)
    S = float(np.einsum("jl,lj->", ginv, ric))
    return CurvatureAtPoint(g, gam, R, ric, S)


riemann_ricci = curvature


# -- covariant derivative of an endomorphism field ----------------------------

def nabla_endomorphism(G: Callable, Jf: Callable, x, backend=DUAL):
    """``(nabla_k J)^i_j = d_k J^i_j + Gamma^i_{km} J^m_j - Gamma^m_{kj} J^i_m``
    as an array ``[k, i, j]``."""
    be = get_backend(backend)
    gam = christoffel(G, x, be)
    Jv, dJ = be.d1(Jf, x)
    return (
        np.moveaxis(dJ, -1, 0)
        + np.einsum("ikm,mj->kij", gam, Jv)
        - np.einsum("mkj,im->kij", gam, Jv)
    )


def nabla_J(G: Callable, Jf: Callable, x, backend=DUAL):
    """Frobenius norm of the components of ``nabla J`` at ``x``."""
    return float(np.linalg.norm(nabla_endomorphism(G, Jf, x, backend)))


def constant_field(M):
    M = np.asarray(M, dtype=float)

    def field_(x):
        return np.broadcast_to(M, np.shape(D.value(x))[:-1] + M.shape)

    return field_


# -- parallel transport and holonomy ------------------------------------------

@dataclass(frozen=True)
class LoopSpec:
    """Closed polygon through ``vertices`` (first vertex is the base point),
    integrated with ``steps_per_edge`` RK4 steps on each edge."""

    vertices: np.ndarray
    steps_per_edge: int = 50

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or len(v) < 3:
            raise ValueError("a loop needs at least three vertices")
        object.__setattr__(self, "vertices", v)

    @property
    def base(self):
        return self.vertices[0]

    def edges(self):
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    @classmethod
    def rectangle(cls, base, i, j, r, steps_per_edge=50):
        """Square of side ``r`` in the ``(x_i, x_j)`` coordinate plane."""
        base = np.asarray(base, dtype=float)
        ei = np.zeros_like(base)
        ej = np.zeros_like(base)
        ei[i] = r
        ej[j] = r
        return cls(np.stack([base, base + ei, base + ei + ej, base + ej]), steps_per_edge)


@dataclass
class TransportResult:
    P: np.ndarray  # columns: transported basis vectors
    g_base: np.ndarray
    drift: float  # worst deviation of the transported Gram matrix
    orthogonality_defect: float = 0.0
    j_commutation: list = field(default_factory=list)

    @property
    def sp_deviation(self):
        return max([self.orthogonality_defect] + list(self.j_commutation))


def christoffel_batched(G: Callable, x, backend=DUAL):
    """Metric and ``Gamma^i_{jk}`` at a batch of points ``x`` of shape ``(B, N)``."""
    g, dg = get_backend(backend).d1_batched(G, x)
    _check_metric(g)
    return g, _gamma_from(g, dg)[1]


def parallel_transport_many(G: Callable, loops, backend=DUAL, Js=()):
    """Transport a basis around each loop (RK4 on ``dV/ds = -Gamma(gamma') V``).

    All loops must have the same number of vertices and steps per edge;
    they are integrated together, with the connection evaluated once per
    RK4 node.  Returns one :class:`TransportResult` per loop: the holonomy
    matrix with the Gram drift along the way, the orthogonality defect at
    the base and, for each endomorphism in ``Js``, the commutation residual
    ``|P J - J P|_F / |P|_F``.
    """
    be = get_backend(backend)
    loops = list(loops)
    if len({(len(L.vertices), L.steps_per_edge) for L in loops}) != 1:
        raise ValueError("loops must share vertex count and steps per edge")
    verts = np.stack([L.vertices for L in loops])  # (B, k, N)
    B, k, N = verts.shape
    m = loops[0].steps_per_edge
    hs = 1.0 / m
    g0, gam = christoffel_batched(G, verts[:, 0], be)
    V = np.broadcast_to(np.eye(N), (B, N, N)).copy()
    drift = np.zeros(B)

    def rhs(gamma, v, Vm):
        return -np.einsum("bijk,bj,bkm->bim", gamma, v, Vm)

    for e in range(k):
        a_, b_ = verts[:, e], verts[:, (e + 1) % k]
        vel = b_ - a_
        for s in range(m):
            xa = a_ + vel * s * hs
            _, gam_m = christoffel_batched(G, xa + 0.5 * hs * vel, be)
            gb, gam_b = christoffel_batched(G, xa + hs * vel, be)
            k1 = rhs(gam, vel, V)
            k2 = rhs(gam_m, vel, V + 0.5 * hs * k1)
            k3 = rhs(gam_m, vel, V + 0.5 * hs * k2)
            k4 = rhs(gam_b, vel, V + hs * k3)
            V = V + hs / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            gram = np.einsum("bji,bjk,bkl->bil", V, gb, V)
            drift = np.maximum(drift, np.abs(gram - g0).reshape(B, -1).max(axis=1))
            gam = gam_b
    out = []
    for b in range(B):
        P = V[b]
        orth = float(np.abs(P.T @ g0[b] @ P - g0[b]).max())
        comm = [float(np.linalg.norm(P @ J - J @ P) / np.linalg.norm(P)) for J in Js]
        out.append(TransportResult(P, g0[b], float(drift[b]), orth, comm))
    return out


def parallel_transport(G: Callable, loop: LoopSpec, backend=DUAL, Js=()):
    """Transport a basis around one loop; see :func:`parallel_transport_many`."""
    return parallel_transport_many(G, [loop], backend, Js)[0]


def holonomy_deviation(G, loop, Js, backend=DUAL):
    """Distance of the holonomy of ``loop`` from the commutant of ``Js``
    (with the orthogonality defect)."""
    return parallel_transport(G, loop, backend, Js).sp_deviation


def holonomy_deviations(G, loops, Js, backend=DUAL):
    """:func:`holonomy_deviation` for many loops at once."""
    return [r.sp_deviation for r in parallel_transport_many(G, loops, backend, Js)]


# -- geodesics ----------------------------------------------------------------

@dataclass
class GeodesicResult:
    s: np.ndarray
    x: np.ndarray
    v: np.ndarray
    speed_drift: float
    blew_up: bool
    finished_at: float


def geodesic(G: Callable, x0, v0, T, backend=DUAL, h=1e-3, blowup=1e8, record_every=10):
    """RK4 integration of ``x'' = -Gamma(x', x')`` from ``(x0, v0)``.

    Stops early (``blew_up=True``) when the coordinate norm exceeds
    ``blowup``.  ``speed_drift`` is the largest relative change of
    ``g(x', x')``.
    """
    be = get_backend(backend)
    x = np.asarray(x0, dtype=float).copy()
    v = np.asarray(v0, dtype=float).copy()

    def acc(xx, vv):
        return -np.einsum("ijk,j,k->i", christoffel(G, xx, be), vv, vv)

    def speed(xx, vv):
        return float(vv @ np.asarray(G(xx), dtype=float) @ vv)

    e0 = speed(x, v)
    drift = 0.0
    ss, xs, vs = [0.0], [x.copy()], [v.copy()]
    steps = int(round(T / h))
    blew = False
    s = 0.0
    for it in range(1, steps + 1):
        k1x, k1v = v, acc(x, v)
        k2x, k2v = v + 0.5 * h * k1v, acc(x + 0.5 * h * k1x, v + 0.5 * h * k1v)
        k3x, k3v = v + 0.5 * h * k2v, acc(x + 0.5 * h * k2x, v + 0.5 * h * k2v)
        k4x, k4v = v + h * k3v, acc(x + h * k3x, v + h * k3v)
        x = x + h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x)
        v = v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
        s = it * h
        if not np.all(np.isfinite(x)) or np.linalg.norm(x) > blowup:
            blew = True
            ss.append(s)
            xs.append(x.copy())
            vs.append(v.copy())
            break
        drift = max(drift, abs(speed(x, v) - e0) / max(e0, 1e-300))
        if it % record_every == 0 or it == steps:
            ss.append(s)
            xs.append(x.copy())
            vs.append(v.copy())
    return GeodesicResult(np.array(ss), np.array(xs), np.array(vs), drift, blew, s)


# -- exterior derivative -------------------------------------------------------

def numeric_d(form: Callable, degree, x, backend=DUAL):
    """Exterior derivative of a ``degree``-form given by its antisymmetric
    coefficient tensor ``form(x)`` of shape ``(N,) * degree``.

    With ``dtheta_raw[m, ...] = d_m theta[...]`` the result is
    ``(d theta)_{i0..ik} = sum_j (-1)^j d_{ij} theta_{i0..^ij..ik}``, i.e. the
    convention ``d theta(X, Y) = X theta(Y) - Y theta(X)`` for constant
    fields, without a factor 1/(k+1).
    """
    _, dth = get_backend(backend).d1(form, x)
    raw = np.moveaxis(dth, -1, 0)  # [m, i1, ..., ik]
    out = np.zeros_like(raw)
    for j in range(degree + 1):
        out = out + (-1) ** j * np.moveaxis(raw, 0, j)
    return out


def form_norm(T):
    """Euclidean norm of the independent components of an antisymmetric
    tensor."""
    import math

    k = T.ndim
    return float(np.linalg.norm(T) / math.sqrt(math.factorial(k)))


# -- Bochner tensor ------------------------------------------------------------

def _k_tensor(h, g, J):
    """``K_h[i, j, k, l]`` = component ``i`` of ``K_h(d_k, d_l) d_j`` where

    K_h(X, Y)Z = h(Y,Z)X - h(X,Z)Y + g(Y,Z)HX - g(X,Z)HY
                 + h(JY,Z)JX - h(JX,Z)JY + g(JY,Z)JHX - g(JX,Z)JHY
                 + 2 h(X,JY)JZ + 2 g(X,JY)JHZ

    with ``H = g^{-1} h``.  For the Kaehler curvature decomposition its Ricci
    contraction is ``(N + 4) h + (tr_g h) g``.
    """
    N = g.shape[0]
    E = np.eye(N)
    H = np.linalg.solve(g, h)
    JH = J @ H
    hJ_T = J.T @ h  # [l, j] = h(J d_l, d_j)
    gJ_T = J.T @ g
    hJ = h @ J  # [k, l] = h(d_k, J d_l)
    gJ = g @ J
    K = (
        np.einsum("lj,ik->ijkl", h, E)
        - np.einsum("kj,il->ijkl", h, E)
        + np.einsum("lj,ik->ijkl", g, H)
        - np.einsum("kj,il->ijkl", g, H)
        + np.einsum("ik,lj->ijkl", J, hJ_T)
        - np.einsum("il,kj->ijkl", J, hJ_T)
        + np.einsum("ik,lj->ijkl", JH, gJ_T)
        - np.einsum("il,kj->ijkl", JH, gJ_T)
        + 2.0 * np.einsum("kl,ij->ijkl", hJ, J)
        + 2.0 * np.einsum("kl,ij->ijkl", gJ, JH)
    )
    return K


def bochner_from_curvature(curv: CurvatureAtPoint, J):
    """Bochner tensor ``B = R - K_Ric/(N+4) + S K_g/((N+4)(2N+4))`` in the
    index layout of ``R``; ``N`` is the real dimension."""
    g = curv.g
    N = g.shape[0]
    ric = 0.5 * (curv.ricci + curv.ricci.T)
    return (
        curv.riemann
        - _k_tensor(ric, g, J) / (N + 4)
        + curv.scalar * _k_tensor(g, g, J) / ((N + 4) * (2 * N + 4))
    )


@dataclass
class BochnerResult:
    norm: float
    nabla_J: float
    reliable: bool


def bochner_tensor(G: Callable, J, x, backend=DUAL, kahler_tol=1e-6):
    """Norm of the Bochner tensor of ``G`` with constant complex structure
    ``J`` at ``x``.  The result is flagged unreliable when ``|nabla J|``
    exceeds ``kahler_tol`` (the decomposition assumes a Kaehler metric)."""
    be = get_backend(backend)
    curv = curvature(G, x, be)
    B = bochner_from_curvature(curv, np.asarray(J, dtype=float))
    nJ = nabla_J(G, constant_field(J), x, be)
    return BochnerResult(float(np.linalg.norm(B)), nJ, nJ <= kahler_tol)


# -- closed-form oracle for conformally flat metrics ---------------------------

def conformal_christoffel(dphi):
    """``Gamma^i_{jk}`` of ``exp(2 phi) delta`` from the gradient of ``phi``:
    ``delta^i_j phi_k + delta^i_k phi_j - delta_jk phi_i``."""
    dphi = np.asarray(dphi, dtype=float)
    E = np.eye(len(dphi))
    return (
        np.einsum("ij,k->ijk", E, dphi)
        + np.einsum("ik,j->ijk", E, dphi)
        - np.einsum("jk,i->ijk", E, dphi)
    )


def conformal_ricci(dphi, hess):
    """Ricci tensor and scalar curvature of ``exp(2 phi) delta`` in dimension
    ``N`` (closed form)::

        Ric = -(N-2) (Hess phi - dphi dphi) - (lap phi + (N-2) |dphi|^2) delta
        S   = exp(-2 phi) (-2 (N-1) lap phi - (N-2)(N-1) |dphi|^2)

    Returns ``(Ric, S * exp(2 phi))``; multiply the second entry by
    ``exp(-2 phi)`` to obtain ``S``.
    """
    dphi = np.asarray(dphi, dtype=float)
    hess = np.asarray(hess, dtype=float)
    N = len(dphi)
    lap = np.trace(hess)
    d2 = dphi @ dphi
    ric = -(N - 2) * (hess - np.outer(dphi, dphi)) - (lap + (N - 2) * d2) * np.eye(N)
    s_scaled = -2 * (N - 1) * lap - (N - 2) * (N - 1) * d2
    return ric, s_scaled
