"""Forward-mode automatic differentiation with second-order (hyper-dual) numbers.

A :class:`HyperDual` carries a value together with a batch of first
derivatives along ``K`` seed directions, a batch of first derivatives along
``L`` seed directions and the ``K x L`` block of mixed second derivatives::

    x = re + sum_k d1[k] e1_k + sum_l d2[l] e2_l + sum_kl d12[k, l] e1_k e2_l

with all products of infinitesimals other than ``e1_k e2_l`` equal to zero.
Seeding both blocks with the identity at a point yields the full gradient and
Hessian of any composition of the supported operations in a single pass, to
machine precision for polynomial inputs.

Code that should run on both plain floats and hyper-dual numbers uses the
module-level functions (:func:`einsum`, :func:`stack`, :func:`exp`, ...)
instead of their numpy namesakes.  Subscripts passed to :func:`einsum` must be
lowercase; the uppercase letters ``Y`` and ``Z`` label the derivative axes.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "HyperDual",
    "is_dual",
    "seed",
    "value",
    "einsum",
    "stack",
    "concatenate",
    "exp",
    "log",
    "sqrt",
    "sin",
    "cos",
    "arcsinh",
    "jvp",
    "jacobian",
    "hessian",
    "expand_dims",
    "swapaxes",
]


def _pad(a, lead, nd):
    """Insert unit axes after the ``lead`` direction axes so that ``a`` has
    ``nd`` trailing (value) axes."""
    extra = nd - (a.ndim - lead)
    if extra > 0:
        a = a.reshape(a.shape[:lead] + (1,) * extra + a.shape[lead:])
    return a


class HyperDual:
    """Value with first and mixed second derivative blocks.

    Parameters
    ----------
    re : array_like
        Value, shape ``s``.
    d1 : ndarray
        First derivatives along the ``e1`` directions, shape ``(K, *s)``.
    d2 : ndarray
        First derivatives along the ``e2`` directions, shape ``(L, *s)``.
    d12 : ndarray
        Mixed second derivatives, shape ``(K, L, *s)``.
    """

    __array_ufunc__ = None  # make numpy defer to the reflected operators

    __slots__ = ("re", "d1", "d2", "d12")

    def __init__(self, re, d1, d2, d12):
        self.re = np.asarray(re, dtype=float)
        self.d1 = d1
        self.d2 = d2
        self.d12 = d12

    # -- shape helpers -----------------------------------------------------
    @property
    def shape(self):
        return self.re.shape

    @property
    def ndim(self):
        return self.re.ndim

    @property
    def nk(self):
        return self.d1.shape[0]

    @property
    def nl(self):
        return self.d2.shape[0]

    def __len__(self):
        return len(self.re)

    def __repr__(self):
        return f"HyperDual(re={self.re!r}, K={self.nk}, L={self.nl})"

    def _full(self, shape):
        """Broadcast every component to value shape ``shape``."""
        nd = len(shape)
        return HyperDual(
            np.broadcast_to(self.re, shape),
            np.broadcast_to(_pad(self.d1, 1, nd), (self.nk,) + shape),
            np.broadcast_to(_pad(self.d2, 1, nd), (self.nl,) + shape),
            np.broadcast_to(_pad(self.d12, 2, nd), (self.nk, self.nl) + shape),
        )

    # -- arithmetic --------------------------------------------------------
    def __neg__(self):
        return HyperDual(-self.re, -self.d1, -self.d2, -self.d12)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, HyperDual):
            nd = max(self.ndim, other.ndim)
            return HyperDual(
                self.re + other.re,
                _pad(self.d1, 1, nd) + _pad(other.d1, 1, nd),
                _pad(self.d2, 1, nd) + _pad(other.d2, 1, nd),
                _pad(self.d12, 2, nd) + _pad(other.d12, 2, nd),
            )
        re = self.re + np.asarray(other, dtype=float)
        return self._full(re.shape)._with_re(re)

    __radd__ = __add__

    def _with_re(self, re):
        return HyperDual(re, self.d1, self.d2, self.d12)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, HyperDual):
            nd = max(self.ndim, other.ndim)
            a, b = self.re, other.re
            a1, b1 = _pad(self.d1, 1, nd), _pad(other.d1, 1, nd)
            a2, b2 = _pad(self.d2, 1, nd), _pad(other.d2, 1, nd)
            a12, b12 = _pad(self.d12, 2, nd), _pad(other.d12, 2, nd)
            d12 = a12 * b + a * b12 + a1[:, None] * b2[None] + b1[:, None] * a2[None]
            return HyperDual(a * b, a1 * b + a * b1, a2 * b + a * b2, d12)
        c = np.asarray(other, dtype=float)
        nd = max(self.ndim, c.ndim)
        return HyperDual(
            self.re * c,
            _pad(self.d1, 1, nd) * c,
            _pad(self.d2, 1, nd) * c,
            _pad(self.d12, 2, nd) * c,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, HyperDual):
            return self * other.reciprocal()
        return self * (1.0 / np.asarray(other, dtype=float))

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p):
        if isinstance(p, HyperDual):
            return exp(log(self) * p)
        p = float(p)
        a = self.re
        if p == 2.0:
            return self * self
        return self._chain(a**p, p * a ** (p - 1.0), p * (p - 1.0) * a ** (p - 2.0))

    def reciprocal(self):
        a = self.re
        inv = 1.0 / a
        return self._chain(inv, -inv * inv, 2.0 * inv * inv * inv)

    def _chain(self, f0, f1, f2):
        """Apply an elementwise function with value ``f0``, derivative ``f1``
        and second derivative ``f2`` (all evaluated at ``self.re``)."""
        d1 = f1 * self.d1
        d2 = f1 * self.d2
        d12 = f1 * self.d12 + f2 * (self.d1[:, None] * self.d2[None])
        return HyperDual(f0, d1, d2, d12)

    # -- indexing and reductions ------------------------------------------
    def __getitem__(self, idx):
        if not isinstance(idx, tuple):
            idx = (idx,)
        return HyperDual(
            self.re[idx],
            self.d1[(slice(None),) + idx],
            self.d2[(slice(None),) + idx],
            self.d12[(slice(None), slice(None)) + idx],
        )

    def sum(self, axis=None):
        if axis is None:
            ax = tuple(range(-self.ndim, 0))
        else:
            axes = axis if isinstance(axis, tuple) else (axis,)
            ax = tuple(a - self.ndim if a >= 0 else a for a in axes)
        return HyperDual(
            self.re.sum(axis=ax),
            self.d1.sum(axis=ax),
            self.d2.sum(axis=ax),
            self.d12.sum(axis=ax),
        )

    def reshape(self, *shape):
        if len(shape) == 1 and isinstance(shape[0], tuple):
            shape = shape[0]
        re = self.re.reshape(shape)
        return HyperDual(
            re,
            self.d1.reshape((self.nk,) + re.shape),
            self.d2.reshape((self.nl,) + re.shape),
            self.d12.reshape((self.nk, self.nl) + re.shape),
        )


def is_dual(x):
    return isinstance(x, HyperDual)


def seed(x, second=False):
    """Seed a point for differentiation.

    Returns a :class:`HyperDual` whose ``d1`` block is the identity along the
    flattened components of ``x``; with ``second=True`` the ``d2`` block is
    seeded too, so that ``d12`` of any result is its Hessian.
    """
    x = np.asarray(x, dtype=float)
    m = x.size
    eye = np.eye(m).reshape((m,) + x.shape)
    d2 = eye.copy() if second else np.zeros((0,) + x.shape)
    k2 = m if second else 0
    return HyperDual(x, eye, d2, np.zeros((m, k2) + x.shape))


def value(x):
    return x.re if isinstance(x, HyperDual) else np.asarray(x, dtype=float)


def _as_dual(x, nk, nl, shape=None):
    if isinstance(x, HyperDual):
        return x
    x = np.asarray(x, dtype=float)
    return HyperDual(
        x,
        np.zeros((nk,) + x.shape),
        np.zeros((nl,) + x.shape),
        np.zeros((nk, nl) + x.shape),
    )


# -- shim functions: work on floats, ndarrays and HyperDual ----------------

def einsum(subscripts, *operands):
    """Multilinear ``numpy.einsum`` that propagates hyper-dual parts."""
    duals = [i for i, op in enumerate(operands) if isinstance(op, HyperDual)]
    if not duals:
        return np.einsum(subscripts, *operands)
    ins, out = subscripts.replace(" ", "").split("->")
    ins = ins.split(",")
    res = [value(op) for op in operands]
    nk = operands[duals[0]].nk
    nl = operands[duals[0]].nl

    def with_parts(parts):
        """Contract with operand ``i`` replaced by the block ``parts[i]``
        (``'1'``, ``'2'`` or ``'12'``)."""
        specs, ops = [], []
        for i, op in enumerate(operands):
            part = parts.get(i)
            if part is None:
                specs.append(ins[i])
                ops.append(res[i])
            elif part == "1":
                specs.append("Y" + ins[i])
                ops.append(op.d1)
            elif part == "2":
                specs.append("Z" + ins[i])
                ops.append(op.d2)
            else:
                specs.append("YZ" + ins[i])
                ops.append(op.d12)
        lead = ""
        if any(p in ("1", "12") for p in parts.values()):
            lead += "Y"
        if any(p in ("2", "12") for p in parts.values()):
            lead += "Z"
        return np.einsum(",".join(specs) + "->" + lead + out, *ops)

    re = np.einsum(subscripts, *res)
    d1 = sum(with_parts({i: "1"}) for i in duals)
    d2 = sum(with_parts({i: "2"}) for i in duals) if nl else np.zeros((0,) + re.shape)
    if nl:
        d12 = sum(with_parts({i: "12"}) for i in duals)
        for i in duals:
            for j in duals:
                if i != j:
                    d12 = d12 + with_parts({i: "1", j: "2"})
    else:
        d12 = np.zeros((nk, 0) + re.shape)
    return HyperDual(re, d1, d2, d12)


def stack(seq, axis=0):
    seq = list(seq)
    duals = [x for x in seq if isinstance(x, HyperDual)]
    if not duals:
        return np.stack([np.asarray(x, dtype=float) for x in seq], axis=axis)
    nk, nl = duals[0].nk, duals[0].nl
    shape = np.broadcast_shapes(*[np.shape(value(x)) for x in seq])
    items = [_as_dual(x, nk, nl)._full(shape) for x in seq]
    nd = len(shape) + 1
    ax = axis - nd if axis >= 0 else axis
    return HyperDual(
        np.stack([x.re for x in items], axis=ax),
        np.stack([x.d1 for x in items], axis=ax),
        np.stack([x.d2 for x in items], axis=ax),
        np.stack([x.d12 for x in items], axis=ax),
    )


def concatenate(seq, axis=0):
    seq = list(seq)
    duals = [x for x in seq if isinstance(x, HyperDual)]
    if not duals:
        return np.concatenate([np.asarray(x, dtype=float) for x in seq], axis=axis)
    nk, nl = duals[0].nk, duals[0].nl
    items = [_as_dual(x, nk, nl) for x in seq]
    nd = items[0].ndim
    ax = axis - nd if axis >= 0 else axis
    return HyperDual(
        np.concatenate([x.re for x in items], axis=ax),
        np.concatenate([x.d1 for x in items], axis=ax),
        np.concatenate([x.d2 for x in items], axis=ax),
        np.concatenate([x.d12 for x in items], axis=ax),
    )


def exp(x):
    if isinstance(x, HyperDual):
        e = np.exp(x.re)
        return x._chain(e, e, e)
    return np.exp(x)


def log(x):
    if isinstance(x, HyperDual):
        inv = 1.0 / x.re
        return x._chain(np.log(x.re), inv, -inv * inv)
    return np.log(x)


def sqrt(x):
    if isinstance(x, HyperDual):
        r = np.sqrt(x.re)
        return x._chain(r, 0.5 / r, -0.25 / (r * x.re))
    return np.sqrt(x)


def sin(x):
    if isinstance(x, HyperDual):
        s, c = np.sin(x.re), np.cos(x.re)
        return x._chain(s, c, -s)
    return np.sin(x)


def cos(x):
    if isinstance(x, HyperDual):
        s, c = np.sin(x.re), np.cos(x.re)
        return x._chain(c, -s, -c)
    return np.cos(x)


def arcsinh(x):
    if isinstance(x, HyperDual):
        q = 1.0 + x.re * x.re
        return x._chain(np.arcsinh(x.re), q**-0.5, -x.re * q**-1.5)
    return np.arcsinh(x)


def jvp(f, x, v):
    """Directional derivative of ``f`` at ``x`` along ``v``.

    ``x`` and ``v`` share a shape and may carry leading batch axes, so a whole
    batch of pushforwards is evaluated in one call.
    """
    x = np.asarray(x, dtype=float)
    v = np.broadcast_to(np.asarray(v, dtype=float), x.shape)
    xd = HyperDual(x, v[None], np.zeros((0,) + x.shape), np.zeros((1, 0) + x.shape))
    out = f(xd)
    if not isinstance(out, HyperDual):
        return np.zeros_like(np.asarray(out, dtype=float))
    return out.d1[0]


def jacobian(f, x):
    """Jacobian ``J[..., i, j] = d f_i / d x_j`` for a function of a 1-d
    point (output ``(*out_shape, m)``)."""
    x = np.asarray(x, dtype=float)
    out = f(seed(x))
    if not isinstance(out, HyperDual):
        return np.zeros(np.shape(out) + (x.size,))
    return np.moveaxis(out.d1, 0, -1)


def hessian(f, x):
    """Value, gradient and Hessian blocks of ``f`` at ``x``.

    Returns ``(f, df, d2f)`` with derivative axes last."""
    x = np.asarray(x, dtype=float)
    out = f(seed(x, second=True))
    if not isinstance(out, HyperDual):
        v = np.asarray(out, dtype=float)
        return v, np.zeros(v.shape + (x.size,)), np.zeros(v.shape + (x.size, x.size))
    d1 = np.moveaxis(out.d1, 0, -1)
    d12 = np.moveaxis(np.moveaxis(out.d12, 0, -1), 0, -1)
    return out.re, d1, d12


def expand_dims(x, axis):
    """``numpy.expand_dims`` for value axes (negative ``axis`` counts from the
    end of the value shape)."""
    if not isinstance(x, HyperDual):
        return np.expand_dims(x, axis)
    shape = list(x.shape)
    pos = axis if axis >= 0 else len(shape) + 1 + axis
    shape.insert(pos, 1)
    return x.reshape(tuple(shape))


def swapaxes(x, a1, a2):
    if not isinstance(x, HyperDual):
        return np.swapaxes(x, a1, a2)
    nd = x.ndim
    a1 = a1 - nd if a1 >= 0 else a1
    a2 = a2 - nd if a2 >= 0 else a2
    return HyperDual(
        np.swapaxes(x.re, a1, a2),
        np.swapaxes(x.d1, a1, a2),
        np.swapaxes(x.d2, a1, a2),
        np.swapaxes(x.d12, a1, a2),
    )
