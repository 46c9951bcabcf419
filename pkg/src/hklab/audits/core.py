"""Report records, run context and helpers shared by the audits.

An audit is a function ``audit(ctx) -> list[AuditReport]``.  ASSERT items
compare a residual with a stated tolerance and gate the exit code; MEASURE
items record a number computed with both derivative backends together with
their agreement.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field

import numpy as np

ASSERT = "assert"
MEASURE = "measure"

PASS = "pass"
FAIL = "fail"
RECORDED = "recorded"
DISAGREE = "disagreement"

# Relative two-backend agreement required of every MEASURE number.
BACKEND_TOL = 1e-6


@dataclass(frozen=True)
class CCBound:
    """Constants of the Carnot-Caratheodory estimates:
    ``A = max(1, sqrt(a))`` and ``B = sqrt(min(1, a))``."""

    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("a must be positive")

    @property
    def A(self):
        return max(1.0, math.sqrt(self.a))

    @property
    def B(self):
        return math.sqrt(min(1.0, self.a))


@dataclass
class AuditReport:
    """One audited claim at one ``(n, a)``."""

    claim_id: str
    paper_locus: str
    klass: str
    n: int
    a: float | None
    seed: int
    samples: int
    max_residual: float
    mean_residual: float
    min_residual: float
    status: str
    tolerance: float | None = None
    comparison: str | None = None
    backend_agreement: float | None = None
    values: dict = field(default_factory=dict)
    wall_time: float = 0.0
    residuals: np.ndarray | None = field(default=None, repr=False)

    @property
    def passed(self):
        return self.status in (PASS, RECORDED)

    def to_json(self):
        """Canonical dict (wall time excluded, see the run summary)."""
        return {
            "claim_id": self.claim_id,
            "paper_locus": self.paper_locus,
            "class": self.klass,
            "n": self.n,
            "a": self.a,
            "seed": self.seed,
            "samples": self.samples,
            "max_residual": _num(self.max_residual),
            "mean_residual": _num(self.mean_residual),
            "min_residual": _num(self.min_residual),
            "tolerance": _num(self.tolerance),
            "comparison": self.comparison,
            "backend_agreement": _num(self.backend_agreement),
            "values": {k: _num(v) for k, v in sorted(self.values.items())},
            "status": self.status,
        }


def _num(x):
    if x is None:
        return None
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


@dataclass
class Table:
    """A CSV side table (per-sample values, curvature vs a, traces)."""

    name: str
    header: tuple
    rows: list


@dataclass
class AuditContext:
    """Per-audit run parameters."""

    n: int = 1
    a: float = 1.0
    seed: int = 0
    samples: int = 1000
    backend: str = "dual"
    tolerances: dict = field(default_factory=dict)
    tables: list = field(default_factory=list)

    def rng(self, claim_id, use_a=True):
        """Generator determined by (seed, claim, n) and, for items that
        depend on it, ``a``."""
        key = [int(self.seed) & 0xFFFFFFFF, zlib.crc32(claim_id.encode()), int(self.n)]
        if use_a and self.a is not None:
            key.append(int(round(self.a * 1e6)))
        return np.random.default_rng(key)

    def tol(self, claim_id, default):
        return float(self.tolerances.get(claim_id, default))

    def assert_backends(self):
        return ("fd", "dual") if self.backend == "both" else (self.backend,)

    def count(self, cap=None):
        return self.samples if cap is None else max(1, min(self.samples, cap))

    def add_table(self, name, header, rows):
        self.tables.append(Table(name, tuple(header), [tuple(r) for r in rows]))


def assert_item(ctx, claim_id, locus, residuals, tol, comparison="<=", a=True, extra=None):
    """ASSERT record.

    ``comparison='<='`` requires every residual to be at most ``tol``;
    ``'>'`` requires every value to exceed it and ``'sup>'`` (a witness)
    requires the largest value to exceed it.
    """
    tol = ctx.tol(claim_id, tol)
    r = np.abs(np.asarray(residuals, dtype=float)).ravel()
    if r.size == 0:
        raise ValueError(f"{claim_id}: no samples")
    bad = np.isnan(r).any()
    if comparison == "<=":
        ok = not bad and float(r.max()) <= tol
    elif comparison == ">":
        ok = not bad and float(r.min()) > tol
    elif comparison == "sup>":
        ok = not bad and float(r.max()) > tol
    else:
        raise ValueError("comparison must be '<=', '>' or 'sup>'")
    return AuditReport(
        claim_id=claim_id,
        paper_locus=locus,
        klass=ASSERT,
        n=ctx.n,
        a=ctx.a if a else None,
        seed=ctx.seed,
        samples=int(r.size),
        max_residual=float(np.max(r)),
        mean_residual=float(np.mean(r)),
        min_residual=float(np.min(r)),
        status=PASS if ok else FAIL,
        tolerance=tol,
        comparison=comparison,
        values=dict(extra or {}),
        residuals=r,
    )


def sample_points(rng, m, n, radius=2.0):
    """Points ``(t, z)`` of M: ``t`` standard normal, ``z`` uniform in the
    ball of the given radius (see :func:`hklab.metric.sample_ball`)."""
    from ..metric import sample_ball

    t = rng.standard_normal((m, 3))
    return np.concatenate([t, sample_ball(rng, m, n, radius)], axis=1)


def agreement(fd, dual):
    """Worst relative difference ``|fd - dual| / max(1, |dual|)``."""
    fd = np.asarray(fd, dtype=float)
    dual = np.asarray(dual, dtype=float)
    return float(np.max(np.abs(fd - dual) / np.maximum(1.0, np.abs(dual))))


def measure_item(ctx, claim_id, locus, by_backend, a=True, extra=None):
    """MEASURE record from ``{'fd': values, 'dual': values}``.

    The reported residuals are the dual-number values; the item is marked
    as a disagreement when the two backends differ by more than
    ``BACKEND_TOL`` (relative).
    """
    fd = np.asarray(by_backend["fd"], dtype=float).ravel()
    du = np.asarray(by_backend["dual"], dtype=float).ravel()
    agr = agreement(fd, du)
    vals = np.abs(du)
    values = {"fd_max": float(np.abs(fd).max()), "dual_max": float(vals.max())}
    if extra:
        values.update(extra)
    ok = not (math.isnan(agr) or agr > BACKEND_TOL)
    return AuditReport(
        claim_id=claim_id,
        paper_locus=locus,
        klass=MEASURE,
        n=ctx.n,
        a=ctx.a if a else None,
        seed=ctx.seed,
        samples=int(du.size),
        max_residual=float(vals.max()),
        mean_residual=float(vals.mean()),
        min_residual=float(vals.min()),
        status=RECORDED if ok else DISAGREE,
        backend_agreement=agr,
        values=values,
        residuals=vals,
    )


def both_backends(fn):
    """``{'fd': fn('fd'), 'dual': fn('dual')}``."""
    return {"fd": fn("fd"), "dual": fn("dual")}


def worst_over_backends(ctx, fn):
    """Stack ``fn(backend)`` over the backends selected for ASSERT items."""
    return np.concatenate([np.ravel(fn(b)) for b in ctx.assert_backends()])
