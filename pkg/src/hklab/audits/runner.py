"""Audit registry and deterministic report assembly."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .algebra import audit_algebra
from .cc_bounds import audit_cc_bounds
from .core import ASSERT, DISAGREE, FAIL, AuditContext
from .forms import audit_forms
from .hyperkahler import audit_hyperkahler
from .invariance import audit_invariance
from .isometry import audit_lift_construction, audit_metric_isometry
from .metric import audit_metric
from .oracles import audit_oracles
from .quotients import audit_quotients

# name -> (function, depends on a)
AUDITS = {
    "algebra": (audit_algebra, False),
    "forms": (audit_forms, True),
    "invariance": (audit_invariance, True),
    "metric": (audit_metric, True),
    "oracles": (audit_oracles, True),
    "metric_isometry": (audit_metric_isometry, True),
    "hyperkahler": (audit_hyperkahler, True),
    "cc_bounds": (audit_cc_bounds, True),
    "lift_construction": (audit_lift_construction, False),
    "quotients": (audit_quotients, True),
}


@dataclass
class RunResult:
    items: list
    tables: list
    wall_times: dict = field(default_factory=dict)

    @property
    def assert_failures(self):
        return [r for r in self.items if r.klass == ASSERT and r.status == FAIL]

    @property
    def disagreements(self):
        return [r for r in self.items if r.status == DISAGREE]

    def exit_code(self):
        """3 on a backend disagreement, else 1 on an ASSERT failure, else 0."""
        if self.disagreements:
            return 3
        if self.assert_failures:
            return 1
        return 0


def _sort_key(r):
    return (r.claim_id, r.n, -1.0 if r.a is None else r.a)


def run_audits(names, n, a_values, seed=0, samples=1000, backend="dual", tolerances=None):
    """Run the named audits for every ``a`` and merge the items by claim id.

    Audits that do not depend on ``a`` run once; items that do not depend on
    it are kept once per ``(claim_id, n)``.
    """
    unknown = [x for x in names if x not in AUDITS]
    if unknown:
        raise KeyError(f"unknown audit(s): {', '.join(unknown)}")
    items, tables, walls = {}, [], {}
    for name in names:
        fn, uses_a = AUDITS[name]
        for a in (a_values if uses_a else a_values[:1]):
            ctx = AuditContext(n=n, a=a, seed=seed, samples=samples, backend=backend,
                               tolerances=dict(tolerances or {}))
            t0 = time.perf_counter()
            found = fn(ctx)
            dt = time.perf_counter() - t0
            walls[f"{name}/n={n}/a={a:g}"] = dt
            for r in found:
                r.wall_time = dt
                key = (r.claim_id, r.n, r.a)
                items.setdefault(key, r)
            tables.extend(ctx.tables)
    return RunResult(sorted(items.values(), key=_sort_key), tables, walls)
