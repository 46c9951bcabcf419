"""Named claim audits and the runner that assembles them into a report."""

from __future__ import annotations

from .algebra import audit_algebra
from .cc_bounds import audit_cc_bounds
from .core import (
    ASSERT,
    BACKEND_TOL,
    DISAGREE,
    FAIL,
    MEASURE,
    PASS,
    RECORDED,
    AuditContext,
    AuditReport,
    CCBound,
)
from .forms import audit_forms
from .hyperkahler import audit_hyperkahler
from .invariance import audit_invariance
from .isometry import audit_lift_construction, audit_metric_isometry
from .metric import audit_metric
from .oracles import audit_oracles
from .quotients import audit_quotients
from .runner import AUDITS, RunResult, run_audits

__all__ = [
    "ASSERT", "MEASURE", "PASS", "FAIL", "RECORDED", "DISAGREE", "BACKEND_TOL",
    "AuditContext", "AuditReport", "CCBound", "AUDITS", "RunResult", "run_audits",
    "audit_algebra", "audit_forms", "audit_invariance", "audit_metric", "audit_oracles",
    "audit_metric_isometry", "audit_hyperkahler", "audit_cc_bounds",
    "audit_lift_construction", "audit_quotients",
]
