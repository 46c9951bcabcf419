"""Acceptance criteria, run at their stated scales and tolerances.

Each test carries a ``criterion`` marker; ``conftest.py`` folds the outcomes
into one PASS/FAIL line per criterion at the end of the session.
"""

import json
import time
from functools import lru_cache

import pytest

from hklab import cli
from hklab.audits import run_audits

A_VALUES = (0.5, 1.0, 2.0)
SAMPLES = 1000


@lru_cache(maxsize=None)
def run(audit, n, a_values=A_VALUES):
    t0 = time.perf_counter()
    res = run_audits([audit], n, list(a_values), seed=0, samples=SAMPLES)
    return res.items, time.perf_counter() - t0


def items_for(audit, ns, a_values=A_VALUES):
    out = []
    for n in ns:
        out.extend(run(audit, n, a_values)[0])
    return out


def seconds(audit, ns, a_values=A_VALUES):
    return sum(run(audit, n, a_values)[1] for n in ns)


def check_assert(items, claim, bound, min_samples=SAMPLES, comparison="<="):
    """Problems with the ASSERT records of ``claim`` against the stated bound."""
    found = [r for r in items if r.claim_id == claim]
    if not found:
        return [f"{claim}: not reported"]
    problems = []
    for r in found:
        where = f"{claim} n={r.n} a={r.a}"
        if r.samples < min_samples:
            problems.append(f"{where}: {r.samples} samples < {min_samples}")
        if r.comparison != comparison:
            problems.append(f"{where}: comparison {r.comparison!r}")
        if comparison == "<=" and not r.max_residual <= bound:
            problems.append(f"{where}: max residual {r.max_residual:.3e} > {bound:.0e}")
        if comparison == ">" and not r.min_residual > bound:
            problems.append(f"{where}: min value {r.min_residual:.3e} <= {bound}")
        if comparison == "sup>" and not r.max_residual > bound:
            problems.append(f"{where}: largest value {r.max_residual:.3e} <= {bound}")
        if r.status != "pass":
            problems.append(f"{where}: status {r.status}")
    return problems


# -- 1 ---------------------------------------------------------------------------

C1 = (1, "algebraic layer: 1e3 cases per law, residual < 1e-12, < 5 s for n = 1, 2")


@pytest.mark.criterion(*C1)
@pytest.mark.parametrize("claim", ["quat.relations", "quat.associativity", "quat.norm", "quat.so3_hom",
                                   "group.axioms", "group.center", "em.action"])
def test_c1_algebra(claim):
    assert not check_assert(items_for("algebra", (1, 2)), claim, 1e-12)


@pytest.mark.criterion(*C1)
def test_c1_runtime():
    t = seconds("algebra", (1, 2))
    assert t < 5.0, f"{t:.2f} s"


# -- 2 ---------------------------------------------------------------------------

C2 = (2, "form identities at n = 1, 2 and a in {0.5, 1, 2}, < 30 s")

FORM_CLAIMS = [
    ("forms.omega_xi", 1e-12),        # omega_alpha(xi_alpha) = 1 + a|z|^2, exact formula
    ("forms.eta_xi", 1e-12),
    ("forms.deta_xi", 1e-10),         # d eta_alpha(xi_alpha, .) = 0
    ("forms.deta_central", 1e-10),    # d eta_alpha(d/dt_beta, .) = 0
    ("forms.deta_on_D", 1e-12),       # d eta = f d omega on D
    ("forms.reciprocity", 1e-10),
    ("forms.j_invariance", 1e-10),
    ("forms.omega_equivariance", 1e-10),
    ("forms.eta_equivariance", 1e-10),
]


@pytest.mark.criterion(*C2)
@pytest.mark.parametrize("claim, bound", FORM_CLAIMS)
def test_c2_forms(claim, bound):
    items = items_for("forms", (1, 2))
    assert {(r.n, r.a) for r in items if r.claim_id == claim} == {(n, a) for n in (1, 2) for a in A_VALUES}
    assert not check_assert(items, claim, bound)


@pytest.mark.criterion(*C2)
def test_c2_runtime():
    t = seconds("forms", (1, 2))
    assert t < 30.0, f"{t:.2f} s"


# -- 3 and 4 -----------------------------------------------------------------------

@pytest.mark.criterion(3, "lift-route metric equals f(z) g_H, residual < 1e-10 on 1e3 samples")
def test_c3_conformal_identity():
    assert not check_assert(items_for("metric", (1, 2)), "metric.conformal", 1e-10)


@pytest.mark.criterion(4, "Omega_alpha well defined and pi_alpha^* Omega_alpha = d eta_alpha, < 1e-9")
@pytest.mark.parametrize("claim", ["omega.well_defined", "omega.pullback"])
def test_c4_descended_forms(claim):
    assert not check_assert(items_for("metric", (1, 2)), claim, 1e-9)


# -- 5 ---------------------------------------------------------------------------

C5 = (5, "conformal closed forms and harness metrics within 1e-5, backends agree within 1e-6")


@pytest.mark.criterion(*C5)
@pytest.mark.parametrize("claim, bound", [
    ("oracle.conformal_christoffel", 1e-5),
    ("oracle.conformal_ricci", 1e-5),
    ("oracle.flat", 1e-5),
    ("oracle.sphere", 1e-5),
    ("oracle.backend_agreement", 1e-6),
])
def test_c5_oracles(claim, bound):
    assert not check_assert(items_for("oracles", (1,)), claim, bound, min_samples=100)


# -- 6 ---------------------------------------------------------------------------

C6 = (6, "MEASURE reports with two-backend agreement < 1e-6, 1e2-1e3 samples, < 5 min")

MEASURES = [
    ("hk.d_theta", (1, 2)),
    ("hk.ricci", (1,)),
    ("hk.nabla_j", (1,)),
    ("hk.holonomy", (1,)),
    ("quot.bochner_gN", (1,)),
    ("quot.antimetric_minus", (1,)),
    ("quot.antimetric_plus", (1,)),
]


def measure_items():
    return items_for("hyperkahler", (1, 2)) + items_for("quotients", (1, 2))


@pytest.mark.criterion(*C6)
@pytest.mark.parametrize("claim, ns", MEASURES)
def test_c6_measure_reports(claim, ns):
    found = [r for r in measure_items() if r.claim_id == claim]
    assert {(r.n, r.a) for r in found} >= {(n, a) for n in ns for a in A_VALUES}
    for r in found:
        assert r.klass == "measure"
        assert r.status == "recorded", (r.n, r.a, r.backend_agreement)
        assert r.backend_agreement < 1e-6
        assert 100 <= r.samples <= 1000


@pytest.mark.criterion(*C6)
def test_c6_every_measure_agrees():
    bad = [(r.claim_id, r.n, r.a, r.backend_agreement) for r in measure_items()
           if r.klass == "measure" and not r.backend_agreement < 1e-6]
    assert not bad


@pytest.mark.criterion(*C6)
def test_c6_runtime():
    t = seconds("hyperkahler", (1, 2)) + seconds("quotients", (1, 2))
    assert t < 300.0, f"{t:.1f} s"


# -- 7 ---------------------------------------------------------------------------

C7 = (7, "Carnot-Caratheodory lower and upper bounds on 1e3 curves, tolerance 1e-4")


@pytest.mark.criterion(*C7)
@pytest.mark.parametrize("claim", ["cc.lower_bound", "cc.upper_bound", "cc.curves_horizontal"])
def test_c7_cc_bounds(claim):
    bound = 1e-12 if claim == "cc.curves_horizontal" else 1e-4
    items = items_for("cc_bounds", (1,))
    assert {r.a for r in items if r.claim_id == claim} == set(A_VALUES)
    assert not check_assert(items, claim, bound)


@pytest.mark.criterion(*C7)
def test_c7_constants():
    items = [r for r in items_for("cc_bounds", (1,)) if r.claim_id == "cc.constants"]
    assert items and all(r.status == "pass" for r in items)


# -- 8 ---------------------------------------------------------------------------

C8 = (8, "isometry audits: Sp(n).Sp(1) invariance, witness, family separation, lift construction")


@pytest.mark.criterion(*C8)
@pytest.mark.parametrize("audit, claim, bound, comparison, min_samples", [
    ("metric_isometry", "iso.sp_invariance", 1e-10, "<=", SAMPLES),
    ("metric_isometry", "iso.translation_witness", 0.01, "sup>", SAMPLES),
    ("metric_isometry", "iso.family_separation", 10.0, ">", 1),
    ("lift_construction", "lift.diagram", 0.0, "<=", SAMPLES),
    ("lift_construction", "lift.preserves_D", 1e-9, "<=", SAMPLES),
])
def test_c8_isometries(audit, claim, bound, comparison, min_samples):
    problems = check_assert(items_for(audit, (1,)), claim, bound, min_samples, comparison)
    assert not problems, "\n".join(problems)


# -- 9 ---------------------------------------------------------------------------

@pytest.mark.criterion(9, "quotient: phi homomorphism, pullbacks, anti-holomorphy, U(2n) invariance < 1e-10")
@pytest.mark.parametrize("claim", ["quot.phi_hom", "quot.phi_omega", "quot.phi_eta",
                                   "quot.anti_holomorphy", "quot.unitary_invariance"])
def test_c9_quotient(claim):
    items = [r for r in items_for("quotients", (1,)) if r.n == 1]
    assert not check_assert(items, claim, 1e-10)


# -- 10 --------------------------------------------------------------------------

@pytest.mark.criterion(10, "identical configuration gives byte-identical JSON apart from the timestamp")
def test_c10_determinism(tmp_path):
    texts = []
    for k in range(2):
        out = tmp_path / f"run{k}.json"
        cli.main(["--n", "1", "--a", "0.5", "--a", "2", "--samples", "100", "--quiet", "--out", str(out)])
        texts.append(out.read_text())
    reports = [json.loads(t) for t in texts]
    for t, r in zip(texts, reports):
        assert cli.dumps(r) == t  # the canonical dump reproduces the file byte for byte
        r.pop("timestamp")
    a, b = (cli.dumps(r).encode() for r in reports)
    assert a == b
    assert len(reports[0]["items"]) > 100
