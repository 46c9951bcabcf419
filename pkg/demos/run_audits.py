"""Run a small audit configuration and print a table of the results
(the ``hklab`` command does the same with JSON output).

    python demos/run_audits.py
"""

from hklab.audits import run_audits

res = run_audits(["algebra", "forms", "cc_bounds", "quotients"], n=1, a_values=[1.0], samples=200)
for r in res.items:
    shown = r.min_residual if r.comparison == ">" else r.max_residual
    print(f"{r.status:9s} {r.klass:8s} {r.claim_id:30s} {shown:.3e}")
print("exit code:", res.exit_code())
