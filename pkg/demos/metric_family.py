"""The metric family g_a on H^1: lift route against the closed form, curvature
at a fixed point for several a, and one radial geodesic.

    python demos/metric_family.py
"""

import numpy as np

from hklab import diffgeo as G
from hklab import metric as Mt

rng = np.random.default_rng(0)
z = Mt.sample_ball(rng, 5, 1)

print("normalization constant c =", Mt.normalization_constant(1))
for a in (0.5, 1.0, 2.0):
    lift = Mt.gram_lift(z, a)
    closed = Mt.gram_closed(z, a)
    print(f"a = {a:3}: max |g_lift - f delta| = {np.abs(lift - closed).max():.2e}")

print("\n|Riem|^2 at z = 1 (fd, dual):")
e1 = np.array([1.0, 0.0, 0.0, 0.0])
for a in (0.5, 1.0, 2.0):
    vals = [G.curvature(Mt.MetricField(1, a), e1, be).riemann_norm2() for be in ("fd", "dual")]
    print(f"  a = {a:3}: {vals[0]:.8f}  {vals[1]:.8f}")

a = 1.0
res = G.geodesic(Mt.MetricField(1, a), np.zeros(4), e1, 2.0, h=1e-2, record_every=50)
exact = np.sinh(np.sqrt(a) * res.s) / np.sqrt(a)
print("\nradial geodesic, s vs r(s) and sinh(s):")
for s, r, e in zip(res.s, res.x[:, 0], exact):
    print(f"  {s:4.1f}  {r:.10f}  {e:.10f}")
