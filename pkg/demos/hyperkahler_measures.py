"""Closedness of the fundamental forms of g_a, Ricci curvature and the
covariant derivative of J_1, each with both derivative backends.

    python demos/hyperkahler_measures.py
"""

import numpy as np

from hklab import diffgeo as G
from hklab import forms as F
from hklab import metric as Mt
from hklab.audits.metric import theta_via_omega

a = 1.0
g = Mt.MetricField(1, a)
rng = np.random.default_rng(1)
pts = Mt.sample_ball(rng, 4, 1, radius=1.5)

print(" point                               |d Theta_1|   |Ric|      |nabla J_1|")
for x in pts:
    dth = G.form_norm(G.numeric_d(lambda y: Mt.theta_matrix(1, g, y), 2, x))
    ric = G.curvature(g, x).ricci_norm()
    nj = G.nabla_J(g, G.constant_field(F.j_matrix(1, 1)), x)
    print(f" {np.array2string(x, precision=3):35s} {dth:.4e}   {ric:.4f}   {nj:.4f}")

x = pts[0]
diff = np.abs(Mt.theta_matrix(1, g, x) - theta_via_omega(1, a, x, "dual")).max()
print(f"\nTheta_1 against tau_1^* Omega_1 / c at the first point: {diff:.4f}")
print("d(tau_1^* Omega_1) there:",
      f"{G.form_norm(G.numeric_d(lambda y: Mt.theta_via_omega_matrix(1, a, y), 2, x)):.2e}")
