"""Lifting z -> A z conj(alpha) to M through the section N_0: horizontal
vectors stay horizontal for alpha = 1 but not for a generic unit alpha.

    python demos/lift_construction.py
"""

import numpy as np

from hklab import forms as F
from hklab import heisenberg as H
from hklab import quat as Q
from hklab import quotients as Qt

rng = np.random.default_rng(2)
A = Q.random_sp_n(rng, 1)
p = rng.standard_normal(H.dim(1))
V = F.horizontal_lift(p, rng.standard_normal(4))

for label, alpha in (("alpha = 1", Q.ONE), ("alpha = i", Q.I), ("random alpha", Q.random_unit(rng))):
    lifted = Qt.lift_map(Qt.linear_isometry(A, alpha))
    W = F.pushforward(lifted, p, V)
    print(f"{label:13s} omega(h_* V) = {np.array2string(F.omega_vec(lifted(p), W), precision=4)}")
