"""Numerical laboratory for the quaternionic Heisenberg group and the
metric family ``g_a`` on ``H^n`` built from its deformed contact forms.

Modules:

* :mod:`hklab.quat`: quaternions, quaternionic matrices, Sp(n), Sp(1) -> SO(3)
* :mod:`hklab.heisenberg`: the group M, the action of E(M), the solvable groups
* :mod:`hklab.forms`: omega, eta, their derivatives, D and the structure J
* :mod:`hklab.metric`: g_a, twist maps, descended 2-forms Omega_alpha
* :mod:`hklab.diffgeo`: curvature, transport, geodesics, exterior d, Bochner
* :mod:`hklab.quotients`: M / R^2, the sections N_alpha, the group N
* :mod:`hklab.audits`: named claim audits; :mod:`hklab.cli`: command line
"""

from . import diffgeo, dual, forms, harness, heisenberg, metric, quat, quotients

__version__ = "0.1.0"

__all__ = ["diffgeo", "dual", "forms", "harness", "heisenberg", "metric", "quat", "quotients", "__version__"]
