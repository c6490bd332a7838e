"""
Moment convergence and the random-walk maximum
==============================================

The expected maximum of a scaled simple random walk approaches the
Brownian value sqrt(2/pi). Uniform integrability is checked by truncation.
"""
import math

import numpy as np

import holderlift as hl

e = hl.generate_ensemble("DONSKER", m=256, N=6, R=4000, seed=11)
vmax = hl.Functional.max_value()
rep = hl.moment_convergence_check(e, vmax, reference=math.sqrt(2 / math.pi))
# member n is a walk of n * m_block steps, so the means creep up towards the target.
print("generator params:", e.params)
print("mean of max over n:", np.round(rep.means, 4), " target %.4f" % rep.limit)

caps = np.array([1.0, 2.0, 4.0, 8.0])
ui = hl.uniform_integrability_curve(e, hl.Functional.sup_norm_power(2), caps)
print("tail integrals:", np.round(ui.values, 4), ui.verdict)

k, k1, k2, k3 = hl.kappa_decomposition(e, vmax, n=e.N, n_cap=2.0)
print("kappa %.4f <= %.4f + %.4f + %.4f" % (k, k1, k2, k3))

# Weak convergence seen through a bounded-Lipschitz surrogate.
a = [hl.GridPath(v) for v in e.members[:, -1]]
b = [hl.GridPath(v) for v in e.limits]
print("BL distance (sup norm): %.4f" % hl.bounded_lipschitz_distance(a[:500], b[:500], seed=0))
