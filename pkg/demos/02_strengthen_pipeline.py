"""
From uniform convergence to convergence in a finer norm
=======================================================

Generate a coupled ensemble eta_n -> eta, dominate the sup deviations,
fit a scaling from the difference envelopes, and watch the Hölder norm of
eta_n - eta go to zero.
"""
import holderlift as hl
from holderlift.pipeline import StrengthenConfig, strengthen

e = hl.generate_ensemble("ROUGH_DECAY", m=256, N=16, R=30, seed=0)
print("ensemble:", e.generator_tag, "R=%d N=%d m=%d" % (e.R, e.N, e.m))

# Step one: sup deviations and their deterministic domination.
zeta = hl.uniform_deviations(e)
rec = hl.dominate_sequence(zeta, 0.95)
print("eps_1 = %.3f, eps_N = %.3f, max tau = %.3f" % (rec.eps[0], rec.eps[-1], rec.tau.max()))

# The whole chain in one call.
report = strengthen(e, StrengthenConfig(kind="ROUGH_DECAY", m=256, N=16, R=30, quantile=0.95))
for row in report["holder_curve"]["per_n"][::3]:
    print("n=%2d  mean norm %.3f  max norm %.3f" % (row["n"], row["mean_norm"], row["max_norm"]))
print("flags:", report["flags"], " verdict:", report["verdict"])

# A Donsker ensemble only converges in law, so the pathwise verdict is withheld.
d = hl.generate_ensemble("DONSKER", m=64, N=4, R=10, seed=0)
print("donsker verdict:", strengthen(d, StrengthenConfig(kind="DONSKER", m=64, N=4, R=10))["verdict"])
