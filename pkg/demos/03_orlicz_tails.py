"""
Orlicz norms of the random factor
=================================

Luxemburg norms under power and sub-Gaussian Young functions, the Delta_2
test, and the "weaker than" ordering.
"""
import numpy as np

import holderlift as hl

rng = np.random.default_rng(3)
x = rng.normal(size=5000)

for phi in (hl.YoungFunction.power(1), hl.YoungFunction.power(2), hl.YoungFunction.exp_square()):
    print("%-28s luxemburg norm %.4f" % (phi.to_config(), hl.luxemburg_norm(x, phi)))

# For a power function the Luxemburg norm is exactly the p-mean norm.
print("L2 check:", hl.luxemburg_norm(x, hl.YoungFunction.power(2)), np.sqrt(np.mean(x ** 2)))

print("Delta_2 for u^3:", hl.delta2_check(hl.YoungFunction.power(3)))
print("Delta_2 for exp(u^2/2)-1:", hl.delta2_check(hl.YoungFunction.exp_square()).passed)
print("u^2 weaker than exp square:", hl.weaker_than(hl.YoungFunction.power(2), hl.YoungFunction.exp_square()).passed)

# Heavy-tailed theta: the half-sample stability ratio drifts away from 1.
for name, theta in (("half-normal", np.abs(rng.normal(size=4000))), ("pareto(1.5)", rng.pareto(1.5, 4000) + 1)):
    rep = hl.theta_orlicz_report(theta, hl.YoungFunction.power(2))
    print("%-12s norm %.3f  half/full %.3f" % (name, rep.norm, rep.stability_ratio))
