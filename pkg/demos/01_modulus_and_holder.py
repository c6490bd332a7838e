"""
Modulus of continuity and the fitted Hölder norm
================================================

A walk through the basic objects: a sampled path, its modulus profile,
a scaling table fitted from a family of envelopes, and the norm built on it.
"""
import numpy as np

import holderlift as hl

# A path on a uniform grid is just its node values; between nodes it is linear.
f = hl.GridPath.from_function(lambda t: np.sin(6 * t) + 0.3 * t, 64)
print("m =", f.m, " sup norm =", round(hl.sup_norm(f), 4))

# Delta(f, k) is the largest oscillation over index gaps of at most k.
prof = hl.modulus_profile(f)
print("first lags of the modulus:", np.round(prof.delta[:6], 4))

# Rough paths have a much steeper modulus near zero.
from holderlift.coupling import midpoint_displacement
rough = hl.GridPath(midpoint_displacement(np.random.default_rng(1), 64, 0.5))
print("rough path, lag-1 vs lag-8 modulus:",
      round(hl.modulus_of_continuity(rough, 1), 4), round(hl.modulus_of_continuity(rough, 8), 4))

# Fit a deterministic scaling g from many envelopes; the 95% quantile is the default.
rng = np.random.default_rng(7)
paths = [hl.GridPath(midpoint_displacement(rng, 64, 0.5)) for _ in range(200)]
g = hl.fit_scaling([hl.modulus_profile(p) for p in paths])
print("g at lags 1, 8, 64:", np.round(g.g[[1, 8, 64]], 4))

# The norm: sup part plus worst modulus-to-sqrt(g) ratio.
b = hl.holder_norm(rough, g)
print("holder norm of the rough path: sup %.3f + holder %.3f = %.3f (worst lag %d)"
      % (b.sup_part, b.holder_part, b.total, b.argmax_k))

# Covering bound of the unit ball at resolution eps.
for eps in (3.0, 2.0):  # coarse grids only resolve coarse eps
    print("covering bound at eps=%.1f:" % eps, hl.covering_number_bound(g, eps))
