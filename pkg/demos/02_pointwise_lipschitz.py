"""
Pointwise Lipschitz constants at a scale
========================================

``Lip_h f(x)`` is the largest difference quotient over the punctured ball of
radius ``h``. It is bounded by the global constant and grows with ``h``.
"""

import numpy as np

import liplab

space = liplab.gen_path(8)
f = np.array([0, 0, 0, 1, 3, 3, 2, 2], dtype=float)

print("global LIP(f) =", liplab.global_lip(space, f))
for h in (1, 2, 4, 7):
    prof = liplab.lip_field(space, f, h)
    print(f"h={h}: lip = {prof.lip.round(3).tolist()}")

# The singular set is where the profile does not exceed a threshold tau.
S = liplab.singular_set(space, f, 1, tau=0.0)
print("S_0(f) at h=1:", S.members.tolist(), " measure", S.measure)
print("D-infinity norm at h=1:", liplab.dinf_norm(space, f, 1))

# When the ball is empty the nearest neighbours stand in, and h_used says so.
sparse = liplab.gen_path(4).with_dist(liplab.gen_path(4).dist * 3)
prof = liplab.lip_field(sparse, [0.0, 3.0, 3.0, 9.0], h=1)
print("fallback radii:", prof.h_used.tolist(), " lip:", prof.lip.tolist())
