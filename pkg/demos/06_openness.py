"""
A ball of fields with small singular sets
=========================================

If m(S_tau(f)) < r, every perturbation u with sup Lip_h u below the margin
keeps the singular measure below r.
"""

import numpy as np

import liplab

rng = np.random.default_rng(0)
space = liplab.gen_grid(8, 8)
f = rng.normal(size=space.n)
f[:6] = 0.0
tau, r = 0.05, 0.3
margin = liplab.openness_margin(space, f, 1.0, tau, r)
print(f"m(S(f)) = {liplab.singular_set(space, f, 1.0, tau).measure:.4f}, margin = {margin:.4f}")

worst = 0.0
for _ in range(200):
    u = rng.normal(size=space.n)
    u *= rng.uniform(0, 0.999) * margin / liplab.lip_field(space, u, 1.0).max
    worst = max(worst, liplab.singular_set(space, f + u, 1.0, tau).measure)
print(f"largest m(S(f + u)) over 200 draws: {worst:.4f} < {r}")
