"""
Shrinking the singular set
==========================

A field that is flat on a third of a grid gets a small push along the
length distance to the far region. Its singular set disappears while the
D-infinity distance stays within budget.
"""

import numpy as np

import liplab

space = liplab.gen_grid(9, 9)
rows = np.arange(space.n) // 9
f = np.maximum(rows - 3, 0).astype(float)          # flat on rows 0..3

params = liplab.PerturbParams(delta=0.5, r=0.2, tau=1e-3, h=1.0)
before = liplab.singular_set(space, f, params.h, params.tau)
print(f"m(S(f)) = {before.measure:.3f} over {len(before)} points")

res = liplab.perturb(space, f, params)
print(f"epsilon = {res.epsilon}, lambda = {res.lam:.5f}, M = {res.M}, C = {res.C:.5f}")
print("K (far region) size:", len(res.K))
for key, val in res.to_report()["flags"].items():
    print(f"  {key:>16}: {val}")
v = res.verification
print(f"dinf(f, g) = {v.dinf_distance:.5f} <= {params.delta}")
print(f"m(S(g)) = {v.singular_measure_after} < {params.r}")

# Pushing tau up to half of lambda makes the construction impossible.
try:
    liplab.perturb(space, f, liplab.PerturbParams(delta=0.5, r=0.2, tau=res.lam, h=1.0))
except liplab.ThresholdTooCoarse as exc:
    print("refused:", exc)
