"""
A shrinking-measure sweep
=========================

Perturb the zero field on a 10x10 grid once for each r_k = 2^-k with budget
delta_k = 2^-k. Every step lands below its target measure.
"""

import numpy as np

import liplab
from liplab.cli import demo_table

space = liplab.gen_grid(10, 10)
schedule = [(2.0 ** -k, 2.0 ** -k) for k in range(1, 9)]
steps = liplab.residual_demo(space, np.zeros(space.n), schedule, tau=1e-5, h=1.0)
print(demo_table(steps))

# A threshold too coarse for the small budgets fails only those steps.
steps = liplab.residual_demo(space, np.zeros(space.n), schedule, tau=2e-4, h=1.0)
print(demo_table(steps))
