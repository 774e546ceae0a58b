"""
Snowflaked paths are not uniformly quasi-convex
===============================================

Raising the path metric to a power alpha < 1 keeps it a metric but every edge
path becomes long compared to the chord: C = (n - 1)^(1 - alpha).
"""

import liplab

for alpha in (0.25, 0.5, 0.75):
    line = []
    for n in (3, 9, 33, 129, 513):
        sp = liplab.snowflake(liplab.gen_path(n), alpha)
        C = liplab.quasi_convexity_constant(sp, liplab.length_distance(sp)).C
        line.append(f"n={n}: C={C:8.3f} (pred {(n - 1) ** (1 - alpha):8.3f})")
    print(f"alpha={alpha}: " + "  ".join(line))

sp = liplab.snowflake(liplab.gen_grid(6, 6), 0.5)
print("snowflaked grid is still a metric:", liplab.validate_metric(sp).metric_ok)
