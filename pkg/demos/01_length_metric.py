"""
Length metric and quasi-convexity
=================================

Chord distance versus shortest-path length on a few generated spaces.
"""

import numpy as np

import liplab

# On a 4-neighbour grid the diagonal of a unit square has chord length
# sqrt(2) but every edge path between its corners has length 2.
grid = liplab.gen_grid(2, 2)
dL = liplab.length_distance(grid)
print("chord d(0, 3) =", grid.dist[0, 3])
print("length d_L(0, 3) =", dL[0, 3])

# The quasi-convexity constant is the worst ratio d_L / d.
for name, space in [("path 10", liplab.gen_path(10)),
                    ("grid 2x2", grid),
                    ("grid 12x12", liplab.gen_grid(12, 12)),
                    ("sierpinski 4", liplab.gen_sierpinski(4)),
                    ("random geometric", liplab.gen_random_geometric(300, 0.12, 3))]:
    rep = liplab.analyze_space(space)
    print(f"{name:>18}: n={space.n:4d}  metric_ok={rep.metric_ok}  C={rep.C:.6f}  worst={rep.worst_pair}")

# d <= d_L <= C d holds entrywise
space = liplab.gen_sierpinski(3)
dL = liplab.length_distance(space)
C = liplab.quasi_convexity_constant(space, dL).C
print("sandwich holds:", bool(np.all(space.dist <= dL + 1e-9) and np.all(dL <= C * space.dist + 1e-9)))

# Dijkstra per source against Floyd-Warshall
print("max |dijkstra - floyd_warshall| =",
      np.abs(dL - liplab.length_distance_fw(space)).max())
