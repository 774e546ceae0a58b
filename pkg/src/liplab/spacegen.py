"""Deterministic generators of test spaces.

All generators give uniform masses. Random geometric spaces draw their
coordinates from SplitMix64 so that the same seed gives the same space on any
platform and in any language:

    state += 0x9E3779B97F4A7C15            (mod 2**64)
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z = z ^ (z >> 31)
    uniform = (z >> 11) * 2**-53

Point ``i`` takes the uniforms ``2i`` and ``2i + 1`` as its ``x`` and ``y``.
"""
from __future__ import annotations

import math

import numpy as np

from .metric import MetricSpace, length_distance, quasi_convexity_constant

_MASK64 = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * 2.0 ** -53


def _euclidean(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt((diff ** 2).sum(axis=-1))


def gen_path(n: int) -> MetricSpace:
    """``n`` points on a line with unit edges; chord metric = path metric."""
    if n < 1:
        raise ValueError("n must be at least 1")
    idx = np.arange(n, dtype=float)
    dist = np.abs(idx[:, None] - idx[None, :])
    return MetricSpace(dist, [(i, i + 1) for i in range(n - 1)])


def gen_grid(rows: int, cols: int) -> MetricSpace:
    """Unit grid with 4-neighbour edges and Euclidean chord metric; id = row * cols + col."""
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be at least 1")
    rr, cc = np.divmod(np.arange(rows * cols), cols)
    pts = np.column_stack([rr, cc]).astype(float)
    edges = []
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            if c + 1 < cols:
                edges.append((i, i + 1))
            if r + 1 < rows:
                edges.append((i, i + cols))
    return MetricSpace(_euclidean(pts), edges)


def random_points(n: int, seed: int) -> np.ndarray:
    rng = SplitMix64(seed)
    return np.array([[rng.uniform(), rng.uniform()] for _ in range(n)]).reshape(n, 2)


def gen_random_geometric(n: int, radius: float, seed: int) -> MetricSpace:
    """Seeded uniform points in the unit square; edges join pairs within ``radius``.

    The result may be disconnected; :func:`liplab.metric.quasi_convexity_constant`
    reports that as ``C = inf``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not radius > 0:
        raise ValueError("radius must be positive")
    dist = _euclidean(random_points(n, seed))
    iu, ju = np.triu_indices(n, 1)
    close = dist[iu, ju] <= radius
    return MetricSpace(dist, zip(iu[close], ju[close]))


def gen_sierpinski(level: int) -> MetricSpace:
    """Level-``level`` Sierpinski gasket graph in the plane, edges of length ``2**-level``.

    Vertices are the lattice points ``a * e1 + b * e2`` (scaled by ``2**-level``,
    ``e1 = (1, 0)``, ``e2 = (1/2, sqrt(3)/2)``) that are corners of the smallest
    triangles, numbered in lexicographic ``(a, b)`` order.
    """
    if level < 0:
        raise ValueError("level must be nonnegative")
    corners = set()
    tri_edges = set()

    def split(a, b, s):
        if s == 1:
            tri = [(a, b), (a + 1, b), (a, b + 1)]
            corners.update(tri)
            tri_edges.update({(tri[0], tri[1]), (tri[0], tri[2]), (tri[1], tri[2])})
            return
        s //= 2
        split(a, b, s)
        split(a + s, b, s)
        split(a, b + s, s)

    split(0, 0, 2 ** level)
    order = sorted(corners)
    index = {p: i for i, p in enumerate(order)}
    scale = 2.0 ** -level
    pts = np.array([[(a + 0.5 * b) * scale, b * (math.sqrt(3) / 2) * scale] for a, b in order])
    edges = [(index[p], index[q]) for p, q in tri_edges]
    return MetricSpace(_euclidean(pts), edges)


def snowflake(space: MetricSpace, alpha: float) -> MetricSpace:
    """Raise every chord distance to the power ``alpha``; edges and masses are kept."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    return space.with_dist(space.dist ** alpha)


def gen_space(kind: str, **kw) -> MetricSpace:
    """Dispatch on ``kind`` in {path, grid, random_geometric, sierpinski}."""
    if kind == "path":
        return gen_path(kw["n"])
    if kind == "grid":
        return gen_grid(kw["rows"], kw["cols"])
    if kind == "random_geometric":
        return gen_random_geometric(kw["n"], kw["radius"], kw["seed"])
    if kind == "sierpinski":
        return gen_sierpinski(kw["level"])
    raise ValueError(f"unknown space kind {kind!r}")


def connected_random_geometric(n: int, radius: float, seed: int, max_C: float = math.inf,
                               tries: int = 1000) -> tuple:
    """First seed at or after ``seed`` whose space is connected with ``C <= max_C``.

    Returns ``(space, seed_used, dL)``.
    """
    for s in range(seed, seed + tries):
        sp = gen_random_geometric(n, radius, s)
        dL = length_distance(sp)
        if quasi_convexity_constant(sp, dL).C <= max_C:
            return sp, s, dL
    raise RuntimeError(f"no connected space with C <= {max_C} in {tries} seeds")
