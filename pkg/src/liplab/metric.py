"""Finite metric measure spaces, curve lengths and the induced length metric.

A :class:`MetricSpace` carries three pieces of data:

* ``dist`` -- the chord distance ``d`` between every pair of points,
* ``edges`` -- the admissible direct steps of a curve, each with length
  ``dist[u, v]``,
* ``mass`` -- a probability vector (zero-mass points are allowed).

Curves are edge paths, so the length of a curve is the sum of the chord
distances along it, and the length metric ``d_L`` is the shortest-path
distance of the weighted edge graph.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .errors import EmptySet, NonAdjacentStep, NotQuasiConvex

METRIC_TOL = 1e-9
MASS_TOL = 1e-12
C_SLACK = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class MetricSpace:
    """An immutable finite metric measure space.

    Parameters
    ----------
    dist : array_like, shape (n, n)
        Chord distances. Metric axioms are not enforced here; use
        :func:`validate_metric` to check them.
    edges : iterable of (int, int)
        Unordered pairs of points that a curve may step between directly.
    mass : array_like, shape (n,), optional
        Nonnegative point masses summing to 1. Defaults to uniform.
    labels : sequence of str, optional
        Per-point names, carried through file round trips.
    """

    dist: np.ndarray
    edges: np.ndarray
    mass: np.ndarray
    labels: Optional[tuple] = None
    _neighbors: tuple = field(init=False, repr=False)

    def __init__(self, dist, edges=(), mass=None, labels=None):
        dist = np.array(dist, dtype=float)
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1] or dist.shape[0] < 1:
            raise ValueError(f"dist must be a nonempty square matrix, got shape {dist.shape}")
        n = dist.shape[0]

        pairs = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for {n} points")
            if u == v:
                raise ValueError(f"self-loop edge ({u}, {u})")
            pairs.add((min(u, v), max(u, v)))
        edge_arr = np.array(sorted(pairs), dtype=np.intp).reshape(-1, 2)

        if mass is None:
            mass = np.full(n, 1.0 / n)
        mass = np.array(mass, dtype=float)
        if mass.shape != (n,):
            raise ValueError(f"mass must have shape ({n},), got {mass.shape}")
        if np.any(mass < 0) or not np.all(np.isfinite(mass)):
            raise ValueError("masses must be finite and nonnegative")
        if abs(math.fsum(mass) - 1.0) > MASS_TOL:
            raise ValueError(f"masses sum to {math.fsum(mass)!r}, expected 1")

        if labels is not None:
            labels = tuple(labels)
            if len(labels) != n:
                raise ValueError(f"expected {n} labels, got {len(labels)}")

        nbrs = [set() for _ in range(n)]
        for u, v in edge_arr:
            nbrs[u].add(int(v))
            nbrs[v].add(int(u))

        object.__setattr__(self, "dist", _frozen(dist))
        object.__setattr__(self, "edges", _frozen(edge_arr))
        object.__setattr__(self, "mass", _frozen(mass))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_neighbors", tuple(frozenset(s) for s in nbrs))

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def neighbors(self, x: int) -> frozenset:
        return self._neighbors[x]

    def is_edge(self, u: int, v: int) -> bool:
        return v in self._neighbors[u]

    def edge_lengths(self) -> np.ndarray:
        return self.dist[self.edges[:, 0], self.edges[:, 1]]

    def with_dist(self, dist) -> "MetricSpace":
        """Same edges, masses and labels over a different chord metric."""
        return MetricSpace(dist, self.edges, self.mass, self.labels)

    def __repr__(self):
        return f"MetricSpace(n={self.n}, edges={len(self.edges)})"


@dataclass
class SpaceReport:
    """Diagnostics for a space.

    ``validate_metric`` fills the axiom fields, ``quasi_convexity_constant``
    fills the connectivity fields; ``analyze_space`` fills both.
    """

    metric_ok: Optional[bool] = None
    violations: list = field(default_factory=list)
    n_violations: int = 0
    connected: Optional[bool] = None
    C: Optional[float] = None
    worst_pair: Optional[tuple] = None


def as_mask(points, n: int) -> np.ndarray:
    """Normalize a point set (ids or boolean mask) to a boolean mask."""
    if isinstance(points, (set, frozenset)):
        points = sorted(points)
    a = np.asarray(points)
    if a.dtype == bool:
        if a.shape != (n,):
            raise ValueError(f"mask must have shape ({n},), got {a.shape}")
        return a.copy()
    mask = np.zeros(n, dtype=bool)
    ids = a.astype(np.intp).ravel()
    if ids.size and (ids.min() < 0 or ids.max() >= n):
        raise ValueError(f"point ids out of range [0, {n})")
    mask[ids] = True
    return mask


def validate_metric(space: MetricSpace, tol: float = METRIC_TOL,
                    max_report: int = 1000) -> SpaceReport:
    """Check the metric axioms on ``space.dist``.

    Violations are returned as report content, never raised. Each entry is a
    tuple ``(kind, i, j)`` or ``("triangle", i, j, k)``, the latter meaning
    ``d[i, k] > d[i, j] + d[j, k] + tol`` (reported once, with ``i < k``).
    At most ``max_report`` violations are listed; ``n_violations`` counts all.
    """
    d = space.dist
    n = space.n
    found = []
    count = 0

    def note(items):
        nonlocal count
        count += len(items)
        room = max_report - len(found)
        if room > 0:
            found.extend(items[:room])

    diag = np.flatnonzero(np.abs(np.diag(d)) > tol)
    note([("identity", int(i), int(i)) for i in diag])

    iu, ju = np.triu_indices(n, 1)
    asym = np.abs(d[iu, ju] - d[ju, iu]) > tol
    note([("symmetry", int(i), int(j)) for i, j in zip(iu[asym], ju[asym])])
    nonpos = (d[iu, ju] <= 0) | (d[ju, iu] <= 0) | ~np.isfinite(d[iu, ju])
    note([("positivity", int(i), int(j)) for i, j in zip(iu[nonpos], ju[nonpos])])

    upper = np.triu(np.ones((n, n), dtype=bool), 1)
    for j in range(n):
        bad = d > d[:, j, None] + d[None, j, :] + tol
        bad &= upper
        bad[j, :] = False
        bad[:, j] = False
        if bad.any():
            ii, kk = np.nonzero(bad)
            note([("triangle", int(i), j, int(k)) for i, k in zip(ii, kk)])

    return SpaceReport(metric_ok=count == 0, violations=found, n_violations=count)


def path_length(space: MetricSpace, path: Sequence[int]) -> float:
    """Length of an edge path: the sum of chord distances between consecutive points."""
    path = [int(p) for p in path]
    if not path:
        raise ValueError("a path has at least one point")
    total = 0.0
    for a, b in zip(path, path[1:]):
        if not space.is_edge(a, b):
            raise NonAdjacentStep(f"({a}, {b}) is not an edge")
        total += space.dist[a, b]
    return total


def edge_graph(space: MetricSpace) -> csr_matrix:
    n = space.n
    u, v = space.edges[:, 0], space.edges[:, 1]
    w = space.dist[u, v]
    return csr_matrix((np.r_[w, w], (np.r_[u, v], np.r_[v, u])), shape=(n, n))


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("LIPLAB_THREADS", "1")))
    except ValueError:
        return 1


def length_distance(space: MetricSpace, threads: Optional[int] = None) -> np.ndarray:
    """All-pairs length metric ``d_L`` by Dijkstra from every source.

    Unreachable pairs are ``inf``. ``threads`` (default: ``LIPLAB_THREADS``,
    else 1) splits the sources into contiguous blocks; each row is computed
    independently, so the result does not depend on the thread count.
    """
    graph = edge_graph(space)
    n = space.n
    threads = threads or _threads()
    if threads <= 1 or n < 2 * threads:
        out = dijkstra(graph, directed=False)
    else:
        blocks = np.array_split(np.arange(n), threads)
        with ThreadPoolExecutor(threads) as pool:
            rows = pool.map(lambda idx: dijkstra(graph, directed=False, indices=idx), blocks)
            out = np.vstack(list(rows))
    out = np.asarray(out, dtype=float)
    np.fill_diagonal(out, 0.0)
    return out


def length_distance_fw(space: MetricSpace) -> np.ndarray:
    """All-pairs length metric by Floyd-Warshall relaxation.

    Independent of :func:`length_distance`; used as a cross-check oracle.
    O(n^3) time, O(n^2) memory.
    """
    n = space.n
    w = np.full((n, n), np.inf)
    u, v = space.edges[:, 0], space.edges[:, 1]
    w[u, v] = space.dist[u, v]
    w[v, u] = space.dist[u, v]
    np.fill_diagonal(w, 0.0)
    via = np.empty_like(w)
    for k in range(n):
        np.add(w[:, k, None], w[k], out=via)
        np.minimum(w, via, out=w)
    return w


def quasi_convexity_constant(space: MetricSpace, dL: np.ndarray,
                             strict: bool = False) -> SpaceReport:
    """Smallest ``C`` with ``d_L <= C * d``: the max of ``d_L / d`` over distinct pairs.

    A disconnected edge graph gives ``C = inf`` and ``connected = False``;
    with ``strict=True`` that raises :class:`NotQuasiConvex` instead. Ties for
    the worst pair go to the lexicographically smallest ``(i, j)``, ``i < j``.
    A one-point space reports ``C = 1`` and no worst pair.
    """
    n = space.n
    if n == 1:
        return SpaceReport(connected=True, C=1.0, worst_pair=None)
    iu, ju = np.triu_indices(n, 1)
    ratio = dL[iu, ju] / space.dist[iu, ju]
    k = int(np.argmax(ratio))
    C = float(ratio[k])
    connected = bool(np.all(np.isfinite(dL)))
    if not connected:
        if strict:
            raise NotQuasiConvex("edge graph is disconnected; d_L is infinite for some pair")
        C = math.inf
    return SpaceReport(connected=connected, C=C, worst_pair=(int(iu[k]), int(ju[k])))


def analyze_space(space: MetricSpace, dL: Optional[np.ndarray] = None) -> SpaceReport:
    """Full report: metric axioms, connectivity and quasi-convexity constant."""
    report = validate_metric(space)
    if dL is None:
        dL = length_distance(space)
    qc = quasi_convexity_constant(space, dL)
    report.connected, report.C, report.worst_pair = qc.connected, qc.C, qc.worst_pair
    return report


def set_distance(dmat: np.ndarray, x: int, A: Iterable[int]) -> float:
    """``inf`` of ``dmat[x, w]`` over ``w`` in ``A``; raises :class:`EmptySet` for empty ``A``."""
    mask = as_mask(A, dmat.shape[0])
    if not mask.any():
        raise EmptySet("distance to the empty set is undefined")
    return float(dmat[x, mask].min())


def distance_to_set(dmat: np.ndarray, A) -> np.ndarray:
    """Vector of ``set_distance(dmat, x, A)`` over all ``x``."""
    mask = as_mask(A, dmat.shape[0])
    if not mask.any():
        raise EmptySet("distance to the empty set is undefined")
    return dmat[:, mask].min(axis=1)
