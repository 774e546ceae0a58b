"""Global and pointwise Lipschitz constants, the D-infinity norm and singular sets.

The pointwise constant ``Lip f(x)`` is a limsup as ``y -> x``, which has no
finite counterpart. We use the scale-``h`` surrogate

    Lip_h f(x) = max { |f(x) - f(y)| / d(x, y) : 0 < d(x, y) <= h }

and, when that punctured ball is empty, the max over the nearest neighbours
of ``x`` instead (recorded in ``h_used``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .metric import MetricSpace


@dataclass(frozen=True)
class LipProfile:
    h: float
    lip: np.ndarray
    h_used: np.ndarray

    @property
    def max(self) -> float:
        return float(self.lip.max()) if self.lip.size else 0.0

    def to_dict(self) -> dict:
        return {"h": float(self.h), "lip": [float(v) for v in self.lip],
                "h_used": [float(v) for v in self.h_used], "max": self.max}


@dataclass(frozen=True)
class SingularSet:
    """Points whose scale-``h`` Lipschitz constant is at most ``tau``."""

    mask: np.ndarray
    tau: float
    measure: float

    @property
    def members(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def __len__(self):
        return int(self.mask.sum())


def _field(space: MetricSpace, f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape != (space.n,):
        raise ValueError(f"field must have shape ({space.n},), got {f.shape}")
    if not np.all(np.isfinite(f)):
        raise ValueError("field values must be finite")
    return f


def global_lip(space: MetricSpace, f) -> float:
    """``LIP(f)``: the largest difference quotient over distinct pairs (0 for one point)."""
    f = _field(space, f)
    n = space.n
    if n == 1:
        return 0.0
    iu, ju = np.triu_indices(n, 1)
    return float(np.max(np.abs(f[iu] - f[ju]) / space.dist[iu, ju]))


def _neighbor_sets(space: MetricSpace, h: float):
    """Boolean matrix of the points each ``x`` maximizes over, and the radius used."""
    if not h > 0:
        raise ValueError(f"scale h must be positive, got {h!r}")
    d = space.dist
    pos = d > 0
    ball = pos & (d <= h)
    h_used = np.full(space.n, float(h))
    empty = ~ball.any(axis=1)
    if space.n > 1 and empty.any():
        dd = np.where(pos[empty], d[empty], np.inf)
        nearest = dd.min(axis=1)
        ball[empty] = dd == nearest[:, None]
        h_used[empty] = nearest
    return ball, h_used


def _row_lip(f: np.ndarray, d_row: np.ndarray, sel: np.ndarray, x: int) -> float:
    if not sel.any():
        return 0.0
    return float(np.max(np.abs(f[x] - f[sel]) / d_row[sel]))


def pointwise_lip(space: MetricSpace, f, h: float, x: int) -> float:
    """``Lip_h f(x)`` at a single point."""
    f = _field(space, f)
    ball, _ = _neighbor_sets(space, h)
    return _row_lip(f, space.dist[x], ball[x], x)


def lip_field(space: MetricSpace, f, h: float) -> LipProfile:
    """``Lip_h f`` at every point.

    Computes exactly the same floating-point quotients as :func:`pointwise_lip`.
    """
    f = _field(space, f)
    ball, h_used = _neighbor_sets(space, h)
    diff = np.abs(f[:, None] - f[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.where(ball, diff / space.dist, 0.0)
    lip = q.max(axis=1) if space.n > 1 else np.zeros(1)
    return LipProfile(h=float(h), lip=lip, h_used=h_used)


def dinf_norm(space: MetricSpace, f, h: float) -> float:
    """``sup |f| + sup Lip_h f``."""
    f = _field(space, f)
    return float(np.max(np.abs(f))) + lip_field(space, f, h).max


def singular_measure(space: MetricSpace, s) -> float:
    """Total mass of a point set (a :class:`SingularSet` or a boolean mask)."""
    mask = s.mask if isinstance(s, SingularSet) else np.asarray(s, dtype=bool)
    return math.fsum(space.mass[mask])


def singular_set(space: MetricSpace, f, h: float, tau: float) -> SingularSet:
    """``{x : Lip_h f(x) <= tau}`` together with its mass."""
    if tau < 0:
        raise ValueError(f"tau must be nonnegative, got {tau!r}")
    mask = lip_field(space, f, h).lip <= tau
    return SingularSet(mask=mask, tau=float(tau), measure=singular_measure(space, mask))
