"""Perturbing a Lipschitz function so that its singular set has small measure.

Given ``f``, a budget ``delta`` and a target ``r``, :func:`perturb` builds

    g = f + lam * ghat,    ghat(x) = d_L(x, K),

where ``K`` is the complement of an ``eps``-neighbourhood of the singular set
``S = S_tau(f)``. On ``S`` the added term has pointwise Lipschitz constant at
least ``lam``, which lifts every singular point above ``tau`` as long as
``lam > 2 * tau``; ``eps`` is chosen so that the annulus around ``S`` has mass
below ``r``. :func:`openness_margin` gives the radius of the ball around ``f``
that stays below ``r``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import EmptySet, NotQuasiConvex, ThresholdTooCoarse
from .lipschitz import _field, dinf_norm, lip_field, singular_set
from .metric import MetricSpace, as_mask, distance_to_set, length_distance, quasi_convexity_constant


@dataclass(frozen=True)
class PerturbParams:
    delta: float
    r: float
    tau: float
    h: float
    epsilon: Optional[float] = None

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta!r}")
        if not 0 < self.r <= 1:
            raise ValueError(f"r must lie in (0, 1], got {self.r!r}")
        if not self.tau >= 0:
            raise ValueError(f"tau must be nonnegative, got {self.tau!r}")
        if not self.h > 0:
            raise ValueError(f"h must be positive, got {self.h!r}")
        if self.epsilon is not None and not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon!r}")


@dataclass
class VerifyReport:
    dinf_distance: float
    norm_ok: bool
    singular_measure_before: float
    singular_measure_after: float
    measure_ok: bool
    inclusion_ok: bool
    atom_free: bool

    @property
    def all_ok(self) -> bool:
        return self.norm_ok and self.measure_ok and self.inclusion_ok and self.atom_free


@dataclass
class PerturbResult:
    g: np.ndarray
    epsilon: float
    lam: float
    M: float
    C: float
    ghat: np.ndarray
    K: np.ndarray
    params: PerturbParams
    singular: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.intp))
    empty_k_fallback: bool = False
    epsilon_warning: bool = False
    verification: Optional[VerifyReport] = None

    def to_report(self) -> dict:
        """The perturb report in its file layout."""
        v = self.verification
        p = self.params
        return {
            "epsilon": self.epsilon, "lambda": self.lam, "M": self.M, "C": self.C,
            "tau": p.tau, "h": p.h, "delta": p.delta, "r": p.r,
            "dinf_distance": v.dinf_distance,
            "singular_measure_before": v.singular_measure_before,
            "singular_measure_after": v.singular_measure_after,
            "flags": {
                "norm_ok": v.norm_ok, "measure_ok": v.measure_ok,
                "inclusion_ok": v.inclusion_ok, "atom_free": v.atom_free,
                "empty_k_fallback": self.empty_k_fallback,
                "epsilon_warning": self.epsilon_warning,
            },
        }


def eps_neighborhood(dmat: np.ndarray, S, eps: float) -> np.ndarray:
    """Ids of ``{z : d(z, S) < eps}`` (strict)."""
    return np.flatnonzero(distance_to_set(dmat, S) < eps)


def level_set_masses(dmat: np.ndarray, S, mass) -> list:
    """Distinct values of ``d(., S)`` with the mass carried by each, ascending."""
    dS = distance_to_set(dmat, S)
    mass = np.asarray(mass, dtype=float)
    values, inverse = np.unique(dS, return_inverse=True)
    return [(float(v), math.fsum(mass[inverse == i])) for i, v in enumerate(values)]


def select_epsilon(dmat: np.ndarray, S, mass, r: float) -> float:
    """A radius that misses every attained value of ``d(., S)``.

    With attained values ``0 = v_0 < v_1 < ... < v_m`` the result is the
    midpoint of ``(v_j, v_{j+1})`` for the largest ``j < m`` such that the mass
    of ``{0 < d(., S) <= v_j}`` stays below ``r``. ``j = 0`` always qualifies,
    so a valid radius exists for every ``r > 0``; gaps between adjacent doubles
    are skipped since nothing lies strictly inside them. Stopping at ``j = m - 1``
    keeps the complement of the neighbourhood nonempty. When ``S`` is every
    point, the result is half the smallest positive pairwise distance (1.0 for
    a one-point space).
    """
    if not r > 0:
        raise ValueError(f"r must be positive, got {r!r}")
    levels = level_set_masses(dmat, S, mass)
    if len(levels) == 1:
        n = dmat.shape[0]
        if n == 1:
            return 1.0
        off = dmat[~np.eye(n, dtype=bool)]
        return 0.5 * float(off[off > 0].min())
    values = [v for v, _ in levels]
    mids = [0.5 * (a + b) for a, b in zip(values, values[1:])]
    j = 0
    annulus = 0.0
    for i in range(1, len(levels) - 1):
        annulus = math.fsum([annulus, levels[i][1]])
        if annulus >= r:
            break
        # adjacent doubles leave no room for a radius strictly between them
        if values[i] < mids[i] < values[i + 1]:
            j = i
    return mids[j]


def distance_to_complement(space: MetricSpace, dL: np.ndarray, K) -> np.ndarray:
    """``ghat(x) = d_L(x, K)``; zero exactly on ``K``."""
    mask = as_mask(K, space.n)
    if not mask.any():
        raise EmptySet("K is empty; distance to the empty set is undefined")
    ghat = dL[:, mask].min(axis=1)
    if not np.all(np.isfinite(ghat)):
        raise NotQuasiConvex("some points cannot reach K along edges")
    ghat[mask] = 0.0
    return ghat


def fallback_anchor(space: MetricSpace, dL: np.ndarray) -> int:
    """Point used as ``K`` when the neighbourhood swallows the whole space.

    Minimal mass first, so that the singular set of the result is confined to
    a lightest point; among those, the largest length-metric eccentricity;
    remaining ties go to the largest id.
    """
    light = np.flatnonzero(space.mass == space.mass.min())
    ecc = dL[light].max(axis=1)
    best = light[ecc == ecc.max()]
    return int(best[-1])


def _noop(f: np.ndarray, C: float, params: PerturbParams, n: int) -> PerturbResult:
    return PerturbResult(g=f.copy(), epsilon=0.0, lam=0.0, M=0.0, C=C,
                         ghat=np.zeros(n), K=np.arange(n), params=params)


def perturb(space: MetricSpace, f, params: PerturbParams,
            dL: Optional[np.ndarray] = None) -> PerturbResult:
    """Build ``g = f + lam * ghat`` with ``m(S_tau(g)) < r`` and ``|g - f|_Dinf <= delta``.

    ``lam = delta / (2 * max(M, C, 1))`` where ``M = max ghat`` and ``C`` is the
    quasi-convexity constant, so both halves of the norm stay below
    ``delta / 2``. If ``S_tau(f)`` is empty, ``g = f``.

    Raises
    ------
    NotQuasiConvex
        The edge graph is disconnected.
    ThresholdTooCoarse
        ``lam <= 2 * tau``.
    """
    f = _field(space, f)
    if dL is None:
        dL = length_distance(space)
    C = quasi_convexity_constant(space, dL, strict=True).C
    S = singular_set(space, f, params.h, params.tau)

    if not S.mask.any():
        result = _noop(f, C, params, space.n)
        result.verification = verify(space, f, result.g, params, result)
        return result

    dist = space.dist
    warn = False
    if params.epsilon is None:
        eps = select_epsilon(dist, S.mask, space.mass, params.r)
    else:
        eps = float(params.epsilon)
        dS = distance_to_set(dist, S.mask)
        annulus = (dS > 0) & (dS < eps)
        warn = (math.fsum(space.mass[annulus]) >= params.r
                or math.fsum(space.mass[dS == eps]) > 0)

    nbhd = as_mask(eps_neighborhood(dist, S.mask, eps), space.n)
    K = ~nbhd
    fallback = not K.any()
    if fallback:
        K[fallback_anchor(space, dL)] = True

    ghat = distance_to_complement(space, dL, K)
    M = float(ghat.max())
    lam = params.delta / (2.0 * max(M, C, 1.0))
    if not lam > 2 * params.tau:
        raise ThresholdTooCoarse(lam, params.tau)

    g = f + lam * ghat
    # rounding in f + lam*ghat can overshoot delta by a few ulps in tight cases
    for _ in range(16):
        if dinf_norm(space, g - f, params.h) <= params.delta:
            break
        lam *= 1.0 - 2.0 ** -40
        g = f + lam * ghat
    if not lam > 2 * params.tau:
        raise ThresholdTooCoarse(lam, params.tau)

    result = PerturbResult(g=g, epsilon=eps, lam=lam, M=M, C=C, ghat=ghat,
                           K=np.flatnonzero(K), params=params, singular=S.members,
                           empty_k_fallback=fallback, epsilon_warning=warn)
    result.verification = verify(space, f, g, params, result)
    return result


def verify(space: MetricSpace, f, g, params: PerturbParams,
           result: PerturbResult) -> VerifyReport:
    """Recheck a perturbation from ``f``, ``g``, ``params`` and ``result.epsilon`` alone."""
    f = _field(space, f)
    g = _field(space, g)
    h, tau = params.h, params.tau
    dinf = dinf_norm(space, g - f, h)
    Sf = singular_set(space, f, h, tau)
    Sg = singular_set(space, g, h, tau)

    if Sf.mask.any():
        dS = distance_to_set(space.dist, Sf.mask)
        annulus = (dS < result.epsilon) & ~Sf.mask
        inclusion = not np.any(Sg.mask & ~annulus)
        atom_free = math.fsum(space.mass[dS == result.epsilon]) == 0.0
    else:
        inclusion = not Sg.mask.any()
        atom_free = True

    return VerifyReport(
        dinf_distance=dinf,
        norm_ok=dinf <= params.delta,
        singular_measure_before=Sf.measure,
        singular_measure_after=Sg.measure,
        measure_ok=Sg.measure < params.r,
        inclusion_ok=bool(inclusion),
        atom_free=bool(atom_free),
    )


def openness_margin(space: MetricSpace, f, h: float, tau: float, r: float) -> float:
    """Radius ``delta*`` of a ball around ``f`` that stays inside ``{m(S_tau) < r}``.

    ``t*`` is the first value of the lip field at which the mass of
    ``{Lip_h f <= t}`` reaches ``r``; any ``u`` with ``sup Lip_h u < (t* - tau) / 2``
    leaves ``Lip_h (f + u) > tau`` wherever ``Lip_h f >= t*``. Returns 0 when
    ``m(S_tau(f)) >= r`` and ``inf`` when no value reaches ``r``.
    """
    prof = lip_field(space, f, h)
    if singular_set(space, f, h, tau).measure >= r:
        return 0.0
    values, inverse = np.unique(prof.lip, return_inverse=True)
    cum = 0.0
    for i, v in enumerate(values):
        cum = math.fsum([cum, *space.mass[inverse == i]])
        if cum >= r:
            return (float(v) - tau) / 2.0
    return math.inf


@dataclass
class DemoStep:
    k: int
    delta: float
    r: float
    result: Optional[PerturbResult] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.result is not None and self.result.verification.measure_ok


def residual_demo(space: MetricSpace, f, schedule: Sequence[tuple], tau: float,
                  h: float, dL: Optional[np.ndarray] = None) -> list:
    """Perturb the original ``f`` once per ``(delta_k, r_k)`` in ``schedule``.

    Steps are independent (not chained). A step that raises is recorded with
    its error message and the sweep continues.
    """
    rs = [r for _, r in schedule]
    if any(r <= 0 for r in rs) or any(b >= a for a, b in zip(rs, rs[1:])):
        raise ValueError("r_k must be positive and strictly decreasing")
    if dL is None:
        dL = length_distance(space)
    steps = []
    for k, (delta, r) in enumerate(schedule, start=1):
        step = DemoStep(k=k, delta=float(delta), r=float(r))
        try:
            step.result = perturb(space, f, PerturbParams(delta=delta, r=r, tau=tau, h=h), dL=dL)
        except (ThresholdTooCoarse, NotQuasiConvex) as exc:
            step.error = f"{type(exc).__name__}: {exc}"
        steps.append(step)
    return steps
