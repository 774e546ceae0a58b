import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from liplab import (dinf_norm, gen_grid, gen_path, gen_random_geometric, global_lip, lip_field,
                    pointwise_lip, singular_set)
from liplab.lipschitz import singular_measure

from conftest import brute_lip, explicit_space

P4 = gen_path(4)
MIXED = (0.0, 0.0, 1.0)


def test_global_lip_constant():
    assert global_lip(P4, np.full(4, 3.0)) == 0.0


def test_global_lip_linear():
    assert global_lip(P4, np.arange(4.0)) == 1.0


def test_global_lip_squares():
    f = np.arange(4.0) ** 2
    oracle = max(abs(f[i] - f[j]) / abs(i - j) for i in range(4) for j in range(i + 1, 4))
    # the steepest pair is (p2, p3), not the endpoints
    assert oracle == 5.0
    assert global_lip(P4, f) == oracle


def test_global_lip_single_point():
    assert global_lip(gen_path(1), [5.0]) == 0.0


@pytest.mark.parametrize("h", [0.5, 1, 3])
def test_pointwise_constant(h):
    assert all(pointwise_lip(P4, np.ones(4), h, x) == 0 for x in range(4))


def test_pointwise_linear():
    assert lip_field(gen_path(3), [0.0, 1.0, 2.0], 1).lip.tolist() == [1.0, 1.0, 1.0]


def test_pointwise_mixed(path3):
    want = [brute_lip(path3, MIXED, 1, x) for x in range(3)]
    assert want == [0.0, 1.0, 1.0]
    assert [pointwise_lip(path3, MIXED, 1, x) for x in range(3)] == want
    assert lip_field(path3, MIXED, 1).lip.tolist() == want


def test_fallback_records_radius():
    sp = explicit_space([[0, 2, 3], [2, 0, 2.5], [3, 2.5, 0]])
    prof = lip_field(sp, [0.0, 1.0, 3.0], 1.0)
    assert prof.h_used.tolist() == [2.0, 2.0, 2.5]
    assert prof.lip.tolist() == [0.5, 0.5, 2 / 2.5]


def test_dinf_norm(path3):
    assert dinf_norm(path3, np.zeros(3), 1) == 0
    assert dinf_norm(path3, [0.0, 1.0, 2.0], 1) == 3.0
    assert dinf_norm(path3, MIXED, 1) == 2.0


def test_singular_sets(path3):
    s = singular_set(path3, np.full(3, 2.0), 1, 0.3)
    assert s.members.tolist() == [0, 1, 2] and s.measure == 1.0
    s = singular_set(path3, [0.0, 1.0, 2.0], 1, 0)
    assert len(s) == 0 and s.measure == 0.0
    s = singular_set(path3, MIXED, 1, 0)
    assert s.members.tolist() == [0] and s.measure == pytest.approx(1 / 3, abs=1e-15)
    assert singular_measure(path3, s) == s.measure


def test_negative_tau_rejected(path3):
    with pytest.raises(ValueError):
        singular_set(path3, MIXED, 1, -1)


def test_profile_dict(path3):
    d = lip_field(path3, MIXED, 1).to_dict()
    assert d == {"h": 1.0, "lip": [0.0, 1.0, 1.0], "h_used": [1.0, 1.0, 1.0], "max": 1.0}


# dyadic values on spaces whose in-ball distances are powers of two make every
# quotient exact, so the inequalities below can be asserted without slack
DYADIC_SPACES = [(gen_grid(4, 4), 1.0), (gen_path(9), 1.0),
                 (gen_path(9).with_dist(gen_path(9).dist / 4), 0.5)]
dyadic = st.integers(-2 ** 20, 2 ** 20).map(lambda k: k / 16)


@given(st.sampled_from(DYADIC_SPACES), st.data())
@settings(max_examples=150, deadline=None)
def test_subadditivity_exact(case, data):
    sp, h = case
    f = np.array(data.draw(st.lists(dyadic, min_size=sp.n, max_size=sp.n)))
    g = np.array(data.draw(st.lists(dyadic, min_size=sp.n, max_size=sp.n)))
    lf, lg, ld = (lip_field(sp, v, h).lip for v in (f, g, f - g))
    assert np.all(lf <= lg + ld)


@given(st.integers(0, 50), st.integers(-30, 30), st.booleans())
@settings(max_examples=60, deadline=None)
def test_homogeneity_power_of_two(seed, k, neg):
    sp = gen_random_geometric(25, 0.4, seed)
    f = np.random.default_rng(seed).normal(size=25)
    c = -(2.0 ** k) if neg else 2.0 ** k
    assert np.array_equal(lip_field(sp, c * f, 0.3).lip, abs(c) * lip_field(sp, f, 0.3).lip)


@given(st.integers(0, 50), st.floats(-10, 10, allow_nan=False, allow_subnormal=False))
@settings(max_examples=60, deadline=None)
def test_homogeneity(seed, c):
    sp = gen_random_geometric(25, 0.4, seed)
    f = np.random.default_rng(seed).normal(size=25)
    a = lip_field(sp, c * f, 0.3).lip
    b = abs(c) * lip_field(sp, f, 0.3).lip
    # rounding of c*f is relative to |c f|, not to the difference quotient
    scale = abs(c) * 2 * np.abs(f).max() / sp.dist[sp.dist > 0].min()
    assert np.all(np.abs(a - b) <= 1e-15 * (b + scale))


@given(st.integers(0, 50), st.floats(0.2, 0.7), st.floats(0.0, 0.7))
@settings(max_examples=60, deadline=None)
def test_monotone_in_h(seed, h1, dh):
    sp = gen_random_geometric(20, 0.4, seed)
    f = np.random.default_rng(seed).normal(size=20)
    near = lip_field(sp, f, h1)
    far = lip_field(sp, f, h1 + dh)
    if np.all(near.h_used == h1):
        assert np.all(near.lip <= far.lip)


@given(st.integers(0, 100))
@settings(max_examples=40, deadline=None)
def test_bounded_by_global(seed):
    sp = gen_random_geometric(15, 0.5, seed)
    f = np.random.default_rng(seed).normal(size=15)
    L = global_lip(sp, f)
    assert lip_field(sp, f, 0.3).max <= L + 1e-12
    # all pairs adjacent and h >= diameter: the two constants coincide
    assert lip_field(sp, f, float(sp.dist.max())).max == L


@given(arrays(float, 6, elements=st.floats(-5, 5)), st.floats(0, 3), st.floats(0, 3))
@settings(max_examples=60)
def test_singular_set_monotone_in_tau(f, t1, t2):
    sp = gen_path(6)
    lo, hi = sorted((t1, t2))
    a, b = singular_set(sp, f, 1, lo).mask, singular_set(sp, f, 1, hi).mask
    assert np.all(~a | b)
