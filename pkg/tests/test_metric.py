import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from liplab import (EmptySet, MetricSpace, NonAdjacentStep, NotQuasiConvex, gen_grid, gen_path,
                    gen_random_geometric, length_distance, length_distance_fw, path_length,
                    quasi_convexity_constant, set_distance, validate_metric)
from liplab.metric import analyze_space, distance_to_set

from conftest import brute_force_length_metric


class TestMetricSpace:

    def test_default_mass_is_uniform(self, path3):
        assert np.allclose(path3.mass, 1 / 3)

    def test_immutable(self, path3):
        with pytest.raises(ValueError):
            path3.dist[0, 1] = 7.0

    def test_rejects_bad_mass(self):
        with pytest.raises(ValueError):
            MetricSpace([[0, 1], [1, 0]], [(0, 1)], [0.7, 0.7])
        with pytest.raises(ValueError):
            MetricSpace([[0, 1], [1, 0]], [(0, 1)], [1.5, -0.5])

    def test_rejects_self_loops_and_out_of_range(self):
        with pytest.raises(ValueError):
            MetricSpace([[0, 1], [1, 0]], [(1, 1)])
        with pytest.raises(ValueError):
            MetricSpace([[0, 1], [1, 0]], [(0, 2)])

    def test_zero_mass_points_allowed(self):
        sp = MetricSpace([[0, 1], [1, 0]], [(0, 1)], [1.0, 0.0])
        assert sp.mass[1] == 0


class TestValidateMetric:

    def test_path_metric_ok(self, path3):
        assert validate_metric(path3).metric_ok

    def test_triangle_violation(self):
        d = [[0, 1, 5], [1, 0, 1], [5, 1, 0]]
        rep = validate_metric(MetricSpace(d, [(0, 1), (1, 2)]))
        assert not rep.metric_ok
        assert rep.violations == [("triangle", 0, 1, 2)]

    def test_single_point(self):
        rep = validate_metric(gen_path(1))
        assert rep.metric_ok and rep.violations == []

    def test_asymmetry_and_positivity(self):
        d = [[0, 1, 1], [1.5, 0, 0], [1, 0, 0]]
        rep = validate_metric(MetricSpace(d))
        kinds = {v[0] for v in rep.violations}
        assert {"symmetry", "positivity"} <= kinds


class TestPathLength:

    def test_sum_of_edges(self, path3):
        assert path_length(path3, [0, 1, 2]) == 2.0

    def test_single_point(self, path3):
        assert path_length(path3, [0]) == 0.0

    def test_backtracking_counts(self, path3):
        assert path_length(path3, [0, 1, 0, 1]) == 3.0

    def test_non_adjacent(self, path3):
        with pytest.raises(NonAdjacentStep):
            path_length(path3, [0, 2])

    @given(st.lists(st.integers(0, 3), min_size=1, max_size=12))
    def test_at_least_chord(self, walk):
        sp = gen_grid(2, 2)
        # turn an arbitrary id sequence into an edge walk
        path = [walk[0]]
        for p in walk[1:]:
            if sp.is_edge(path[-1], p):
                path.append(p)
        assert path_length(sp, path) >= sp.dist[path[0], path[-1]] - 1e-12


class TestLengthDistance:

    def test_path_graph_is_length_space(self, path3):
        assert np.array_equal(length_distance(path3), path3.dist)

    def test_grid_diagonal(self, grid2):
        dL = length_distance(grid2)
        assert dL[0, 3] == 2.0
        assert grid2.dist[0, 3] == pytest.approx(math.sqrt(2), abs=1e-15)
        assert np.array_equal(dL, brute_force_length_metric(grid2))

    def test_disconnected(self):
        sp = MetricSpace([[0, 1], [1, 0]], [])
        assert length_distance(sp)[0, 1] == math.inf

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_brute_force(self, seed):
        sp = gen_random_geometric(8, 0.5, seed)
        assert np.allclose(length_distance(sp), brute_force_length_metric(sp), rtol=0, atol=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_two_algorithms_agree(self, seed):
        sp = gen_random_geometric(120, 0.15, seed)
        a, b = length_distance(sp), length_distance_fw(sp)
        assert np.array_equal(np.isinf(a), np.isinf(b))
        fin = np.isfinite(a)
        assert np.max(np.abs(a[fin] - b[fin])) <= 1e-12

    def test_threads_bit_identical(self, monkeypatch):
        sp = gen_random_geometric(90, 0.2, 3)
        one = length_distance(sp, threads=1)
        assert np.array_equal(one, length_distance(sp, threads=4))
        monkeypatch.setenv("LIPLAB_THREADS", "3")
        assert np.array_equal(one, length_distance(sp))

    def test_dl_is_metric(self):
        sp = gen_grid(4, 5)
        dL = length_distance(sp)
        assert validate_metric(sp.with_dist(dL)).metric_ok


class TestQuasiConvexity:

    def test_path(self):
        sp = gen_path(5)
        assert quasi_convexity_constant(sp, length_distance(sp)).C == 1.0

    def test_grid2(self, grid2):
        rep = quasi_convexity_constant(grid2, brute_force_length_metric(grid2))
        assert rep.C == pytest.approx(math.sqrt(2), abs=1e-12)
        assert rep.worst_pair == (0, 3)

    def test_disconnected(self):
        sp = MetricSpace([[0, 1], [1, 0]], [])
        rep = quasi_convexity_constant(sp, length_distance(sp))
        assert rep.C == math.inf and not rep.connected
        with pytest.raises(NotQuasiConvex):
            quasi_convexity_constant(sp, length_distance(sp), strict=True)

    def test_ties_lexicographic(self):
        # the two diagonals of the square tie; (0, 3) precedes (1, 2)
        rep = quasi_convexity_constant(gen_grid(2, 2), length_distance(gen_grid(2, 2)))
        assert rep.worst_pair == (0, 3)

    def test_sandwich(self):
        sp = gen_random_geometric(60, 0.3, 11)
        rep = analyze_space(sp)
        dL = length_distance(sp)
        assert rep.metric_ok
        assert np.all(sp.dist <= dL + 1e-9)
        if rep.connected:
            assert np.all(dL <= rep.C * sp.dist + 1e-9)
            assert rep.C >= 1 - 1e-12


class TestSetDistance:

    def test_self(self, path3):
        assert set_distance(path3.dist, 1, [1]) == 0.0

    def test_far(self, path3):
        assert set_distance(path3.dist, 2, [0]) == 2.0

    def test_empty(self, path3):
        with pytest.raises(EmptySet):
            set_distance(path3.dist, 0, [])

    @given(st.sets(st.integers(0, 8), min_size=1), st.sets(st.integers(0, 8), min_size=1),
           st.integers(0, 8))
    @settings(max_examples=50)
    def test_union_is_min(self, A, B, x):
        d = gen_grid(3, 3).dist
        assert set_distance(d, x, A | B) == min(set_distance(d, x, A), set_distance(d, x, B))

    def test_vector_form(self, path3):
        assert distance_to_set(path3.dist, [2]).tolist() == [2.0, 1.0, 0.0]
