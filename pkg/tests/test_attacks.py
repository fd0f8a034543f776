import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stardrift.core import Point, Rng
from stardrift.generator import StarTrajectory, generate_challenge
from stardrift.kinematics import State
from stardrift import validate_params
from stardrift.attacks import heuristics as hx
from oracles import brute_force_scan


def state(*xy):
    return State(cursor=Point(0, 0), positions=[Point(x, y) for x, y in xy])


class TestDefaultGrid:
    def test_size(self):
        assert len(hx.default_grid()) == 84_100

    def test_first_element(self):
        grid = hx.default_grid()
        assert tuple(grid.positions[0]) == (5, 5)

    def test_bounds(self):
        grid = hx.default_grid()
        as_set = {tuple(p) for p in grid.positions}
        assert (294, 294) in as_set
        assert (295, 295) not in as_set
        assert (4, 5) not in as_set


class TestScores:
    def test_min_size_single_star(self):
        assert hx.score_min_size(state((10, 10))) == 0

    def test_min_size_two_stars(self):
        assert hx.score_min_size(state((0, 0), (10, 5))) == 15

    def test_min_size_empty_errors(self):
        with pytest.raises(ValueError):
            hx.score_min_size(state())

    def test_min_distribution_all_black(self):
        m = np.zeros((300, 300), dtype=bool)
        assert hx.score_min_distribution(m) == 144 * 625

    def test_min_distribution_one_half_full_tile(self):
        m = np.zeros((300, 300), dtype=bool)
        m.reshape(-1)[:0] = False
        # 312 white pixels inside the first 25x25 tile
        tile = np.zeros((25, 25), dtype=bool)
        tile.reshape(-1)[:312] = True
        m[0:25, 0:25] = tile
        assert hx.score_min_distribution(m) == abs(2 * 312 - 625) + 143 * 625
        assert hx.score_min_distribution(m) == 89_376

    def test_min_distribution_one_star(self):
        # a 3x3 star wholly inside one tile: 9 white pixels
        m = np.zeros((300, 300), dtype=bool)
        m[10:13, 10:13] = True
        assert hx.score_min_distribution(m) == 143 * 625 + abs(18 - 625)
        assert hx.score_min_distribution(m) == 89_982

    def test_min_distribution_shape_check(self):
        with pytest.raises(ValueError):
            hx.score_min_distribution(np.zeros((100, 100), dtype=bool))

    def test_min_sum_dist_pair(self):
        assert hx.score_min_sum_dist(state((0, 0), (3, 4))) == 10

    def test_min_sum_dist_collinear(self):
        assert hx.score_min_sum_dist(state((0, 0), (1, 0), (10, 0))) == 11

    def test_min_sum_dist_coincident(self):
        assert hx.score_min_sum_dist(state((5, 5), (5, 5), (5, 5))) == 0

    def test_min_sum_dist_needs_two(self):
        with pytest.raises(ValueError):
            hx.score_min_sum_dist(state((1, 1)))

    def test_all_sum_dist_pair(self):
        assert hx.score_all_sum_dist(state((0, 0), (3, 4))) == 10

    def test_all_sum_dist_single(self):
        assert hx.score_all_sum_dist(state((42, 42))) == 0

    def test_all_sum_dist_coincident(self):
        assert hx.score_all_sum_dist(state((5, 5), (5, 5), (5, 5), (5, 5))) == 0

    @given(st.lists(st.tuples(st.floats(0, 299), st.floats(0, 299)), min_size=2, max_size=12))
    @settings(max_examples=60)
    def test_allsum_geq_minsum(self, pts):
        s = state(*pts)
        assert hx.score_all_sum_dist(s) >= hx.score_min_sum_dist(s) - 1e-9

    @given(
        st.lists(st.tuples(st.floats(0, 200), st.floats(0, 200)), min_size=2, max_size=10),
        st.floats(-40, 40),
        st.floats(-40, 40),
    )
    @settings(max_examples=60)
    def test_translation_invariance(self, pts, dx, dy):
        a = state(*pts)
        b = state(*[(x + dx, y + dy) for x, y in pts])
        assert hx.score_min_size(a) == pytest.approx(hx.score_min_size(b), abs=1e-6)
        assert hx.score_min_sum_dist(a) == pytest.approx(hx.score_min_sum_dist(b), abs=1e-6)
        assert hx.score_all_sum_dist(a) == pytest.approx(hx.score_all_sum_dist(b), abs=1e-6)


class TestSolve:
    def test_single_position_grid(self):
        grid = hx.SearchGrid(positions=np.array([[40, 50]]), description="one")
        stars = [StarTrajectory(0, 0, 100, 0, 0, 100), StarTrajectory(0, 0, 120, 0, 0, 90)]
        res = hx.solve(stars, "minsize", grid)
        assert res.best_cursor == Point(40, 50)
        assert res.states_evaluated == 1

    def test_unknown_heuristic(self):
        with pytest.raises(ValueError):
            hx.solve([StarTrajectory(0, 0, 1, 0, 0, 1)], "bogus", hx.stepped_grid(50))

    def test_tie_break_lexicographic(self):
        # constant star field: every cursor scores identically
        stars = [StarTrajectory(0, 0, 100, 0, 0, 100), StarTrajectory(0, 0, 150, 0, 0, 150)]
        res = hx.solve(stars, "minsize", hx.stepped_grid(37))
        assert res.best_cursor == Point(5, 5)

    def test_oracle_equivalence_small_grid(self, pool):
        """Solver argmin equals an independently coded exhaustive scan."""
        coords = np.arange(100, 200, 5)  # 20x20 grid
        xs, ys = np.meshgrid(coords, coords)
        grid = hx.SearchGrid(np.stack([xs.ravel(), ys.ravel()], axis=1), "20x20")
        params = validate_params({"psi": 30, "delta": 7})
        for seed in range(3):
            ch = generate_challenge(params, pool, Rng(300 + seed))
            for heuristic in hx.HEURISTICS:
                res = hx.solve(ch.stars, heuristic, grid)
                oracle_cursor, oracle_score = brute_force_scan(ch.stars, heuristic, grid)
                assert res.best_cursor == oracle_cursor, heuristic
                assert res.best_score == pytest.approx(oracle_score, rel=1e-9), heuristic

    def test_pairwise_both_matches_individual(self, pool):
        params = validate_params({"psi": 20})
        ch = generate_challenge(params, pool, Rng(17))
        grid = hx.stepped_grid(25)
        both_min, both_all = hx.solve_pairwise_both(ch.stars, grid)
        solo_min = hx.solve(ch.stars, "minsumdist", grid)
        solo_all = hx.solve(ch.stars, "allsumdist", grid)
        assert both_min.best_cursor == solo_min.best_cursor
        assert both_all.best_cursor == solo_all.best_cursor

    def test_sample_stars_dev_flag(self, pool):
        params = validate_params({})
        ch = generate_challenge(params, pool, Rng(18))
        res = hx.solve(ch.stars, "minsize", hx.stepped_grid(40), sample_stars=25)
        assert res.states_evaluated == len(hx.stepped_grid(40))


@pytest.mark.slow
class TestRelativeCost:
    def test_kernel_family_cost_ordering(self, pool):
        """Full-grid wall time orders MinSize < MinDistribution < pairwise.

        The two pairwise heuristics share one scoring pass here, so only
        the family-level ordering is meaningful.
        """
        params = validate_params({"psi": 70, "delta": 7})
        ch = generate_challenge(params, pool, Rng(123))
        grid = hx.default_grid()
        t_minsize = hx.solve(ch.stars, "minsize", grid).wall_time
        t_mindistr = hx.solve(ch.stars, "mindistribution", grid).wall_time
        t_pair = hx.solve_pairwise_both(ch.stars, grid)[0].wall_time * 2
        assert t_minsize < t_mindistr < t_pair


class TestVisibleState:
    def test_filters_offscreen(self):
        stars = [
            StarTrajectory(0, 0, 150, 0, 0, 150),
            StarTrajectory(0, 0, -20, 0, 0, 150),
            StarTrajectory(0, 0, 299.5, 0, 0, 10),
        ]
        vs = hx.visible_state(stars, Point(0, 0))
        assert len(vs.positions) == 2  # 299.5 is inside [0, 300)
