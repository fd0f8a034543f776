import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stardrift.core import (
    Point,
    Rng,
    ValidationError,
    euclidean_distance,
    round_half_away,
    validate_params,
)

coords = st.floats(min_value=-1000, max_value=1000, allow_nan=False)
points = st.builds(Point, coords, coords)


class TestValidateParams:
    def test_t2_defaults(self):
        p = validate_params({"psi": 70, "delta": 7, "nsol": 1})
        assert p.psi == 70 and p.delta == 7 and p.nsol == 1
        assert p.rotation is False
        assert p.tolerance == 5.0

    def test_zero_delta_rejected(self):
        with pytest.raises(ValidationError) as exc:
            validate_params({"delta": 0})
        assert exc.value.field == "delta"

    def test_t6_high_noise_accepted(self):
        p = validate_params({"psi": 250, "delta": 5})
        assert p.psi == 250

    def test_unknown_key_rejected(self):
        with pytest.raises(ValidationError):
            validate_params({"bogus": 1})

    def test_pic_size_bounds(self):
        with pytest.raises(ValidationError):
            validate_params({"pic_size": 15})
        with pytest.raises(ValidationError):
            validate_params({"pic_size": 291})
        assert validate_params({"pic_size": 16}).pic_size == 16
        assert validate_params({"pic_size": 290}).pic_size == 290

    def test_negative_psi_rejected(self):
        with pytest.raises(ValidationError) as exc:
            validate_params({"psi": -1})
        assert exc.value.field == "psi"

    def test_bad_policy_rejected(self):
        with pytest.raises(ValidationError):
            validate_params({"solution_policy": "some-of"})

    def test_idempotent(self):
        p = validate_params({"psi": 10, "delta": 9, "nsol": 2, "tolerance": 4})
        assert validate_params(p) == p

    @given(
        psi=st.floats(min_value=0, max_value=500),
        delta=st.floats(min_value=0.01, max_value=50),
        nsol=st.integers(min_value=1, max_value=5),
    )
    def test_idempotent_property(self, psi, delta, nsol):
        p = validate_params({"psi": psi, "delta": delta, "nsol": nsol})
        assert validate_params(p) == p


class TestEuclideanDistance:
    def test_identity(self):
        assert euclidean_distance(Point(0, 0), Point(0, 0)) == 0

    def test_3_4_5(self):
        assert euclidean_distance(Point(0, 0), Point(3, 4)) == 5

    def test_drawable_diagonal(self):
        d = euclidean_distance(Point(5, 295), Point(295, 5))
        assert math.isclose(d, math.sqrt(2 * 290**2), rel_tol=1e-12)
        assert math.isclose(d, 410.121933088, abs_tol=1e-6)

    @given(points, points)
    def test_symmetry(self, a, b):
        assert euclidean_distance(a, b) == euclidean_distance(b, a)

    @given(points, points)
    def test_zero_iff_equal(self, a, b):
        d = euclidean_distance(a, b)
        if a == b:
            assert d == 0
        if d == 0:
            assert math.isclose(a.x, b.x, abs_tol=1e-9) and math.isclose(a.y, b.y, abs_tol=1e-9)

    @given(points, points, points)
    def test_triangle_inequality(self, a, b, c):
        assert euclidean_distance(a, c) <= euclidean_distance(a, b) + euclidean_distance(b, c) + 1e-9


class TestRng:
    def test_same_seed_same_stream(self):
        a, b = Rng(123), Rng(123)
        assert [a.integers(0, 1000) for _ in range(20)] == [b.integers(0, 1000) for _ in range(20)]
        assert list(a.uniform(-1, 1, 16)) == list(b.uniform(-1, 1, 16))

    def test_child_streams_differ_and_are_stable(self):
        r = Rng(5)
        c1, c2 = r.child(1), r.child(2)
        assert c1.seed != c2.seed
        assert Rng(5).child(1).seed == c1.seed

    def test_integers_inclusive(self):
        r = Rng(0)
        draws = {int(r.integers(0, 2)) for _ in range(200)}
        assert draws == {0, 1, 2}

    def test_shuffle_is_permutation(self):
        r = Rng(9)
        items = list(range(50))
        shuffled = list(items)
        r.shuffle(shuffled)
        assert sorted(shuffled) == items and shuffled != items


class TestRounding:
    @pytest.mark.parametrize(
        "x,expected",
        [(0.4, 0), (0.5, 1), (150.4, 150), (150.6, 151), (-0.4, 0), (-0.5, -1), (-2.5, -3), (2.5, 3)],
    )
    def test_half_away_from_zero(self, x, expected):
        assert round_half_away(x) == expected
