import numpy as np
import pytest

from stardrift.core import Point, Rng
from stardrift.generator import generate_challenge
from stardrift.kinematics import render_state
from stardrift import validate_params
from stardrift.attacks import ml as mlx


def tile_from_flat(bits, side=5):
    return mlx.Tile(side=side, bits=np.array(bits, dtype=bool).reshape(side, side))


class TestHamming:
    def test_identical(self):
        t = tile_from_flat([1] * 25)
        assert mlx.hamming(t, t) == 0

    def test_complement(self):
        a = tile_from_flat([1] * 25)
        b = tile_from_flat([0] * 25)
        assert mlx.hamming(a, b) == 25

    def test_three_cells(self):
        a = tile_from_flat([0] * 25)
        bits = [0] * 25
        bits[3] = bits[7] = bits[24] = 1
        b = tile_from_flat(bits)
        assert mlx.hamming(a, b) == 3

    def test_side_mismatch(self):
        a = tile_from_flat([0] * 25, side=5)
        b = mlx.Tile(side=10, bits=np.zeros((10, 10), dtype=bool))
        with pytest.raises(ValueError):
            mlx.hamming(a, b)

    def test_matmul_table_matches_bruteforce(self, rng):
        tiles = (rng.generator.random((40, 225)) < 0.3).astype(np.uint8)
        refs = (rng.generator.random((12, 225)) < 0.3).astype(np.uint8)
        table = mlx._hamming_table(tiles, refs)
        for i in range(40):
            for j in range(12):
                assert table[i, j] == int((tiles[i] != refs[j]).sum())


class TestExtractTiles:
    def test_omega_25_gives_144(self):
        m = np.zeros((300, 300), dtype=bool)
        assert len(mlx.extract_tiles(m, 25)) == 144

    def test_omega_15_gives_400(self):
        m = np.zeros((300, 300), dtype=bool)
        assert len(mlx.extract_tiles(m, 15)) == 400

    def test_all_black_tiles_empty(self):
        m = np.zeros((300, 300), dtype=bool)
        for t in mlx.extract_tiles(m, 25)[:10]:
            assert not t.bits.any()

    def test_non_divisor_rejected(self):
        with pytest.raises(ValueError):
            mlx.extract_tiles(np.zeros((300, 300), dtype=bool), 7)

    def test_row_major_layout(self):
        m = np.zeros((300, 300), dtype=bool)
        m[0:15, 15:30] = True  # second tile of the first row, omega=15
        tiles = mlx.extract_tiles(m, 15)
        assert tiles[1].bits.all()
        assert not tiles[0].bits.any()
        assert not tiles[20].bits.any()


class TestReferenceTiles:
    def test_exact_corpus_identity(self, rng):
        omega = 5
        k = 3 * omega
        corpus = (rng.generator.random((k, 25)) < 0.4).astype(np.uint8)
        corpus = np.unique(corpus, axis=0)
        if len(corpus) < k:  # astronomically unlikely
            pytest.skip("collision")
        refs = mlx.build_reference_tiles(corpus, omega, Rng(0))
        got = {r.bits.astype(np.uint8).tobytes() for r in refs.tiles}
        want = {row.reshape(omega, omega).tobytes() for row in corpus}
        assert got == want

    def test_refs_count_and_distinct(self, rng):
        omega = 5
        corpus = (rng.generator.random((400, 25)) < 0.35).astype(np.uint8)
        refs = mlx.build_reference_tiles(corpus, omega, Rng(1))
        assert len(refs) == 3 * omega
        keys = {r.bits.tobytes() for r in refs.tiles}
        assert len(keys) == 3 * omega

    def test_fixed_point_assignment(self, rng):
        omega = 5
        corpus = (rng.generator.random((300, 25)) < 0.35).astype(np.uint8)
        refs = mlx.build_reference_tiles(corpus, omega, Rng(2))
        refs_mat = refs.as_matrix()
        # every corpus tile's nearest centroid is its assigned centroid
        assign = mlx.nearest_reference(corpus, refs_mat)
        table = mlx._hamming_table(corpus, refs_mat)
        assert (table[np.arange(len(corpus)), assign] == table.min(axis=1)).all()

    def test_deterministic(self, rng):
        omega = 5
        corpus = (rng.generator.random((200, 25)) < 0.35).astype(np.uint8)
        a = mlx.build_reference_tiles(corpus, omega, Rng(3))
        b = mlx.build_reference_tiles(corpus, omega, Rng(3))
        assert all(np.array_equal(x.bits, y.bits) for x, y in zip(a.tiles, b.tiles))

    def test_too_small_corpus(self):
        with pytest.raises(ValueError):
            mlx.build_reference_tiles(np.zeros((4, 25), dtype=np.uint8), 5, Rng(0))


class TestFeatureVector:
    def _refs(self, omega=15, seed=5):
        rng = Rng(seed)
        corpus = (rng.generator.random((400, omega * omega)) < 0.2).astype(np.uint8)
        return mlx.build_reference_tiles(corpus, omega, rng)

    def test_all_tiles_nearest_first_ref(self):
        omega = 15
        refs_bits = np.zeros((45, omega * omega), dtype=np.uint8)
        refs_bits[0, :] = 0
        for i in range(1, 45):
            refs_bits[i, : i + 60] = 1  # increasingly far from all-black
        refs = mlx.ReferenceTiles(
            omega=omega,
            tiles=[mlx.Tile(omega, row.reshape(omega, omega).astype(bool)) for row in refs_bits],
        )
        m = np.zeros((300, 300), dtype=bool)
        d = mlx.feature_vector(m, refs)
        assert d[0] == 1.0 and d[1:].sum() == 0

    def test_normalization(self, rng):
        refs = self._refs()
        m = rng.generator.random((300, 300)) < 0.1
        d = mlx.feature_vector(m, refs)
        assert d.sum() == pytest.approx(1.0)
        assert ((0 <= d) & (d <= 1)).all()
        assert len(d) == 45

    def test_nearest_reference_ties_lowest_index(self):
        omega = 5
        refs_bits = np.zeros((15, 25), dtype=np.uint8)  # all identical -> ties
        refs = mlx.ReferenceTiles(
            omega=omega, tiles=[mlx.Tile(omega, r.reshape(5, 5).astype(bool)) for r in refs_bits]
        )
        tiles = np.zeros((4, 25), dtype=np.uint8)
        assert (mlx.nearest_reference(tiles, refs.as_matrix()) == 0).all()

    def test_features_for_cursors_matches_single(self, pool, rng):
        refs = self._refs()
        params = validate_params({"psi": 20})
        ch = generate_challenge(params, pool, Rng(6))
        cursors = np.array([[10.0, 20.0], [150.0, 150.0], [295.0, 5.0]])
        batch = mlx.features_for_cursors(ch.stars, cursors, refs)
        for row, (cx, cy) in zip(batch, cursors):
            m = render_state(ch.stars, Point(cx, cy))
            single = mlx.feature_vector(m, refs)
            assert np.allclose(row, single)


class TestLambdaGrid:
    def test_size_61_squared(self):
        assert len(mlx.lambda_grid(5)) == 3721

    def test_includes_boundary(self):
        grid = {tuple(p) for p in mlx.lambda_grid(5)}
        assert (0, 0) in grid and (300, 300) in grid and (300, 0) in grid

    def test_lexicographic_order(self):
        grid = mlx.lambda_grid(5)
        assert tuple(grid[0]) == (0, 0)
        assert tuple(grid[1]) == (0, 5)
        assert tuple(grid[61]) == (5, 0)


class TestTrainingSet:
    def test_empty(self, pool, rng):
        refs = TestFeatureVector()._refs()
        ts = mlx.build_training_set(pool, validate_params({}), 0, 10, 15, refs, rng)
        assert len(ts.features) == 0

    def test_label_soundness(self, pool, rng):
        refs = TestFeatureVector()._refs()
        params = validate_params({"psi": 20})
        n_states = 40
        ts = mlx.build_training_set(pool, params, 2, n_states, 15, refs, Rng(8))
        assert set(np.unique(ts.labels)) <= {0, 1}
        assert (ts.labels == 1).sum() >= 2  # at least the exact solution states
        assert len(ts.features) == len(ts.labels) == len(ts.challenge_index)

    def test_solution_grid_points_within_tolerance(self):
        pts = mlx.solution_grid_points([Point(102, 100)], tolerance=5.0, lam=5)
        for x, y in pts:
            assert np.hypot(x - 102, y - 100) < 5.0
        assert (100, 100) in {tuple(p) for p in pts}


class OracleClassifier:
    """Probability 1 exactly at one target cursor, else 0."""

    name = "oracle"

    def __init__(self, target, grid):
        self.target = target
        self.grid = grid

    def fit(self, X, y):
        pass

    def predict_proba(self, X):
        out = np.zeros(len(X))
        idx = np.flatnonzero((self.grid[:, 0] == self.target[0]) & (self.grid[:, 1] == self.target[1]))
        out[idx] = 1.0
        return out


class ConstantClassifier:
    name = "const"

    def fit(self, X, y):
        pass

    def predict_proba(self, X):
        return np.full(len(X), 0.5)


class TestMlSolve:
    def _model(self, clf, refs):
        return mlx.TrainedModel(omega=refs.omega, refs=refs, classifier=clf)

    def test_oracle_classifier_hits_target(self, pool):
        refs = TestFeatureVector()._refs()
        ch = generate_challenge(validate_params({}), pool, Rng(9))
        grid = mlx.lambda_grid(5)
        target = (150, 205)
        model = self._model(OracleClassifier(target, grid), refs)
        assert mlx.ml_solve(ch.client_view(), model) == Point(*target)

    def test_constant_classifier_tie_breaks_to_origin(self, pool):
        refs = TestFeatureVector()._refs()
        ch = generate_challenge(validate_params({}), pool, Rng(10))
        model = self._model(ConstantClassifier(), refs)
        assert mlx.ml_solve(ch.client_view(), model) == Point(0, 0)


class TestModelContainer:
    def test_save_load_roundtrip(self, tmp_path, pool):
        refs = TestFeatureVector()._refs(omega=15)
        clf = mlx.make_classifier("logistic", seed=0)
        X = np.random.default_rng(0).random((60, 45))
        y = np.array([0, 1] * 30)
        clf.fit(X, y)
        model = mlx.TrainedModel(omega=15, refs=refs, classifier=clf, description="test model")
        path = tmp_path / "model.bin"
        mlx.save_model(model, path)
        back = mlx.load_model(path)
        assert back.omega == 15
        assert back.description == "test model"
        assert all(np.array_equal(a.bits, b.bits) for a, b in zip(back.refs.tiles, refs.tiles))
        probe = np.random.default_rng(1).random((5, 45))
        assert np.allclose(back.classifier.predict_proba(probe), clf.predict_proba(probe))

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "bad.bin"
        path.write_bytes(b"NOPE" + b"\x00" * 64)
        with pytest.raises(ValueError):
            mlx.load_model(path)

    def test_make_classifier_kinds(self):
        for kind in ("logistic", "forest", "svm"):
            clf = mlx.make_classifier(kind)
            assert clf.name == kind
        with pytest.raises(ValueError):
            mlx.make_classifier("mystery")
