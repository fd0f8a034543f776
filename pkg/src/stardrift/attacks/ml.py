"""Machine-learning attack: tile-histogram features and argmax search.

A state's Boolean pixel matrix is cut into omega-sided tiles; each tile is
assigned to its nearest reference tile under Hamming distance, and the
normalized assignment histogram is the state's feature vector. Reference
tiles come from k-means clustering (Hamming metric, Boolean majority
centroids) over tiles sampled from rendered training states. A pluggable
binary classifier scores states as solution / non-solution, and the attack
returns the argmax-probability cursor over the coarse lambda grid.
"""

from __future__ import annotations

import pickle
import struct
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

from ..core import GenParams, Point, Rng
from ..generator import ClientChallenge, StarTrajectory, generate_challenge
from ..kinematics import STAR_SIDE, render_state
from ..pool import PicturePool

SPACE_SIDE = 300
DEFAULT_LAMBDA = 5
REFS_PER_OMEGA = 3  # reference tile count n = 3 * omega


@dataclass(frozen=True)
class Tile:
    """One omega x omega Boolean sub-matrix of a pixel matrix (True = white)."""

    side: int
    bits: np.ndarray

    def __post_init__(self):
        if self.bits.shape != (self.side, self.side):
            raise ValueError("tile bits must be side x side")


@dataclass(frozen=True)
class ReferenceTiles:
    """The k-means centroid tiles states are histogrammed against."""

    omega: int
    tiles: list[Tile]

    def __len__(self) -> int:
        return len(self.tiles)

    def as_matrix(self) -> np.ndarray:
        return np.stack([t.bits.ravel() for t in self.tiles]).astype(np.uint8)


def hamming(a: Tile, b: Tile) -> int:
    """Count of differing cells between two equal-sided Boolean tiles."""
    if a.side != b.side:
        raise ValueError(f"tile side mismatch: {a.side} != {b.side}")
    return int(np.count_nonzero(a.bits != b.bits))


def check_omega(omega: int) -> int:
    if omega <= 0 or SPACE_SIDE % omega != 0:
        raise ValueError(f"omega must divide {SPACE_SIDE}, got {omega}")
    return omega


def tile_matrix(matrix: np.ndarray, omega: int) -> np.ndarray:
    """All non-overlapping tiles of a pixel matrix, row-major, as (n, omega²) 0/1 rows."""
    check_omega(omega)
    per_row = SPACE_SIDE // omega
    arr = np.ascontiguousarray(matrix, dtype=np.uint8)
    tiles = arr.reshape(per_row, omega, per_row, omega).transpose(0, 2, 1, 3)
    return tiles.reshape(per_row * per_row, omega * omega)


def extract_tiles(matrix: np.ndarray, omega: int) -> list[Tile]:
    """Tile objects for a pixel matrix (row-major order)."""
    rows = tile_matrix(matrix, omega)
    return [Tile(side=omega, bits=row.reshape(omega, omega).astype(bool)) for row in rows]


def _hamming_table(tiles: np.ndarray, refs: np.ndarray) -> np.ndarray:
    """Pairwise Hamming distances via the 0/1 inner-product identity.

    h(t, f) = |t| + |f| - 2 t.f; exact in float32 for tiles up to
    omega = 30 (900 cells).
    """
    t = tiles.astype(np.float32)
    f = refs.astype(np.float32)
    return t.sum(axis=1, keepdims=True) + f.sum(axis=1)[None, :] - 2.0 * (t @ f.T)


def nearest_reference(tiles: np.ndarray, refs: np.ndarray) -> np.ndarray:
    """Index of each tile's nearest reference; ties go to the lowest index."""
    return np.argmin(_hamming_table(tiles, refs), axis=1)


def build_reference_tiles(
    corpus: Sequence[Tile] | np.ndarray,
    omega: int,
    rng: Rng,
    max_iter: int = 100,
) -> ReferenceTiles:
    """k-means (K = 3*omega) under Hamming distance over a tile corpus.

    Centroids stay Boolean via per-cell majority vote (ties round to
    white). Empty or duplicated centroids are re-seeded from unused
    distinct corpus tiles, so the returned tiles are pairwise distinct.
    """
    check_omega(omega)
    k = REFS_PER_OMEGA * omega
    if isinstance(corpus, np.ndarray):
        arr = corpus.astype(np.uint8)
    else:
        arr = np.stack([t.bits.ravel() for t in corpus]).astype(np.uint8)
    if arr.ndim != 2 or arr.shape[1] != omega * omega:
        raise ValueError("corpus rows must have omega*omega cells")
    if len(arr) < k:
        raise ValueError(f"corpus too small: {len(arr)} tiles < K = {k}")

    unique = np.unique(arr, axis=0)
    if len(unique) < k:
        raise ValueError(f"corpus has only {len(unique)} distinct tiles < K = {k}")

    perm = rng.generator.permutation(len(unique))
    centroids = unique[perm[:k]].copy()
    assign = np.full(len(arr), -1)

    for _ in range(max_iter):
        new_assign = nearest_reference(arr, centroids)
        reseeded = False
        new_centroids = centroids.copy()
        for c in range(k):
            members = arr[new_assign == c]
            if len(members) == 0:
                continue
            new_centroids[c] = (members.mean(axis=0) >= 0.5).astype(np.uint8)

        # Re-seed empties and duplicates from distinct unused tiles.
        used = {row.tobytes() for row in new_centroids}
        unused = [row for row in unique if row.tobytes() not in used]
        seen: set[bytes] = set()
        for c in range(k):
            key = new_centroids[c].tobytes()
            empty = not (new_assign == c).any()
            if (key in seen or empty) and unused:
                pick = unused.pop(rng.choice_index(len(unused)))
                new_centroids[c] = pick
                reseeded = True
            seen.add(new_centroids[c].tobytes())

        done = not reseeded and np.array_equal(new_assign, assign) and np.array_equal(new_centroids, centroids)
        centroids = new_centroids
        assign = new_assign
        if done:
            break

    tiles = [Tile(side=omega, bits=row.reshape(omega, omega).astype(bool)) for row in centroids]
    return ReferenceTiles(omega=omega, tiles=tiles)


def feature_vector(matrix: np.ndarray, refs: ReferenceTiles) -> np.ndarray:
    """Normalized histogram of nearest-reference assignments for one matrix."""
    tiles = tile_matrix(matrix, refs.omega)
    idx = nearest_reference(tiles, refs.as_matrix())
    counts = np.bincount(idx, minlength=len(refs))
    return counts / len(tiles)


def features_for_cursors(
    stars: Sequence[StarTrajectory],
    cursors: np.ndarray,
    refs: ReferenceTiles,
    star_side: int = STAR_SIDE,
    batch: int = 256,
) -> np.ndarray:
    """Feature vectors for many cursor positions of one challenge.

    Equivalent to render + feature_vector per cursor, batched so the
    Hamming assignment runs as a few large matrix products.
    """
    refs_mat = refs.as_matrix()
    omega = refs.omega
    per_state = (SPACE_SIDE // omega) ** 2
    out = np.empty((len(cursors), len(refs_mat)), dtype=np.float64)
    for start in range(0, len(cursors), batch):
        chunk = cursors[start : start + batch]
        tiles = np.empty((len(chunk) * per_state, omega * omega), dtype=np.uint8)
        for i, (cx, cy) in enumerate(chunk):
            matrix = render_state(stars, Point(float(cx), float(cy)), star_side=star_side)
            tiles[i * per_state : (i + 1) * per_state] = tile_matrix(matrix, omega)
        idx = nearest_reference(tiles, refs_mat)
        for i in range(len(chunk)):
            counts = np.bincount(idx[i * per_state : (i + 1) * per_state], minlength=len(refs_mat))
            out[start + i] = counts / per_state
    return out


class ClassifierModel(Protocol):
    """Binary classifier contract: probability that a state is a solution."""

    name: str

    def fit(self, features: np.ndarray, labels: np.ndarray) -> None: ...

    def predict_proba(self, features: np.ndarray) -> np.ndarray: ...


class LogisticModel:
    """Regularized logistic regression on the standardized feature vector.

    Histogram features put most mass in a few reference bins, so the
    scale-sensitive L2 penalty needs standardization to see the rare
    dense-tile bins that carry the solution signal.
    """

    name = "logistic"

    def __init__(self, seed: int = 0):
        from sklearn.linear_model import LogisticRegression
        from sklearn.pipeline import make_pipeline
        from sklearn.preprocessing import StandardScaler

        self._clf = make_pipeline(
            StandardScaler(),
            LogisticRegression(max_iter=3000, class_weight="balanced", random_state=seed),
        )

    def fit(self, features, labels):
        self._clf.fit(features, labels)

    def predict_proba(self, features):
        return self._clf.predict_proba(features)[:, 1]


class ForestModel:
    """Random-forest ensemble, 60 trees by default."""

    name = "forest"

    def __init__(self, n_estimators: int = 60, seed: int = 0):
        from sklearn.ensemble import RandomForestClassifier

        self._clf = RandomForestClassifier(
            n_estimators=n_estimators, class_weight="balanced", random_state=seed, n_jobs=1
        )

    def fit(self, features, labels):
        self._clf.fit(features, labels)

    def predict_proba(self, features):
        return self._clf.predict_proba(features)[:, 1]


class SvmModel:
    """RBF-kernel SVM with Platt-scaled probabilities (optional slot)."""

    name = "svm"

    def __init__(self, seed: int = 0):
        from sklearn.svm import SVC

        self._clf = SVC(kernel="rbf", probability=True, class_weight="balanced", random_state=seed)

    def fit(self, features, labels):
        self._clf.fit(features, labels)

    def predict_proba(self, features):
        return self._clf.predict_proba(features)[:, 1]


_CLASSIFIERS = {"logistic": LogisticModel, "forest": ForestModel, "svm": SvmModel}


def make_classifier(kind: str, seed: int = 0) -> ClassifierModel:
    try:
        return _CLASSIFIERS[kind](seed=seed)
    except KeyError:
        raise ValueError(f"unknown classifier {kind!r}; pick from {sorted(_CLASSIFIERS)}")


def lambda_grid(lam: int = DEFAULT_LAMBDA) -> np.ndarray:
    """The coarse cursor grid {(lam*i, lam*j) : 0 <= i, j <= 300/lam}.

    Includes the 300 boundary; ordered lexicographically by (x, y) so
    argmax ties resolve to the smallest cursor.
    """
    if lam <= 0 or SPACE_SIDE % lam != 0:
        raise ValueError(f"lambda must divide {SPACE_SIDE}")
    coords = np.arange(0, SPACE_SIDE + 1, lam)
    xs, ys = np.meshgrid(coords, coords, indexing="ij")  # x varies slowest
    return np.stack([xs.ravel(), ys.ravel()], axis=1)


@dataclass(frozen=True)
class TrainingSet:
    """Labeled feature rows; ``challenge_index`` groups rows by challenge."""

    features: np.ndarray
    labels: np.ndarray
    challenge_index: np.ndarray


def solution_grid_points(sol_points: Sequence[Point], tolerance: float, lam: int = DEFAULT_LAMBDA) -> np.ndarray:
    """Lambda-grid cursors within (strictly) tolerance of any solution."""
    grid = lambda_grid(lam)
    keep = np.zeros(len(grid), dtype=bool)
    for sol in sol_points:
        d = np.hypot(grid[:, 0] - sol.x, grid[:, 1] - sol.y)
        keep |= d < tolerance
    return grid[keep]


def build_training_set(
    pool: PicturePool,
    params: GenParams,
    n_challenges: int,
    states_per_challenge: int,
    omega: int,
    refs: ReferenceTiles,
    rng: Rng,
    lam: int = DEFAULT_LAMBDA,
    star_side: int = STAR_SIDE,
) -> TrainingSet:
    """Label states from fresh challenges using their known solutions.

    Per challenge: the exact solution state plus every lambda-grid cursor
    within tolerance is labeled solution; the remainder of the state budget
    is drawn uniformly from the rest of the grid and labeled non-solution.
    """
    check_omega(omega)
    grid = lambda_grid(lam)
    feats: list[np.ndarray] = []
    labels: list[np.ndarray] = []
    index: list[np.ndarray] = []
    for ci in range(n_challenges):
        challenge = generate_challenge(params, pool, rng.child(0xB17D, ci))
        stars = challenge.stars

        pos_cursors = [np.array([[s.x, s.y] for s in challenge.solutions], dtype=float)]
        near = solution_grid_points(challenge.solutions, params.tolerance, lam)
        if len(near):
            pos_cursors.append(near.astype(float))
        positives = np.concatenate(pos_cursors)

        sol_dist = np.full(len(grid), np.inf)
        for sol in challenge.solutions:
            sol_dist = np.minimum(sol_dist, np.hypot(grid[:, 0] - sol.x, grid[:, 1] - sol.y))
        negatives_pool = grid[sol_dist >= params.tolerance]
        n_neg = max(0, states_per_challenge - len(positives))
        pick = rng.child(0x5A3B, ci).generator.permutation(len(negatives_pool))[:n_neg]
        negatives = negatives_pool[pick].astype(float)

        cursors = np.concatenate([positives, negatives])
        feats.append(features_for_cursors(stars, cursors, refs, star_side))
        labels.append(
            np.concatenate([np.ones(len(positives), np.int8), np.zeros(len(negatives), np.int8)])
        )
        index.append(np.full(len(cursors), ci, np.int32))

    if not feats:
        n_feat = len(refs)
        return TrainingSet(
            features=np.empty((0, n_feat)),
            labels=np.empty(0, np.int8),
            challenge_index=np.empty(0, np.int32),
        )
    return TrainingSet(
        features=np.concatenate(feats),
        labels=np.concatenate(labels),
        challenge_index=np.concatenate(index),
    )


def sample_tile_corpus(
    pool: PicturePool,
    params: GenParams,
    omega: int,
    rng: Rng,
    n_challenges: int = 20,
    states_per_challenge: int = 10,
    star_side: int = STAR_SIDE,
) -> np.ndarray:
    """Deduplicated, stratified tiles from rendered states of fresh challenges.

    Solution-state tiles are what the classifier must recognize, so a few
    states per challenge sit at or next to the true solution and the rest
    render at uniform random cursors. Sparse single-star tiles come in far
    more distinct patterns than dense shape tiles and would otherwise
    swamp the clustering, so they are capped at twice the dense count.
    """
    check_omega(omega)
    rows = []
    for ci in range(n_challenges):
        challenge = generate_challenge(params, pool, rng.child(0xC0, ci))
        sol = challenge.solutions[0]
        cursors = [
            sol,
            Point(min(sol.x + 3, 300.0), sol.y),
            Point(sol.x, min(sol.y + 4, 300.0)),
        ][: max(1, states_per_challenge // 3)]
        while len(cursors) < states_per_challenge:
            cursors.append(Point(float(rng.integers(0, SPACE_SIDE)), float(rng.integers(0, SPACE_SIDE))))
        for cur in cursors:
            matrix = render_state(challenge.stars, cur, star_side=star_side)
            rows.append(tile_matrix(matrix, omega))
    corpus = np.unique(np.concatenate(rows), axis=0)

    whites = corpus.sum(axis=1)
    dense = corpus[whites >= 3 * star_side**2]  # three or more stars in a tile
    sparse = corpus[whites < 3 * star_side**2]
    cap = max(3 * omega, 2 * len(dense))
    if len(sparse) > cap:
        pick = rng.generator.permutation(len(sparse))[:cap]
        sparse = sparse[pick]
    return np.unique(np.concatenate([dense, sparse]), axis=0)


@dataclass
class TrainedModel:
    """A classifier bundled with the reference tiles it was trained against."""

    omega: int
    refs: ReferenceTiles
    classifier: ClassifierModel
    description: str = ""

    def score_cursors(self, stars: Sequence[StarTrajectory], cursors: np.ndarray, star_side: int = STAR_SIDE) -> np.ndarray:
        feats = features_for_cursors(stars, cursors, self.refs, star_side)
        return self.classifier.predict_proba(feats)


def ml_solve(
    challenge: ClientChallenge | Sequence[StarTrajectory],
    model: TrainedModel,
    refs: ReferenceTiles | None = None,
    lam: int = DEFAULT_LAMBDA,
    star_side: int = STAR_SIDE,
) -> Point:
    """Argmax-probability cursor over the lambda grid (ties -> smallest)."""
    stars = list(challenge.stars) if isinstance(challenge, ClientChallenge) else list(challenge)
    refs = refs if refs is not None else model.refs
    grid = lambda_grid(lam)
    feats = features_for_cursors(stars, grid.astype(float), refs, star_side)
    probs = model.classifier.predict_proba(feats)
    best = int(np.argmax(probs))  # first occurrence wins; grid is (x, y)-lexicographic
    return Point(int(grid[best, 0]), int(grid[best, 1]))


MODEL_MAGIC = b"SDML"
MODEL_VERSION = 1


def save_model(model: TrainedModel, path) -> None:
    """Versioned self-describing container: magic, omega, refs, classifier blob."""
    refs_bits = np.packbits(model.refs.as_matrix(), axis=None)
    clf_blob = pickle.dumps(model.classifier)
    desc = model.description.encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MODEL_MAGIC)
        fh.write(struct.pack("<BHH", MODEL_VERSION, model.omega, len(model.refs)))
        fh.write(struct.pack("<I", len(desc)))
        fh.write(desc)
        fh.write(struct.pack("<I", len(refs_bits)))
        fh.write(refs_bits.tobytes())
        fh.write(struct.pack("<I", len(clf_blob)))
        fh.write(clf_blob)


def load_model(path) -> TrainedModel:
    with open(path, "rb") as fh:
        if fh.read(4) != MODEL_MAGIC:
            raise ValueError("not a stardrift model file")
        version, omega, n_refs = struct.unpack("<BHH", fh.read(5))
        if version != MODEL_VERSION:
            raise ValueError(f"unsupported model version {version}")
        (desc_len,) = struct.unpack("<I", fh.read(4))
        desc = fh.read(desc_len).decode("utf-8")
        (bits_len,) = struct.unpack("<I", fh.read(4))
        packed = np.frombuffer(fh.read(bits_len), dtype=np.uint8)
        (clf_len,) = struct.unpack("<I", fh.read(4))
        classifier = pickle.loads(fh.read(clf_len))
    cells = omega * omega
    bits = np.unpackbits(packed, count=n_refs * cells).reshape(n_refs, cells)
    tiles = [Tile(side=omega, bits=row.reshape(omega, omega).astype(bool)) for row in bits]
    return TrainedModel(
        omega=omega,
        refs=ReferenceTiles(omega=omega, tiles=tiles),
        classifier=classifier,
        description=desc,
    )
