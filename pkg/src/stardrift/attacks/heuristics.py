"""Brute-force cursor-grid attacks on a challenge's client view.

The solver enumerates every cursor position on the search grid, scores the
resulting state with one of four dispersion heuristics, and returns the
minimizing cursor as its candidate answer. Scores are compared exactly;
ties break to the lexicographically smallest (x, y).

Scoring is snapshot-based: each state is what a screenshot at that cursor
would show, so stars outside the drawable window do not exist for the
position-based heuristics (MinDistribution gets the same effect from
rasterization clipping). This is what makes a couple of noisy stars
poisonous to MinSize: near the solution they sit inside the window and
inflate the bounding box, while nearby cursors let them escape off-screen.
States with fewer than two visible stars score +inf.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core import Point
from ..generator import ClientChallenge, StarTrajectory
from ..kinematics import STAR_SIDE, State, trajectory_arrays
from . import kernels

HEURISTICS = ("minsize", "mindistribution", "minsumdist", "allsumdist")

GRID_LO = 5
GRID_HI = 294  # inclusive; 290 positions per axis


@dataclass(frozen=True)
class SearchGrid:
    """Ordered cursor positions to evaluate; (n, 2) integer array of (x, y)."""

    positions: np.ndarray
    description: str

    def __len__(self) -> int:
        return len(self.positions)


@dataclass(frozen=True)
class HeuristicResult:
    best_cursor: Point
    best_score: float
    states_evaluated: int
    wall_time: float


def default_grid() -> SearchGrid:
    """The full 290x290 grid: {(x, y) : 5 <= x, y <= 294}, row-major."""
    coords = np.arange(GRID_LO, GRID_HI + 1)
    xs, ys = np.meshgrid(coords, coords)  # ys varies by row
    positions = np.stack([xs.ravel(), ys.ravel()], axis=1)
    return SearchGrid(positions=positions, description="full 290x290")


def stepped_grid(step: int) -> SearchGrid:
    """Coarser development grid with the given stride."""
    coords = np.arange(GRID_LO, GRID_HI + 1, step)
    xs, ys = np.meshgrid(coords, coords)
    positions = np.stack([xs.ravel(), ys.ravel()], axis=1)
    return SearchGrid(positions=positions, description=f"step-{step}")


def _star_positions(state: State) -> np.ndarray:
    return np.array([[p.x, p.y] for p in state.positions], dtype=float)


def visible_state(stars: Sequence[StarTrajectory], cursor: Point) -> State:
    """The snapshot the solver scores: only stars inside the window."""
    from ..kinematics import positions_at

    pos = positions_at(stars, cursor)
    inside = (
        (pos[:, 0] >= 0) & (pos[:, 0] < kernels.SIDE)
        & (pos[:, 1] >= 0) & (pos[:, 1] < kernels.SIDE)
    )
    return State(cursor=cursor, positions=[Point(x, y) for x, y in pos[inside]])


def score_min_size(state: State) -> float:
    """Bounding-box extent of the stars: (max x - min x) + (max y - min y)."""
    if not state.positions:
        raise ValueError("MinSize needs at least one star")
    pos = _star_positions(state)
    return float(pos[:, 0].max() - pos[:, 0].min() + pos[:, 1].max() - pos[:, 1].min())


def score_min_distribution(matrix: np.ndarray) -> float:
    """Sum over the 144 25-pixel tiles of |2 * white_count - 625|."""
    if matrix.shape != (kernels.SIDE, kernels.SIDE):
        raise ValueError(f"matrix must be {kernels.SIDE}x{kernels.SIDE}")
    t = kernels.DIST_TILE
    tiles = matrix.reshape(kernels.TILES_PER_ROW, t, kernels.TILES_PER_ROW, t)
    whites = tiles.sum(axis=(1, 3), dtype=np.int64)
    return float(np.abs(2 * whites - t * t).sum())


def score_min_sum_dist(state: State) -> float:
    """Sum over stars of the distance to the nearest *other* star."""
    pos = _star_positions(state)
    if len(pos) < 2:
        raise ValueError("MinSumDist needs at least two stars")
    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))
    np.fill_diagonal(dist, np.inf)
    return float(dist.min(axis=1).sum())


def score_all_sum_dist(state: State) -> float:
    """Sum of distances over all ordered star pairs (self-pairs are zero)."""
    if not state.positions:
        raise ValueError("AllSumDist needs at least one star")
    pos = _star_positions(state)
    diff = pos[:, None, :] - pos[None, :, :]
    return float(np.sqrt((diff**2).sum(axis=2)).sum())


def _coefficient_arrays(stars: Sequence[StarTrajectory]):
    coef = trajectory_arrays(stars)
    return (
        coef["m_xx"],
        coef["m_xy"],
        coef["c_x"],
        coef["m_yx"],
        coef["m_yy"],
        coef["c_y"],
    )


def grid_scores(
    stars: Sequence[StarTrajectory],
    heuristic: str,
    grid: SearchGrid,
    star_side: int = STAR_SIDE,
) -> np.ndarray:
    """Score every grid position's snapshot; equivalent to building
    ``visible_state`` per cursor and applying the scalar score (+inf below
    two visible stars)."""
    args = _coefficient_arrays(stars)
    gx = grid.positions[:, 0].astype(np.float64)
    gy = grid.positions[:, 1].astype(np.float64)
    if heuristic == "minsize":
        if len(stars) < 1:
            raise ValueError("MinSize needs at least one star")
        return kernels.minsize_scores(*args, gx, gy)
    if heuristic == "mindistribution":
        return kernels.mindistr_scores(*args, gx, gy, star_side)
    if heuristic == "minsumdist":
        if len(stars) < 2:
            raise ValueError("MinSumDist needs at least two stars")
        return kernels.pairwise_scores(*args, gx, gy)[0]
    if heuristic == "allsumdist":
        if len(stars) < 1:
            raise ValueError("AllSumDist needs at least one star")
        if len(stars) == 1:
            return np.zeros(len(grid))
        return kernels.pairwise_scores(*args, gx, gy)[1]
    raise ValueError(f"unknown heuristic {heuristic!r}; pick from {HEURISTICS}")


def argmin_position(scores: np.ndarray, grid: SearchGrid) -> tuple[Point, float]:
    """Minimum score with ties broken to the smallest (x, y)."""
    best = scores.min()
    ties = np.flatnonzero(scores == best)
    tx = grid.positions[ties, 0]
    ty = grid.positions[ties, 1]
    pick = ties[np.lexsort((ty, tx))[0]]
    return Point(int(grid.positions[pick, 0]), int(grid.positions[pick, 1])), float(best)


def solve(
    challenge: ClientChallenge | Sequence[StarTrajectory],
    heuristic: str,
    grid: SearchGrid | None = None,
    star_side: int = STAR_SIDE,
    sample_stars: int | None = None,
) -> HeuristicResult:
    """Run one heuristic over the whole grid and return the argmin cursor.

    ``sample_stars`` subsamples the star list before scoring; it exists for
    quick development runs only and is never used by acceptance benches.
    """
    stars = list(challenge.stars) if isinstance(challenge, ClientChallenge) else list(challenge)
    if sample_stars is not None and sample_stars < len(stars):
        stride = max(1, len(stars) // sample_stars)
        stars = stars[::stride][:sample_stars]
    grid = grid if grid is not None else default_grid()

    start = time.perf_counter()
    scores = grid_scores(stars, heuristic, grid, star_side)
    cursor, best = argmin_position(scores, grid)
    elapsed = time.perf_counter() - start
    return HeuristicResult(
        best_cursor=cursor,
        best_score=best,
        states_evaluated=len(grid),
        wall_time=elapsed,
    )


def solve_pairwise_both(
    challenge: ClientChallenge | Sequence[StarTrajectory],
    grid: SearchGrid | None = None,
) -> tuple[HeuristicResult, HeuristicResult]:
    """MinSumDist and AllSumDist from one shared pairwise pass.

    The pairwise pass dominates both heuristics' cost, so benches that run
    both on the same challenge use this to avoid paying it twice.
    """
    stars = list(challenge.stars) if isinstance(challenge, ClientChallenge) else list(challenge)
    if len(stars) < 2:
        raise ValueError("pairwise heuristics need at least two stars")
    grid = grid if grid is not None else default_grid()
    args = _coefficient_arrays(stars)
    gx = grid.positions[:, 0].astype(np.float64)
    gy = grid.positions[:, 1].astype(np.float64)

    start = time.perf_counter()
    minsum, allsum = kernels.pairwise_scores(*args, gx, gy)
    elapsed = time.perf_counter() - start
    results = []
    for scores in (minsum, allsum):
        cursor, best = argmin_position(scores, grid)
        results.append(
            HeuristicResult(
                best_cursor=cursor,
                best_score=best,
                states_evaluated=len(grid),
                wall_time=elapsed / 2,
            )
        )
    return results[0], results[1]
