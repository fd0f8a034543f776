"""Reference motion model, state rasterization, and answer verification.

Mirrors exactly what the web client computes: every star position is a
linear function of the cursor. The rasterizer stamps each star as a small
white square on the black drawable space; attack code and the client draw
from the same rules so what humans see is what attacks analyze.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    DrawableSpace,
    MalformedAnswerError,
    Point,
    euclidean_distance,
    round_half_away,
)
from .generator import Challenge, StarTrajectory

STAR_SIDE = 3  # rendered star glyph side in pixels; stamped centered


@dataclass(frozen=True)
class State:
    """Snapshot of every star's position for one cursor position."""

    cursor: Point
    positions: list[Point]


@dataclass(frozen=True)
class VerifyOutcome:
    """Result of checking one answer.

    ``delta`` is the distance to the nearest not-yet-matched solution;
    ``solutions_remaining`` counts solutions still unmatched after this
    answer (0 on an overall pass). ``hit`` records whether this single
    answer landed within tolerance of some unmatched solution, which under
    the all-of policy is weaker than ``passed``.
    """

    passed: bool
    delta: float
    solutions_remaining: int
    hit: bool = False


def star_position(star: StarTrajectory, cursor: Point) -> Point:
    """Evaluate one trajectory at a cursor position."""
    return Point(
        star.m_xy * cursor.y + star.m_xx * cursor.x + star.c_x,
        star.m_yx * cursor.x + star.m_yy * cursor.y + star.c_y,
    )


def positions_at(stars: Sequence[StarTrajectory], cursor: Point) -> np.ndarray:
    """All star positions at a cursor, as an (n, 2) float array."""
    coef = trajectory_arrays(stars)
    x = coef["m_xx"] * cursor.x + coef["m_xy"] * cursor.y + coef["c_x"]
    y = coef["m_yx"] * cursor.x + coef["m_yy"] * cursor.y + coef["c_y"]
    return np.stack([x, y], axis=1)


def trajectory_arrays(stars: Sequence[StarTrajectory]) -> dict[str, np.ndarray]:
    """Column-wise float64 views of a star list, for vectorized evaluation."""
    n = len(stars)
    out = {k: np.empty(n) for k in ("m_xx", "m_xy", "c_x", "m_yx", "m_yy", "c_y")}
    for i, s in enumerate(stars):
        out["m_xx"][i] = s.m_xx
        out["m_xy"][i] = s.m_xy
        out["c_x"][i] = s.c_x
        out["m_yx"][i] = s.m_yx
        out["m_yy"][i] = s.m_yy
        out["c_y"][i] = s.c_y
    return out


def state_at(stars: Sequence[StarTrajectory], cursor: Point) -> State:
    return State(cursor=cursor, positions=[star_position(s, cursor) for s in stars])


def render_state(
    stars: Sequence[StarTrajectory] | np.ndarray,
    cursor: Point | None = None,
    star_side: int = STAR_SIDE,
    space: DrawableSpace | None = None,
) -> np.ndarray:
    """Rasterize a state into the Boolean pixel matrix (True = white).

    ``stars`` is either a trajectory list (evaluated at ``cursor``) or a
    precomputed (n, 2) position array. Each star stamps a centered
    star_side x star_side white square at its rounded position, clipped at
    the boundary; off-screen stars contribute nothing.
    """
    space = space or DrawableSpace()
    side = space.side
    if isinstance(stars, np.ndarray):
        pos = stars
    else:
        if cursor is None:
            raise ValueError("cursor required when passing trajectories")
        pos = positions_at(stars, cursor)

    matrix = np.zeros((side, side), dtype=bool)
    if len(pos) == 0:
        return matrix

    px = round_half_away(pos[:, 0])
    py = round_half_away(pos[:, 1])
    half = star_side // 2
    for dy in range(-half, star_side - half):
        for dx in range(-half, star_side - half):
            xx = px + dx
            yy = py + dy
            ok = (xx >= 0) & (xx < side) & (yy >= 0) & (yy < side)
            matrix[yy[ok], xx[ok]] = True
    return matrix


def verify(
    answer: Point,
    challenge: Challenge,
    matched: frozenset[int] | set[int] = frozenset(),
) -> VerifyOutcome:
    """Check an answer against the challenge's solutions.

    ``matched`` holds indices of solutions already hit (all-of policy).
    A pass is strict: distance must be **below** the tolerance. Answers
    outside the drawable space are malformed, not failed.
    """
    space = DrawableSpace()
    if not space.contains(answer):
        raise MalformedAnswerError(
            f"answer ({answer.x}, {answer.y}) outside the drawable space"
        )

    unmatched = [i for i in range(len(challenge.solutions)) if i not in matched]
    if not unmatched:
        return VerifyOutcome(passed=True, delta=0.0, solutions_remaining=0, hit=True)

    deltas = [(euclidean_distance(answer, challenge.solutions[i]), i) for i in unmatched]
    delta, nearest = min(deltas)
    hit = delta < challenge.params.tolerance

    if challenge.params.solution_policy == "all-of":
        remaining = len(unmatched) - (1 if hit else 0)
        passed = hit and remaining == 0
    else:
        remaining = 0 if hit else len(unmatched)
        passed = hit
    return VerifyOutcome(passed=passed, delta=delta, solutions_remaining=remaining, hit=hit)
