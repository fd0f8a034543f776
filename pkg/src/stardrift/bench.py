"""Security benches: parameter sweeps, random-guess rates, generation profiling.

Everything is reproducible: each sweep cell derives its RNG from the
master seed and the cell's coordinates, so running cells in any order (or
resuming an interrupted sweep from its checkpoint file) produces the same
CSV, wall-time columns aside.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import GenParams, Point, Rng, euclidean_distance, validate_params
from .generator import Challenge, generate_challenge, generate_noise_stars, new_challenge_id
from .kinematics import STAR_SIDE, verify
from .pool import PicturePool
from .wire import HEADER_SIZE, STAR_RECORD_SIZE, encode_binary
from .attacks import heuristics as hx

__version__ = "0.1.0"


@dataclass
class SweepConfig:
    strategies: list[str]
    psi_values: list[float]
    delta_values: list[float]
    per_cell: int = 100
    seed: int = 0
    out_path: Path | None = None
    base_params: GenParams = field(default_factory=GenParams)
    grid: hx.SearchGrid | None = None

    def __post_init__(self):
        if not self.strategies or not self.psi_values or not self.delta_values:
            raise ValueError("strategies, psi and delta ranges must be non-empty")
        if self.per_cell < 1:
            raise ValueError("per_cell must be >= 1")
        for s in self.strategies:
            if s not in hx.HEURISTICS:
                raise ValueError(f"unknown strategy {s!r}")


@dataclass
class CellResult:
    strategy: str
    psi: float
    delta: float
    successes: int
    trials: int
    mean_wall_time: float

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials

    def row(self) -> dict:
        return {
            "strategy": self.strategy,
            "psi": self.psi,
            "delta": self.delta,
            "successes": self.successes,
            "trials": self.trials,
            "success_rate": self.success_rate,
            "mean_wall_time": self.mean_wall_time,
        }


@dataclass
class BenchReport:
    rows: list[CellResult]
    seed: int
    star_side: int = STAR_SIDE

    def write_csv(self, path: Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            fh.write(f"# seed={self.seed} version={__version__} star_side={self.star_side}\n")
            writer = csv.DictWriter(
                fh,
                fieldnames=[
                    "strategy", "psi", "delta", "successes", "trials",
                    "success_rate", "mean_wall_time",
                ],
            )
            writer.writeheader()
            for r in self.rows:
                writer.writerow(r.row())


def attack_success(challenge: Challenge, answer: Point) -> bool:
    """Whether an attack answer lands within tolerance of some solution."""
    return any(
        euclidean_distance(answer, sol) < challenge.params.tolerance
        for sol in challenge.solutions
    )


def _checkpoint_path(out_path: Path | None) -> Path | None:
    return Path(str(out_path) + ".cells.jsonl") if out_path else None


def _load_checkpoint(path: Path | None) -> dict[tuple, CellResult]:
    done: dict[tuple, CellResult] = {}
    if path and path.exists():
        for line in path.read_text().splitlines():
            if not line.strip():
                continue
            d = json.loads(line)
            cell = CellResult(
                strategy=d["strategy"], psi=d["psi"], delta=d["delta"],
                successes=d["successes"], trials=d["trials"],
                mean_wall_time=d["mean_wall_time"],
            )
            done[(cell.strategy, cell.psi, cell.delta)] = cell
    return done


def run_sweep(config: SweepConfig, pool: PicturePool) -> BenchReport:
    """Success rates per (strategy, psi, delta) cell over fresh challenges.

    Challenge corpora depend only on (seed, psi, delta, index), never on
    the strategy, so every strategy in a cell sees identical challenges and
    the two pairwise heuristics share one scoring pass.
    """
    master = Rng(config.seed)
    ckpt = _checkpoint_path(config.out_path)
    if ckpt:
        ckpt.parent.mkdir(parents=True, exist_ok=True)
    done = _load_checkpoint(ckpt)
    grid = config.grid if config.grid is not None else hx.default_grid()

    rows: list[CellResult] = []
    for pi, psi in enumerate(config.psi_values):
        for di, delta in enumerate(config.delta_values):
            pending = [
                s for s in config.strategies if (s, psi, delta) not in done
            ]
            for s in config.strategies:
                if (s, psi, delta) in done:
                    rows.append(done[(s, psi, delta)])
            if not pending:
                continue

            params = validate_params(config.base_params, psi=psi, delta=delta)
            successes = {s: 0 for s in pending}
            times = {s: 0.0 for s in pending}
            for ci in range(config.per_cell):
                rng = master.child(pi, di, ci)
                challenge = generate_challenge(params, pool, rng)
                results = _score_challenge(challenge, pending, grid)
                for s, res in results.items():
                    successes[s] += attack_success(challenge, res.best_cursor)
                    times[s] += res.wall_time

            for s in pending:
                cell = CellResult(
                    strategy=s, psi=psi, delta=delta,
                    successes=successes[s], trials=config.per_cell,
                    mean_wall_time=times[s] / config.per_cell,
                )
                rows.append(cell)
                done[(s, psi, delta)] = cell
                if ckpt:
                    with ckpt.open("a") as fh:
                        fh.write(json.dumps(cell.row()) + "\n")

    report = BenchReport(rows=rows, seed=config.seed)
    if config.out_path:
        report.write_csv(config.out_path)
    return report


def _score_challenge(
    challenge: Challenge, strategies: Sequence[str], grid: hx.SearchGrid
) -> dict[str, hx.HeuristicResult]:
    out: dict[str, hx.HeuristicResult] = {}
    todo = list(strategies)
    if "minsumdist" in todo and "allsumdist" in todo:
        out["minsumdist"], out["allsumdist"] = hx.solve_pairwise_both(challenge.stars, grid)
        todo = [s for s in todo if s not in ("minsumdist", "allsumdist")]
    for s in todo:
        out[s] = hx.solve(challenge.stars, s, grid)
    return out


def with_extra_noise(challenge: Challenge, count: int, rng: Rng) -> Challenge:
    """A copy of the challenge with ``count`` extra noisy stars shuffled in."""
    extra = generate_noise_stars(count, challenge.params.delta, rng)
    stars = list(challenge.stars) + extra
    rng.shuffle(stars)
    return Challenge(
        id=new_challenge_id(),
        stars=stars,
        solutions=list(challenge.solutions),
        params=challenge.params,
        created_at=challenge.created_at,
    )


def adversarial_noise_stars(count: int, delta: float, rng: Rng, sol: Point) -> list:
    """Decoys aimed at bounding-box attacks.

    Anchors sit near alternating window corners *at the challenge
    solution*, so the decoys are maximally spread exactly when the shape
    assembles. Their cursor-x coefficients are signed so that moving the
    cursor toward the roomier side of the grid drags every decoy toward
    the window center at the top of the allowed [-delta/10, delta/10]
    speed: the solution state then sits on a downhill slope of the
    bounding-box score instead of at its minimum. Magnitudes stay inside
    the normal trajectory contract, so each decoy still looks like any
    other star on the wire.
    """
    from .generator import StarTrajectory

    hi = 299
    inset = 35  # keep decoys visible through the win zone: off-screen exit needs ~inset/0.7 px of cursor travel
    jitter = 8
    corners = [(0, 0), (hi, hi), (0, hi), (hi, 0)]
    bound = delta / 10.0
    escape = 1 if sol.x <= 150 else -1  # cursor-x direction with room to move
    stars = []
    for i in range(count):
        cx_side, cy_side = corners[i % 4]
        ax = int(rng.integers(inset, inset + jitter)) if cx_side == 0 else int(rng.integers(hi - inset - jitter, hi - inset))
        ay = int(rng.integers(inset, inset + jitter)) if cy_side == 0 else int(rng.integers(hi - inset - jitter, hi - inset))
        inward_x = 1 if cx_side == 0 else -1
        inward_y = 1 if cy_side == 0 else -1
        m_xx = inward_x * escape * float(rng.uniform(0.85 * bound, bound))
        m_yx = inward_y * escape * float(rng.uniform(0.85 * bound, bound))
        m_xy = float(rng.uniform(0.75 * bound, bound)) * (1 if rng.integers(0, 1) else -1)
        m_yy = float(rng.uniform(0.75 * bound, bound)) * (1 if rng.integers(0, 1) else -1)
        stars.append(
            StarTrajectory(
                m_xx=m_xx,
                m_xy=m_xy,
                c_x=ax - sol.y * m_xy - sol.x * m_xx,
                m_yx=m_yx,
                m_yy=m_yy,
                c_y=ay - sol.y * m_yy - sol.x * m_yx,
            )
        )
    return stars


def with_adversarial_noise(challenge: Challenge, count: int, rng: Rng) -> Challenge:
    """A copy of the challenge with corner-pinned adversarial decoys mixed in."""
    extra = adversarial_noise_stars(count, challenge.params.delta, rng, challenge.solutions[0])
    stars = list(challenge.stars) + extra
    rng.shuffle(stars)
    return Challenge(
        id=new_challenge_id(),
        stars=stars,
        solutions=list(challenge.solutions),
        params=challenge.params,
        created_at=challenge.created_at,
    )


def monte_carlo_random_guess(params: GenParams, trials: int, rng: Rng) -> float:
    """Pass rate of uniform random answers against fresh solution draws.

    Only the solutions matter to verification, so each trial draws a fresh
    solution set through the standard placement rule instead of paying for
    the full picture pipeline; the answer is uniform over the drawable
    space.
    """
    if trials < 10_000:
        raise ValueError("need at least 10^4 trials for a stable estimate")
    params = validate_params(params)
    hits = 0
    for _ in range(trials):
        sols = [
            Point(int(rng.integers(5, 295)), int(rng.integers(5, 295)))
            for _ in range(params.nsol)
        ]
        challenge = Challenge(
            id="mc", stars=[], solutions=sols, params=params, created_at=0.0
        )
        answer = Point(float(rng.uniform(0, 300)), float(rng.uniform(0, 300)))
        outcome = verify(answer, challenge)
        hits += outcome.hit
    return hits / trials


@dataclass
class ProfileRow:
    stars: int
    preprocess_s: float
    decompose_s: float
    trajectory_s: float
    total_s: float
    payload_bytes: int


@dataclass
class ProfileReport:
    rows: list[ProfileRow]

    def mean_total(self) -> float:
        return float(np.mean([r.total_s for r in self.rows]))

    def phase_fractions(self) -> dict[str, float]:
        total = sum(r.total_s for r in self.rows)
        return {
            "preprocess": sum(r.preprocess_s for r in self.rows) / total,
            "decompose": sum(r.decompose_s for r in self.rows) / total,
            "trajectory": sum(r.trajectory_s for r in self.rows) / total,
        }

    def write_csv(self, path: Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["stars", "preprocess_s", "decompose_s", "trajectory_s", "total_s", "payload_bytes"]
            )
            for r in self.rows:
                writer.writerow(
                    [r.stars, r.preprocess_s, r.decompose_s, r.trajectory_s, r.total_s, r.payload_bytes]
                )

    def summary(self) -> str:
        totals = sorted(r.total_s for r in self.rows)
        frac = self.phase_fractions()
        p = lambda q: totals[min(len(totals) - 1, int(q * len(totals)))]
        return (
            f"challenges={len(self.rows)} mean_total={self.mean_total():.4f}s "
            f"p50={p(0.5):.4f}s p90={p(0.9):.4f}s "
            f"phases: preprocess={frac['preprocess']:.1%} "
            f"decompose={frac['decompose']:.1%} trajectory={frac['trajectory']:.1%}"
        )


def profile_generation(pool: PicturePool, params: GenParams, n: int, rng: Rng) -> ProfileReport:
    """Generate ``n`` challenges and record per-phase time and payload size."""
    if n < 10:
        raise ValueError("profile at least 10 challenges")
    rows = []
    for i in range(n):
        timings: dict[str, float] = {}
        t0 = time.perf_counter()
        challenge = generate_challenge(params, pool, rng.child(i), timings=timings)
        total = time.perf_counter() - t0
        payload = encode_binary(challenge.client_view())
        assert len(payload) == HEADER_SIZE + STAR_RECORD_SIZE * len(challenge.stars)
        rows.append(
            ProfileRow(
                stars=len(challenge.stars),
                preprocess_s=timings.get("preprocess", 0.0),
                decompose_s=timings.get("decompose", 0.0),
                trajectory_s=timings.get("trajectory", 0.0),
                total_s=total,
                payload_bytes=len(payload),
            )
        )
    return ProfileReport(rows=rows)
