"""Security analytics: random-guess rate and a mini parameter sweep.

Reproduces two headline analytics: the random-guess pass rate against the
analytic value pi*r^2/300^2, and a miniature (strategy, psi, delta) sweep
showing how noise shuts the heuristics down. The bench CLI runs the real
thing with full grids and checkpointing.
"""

import math
from pathlib import Path

from stardrift import Rng, synthesize_pool, validate_params
from stardrift.attacks import heuristics as hx
from stardrift.bench import SweepConfig, monte_carlo_random_guess, run_sweep

rate = monte_carlo_random_guess(validate_params({"tolerance": 5}), 100_000, Rng(0))
analytic = math.pi * 25 / 90_000
print(f"random guess, tolerance 5: measured {rate:.5f} vs analytic {analytic:.5f}")

rate10 = monte_carlo_random_guess(validate_params({"tolerance": 10}), 100_000, Rng(1))
print(f"random guess, tolerance 10: {rate10:.5f} (~4x: doubling tolerance quadruples risk)")

pool = synthesize_pool(Path(__file__).parent / "out" / "pool", 8, Rng(5))
config = SweepConfig(
    strategies=["minsize", "mindistribution"],
    psi_values=[0.0, 70.0],
    delta_values=[5.0],
    per_cell=4,
    seed=3,
    out_path=Path(__file__).parent / "out" / "mini_sweep.csv",
    grid=hx.stepped_grid(4),  # demo speed
)
report = run_sweep(config, pool)
print("\nmini sweep (4 challenges per cell, coarse grid):")
for row in report.rows:
    print(f"  {row.strategy:16s} psi={row.psi:<4g} delta={row.delta:<3g} success={row.success_rate:.0%}")
print(f"\nCSV written to {config.out_path}")
