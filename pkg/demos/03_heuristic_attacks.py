"""Break easy challenges, fail on hardened ones.

Runs the bounding-box solver (MinSize) against noise-free challenges,
where it cracks most of them, then against hardened parameters
(psi=70, delta=7) with the full heuristic lineup, where every heuristic
collapses to near-chance. Uses a coarse grid to keep the demo quick; the
bench CLI runs the full 84,100-state grid.
"""

from pathlib import Path

from stardrift import Rng, generate_challenge, synthesize_pool, validate_params
from stardrift.attacks import heuristics as hx
from stardrift.bench import attack_success

pool = synthesize_pool(Path(__file__).parent / "out" / "pool", 8, Rng(5))
grid = hx.stepped_grid(3)  # demo speed; drop to the full grid for real numbers

easy = validate_params({"psi": 0, "delta": 5})
wins = 0
for seed in range(10):
    ch = generate_challenge(easy, pool, Rng(seed))
    result = hx.solve(ch.stars, "minsize", grid)
    wins += attack_success(ch, result.best_cursor)
print(f"MinSize on noise-free challenges: {wins}/10 cracked")

hardened = validate_params({"psi": 70, "delta": 7})
for heuristic in hx.HEURISTICS:
    wins = 0
    for seed in range(5):
        ch = generate_challenge(hardened, pool, Rng(100 + seed))
        result = hx.solve(ch.stars, heuristic, grid)
        wins += attack_success(ch, result.best_cursor)
    print(f"{heuristic:16s} on hardened challenges: {wins}/5")
