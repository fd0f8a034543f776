"""Generate a challenge and watch the stars assemble.

Builds a small icon pool, generates one challenge, and renders the star
field at a few cursor positions: far away (scattered), near the solution
(almost assembled), and exactly at the solution (the hidden picture).
Writes PNG frames next to this script.
"""

from pathlib import Path

import numpy as np
from PIL import Image

from stardrift import Point, Rng, generate_challenge, render_state, synthesize_pool, validate_params

out_dir = Path(__file__).parent / "out"
out_dir.mkdir(exist_ok=True)

rng = Rng(2024)
pool = synthesize_pool(out_dir / "pool", 8, rng)
params = validate_params({"psi": 70, "delta": 7})

challenge = generate_challenge(params, pool, Rng(42))
sol = challenge.solutions[0]
print(f"challenge {challenge.id[:8]}…: {len(challenge.stars)} stars")
print(f"(the server-side secret solution is {tuple(sol)})")

frames = {
    "far": Point((sol.x + 150) % 290 + 5, (sol.y + 150) % 290 + 5),
    "near": Point(sol.x + 12, sol.y - 9),
    "solved": sol,
}
for name, cursor in frames.items():
    matrix = render_state(challenge.stars, cursor)
    img = Image.fromarray((matrix * 255).astype(np.uint8))
    path = out_dir / f"state_{name}.png"
    img.save(path)
    print(f"{name:>7}: cursor={tuple(cursor)} white_pixels={int(matrix.sum())} -> {path}")

print("\nOpen the three PNGs side by side: the picture only exists at the solution.")
