"""Train the tile-feature classifier and attack a challenge.

Small-scale walkthrough of the learning attack: sample a tile corpus,
cluster it into reference tiles under Hamming distance, train a
classifier on labeled states, then argmax-search the coarse cursor grid
of a fresh challenge. Scale everything up (see the ml-train CLI) for
meaningful success rates.
"""

from pathlib import Path

from stardrift import Rng, generate_challenge, synthesize_pool, validate_params
from stardrift.core import euclidean_distance
from stardrift.attacks import ml as mlx

pool = synthesize_pool(Path(__file__).parent / "out" / "pool", 8, Rng(5))
params = validate_params({"psi": 70, "delta": 7})
omega = 15
rng = Rng(99)

print("sampling tile corpus from rendered states...")
corpus = mlx.sample_tile_corpus(pool, params, omega, rng.child(1), n_challenges=6, states_per_challenge=8)
print(f"  {len(corpus)} distinct {omega}x{omega} tiles")

print(f"k-means clustering into {3 * omega} reference tiles (Hamming metric)...")
refs = mlx.build_reference_tiles(corpus, omega, rng.child(2))

print("building a labeled training set from challenges with known solutions...")
training = mlx.build_training_set(pool, params, 10, 150, omega, refs, rng.child(3))
print(f"  {len(training.features)} states, {(training.labels == 1).sum()} labeled as solutions")

clf = mlx.make_classifier("forest", seed=0)
clf.fit(training.features, training.labels)
model = mlx.TrainedModel(omega=omega, refs=refs, classifier=clf)

challenge = generate_challenge(params, pool, Rng(4242))
answer = mlx.ml_solve(challenge.client_view(), model)
dist = min(euclidean_distance(answer, s) for s in challenge.solutions)
verdict = "CRACKED" if dist < params.tolerance else "missed"
print(f"\nattack answered {tuple(answer)}; true solution {tuple(challenge.solutions[0])}")
print(f"distance {dist:.1f}px -> {verdict} (tolerance {params.tolerance})")
