"""The verification contract, end to end and in process.

Issues a challenge through the HTTP service (in-process test client),
submits a wrong answer, then shows that the challenge is consumed: answers
are one-shot, and responses never carry distances or solutions.
"""

from pathlib import Path

from fastapi.testclient import TestClient

from stardrift import Rng, synthesize_pool
from stardrift.service import ServiceConfig, create_app

pool_dir = Path(__file__).parent / "out" / "pool"
pool = synthesize_pool(pool_dir, 6, Rng(1))

config = ServiceConfig(pool_dir=str(pool_dir), seed=7)  # seeded: demo reproducibility
app = create_app(config, pool=pool)
client = TestClient(app)

body = client.post("/api/challenge").json()
print(f"issued challenge {body['id'][:8]}… with {len(body['stars'])} star records")
print(f"each record has exactly these fields: {sorted(body['stars'][0])}")

resp = client.get("/api/verify", params={"id": body["id"], "x": 10, "y": 10})
print(f"\nwrong answer -> {resp.json()}  (no distance hint, just pass/fail)")

again = client.get("/api/verify", params={"id": body["id"], "x": 10, "y": 10})
print(f"second attempt -> HTTP {again.status_code} (challenge consumed: answers are final)")

# the server-side store is the only place solutions live
store = app.state.store
print(f"\nserver-side status: {store.status(body['id'])}")
