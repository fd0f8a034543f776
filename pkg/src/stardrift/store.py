"""One-shot challenge store with TTL expiry.

Each challenge transitions active -> {passed, failed, expired} exactly
once; under the all-of policy an intermediate correct answer keeps the
challenge active with one fewer solution remaining. All transitions happen
under a single lock, so concurrent submits can never double-consume an id.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from typing import Callable

from .core import ChallengeGoneError, Point
from .generator import Challenge
from .kinematics import VerifyOutcome, verify

DEFAULT_TTL_SECONDS = 300.0

ACTIVE = "active"
PASSED = "passed"
FAILED = "failed"
EXPIRED = "expired"


@dataclass
class StoreEntry:
    challenge: Challenge
    status: str = ACTIVE
    matched: set[int] = field(default_factory=set)
    stored_at: float = 0.0


class ChallengeStore:
    """In-memory id -> (challenge, progress, status) map."""

    def __init__(self, ttl_seconds: float = DEFAULT_TTL_SECONDS, time_func: Callable[[], float] = time.time):
        self.ttl_seconds = ttl_seconds
        self._time = time_func
        self._lock = threading.Lock()
        self._entries: dict[str, StoreEntry] = {}

    def __len__(self) -> int:
        return len(self._entries)

    def insert(self, challenge: Challenge) -> None:
        with self._lock:
            self._entries[challenge.id] = StoreEntry(
                challenge=challenge, stored_at=self._time()
            )

    def status(self, challenge_id: str) -> str | None:
        with self._lock:
            entry = self._entries.get(challenge_id)
            return entry.status if entry else None

    def submit(self, challenge_id: str, answer: Point) -> VerifyOutcome:
        """Verify one answer and advance the challenge's state.

        Raises ChallengeGoneError for unknown, expired, or consumed ids.
        A wrong answer consumes the challenge (answers are final); a
        correct all-of answer with solutions left keeps it active.
        """
        with self._lock:
            entry = self._entries.get(challenge_id)
            if entry is None:
                raise ChallengeGoneError("unknown challenge id")
            if entry.status == ACTIVE and self._expired(entry):
                entry.status = EXPIRED
            if entry.status != ACTIVE:
                raise ChallengeGoneError(f"challenge is {entry.status}")

            outcome = verify(answer, entry.challenge, entry.matched)
            if outcome.hit:
                self._mark_nearest(entry, answer)
                entry.status = PASSED if outcome.passed else ACTIVE
            else:
                entry.status = FAILED
            return outcome

    def sweep_expired(self, now: float | None = None) -> int:
        """Expire every active challenge older than the TTL; return count."""
        now = self._time() if now is None else now
        count = 0
        with self._lock:
            for entry in self._entries.values():
                if entry.status == ACTIVE and now - entry.stored_at > self.ttl_seconds:
                    entry.status = EXPIRED
                    count += 1
        return count

    def _expired(self, entry: StoreEntry) -> bool:
        return self._time() - entry.stored_at > self.ttl_seconds

    def _mark_nearest(self, entry: StoreEntry, answer: Point) -> None:
        from .core import euclidean_distance

        best = None
        for i, sol in enumerate(entry.challenge.solutions):
            if i in entry.matched:
                continue
            d = euclidean_distance(answer, sol)
            if best is None or d < best[0]:
                best = (d, i)
        if best is not None:
            entry.matched.add(best[1])
