"""Shared domain types: challenge parameters, plane geometry, seeded randomness.

Everything here is immutable after construction and safe to share across
threads. ``Rng`` instances are single-owner: hand one to exactly one
pipeline and derive children for parallel work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any, Mapping

import numpy as np

SPACE_SIDE = 300
SOLUTION_MARGIN = 5

DEFAULT_PSI = 70.0
DEFAULT_DELTA = 7.0
DEFAULT_NSOL = 1
DEFAULT_PIC_SIZE = 150
DEFAULT_TOLERANCE = 5.0

PIC_SIZE_MIN = 16
PIC_SIZE_MAX = 290

SOLUTION_POLICIES = ("any-of", "all-of")


class StardriftError(Exception):
    """Base class for library errors."""


class ValidationError(StardriftError, ValueError):
    """A parameter failed validation; ``field`` names the offender."""

    def __init__(self, field_name: str, message: str):
        super().__init__(message)
        self.field = field_name


class IngestionError(StardriftError):
    """A pool picture could not be decoded; skip it and try another."""


class DegeneratePictureError(StardriftError):
    """A picture decomposed into too few stars to be usable."""


class PoolError(StardriftError):
    """The picture pool is empty or exhausted of usable pictures."""


class MalformedAnswerError(StardriftError, ValueError):
    """An answer fell outside the drawable space (distinct from a fail)."""


class ChallengeGoneError(StardriftError):
    """The challenge id is unknown, consumed, or expired."""


@dataclass(frozen=True)
class Point:
    """A position in drawable-space pixels, origin at the top-left."""

    x: float
    y: float

    def __iter__(self):
        return iter((self.x, self.y))


@dataclass(frozen=True)
class DrawableSpace:
    """The fixed 300x300 black square that stars are drawn in.

    Solutions stay ``solution_margin`` pixels clear of every edge, i.e.
    inside [5, 295] on both axes.
    """

    side: int = SPACE_SIDE
    solution_margin: int = SOLUTION_MARGIN

    @property
    def solution_lo(self) -> int:
        return self.solution_margin

    @property
    def solution_hi(self) -> int:
        return self.side - self.solution_margin

    def contains(self, p: Point) -> bool:
        return 0 <= p.x <= self.side and 0 <= p.y <= self.side


@dataclass(frozen=True)
class GenParams:
    """Challenge generation knobs.

    psi: noisy stars as a percentage of original stars (>= 0).
    delta: sensitivity; trajectory coefficients live in [-delta/10, delta/10].
    nsol: number of independent (shape, solution) pairs.
    pic_size: max(width, height) of the sampled picture after resize.
    rotation: rotate the picture by a random degree before decomposition.
    tolerance: pass radius in pixels around a solution (strict: pass iff
        distance < tolerance).
    solution_policy: "any-of" passes on the first solution hit; "all-of"
        requires every solution to be hit across sequential answers.
    """

    psi: float = DEFAULT_PSI
    delta: float = DEFAULT_DELTA
    nsol: int = DEFAULT_NSOL
    pic_size: int = DEFAULT_PIC_SIZE
    rotation: bool = False
    tolerance: float = DEFAULT_TOLERANCE
    solution_policy: str = "any-of"


_PARAM_ALIASES = {
    "psi": "psi",
    "delta": "delta",
    "nsol": "nsol",
    "pic_size": "pic_size",
    "picsize": "pic_size",
    "rotation": "rotation",
    "tolerance": "tolerance",
    "solution_policy": "solution_policy",
}


def validate_params(raw: Mapping[str, Any] | GenParams | None = None, **overrides: Any) -> GenParams:
    """Normalize loose input into a valid ``GenParams``.

    Accepts a mapping (e.g. a decoded request body), an existing GenParams,
    or keyword overrides; missing fields take the defaults. Raises
    ``ValidationError`` naming the first offending field. Idempotent:
    validating a valid GenParams returns an equal one.
    """
    values: dict[str, Any] = {}
    if isinstance(raw, GenParams):
        values.update(raw.__dict__)
    elif raw is not None:
        for key, val in raw.items():
            canon = _PARAM_ALIASES.get(str(key).lower().replace("-", "_"))
            if canon is None:
                raise ValidationError(str(key), f"unknown parameter {key!r}")
            values[canon] = val
    values.update(overrides)

    params = replace(GenParams(), **{k: v for k, v in values.items() if k in GenParams.__dataclass_fields__})

    try:
        psi = float(params.psi)
        delta = float(params.delta)
        nsol = int(params.nsol)
        pic_size = int(params.pic_size)
        rotation = bool(params.rotation)
        tolerance = float(params.tolerance)
    except (TypeError, ValueError) as exc:
        raise ValidationError("params", f"non-numeric parameter value: {exc}") from exc

    if not math.isfinite(psi) or psi < 0:
        raise ValidationError("psi", "psi must be non-negative")
    if not math.isfinite(delta) or delta <= 0:
        raise ValidationError("delta", "delta must be positive")
    if nsol < 1:
        raise ValidationError("nsol", "nsol must be at least 1")
    if not PIC_SIZE_MIN <= pic_size <= PIC_SIZE_MAX:
        raise ValidationError(
            "pic_size", f"pic_size must be within [{PIC_SIZE_MIN}, {PIC_SIZE_MAX}]"
        )
    if not math.isfinite(tolerance) or tolerance <= 0:
        raise ValidationError("tolerance", "tolerance must be positive")
    if params.solution_policy not in SOLUTION_POLICIES:
        raise ValidationError(
            "solution_policy", f"solution_policy must be one of {SOLUTION_POLICIES}"
        )

    return GenParams(
        psi=psi,
        delta=delta,
        nsol=nsol,
        pic_size=pic_size,
        rotation=rotation,
        tolerance=tolerance,
        solution_policy=params.solution_policy,
    )


def euclidean_distance(a: Point, b: Point) -> float:
    """Plane distance between two points."""
    return math.hypot(a.x - b.x, a.y - b.y)


@dataclass
class Rng:
    """Seedable deterministic randomness (numpy PCG64 under the hood).

    The generator family is fixed so that a seed reproduces the same
    challenge byte-for-byte on any platform. ``child`` derives an
    independent stream from (seed, keys) without disturbing this one.
    """

    seed: int
    _gen: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        self.seed = int(self.seed) & 0xFFFFFFFFFFFFFFFF
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def uniform(self, low: float, high: float, size=None):
        return self._gen.uniform(low, high, size)

    def integers(self, low: int, high: int, size=None):
        """Uniform integers on the closed interval [low, high]."""
        return self._gen.integers(low, high, size, endpoint=True)

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle of a Python list."""
        for i in range(len(items) - 1, 0, -1):
            j = int(self._gen.integers(0, i, endpoint=True))
            items[i], items[j] = items[j], items[i]

    def choice_index(self, n: int) -> int:
        return int(self._gen.integers(0, n))

    def child(self, *keys: int) -> "Rng":
        """Derive an independent Rng from this seed and the given keys."""
        ss = np.random.SeedSequence([self.seed, *(int(k) & 0xFFFFFFFFFFFFFFFF for k in keys)])
        return Rng(int(ss.generate_state(1, np.uint64)[0]))


def round_half_away(x):
    """Round to nearest integer, halves away from zero (element-wise).

    Fixed here once so rasterization and anchor placement agree bit-for-bit
    across modules.
    """
    arr = np.asarray(x)
    out = np.where(arr >= 0, np.floor(arr + 0.5), np.ceil(arr - 0.5))
    if np.isscalar(x) or arr.ndim == 0:
        return int(out)
    return out.astype(np.int64)
