"""Challenge generation: picture to star trajectories.

The pipeline per shape is: pick a pool picture, preprocess it (resize /
optional rotation / binarize), decompose it into anchor points on a 5x5
tile grid, then attach a random linear trajectory to every anchor so the
stars align to the picture exactly when the cursor sits on the secret
solution. Noisy stars are built the same way from random anchors and a
throwaway solution, which keeps them statistically indistinguishable from
originals on the wire.
"""

from __future__ import annotations

import io
import secrets
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from PIL import Image, UnidentifiedImageError

from .core import (
    DegeneratePictureError,
    DrawableSpace,
    GenParams,
    IngestionError,
    Point,
    PoolError,
    Rng,
    round_half_away,
)
from .pool import PicturePool

BLACK_THRESHOLD = 128  # luminance below this counts as ink
TILE_SIDE = 5
FULL_TILE = TILE_SIDE * TILE_SIDE
CENTROID_MIN_BLACK = 9  # tiles with 9..24 black pixels anchor at the black centroid
MIN_STARS = 20  # pictures decomposing below this are rejected

# Shapes keep this clearance from the window border when it fits (same
# usability reasoning as the 5 px solution margin). Flush placements also
# hand dispersion attacks their strongest signal: any cursor move throws
# border stars off-screen at once, spotlighting the solution state.
PLACEMENT_MARGIN = 30


@dataclass(frozen=True)
class BinaryImage:
    """Binarized picture; ``pixels[y, x]`` is True where the picture is ink."""

    width: int
    height: int
    pixels: np.ndarray

    @property
    def black_count(self) -> int:
        return int(self.pixels.sum())


@dataclass(frozen=True)
class AnchorSet:
    """Positions every original star of one shape takes at its solution."""

    anchors: list[Point]

    def __len__(self) -> int:
        return len(self.anchors)


@dataclass(frozen=True)
class StarTrajectory:
    """The six per-star motion parameters; the only data a client ever sees.

    A star's position at cursor (cx, cy) is
    ``(m_xy*cy + m_xx*cx + c_x, m_yx*cx + m_yy*cy + c_y)``.
    """

    m_xx: float
    m_xy: float
    c_x: float
    m_yx: float
    m_yy: float
    c_y: float


@dataclass(frozen=True)
class StarOrigin:
    """Server-side bookkeeping for one star (never serialized).

    ``shape`` is the solution index for original stars and -1 for noise;
    ``anchor`` is the position the star takes at its owning solution
    (None for noise stars, whose pseudo-solution is discarded).
    """

    shape: int
    anchor: Point | None

    @property
    def is_original(self) -> bool:
        return self.shape >= 0


@dataclass
class Challenge:
    """One issued challenge. ``solutions`` and ``origins`` stay server-side."""

    id: str
    stars: list[StarTrajectory]
    solutions: list[Point]
    params: GenParams
    created_at: float
    origins: list[StarOrigin] = field(default_factory=list, repr=False)

    def client_view(self) -> "ClientChallenge":
        return ClientChallenge(id=self.id, stars=list(self.stars))


@dataclass(frozen=True)
class ClientChallenge:
    """What crosses the wire: an opaque id plus trajectory records."""

    id: str
    stars: list[StarTrajectory]


def preprocess_picture(raw: bytes, params: GenParams, rng: Rng) -> BinaryImage:
    """Decode, resize to pic_size, optionally rotate, and binarize a picture.

    Resizing preserves aspect ratio with max(w, h) forced to ``pic_size``.
    Rotation (when enabled) is a uniform random angle in [0, 360) with
    bilinear resampling inside the resized frame; binarization then maps
    white-composited luminance < 128 to ink.
    """
    try:
        img = Image.open(io.BytesIO(raw))
        img.load()
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise IngestionError(f"undecodable picture: {exc}") from exc

    img = img.convert("RGBA")
    white = Image.new("RGBA", img.size, (255, 255, 255, 255))
    img = Image.alpha_composite(white, img).convert("L")

    scale = params.pic_size / max(img.width, img.height)
    if img.width >= img.height:
        new_size = (params.pic_size, max(1, round(img.height * scale)))
    else:
        new_size = (max(1, round(img.width * scale)), params.pic_size)
    img = img.resize(new_size, Image.Resampling.BILINEAR)

    if params.rotation:
        angle = float(rng.uniform(0.0, 360.0))
        img = img.rotate(angle, resample=Image.Resampling.BILINEAR, fillcolor=255)

    pixels = np.asarray(img, dtype=np.uint8) < BLACK_THRESHOLD
    return BinaryImage(width=img.width, height=img.height, pixels=pixels)


def decompose(img: BinaryImage, space: DrawableSpace, rng: Rng) -> AnchorSet:
    """Sample the picture into star anchors on a 5x5 tile grid.

    A fully black tile anchors at the tile center; a tile with 9..24 black
    pixels anchors at the rounded centroid of its black pixels; sparser
    tiles yield nothing. The whole anchor set is then translated by one
    random offset so every anchor lies inside the drawable space.
    """
    anchors_xy: list[tuple[int, int]] = []
    for ty in range(0, img.height, TILE_SIDE):
        for tx in range(0, img.width, TILE_SIDE):
            tile = img.pixels[ty : ty + TILE_SIDE, tx : tx + TILE_SIDE]
            n_black = int(tile.sum())
            if n_black == FULL_TILE:
                anchors_xy.append((tx + TILE_SIDE // 2, ty + TILE_SIDE // 2))
            elif CENTROID_MIN_BLACK <= n_black < FULL_TILE:
                ys, xs = np.nonzero(tile)
                cx = round_half_away(tx + xs.mean())
                cy = round_half_away(ty + ys.mean())
                anchors_xy.append((cx, cy))

    if len(anchors_xy) < MIN_STARS:
        raise DegeneratePictureError(
            f"picture decomposed into {len(anchors_xy)} stars (< {MIN_STARS})"
        )

    xs = [a[0] for a in anchors_xy]
    ys = [a[1] for a in anchors_xy]
    hi = space.side - 1
    margin_x = min(PLACEMENT_MARGIN, (hi - (max(xs) - min(xs))) // 2)
    margin_y = min(PLACEMENT_MARGIN, (hi - (max(ys) - min(ys))) // 2)
    dx = int(rng.integers(margin_x - min(xs), hi - margin_x - max(xs)))
    dy = int(rng.integers(margin_y - min(ys), hi - margin_y - max(ys)))
    return AnchorSet([Point(x + dx, y + dy) for x, y in anchors_xy])


def _trajectories_for(anchors: Sequence[Point], sol: Point, delta: float, rng: Rng) -> list[StarTrajectory]:
    bound = delta / 10.0
    coeffs = rng.uniform(-bound, bound, size=(len(anchors), 4))
    stars = []
    for anchor, (m_xx, m_xy, m_yx, m_yy) in zip(anchors, coeffs):
        c_x = anchor.x - sol.y * m_xy - sol.x * m_xx
        c_y = anchor.y - sol.y * m_yy - sol.x * m_yx
        stars.append(StarTrajectory(m_xx, m_xy, c_x, m_yx, m_yy, c_y))
    return stars


def compute_trajectories(anchors: AnchorSet, sol: Point, delta: float, rng: Rng) -> list[StarTrajectory]:
    """Attach a random linear trajectory to each anchor.

    Coefficients are uniform in [-delta/10, delta/10]; the constants are
    chosen so the star sits exactly on its anchor when the cursor is at
    ``sol``.
    """
    return _trajectories_for(anchors.anchors, sol, delta, rng)


def generate_noise_stars(count: int, delta: float, rng: Rng, space: DrawableSpace | None = None) -> list[StarTrajectory]:
    """Build ``count`` decoy stars.

    Each gets a random anchor anywhere in the drawable space and its own
    throwaway solution, so its motion model matches original stars exactly.
    """
    space = space or DrawableSpace()
    stars = []
    for _ in range(count):
        anchor = Point(
            int(rng.integers(0, space.side - 1)),
            int(rng.integers(0, space.side - 1)),
        )
        pseudo_sol = Point(
            int(rng.integers(space.solution_lo, space.solution_hi)),
            int(rng.integers(space.solution_lo, space.solution_hi)),
        )
        stars.extend(_trajectories_for([anchor], pseudo_sol, delta, rng))
    return stars


def noise_count(psi: float, originals: int) -> int:
    """Noisy-star count: psi percent of originals, rounded half up."""
    return int(np.floor(psi / 100.0 * originals + 0.5))


def new_challenge_id() -> str:
    """128 unpredictable bits, independent of any generation seed."""
    return secrets.token_hex(16)


def generate_challenge(
    params: GenParams,
    pool: PicturePool,
    rng: Rng,
    id_source: Callable[[], str] | None = None,
    space: DrawableSpace | None = None,
    timings: dict[str, float] | None = None,
) -> Challenge:
    """Generate a full challenge: nsol shapes plus noise, shuffled together.

    Degenerate or undecodable pictures are skipped and another drawn; the
    pool is exhausted when every picture has failed. All randomness flows
    from ``rng``, so challenge content is reproducible from the seed; the
    id comes from ``id_source`` (default: unpredictable token). When a
    ``timings`` dict is passed, per-phase wall time accumulates into its
    "preprocess", "decompose", and "trajectory" keys.
    """
    space = space or DrawableSpace()
    if len(pool) == 0:
        raise PoolError("picture pool is empty")

    tagged: list[tuple[StarTrajectory, StarOrigin]] = []
    solutions: list[Point] = []
    for shape_i in range(params.nsol):
        anchors = _decompose_some_picture(params, pool, rng, space, timings)
        sol = Point(
            int(rng.integers(space.solution_lo, space.solution_hi)),
            int(rng.integers(space.solution_lo, space.solution_hi)),
        )
        solutions.append(sol)
        t0 = time.perf_counter()
        trajectories = compute_trajectories(anchors, sol, params.delta, rng)
        _add_time(timings, "trajectory", t0)
        for star, anchor in zip(trajectories, anchors.anchors):
            tagged.append((star, StarOrigin(shape=shape_i, anchor=anchor)))

    t0 = time.perf_counter()
    n_noise = noise_count(params.psi, len(tagged))
    for star in generate_noise_stars(n_noise, params.delta, rng, space):
        tagged.append((star, StarOrigin(shape=-1, anchor=None)))
    rng.shuffle(tagged)
    _add_time(timings, "trajectory", t0)

    stars = [t[0] for t in tagged]
    origins = [t[1] for t in tagged]

    challenge_id = id_source() if id_source is not None else new_challenge_id()
    return Challenge(
        id=challenge_id,
        stars=stars,
        solutions=solutions,
        params=params,
        created_at=time.time(),
        origins=origins,
    )


def _add_time(timings: dict[str, float] | None, key: str, start: float) -> None:
    if timings is not None:
        timings[key] = timings.get(key, 0.0) + (time.perf_counter() - start)


def challenge_from_picture(
    raw: bytes,
    params: GenParams,
    rng: Rng,
    id_source: Callable[[], str] | None = None,
    space: DrawableSpace | None = None,
) -> Challenge:
    """Build a challenge from one specific picture (every shape reuses it)."""
    space = space or DrawableSpace()
    tagged: list[tuple[StarTrajectory, StarOrigin]] = []
    solutions: list[Point] = []
    for shape_i in range(params.nsol):
        anchors = decompose(preprocess_picture(raw, params, rng), space, rng)
        sol = Point(
            int(rng.integers(space.solution_lo, space.solution_hi)),
            int(rng.integers(space.solution_lo, space.solution_hi)),
        )
        solutions.append(sol)
        for star, anchor in zip(compute_trajectories(anchors, sol, params.delta, rng), anchors.anchors):
            tagged.append((star, StarOrigin(shape=shape_i, anchor=anchor)))

    n_noise = noise_count(params.psi, len(tagged))
    for star in generate_noise_stars(n_noise, params.delta, rng, space):
        tagged.append((star, StarOrigin(shape=-1, anchor=None)))
    rng.shuffle(tagged)

    challenge_id = id_source() if id_source is not None else new_challenge_id()
    return Challenge(
        id=challenge_id,
        stars=[t[0] for t in tagged],
        solutions=solutions,
        params=params,
        created_at=time.time(),
        origins=[t[1] for t in tagged],
    )


def _decompose_some_picture(
    params: GenParams,
    pool: PicturePool,
    rng: Rng,
    space: DrawableSpace,
    timings: dict[str, float] | None = None,
) -> AnchorSet:
    remaining = list(range(len(pool)))
    while remaining:
        idx = remaining.pop(rng.choice_index(len(remaining)))
        t0 = time.perf_counter()
        try:
            img = preprocess_picture(pool.load(idx), params, rng)
        except IngestionError:
            _add_time(timings, "preprocess", t0)
            continue
        _add_time(timings, "preprocess", t0)
        t0 = time.perf_counter()
        try:
            return decompose(img, space, rng)
        except DegeneratePictureError:
            continue
        finally:
            _add_time(timings, "decompose", t0)
    raise PoolError("pool exhausted of usable pictures")
