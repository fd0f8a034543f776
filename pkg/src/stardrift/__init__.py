"""stardrift: an interactive shape-discovery CAPTCHA.

A challenge scatters small white "stars" over a black 300x300 drawable
space; every star's position is a linear function of the cursor, and the
stars assemble into a recognizable picture only when the cursor reaches a
secret solution point. The package provides the challenge generator, the
HTTP verification service, a reference client motion model, and an
adversarial bench of brute-force and machine-learning solvers.
"""

from .core import (
    DrawableSpace,
    GenParams,
    Point,
    Rng,
    ValidationError,
    euclidean_distance,
    validate_params,
)
from .generator import (
    Challenge,
    ClientChallenge,
    StarTrajectory,
    generate_challenge,
    generate_noise_stars,
)
from .kinematics import STAR_SIDE, State, VerifyOutcome, render_state, star_position, verify
from .pool import PicturePool, synthesize_pool
from .store import ChallengeStore
from .wire import decode_binary, decode_json, encode_binary, encode_json, payload_for

__version__ = "0.1.0"

__all__ = [
    "GenParams",
    "Point",
    "Rng",
    "DrawableSpace",
    "ValidationError",
    "validate_params",
    "euclidean_distance",
    "Challenge",
    "ClientChallenge",
    "StarTrajectory",
    "generate_challenge",
    "generate_noise_stars",
    "STAR_SIDE",
    "State",
    "VerifyOutcome",
    "render_state",
    "star_position",
    "verify",
    "PicturePool",
    "synthesize_pool",
    "ChallengeStore",
    "encode_binary",
    "decode_binary",
    "encode_json",
    "decode_json",
    "payload_for",
    "__version__",
]
