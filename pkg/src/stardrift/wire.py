"""Client payload encodings.

The binary form carries exactly six 4-byte little-endian IEEE-754 floats
per star after a fixed 24-byte header, so a challenge with the typical
~543 stars costs about 12.7 kB on the wire. JSON is offered for
debuggability. Neither encoding has anywhere to put a solution.
"""

from __future__ import annotations

import base64
import json
import struct
from dataclasses import dataclass

from .generator import ClientChallenge, StarTrajectory

BINARY_MAGIC = b"SD01"
HEADER_SIZE = 4 + 16 + 4  # magic + raw id + star count
STAR_RECORD_SIZE = 24  # six float32 values
FIELD_ORDER = ("m_xx", "m_xy", "c_x", "m_yx", "m_yy", "c_y")

_STAR_STRUCT = struct.Struct("<6f")
_COUNT_STRUCT = struct.Struct("<I")


@dataclass(frozen=True)
class WirePayload:
    """A serialized challenge ready to return to a client."""

    id: str
    encoding: str  # "json" | "binary"
    body: dict

    def json_obj(self) -> dict:
        return self.body


def encode_binary(view: ClientChallenge) -> bytes:
    """Pack a client view as header + 24 bytes per star."""
    raw_id = bytes.fromhex(view.id)
    if len(raw_id) != 16:
        raise ValueError("challenge id must be 32 hex characters (128 bits)")
    parts = [BINARY_MAGIC, raw_id, _COUNT_STRUCT.pack(len(view.stars))]
    for s in view.stars:
        parts.append(_STAR_STRUCT.pack(s.m_xx, s.m_xy, s.c_x, s.m_yx, s.m_yy, s.c_y))
    return b"".join(parts)


def decode_binary(blob: bytes) -> ClientChallenge:
    if blob[:4] != BINARY_MAGIC:
        raise ValueError("bad magic bytes")
    raw_id = blob[4:20]
    (count,) = _COUNT_STRUCT.unpack_from(blob, 20)
    expected = HEADER_SIZE + count * STAR_RECORD_SIZE
    if len(blob) != expected:
        raise ValueError(f"payload length {len(blob)} != expected {expected}")
    stars = []
    for i in range(count):
        vals = _STAR_STRUCT.unpack_from(blob, HEADER_SIZE + i * STAR_RECORD_SIZE)
        stars.append(StarTrajectory(*[float(v) for v in vals]))
    return ClientChallenge(id=raw_id.hex(), stars=stars)


def encode_json(view: ClientChallenge) -> dict:
    return {
        "id": view.id,
        "encoding": "json",
        "stars": [
            {field: getattr(s, field) for field in FIELD_ORDER} for s in view.stars
        ],
    }


def decode_json(obj: dict) -> ClientChallenge:
    stars = [StarTrajectory(**{f: float(rec[f]) for f in FIELD_ORDER}) for rec in obj["stars"]]
    return ClientChallenge(id=obj["id"], stars=stars)


def payload_for(view: ClientChallenge, encoding: str) -> WirePayload:
    """Build the HTTP response body for the requested encoding."""
    if encoding == "binary":
        blob = encode_binary(view)
        body = {
            "id": view.id,
            "encoding": "binary",
            "stars_b64": base64.b64encode(blob).decode("ascii"),
        }
    elif encoding == "json":
        body = encode_json(view)
    else:
        raise ValueError(f"unknown encoding {encoding!r}")
    return WirePayload(id=view.id, encoding=encoding, body=body)


def payload_text(payload: WirePayload) -> str:
    """Canonical serialized text of a payload (for leak scans)."""
    return json.dumps(payload.body, sort_keys=True)
