"""The networked CAPTCHA service.

Issues challenges over HTTP, serializes trajectory parameters only, and
verifies one-shot answers. Responses are deliberately information-free
beyond pass/fail plus the remaining-solutions count: no distance, no
solution coordinates, and wrong answers at different distances produce
byte-identical bodies.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Query, Request
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from .core import (
    ChallengeGoneError,
    GenParams,
    MalformedAnswerError,
    Point,
    PoolError,
    Rng,
    ValidationError,
    validate_params,
)
from .generator import generate_challenge
from .pool import PicturePool
from .store import DEFAULT_TTL_SECONDS, ChallengeStore
from .wire import payload_for

ENV_PREFIX = "STARDRIFT_"


@dataclass
class ServiceConfig:
    """Server knobs; file values < environment < explicit arguments."""

    pool_dir: str = "pool"
    port: int = 8000
    ttl_seconds: float = DEFAULT_TTL_SECONDS
    encoding: str = "json"
    params: GenParams = field(default_factory=GenParams)
    static_dir: str | None = None
    buffer_size: int = 0  # pre-generated challenge buffer; 0 disables
    rate_limit_per_minute: int = 0  # per-IP issuance cap; 0 disables
    seed: int | None = None  # deterministic generation, for tests only

    @classmethod
    def load(cls, path: str | Path | None = None, **overrides: Any) -> "ServiceConfig":
        values: dict[str, Any] = {}
        if path is not None:
            values.update(json.loads(Path(path).read_text()))
        for key in ("pool_dir", "port", "ttl_seconds", "encoding", "static_dir", "buffer_size", "rate_limit_per_minute", "seed"):
            env = os.environ.get(ENV_PREFIX + key.upper())
            if env is not None:
                values[key] = env
        param_values = values.pop("params", {})
        values.update({k: v for k, v in overrides.items() if v is not None and k != "params"})
        if overrides.get("params") is not None:
            param_values = overrides["params"]

        cfg = cls(
            pool_dir=str(values.get("pool_dir", cls.pool_dir)),
            port=int(values.get("port", cls.port)),
            ttl_seconds=float(values.get("ttl_seconds", cls.ttl_seconds)),
            encoding=str(values.get("encoding", cls.encoding)),
            params=validate_params(param_values),
            static_dir=values.get("static_dir"),
            buffer_size=int(values.get("buffer_size", cls.buffer_size)),
            rate_limit_per_minute=int(values.get("rate_limit_per_minute", cls.rate_limit_per_minute)),
            seed=None if values.get("seed") in (None, "") else int(values["seed"]),
        )
        if cfg.encoding not in ("json", "binary"):
            raise ValidationError("encoding", "encoding must be json or binary")
        return cfg


class _ChallengeSource:
    """Thread-safe challenge factory, optionally seeded and buffered."""

    def __init__(self, pool: PicturePool, config: ServiceConfig):
        self._pool = pool
        self._config = config
        self._lock = threading.Lock()
        self._counter = 0
        self._buffer: list = []

    def _next_rng(self) -> Rng:
        if self._config.seed is not None:
            with self._lock:
                rng = Rng(self._config.seed).child(self._counter)
                self._counter += 1
            return rng
        return Rng(secrets.randbits(63))

    def take(self, params: GenParams):
        if params == self._config.params:
            with self._lock:
                if self._buffer:
                    return self._buffer.pop()
        return generate_challenge(params, self._pool, self._next_rng())

    def refill(self) -> None:
        while True:
            with self._lock:
                if len(self._buffer) >= self._config.buffer_size:
                    return
            ch = generate_challenge(self._config.params, self._pool, self._next_rng())
            with self._lock:
                self._buffer.append(ch)


class _RateLimiter:
    """Fixed-window per-IP cap on challenge issuance."""

    def __init__(self, per_minute: int, time_func):
        self.per_minute = per_minute
        self._time = time_func
        self._lock = threading.Lock()
        self._windows: dict[str, tuple[int, int]] = {}

    def allow(self, ip: str) -> bool:
        if self.per_minute <= 0:
            return True
        window = int(self._time() // 60)
        with self._lock:
            w, n = self._windows.get(ip, (window, 0))
            if w != window:
                w, n = window, 0
            if n >= self.per_minute:
                self._windows[ip] = (w, n)
                return False
            self._windows[ip] = (w, n + 1)
            return True


def create_app(
    config: ServiceConfig | None = None,
    pool: PicturePool | None = None,
    store: ChallengeStore | None = None,
    time_func=None,
) -> FastAPI:
    """Build the FastAPI app; injectable pool/store/clock for tests."""
    import time as _time

    config = config if config is not None else ServiceConfig()
    time_func = time_func if time_func is not None else _time.time
    pool = pool if pool is not None else PicturePool(config.pool_dir)
    if store is None:
        store = ChallengeStore(ttl_seconds=config.ttl_seconds, time_func=time_func)
    source = _ChallengeSource(pool, config)
    limiter = _RateLimiter(config.rate_limit_per_minute, time_func)

    app = FastAPI(title="stardrift", docs_url=None, redoc_url=None)
    app.state.store = store
    app.state.config = config

    if config.buffer_size > 0:
        threading.Thread(target=source.refill, daemon=True).start()

    @app.post("/api/challenge")
    async def create_challenge_endpoint(request: Request):
        if not limiter.allow(request.client.host if request.client else "?"):
            return JSONResponse({"error": "rate limited"}, status_code=429)

        body = b""
        try:
            body = await request.body()
            overrides = json.loads(body) if body else {}
            if not isinstance(overrides, dict):
                raise ValidationError("body", "body must be a JSON object")
        except json.JSONDecodeError:
            return JSONResponse({"error": "body is not valid JSON"}, status_code=400)

        encoding = overrides.pop("encoding", config.encoding)
        if encoding not in ("json", "binary"):
            return JSONResponse({"error": "encoding must be json or binary"}, status_code=400)
        try:
            params = validate_params(config.params) if not overrides else validate_params({**config.params.__dict__, **overrides})
        except ValidationError as exc:
            return JSONResponse({"error": str(exc), "field": exc.field}, status_code=400)

        store.sweep_expired()
        try:
            challenge = source.take(params)
        except PoolError as exc:
            return JSONResponse({"error": str(exc)}, status_code=503)
        store.insert(challenge)
        return JSONResponse(payload_for(challenge.client_view(), encoding).body)

    @app.get("/api/verify")
    async def verify_endpoint(id: str = Query(...), x: int = Query(...), y: int = Query(...)):
        store.sweep_expired()
        try:
            outcome = store.submit(id, Point(float(x), float(y)))
        except MalformedAnswerError:
            return JSONResponse({"error": "coordinates out of range"}, status_code=400)
        except ChallengeGoneError as exc:
            return JSONResponse({"error": str(exc)}, status_code=410)
        return JSONResponse(
            {"result": "pass" if outcome.hit else "fail", "remaining": outcome.solutions_remaining}
        )

    static_dir = Path(config.static_dir) if config.static_dir else None
    if static_dir and static_dir.is_dir():
        index = static_dir / "index.html"

        @app.get("/")
        async def root():
            return FileResponse(index)

        app.mount("/", StaticFiles(directory=str(static_dir)), name="static")
    else:

        @app.get("/")
        async def root_placeholder():
            return JSONResponse(
                {
                    "service": "stardrift",
                    "endpoints": ["POST /api/challenge", "GET /api/verify?id=&x=&y="],
                    "note": "web client bundle not configured; set static_dir",
                }
            )

    return app
