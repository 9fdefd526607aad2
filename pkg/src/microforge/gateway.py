"""OpenAI-compatible chat-completions client with record/replay fixtures.

Three modes:
  live    POST {base_url}/chat/completions, return choices[0].message.content
  record  live call whose result is persisted under the request digest
  replay  fixture lookup only; no network is ever touched

The request digest is a SHA-256 over a canonical serialization of the model
id and the message list (sorted keys, verbatim content), so a semantically
identical request always replays the same completion.

Credentials come from an environment variable and are never logged or written
into fixtures.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import random
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable

from microforge.errors import (
    AuthError,
    MockMiss,
    ProviderError,
    RateLimited,
    Timeout,
)

logger = logging.getLogger(__name__)

API_KEY_ENV = "MICROFORGE_API_KEY"
MAX_ATTEMPTS = 5
BACKOFF_BASE_S = 1.0
BACKOFF_JITTER_S = 0.25
DEFAULT_TIMEOUT_S = 120.0

ROLES = ("system", "user")


class GatewayMode(str, Enum):
    LIVE = "live"
    RECORD = "record"
    REPLAY = "replay"


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"role must be one of {ROLES}, got {self.role!r}")


@dataclass(frozen=True)
class ChatRequest:
    model_id: str
    messages: tuple[ChatMessage, ...]
    temperature: float = 0.7
    max_tokens: int = 4096

    def __post_init__(self):
        if not self.messages:
            raise ValueError("messages must be non-empty")
        if self.messages[-1].role != "user":
            raise ValueError("last message must have role=user")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature must be in [0, 2], got {self.temperature}")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be positive")


def user_request(model_id: str, prompt: str, *, temperature: float, max_tokens: int) -> ChatRequest:
    return ChatRequest(
        model_id=model_id,
        messages=(ChatMessage(role="user", content=prompt),),
        temperature=temperature,
        max_tokens=max_tokens,
    )


def request_digest(req: ChatRequest) -> str:
    """Stable hash of model id + messages; sampling parameters excluded."""
    canonical = json.dumps(
        {
            "messages": [{"content": m.content, "role": m.role} for m in req.messages],
            "model": req.model_id,
        },
        sort_keys=True,
        ensure_ascii=False,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class FixtureStore:
    """Digest -> completion text map persisted as one JSON file, stable key order."""

    def __init__(self, path: str | Path | None = None, entries: dict[str, str] | None = None):
        self.path = Path(path) if path is not None else None
        self._entries: dict[str, str] = dict(entries or {})
        self._lock = threading.Lock()

    @classmethod
    def load(cls, path: str | Path) -> "FixtureStore":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(data, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in data.items()
        ):
            raise ValueError(f"fixture file {path} is not a digest -> text map")
        return cls(path=path, entries=data)

    @classmethod
    def load_or_empty(cls, path: str | Path) -> "FixtureStore":
        if Path(path).exists():
            return cls.load(path)
        return cls(path=path)

    def get(self, digest: str) -> str | None:
        with self._lock:
            return self._entries.get(digest)

    def put(self, digest: str, completion: str) -> None:
        with self._lock:
            self._entries[digest] = completion

    def save(self, path: str | Path | None = None) -> None:
        target = Path(path) if path is not None else self.path
        if target is None:
            raise ValueError("fixture store has no path to save to")
        with self._lock:
            payload = json.dumps(self._entries, sort_keys=True, ensure_ascii=False, indent=2)
        target.write_text(payload + "\n", encoding="utf-8")

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)


class TokenBucket:
    """Blocks callers so dispatch never exceeds the per-minute request budget."""

    def __init__(
        self,
        per_minute: int,
        clock: Callable[[], float] = time.monotonic,
        sleeper: Callable[[float], None] = time.sleep,
    ):
        if per_minute < 1:
            raise ValueError("per_minute must be positive")
        self._rate = per_minute / 60.0
        self._capacity = float(per_minute)
        self._tokens = float(per_minute)
        self._clock = clock
        self._sleeper = sleeper
        self._last = clock()
        self._lock = threading.Lock()

    def acquire(self) -> None:
        while True:
            with self._lock:
                now = self._clock()
                self._tokens = min(self._capacity, self._tokens + (now - self._last) * self._rate)
                self._last = now
                if self._tokens >= 1.0:
                    self._tokens -= 1.0
                    return
                wait = (1.0 - self._tokens) / self._rate
            self._sleeper(wait)


class _TransportTimeout(Exception):
    pass


class _TransportFailure(Exception):
    pass


def requests_transport(url: str, headers: dict, payload: dict, timeout_s: float):
    """Default HTTP transport; returns (status_code, decoded JSON body or None)."""
    import requests

    try:
        resp = requests.post(url, headers=headers, json=payload, timeout=timeout_s)
    except requests.Timeout as exc:
        raise _TransportTimeout(str(exc)) from exc
    except requests.RequestException as exc:
        raise _TransportFailure(str(exc)) from exc
    try:
        body = resp.json()
    except ValueError:
        body = None
    return resp.status_code, body


@dataclass(frozen=True)
class GatewayConfig:
    base_url: str = "https://api.openai.com/v1"
    model_id: str = "gpt-4o"
    max_tokens: int = 4096
    requests_per_minute: int = 60
    timeout_s: float = DEFAULT_TIMEOUT_S
    api_key_env: str = API_KEY_ENV


@dataclass
class GatewayStats:
    calls: int = 0
    transport_attempts: int = 0
    replays: int = 0
    failures: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class Gateway:
    """Chat-completion client; safe for concurrent use."""

    def __init__(
        self,
        config: GatewayConfig | None = None,
        mode: GatewayMode = GatewayMode.REPLAY,
        fixtures: FixtureStore | None = None,
        transport: Callable | None = None,
        sleeper: Callable[[float], None] = time.sleep,
        rng: random.Random | None = None,
    ):
        self.config = config or GatewayConfig()
        self.mode = GatewayMode(mode)
        self.fixtures = fixtures
        # Late-bound so tests can swap the module-level transport.
        self._transport = transport if transport is not None else requests_transport
        self._sleeper = sleeper
        self._rng = rng or random.Random()
        self._limiter = TokenBucket(self.config.requests_per_minute, sleeper=sleeper)
        self.stats = GatewayStats()

    def complete(self, req: ChatRequest, mode: GatewayMode | None = None) -> str:
        """Resolve one chat request to its completion text under the given mode."""
        mode = GatewayMode(mode) if mode is not None else self.mode
        digest = request_digest(req)
        with self.stats.lock:
            self.stats.calls += 1

        if mode is GatewayMode.REPLAY:
            if self.fixtures is None:
                raise MockMiss(digest)
            text = self.fixtures.get(digest)
            if text is None:
                with self.stats.lock:
                    self.stats.failures += 1
                raise MockMiss(digest)
            with self.stats.lock:
                self.stats.replays += 1
            return text

        text = self._call_with_retries(req)
        if mode is GatewayMode.RECORD:
            if self.fixtures is None:
                raise ValueError("record mode requires a fixture store")
            self.fixtures.put(digest, text)
            if self.fixtures.path is not None:
                self.fixtures.save()
        return text

    def _credential(self) -> str:
        key = os.environ.get(self.config.api_key_env, "")
        if not key:
            raise AuthError(f"no credential in ${self.config.api_key_env}")
        return key

    def _call_with_retries(self, req: ChatRequest) -> str:
        url = self.config.base_url.rstrip("/") + "/chat/completions"
        headers = {
            "Authorization": f"Bearer {self._credential()}",
            "Content-Type": "application/json",
        }
        payload = {
            "model": req.model_id,
            "messages": [{"role": m.role, "content": m.content} for m in req.messages],
            "temperature": req.temperature,
            "max_tokens": req.max_tokens,
        }

        self._limiter.acquire()
        delay = BACKOFF_BASE_S
        last_error: Exception | None = None
        for attempt in range(1, MAX_ATTEMPTS + 1):
            with self.stats.lock:
                self.stats.transport_attempts += 1
            try:
                status, body = self._transport(url, headers, payload, self.config.timeout_s)
            except _TransportTimeout:
                last_error = Timeout(f"no response within {self.config.timeout_s}s")
                logger.warning("attempt %d/%d timed out", attempt, MAX_ATTEMPTS)
            except _TransportFailure as exc:
                last_error = ProviderError(f"transport failure: {exc}")
                logger.warning("attempt %d/%d failed to connect", attempt, MAX_ATTEMPTS)
            else:
                if status == 200:
                    return self._extract_text(body)
                if status in (401, 403):
                    with self.stats.lock:
                        self.stats.failures += 1
                    raise AuthError(f"endpoint rejected the credential (HTTP {status})")
                if status == 429:
                    last_error = RateLimited("rate limited (HTTP 429)")
                    logger.warning("attempt %d/%d rate limited", attempt, MAX_ATTEMPTS)
                elif status >= 500:
                    last_error = ProviderError(f"server error (HTTP {status})")
                    logger.warning("attempt %d/%d got HTTP %d", attempt, MAX_ATTEMPTS, status)
                else:
                    with self.stats.lock:
                        self.stats.failures += 1
                    raise ProviderError(f"unexpected HTTP {status}")
            if attempt < MAX_ATTEMPTS:
                self._sleeper(delay + self._rng.uniform(0.0, BACKOFF_JITTER_S))
                delay *= 2
        with self.stats.lock:
            self.stats.failures += 1
        assert last_error is not None
        raise last_error

    @staticmethod
    def _extract_text(body) -> str:
        try:
            text = body["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError):
            raise ProviderError("response missing choices[0].message.content")
        if not isinstance(text, str):
            raise ProviderError("completion content is not text")
        return text
