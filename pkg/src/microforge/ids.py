"""Sortable 26-character item ids and the clock used for provenance stamps.

Ids follow the familiar layout of a 48-bit millisecond timestamp plus 80 bits
of randomness, Crockford base32 encoded, so exports sort chronologically
without a database. A seeded generator swaps the wall clock for a counter and
a seeded RNG, which makes whole pipeline runs reproducible in tests.
"""

from __future__ import annotations

import random
import threading
import time
from datetime import datetime, timezone
from typing import Callable

_ALPHABET = "0123456789ABCDEFGHJKMNPQRSTVWXYZ"

ID_LENGTH = 26
_TIME_BITS = 48
_RAND_BITS = 80

Clock = Callable[[], datetime]


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


def _encode(value: int, chars: int) -> str:
    out = []
    for _ in range(chars):
        out.append(_ALPHABET[value & 0x1F])
        value >>= 5
    return "".join(reversed(out))


class IdGenerator:
    """Thread-safe generator of unique, lexicographically sortable ids.

    Without a seed, ids embed the wall clock; within one millisecond the
    random part is incremented so ordering and uniqueness still hold. With a
    seed, the time field is a counter and the random part comes from a seeded
    RNG, so the id sequence is identical on every run.
    """

    def __init__(self, seed: int | None = None):
        self._seeded = seed is not None
        self._rng = random.Random(seed) if seed is not None else random.SystemRandom()
        self._lock = threading.Lock()
        self._last_ms = -1
        self._last_rand = 0
        self._counter = 0

    def new_id(self) -> str:
        with self._lock:
            if self._seeded:
                ms = self._counter
                self._counter += 1
                rand = self._rng.getrandbits(_RAND_BITS)
            else:
                ms = time.time_ns() // 1_000_000
                if ms == self._last_ms:
                    rand = self._last_rand + 1
                else:
                    rand = self._rng.getrandbits(_RAND_BITS)
            self._last_ms = ms
            self._last_rand = rand
            return _encode(ms, 10) + _encode(rand, 16)


class FixedClock:
    """Deterministic clock for tests: starts at `start`, advances `step_s` per call."""

    def __init__(self, start: datetime | None = None, step_s: float = 1.0):
        if start is None:
            start = datetime(2024, 1, 1, tzinfo=timezone.utc)
        if start.tzinfo is None:
            raise ValueError("FixedClock start must be timezone-aware")
        self._next = start.astimezone(timezone.utc)
        self._step = step_s
        self._lock = threading.Lock()

    def __call__(self) -> datetime:
        from datetime import timedelta

        with self._lock:
            now = self._next
            self._next = now + timedelta(seconds=self._step)
            return now
