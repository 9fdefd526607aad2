"""Run configuration: INI file with environment-based secrets.

Only the API key lives in the environment (MICROFORGE_API_KEY); everything
else is plain-text sections. Missing sections or keys fall back to defaults,
so an empty config file is valid for offline (rules/replay) runs.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from microforge.errors import ConfigError
from microforge.gateway import GatewayConfig

MODES = ("live", "record", "replay", "rules")


@dataclass(frozen=True)
class ChunkingConfig:
    chunk_words: int = 3000
    overlap_words: int = 200


@dataclass(frozen=True)
class CountsConfig:
    flashcards: int = 10
    quizzes: int = 8
    mini_lessons: int = 1
    scenarios: int = 1


@dataclass(frozen=True)
class ReadabilityConfig:
    report_means: bool = True


@dataclass(frozen=True)
class Config:
    provider: GatewayConfig = field(default_factory=GatewayConfig)
    chunking: ChunkingConfig = field(default_factory=ChunkingConfig)
    counts: CountsConfig = field(default_factory=CountsConfig)
    readability: ReadabilityConfig = field(default_factory=ReadabilityConfig)
    mode: str = "rules"
    temperature_refine: float = 0.2
    temperature_generate: float = 0.7
    fixtures_path: str | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        numeric = {
            "provider.max_tokens": self.provider.max_tokens,
            "provider.requests_per_minute": self.provider.requests_per_minute,
            "provider.timeout_s": self.provider.timeout_s,
            "chunking.chunk_words": self.chunking.chunk_words,
            "chunking.overlap_words": self.chunking.overlap_words,
            "counts.flashcards": self.counts.flashcards,
            "counts.quizzes": self.counts.quizzes,
            "counts.mini_lessons": self.counts.mini_lessons,
            "counts.scenarios": self.counts.scenarios,
            "temperature_refine": self.temperature_refine,
            "temperature_generate": self.temperature_generate,
        }
        for name, value in numeric.items():
            if value <= 0:
                raise ConfigError(f"{name} must be positive, got {value}")
        if self.mode in ("record", "replay") and not self.fixtures_path:
            raise ConfigError(f"mode={self.mode} requires fixtures_path")


def _get(parser, section, option, cast, fallback):
    if not parser.has_option(section, option):
        return fallback
    raw = parser.get(section, option)
    try:
        if cast is bool:
            return parser.getboolean(section, option)
        return cast(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {option}: cannot read {raw!r} as {cast.__name__}")


def load_config(path: str | Path) -> Config:
    """Parse an INI config file; unknown keys are ignored, bad values fail."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser()
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}")

    defaults = Config()
    provider = GatewayConfig(
        base_url=_get(parser, "provider", "base_url", str, defaults.provider.base_url),
        model_id=_get(parser, "provider", "model_id", str, defaults.provider.model_id),
        max_tokens=_get(parser, "provider", "max_tokens", int, defaults.provider.max_tokens),
        requests_per_minute=_get(
            parser, "provider", "requests_per_minute", int,
            defaults.provider.requests_per_minute,
        ),
        timeout_s=_get(parser, "provider", "timeout_s", float, defaults.provider.timeout_s),
    )
    return Config(
        provider=provider,
        chunking=ChunkingConfig(
            chunk_words=_get(parser, "chunking", "chunk_words", int, 3000),
            overlap_words=_get(parser, "chunking", "overlap_words", int, 200),
        ),
        counts=CountsConfig(
            flashcards=_get(parser, "counts", "flashcards", int, 10),
            quizzes=_get(parser, "counts", "quizzes", int, 8),
            mini_lessons=_get(parser, "counts", "mini_lessons", int, 1),
            scenarios=_get(parser, "counts", "scenarios", int, 1),
        ),
        readability=ReadabilityConfig(
            report_means=_get(parser, "readability", "report_means", bool, True),
        ),
        mode=_get(parser, "run", "mode", str, "rules"),
        temperature_refine=_get(parser, "provider", "temperature_refine", float, 0.2),
        temperature_generate=_get(parser, "provider", "temperature_generate", float, 0.7),
        fixtures_path=_get(parser, "run", "fixtures_path", str, None),
    )
