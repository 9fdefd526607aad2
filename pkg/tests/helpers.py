"""Shared fixtures logic: canned provider, pointer-lecture runs, golden package."""

from __future__ import annotations

import os
from pathlib import Path

from microforge.config import Config, CountsConfig
from microforge.gateway import FixtureStore, Gateway, GatewayConfig, GatewayMode
from microforge.ids import FixedClock, IdGenerator
from microforge.model import Status
from microforge.pipeline import run_pipeline
from microforge.review_export import ExportFormat, apply_review, export

DATA = Path(__file__).parent / "data"
TRANSCRIPT_SRT = DATA / "pointer_lecture.srt"
TRANSCRIPT_TXT = DATA / "pointer_lecture.txt"
SLIDES = DATA / "pointer_slides.txt"
GOLDEN_PACKAGE = DATA / "golden_package.json"

GOLDEN_SEED = 7

POINTER_QUIZ_STEM = "If you have `int *p1, *p2;` and `p1 = p2;`, what does this mean?"


def completion_for(prompt: str) -> str:
    """Offline stand-in for the model: pick a canned completion by template wording."""
    if prompt.startswith("Refine the above lecture transcript"):
        return (DATA / "completions" / "refine.txt").read_text(encoding="utf-8")
    if "create a set of digital flashcards" in prompt:
        return (DATA / "completions" / "flashcards.json").read_text(encoding="utf-8")
    if "create a set of quizzes" in prompt:
        return (DATA / "completions" / "quiz.json").read_text(encoding="utf-8")
    if "write a mini lesson" in prompt:
        return (DATA / "completions" / "mini_lesson.json").read_text(encoding="utf-8")
    if "design scenario-based activities" in prompt:
        return (DATA / "completions" / "scenario.json").read_text(encoding="utf-8")
    raise AssertionError(f"no canned completion for prompt starting {prompt[:60]!r}")


class CannedTransport:
    """HTTP transport stand-in that answers every request from canned files."""

    def __init__(self):
        self.calls = 0

    def __call__(self, url, headers, payload, timeout_s):
        self.calls += 1
        text = completion_for(payload["messages"][-1]["content"])
        return 200, {"choices": [{"message": {"content": text}}]}


class EchoRefineTransport(CannedTransport):
    """Like CannedTransport, but refinement echoes the chunk it was given.

    Keeps every chunk's refined text distinct, so each downstream generation
    request carries its own digest.
    """

    def __call__(self, url, headers, payload, timeout_s):
        content = payload["messages"][-1]["content"]
        if content.startswith("Refine the above lecture transcript"):
            self.calls += 1
            chunk = content.split("Transcript:\n", 1)[1].rsplit("\n\nRespond", 1)[0]
            refined = "Refined notes. " + " ".join(chunk.split()[:60])
            return 200, {"choices": [{"message": {"content": refined}}]}
        return super().__call__(url, headers, payload, timeout_s)


def fast_gateway_config(**overrides) -> GatewayConfig:
    defaults = dict(model_id="gpt-4o", requests_per_minute=100000)
    defaults.update(overrides)
    return GatewayConfig(**defaults)


def offline_config(mode: str, fixtures_path: Path | None = None, **overrides) -> Config:
    return Config(
        provider=fast_gateway_config(),
        mode=mode,
        fixtures_path=str(fixtures_path) if fixtures_path else None,
        **overrides,
    )


TEST_CREDENTIAL = "test-credential-not-a-real-key"


def record_gateway(fixtures_path: Path, transport=None) -> Gateway:
    # Record mode checks the credential like a live call would.
    os.environ.setdefault("MICROFORGE_API_KEY", TEST_CREDENTIAL)
    return Gateway(
        config=fast_gateway_config(),
        mode=GatewayMode.RECORD,
        fixtures=FixtureStore(path=fixtures_path),
        transport=transport or CannedTransport(),
        sleeper=lambda s: None,
    )


def record_pointer_fixtures(tmp: Path, transcript=TRANSCRIPT_SRT) -> Path:
    """Run the pipeline in record mode against the canned provider; return fixture path."""
    fixtures_path = tmp / "fixtures.json"
    out = tmp / "record_out"
    run_pipeline(
        transcript,
        SLIDES,
        out,
        offline_config("record", fixtures_path),
        gateway=record_gateway(fixtures_path),
    )
    return fixtures_path


def replay_gateway(fixtures_path: Path) -> Gateway:
    return Gateway(
        config=fast_gateway_config(),
        mode=GatewayMode.REPLAY,
        fixtures=FixtureStore.load(fixtures_path),
    )


def build_golden_bytes(tmp: Path) -> bytes:
    """Deterministic golden package: replay run, approve everything, export."""
    fixtures_path = record_pointer_fixtures(tmp)
    package, _report = run_pipeline(
        TRANSCRIPT_SRT,
        SLIDES,
        tmp / "replay_out",
        offline_config("replay", fixtures_path),
        seed=GOLDEN_SEED,
        clock=FixedClock(),
        gateway=replay_gateway(fixtures_path),
    )
    clock = FixedClock()
    for item in package.items:
        package = apply_review(package, item.item_id, "approve", actor="instructor", clock=clock)
    assert all(i.status is Status.APPROVED for i in package.items)
    return export(package, ExportFormat.PACKAGE_FILE)


def synthetic_lecture(tmp: Path, words: int = 30000, pages: int = 100) -> tuple[Path, Path]:
    """A transcript of `words` distinct words and a `pages`-page deck, written to tmp.

    Words are distinct so every chunk renders a distinct prompt (and therefore
    a distinct fixture digest).
    """
    tokens = [f"topic{i}." if i % 12 == 11 else f"topic{i}" for i in range(words)]
    transcript = tmp / "synthetic_lecture.txt"
    transcript.write_text(" ".join(tokens) + "\n", encoding="utf-8")

    deck = "\n".join(
        f"--- page {n} ---\nSlide {n}: arrays, caches, and loop bounds."
        for n in range(1, pages + 1)
    )
    slides = tmp / "synthetic_slides.txt"
    slides.write_text(deck + "\n", encoding="utf-8")
    return transcript, slides
