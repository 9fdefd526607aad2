"""End-to-end run: ingest -> chunk -> refine -> generate -> score -> package.

In live/record/replay modes every element kind is generated per chunk through
the gateway. In rules mode the pipeline stops after deterministic refinement
and writes a package with no items — the offline smoke path; it performs zero
gateway calls.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

from microforge.config import Config
from microforge.elements import Kind
from microforge.errors import ConfigError
from microforge.gateway import FixtureStore, Gateway, GatewayMode
from microforge.generate import generate_elements
from microforge.ids import Clock, IdGenerator, utc_now
from microforge.ingest import parse_slides, parse_transcript
from microforge.model import (
    PIPELINE_VERSION,
    LectureSource,
    MicroItem,
    Package,
    SourceRef,
)
from microforge.readability import kind_mean_rows, score_item
from microforge.refine import RefinedTranscript, RefineMode, refine_transcript
from microforge.review_export import save_package

logger = logging.getLogger(__name__)

PACKAGE_FILENAME = "package.json"
REPORT_FILENAME = "run_report.json"
REFINED_FILENAME = "refined_transcript.txt"


@dataclass
class RunReport:
    lecture_id: str
    mode: str
    chunks: int = 0
    gateway_calls: int = 0
    gateway_failures: int = 0
    items_by_kind: dict = field(default_factory=dict)
    mean_fre: list = field(default_factory=list)
    stage_seconds: dict = field(default_factory=dict)
    package_path: str = ""

    def to_dict(self) -> dict:
        return {
            "lecture_id": self.lecture_id,
            "mode": self.mode,
            "chunks": self.chunks,
            "gateway_calls": self.gateway_calls,
            "gateway_failures": self.gateway_failures,
            "items_by_kind": self.items_by_kind,
            "mean_fre": [
                {"kind": k, "mean_fre": fre, "band": band.value, "items": n}
                for k, fre, band, n in self.mean_fre
            ],
            "stage_seconds": self.stage_seconds,
            "package_path": self.package_path,
        }


def _read_bytes(path: str | Path, what: str) -> bytes:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"{what} file not found: {p}")
    return p.read_bytes()


def load_lecture(
    transcript_path: str | Path,
    slides_path: str | Path | None,
    *,
    format_hint: str = "auto",
    clock: Clock | None = None,
) -> LectureSource:
    transcript = parse_transcript(_read_bytes(transcript_path, "transcript"), format_hint)
    slides = parse_slides(_read_bytes(slides_path, "slides")) if slides_path else []
    stem = Path(transcript_path).stem
    return LectureSource(
        lecture_id=stem,
        title=stem.replace("_", " ").replace("-", " ").strip() or stem,
        transcript=tuple(transcript),
        slides=tuple(slides),
        created_at=(clock or utc_now)(),
    )


def build_gateway(config: Config) -> Gateway | None:
    """Gateway wired for the configured mode; None in rules mode."""
    if config.mode == "rules":
        return None
    if config.mode == "replay":
        store = FixtureStore.load(config.fixtures_path)
    elif config.mode == "record":
        store = FixtureStore.load_or_empty(config.fixtures_path)
    else:
        store = None
    return Gateway(config=config.provider, mode=GatewayMode(config.mode), fixtures=store)


def run_pipeline(
    transcript_path: str | Path,
    slides_path: str | Path | None,
    out_dir: str | Path,
    config: Config,
    *,
    seed: int | None = None,
    clock: Clock | None = None,
    gateway: Gateway | None = None,
) -> tuple[Package, RunReport]:
    """Execute the full pipeline and write package + run report into out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    clock = clock or utc_now
    id_gen = IdGenerator(seed)
    report = RunReport(lecture_id="", mode=config.mode)

    t0 = time.monotonic()
    lecture = load_lecture(transcript_path, slides_path, clock=clock)
    report.lecture_id = lecture.lecture_id
    report.stage_seconds["ingest"] = time.monotonic() - t0

    if gateway is None:
        gateway = build_gateway(config)

    t0 = time.monotonic()
    refined = refine_transcript(
        lecture,
        mode=RefineMode.RULES if config.mode == "rules" else RefineMode.LLM,
        chunk_words=config.chunking.chunk_words,
        overlap_words=config.chunking.overlap_words,
        gateway=gateway,
        temperature=config.temperature_refine,
        clock=clock,
    )
    report.chunks = len(refined.chunks)
    report.stage_seconds["refine"] = time.monotonic() - t0
    _write_refined(out / REFINED_FILENAME, refined)

    items: list[MicroItem] = []
    t0 = time.monotonic()
    if gateway is not None:
        requested = {
            Kind.FLASHCARD: config.counts.flashcards,
            Kind.QUIZ: config.counts.quizzes,
            Kind.MINI_LESSON: config.counts.mini_lessons,
            Kind.SCENARIO: config.counts.scenarios,
        }
        for kind in Kind:
            items.extend(
                generate_elements(
                    refined,
                    lecture.slides,
                    kind,
                    requested[kind],
                    gateway,
                    temperature=config.temperature_generate,
                    id_gen=id_gen,
                    clock=clock,
                )
            )
    else:
        logger.info("rules mode: generation skipped, writing refined transcript only")
    report.stage_seconds["generate"] = time.monotonic() - t0

    t0 = time.monotonic()
    items = [score_item(i) for i in items]
    report.stage_seconds["score"] = time.monotonic() - t0

    package = Package(
        source=SourceRef.of(lecture),
        items=tuple(items),
        manifest={
            "pipeline_version": PIPELINE_VERSION,
            "mode": config.mode,
            "model_id": config.provider.model_id if gateway is not None else None,
        },
    )

    t0 = time.monotonic()
    package_path = out / PACKAGE_FILENAME
    save_package(package, package_path)
    report.package_path = str(package_path)
    report.items_by_kind = {
        kind.value: sum(1 for i in items if i.kind is kind) for kind in Kind
    }
    report.mean_fre = kind_mean_rows(items)
    if gateway is not None:
        report.gateway_calls = gateway.stats.calls
        report.gateway_failures = gateway.stats.failures
    report.stage_seconds["package"] = time.monotonic() - t0
    (out / REPORT_FILENAME).write_text(
        json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return package, report


def _write_refined(path: Path, refined: RefinedTranscript) -> None:
    blocks = [
        f"--- chunk {c.chunk_no} ---\n{c.refined_text}" for c in refined.chunks
    ]
    path.write_text("\n\n".join(blocks) + "\n", encoding="utf-8")
