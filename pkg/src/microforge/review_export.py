"""Manual review actions and package serialization.

The package file is the single source of truth: a canonical JSON document
(sorted keys, two-space indent, newline-terminated, UTF-8) that is
byte-stable for identical content. Markdown and flashcard TSV are derived,
never re-imported.

Default exports are gated: every item must be approved, otherwise
UnreviewedContent lists the offenders. allow_unreviewed bypasses the gate for
demos and for persisting work-in-progress packages, and stamps the manifest
with `unreviewed: true` whenever not everything is approved. Rejected items
never appear in markdown/TSV output even then.
"""

from __future__ import annotations

import json
from dataclasses import replace
from datetime import datetime, timezone
from enum import Enum

from microforge.elements import (
    Body,
    FlashcardBody,
    Kind,
    MiniLessonBody,
    QuizBody,
    QuizOption,
    ScenarioActivity,
    ScenarioBody,
    validate_body,
)
from microforge.errors import (
    DecodeError,
    InvalidBody,
    SchemaVersionMismatch,
    UnknownItem,
    UnreviewedContent,
)
from microforge.ids import Clock, utc_now
from microforge.model import (
    SCHEMA_VERSION,
    MicroItem,
    Package,
    Provenance,
    Producer,
    ReviewLogEntry,
    SourceRef,
    Status,
    human_provenance,
    transition,
)
from microforge.readability import Band, ReadabilityReport, TextStats, score_item


class ReviewAction(str, Enum):
    APPROVE = "approve"
    REJECT = "reject"
    EDIT = "edit"


class ExportFormat(str, Enum):
    PACKAGE_FILE = "package_file"
    MARKDOWN = "markdown"
    FLASHCARDS_TSV = "flashcards_tsv"


def apply_review(
    package: Package,
    item_id: str,
    action: ReviewAction | str,
    actor: str,
    edited_body: Body | None = None,
    *,
    clock: Clock | None = None,
) -> Package:
    """Apply one review action and append its audit log entry.

    Edits replace the body, mark provenance as human, and re-run readability
    scoring so the report describes the text that actually ships.
    """
    action = ReviewAction(action)
    item = package.get_item(item_id)
    if item is None:
        raise UnknownItem(f"no item {item_id} in package")

    now = (clock or utc_now)().astimezone(timezone.utc)
    diff_summary = None
    if action is ReviewAction.APPROVE:
        updated = transition(item, Status.APPROVED)
    elif action is ReviewAction.REJECT:
        updated = transition(item, Status.REJECTED)
    else:
        if edited_body is None:
            raise InvalidBody("edit requires a replacement body")
        validate_body(item.kind, edited_body)
        updated = transition(item, Status.EDITED)
        updated = replace(
            updated,
            body=edited_body,
            provenance=human_provenance(lambda: now),
        )
        updated = score_item(updated)
        diff_summary = f"{item.kind.value} body replaced"

    entry = ReviewLogEntry(
        item_id=item_id,
        action=action.value,
        actor=actor,
        timestamp=now,
        diff_summary=diff_summary,
    )
    items = tuple(updated if i.item_id == item_id else i for i in package.items)
    return replace(package, items=items, review_log=package.review_log + (entry,))


# --- canonical serialization ------------------------------------------------


def _dt_to_iso(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).isoformat(timespec="microseconds").replace(
        "+00:00", "Z"
    )


def _iso_to_dt(value: str, context: str) -> datetime:
    try:
        return datetime.fromisoformat(value.replace("Z", "+00:00"))
    except (ValueError, AttributeError):
        raise DecodeError(f"{context}: bad timestamp {value!r}")


def _body_to_dict(body: Body) -> dict:
    if isinstance(body, FlashcardBody):
        return {"front": body.front, "back": body.back, "media": list(body.media)}
    if isinstance(body, QuizBody):
        out = {
            "stem": body.stem,
            "options": [{"label": o.label, "text": o.text} for o in body.options],
            "correct_label": body.correct_label,
        }
        for name in ("explanation", "hint", "topic"):
            value = getattr(body, name)
            if value is not None:
                out[name] = value
        return out
    if isinstance(body, MiniLessonBody):
        return {
            "title": body.title,
            "objective": body.objective,
            "content": body.content,
            "estimated_minutes": body.estimated_minutes,
        }
    return {
        "objective": body.objective,
        "scenario": body.scenario,
        "task": body.task,
        "activity": {
            "introduction": body.activity.introduction,
            "hands_on": body.activity.hands_on,
            "assessment": body.activity.assessment,
        },
    }


def body_from_dict(kind: Kind, data: dict) -> Body:
    """Rebuild a body record from its serialized form (also used by `review edit`)."""
    if not isinstance(data, dict):
        raise DecodeError("body must be an object")
    try:
        if kind is Kind.FLASHCARD:
            return FlashcardBody(
                front=data["front"],
                back=data["back"],
                media=tuple(data.get("media", ())),
            )
        if kind is Kind.QUIZ:
            return QuizBody(
                stem=data["stem"],
                options=tuple(
                    QuizOption(label=o["label"], text=o["text"]) for o in data["options"]
                ),
                correct_label=data["correct_label"],
                explanation=data.get("explanation"),
                hint=data.get("hint"),
                topic=data.get("topic"),
            )
        if kind is Kind.MINI_LESSON:
            # estimated_minutes is derived from content, not read back.
            return MiniLessonBody(
                title=data["title"],
                objective=data["objective"],
                content=data["content"],
            )
        return ScenarioBody(
            objective=data["objective"],
            scenario=data["scenario"],
            task=data["task"],
            activity=ScenarioActivity(
                introduction=data["activity"]["introduction"],
                hands_on=data["activity"]["hands_on"],
                assessment=data["activity"]["assessment"],
            ),
        )
    except (KeyError, TypeError) as exc:
        raise DecodeError(f"{kind.value} body is missing or mistypes a field: {exc}")


def _item_to_dict(item: MicroItem) -> dict:
    prov = {
        "producer": item.provenance.producer.value,
        "pipeline_version": item.provenance.pipeline_version,
        "timestamp": _dt_to_iso(item.provenance.timestamp),
    }
    if item.provenance.model_id is not None:
        prov["model_id"] = item.provenance.model_id
    if item.provenance.prompt_hash is not None:
        prov["prompt_hash"] = item.provenance.prompt_hash
    out = {
        "item_id": item.item_id,
        "kind": item.kind.value,
        "status": item.status.value,
        "body": _body_to_dict(item.body),
        "provenance": prov,
    }
    if item.readability is not None:
        r = item.readability
        out["readability"] = {
            "fre": r.fre,
            "band": r.band.value,
            "stats": {
                "words": r.stats.words,
                "sentences": r.stats.sentences,
                "syllables": r.stats.syllables,
                "difficult_words": r.stats.difficult_words,
            },
        }
    return out


def _item_from_dict(data: dict) -> MicroItem:
    try:
        kind = Kind(data["kind"])
        status = Status(data["status"])
        prov_raw = data["provenance"]
        provenance = Provenance(
            producer=Producer(prov_raw["producer"]),
            pipeline_version=prov_raw["pipeline_version"],
            timestamp=_iso_to_dt(prov_raw["timestamp"], "provenance"),
            model_id=prov_raw.get("model_id"),
            prompt_hash=prov_raw.get("prompt_hash"),
        )
        readability = None
        if "readability" in data:
            r = data["readability"]
            readability = ReadabilityReport(
                fre=float(r["fre"]),
                band=Band(r["band"]),
                stats=TextStats(
                    words=r["stats"]["words"],
                    sentences=r["stats"]["sentences"],
                    syllables=r["stats"]["syllables"],
                    difficult_words=r["stats"]["difficult_words"],
                ),
            )
        return MicroItem(
            item_id=data["item_id"],
            kind=kind,
            body=body_from_dict(kind, data["body"]),
            provenance=provenance,
            status=status,
            readability=readability,
        )
    except (KeyError, TypeError, ValueError, InvalidBody) as exc:
        if isinstance(exc, DecodeError):
            raise
        raise DecodeError(f"bad item record: {exc}")


def package_to_dict(package: Package) -> dict:
    return {
        "schema_version": package.schema_version,
        "source": {
            "lecture_id": package.source.lecture_id,
            "title": package.source.title,
        },
        "items": [_item_to_dict(i) for i in package.items],
        "review_log": [
            {
                "item_id": e.item_id,
                "action": e.action,
                "actor": e.actor,
                "timestamp": _dt_to_iso(e.timestamp),
                **({"diff_summary": e.diff_summary} if e.diff_summary is not None else {}),
            }
            for e in package.review_log
        ],
        "manifest": dict(package.manifest),
    }


def _canonical_bytes(doc: dict) -> bytes:
    return (
        json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=2) + "\n"
    ).encode("utf-8")


def export(
    package: Package,
    format: ExportFormat | str = ExportFormat.PACKAGE_FILE,
    allow_unreviewed: bool = False,
) -> bytes:
    """Serialize a package into the requested format, enforcing the review gate."""
    format = ExportFormat(format)
    offending = [i.item_id for i in package.items if i.status is not Status.APPROVED]
    if offending and not allow_unreviewed:
        raise UnreviewedContent(offending)

    if format is ExportFormat.PACKAGE_FILE:
        doc = package_to_dict(package)
        manifest = dict(doc["manifest"])
        if offending:
            manifest["unreviewed"] = True
        else:
            manifest.pop("unreviewed", None)
        doc["manifest"] = manifest
        return _canonical_bytes(doc)

    include = {Status.APPROVED} if not allow_unreviewed else {
        Status.APPROVED,
        Status.GENERATED,
        Status.EDITED,
    }
    items = [i for i in package.items if i.status in include]
    if format is ExportFormat.FLASHCARDS_TSV:
        return _flashcards_tsv(items).encode("utf-8")
    return _markdown(package, items).encode("utf-8")


def _escape_tsv(field: str) -> str:
    return field.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def _flashcards_tsv(items: list[MicroItem]) -> str:
    lines = [
        f"{_escape_tsv(i.body.front)}\t{_escape_tsv(i.body.back)}"
        for i in items
        if i.kind is Kind.FLASHCARD
    ]
    return "\n".join(lines) + ("\n" if lines else "")


_KIND_HEADINGS = {
    Kind.FLASHCARD: "Flashcards",
    Kind.QUIZ: "Quizzes",
    Kind.MINI_LESSON: "Mini lessons",
    Kind.SCENARIO: "Scenario-based activities",
}


def _markdown(package: Package, items: list[MicroItem]) -> str:
    out = [f"# {package.source.title}", ""]
    for kind in Kind:
        group = [i for i in items if i.kind is kind]
        if not group:
            continue
        out += [f"## {_KIND_HEADINGS[kind]}", ""]
        for n, item in enumerate(group, start=1):
            body = item.body
            if kind is Kind.FLASHCARD:
                out += [f"{n}. **{body.front}**", f"   {body.back}", ""]
            elif kind is Kind.QUIZ:
                out += [f"### Q{n}. {body.stem}", ""]
                out += [f"- {o.label}) {o.text}" for o in body.options]
                out += ["", f"**Answer:** {body.correct_label}"]
                if body.explanation:
                    out.append(f"**Explanation:** {body.explanation}")
                out.append("")
            elif kind is Kind.MINI_LESSON:
                out += [
                    f"### {body.title}",
                    "",
                    f"*Objective:* {body.objective}",
                    f"*Estimated reading time:* {body.estimated_minutes:.1f} minutes",
                    "",
                    body.content,
                    "",
                ]
            else:
                out += [
                    f"### {body.objective}",
                    "",
                    f"**Scenario:** {body.scenario}",
                    f"**Task:** {body.task}",
                    "",
                    f"- Introduction: {body.activity.introduction}",
                    f"- Hands-on activity: {body.activity.hands_on}",
                    f"- Assessment: {body.activity.assessment}",
                    "",
                ]
    return "\n".join(out).rstrip("\n") + "\n"


def import_package(data: bytes) -> Package:
    """Read a package file back with full fidelity."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DecodeError(f"package file is not UTF-8: {exc}")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DecodeError(exc.msg, offset=exc.pos)
    if not isinstance(doc, dict):
        raise DecodeError("package root must be an object")

    version = doc.get("schema_version")
    if not isinstance(version, str):
        raise DecodeError("schema_version missing or not a string")
    if version != SCHEMA_VERSION:
        raise SchemaVersionMismatch(
            f"schema_version {version!r} not supported (expected {SCHEMA_VERSION!r})"
        )

    try:
        source = SourceRef(
            lecture_id=doc["source"]["lecture_id"], title=doc["source"]["title"]
        )
        items = tuple(_item_from_dict(raw) for raw in doc["items"])
        review_log = tuple(
            ReviewLogEntry(
                item_id=raw["item_id"],
                action=raw["action"],
                actor=raw["actor"],
                timestamp=_iso_to_dt(raw["timestamp"], "review_log"),
                diff_summary=raw.get("diff_summary"),
            )
            for raw in doc["review_log"]
        )
        manifest = doc["manifest"]
        if not isinstance(manifest, dict):
            raise DecodeError("manifest must be an object")
    except DecodeError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise DecodeError(f"bad package structure: {exc}")

    return Package(
        source=source,
        items=items,
        manifest=manifest,
        review_log=review_log,
        schema_version=version,
    )


def save_package(package: Package, path) -> None:
    """Persist a package as the single source of truth (gate bypassed)."""
    from pathlib import Path

    Path(path).write_bytes(export(package, ExportFormat.PACKAGE_FILE, allow_unreviewed=True))


def load_package(path) -> Package:
    from pathlib import Path

    return import_package(Path(path).read_bytes())
