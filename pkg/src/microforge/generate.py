"""Produce microlearning elements from refined transcript + slides.

Model output must be a single JSON array with fixed field names (the format
contract appended to every generation template). parse_structured tolerates
surrounding prose and code fences but is strict about the records themselves;
anything that violates a body invariant triggers a correction re-prompt, at
most twice, before the call fails.
"""

from __future__ import annotations

import json
from datetime import timezone

from microforge.elements import (
    Body,
    FlashcardBody,
    Kind,
    MiniLessonBody,
    QuizBody,
    QuizOption,
    ScenarioActivity,
    ScenarioBody,
    dedup_key,
)
from microforge.errors import (
    BadInput,
    DecodeError,
    GenerationFailed,
    InvalidBody,
    NoStructuredBlock,
    SchemaError,
)
from microforge.gateway import Gateway, user_request
from microforge.ids import Clock, IdGenerator, utc_now
from microforge.model import (
    PIPELINE_VERSION,
    MicroItem,
    Producer,
    Provenance,
    SlidePage,
    new_item,
)
from microforge.prompts import (
    prompt_hash,
    render,
    repair_prompt,
    slides_block,
    template_for,
)
from microforge.refine import RefinedTranscript

GENERATE_TEMPERATURE = 0.7
REPAIR_ROUNDS = 2

_decoder = json.JSONDecoder()


def _first_array(raw: str):
    """First top-level JSON array in raw text, however it is wrapped."""
    seen_bracket = False
    first_error: json.JSONDecodeError | None = None
    pos = raw.find("[")
    while pos != -1:
        seen_bracket = True
        try:
            value, _ = _decoder.raw_decode(raw, pos)
        except json.JSONDecodeError as exc:
            if first_error is None:
                first_error = exc
        else:
            if isinstance(value, list):
                return value
        pos = raw.find("[", pos + 1)
    if not seen_bracket:
        raise NoStructuredBlock("no bracketed array found in completion")
    assert first_error is not None
    raise DecodeError(first_error.msg, offset=first_error.pos)


def _string(record: dict, name: str, idx: int, violations: list[str], *, optional: bool = False):
    value = record.get(name)
    if value is None:
        if not optional:
            violations.append(f"record {idx}: missing field {name!r}")
        return None
    if not isinstance(value, str):
        violations.append(f"record {idx}: field {name!r} must be a string")
        return None
    return value


def _build_flashcard(record: dict, idx: int, violations: list[str]) -> FlashcardBody | None:
    front = _string(record, "front", idx, violations)
    back = _string(record, "back", idx, violations)
    media = record.get("media", [])
    if not isinstance(media, list) or not all(isinstance(m, str) for m in media):
        violations.append(f"record {idx}: field 'media' must be a list of strings")
        return None
    if front is None or back is None:
        return None
    return FlashcardBody(front=front, back=back, media=tuple(media))


def _build_quiz(record: dict, idx: int, violations: list[str]) -> QuizBody | None:
    stem = _string(record, "stem", idx, violations)
    correct = _string(record, "correct_label", idx, violations)
    explanation = _string(record, "explanation", idx, violations, optional=True)
    hint = _string(record, "hint", idx, violations, optional=True)
    topic = _string(record, "topic", idx, violations, optional=True)
    raw_options = record.get("options")
    if not isinstance(raw_options, list):
        violations.append(f"record {idx}: field 'options' must be a list")
        return None
    options = []
    for opt in raw_options:
        if (
            not isinstance(opt, dict)
            or not isinstance(opt.get("label"), str)
            or not isinstance(opt.get("text"), str)
        ):
            violations.append(f"record {idx}: each option needs string 'label' and 'text'")
            return None
        options.append(QuizOption(label=opt["label"].strip().upper(), text=opt["text"]))
    if stem is None or correct is None:
        return None
    return QuizBody(
        stem=stem,
        options=tuple(options),
        correct_label=correct.strip().upper(),
        explanation=explanation,
        hint=hint,
        topic=topic,
    )


def _build_mini_lesson(record: dict, idx: int, violations: list[str]) -> MiniLessonBody | None:
    title = _string(record, "title", idx, violations)
    objective = _string(record, "objective", idx, violations)
    content = _string(record, "content", idx, violations)
    if title is None or objective is None or content is None:
        return None
    return MiniLessonBody(title=title, objective=objective, content=content)


def _build_scenario(record: dict, idx: int, violations: list[str]) -> ScenarioBody | None:
    objective = _string(record, "objective", idx, violations)
    scenario = _string(record, "scenario", idx, violations)
    task = _string(record, "task", idx, violations)
    activity = record.get("activity")
    if not isinstance(activity, dict):
        violations.append(f"record {idx}: field 'activity' must be an object")
        return None
    intro = _string(activity, "introduction", idx, violations)
    hands_on = _string(activity, "hands_on", idx, violations)
    assessment = _string(activity, "assessment", idx, violations)
    if None in (objective, scenario, task, intro, hands_on, assessment):
        return None
    return ScenarioBody(
        objective=objective,
        scenario=scenario,
        task=task,
        activity=ScenarioActivity(
            introduction=intro, hands_on=hands_on, assessment=assessment
        ),
    )


_BUILDERS = {
    Kind.FLASHCARD: _build_flashcard,
    Kind.QUIZ: _build_quiz,
    Kind.MINI_LESSON: _build_mini_lesson,
    Kind.SCENARIO: _build_scenario,
}


def parse_structured(kind: Kind, raw: str) -> list[Body]:
    """Decode completion text into validated element bodies for `kind`.

    Raises NoStructuredBlock when no array is present, DecodeError (with
    offset) for broken JSON, and SchemaError listing every violated invariant.
    """
    records = _first_array(raw)
    if not records:
        raise SchemaError(["completion contained an empty array"])

    builder = _BUILDERS[kind]
    bodies: list[Body] = []
    violations: list[str] = []
    for idx, record in enumerate(records):
        if not isinstance(record, dict):
            violations.append(f"record {idx}: expected an object")
            continue
        try:
            body = builder(record, idx, violations)
        except InvalidBody as exc:
            violations.append(f"record {idx}: {exc}")
            continue
        if body is not None:
            bodies.append(body)
    if violations:
        raise SchemaError(violations)
    return bodies


def repair(
    kind: Kind,
    raw: str,
    errors: list[str],
    gateway: Gateway,
    *,
    temperature: float = GENERATE_TEMPERATURE,
) -> str:
    """One correction round: re-prompt with the bad output and its violations."""
    prompt = repair_prompt(kind, raw, errors)
    req = user_request(
        gateway.config.model_id,
        prompt,
        temperature=temperature,
        max_tokens=gateway.config.max_tokens,
    )
    return gateway.complete(req)


def _errors_of(exc: Exception) -> list[str]:
    if isinstance(exc, SchemaError):
        return exc.violations
    return [str(exc)]


def _parse_with_repair(kind: Kind, raw: str, gateway: Gateway, temperature: float) -> list[Body]:
    attempt_raw = raw
    last: Exception | None = None
    for round_no in range(REPAIR_ROUNDS + 1):
        try:
            return parse_structured(kind, attempt_raw)
        except (NoStructuredBlock, DecodeError, SchemaError) as exc:
            last = exc
            if round_no == REPAIR_ROUNDS:
                break
            attempt_raw = repair(
                kind, attempt_raw, _errors_of(exc), gateway, temperature=temperature
            )
    raise GenerationFailed(f"{kind.value} output unusable after {REPAIR_ROUNDS} repairs: {last}")


def generate_elements(
    refined: RefinedTranscript,
    slides: list[SlidePage] | tuple[SlidePage, ...],
    kind: Kind,
    count: int,
    gateway: Gateway,
    *,
    temperature: float = GENERATE_TEMPERATURE,
    id_gen: IdGenerator | None = None,
    clock: Clock | None = None,
) -> list[MicroItem]:
    """Generate `kind` items from every refined chunk, deduplicated across chunks.

    One generation call per chunk; items keep (chunk, in-payload) order.
    Duplicates are dropped by normalized front/stem exact match.
    """
    if not refined.chunks:
        raise BadInput("refined transcript has no chunks")
    if count < 1:
        raise BadInput("count must be >= 1")

    template = template_for(kind)
    slides_text = slides_block(slides)
    now = (clock or utc_now)().astimezone(timezone.utc)

    items: list[MicroItem] = []
    seen: set[str] = set()
    for chunk in refined.chunks:
        prompt = render(
            template,
            {"transcript": chunk.refined_text, "slides": slides_text, "count": count},
        )
        req = user_request(
            gateway.config.model_id,
            prompt,
            temperature=temperature,
            max_tokens=gateway.config.max_tokens,
        )
        raw = gateway.complete(req)
        bodies = _parse_with_repair(kind, raw, gateway, temperature)
        provenance = Provenance(
            producer=Producer.LLM,
            pipeline_version=PIPELINE_VERSION,
            timestamp=now,
            model_id=gateway.config.model_id,
            prompt_hash=prompt_hash(prompt),
        )
        for body in bodies:
            key = dedup_key(kind, body)
            if key in seen:
                continue
            seen.add(key)
            items.append(new_item(kind, body, provenance, id_gen=id_gen))
    return items
