"""Built-in prompt templates and slot rendering.

Templates carry named slots ({transcript}, {slides}, {count}); rendering
replaces slots and touches nothing else, so the instruction wording stays
byte-stable and its hash can serve as provenance. Each generation template
ends with a format contract demanding a single JSON array with fixed field
names — that contract is what parse_structured enforces and what the repair
prompt restates.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from enum import Enum

from microforge.elements import Kind
from microforge.errors import MissingSlot
from microforge.model import SlidePage


class TemplateId(str, Enum):
    REFINE = "refine"
    QUIZ = "quiz"
    FLASHCARDS = "flashcards"
    MINI_LESSON = "mini_lesson"
    SCENARIO = "scenario"


_SLOT = re.compile(r"\{(transcript|slides|count)\}")


@dataclass(frozen=True)
class PromptTemplate:
    template_id: TemplateId
    text: str

    def required_slots(self) -> set[str]:
        return set(_SLOT.findall(self.text))


def render(template: PromptTemplate, slots: dict) -> str:
    """Fill every slot the template references; the rest of the text is untouched."""
    for name in sorted(template.required_slots()):
        value = slots.get(name)
        if value is None or (isinstance(value, str) and not value.strip()):
            raise MissingSlot(name)
    rendered = _SLOT.sub(lambda m: str(slots[m.group(1)]), template.text)
    assert _SLOT.search(rendered) is None
    return rendered


def prompt_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def slides_block(slides: list[SlidePage] | tuple[SlidePage, ...]) -> str:
    """Slides as `[Slide N] ...` blocks for interpolation into prompts."""
    if not slides:
        return "(no slides provided)"
    return "\n\n".join(f"[Slide {p.page_no}] {p.text}" for p in slides)


FORMAT_CONTRACTS: dict[Kind, str] = {
    Kind.FLASHCARD: (
        'Respond with a single JSON array and nothing else. Each element must be an '
        'object with these fields: "front" (the question or prompt, at most 300 '
        'characters), "back" (the answer), and optionally "media" (a list of resource '
        'URLs).'
    ),
    Kind.QUIZ: (
        'Respond with a single JSON array and nothing else. Each element must be an '
        'object with these fields: "stem" (the question text), "options" (a list of '
        'objects, each having "label", a single uppercase letter assigned '
        'consecutively from A, and "text", the option text; use 3 to 6 options), '
        '"correct_label" (the label of the one correct option), and optionally '
        '"explanation", "hint", and "topic" (strings).'
    ),
    Kind.MINI_LESSON: (
        'Respond with a single JSON array and nothing else. Each element must be an '
        'object with these fields: "title" (the lesson title), "objective" (one '
        'sentence stating what the student will learn), and "content" (the full '
        'lesson text as plain paragraphs separated by blank lines).'
    ),
    Kind.SCENARIO: (
        'Respond with a single JSON array and nothing else. Each element must be an '
        'object with these fields: "objective" (the lecture objective), "scenario" '
        '(the realistic situation), "task" (what the student must do), and "activity" '
        '(an object with "introduction", "hands_on", and "assessment" strings '
        'describing the structured activity).'
    ),
}

REFINE_TEMPLATE = PromptTemplate(
    TemplateId.REFINE,
    "Refine the above lecture transcript to ensure it is clear, accurate, and "
    "professional. Remove any transcription errors, filler words (e.g., 'um,' 'uh,' "
    "'you know'), repetitive phrases, and irrelevant noise. Ensure the terminology "
    "aligns with the subject matter and maintain the speaker's intended meaning. If "
    "any context is unclear, make logical edits to improve clarity while keeping the "
    "academic tone intact.\n"
    "\n"
    "Transcript:\n"
    "{transcript}\n"
    "\n"
    "Respond with the refined transcript only, without commentary.",
)

QUIZ_TEMPLATE = PromptTemplate(
    TemplateId.QUIZ,
    "Using the provided refined transcript and slides, create a set of quizzes to "
    "evaluate students' understanding of the material. Ensure the questions cover "
    "key concepts, technical terms, and examples discussed in the lecture. Align the "
    "difficulty level with the course content and learning objectives and include "
    "clear and concise answer options or solutions for each question. For "
    "multiple-choice questions, ensure plausible distractors are included alongside "
    "the correct answer. Emphasize critical thinking and application of concepts "
    "where appropriate.\n"
    "\n"
    "Refined transcript:\n"
    "{transcript}\n"
    "\n"
    "Slides:\n"
    "{slides}\n"
    "\n"
    "Create exactly {count} multiple-choice questions. "
    + FORMAT_CONTRACTS[Kind.QUIZ],
)

FLASHCARDS_TEMPLATE = PromptTemplate(
    TemplateId.FLASHCARDS,
    "Using the provided refined transcript and slides, create a set of digital "
    "flashcards to help students memorize and recall the material. Each flashcard "
    "must have a short question or prompt on one side and the answer on the other. "
    "Cover the key terms, definitions, and examples discussed in the lecture, and "
    "keep each card focused on a single fact or concept.\n"
    "\n"
    "Refined transcript:\n"
    "{transcript}\n"
    "\n"
    "Slides:\n"
    "{slides}\n"
    "\n"
    "Create exactly {count} flashcards. " + FORMAT_CONTRACTS[Kind.FLASHCARD],
)

MINI_LESSON_TEMPLATE = PromptTemplate(
    TemplateId.MINI_LESSON,
    "Using the provided refined transcript and slides, write a mini lesson: a brief, "
    "focused instructional session that teaches one specific concept or skill from "
    "the lecture. The lesson should introduce the topic, explain it step by step "
    "with the examples used in the lecture, and close with a short recap. Aim for a "
    "reading time of 5 to 15 minutes.\n"
    "\n"
    "Refined transcript:\n"
    "{transcript}\n"
    "\n"
    "Slides:\n"
    "{slides}\n"
    "\n"
    "Create exactly {count} mini lessons. " + FORMAT_CONTRACTS[Kind.MINI_LESSON],
)

SCENARIO_TEMPLATE = PromptTemplate(
    TemplateId.SCENARIO,
    "List the lecture objectives in the given refined transcript and slides, design "
    "scenario-based activities for each identified objective that encourage "
    "students to apply the concepts and skills covered in the material. Create "
    "realistic, context-driven scenarios relevant to the subject matter, requiring "
    "students to analyze, problem-solve, or make decisions based on the knowledge "
    "gained from the lecture. Ensure the scenarios are engaging, clearly structured, "
    "and include detailed instructions.\n"
    "\n"
    "Refined transcript:\n"
    "{transcript}\n"
    "\n"
    "Slides:\n"
    "{slides}\n"
    "\n"
    "Identify up to {count} objectives. " + FORMAT_CONTRACTS[Kind.SCENARIO],
)

TEMPLATES: dict[TemplateId, PromptTemplate] = {
    t.template_id: t
    for t in (
        REFINE_TEMPLATE,
        QUIZ_TEMPLATE,
        FLASHCARDS_TEMPLATE,
        MINI_LESSON_TEMPLATE,
        SCENARIO_TEMPLATE,
    )
}

_KIND_TEMPLATES: dict[Kind, PromptTemplate] = {
    Kind.FLASHCARD: FLASHCARDS_TEMPLATE,
    Kind.QUIZ: QUIZ_TEMPLATE,
    Kind.MINI_LESSON: MINI_LESSON_TEMPLATE,
    Kind.SCENARIO: SCENARIO_TEMPLATE,
}


def template_for(kind: Kind) -> PromptTemplate:
    return _KIND_TEMPLATES[kind]


def repair_prompt(kind: Kind, previous: str, violations: list[str]) -> str:
    """Correction instruction sent after a malformed completion."""
    listed = "\n".join(f"- {v}" for v in violations)
    return (
        "Your previous response could not be used because it violated the required "
        "format:\n"
        f"{listed}\n"
        "\n"
        "Previous response:\n"
        f"{previous}\n"
        "\n"
        f"Respond again, correcting every listed problem. {FORMAT_CONTRACTS[kind]}"
    )
