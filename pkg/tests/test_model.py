"""Domain model: bodies, items, status graph, ids."""

import random
from datetime import datetime, timezone

import pytest
from hypothesis import given, strategies as st

from microforge.elements import (
    FlashcardBody,
    Kind,
    MiniLessonBody,
    QuizBody,
    QuizOption,
)
from microforge.errors import IllegalTransition, InvalidBody
from microforge.ids import ID_LENGTH, FixedClock, IdGenerator
from microforge.model import (
    ALLOWED_TRANSITIONS,
    LectureSource,
    Package,
    Producer,
    Provenance,
    SourceRef,
    Status,
    TranscriptSegment,
    human_provenance,
    new_item,
    transition,
)


def make_provenance():
    return Provenance(
        producer=Producer.LLM,
        pipeline_version="0.1.0",
        timestamp=datetime(2024, 1, 1, tzinfo=timezone.utc),
        model_id="gpt-4o",
        prompt_hash="ab" * 32,
    )


def make_item(kind=Kind.FLASHCARD, body=None, **kwargs):
    if body is None:
        body = FlashcardBody(front="What is a pointer?", back="A variable holding an address.")
    return new_item(kind, body, make_provenance(), **kwargs)


class TestNewItem:
    def test_flashcard_from_refined_text_is_generated(self):
        body = FlashcardBody(
            front="What does *p denote?",
            back="the value at the address p points to",
        )
        item = new_item(Kind.FLASHCARD, body, make_provenance())
        assert item.status is Status.GENERATED
        assert len(item.item_id) == ID_LENGTH

    def test_quiz_with_zero_options_is_invalid(self):
        with pytest.raises(InvalidBody):
            QuizBody(stem="pick one", options=(), correct_label="A")

    def test_kind_body_mismatch_is_invalid(self):
        body = FlashcardBody(front="f", back="b")
        with pytest.raises(InvalidBody):
            new_item(Kind.QUIZ, body, make_provenance())

    def test_ids_unique_across_10000_items(self):
        body = MiniLessonBody(title="t", objective="o", content="one two three")
        prov = make_provenance()
        items = [new_item(Kind.MINI_LESSON, body, prov) for _ in range(10_000)]
        assert all(i.status is Status.GENERATED for i in items)
        assert len({i.item_id for i in items}) == 10_000

    def test_seeded_ids_reproduce_and_sort(self):
        a = [IdGenerator(seed=3).new_id() for _ in range(50)]
        b = [IdGenerator(seed=3).new_id() for _ in range(50)]
        assert a == b
        assert a == sorted(a)


class TestTransition:
    def test_generated_to_approved(self):
        item = make_item()
        assert transition(item, Status.APPROVED).status is Status.APPROVED

    def test_approved_back_to_generated_forbidden(self):
        item = transition(make_item(), Status.APPROVED)
        with pytest.raises(IllegalTransition):
            transition(item, Status.GENERATED)

    def test_generated_edited_approved_path(self):
        item = make_item()
        item = transition(item, Status.EDITED)
        item = transition(item, Status.APPROVED)
        assert item.status is Status.APPROVED

    def test_all_two_step_paths_match_declared_graph(self):
        # Path enumeration: every (first, second) hop agrees with the graph.
        for first in Status:
            item = make_item()
            if first in ALLOWED_TRANSITIONS[Status.GENERATED]:
                item = transition(item, first)
                for second in Status:
                    if second in ALLOWED_TRANSITIONS[first]:
                        assert transition(item, second).status is second
                    else:
                        with pytest.raises(IllegalTransition):
                            transition(item, second)
            elif first is not Status.GENERATED:
                with pytest.raises(IllegalTransition):
                    transition(item, first)

    def test_other_fields_unchanged(self):
        item = make_item()
        moved = transition(item, Status.APPROVED)
        assert moved.item_id == item.item_id
        assert moved.body == item.body
        assert moved.provenance == item.provenance

    @given(st.lists(st.sampled_from(list(Status)), max_size=8), st.randoms())
    def test_random_sequences_stay_on_graph(self, targets, _rng):
        # Independent oracle: the edge set as written in the status contract.
        edges = {
            ("generated", "approved"),
            ("generated", "rejected"),
            ("generated", "edited"),
            ("edited", "approved"),
            ("edited", "rejected"),
        }
        item = make_item()
        for target in targets:
            allowed = (item.status.value, target.value) in edges
            if allowed:
                item = transition(item, target)
                assert item.status is target
            else:
                with pytest.raises(IllegalTransition):
                    transition(item, target)


class TestDomainInvariants:
    def test_segment_end_before_start_rejected(self):
        with pytest.raises(ValueError):
            TranscriptSegment(index=1, text="x", start_ms=500, end_ms=100)

    def test_lecture_requires_some_input(self):
        with pytest.raises(ValueError):
            LectureSource(lecture_id="l1", title="t")

    def test_lecture_rejects_unsorted_segments(self):
        segs = (
            TranscriptSegment(index=1, text="b", start_ms=900, end_ms=950),
            TranscriptSegment(index=2, text="a", start_ms=100, end_ms=200),
        )
        with pytest.raises(ValueError):
            LectureSource(lecture_id="l1", title="t", transcript=segs)

    def test_llm_provenance_requires_model_and_hash(self):
        with pytest.raises(ValueError):
            Provenance(
                producer=Producer.LLM,
                pipeline_version="0.1.0",
                timestamp=datetime(2024, 1, 1, tzinfo=timezone.utc),
            )

    def test_human_provenance_helper(self):
        prov = human_provenance(FixedClock())
        assert prov.producer is Producer.HUMAN
        assert prov.model_id is None

    def test_package_rejects_duplicate_ids(self):
        item = make_item()
        with pytest.raises(ValueError):
            Package(source=SourceRef("l1", "t"), items=(item, item))

    def test_flashcard_front_length_cap(self):
        with pytest.raises(InvalidBody):
            FlashcardBody(front="x" * 301, back="y")

    def test_quiz_labels_must_be_consecutive(self):
        opts = (QuizOption("A", "one"), QuizOption("C", "two"), QuizOption("D", "three"))
        with pytest.raises(InvalidBody):
            QuizBody(stem="s", options=opts, correct_label="A")

    def test_quiz_duplicate_texts_rejected(self):
        opts = (QuizOption("A", "same"), QuizOption("B", "same"), QuizOption("C", "other"))
        with pytest.raises(InvalidBody):
            QuizBody(stem="s", options=opts, correct_label="A")

    def test_mini_lesson_minutes_derived_from_content(self):
        content = " ".join(["word"] * 1200)
        body = MiniLessonBody(title="t", objective="o", content=content)
        assert body.estimated_minutes == pytest.approx(6.0)
        assert body.duration_in_range()

    def test_mini_lesson_short_content_flagged(self, caplog):
        with caplog.at_level("WARNING"):
            body = MiniLessonBody(title="t", objective="o", content="too short")
        assert not body.duration_in_range()
        assert any("outside" in r.message for r in caplog.records)

    @given(
        n_options=st.integers(min_value=0, max_value=8),
        correct_index=st.integers(min_value=0, max_value=9),
        duplicate_texts=st.booleans(),
        data=st.data(),
    )
    def test_quiz_body_accepts_exactly_the_invariant_region(
        self, n_options, correct_index, duplicate_texts, data
    ):
        # Independent predicate written from the quiz contract.
        texts = [f"option text {i}" for i in range(n_options)]
        if duplicate_texts and n_options >= 2:
            texts[1] = texts[0]
        options = tuple(
            QuizOption(label=chr(ord("A") + i), text=t) for i, t in enumerate(texts)
        )
        correct = chr(ord("A") + correct_index)
        should_pass = (
            3 <= n_options <= 6
            and correct_index < n_options
            and len(set(texts)) == len(texts)
        )
        if should_pass:
            body = QuizBody(stem="s?", options=options, correct_label=correct)
            assert sum(1 for o in body.options if o.label == body.correct_label) == 1
        else:
            with pytest.raises(InvalidBody):
                QuizBody(stem="s?", options=options, correct_label=correct)
