"""microforge: lecture transcripts + slides -> reviewed microlearning packages."""

__version__ = "0.1.0"

from microforge.elements import (
    FlashcardBody,
    Kind,
    MiniLessonBody,
    QuizBody,
    QuizOption,
    ScenarioActivity,
    ScenarioBody,
)
from microforge.model import (
    LectureSource,
    MicroItem,
    Package,
    Producer,
    Provenance,
    SlidePage,
    SourceRef,
    Status,
    TranscriptSegment,
    new_item,
    transition,
)
from microforge.readability import classify, count_stats, flesch, score_item
from microforge.review_export import apply_review, export, import_package

__all__ = [
    "__version__",
    "Kind",
    "FlashcardBody",
    "QuizBody",
    "QuizOption",
    "MiniLessonBody",
    "ScenarioBody",
    "ScenarioActivity",
    "LectureSource",
    "TranscriptSegment",
    "SlidePage",
    "MicroItem",
    "Package",
    "Provenance",
    "Producer",
    "SourceRef",
    "Status",
    "new_item",
    "transition",
    "count_stats",
    "flesch",
    "classify",
    "score_item",
    "apply_review",
    "export",
    "import_package",
]
