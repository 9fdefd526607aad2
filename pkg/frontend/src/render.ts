/**
 * render.ts — pure HTML-string renderers. No DOM access here, so every view
 * is unit-testable in node; main.ts assigns the output to the page and wires
 * clicks through data-* attributes.
 */

import {
  FlashcardBody,
  LearningPackage,
  MiniLessonBody,
  PackageItem,
  QuizBody,
  ScenarioBody,
  isUnreviewed,
  itemsOfKind,
  visibleItems,
} from "./schema.js";
import { Session } from "./session.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

/** Blank-line separated text to paragraphs. */
function paragraphs(text: string): string {
  return text
    .split(/\n\s*\n/)
    .filter((p) => p.trim().length > 0)
    .map((p) => `<p>${escapeHtml(p.trim())}</p>`)
    .join("\n");
}

export function renderError(message: string): string {
  return `<div class="panel error-panel" role="alert">
  <h2>Cannot load package</h2>
  <p>${escapeHtml(message)}</p>
</div>`;
}

export function renderBanner(): string {
  return `<div class="banner warning-banner" role="status">
  This package contains content that has not been reviewed by an instructor.
</div>`;
}

export function renderFlashcard(item: PackageItem, session: Session): string {
  const body = item.body as FlashcardBody;
  const back = session.isShowingBack(item.item_id);
  const side = back ? body.back : body.front;
  const face = back ? "back" : "front";
  return `<article class="card flashcard" data-item="${item.item_id}">
  <div class="card-side card-${face}">${escapeHtml(side)}</div>
  <button type="button" data-action="flip" data-item="${item.item_id}">
    ${back ? "Show front" : "Flip card"}
  </button>
</article>`;
}

export function renderQuiz(item: PackageItem, session: Session): string {
  const body = item.body as QuizBody;
  const answer = session.answerFor(item.item_id);
  const options = session.optionsFor(item);
  const rows = options
    .map((opt) => {
      const classes = ["option"];
      let marker = "";
      if (answer !== undefined) {
        if (opt.label === body.correct_label) {
          classes.push("correct");
          marker = " ✓";
        }
        if (opt.label === answer.chosen_label && !answer.correct) {
          classes.push("incorrect");
          marker = " ✗";
        }
      }
      const disabled = answer !== undefined ? " disabled" : "";
      return `<li class="${classes.join(" ")}">
    <button type="button" data-action="answer" data-item="${item.item_id}" data-label="${opt.label}"${disabled}>
      ${opt.label}) ${escapeHtml(opt.text)}${marker}
    </button>
  </li>`;
    })
    .join("\n");

  let feedback = "";
  if (answer !== undefined) {
    const verdict = answer.correct
      ? `<p class="feedback correct-feedback">Correct!</p>`
      : `<p class="feedback incorrect-feedback">Incorrect — the answer is ${body.correct_label}.</p>`;
    const explanation = body.explanation
      ? `<p class="explanation">${escapeHtml(body.explanation)}</p>`
      : "";
    feedback = verdict + explanation;
  }
  const hint =
    answer === undefined && body.hint
      ? `<details class="hint"><summary>Hint</summary><p>${escapeHtml(body.hint)}</p></details>`
      : "";
  return `<article class="card quiz" data-item="${item.item_id}">
  <p class="stem">${escapeHtml(body.stem)}</p>
  <ul class="options">
${rows}
  </ul>
  ${hint}
  ${feedback}
</article>`;
}

export function renderMiniLesson(item: PackageItem): string {
  const body = item.body as MiniLessonBody;
  const minutes = body.estimated_minutes > 0
    ? `<p class="minutes">Estimated reading time: ${body.estimated_minutes.toFixed(1)} minutes</p>`
    : "";
  return `<article class="card mini-lesson" data-item="${item.item_id}">
  <h3>${escapeHtml(body.title)}</h3>
  <p class="objective">${escapeHtml(body.objective)}</p>
  ${minutes}
  <div class="lesson-content">
${paragraphs(body.content)}
  </div>
</article>`;
}

export function renderScenario(item: PackageItem): string {
  const body = item.body as ScenarioBody;
  return `<article class="card scenario" data-item="${item.item_id}">
  <h3>${escapeHtml(body.objective)}</h3>
  <p><strong>Scenario:</strong> ${escapeHtml(body.scenario)}</p>
  <p><strong>Task:</strong> ${escapeHtml(body.task)}</p>
  <ol class="activity">
    <li><strong>Introduction:</strong> ${escapeHtml(body.activity.introduction)}</li>
    <li><strong>Hands-on activity:</strong> ${escapeHtml(body.activity.hands_on)}</li>
    <li><strong>Assessment:</strong> ${escapeHtml(body.activity.assessment)}</li>
  </ol>
</article>`;
}

export function renderSummary(session: Session): string {
  const s = session.summary();
  const topics = Object.entries(s.by_topic)
    .map(
      ([topic, t]) =>
        `<li>${escapeHtml(topic)}: ${t.correct}/${t.answered} correct</li>`,
    )
    .join("\n");
  const topicBlock = topics ? `<ul class="topics">${topics}</ul>` : "";
  return `<section class="summary" id="summary">
  <h2>Session summary</h2>
  <p>Quizzes: ${s.quizzes_correct} correct of ${s.quizzes_answered} answered (${s.quizzes_total} total)</p>
  <p>Flashcards seen: ${s.cards_seen} of ${s.cards_total}</p>
  ${topicBlock}
</section>`;
}

const SECTIONS: Array<{
  kind: "flashcard" | "quiz" | "mini_lesson" | "scenario";
  heading: string;
}> = [
  { kind: "flashcard", heading: "Flashcards" },
  { kind: "quiz", heading: "Quizzes" },
  { kind: "mini_lesson", heading: "Mini lessons" },
  { kind: "scenario", heading: "Scenario-based activities" },
];

export function renderPackage(pkg: LearningPackage, session: Session): string {
  const items = visibleItems(pkg);
  const banner = isUnreviewed(pkg) ? renderBanner() : "";
  const sections = SECTIONS.map(({ kind, heading }) => {
    const group = itemsOfKind(items, kind);
    if (group.length === 0) return "";
    const rendered = group
      .map((item) => {
        switch (kind) {
          case "flashcard":
            return renderFlashcard(item, session);
          case "quiz":
            return renderQuiz(item, session);
          case "mini_lesson":
            return renderMiniLesson(item);
          case "scenario":
            return renderScenario(item);
        }
      })
      .join("\n");
    return `<section class="kind-section" id="section-${kind}">
  <h2>${heading}</h2>
${rendered}
</section>`;
  }).join("\n");
  return `<header><h1>${escapeHtml(pkg.source.title)}</h1></header>
${banner}
${sections}
${renderSummary(session)}`;
}
