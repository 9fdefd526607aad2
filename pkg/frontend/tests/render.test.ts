import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import {
  renderError,
  renderMiniLesson,
  renderPackage,
  renderQuiz,
} from "../src/render.js";
import { parsePackage, PackageItem, QuizBody } from "../src/schema.js";
import { MemoryStorage, Session } from "../src/session.js";

const GOLDEN_PATH = fileURLToPath(
  new URL("../../tests/data/golden_package.json", import.meta.url),
);
const goldenText = readFileSync(GOLDEN_PATH, "utf-8");
const POINTER_QUIZ_STEM = "If you have `int *p1, *p2;` and `p1 = p2;`";

function setup(seed = 3): { session: Session; quiz: PackageItem } {
  const pkg = parsePackage(goldenText);
  const session = new Session(pkg, goldenText, new MemoryStorage(), seed);
  const quiz = pkg.items.find(
    (i) => i.kind === "quiz" && (i.body as QuizBody).stem.includes(POINTER_QUIZ_STEM),
  )!;
  return { session, quiz };
}

describe("renderPackage", () => {
  it("renders all four kind sections for the golden package", () => {
    const { session } = setup();
    const html = renderPackage(session.pkg, session);
    for (const id of [
      "section-flashcard",
      "section-quiz",
      "section-mini_lesson",
      "section-scenario",
    ]) {
      expect(html).toContain(`id="${id}"`);
    }
    expect(html).toContain("Session summary");
    expect(html).not.toContain("warning-banner");
  });

  it("shows the unreviewed banner when the manifest is stamped", () => {
    const doc = JSON.parse(goldenText);
    doc.manifest.unreviewed = true;
    const pkg = parsePackage(JSON.stringify(doc));
    const session = new Session(pkg, goldenText, new MemoryStorage(), 3);
    expect(renderPackage(pkg, session)).toContain("warning-banner");
  });

  it("escapes html in content", () => {
    const { session } = setup();
    const html = renderPackage(session.pkg, session);
    expect(html).not.toContain("<script");
    // The pointer stem contains backticks and `*` but must not inject tags.
    expect(html).toContain("int *p1, *p2;");
  });
});

describe("renderQuiz", () => {
  it("offers the hint before answering and hides the explanation", () => {
    const { session, quiz } = setup();
    const html = renderQuiz(quiz, session);
    expect(html).toContain("<details class=\"hint\">");
    expect(html).not.toContain("explanation");
    expect(html).toContain("data-action=\"answer\"");
  });

  it("marks a correct answer and reveals the explanation", () => {
    const { session, quiz } = setup();
    session.answer(quiz.item_id, "A");
    const html = renderQuiz(quiz, session);
    expect(html).toContain("Correct!");
    expect(html).toContain("class=\"explanation\"");
    expect(html).toContain("disabled");
    expect(html).not.toContain("<details class=\"hint\">");
  });

  it("marks an incorrect answer and names the right option", () => {
    const { session, quiz } = setup();
    session.answer(quiz.item_id, "B");
    const html = renderQuiz(quiz, session);
    expect(html).toContain("Incorrect");
    expect(html).toContain("the answer is A");
    expect(html).toContain("class=\"option incorrect\"");
    expect(html).toContain("class=\"option correct\"");
  });

  it("renders every option exactly once", () => {
    const { session, quiz } = setup();
    const html = renderQuiz(quiz, session);
    const body = quiz.body as QuizBody;
    for (const opt of body.options) {
      const occurrences = html.split(`data-label="${opt.label}"`).length - 1;
      expect(occurrences).toBe(1);
    }
  });
});

describe("renderMiniLesson", () => {
  it("renders blank-line separated content as paragraphs", () => {
    const { session } = setup();
    const lesson = session.pkg.items.find((i) => i.kind === "mini_lesson")!;
    const html = renderMiniLesson(lesson);
    expect((html.match(/<p>/g) ?? []).length).toBeGreaterThan(3);
    expect(html).toContain("Estimated reading time");
  });
});

describe("renderError", () => {
  it("renders a readable panel instead of crashing", () => {
    const html = renderError("unsupported schema_version 9.9");
    expect(html).toContain("error-panel");
    expect(html).toContain("unsupported schema_version 9.9");
  });
});
