/**
 * schema.ts — types for the pipeline's package file (schema_version "1.0")
 * and strict parsing. The player is read-only: nothing here mutates or
 * re-serializes a package.
 */

export type ItemKind = "flashcard" | "quiz" | "mini_lesson" | "scenario";
export type ItemStatus = "generated" | "approved" | "rejected" | "edited";

export interface FlashcardBody {
  front: string;
  back: string;
  media: string[];
}

export interface QuizOption {
  label: string;
  text: string;
}

export interface QuizBody {
  stem: string;
  options: QuizOption[];
  correct_label: string;
  explanation?: string;
  hint?: string;
  topic?: string;
}

export interface MiniLessonBody {
  title: string;
  objective: string;
  content: string;
  estimated_minutes: number;
}

export interface ScenarioBody {
  objective: string;
  scenario: string;
  task: string;
  activity: {
    introduction: string;
    hands_on: string;
    assessment: string;
  };
}

export type ItemBody = FlashcardBody | QuizBody | MiniLessonBody | ScenarioBody;

export interface Readability {
  fre: number;
  band: string;
  stats: {
    words: number;
    sentences: number;
    syllables: number;
    difficult_words: number;
  };
}

export interface PackageItem {
  item_id: string;
  kind: ItemKind;
  status: ItemStatus;
  body: ItemBody;
  readability?: Readability;
}

export interface LearningPackage {
  schema_version: string;
  source: { lecture_id: string; title: string };
  items: PackageItem[];
  manifest: Record<string, unknown>;
}

export const SUPPORTED_SCHEMA_VERSION = "1.0";

const KINDS: ItemKind[] = ["flashcard", "quiz", "mini_lesson", "scenario"];
const STATUSES: ItemStatus[] = ["generated", "approved", "rejected", "edited"];

/** Raised for anything the player cannot safely render. */
export class PackageError extends Error {}

function fail(message: string): never {
  throw new PackageError(message);
}

function asString(value: unknown, path: string): string {
  if (typeof value !== "string" || value.length === 0) {
    fail(`${path}: expected a non-empty string`);
  }
  return value;
}

function asObject(value: unknown, path: string): Record<string, unknown> {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    fail(`${path}: expected an object`);
  }
  return value as Record<string, unknown>;
}

function parseBody(kind: ItemKind, raw: unknown, path: string): ItemBody {
  const body = asObject(raw, path);
  switch (kind) {
    case "flashcard": {
      const media = Array.isArray(body.media) ? body.media.map(String) : [];
      return {
        front: asString(body.front, `${path}.front`),
        back: asString(body.back, `${path}.back`),
        media,
      };
    }
    case "quiz": {
      if (!Array.isArray(body.options) || body.options.length < 2) {
        fail(`${path}.options: expected an option list`);
      }
      const options = body.options.map((opt, i) => {
        const o = asObject(opt, `${path}.options[${i}]`);
        return {
          label: asString(o.label, `${path}.options[${i}].label`),
          text: asString(o.text, `${path}.options[${i}].text`),
        };
      });
      const correct = asString(body.correct_label, `${path}.correct_label`);
      if (options.filter((o) => o.label === correct).length !== 1) {
        fail(`${path}: correct_label ${correct} must match exactly one option`);
      }
      return {
        stem: asString(body.stem, `${path}.stem`),
        options,
        correct_label: correct,
        explanation: typeof body.explanation === "string" ? body.explanation : undefined,
        hint: typeof body.hint === "string" ? body.hint : undefined,
        topic: typeof body.topic === "string" ? body.topic : undefined,
      };
    }
    case "mini_lesson":
      return {
        title: asString(body.title, `${path}.title`),
        objective: asString(body.objective, `${path}.objective`),
        content: asString(body.content, `${path}.content`),
        estimated_minutes: typeof body.estimated_minutes === "number" ? body.estimated_minutes : 0,
      };
    case "scenario": {
      const activity = asObject(body.activity, `${path}.activity`);
      return {
        objective: asString(body.objective, `${path}.objective`),
        scenario: asString(body.scenario, `${path}.scenario`),
        task: asString(body.task, `${path}.task`),
        activity: {
          introduction: asString(activity.introduction, `${path}.activity.introduction`),
          hands_on: asString(activity.hands_on, `${path}.activity.hands_on`),
          assessment: asString(activity.assessment, `${path}.activity.assessment`),
        },
      };
    }
  }
}

/**
 * Parse and validate package JSON text. Throws PackageError with a readable
 * message on schema mismatch or any malformed structure.
 */
export function parsePackage(jsonText: string): LearningPackage {
  let doc: unknown;
  try {
    doc = JSON.parse(jsonText);
  } catch (err) {
    fail(`package file is not valid JSON: ${(err as Error).message}`);
  }
  const root = asObject(doc, "package");
  const version = asString(root.schema_version, "schema_version");
  if (version !== SUPPORTED_SCHEMA_VERSION) {
    fail(
      `unsupported schema_version ${version} (player reads ${SUPPORTED_SCHEMA_VERSION})`,
    );
  }
  const source = asObject(root.source, "source");
  if (!Array.isArray(root.items)) {
    fail("items: expected a list");
  }
  const items: PackageItem[] = root.items.map((raw, i) => {
    const item = asObject(raw, `items[${i}]`);
    const kind = asString(item.kind, `items[${i}].kind`) as ItemKind;
    if (!KINDS.includes(kind)) {
      fail(`items[${i}].kind: unknown kind ${kind}`);
    }
    const status = asString(item.status, `items[${i}].status`) as ItemStatus;
    if (!STATUSES.includes(status)) {
      fail(`items[${i}].status: unknown status ${status}`);
    }
    return {
      item_id: asString(item.item_id, `items[${i}].item_id`),
      kind,
      status,
      body: parseBody(kind, item.body, `items[${i}].body`),
      readability: item.readability as Readability | undefined,
    };
  });
  const ids = new Set(items.map((i) => i.item_id));
  if (ids.size !== items.length) {
    fail("duplicate item ids in package");
  }
  return {
    schema_version: version,
    source: {
      lecture_id: asString(source.lecture_id, "source.lecture_id"),
      title: asString(source.title, "source.title"),
    },
    items,
    manifest: asObject(root.manifest ?? {}, "manifest"),
  };
}

/** True when the package carries content that was never approved. */
export function isUnreviewed(pkg: LearningPackage): boolean {
  return pkg.manifest.unreviewed === true;
}

/**
 * Items the player may show: approved ones, plus generated/edited ones when
 * the manifest is explicitly stamped unreviewed. Rejected items never render.
 */
export function visibleItems(pkg: LearningPackage): PackageItem[] {
  const allowed: ItemStatus[] = isUnreviewed(pkg)
    ? ["approved", "generated", "edited"]
    : ["approved"];
  return pkg.items.filter((i) => allowed.includes(i.status));
}

export function itemsOfKind(items: PackageItem[], kind: ItemKind): PackageItem[] {
  return items.filter((i) => i.kind === kind);
}
