/**
 * session.ts — per-student interaction state: quiz answers, flipped cards,
 * seeded option shuffling, and the running summary. State persists in
 * browser storage keyed by a digest of the package bytes, so reloading the
 * same package resumes the session. The session never writes to the package.
 */

import {
  LearningPackage,
  PackageItem,
  QuizBody,
  QuizOption,
  visibleItems,
} from "./schema.js";

export interface AnswerRecord {
  chosen_label: string;
  correct: boolean;
}

export interface AnswerFeedback {
  accepted: boolean;
  correct: boolean;
  correct_label: string;
  explanation?: string;
  notice?: string;
}

export interface SessionSnapshot {
  seed: number;
  answered: Record<string, AnswerRecord>;
  flipped: string[]; // ever flipped this session (counts as "seen")
  showing_back: string[]; // currently showing the back side
  started_at: string;
}

export interface TopicStats {
  answered: number;
  correct: number;
}

export interface SessionSummary {
  quizzes_total: number;
  quizzes_answered: number;
  quizzes_correct: number;
  cards_total: number;
  cards_seen: number;
  by_topic: Record<string, TopicStats>;
}

/** Minimal key/value storage; window.localStorage satisfies it. */
export interface KeyValueStorage {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

export class MemoryStorage implements KeyValueStorage {
  private map = new Map<string, string>();

  getItem(key: string): string | null {
    return this.map.has(key) ? (this.map.get(key) as string) : null;
  }

  setItem(key: string, value: string): void {
    this.map.set(key, value);
  }
}

/** FNV-1a over the raw package text; good enough to key browser storage. */
export function packageDigest(text: string): string {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  return hash.toString(16).padStart(8, "0");
}

/** Deterministic PRNG so option order is stable within one session. */
export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function shuffled<T>(items: T[], rng: () => number): T[] {
  const out = items.slice();
  for (let i = out.length - 1; i > 0; i--) {
    const j = Math.floor(rng() * (i + 1));
    [out[i], out[j]] = [out[j], out[i]];
  }
  return out;
}

export class Session {
  readonly pkg: LearningPackage;
  readonly storageKey: string;
  private readonly storage: KeyValueStorage;
  private seed: number;
  private answered: Record<string, AnswerRecord> = {};
  private everFlipped = new Set<string>();
  private showingBack = new Set<string>();
  private startedAt: string;

  constructor(
    pkg: LearningPackage,
    packageText: string,
    storage: KeyValueStorage = new MemoryStorage(),
    seed?: number,
  ) {
    this.pkg = pkg;
    this.storage = storage;
    this.storageKey = `microforge-session-${packageDigest(packageText)}`;
    this.seed = seed ?? Math.floor(Math.random() * 0xffffffff);
    this.startedAt = new Date().toISOString();
    this.restore();
  }

  private restore(): void {
    const raw = this.storage.getItem(this.storageKey);
    if (raw === null) {
      this.save();
      return;
    }
    try {
      const snap = JSON.parse(raw) as SessionSnapshot;
      this.seed = snap.seed;
      this.answered = snap.answered ?? {};
      this.everFlipped = new Set(snap.flipped ?? []);
      this.showingBack = new Set(snap.showing_back ?? []);
      this.startedAt = snap.started_at ?? this.startedAt;
    } catch {
      // Corrupt snapshot: start fresh rather than crash.
      this.save();
    }
  }

  private save(): void {
    const snap: SessionSnapshot = {
      seed: this.seed,
      answered: this.answered,
      flipped: [...this.everFlipped],
      showing_back: [...this.showingBack],
      started_at: this.startedAt,
    };
    this.storage.setItem(this.storageKey, JSON.stringify(snap));
  }

  private quizzes(): PackageItem[] {
    return visibleItems(this.pkg).filter((i) => i.kind === "quiz");
  }

  private cards(): PackageItem[] {
    return visibleItems(this.pkg).filter((i) => i.kind === "flashcard");
  }

  /**
   * Option order for one quiz: a per-session permutation of the package's
   * options, stable for the whole session.
   */
  optionsFor(item: PackageItem): QuizOption[] {
    const body = item.body as QuizBody;
    const rng = mulberry32(this.seed ^ parseInt(packageDigest(item.item_id), 16));
    return shuffled(body.options, rng);
  }

  /** Answer a quiz once; repeat attempts are ignored with a notice. */
  answer(itemId: string, chosenLabel: string): AnswerFeedback {
    const item = this.quizzes().find((i) => i.item_id === itemId);
    if (item === undefined) {
      return {
        accepted: false,
        correct: false,
        correct_label: "",
        notice: "Unknown quiz item.",
      };
    }
    const body = item.body as QuizBody;
    const prior = this.answered[itemId];
    if (prior !== undefined) {
      return {
        accepted: false,
        correct: prior.correct,
        correct_label: body.correct_label,
        explanation: body.explanation,
        notice: "Already answered this session; your first answer stands.",
      };
    }
    const correct = chosenLabel === body.correct_label;
    this.answered[itemId] = { chosen_label: chosenLabel, correct };
    this.save();
    return {
      accepted: true,
      correct,
      correct_label: body.correct_label,
      explanation: body.explanation,
    };
  }

  answerFor(itemId: string): AnswerRecord | undefined {
    return this.answered[itemId];
  }

  /** Toggle a flashcard; returns true when the back is now showing. */
  flip(itemId: string): boolean {
    this.everFlipped.add(itemId);
    let back: boolean;
    if (this.showingBack.has(itemId)) {
      this.showingBack.delete(itemId);
      back = false;
    } else {
      this.showingBack.add(itemId);
      back = true;
    }
    this.save();
    return back;
  }

  isShowingBack(itemId: string): boolean {
    return this.showingBack.has(itemId);
  }

  summary(): SessionSummary {
    const quizzes = this.quizzes();
    const cards = this.cards();
    const answers = Object.entries(this.answered);
    const byTopic: Record<string, TopicStats> = {};
    for (const [itemId, record] of answers) {
      const item = quizzes.find((i) => i.item_id === itemId);
      if (item === undefined) continue;
      const topic = (item.body as QuizBody).topic;
      if (topic === undefined) continue;
      if (byTopic[topic] === undefined) {
        byTopic[topic] = { answered: 0, correct: 0 };
      }
      byTopic[topic].answered += 1;
      if (record.correct) byTopic[topic].correct += 1;
    }
    return {
      quizzes_total: quizzes.length,
      quizzes_answered: answers.length,
      quizzes_correct: answers.filter(([, r]) => r.correct).length,
      cards_total: cards.length,
      cards_seen: cards.filter((c) => this.everFlipped.has(c.item_id)).length,
      by_topic: byTopic,
    };
  }
}
