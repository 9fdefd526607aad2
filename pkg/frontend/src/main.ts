/**
 * main.ts — browser wiring: load a package file (file picker, drag-drop, or
 * ?package= URL), keep a Session, re-render after every interaction.
 */

import { renderError, renderPackage } from "./render.js";
import { LearningPackage, PackageError, parsePackage } from "./schema.js";
import { Session } from "./session.js";

let session: Session | null = null;
let pkg: LearningPackage | null = null;

function contentRoot(): HTMLElement {
  return document.getElementById("content") as HTMLElement;
}

function redraw(): void {
  if (pkg !== null && session !== null) {
    contentRoot().innerHTML = renderPackage(pkg, session);
  }
}

function loadPackageText(text: string): void {
  try {
    pkg = parsePackage(text);
    session = new Session(pkg, text, window.localStorage);
    redraw();
  } catch (err) {
    pkg = null;
    session = null;
    const message =
      err instanceof PackageError ? err.message : `unexpected error: ${err}`;
    contentRoot().innerHTML = renderError(message);
  }
}

function handleClick(event: Event): void {
  const target = (event.target as HTMLElement).closest("button[data-action]");
  if (target === null || session === null) return;
  const action = target.getAttribute("data-action");
  const itemId = target.getAttribute("data-item") ?? "";
  if (action === "flip") {
    session.flip(itemId);
    redraw();
  } else if (action === "answer") {
    const label = target.getAttribute("data-label") ?? "";
    const feedback = session.answer(itemId, label);
    redraw();
    if (feedback.notice) {
      const card = document.querySelector(`article[data-item="${itemId}"]`);
      if (card !== null) {
        const note = document.createElement("p");
        note.className = "notice";
        note.textContent = feedback.notice;
        card.appendChild(note);
      }
    }
  }
}

async function maybeFetchFromQuery(): Promise<void> {
  const url = new URLSearchParams(window.location.search).get("package");
  if (url === null) return;
  try {
    const response = await fetch(url);
    if (!response.ok) {
      throw new PackageError(`fetch failed with HTTP ${response.status}`);
    }
    loadPackageText(await response.text());
  } catch (err) {
    contentRoot().innerHTML = renderError(
      err instanceof Error ? err.message : String(err),
    );
  }
}

function init(): void {
  const input = document.getElementById("package-input") as HTMLInputElement;
  input.addEventListener("change", () => {
    const file = input.files && input.files[0];
    if (!file) return;
    const reader = new FileReader();
    reader.onload = () => loadPackageText(String(reader.result));
    reader.readAsText(file);
  });
  contentRoot().addEventListener("click", handleClick);
  void maybeFetchFromQuery();
}

document.addEventListener("DOMContentLoaded", init);
