// Rendering for the task view: label palette, retractable description and
// suggestion tables, the policy text split into navigable blobs, and the
// current-annotations panel.

import {
  LabelNode,
  Suggestion,
  SuggestionSet,
  TaskDetail,
} from "./api.js";

const FLASH_MS = 1200;

export function blobElementId(index: number): string {
  return `blob-${index}`;
}

/** Scroll the viewport to a blob and flash it briefly. */
export function navigateToBlob(index: number, root: Document = document): void {
  const el = root.getElementById(blobElementId(index));
  if (!el) return;
  el.scrollIntoView({ behavior: "smooth", block: "center" });
  el.classList.add("flash");
  setTimeout(() => el.classList.remove("flash"), FLASH_MS);
}

export function renderPolicyText(detail: TaskDetail, container: HTMLElement): void {
  container.innerHTML = "";
  for (const blob of detail.blobs) {
    const p = document.createElement("p");
    p.id = blobElementId(blob.index);
    p.className = "blob";
    p.dataset.blobIndex = String(blob.index);
    p.textContent = blob.text;
    container.appendChild(p);
  }
}

export function renderLabelPalette(
  labels: string[],
  nodes: Map<string, LabelNode>,
  selected: string | null,
  container: HTMLElement,
  onSelect: (label: string) => void
): void {
  container.innerHTML = "";
  for (const label of labels) {
    const button = document.createElement("button");
    button.className = "label-button" + (label === selected ? " selected" : "");
    button.dataset.label = label;
    button.textContent = nodes.get(label)?.name ?? label;
    button.addEventListener("click", () => onSelect(label));
    container.appendChild(button);
  }
}

export function renderDescriptionTable(
  labels: string[],
  nodes: Map<string, LabelNode>,
  container: HTMLElement
): void {
  const rows = labels
    .map((label) => {
      const node = nodes.get(label);
      return `<tr><td>${node?.name ?? label}</td><td>${
        node?.description ?? ""
      }</td></tr>`;
    })
    .join("");
  container.innerHTML = `
    <details open class="description-table">
      <summary>Label descriptions</summary>
      <table><tbody>${rows}</tbody></table>
    </details>`;
}

export function renderSuggestions(
  suggestions: SuggestionSet | null,
  container: HTMLElement,
  handlers: {
    onNavigate: (blobIndex: number) => void;
    onAccept: (suggestion: Suggestion) => void;
  }
): void {
  if (!suggestions) {
    container.innerHTML =
      '<details open class="suggestions"><summary>Suggestions</summary>' +
      '<p class="empty">model not trained yet</p></details>';
    return;
  }
  container.innerHTML = "";
  const details = document.createElement("details");
  details.open = true;
  details.className = "suggestions";
  const summary = document.createElement("summary");
  summary.textContent = `Suggestions for ${suggestions.label}`;
  details.appendChild(summary);

  const table = document.createElement("table");
  for (const suggestion of suggestions.suggestions) {
    const row = document.createElement("tr");
    row.dataset.blobIndex = String(suggestion.blob_index);

    const cellIndex = document.createElement("td");
    cellIndex.textContent = `blob ${suggestion.blob_index}`;
    const cellScore = document.createElement("td");
    cellScore.textContent = suggestion.score.toFixed(2);

    const cellNav = document.createElement("td");
    const nav = document.createElement("button");
    nav.className = "navigate";
    nav.textContent = "go to";
    nav.addEventListener("click", () => handlers.onNavigate(suggestion.blob_index));
    cellNav.appendChild(nav);

    const cellAccept = document.createElement("td");
    const accept = document.createElement("button");
    accept.className = "accept";
    accept.textContent = "accept";
    accept.addEventListener("click", () => handlers.onAccept(suggestion));
    cellAccept.appendChild(accept);

    row.append(cellIndex, cellScore, cellNav, cellAccept);
    table.appendChild(row);
  }
  details.appendChild(table);
  container.appendChild(details);
}

export function renderAnnotations(detail: TaskDetail, container: HTMLElement): void {
  container.innerHTML = "";
  for (const annotation of detail.annotations) {
    const chip = document.createElement("span");
    chip.className = "annotation-chip" + (annotation.value ? "" : " negative");
    chip.textContent = `${annotation.label} @ blob ${annotation.blob_index}`;
    container.appendChild(chip);
  }
}

export function showBanner(message: string, container: HTMLElement): void {
  const banner = document.createElement("div");
  banner.className = "banner";
  banner.textContent = message;
  container.appendChild(banner);
  setTimeout(() => banner.remove(), 5000);
}

/** Map a DOM selection to a blob index; null when it spans blobs or falls
 * outside the policy text. */
export function selectionBlobIndex(selection: Selection | null): number | null {
  if (!selection || selection.rangeCount === 0 || selection.isCollapsed) return null;
  const range = selection.getRangeAt(0);
  const start = closestBlob(range.startContainer);
  const end = closestBlob(range.endContainer);
  if (!start || start !== end) return null;
  return Number(start.dataset.blobIndex);
}

function closestBlob(node: Node): HTMLElement | null {
  const el = node instanceof HTMLElement ? node : node.parentElement;
  return el?.closest<HTMLElement>(".blob") ?? null;
}
