// Accepting a suggestion and manually marking the same blob must produce
// byte-identical API requests.

import { beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api";
import { renderSuggestions, selectionBlobIndex } from "../src/view";

interface CapturedRequest {
  url: string;
  method: string | undefined;
  body: string | undefined;
}

const captured: CapturedRequest[] = [];

function installFetchCapture(): void {
  captured.length = 0;
  vi.stubGlobal(
    "fetch",
    vi.fn(async (url: string, init?: RequestInit) => {
      captured.push({
        url: String(url),
        method: init?.method,
        body: init?.body as string | undefined,
      });
      return new Response(
        JSON.stringify({
          annotation: {
            label: "right_information",
            blob_index: 7,
            value: 1,
            created_at: "now",
          },
          task_revision: 1,
          child_task_id: null,
          training_jobs: [],
        }),
        { status: 201, headers: { "Content-Type": "application/json" } }
      );
    })
  );
}

function renderPolicyFixture(nBlobs: number): void {
  document.body.innerHTML = '<div id="policy-text"></div>';
  const container = document.getElementById("policy-text")!;
  for (let i = 0; i < nBlobs; i++) {
    const p = document.createElement("p");
    p.id = `blob-${i}`;
    p.className = "blob";
    p.dataset.blobIndex = String(i);
    p.textContent = `Paragraph ${i} of the policy text.`;
    container.appendChild(p);
  }
}

describe("annotation request equivalence", () => {
  beforeEach(() => {
    installFetchCapture();
  });

  it("accept button and manual marking send identical bytes", async () => {
    const api = new ApiClient();
    const label = "right_information";

    // path 1: accept a suggestion via its table row button
    document.body.innerHTML = '<div id="suggestions-panel"></div>';
    renderSuggestions(
      {
        document_id: "doc-1",
        label,
        k: 5,
        threshold: 0.4,
        suggestions: [{ blob_index: 7, score: 0.93 }],
      },
      document.getElementById("suggestions-panel")!,
      {
        onNavigate: () => undefined,
        onAccept: (suggestion) =>
          void api.postAnnotation("task-1", label, suggestion.blob_index, 1),
      }
    );
    (document.querySelector("button.accept") as HTMLButtonElement).click();
    await vi.waitFor(() => expect(captured).toHaveLength(1));

    // path 2: manual marking -- select text inside blob 7 and annotate it
    renderPolicyFixture(10);
    const blob = document.getElementById("blob-7")!;
    const range = document.createRange();
    range.selectNodeContents(blob.firstChild!);
    const selection = window.getSelection()!;
    selection.removeAllRanges();
    selection.addRange(range);

    const blobIndex = selectionBlobIndex(selection);
    expect(blobIndex).toBe(7);
    await api.postAnnotation("task-1", label, blobIndex as number, 1);

    expect(captured).toHaveLength(2);
    expect(captured[1].url).toBe(captured[0].url);
    expect(captured[1].method).toBe(captured[0].method);
    expect(captured[1].body).toBe(captured[0].body);
  });

  it("selection spanning two blobs is rejected before any request", () => {
    renderPolicyFixture(10);
    const range = document.createRange();
    range.setStart(document.getElementById("blob-2")!.firstChild!, 0);
    range.setEnd(document.getElementById("blob-3")!.firstChild!, 5);
    const selection = window.getSelection()!;
    selection.removeAllRanges();
    selection.addRange(range);

    expect(selectionBlobIndex(selection)).toBeNull();
    expect(captured).toHaveLength(0);
  });

  it("collapsed selection yields no blob", () => {
    renderPolicyFixture(3);
    const selection = window.getSelection()!;
    selection.removeAllRanges();
    expect(selectionBlobIndex(selection)).toBeNull();
  });
});
