// Clicking a suggestion row's navigate button must scroll to exactly the
// suggested blob, across a 50-blob fixture policy.

import { beforeEach, describe, expect, it, vi } from "vitest";

import { navigateToBlob, renderPolicyText, renderSuggestions } from "../src/view";
import type { TaskDetail } from "../src/api";

function fixtureTask(nBlobs: number): TaskDetail {
  return {
    id: "task-1",
    document_id: "doc-1",
    labels: ["right_information"],
    parent_id: null,
    status: "open",
    revision: 0,
    children: {},
    blobs: Array.from({ length: nBlobs }, (_, i) => ({
      index: i,
      text: `Paragraph ${i} of a long privacy policy.`,
    })),
    annotations: [],
  };
}

describe("suggestion navigation", () => {
  const scrolled: string[] = [];

  beforeEach(() => {
    scrolled.length = 0;
    document.body.innerHTML =
      '<div id="policy-text"></div><div id="suggestions-panel"></div>';
    Element.prototype.scrollIntoView = vi.fn(function (this: Element) {
      scrolled.push(this.id);
    });
    renderPolicyText(fixtureTask(50), document.getElementById("policy-text")!);
  });

  it("renders all 50 blobs with stable ids", () => {
    expect(document.querySelectorAll(".blob")).toHaveLength(50);
    expect(document.getElementById("blob-0")).not.toBeNull();
    expect(document.getElementById("blob-49")).not.toBeNull();
  });

  it("navigate buttons scroll to their own blob", () => {
    const targets = [3, 17, 42, 49];
    renderSuggestions(
      {
        document_id: "doc-1",
        label: "right_information",
        k: targets.length,
        threshold: 0.2,
        suggestions: targets.map((index) => ({
          blob_index: index,
          score: 1 - index / 100,
        })),
      },
      document.getElementById("suggestions-panel")!,
      {
        onNavigate: (blobIndex) => navigateToBlob(blobIndex),
        onAccept: () => undefined,
      }
    );

    const buttons = document.querySelectorAll<HTMLButtonElement>("button.navigate");
    expect(buttons).toHaveLength(targets.length);
    buttons.forEach((button) => button.click());
    expect(scrolled).toEqual(targets.map((index) => `blob-${index}`));
  });

  it("flashes the navigated blob", () => {
    vi.useFakeTimers();
    navigateToBlob(42);
    expect(document.getElementById("blob-42")!.classList.contains("flash")).toBe(true);
    vi.advanceTimersByTime(1500);
    expect(document.getElementById("blob-42")!.classList.contains("flash")).toBe(false);
    vi.useRealTimers();
  });

  it("ignores unknown blob indices", () => {
    navigateToBlob(999);
    expect(scrolled).toEqual([]);
  });
});
