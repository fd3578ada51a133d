// Wiring: load a task, render the view, and drive annotation through the
// service API. The server is the source of truth: the annotations panel
// re-renders only from confirmed responses.

import { ApiClient, ApiError, LabelNode, TaskDetail } from "./api.js";
import {
  navigateToBlob,
  renderAnnotations,
  renderDescriptionTable,
  renderLabelPalette,
  renderPolicyText,
  renderSuggestions,
  selectionBlobIndex,
  showBanner,
} from "./view.js";

const api = new ApiClient();

interface UiState {
  task: TaskDetail | null;
  selectedLabel: string | null;
  labelNodes: Map<string, LabelNode>;
}

const state: UiState = { task: null, selectedLabel: null, labelNodes: new Map() };

function el(id: string): HTMLElement {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found;
}

function indexLabels(node: LabelNode, into: Map<string, LabelNode>): void {
  into.set(node.id, node);
  node.children.forEach((child) => indexLabels(child, into));
}

async function refreshTask(taskId: string): Promise<void> {
  state.task = await api.getTask(taskId);
  renderPolicyText(state.task, el("policy-text"));
  renderAnnotations(state.task, el("annotations-panel"));
  renderDescriptionTable(state.task.labels, state.labelNodes, el("descriptions"));
  renderLabelPalette(
    state.task.labels,
    state.labelNodes,
    state.selectedLabel,
    el("label-palette"),
    selectLabel
  );
  await refreshSuggestions();
}

async function refreshSuggestions(): Promise<void> {
  if (!state.task) return;
  const label = state.selectedLabel;
  const container = el("suggestions-panel");
  if (!label) {
    container.innerHTML = "";
    return;
  }
  try {
    const suggestions = await api.getSuggestions(state.task.id, label);
    renderSuggestions(suggestions, container, {
      onNavigate: (blobIndex) => navigateToBlob(blobIndex),
      onAccept: (suggestion) => annotate(label, suggestion.blob_index, 1),
    });
  } catch (err) {
    reportError(err);
  }
}

function selectLabel(label: string): void {
  state.selectedLabel = label;
  if (state.task) {
    renderLabelPalette(
      state.task.labels,
      state.labelNodes,
      label,
      el("label-palette"),
      selectLabel
    );
  }
  void refreshSuggestions();
}

export async function annotate(
  label: string,
  blobIndex: number,
  value: 0 | 1
): Promise<void> {
  if (!state.task) return;
  try {
    const response = await api.postAnnotation(state.task.id, label, blobIndex, value);
    if (response.child_task_id) {
      showBanner(`follow-up task created: ${response.child_task_id}`, el("banners"));
    }
    for (const job of response.training_jobs) {
      showBanner(`retraining started for ${job.label}`, el("banners"));
      void pollTraining(job.id);
    }
    await refreshTask(state.task.id);
  } catch (err) {
    reportError(err);
    // rollback: re-render from the server's state
    await refreshTask(state.task.id);
  }
}

async function pollTraining(jobId: string): Promise<void> {
  for (;;) {
    const job = await api.trainStatus(jobId);
    if (job.status === "done") {
      showBanner(`model for ${job.label} now at version ${job.version}`, el("banners"));
      await refreshSuggestions();
      return;
    }
    if (job.status === "failed") {
      showBanner(`training for ${job.label} failed: ${job.error}`, el("banners"));
      return;
    }
    await new Promise((resolve) => setTimeout(resolve, 2000));
  }
}

function markSelection(): void {
  if (!state.selectedLabel) {
    showBanner("select a label first", el("banners"));
    return;
  }
  const blobIndex = selectionBlobIndex(window.getSelection());
  if (blobIndex === null) {
    showBanner("selection must stay within one paragraph", el("banners"));
    return;
  }
  void annotate(state.selectedLabel, blobIndex, 1);
}

function reportError(err: unknown): void {
  const message =
    err instanceof ApiError ? `${err.status}: ${err.message}` : String(err);
  showBanner(message, el("banners"));
}

async function start(): Promise<void> {
  const schema = await api.getLabels();
  indexLabels(schema, state.labelNodes);
  const params = new URLSearchParams(window.location.search);
  const taskId = params.get("task");
  if (taskId) {
    await refreshTask(taskId);
  } else {
    const tasks = await api.listTasks();
    const open = tasks.find((task) => task.status === "open");
    if (open) await refreshTask(open.id);
  }
  el("mark-button").addEventListener("click", markSelection);
}

if (typeof window !== "undefined" && "document" in window) {
  window.addEventListener("DOMContentLoaded", () => void start());
}
