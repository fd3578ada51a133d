// Typed client for the annotation service HTTP API. All write paths go
// through buildAnnotationRequest so every caller produces identical bytes
// for the same decision.

export interface Task {
  id: string;
  document_id: string;
  labels: string[];
  parent_id: string | null;
  status: "open" | "done";
  revision: number;
  children: Record<string, string>;
}

export interface TaskDetail extends Task {
  blobs: { index: number; text: string }[];
  annotations: { blob_index: number; label: string; value: number }[];
}

export interface Suggestion {
  blob_index: number;
  score: number;
}

export interface SuggestionSet {
  document_id: string;
  label: string;
  k: number;
  threshold: number;
  suggestions: Suggestion[];
}

export interface LabelNode {
  id: string;
  name: string;
  description: string;
  children: LabelNode[];
}

export interface AnnotationResponse {
  annotation: { label: string; blob_index: number; value: number; created_at: string };
  task_revision: number;
  child_task_id: string | null;
  training_jobs: { id: string; label: string; status: string }[];
}

export interface TrainJob {
  id: string;
  label: string;
  status: string;
  version: number | null;
  error: string | null;
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

/** Canonical annotation request body: one construction site for both the
 * accept-suggestion path and manual marking. */
export function buildAnnotationRequest(
  label: string,
  blobIndex: number,
  value: 0 | 1
): { url: (taskId: string) => string; body: string } {
  const payload = { label, blob_index: blobIndex, value };
  return {
    url: (taskId: string) => `/api/tasks/${taskId}/annotations`,
    body: JSON.stringify(payload),
  };
}

async function parseOrThrow<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      detail = (await resp.json()).detail ?? detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

export class ApiClient {
  constructor(private base: string = "") {}

  listTasks(): Promise<Task[]> {
    return fetch(`${this.base}/api/tasks`).then((r) => parseOrThrow<Task[]>(r));
  }

  getTask(taskId: string): Promise<TaskDetail> {
    return fetch(`${this.base}/api/tasks/${taskId}`).then((r) =>
      parseOrThrow<TaskDetail>(r)
    );
  }

  createTask(policy: unknown): Promise<Task> {
    return fetch(`${this.base}/api/tasks`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(policy),
    }).then((r) => parseOrThrow<Task>(r));
  }

  async getSuggestions(
    taskId: string,
    label: string,
    k = 5
  ): Promise<SuggestionSet | null> {
    const resp = await fetch(
      `${this.base}/api/tasks/${taskId}/suggestions?label=${encodeURIComponent(
        label
      )}&k=${k}`
    );
    if (resp.status === 204) return null; // model not trained yet
    return parseOrThrow<SuggestionSet>(resp);
  }

  postAnnotation(
    taskId: string,
    label: string,
    blobIndex: number,
    value: 0 | 1
  ): Promise<AnnotationResponse> {
    const request = buildAnnotationRequest(label, blobIndex, value);
    return fetch(`${this.base}${request.url(taskId)}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: request.body,
    }).then((r) => parseOrThrow<AnnotationResponse>(r));
  }

  getLabels(): Promise<LabelNode> {
    return fetch(`${this.base}/api/labels`).then((r) => parseOrThrow<LabelNode>(r));
  }

  trainStatus(jobId: string): Promise<TrainJob> {
    return fetch(`${this.base}/api/train/${jobId}`).then((r) =>
      parseOrThrow<TrainJob>(r)
    );
  }
}
