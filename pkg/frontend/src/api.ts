/** Typed client for the survey service HTTP+JSON API.
 *
 * This is the only backend surface the UI is allowed to touch; in
 * particular the admin export endpoint is never called from here.
 */

export interface SessionInfo {
  schemaVersion: number;
  sessionId: string;
  groupIndex: number;
  createdAt: string;
}

export interface TaskItem {
  label: string;
  source: string;
}

export type TaskKind = "CASE_RANKING" | "PAIR_PREFERENCE" | "THINK_ALOUD";

export interface TaskPayload {
  schemaVersion: number;
  done: boolean;
  taskId?: string;
  kind?: TaskKind;
  taskIndex?: number;
  taskCount?: number;
  original?: string;
  items?: TaskItem[];
  prompt?: string;
}

export type ResponseBody =
  | { ranks: Record<string, number> }
  | { chosen: string }
  | { text: string };

export type SubmitResult =
  | { ok: true }
  | { ok: false; status: number; errorType: string; message: string };

interface ErrorEnvelope {
  error?: { type?: string; message?: string };
}

export class SurveyApi {
  constructor(private readonly baseUrl: string = "") {}

  async createSession(respondentLabel: string): Promise<SessionInfo> {
    const response = await fetch(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ schemaVersion: 1, respondentLabel }),
    });
    if (!response.ok) {
      throw new Error(`session creation failed: HTTP ${response.status}`);
    }
    return (await response.json()) as SessionInfo;
  }

  async nextTask(sessionId: string): Promise<TaskPayload> {
    const response = await fetch(
      `${this.baseUrl}/sessions/${encodeURIComponent(sessionId)}/next`,
    );
    if (!response.ok) {
      throw new Error(`task fetch failed: HTTP ${response.status}`);
    }
    return (await response.json()) as TaskPayload;
  }

  async submitResponse(
    sessionId: string,
    taskId: string,
    kind: TaskKind,
    payload: ResponseBody,
  ): Promise<SubmitResult> {
    let response: Response;
    try {
      response = await fetch(
        `${this.baseUrl}/sessions/${encodeURIComponent(sessionId)}/responses`,
        {
          method: "POST",
          headers: { "content-type": "application/json" },
          body: JSON.stringify({ schemaVersion: 1, taskId, kind, payload }),
        },
      );
    } catch (err) {
      return {
        ok: false,
        status: 0,
        errorType: "NetworkError",
        message: `could not reach the survey service (${String(err)})`,
      };
    }
    if (response.status === 201) {
      return { ok: true };
    }
    let envelope: ErrorEnvelope = {};
    try {
      envelope = (await response.json()) as ErrorEnvelope;
    } catch {
      // non-JSON error body; keep the defaults
    }
    return {
      ok: false,
      status: response.status,
      errorType: envelope.error?.type ?? "HttpError",
      message: envelope.error?.message ?? `HTTP ${response.status}`,
    };
  }
}
