/**
 * Thin typed client for the annotation service. Every response body is
 * parsed through the shared schemas; callers receive discriminated
 * results instead of raw responses.
 */

import {
  Ack,
  AnnotationPayload,
  ackSchema,
  annotationPayloadSchema,
  guidelinesSchema,
  Task,
  taskSchema,
} from "./schema.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export type TaskResult =
  | { kind: "task"; task: Task }
  | { kind: "done" }
  | { kind: "error"; message: string };

export type SubmitResult =
  | { kind: "created"; ack: Ack }
  | { kind: "duplicate"; message: string }
  | { kind: "invalid"; message: string }
  | { kind: "error"; message: string };

export class ApiClient {
  private readonly baseUrl: string;
  private readonly token: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl: string, token: string, fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.token = token;
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  private headers(json: boolean): Record<string, string> {
    const headers: Record<string, string> = {
      Authorization: `Bearer ${this.token}`,
    };
    if (json) {
      headers["Content-Type"] = "application/json";
    }
    return headers;
  }

  async fetchGuidelines(): Promise<string> {
    const response = await this.fetchFn(`${this.baseUrl}/guidelines`, {
      headers: this.headers(false),
    });
    if (!response.ok) {
      throw new Error(`guidelines request failed with status ${response.status}`);
    }
    return guidelinesSchema.parse(await response.json()).guidelines;
  }

  async fetchTask(): Promise<TaskResult> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}/tasks/next`, {
        headers: this.headers(false),
      });
    } catch (error) {
      return { kind: "error", message: `network failure: ${String(error)}` };
    }
    if (response.status === 204) {
      return { kind: "done" };
    }
    if (response.status === 401) {
      return { kind: "error", message: "authentication failed; check the token" };
    }
    if (!response.ok) {
      return { kind: "error", message: `unexpected status ${response.status}` };
    }
    const parsed = taskSchema.safeParse(await response.json());
    if (!parsed.success) {
      return { kind: "error", message: "malformed task from the service" };
    }
    return { kind: "task", task: parsed.data };
  }

  async submit(payload: AnnotationPayload): Promise<SubmitResult> {
    const checked = annotationPayloadSchema.safeParse(payload);
    if (!checked.success) {
      return { kind: "invalid", message: checked.error.issues[0]?.message ?? "invalid payload" };
    }
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}/annotations`, {
        method: "POST",
        headers: this.headers(true),
        body: JSON.stringify(checked.data),
      });
    } catch (error) {
      return { kind: "error", message: `network failure: ${String(error)}` };
    }
    if (response.status === 201) {
      const ack = ackSchema.safeParse(await response.json());
      if (!ack.success) {
        return { kind: "error", message: "malformed acknowledgment from the service" };
      }
      return { kind: "created", ack: ack.data };
    }
    const detail = await response
      .json()
      .then((body: unknown) => {
        const maybe = body as { detail?: unknown };
        return typeof maybe.detail === "string" ? maybe.detail : `status ${response.status}`;
      })
      .catch(() => `status ${response.status}`);
    if (response.status === 409) {
      return { kind: "duplicate", message: detail };
    }
    if (response.status === 400) {
      return { kind: "invalid", message: detail };
    }
    return { kind: "error", message: detail };
  }
}
