/**
 * Session driver: wires the API client to the rendered screens and
 * advances through tasks until the server reports none are left.
 */

import { ApiClient, FetchLike } from "./api.js";
import { FormState, buildPayload, emptyForm } from "./form.js";
import { Task } from "./schema.js";
import { renderDone, renderError, renderTaskScreen } from "./view.js";

export interface SessionOptions {
  baseUrl: string;
  token: string;
  fetchFn?: FetchLike;
}

export class AnnotationSession {
  private readonly client: ApiClient;
  private readonly root: HTMLElement;
  private guidelines = "";
  private task: Task | null = null;
  private form: FormState = emptyForm();
  private notice = "";
  private requestInFlight = false;
  private submitted = 0;

  constructor(root: HTMLElement, options: SessionOptions) {
    this.root = root;
    this.client = new ApiClient(options.baseUrl, options.token, options.fetchFn);
  }

  /** Number of judgments accepted by the server in this session. */
  get submittedCount(): number {
    return this.submitted;
  }

  /** Fetch guidelines plus the first task and draw the screen. */
  async start(): Promise<void> {
    try {
      this.guidelines = await this.client.fetchGuidelines();
    } catch (error) {
      renderError(this.root, describe(error), () => void this.start());
      return;
    }
    await this.advance();
  }

  private async advance(): Promise<void> {
    const result = await this.client.fetchTask();
    if (result.kind === "done") {
      this.task = null;
      renderDone(this.root, this.submitted);
      return;
    }
    if (result.kind === "error") {
      renderError(this.root, result.message, () => void this.advance());
      return;
    }
    this.task = result.task;
    this.form = emptyForm();
    this.draw();
  }

  private draw(): void {
    if (!this.task) {
      return;
    }
    renderTaskScreen(
      this.root,
      {
        task: this.task,
        form: this.form,
        guidelines: this.guidelines,
        notice: this.notice,
        requestInFlight: this.requestInFlight,
      },
      {
        onInspiringChange: (choice) => {
          this.form.inspiring = choice;
          if (choice !== "yes") {
            this.form.influences.clear();
            this.form.influenceOther = "";
            this.form.emotions.clear();
            this.form.emotionOther = "";
          }
          this.draw();
        },
        onInfluenceToggle: (value, checked) => {
          if (checked) {
            this.form.influences.add(value);
          } else {
            this.form.influences.delete(value);
          }
          this.draw();
        },
        onInfluenceOther: (text) => {
          this.form.influenceOther = text;
          this.refreshSubmitState();
        },
        onEmotionToggle: (value, checked) => {
          if (checked) {
            this.form.emotions.add(value);
          } else {
            this.form.emotions.delete(value);
          }
          this.draw();
        },
        onEmotionOther: (text) => {
          this.form.emotionOther = text;
          this.refreshSubmitState();
        },
        onConfidenceChange: (level) => {
          this.form.confidence = level;
        },
        onSubmit: () => void this.submit(),
      },
    );
  }

  /** Redraw without rebuilding text inputs, so typing keeps focus. */
  private refreshSubmitState(): void {
    const submit = this.root.querySelector<HTMLButtonElement>('[data-role="submit"]');
    if (submit) {
      submit.disabled = this.requestInFlight;
    }
  }

  private async submit(): Promise<void> {
    if (!this.task || this.requestInFlight) {
      return;
    }
    let payload;
    try {
      payload = buildPayload(this.form, this.task.post_id);
    } catch (error) {
      this.notice = describe(error);
      this.draw();
      return;
    }
    this.requestInFlight = true;
    this.draw();
    const result = await this.client.submit(payload);
    this.requestInFlight = false;
    if (result.kind === "created") {
      this.submitted += 1;
      this.notice = "";
      await this.advance();
      return;
    }
    if (result.kind === "duplicate") {
      this.notice = "You already judged that post; moving on.";
      await this.advance();
      return;
    }
    this.notice = result.message;
    this.draw();
  }
}

function describe(error: unknown): string {
  return error instanceof Error ? error.message : String(error);
}

function renderLogin(root: HTMLElement, onStart: (token: string) => void): void {
  root.replaceChildren();
  const panel = document.createElement("section");
  panel.setAttribute("data-role", "login");
  const heading = document.createElement("h2");
  heading.textContent = "Annotator sign-in";
  const field = document.createElement("input");
  field.type = "password";
  field.placeholder = "access token";
  field.setAttribute("data-role", "token");
  const button = document.createElement("button");
  button.textContent = "Start annotating";
  button.setAttribute("data-role", "login-submit");
  button.addEventListener("click", () => {
    const token = field.value.trim();
    if (token) {
      onStart(token);
    }
  });
  panel.append(heading, field, button);
  root.append(panel);
}

export function bootstrap(root: HTMLElement, baseUrl: string): void {
  renderLogin(root, (token) => {
    const session = new AnnotationSession(root, { baseUrl, token });
    void session.start();
  });
}

declare global {
  interface Window {
    ANNOTATION_API_BASE?: string;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const root = document.getElementById("app") as HTMLElement;
  bootstrap(root, window.ANNOTATION_API_BASE ?? "");
}
