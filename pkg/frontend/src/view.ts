/**
 * DOM rendering for the single-page annotation screen. Rendering is a
 * pure function of the passed state: the root element is rebuilt on
 * every call, and the influence/emotion/confidence sections exist in
 * the DOM only while the post is marked inspiring.
 */

import { FormState, InspiringChoice, completionErrors } from "./form.js";
import { EMOTION_OPTIONS, INFLUENCE_OPTIONS, Task } from "./schema.js";

export interface TaskScreenHandlers {
  onInspiringChange(choice: InspiringChoice): void;
  onInfluenceToggle(value: string, checked: boolean): void;
  onInfluenceOther(text: string): void;
  onEmotionToggle(value: string, checked: boolean): void;
  onEmotionOther(text: string): void;
  onConfidenceChange(level: "low" | "high"): void;
  onSubmit(): void;
}

export interface TaskScreenState {
  task: Task;
  form: FormState;
  guidelines: string;
  notice: string;
  requestInFlight: boolean;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text) {
    node.textContent = text;
  }
  return node;
}

function checkboxRow(
  name: string,
  value: string,
  label: string,
  checked: boolean,
  onToggle: (value: string, checked: boolean) => void,
): HTMLLabelElement {
  const row = el("label", { class: "choice" });
  const box = el("input", { type: "checkbox", name, value });
  box.checked = checked;
  box.addEventListener("change", () => onToggle(value, box.checked));
  row.append(box, document.createTextNode(` ${label}`));
  return row;
}

function otherField(
  placeholder: string,
  current: string,
  role: string,
  onInput: (text: string) => void,
): HTMLInputElement {
  const field = el("input", {
    type: "text",
    placeholder,
    "data-role": role,
  });
  field.value = current;
  field.addEventListener("input", () => onInput(field.value));
  return field;
}

export function renderTaskScreen(
  root: HTMLElement,
  state: TaskScreenState,
  handlers: TaskScreenHandlers,
): void {
  root.replaceChildren();
  const { task, form } = state;

  const guidelines = el("details", { "data-role": "guidelines" });
  guidelines.append(el("summary", {}, "Annotation guidelines"));
  const guidelineBody = el("pre", { class: "guidelines-text" });
  guidelineBody.textContent = state.guidelines;
  guidelines.append(guidelineBody);
  root.append(guidelines);

  const article = el("article", { "data-role": "post" });
  article.append(el("h2", {}, task.title || "(untitled post)"));
  const body = el("p", { class: "post-body" });
  body.textContent = task.body;
  article.append(body);
  root.append(article);

  if (state.notice) {
    root.append(el("p", { class: "notice", "data-role": "notice" }, state.notice));
  }

  const form_el = el("section", { "data-role": "questions" });
  const inspiringBlock = el("fieldset", { "data-role": "inspiring-section" });
  inspiringBlock.append(el("legend", {}, "Is this post inspiring?"));
  for (const choice of ["yes", "no"] as const) {
    const row = el("label", { class: "choice" });
    const radio = el("input", {
      type: "radio",
      name: "inspiring",
      value: choice,
      "data-role": `inspiring-${choice}`,
    });
    radio.checked = form.inspiring === choice;
    radio.addEventListener("change", () => handlers.onInspiringChange(choice));
    row.append(radio, document.createTextNode(` ${choice}`));
    inspiringBlock.append(row);
  }
  form_el.append(inspiringBlock);

  if (form.inspiring === "yes") {
    const influence = el("fieldset", { "data-role": "influence-section" });
    influence.append(el("legend", {}, "What influence did it have on you?"));
    for (const option of INFLUENCE_OPTIONS) {
      influence.append(
        checkboxRow(
          "influence",
          option.value,
          option.label,
          form.influences.has(option.value),
          handlers.onInfluenceToggle,
        ),
      );
    }
    influence.append(
      otherField(
        "other influence",
        form.influenceOther,
        "influence-other",
        handlers.onInfluenceOther,
      ),
    );
    form_el.append(influence);

    const emotion = el("fieldset", { "data-role": "emotion-section" });
    emotion.append(el("legend", {}, "Which emotions did it stir?"));
    for (const option of EMOTION_OPTIONS) {
      emotion.append(
        checkboxRow(
          "emotion",
          option,
          option,
          form.emotions.has(option),
          handlers.onEmotionToggle,
        ),
      );
    }
    emotion.append(
      otherField("other emotion", form.emotionOther, "emotion-other", handlers.onEmotionOther),
    );
    form_el.append(emotion);

    const confidence = el("fieldset", { "data-role": "confidence-section" });
    confidence.append(el("legend", {}, "How confident are you?"));
    for (const level of ["low", "high"] as const) {
      const row = el("label", { class: "choice" });
      const radio = el("input", {
        type: "radio",
        name: "confidence",
        value: level,
        "data-role": `confidence-${level}`,
      });
      radio.checked = form.confidence === level;
      radio.addEventListener("change", () => handlers.onConfidenceChange(level));
      row.append(radio, document.createTextNode(` ${level}`));
      confidence.append(row);
    }
    form_el.append(confidence);
  }

  const errors = completionErrors(form);
  if (form.inspiring !== "unset" && errors.length > 0) {
    const list = el("ul", { class: "errors", "data-role": "errors" });
    for (const message of errors) {
      list.append(el("li", {}, message));
    }
    form_el.append(list);
  }

  const submit = el("button", { "data-role": "submit" }, "Submit judgment");
  submit.disabled = state.requestInFlight || errors.length > 0;
  submit.addEventListener("click", () => handlers.onSubmit());
  form_el.append(submit);
  root.append(form_el);
}

export function renderDone(root: HTMLElement, submitted: number): void {
  root.replaceChildren();
  const panel = el("section", { "data-role": "done" });
  panel.append(el("h2", {}, "No tasks remaining"));
  panel.append(
    el("p", {}, `You submitted ${submitted} judgment${submitted === 1 ? "" : "s"}. Thank you!`),
  );
  root.append(panel);
}

export function renderError(root: HTMLElement, message: string, onRetry: () => void): void {
  root.replaceChildren();
  const panel = el("section", { "data-role": "error" });
  panel.append(el("h2", {}, "Something went wrong"));
  panel.append(el("p", {}, message));
  const retry = el("button", { "data-role": "retry" }, "Try again");
  retry.addEventListener("click", onRetry);
  panel.append(retry);
  root.append(panel);
}
