/**
 * Form state for one annotation screen and its translation into a wire
 * payload. Validation here mirrors the payload schema so incomplete
 * forms are blocked before any request is made.
 */

import { AnnotationPayload, annotationPayloadSchema } from "./schema.js";

export type InspiringChoice = "unset" | "yes" | "no";

export interface FormState {
  inspiring: InspiringChoice;
  influences: Set<string>;
  influenceOther: string;
  emotions: Set<string>;
  emotionOther: string;
  confidence: "low" | "high";
}

export function emptyForm(): FormState {
  return {
    inspiring: "unset",
    influences: new Set(),
    influenceOther: "",
    emotions: new Set(),
    emotionOther: "",
    confidence: "high",
  };
}

function collected(selected: Set<string>, other: string): string[] {
  const values = [...selected];
  const extra = other.trim();
  if (extra.length > 0) {
    values.push(extra);
  }
  return values;
}

/**
 * Human-readable reasons the form cannot be submitted yet; empty when
 * it is complete.
 */
export function completionErrors(state: FormState): string[] {
  const errors: string[] = [];
  if (state.inspiring === "unset") {
    errors.push("answer whether the post is inspiring");
    return errors;
  }
  if (state.inspiring === "yes") {
    if (collected(state.influences, state.influenceOther).length === 0) {
      errors.push("pick at least one influence or describe one");
    }
    if (collected(state.emotions, state.emotionOther).length === 0) {
      errors.push("pick at least one emotion or describe one");
    }
  }
  return errors;
}

/**
 * Build the request body for a completed form. Throws if called while
 * completionErrors() is non-empty or the result fails schema
 * validation, so an invalid payload can never leave the client.
 */
export function buildPayload(state: FormState, postId: string): AnnotationPayload {
  const errors = completionErrors(state);
  if (errors.length > 0) {
    throw new Error(`form is incomplete: ${errors.join("; ")}`);
  }
  const inspiring = state.inspiring === "yes";
  const payload = {
    post_id: postId,
    inspiring,
    influences: inspiring ? collected(state.influences, state.influenceOther) : [],
    emotions: inspiring ? collected(state.emotions, state.emotionOther) : [],
    confidence: state.confidence,
    submitted_at: Math.floor(Date.now() / 1000),
  };
  return annotationPayloadSchema.parse(payload);
}
