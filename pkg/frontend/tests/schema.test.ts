import { describe, expect, it } from "vitest";

import {
  ackSchema,
  annotationPayloadSchema,
  taskSchema,
} from "../src/schema.js";

function validInspiring() {
  return {
    post_id: "p1",
    inspiring: true,
    influences: ["motivation_to_act"],
    emotions: ["admiration"],
    confidence: "high",
    submitted_at: 1_700_000_000,
  };
}

function validNonInspiring() {
  return {
    post_id: "p2",
    inspiring: false,
    influences: [],
    emotions: [],
    confidence: "low",
    submitted_at: 1_700_000_000,
  };
}

describe("annotation payload schema", () => {
  it("accepts an inspiring judgment with influences and emotions", () => {
    const parsed = annotationPayloadSchema.parse(validInspiring());
    expect(parsed.inspiring).toBe(true);
    expect(parsed.influences).toEqual(["motivation_to_act"]);
  });

  it("accepts a non-inspiring judgment with empty follow-ups", () => {
    const parsed = annotationPayloadSchema.parse(validNonInspiring());
    expect(parsed.inspiring).toBe(false);
    expect(parsed.emotions).toEqual([]);
  });

  it("rejects influences attached to a non-inspiring judgment", () => {
    const payload = { ...validNonInspiring(), influences: ["feel_good"] };
    const result = annotationPayloadSchema.safeParse(payload);
    expect(result.success).toBe(false);
  });

  it("rejects emotions attached to a non-inspiring judgment", () => {
    const payload = { ...validNonInspiring(), emotions: ["gratitude"] };
    expect(annotationPayloadSchema.safeParse(payload).success).toBe(false);
  });

  it("rejects an inspiring judgment without influences", () => {
    const payload = { ...validInspiring(), influences: [] };
    expect(annotationPayloadSchema.safeParse(payload).success).toBe(false);
  });

  it("rejects an inspiring judgment without emotions", () => {
    const payload = { ...validInspiring(), emotions: [] };
    expect(annotationPayloadSchema.safeParse(payload).success).toBe(false);
  });

  it("accepts free-text influence and emotion entries", () => {
    const payload = {
      ...validInspiring(),
      influences: ["it reminded me of my coach"],
      emotions: ["awe"],
    };
    expect(annotationPayloadSchema.safeParse(payload).success).toBe(true);
  });

  it("rejects blank influence entries", () => {
    const payload = { ...validInspiring(), influences: ["   "] };
    expect(annotationPayloadSchema.safeParse(payload).success).toBe(false);
  });

  it("rejects confidence values outside low/high", () => {
    const payload = { ...validInspiring(), confidence: "medium" };
    expect(annotationPayloadSchema.safeParse(payload).success).toBe(false);
  });

  it("rejects a missing post id", () => {
    const payload = { ...validInspiring(), post_id: "" };
    expect(annotationPayloadSchema.safeParse(payload).success).toBe(false);
  });

  it("rejects fractional timestamps", () => {
    const payload = { ...validInspiring(), submitted_at: 12.5 };
    expect(annotationPayloadSchema.safeParse(payload).success).toBe(false);
  });

  it("rejects unknown extra fields", () => {
    const payload = { ...validInspiring(), mood: "great" };
    expect(annotationPayloadSchema.safeParse(payload).success).toBe(false);
  });
});

describe("task and ack schemas", () => {
  it("parses a task with post id, title, and body", () => {
    const task = taskSchema.parse({ post_id: "p9", title: "hello", body: "text" });
    expect(task.post_id).toBe("p9");
  });

  it("rejects a task without a body", () => {
    expect(taskSchema.safeParse({ post_id: "p9", title: "hello" }).success).toBe(false);
  });

  it("parses a submission acknowledgement", () => {
    const ack = ackSchema.parse({ post_id: "p1", annotator_id: "alice", total_records: 4 });
    expect(ack.total_records).toBe(4);
  });
});
