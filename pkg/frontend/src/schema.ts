/**
 * Wire formats shared with the annotation service, encoded as zod
 * schemas so every outgoing payload and incoming response is checked at
 * the boundary.
 */

import { z } from "zod";

/** Canonical influence options offered as checkboxes. */
export const INFLUENCE_OPTIONS = [
  { value: "motivation_to_act", label: "It motivated me to act" },
  { value: "feel_good", label: "It made me feel good" },
  { value: "no_effect", label: "It had no effect on me" },
] as const;

/** Emotion options solicited explicitly; free text covers the rest. */
export const EMOTION_OPTIONS = [
  "admiration",
  "gratitude",
  "curiosity",
  "optimism",
  "neutral",
] as const;

const nonEmptyTrimmed = z
  .string()
  .refine((s) => s.trim().length > 0, { message: "must not be blank" });

/**
 * One submitted judgment. Mirrors the server-side record invariants: a
 * non-inspiring judgment carries no influences or emotions, an
 * inspiring one needs at least one of each, and confidence is a
 * two-level toggle.
 */
export const annotationPayloadSchema = z
  .strictObject({
    post_id: nonEmptyTrimmed,
    inspiring: z.boolean(),
    influences: z.array(nonEmptyTrimmed),
    emotions: z.array(nonEmptyTrimmed),
    confidence: z.enum(["low", "high"]),
    submitted_at: z.number().int().nonnegative(),
  })
  .superRefine((payload, ctx) => {
    if (!payload.inspiring) {
      if (payload.influences.length > 0) {
        ctx.addIssue({
          code: "custom",
          path: ["influences"],
          message: "a non-inspiring judgment cannot list influences",
        });
      }
      if (payload.emotions.length > 0) {
        ctx.addIssue({
          code: "custom",
          path: ["emotions"],
          message: "a non-inspiring judgment cannot list emotions",
        });
      }
      return;
    }
    if (payload.influences.length === 0) {
      ctx.addIssue({
        code: "custom",
        path: ["influences"],
        message: "pick at least one influence",
      });
    }
    if (payload.emotions.length === 0) {
      ctx.addIssue({
        code: "custom",
        path: ["emotions"],
        message: "pick at least one emotion",
      });
    }
  });

export type AnnotationPayload = z.infer<typeof annotationPayloadSchema>;

/** Task offered by GET /tasks/next. */
export const taskSchema = z.object({
  post_id: nonEmptyTrimmed,
  title: z.string(),
  body: z.string(),
});

export type Task = z.infer<typeof taskSchema>;

/** Acknowledgment returned by POST /annotations. */
export const ackSchema = z.object({
  post_id: z.string(),
  annotator_id: z.string(),
  total_records: z.number().int().nonnegative(),
});

export type Ack = z.infer<typeof ackSchema>;

/** Body of GET /guidelines. */
export const guidelinesSchema = z.object({ guidelines: z.string() });
