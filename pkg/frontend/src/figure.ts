import { z } from "zod";

export const figureStyles = ["overlay", "panel", "kernel"] as const;
export type FigureStyle = (typeof figureStyles)[number];

export const normalizations = ["first-peak", "none"] as const;
export type Normalization = (typeof normalizations)[number];

/** One input curve: a CSV path plus the label shown in the legend. */
export interface FigureInput {
  role: string;
  path: string;
}

/** A single figure to render. */
export interface FigureJob {
  inputs: FigureInput[];
  output: string;
  style: FigureStyle;
  normalization: Normalization;
}

export const figureJobSchema = z
  .object({
    inputs: z
      .array(z.object({ role: z.string().min(1), path: z.string().min(1) }))
      .min(1),
    output: z.string().min(1),
    style: z.enum(figureStyles),
    normalization: z.enum(normalizations),
  })
  .superRefine((job, ctx) => {
    const roles = new Set(job.inputs.map((i) => i.role));
    if (roles.size !== job.inputs.length) {
      ctx.addIssue({ code: "custom", message: "input roles must be unique" });
    }
    if (job.style === "kernel" && job.inputs.length !== 1) {
      ctx.addIssue({
        code: "custom",
        message: "kernel style takes exactly one input",
      });
    }
    if (job.style === "kernel" && job.normalization === "first-peak") {
      ctx.addIssue({
        code: "custom",
        message: "first-peak normalization applies to spectrum styles only",
      });
    }
  });

/** Validation failure or aggregated per-file input failure. */
export class FigureError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "FigureError";
  }
}

/** Check an untyped job description and return it typed. */
export function validateJob(raw: unknown): FigureJob {
  const res = figureJobSchema.safeParse(raw);
  if (!res.success) {
    const lines = res.error.issues.map((i) =>
      i.path.length > 0 ? `${i.path.join(".")}: ${i.message}` : i.message,
    );
    throw new FigureError(`invalid figure job:\n${lines.join("\n")}`);
  }
  return res.data;
}
