/**
 * Wire protocol v1 request shapes, mirrored from the JSON schemas shipped
 * with the attack package (src/nameforge/wire_schemas). Requests are
 * validated strictly: unknown keys are rejected, all keys are required,
 * signature is string-or-null.
 */
import { z } from "zod";

export const WIRE_VERSION = "v1";

export const generateRequestSchema = z
  .object({
    mode: z.enum(["fd", "fd_sig"]),
    language: z.enum(["java", "python"]),
    description: z.string(),
    signature: z.string().nullable(),
  })
  .strict();

export const generateNameRequestSchema = z
  .object({
    prompt: z.string(),
  })
  .strict();

export type GenerateRequest = z.infer<typeof generateRequestSchema>;
export type GenerateNameRequest = z.infer<typeof generateNameRequestSchema>;

export interface GenerateResponse {
  code: string;
}

export interface GenerateNameResponse {
  name: string;
}

export interface ErrorResponse {
  error: string;
}
