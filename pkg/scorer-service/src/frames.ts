/**
 * One request frame per line, one reply frame per line. A reply carries
 * either a score or an error, never both. Malformed input gets an error
 * reply with the request's id when one could be recovered, id null when
 * not; the handler itself never throws.
 */

import { ScoreRequest, Task } from "./model";

export interface Reply {
  id: unknown;
  score?: number;
  error?: string;
}

export type ScoreFn = (req: ScoreRequest) => number;

export function handleLine(line: string, score: ScoreFn): Reply | null {
  const trimmed = line.trim();
  if (trimmed === "") return null;

  let raw: unknown;
  try {
    raw = JSON.parse(trimmed);
  } catch {
    return { id: null, error: "parse error: frame is not valid JSON" };
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    return { id: null, error: "frame is not a JSON object" };
  }
  const frame = raw as Record<string, unknown>;
  if (!("id" in frame)) {
    return { id: null, error: "frame has no id" };
  }
  const id = frame.id;

  if (frame.v !== undefined && frame.v !== 1) {
    return { id, error: `unsupported protocol version ${JSON.stringify(frame.v)}` };
  }
  if (frame.task !== "exception" && frame.task !== "assertion") {
    return { id, error: `unknown task ${JSON.stringify(frame.task)}` };
  }
  const task = frame.task as Task;

  const text: Record<string, string> = {};
  for (const field of ["prefix", "signature", "docstring"]) {
    const value = frame[field];
    if (value !== undefined && typeof value !== "string") {
      return { id, error: `field "${field}" is not a string` };
    }
    text[field] = (value as string | undefined) ?? "";
  }
  if (task === "assertion" && typeof frame.candidate !== "string") {
    return { id, error: "assertion frame has no candidate" };
  }

  const request: ScoreRequest = {
    task,
    prefix: text.prefix,
    signature: text.signature,
    docstring: text.docstring,
  };
  if (typeof frame.candidate === "string") request.candidate = frame.candidate;

  let value: number;
  try {
    value = score(request);
  } catch (err) {
    return { id, error: err instanceof Error ? err.message : String(err) };
  }
  if (!Number.isFinite(value) || value < 0 || value > 1) {
    return { id, error: `scorer produced an invalid score ${value}` };
  }
  return { id, score: value };
}

export function replyToLine(reply: Reply): string {
  return JSON.stringify(reply) + "\n";
}
