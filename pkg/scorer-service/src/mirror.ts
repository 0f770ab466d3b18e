/**
 * Text-level re-implementation of the toolchain's built-in rule scorer.
 *
 * The toolchain computes these scores from a parsed test prefix and the
 * focal method's parsed signature. A scoring service only ever sees the
 * rendered request text, so this module recomputes the same rules from
 * strings. Conformance tests demand exact equality, which pins the
 * constants and the rounding here to the toolchain's.
 */

import { RequestText } from "./tokens";

const THROW_TOKENS = new Set(["@throws", "throws", "exception"]);
const INDEX_PARAM_NAMES = new Set(["i", "index", "pos"]);
const DOC_TOKEN = /@?[a-z0-9_]+/g;
const STRUCTURAL = /^assert(True|False|NotNull|Null)\s*\(/;
const EQUALS = /^assertEquals\s*\(/;

export interface MirrorRequest extends RequestText {
  task: "exception" | "assertion";
}

export function mirrorScore(vocab: Record<string, string[]>, req: MirrorRequest): number {
  if (req.task === "exception") {
    return exceptionScore(req);
  }
  return assertionScore(vocab, req);
}

function round6(x: number): number {
  return Math.round(x * 1e6) / 1e6;
}

function exceptionScore(req: MirrorRequest): number {
  let score = 0.2;
  if (docMentionsThrowing(req.docstring ?? "")) score += 0.5;
  if (hasSuspiciousArgument(req.prefix ?? "", req.signature ?? "")) score += 0.2;
  return round6(Math.min(1.0, score));
}

function docMentionsThrowing(docstring: string): boolean {
  const tokens = docstring.toLowerCase().match(DOC_TOKEN) ?? [];
  return tokens.some((t) => THROW_TOKENS.has(t));
}

function hasSuspiciousArgument(prefix: string, signature: string): boolean {
  // a null passed as any call argument
  if (/[(,]\s*null\s*[,)]/.test(prefix)) return true;

  // a negative literal passed to the focal method in an index-named slot
  const focal = parseSignature(signature);
  if (focal === null) return false;
  for (const args of callsTo(prefix, focal.name)) {
    for (let p = 0; p < args.length && p < focal.params.length; p++) {
      if (/^-\d+L?$/i.test(args[p].trim()) && INDEX_PARAM_NAMES.has(focal.params[p].name)) {
        return true;
      }
    }
  }
  return false;
}

function assertionScore(vocab: Record<string, string[]>, req: MirrorRequest): number {
  const candidate = (req.candidate ?? "").trim();
  if (STRUCTURAL.test(candidate)) return 0.4;

  if (EQUALS.test(candidate)) {
    const open = candidate.indexOf("(");
    const inner = balancedInner(candidate, open);
    if (inner !== null) {
      const expected = splitTopLevel(inner)[0]?.trim() ?? "";
      // corpus constants first: mirrors the candidate builder, which
      // keeps the dictionary entry when a prefix value duplicates one
      const rank = vocabRank(vocab, expected);
      if (rank >= 0) return round6(0.3 + 0.2 / (1 + rank));
      if (expectedInPrefix(req.prefix ?? "", expected)) return 0.5;
    }
  }
  // not a shape the toolchain emits; score like a bare structural check
  return 0.4;
}

function vocabRank(vocab: Record<string, string[]>, expected: string): number {
  let best = -1;
  for (const entries of Object.values(vocab)) {
    const rank = entries.indexOf(expected);
    if (rank >= 0 && (best < 0 || rank < best)) best = rank;
  }
  return best;
}

function expectedInPrefix(prefix: string, expected: string): boolean {
  if (expected.startsWith('"')) {
    return prefix.includes(expected);
  }
  const pattern = new RegExp(
    "(?<![A-Za-z0-9_$.])" + escapeRegExp(expected) + "(?![A-Za-z0-9_$.])"
  );
  return pattern.test(prefix);
}

function escapeRegExp(text: string): string {
  return text.replace(/[.*+?^${}()|[\]\\]/g, "\\$&");
}

interface FocalSignature {
  name: string;
  params: { type: string; name: string }[];
}

export function parseSignature(signature: string): FocalSignature | null {
  const open = signature.indexOf("(");
  if (open < 0) return null;
  const head = signature.slice(0, open);
  const nameMatch = head.match(/([A-Za-z_$][A-Za-z0-9_$]*)\s*$/);
  if (nameMatch === null) return null;
  const inner = balancedInner(signature, open);
  if (inner === null) return null;

  const params: { type: string; name: string }[] = [];
  for (const piece of splitTopLevel(inner)) {
    const trimmed = piece.trim();
    if (trimmed === "") continue;
    const m = trimmed.match(/^(.*?)\s*([A-Za-z_$][A-Za-z0-9_$]*)$/);
    if (m === null) return null;
    params.push({ type: m[1].trim(), name: m[2] });
  }
  return { name: nameMatch[1], params };
}

/** Argument lists of every `name(...)` call found in the text. */
export function callsTo(text: string, name: string): string[][] {
  const out: string[][] = [];
  const caller = new RegExp("(?<![A-Za-z0-9_$])" + escapeRegExp(name) + "\\s*\\(", "g");
  let m: RegExpExecArray | null;
  while ((m = caller.exec(text)) !== null) {
    const open = m.index + m[0].length - 1;
    const inner = balancedInner(text, open);
    if (inner === null) continue;
    out.push(inner.trim() === "" ? [] : splitTopLevel(inner));
  }
  return out;
}

/** Text between the paren at `open` and its matching close, else null. */
function balancedInner(text: string, open: number): string | null {
  let depth = 0;
  let inString = false;
  for (let i = open; i < text.length; i++) {
    const ch = text[i];
    if (inString) {
      if (ch === "\\") i++;
      else if (ch === '"') inString = false;
      continue;
    }
    if (ch === '"') inString = true;
    else if (ch === "(") depth++;
    else if (ch === ")") {
      depth--;
      if (depth === 0) return text.slice(open + 1, i);
    }
  }
  return null;
}

/** Split on commas outside parens, angle brackets, and string literals. */
function splitTopLevel(text: string): string[] {
  const parts: string[] = [];
  let depth = 0;
  let angle = 0;
  let inString = false;
  let start = 0;
  for (let i = 0; i < text.length; i++) {
    const ch = text[i];
    if (inString) {
      if (ch === "\\") i++;
      else if (ch === '"') inString = false;
      continue;
    }
    if (ch === '"') inString = true;
    else if (ch === "(") depth++;
    else if (ch === ")") depth--;
    else if (ch === "<") angle++;
    else if (ch === ">" && angle > 0) angle--;
    else if (ch === "," && depth === 0 && angle === 0) {
      parts.push(text.slice(start, i));
      start = i + 1;
    }
  }
  parts.push(text.slice(start));
  return parts;
}
