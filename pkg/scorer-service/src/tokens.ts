/**
 * Feature extraction for the trainable baseline.
 *
 * Tokens are lowercased runs of word characters (whitespace and
 * punctuation split). Each field of a request gets its own namespace so
 * "index" in a signature and "index" in a prefix stay distinct features:
 * prefix tokens are bare, signature tokens get "sig:", docstring "doc:",
 * candidate "cand:". Two derived flags capture argument shapes that
 * tokenization alone loses (null arguments and negative literals).
 */

const WORD = /[a-z0-9_]+/g;

export function splitTokens(text: string): string[] {
  return text.toLowerCase().match(WORD) ?? [];
}

export interface RequestText {
  prefix?: string;
  signature?: string;
  docstring?: string;
  candidate?: string;
}

export function featurize(req: RequestText): Map<string, number> {
  const counts = new Map<string, number>();
  const bump = (key: string) => counts.set(key, (counts.get(key) ?? 0) + 1);

  for (const tok of splitTokens(req.prefix ?? "")) bump(tok);
  for (const tok of splitTokens(req.signature ?? "")) bump("sig:" + tok);
  for (const tok of splitTokens(req.docstring ?? "")) bump("doc:" + tok);
  if (req.candidate !== undefined) {
    for (const tok of splitTokens(req.candidate)) bump("cand:" + tok);
  }

  const prefix = req.prefix ?? "";
  if (/[(,]\s*null\s*[,)]/.test(prefix)) bump("flag:null-arg");
  if (/[(,]\s*-\d/.test(prefix)) bump("flag:negative-arg");
  return counts;
}
