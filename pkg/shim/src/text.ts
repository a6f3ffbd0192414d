/** Tokenization and identifier helpers shared by the backend and trainer. */

const WORD_RE = /[a-z][a-z0-9]*|[0-9]+/g;

/** Lowercase word tokens of a natural-language string. */
export function tokenize(text: string): string[] {
  return text.toLowerCase().match(WORD_RE) ?? [];
}

const STOPWORDS = new Set([
  "a",
  "an",
  "and",
  "are",
  "as",
  "at",
  "be",
  "by",
  "for",
  "from",
  "given",
  "if",
  "in",
  "into",
  "is",
  "it",
  "of",
  "on",
  "or",
  "that",
  "the",
  "their",
  "this",
  "to",
  "when",
  "with",
]);

/** Content words of a description, in order, stopwords dropped. */
export function contentTokens(text: string): string[] {
  const words = tokenize(text);
  const kept = words.filter((w) => !STOPWORDS.has(w) && !/^[0-9]+$/.test(w));
  return kept.length > 0 ? kept : words;
}

export type NamingConvention = "snake" | "camel";

/** Join tokens into an identifier following the requested convention. */
export function joinName(tokens: readonly string[], convention: NamingConvention): string {
  const parts = tokens.filter((t) => t.length > 0);
  if (parts.length === 0) return "generated_name";
  const safe = parts.map((t) => t.replace(/[^a-z0-9]/g, "")).filter((t) => t.length > 0);
  if (safe.length === 0) return "generated_name";
  // identifiers cannot open with a digit
  if (/^[0-9]/.test(safe[0]!)) safe[0] = `v${safe[0]!}`;
  if (convention === "snake") return safe.join("_");
  return safe[0]! + safe.slice(1).map((t) => t[0]!.toUpperCase() + t.slice(1)).join("");
}

/** Convention of an existing identifier; underscores win over case. */
export function conventionOf(name: string): NamingConvention {
  if (name.includes("_")) return "snake";
  return /[A-Z]/.test(name.slice(1)) ? "camel" : "snake";
}

/** FNV-1a over UTF-16 code units; stable across runs and platforms. */
export function fnv1a(text: string): number {
  let h = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 0x01000193);
  }
  return h >>> 0;
}
