/**
 * Deterministic scoring models behind the bridge protocol.
 *
 * The duration model maps text length to speech seconds through fixed
 * per-language speaking rates; the QE model scores cross-text similarity
 * through character trigram overlap on a 0-5 scale. Both are lightweight
 * stand-ins with the same interface contract a neural backend would have:
 * deterministic, monotone duration in text length, identity pairs scoring
 * above unrelated ones.
 */

export const SUPPORTED_LANGUAGES = ["en", "de", "es", "ru", "zh"] as const;
export type Language = (typeof SUPPORTED_LANGUAGES)[number];

// chars/s; zh is slower per character since each carries a full syllable
const CHARS_PER_SECOND: Record<Language, number> = {
  en: 14.0,
  de: 13.0,
  es: 14.5,
  ru: 12.5,
  zh: 5.5,
};

const PAUSE_FLOOR_SECONDS = 0.25;

export function isSupportedLanguage(value: string): value is Language {
  return (SUPPORTED_LANGUAGES as readonly string[]).includes(value);
}

function nonWhitespaceLength(text: string): number {
  return text.replace(/\s/gu, "").length;
}

export function predictDuration(text: string, language: Language): number {
  return PAUSE_FLOOR_SECONDS + nonWhitespaceLength(text) / CHARS_PER_SECOND[language];
}

function trigrams(text: string): Set<string> {
  const normalized = text
    .toLowerCase()
    .replace(/[^\p{L}\p{N}\s]/gu, "")
    .split(/\s+/u)
    .filter((w) => w.length > 0)
    .join(" ");
  const padded = `  ${normalized}  `;
  const grams = new Set<string>();
  for (let i = 0; i + 3 <= padded.length; i++) {
    grams.add(padded.slice(i, i + 3));
  }
  return grams;
}

/** Trigram Dice similarity mapped onto the 0-5 scale. */
export function scoreQuality(sourceText: string, translatedText: string): number {
  const a = trigrams(sourceText);
  const b = trigrams(translatedText);
  if (a.size === 0 || b.size === 0) {
    return 0;
  }
  let shared = 0;
  for (const gram of a) {
    if (b.has(gram)) {
      shared += 1;
    }
  }
  return (5 * 2 * shared) / (a.size + b.size);
}
