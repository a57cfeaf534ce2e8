/**
 * JSON-lines request handling.
 *
 * Request:  {"op": "duration"|"qe"|"capabilities", "id": <int>, "payload": {...}}
 * Response: {"id": <int>, "ok": true, "result": {...}}
 *        or {"id": <int>, "ok": false, "error": {"code", "message"}}
 *
 * Error codes: UNSUPPORTED_LANGUAGE, EMPTY_TEXT, MODEL_ERROR, BAD_REQUEST.
 */

import {
  SUPPORTED_LANGUAGES,
  isSupportedLanguage,
  predictDuration,
  scoreQuality,
} from "./models.js";

export type ErrorCode =
  | "UNSUPPORTED_LANGUAGE"
  | "EMPTY_TEXT"
  | "MODEL_ERROR"
  | "BAD_REQUEST";

export interface BridgeResponse {
  id: number | null;
  ok: boolean;
  result?: Record<string, unknown>;
  error?: { code: ErrorCode; message: string };
}

function failure(id: number | null, code: ErrorCode, message: string): BridgeResponse {
  return { id, ok: false, error: { code, message } };
}

function success(id: number, result: Record<string, unknown>): BridgeResponse {
  return { id, ok: true, result };
}

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

export function handleLine(line: string): BridgeResponse {
  let message: unknown;
  try {
    message = JSON.parse(line);
  } catch {
    return failure(null, "BAD_REQUEST", "invalid JSON line");
  }
  if (!isRecord(message)) {
    return failure(null, "BAD_REQUEST", "request must be a JSON object");
  }
  return handleRequest(message);
}

export function handleRequest(message: Record<string, unknown>): BridgeResponse {
  const id = message["id"];
  if (typeof id !== "number" || !Number.isInteger(id)) {
    return failure(null, "BAD_REQUEST", "request must carry an integer id");
  }
  const op = message["op"];
  const payload = isRecord(message["payload"]) ? message["payload"] : {};

  switch (op) {
    case "capabilities":
      return success(id, { languages: [...SUPPORTED_LANGUAGES], qe: true });
    case "duration":
      return handleDuration(id, payload);
    case "qe":
      return handleQe(id, payload);
    default:
      return failure(id, "BAD_REQUEST", `unknown op ${JSON.stringify(op)}`);
  }
}

function handleDuration(id: number, payload: Record<string, unknown>): BridgeResponse {
  const text = payload["text"];
  const language = payload["language"];
  if (typeof text !== "string" || typeof language !== "string") {
    return failure(id, "BAD_REQUEST", "duration payload needs text and language");
  }
  if (text.trim().length === 0) {
    return failure(id, "EMPTY_TEXT", "cannot predict duration for empty text");
  }
  if (!isSupportedLanguage(language)) {
    return failure(id, "UNSUPPORTED_LANGUAGE", `no model for ${JSON.stringify(language)}`);
  }
  return success(id, { seconds: predictDuration(text, language) });
}

function handleQe(id: number, payload: Record<string, unknown>): BridgeResponse {
  const fields = ["source_text", "translated_text", "source_language", "target_language"] as const;
  for (const field of fields) {
    if (typeof payload[field] !== "string") {
      return failure(id, "BAD_REQUEST", `qe payload needs string ${field}`);
    }
  }
  const sourceText = payload["source_text"] as string;
  const translatedText = payload["translated_text"] as string;
  if (sourceText.trim().length === 0 || translatedText.trim().length === 0) {
    return failure(id, "EMPTY_TEXT", "cannot score empty text");
  }
  for (const field of ["source_language", "target_language"] as const) {
    if (!isSupportedLanguage(payload[field] as string)) {
      return failure(id, "UNSUPPORTED_LANGUAGE", `no model for ${JSON.stringify(payload[field])}`);
    }
  }
  return success(id, { score: scoreQuality(sourceText, translatedText) });
}
