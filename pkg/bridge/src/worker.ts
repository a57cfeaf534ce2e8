#!/usr/bin/env node
/**
 * Scorer bridge worker: serves duration prediction and QE scoring over
 * newline-delimited JSON on stdio. One response line per request line;
 * correlation by id. Run directly: `node dist/worker.js`.
 */

import { createInterface } from "node:readline";

import { handleLine } from "./protocol.js";

const reader = createInterface({ input: process.stdin, terminal: false });

reader.on("line", (line: string) => {
  if (line.trim().length === 0) {
    return;
  }
  process.stdout.write(JSON.stringify(handleLine(line)) + "\n");
});

reader.on("close", () => {
  process.exit(0);
});
