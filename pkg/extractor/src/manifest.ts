import { readFile } from "node:fs/promises";

import { ExtractError } from "./types.js";

/**
 * Read a phrase manifest: one phrase per line, UTF-8. The table written
 * from it is keyed by these exact strings, so blanks and duplicates are
 * rejected rather than silently cleaned up.
 */
export async function readManifest(path: string): Promise<string[]> {
  let text: string;
  try {
    text = await readFile(path, "utf-8");
  } catch (err) {
    throw new ExtractError(`cannot read manifest ${path}`, { cause: err });
  }
  const lines = text.split("\n");
  if (lines.at(-1) === "") {
    lines.pop();
  }
  const phrases: string[] = [];
  const seen = new Set<string>();
  lines.forEach((raw, i) => {
    const phrase = raw.endsWith("\r") ? raw.slice(0, -1) : raw;
    if (phrase.trim() === "") {
      throw new ExtractError(`${path}:${i + 1}: blank manifest line`);
    }
    if (seen.has(phrase)) {
      throw new ExtractError(`${path}:${i + 1}: duplicate phrase '${phrase}'`);
    }
    seen.add(phrase);
    phrases.push(phrase);
  });
  if (phrases.length === 0) {
    throw new ExtractError(`manifest ${path} is empty`);
  }
  return phrases;
}
