import { readFile } from "node:fs/promises";

import { ExtractError } from "./types.js";

/** In-memory token -> vector map loaded from a .vec text file. */
export interface VectorFile {
  dimension: number;
  size: number;
  get(token: string): Float64Array | undefined;
}

export interface PhraseLookup {
  vector?: Float64Array;
  /** Tokens without an entry; non-fatal as long as some token is known. */
  missingTokens: string[];
  /** Set when no vector can be produced at all. */
  skipReason?: string;
}

/**
 * Load a .vec file: optional "count dimension" first line, then one
 * token per line followed by its components, all space separated.
 */
export async function loadVectorFile(path: string): Promise<VectorFile> {
  let text: string;
  try {
    text = await readFile(path, "utf-8");
  } catch (err) {
    throw new ExtractError(`cannot read vector file ${path}`, { cause: err });
  }
  const lines = text.split("\n");
  if (lines.at(-1) === "") {
    lines.pop();
  }
  const entries = new Map<string, Float64Array>();
  let dimension: number | undefined;
  let start = 0;
  if (lines.length > 0) {
    const head = lines[0].trim().split(/\s+/);
    if (head.length === 2 && /^\d+$/.test(head[0]) && /^\d+$/.test(head[1])) {
      dimension = Number(head[1]);
      if (dimension < 1) {
        throw new ExtractError(`${path}:1: declared dimension must be positive`);
      }
      start = 1;
    }
  }
  for (let i = start; i < lines.length; i++) {
    const lineno = i + 1;
    const fields = lines[i].trim().split(/\s+/);
    if (fields.length < 2 || fields[0] === "") {
      throw new ExtractError(`${path}:${lineno}: expected a token and its components`);
    }
    const token = fields[0];
    if (dimension === undefined) {
      dimension = fields.length - 1;
    } else if (fields.length - 1 !== dimension) {
      throw new ExtractError(
        `${path}:${lineno}: expected ${dimension} components, got ${fields.length - 1}`,
      );
    }
    if (entries.has(token)) {
      throw new ExtractError(`${path}:${lineno}: duplicate token '${token}'`);
    }
    const vector = new Float64Array(dimension);
    for (let j = 0; j < dimension; j++) {
      const value = Number(fields[j + 1]);
      if (!Number.isFinite(value)) {
        throw new ExtractError(
          `${path}:${lineno}: component ${j + 1} is not a finite number: '${fields[j + 1]}'`,
        );
      }
      vector[j] = value;
    }
    entries.set(token, vector);
  }
  if (entries.size === 0 || dimension === undefined) {
    throw new ExtractError(`vector file ${path} holds no tokens`);
  }
  return { dimension, size: entries.size, get: (token) => entries.get(token) };
}

/**
 * Embed one phrase from static vectors. Default mode averages the
 * vectors of the phrase's known tokens and lists unknown ones; a phrase
 * whose every token is unknown, or whose average cancels to a zero
 * vector, cannot be embedded and carries a skip reason instead. Whole
 * phrase mode looks the phrase itself up as one token, spaces written
 * as underscores, the usual convention in phrase-augmented .vec files.
 */
export function phraseVector(
  vf: VectorFile,
  phrase: string,
  wholePhrase: boolean,
): PhraseLookup {
  if (wholePhrase) {
    const vector = vf.get(phrase.replaceAll(" ", "_"));
    if (vector === undefined) {
      return { missingTokens: [], skipReason: "phrase is not in the vocabulary" };
    }
    return { vector: Float64Array.from(vector), missingTokens: [] };
  }
  const tokens = phrase.split(/\s+/).filter((t) => t !== "");
  const sum = new Float64Array(vf.dimension);
  const missingTokens: string[] = [];
  let known = 0;
  for (const token of tokens) {
    const v = vf.get(token);
    if (v === undefined) {
      missingTokens.push(token);
      continue;
    }
    for (let j = 0; j < vf.dimension; j++) {
      sum[j] += v[j];
    }
    known += 1;
  }
  if (known === 0) {
    return { missingTokens, skipReason: "no token is in the vocabulary" };
  }
  for (let j = 0; j < vf.dimension; j++) {
    sum[j] /= known;
  }
  if (sum.every((x) => x === 0)) {
    return { missingTokens, skipReason: "token average is the zero vector" };
  }
  return { vector: sum, missingTokens };
}
