import { writeFile } from "node:fs/promises";
import { basename } from "node:path";

import { embedBatch } from "./endpoint.js";
import { writeTable } from "./jsonl.js";
import { readManifest } from "./manifest.js";
import { applyTemplate, checkTemplate } from "./template.js";
import {
  ExtractError,
  type ExtractorSpec,
  type ExtractResult,
  type SkipEntry,
  validateSpec,
} from "./types.js";
import { loadVectorFile, phraseVector } from "./vectors.js";

export function modelIdFor(spec: ExtractorSpec): string {
  let id: string;
  if (spec.modelKind === "static-vectors") {
    id = `static:${basename(spec.checkpoint)}:${spec.wholePhrase ? "phrase" : "avg"}`;
  } else {
    id = `${spec.modelKind}:${spec.checkpoint}`;
  }
  if (spec.template !== undefined) {
    id += `:template=${spec.template}`;
  }
  return id;
}

type Embedded = readonly [string, ArrayLike<number>];

async function staticRecords(
  spec: ExtractorSpec,
  phrases: string[],
  inputs: string[],
  skips: SkipEntry[],
): Promise<{ dimension: number; records: Embedded[] }> {
  const vf = await loadVectorFile(spec.checkpoint);
  const records: Embedded[] = [];
  phrases.forEach((phrase, i) => {
    const { vector, skipReason } = phraseVector(vf, inputs[i], spec.wholePhrase);
    if (vector === undefined) {
      skips.push({ phrase, reason: skipReason ?? "not embeddable" });
    } else {
      records.push([phrase, vector]);
    }
  });
  return { dimension: vf.dimension, records };
}

async function serviceRecords(
  spec: ExtractorSpec,
  phrases: string[],
  inputs: string[],
  skips: SkipEntry[],
): Promise<{ dimension: number; records: Embedded[] }> {
  const endpoint = spec.endpoint as string;
  const modelId = spec.checkpoint;
  let dimension: number | undefined;
  const records: Embedded[] = [];
  for (let off = 0; off < inputs.length; off += spec.batchSize) {
    const batch = inputs.slice(off, off + spec.batchSize);
    const res = await embedBatch(endpoint, modelId, batch);
    if (dimension === undefined) {
      dimension = res.dimension;
    } else if (res.dimension !== dimension) {
      throw new ExtractError(
        `service changed dimension mid-run: ${dimension} then ${res.dimension}`,
      );
    }
    res.vectors.forEach((vector, i) => {
      const phrase = phrases[off + i];
      if (vector === null) {
        skips.push({ phrase, reason: "service could not embed the phrase" });
      } else {
        records.push([phrase, vector]);
      }
    });
  }
  return { dimension: dimension as number, records };
}

/**
 * Turn a phrase manifest into an embedding table file. Records keep
 * manifest order and are keyed by the manifest phrase even when a
 * template decorated the text the model saw. Phrases the model cannot
 * embed are collected into a skip report next to the table instead of
 * failing the run.
 */
export async function extract(
  spec: ExtractorSpec,
  manifestPath: string,
  outPath: string,
): Promise<ExtractResult> {
  validateSpec(spec);
  if (spec.template !== undefined) {
    checkTemplate(spec.template);
  }
  const phrases = await readManifest(manifestPath);
  const inputs = phrases.map((p) => applyTemplate(spec.template, p));
  const skips: SkipEntry[] = [];
  const { dimension, records } =
    spec.modelKind === "static-vectors"
      ? await staticRecords(spec, phrases, inputs, skips)
      : await serviceRecords(spec, phrases, inputs, skips);
  const modelId = modelIdFor(spec);
  const count = await writeTable(outPath, modelId, dimension, records);
  let skipReportPath: string | undefined;
  if (skips.length > 0) {
    skipReportPath = outPath + ".skips.json";
    const report = { model_id: modelId, count: skips.length, skips };
    await writeFile(skipReportPath, JSON.stringify(report, null, 2) + "\n", "utf-8");
  }
  return { modelId, dimension, records: count, skips, outPath, skipReportPath };
}
