import { parseArgs } from "node:util";

import { extract } from "./extract.js";
import { checkTemplate } from "./template.js";
import {
  ExtractError,
  type ExtractorSpec,
  type ModelKind,
  validateSpec,
} from "./types.js";

export const ENDPOINT_ENV = "EMBED_ENDPOINT";

const USAGE = `usage: indiv-extract --model KIND --checkpoint ID --manifest PATH --out PATH
                     [--template "..."] [--batch N] [--endpoint URL]
                     [--device NAME] [--whole-phrase]

  --model       clip-text | sentence-transformer | static-vectors
  --checkpoint  service model identifier, or .vec file for static-vectors
  --manifest    phrase list, one per line
  --out         embedding table to write (JSON Lines)
  --template    phrase template with one {} slot (default: bare phrase)
  --batch       phrases per service request (default 64)
  --endpoint    embedding service base URL (default $${ENDPOINT_ENV})
  --device      advisory device preference (default auto)
  --whole-phrase  static-vectors: look up "2 apples" as the token 2_apples`;

function fail(message: string): never {
  throw new ExtractError(message);
}

export async function runCli(argv: string[]): Promise<number> {
  let spec: ExtractorSpec;
  let manifest: string;
  let out: string;
  try {
    const { values } = parseArgs({
      args: argv,
      options: {
        model: { type: "string" },
        checkpoint: { type: "string" },
        manifest: { type: "string" },
        out: { type: "string" },
        template: { type: "string" },
        batch: { type: "string" },
        endpoint: { type: "string" },
        device: { type: "string" },
        "whole-phrase": { type: "boolean" },
        help: { type: "boolean", short: "h" },
      },
    });
    if (values.help) {
      console.log(USAGE);
      return 0;
    }
    for (const name of ["model", "checkpoint", "manifest", "out"] as const) {
      if (values[name] === undefined) {
        fail(`--${name} is required`);
      }
    }
    const batch = values.batch === undefined ? 64 : Number(values.batch);
    if (!Number.isInteger(batch) || batch < 1) {
      fail(`--batch must be a positive integer, got '${values.batch}'`);
    }
    spec = {
      modelKind: values.model as ModelKind,
      checkpoint: values.checkpoint as string,
      batchSize: batch,
      device: values.device ?? "auto",
      template: values.template,
      endpoint: values.endpoint ?? process.env[ENDPOINT_ENV],
      wholePhrase: values["whole-phrase"] ?? false,
    };
    validateSpec(spec);
    if (spec.template !== undefined) {
      checkTemplate(spec.template);
    }
    manifest = values.manifest as string;
    out = values.out as string;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    console.error(USAGE);
    return 1;
  }
  try {
    const result = await extract(spec, manifest, out);
    let line = `wrote ${result.outPath}: ${result.records} records, dimension ${result.dimension}`;
    if (result.skips.length > 0) {
      line += ` (${result.skips.length} skipped -> ${result.skipReportPath})`;
    }
    console.log(line);
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 2;
  }
}
