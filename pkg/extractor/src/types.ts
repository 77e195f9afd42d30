export type ModelKind = "clip-text" | "sentence-transformer" | "static-vectors";

export const MODEL_KINDS: readonly ModelKind[] = [
  "clip-text",
  "sentence-transformer",
  "static-vectors",
];

/** Everything needed to turn a phrase manifest into an embedding table. */
export interface ExtractorSpec {
  modelKind: ModelKind;
  /** Service model identifier, or the .vec file path for static-vectors. */
  checkpoint: string;
  /** Phrases per service request (or per processing chunk). */
  batchSize: number;
  /**
   * Advisory device preference. Transport never sees it: a serving
   * process owns its own placement and the static loader has no device.
   */
  device: string;
  /** Optional phrase template with exactly one {} slot. */
  template?: string;
  /** Base URL of the embedding service; required unless static-vectors. */
  endpoint?: string;
  /**
   * static-vectors only: look the whole phrase up as a single token
   * (spaces become underscores) instead of averaging token vectors.
   */
  wholePhrase: boolean;
}

export interface SkipEntry {
  phrase: string;
  reason: string;
}

export interface ExtractResult {
  modelId: string;
  dimension: number;
  /** Records written, in manifest order. */
  records: number;
  skips: SkipEntry[];
  outPath: string;
  skipReportPath?: string;
}

export class ExtractError extends Error {
  constructor(message: string, options?: { cause?: unknown }) {
    super(message, options);
    this.name = "ExtractError";
  }
}

export function validateSpec(spec: ExtractorSpec): void {
  if (!MODEL_KINDS.includes(spec.modelKind)) {
    throw new ExtractError(
      `unknown model kind '${spec.modelKind}' (use ${MODEL_KINDS.join(", ")})`,
    );
  }
  if (!spec.checkpoint) {
    throw new ExtractError("checkpoint must not be empty");
  }
  if (!Number.isInteger(spec.batchSize) || spec.batchSize < 1) {
    throw new ExtractError(`batch size must be a positive integer, got ${spec.batchSize}`);
  }
  if (spec.modelKind !== "static-vectors" && !spec.endpoint) {
    throw new ExtractError(`model kind '${spec.modelKind}' needs an embedding endpoint`);
  }
  if (spec.wholePhrase && spec.modelKind !== "static-vectors") {
    throw new ExtractError("whole-phrase lookup only applies to static-vectors");
  }
}
