import { createWriteStream } from "node:fs";
import { once } from "node:events";

/**
 * Write an embedding table: a header line naming the model and pinning
 * the dimension, then one record per phrase in the order given. Numbers
 * go through JSON.stringify, whose shortest round-trip form re-parses
 * to the identical double everywhere, so rewriting the same data is
 * byte-identical.
 */
export async function writeTable(
  path: string,
  modelId: string,
  dimension: number,
  records: Iterable<readonly [string, ArrayLike<number>]>,
): Promise<number> {
  const out = createWriteStream(path, { encoding: "utf-8" });
  let count = 0;
  try {
    out.write(JSON.stringify({ model_id: modelId, dimension }) + "\n");
    for (const [phrase, vector] of records) {
      out.write(JSON.stringify({ phrase, vector: Array.from(vector) }) + "\n");
      count += 1;
    }
  } finally {
    out.end();
  }
  await once(out, "finish");
  return count;
}
