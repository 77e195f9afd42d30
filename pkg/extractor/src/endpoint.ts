import { z } from "zod";

import { ExtractError } from "./types.js";

/**
 * Wire contract of an embedding service: POST {base}/embed with
 * {"model_id": s, "phrases": [s, ...]} answered by {"dimension": d,
 * "vectors": [[...], ...]} in request order. A service may answer null
 * in place of a vector for a phrase it cannot embed (for example one
 * exceeding its context window); the caller records those as skips.
 */
const responseSchema = z.object({
  dimension: z.number().int().positive(),
  vectors: z.array(z.union([z.array(z.number().finite()), z.null()])),
});

export type EmbedResponse = z.infer<typeof responseSchema>;

export async function embedBatch(
  endpoint: string,
  modelId: string,
  phrases: string[],
): Promise<EmbedResponse> {
  const url = endpoint.replace(/\/$/, "") + "/embed";
  let res: Response;
  try {
    res = await fetch(url, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ model_id: modelId, phrases }),
    });
  } catch (err) {
    throw new ExtractError(`embedding service unreachable at ${url}`, { cause: err });
  }
  if (!res.ok) {
    const body = (await res.text()).slice(0, 200);
    throw new ExtractError(`embedding service answered ${res.status} at ${url}: ${body}`);
  }
  let parsed: EmbedResponse;
  try {
    parsed = responseSchema.parse(await res.json());
  } catch (err) {
    throw new ExtractError(`malformed response from ${url}`, { cause: err });
  }
  if (parsed.vectors.length !== phrases.length) {
    throw new ExtractError(
      `response from ${url} has ${parsed.vectors.length} vectors for ${phrases.length} phrases`,
    );
  }
  for (const [i, v] of parsed.vectors.entries()) {
    if (v !== null && v.length !== parsed.dimension) {
      throw new ExtractError(
        `response from ${url}: vector ${i} has ${v.length} components, dimension says ${parsed.dimension}`,
      );
    }
  }
  return parsed;
}
