/** Live end-to-end pass against a running backend.
 *
 * Skipped unless AGROML_BACKEND_URL is set, e.g.:
 *   agroml serve --config config/service.example.yaml  # in another shell
 *   AGROML_BACKEND_URL=http://127.0.0.1:8000 npm run test:e2e
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { AgromlClient } from "../src/api.js";
import { BackendError } from "../src/types.js";

const backend = process.env.AGROML_BACKEND_URL;
const suite = backend ? describe : describe.skip;

function leafBlob(): Blob {
  const here = dirname(fileURLToPath(import.meta.url));
  const bytes = readFileSync(join(here, "fixtures", "leaf.png"));
  return new Blob([bytes], { type: "image/png" });
}

suite("live backend pass", () => {
  const client = new AgromlClient({ baseUrl: backend });

  it("crop form flow returns a recommendation", async () => {
    const result = await client.recommendCrop({
      n: 85, p: 48, k: 41, temperature: 22.5, humidity: 81.2, ph: 6.4, rainfall: 230.4,
    });
    expect(result.crop.length).toBeGreaterThan(0);
    expect(result.probabilities[0].label).toBe(result.crop);
  });

  it("fertilizer flow distinguishes balanced from corrective", async () => {
    const balanced = await client.recommendFertilizer({ crop: "rice", n: 80, p: 40, k: 40 });
    expect(balanced.class).toBe("BALANCED");
    const low = await client.recommendFertilizer({ crop: "rice", n: 50, p: 40, k: 40 });
    expect(low.class).toBe("N_LOW");
  });

  it("unknown crop surfaces the backend's suggestions", async () => {
    await expect(client.recommendFertilizer({ crop: "dragonfruit", n: 1, p: 1, k: 1 }))
      .rejects.toSatisfy((error: unknown) =>
        error instanceof BackendError && error.error.code === "unknown_crop");
  });

  it("upload -> prediction -> explanation overlay", async () => {
    const blob = leafBlob();
    const prediction = await client.predictDisease(blob);
    expect(prediction.label.length).toBeGreaterThan(0);
    expect(prediction.remedy.length).toBeGreaterThan(0);

    const explanation = await client.explain(blob, { nSamples: 60, seed: 1 });
    expect(explanation.overlay_data_uri.startsWith("data:image/png;base64,")).toBe(true);
    expect(explanation.n_samples).toBe(60);
  }, 120_000);

  it("news list resolves with a staleness flag", async () => {
    const news = await client.news();
    expect(typeof news.stale).toBe("boolean");
    expect(Array.isArray(news.articles)).toBe(true);
  });

  it("disease portal lists the catalog", async () => {
    const portal = await client.diseases();
    expect(portal.diseases.length).toBeGreaterThan(0);
  });
});
