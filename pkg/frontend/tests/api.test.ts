import { describe, expect, it, vi } from "vitest";

import { AgromlClient } from "../src/api.js";
import { BackendError } from "../src/types.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

function clientWith(response: Response | Error) {
  const fetchImpl = vi.fn(async () => {
    if (response instanceof Error) throw response;
    return response;
  });
  return { client: new AgromlClient({ baseUrl: "http://backend", fetchImpl }), fetchImpl };
}

describe("AgromlClient", () => {
  it("posts crop features and parses the recommendation", async () => {
    const payload = {
      crop: "rice",
      probabilities: [{ label: "rice", prob: 0.91 }, { label: "jute", prob: 0.06 }],
    };
    const { client, fetchImpl } = clientWith(jsonResponse(payload));
    const result = await client.recommendCrop({
      n: 85, p: 48, k: 41, temperature: 22.5, humidity: 81, ph: 6.4, rainfall: 230,
    });
    expect(result).toEqual(payload);
    const [url, init] = fetchImpl.mock.calls[0];
    expect(url).toBe("http://backend/api/crop-recommend");
    expect(init?.method).toBe("POST");
    expect(JSON.parse(init?.body as string)).toMatchObject({ n: 85, rainfall: 230 });
  });

  it("parses fertilizer advice", async () => {
    const payload = { class: "N_LOW", nutrient: "N", deviation: 30, advice: "add urea" };
    const { client } = clientWith(jsonResponse(payload));
    const result = await client.recommendFertilizer({ crop: "rice", n: 50, p: 40, k: 40 });
    expect(result.class).toBe("N_LOW");
    expect(result.deviation).toBe(30);
  });

  it("sends the image as multipart under the field name 'image'", async () => {
    const payload = { label: "blight", confidence: 0.7, crop: "generic",
                      disease: "blight", remedy: "prune" };
    const { client, fetchImpl } = clientWith(jsonResponse(payload));
    const blob = new Blob([new Uint8Array([1, 2, 3])], { type: "image/png" });
    const result = await client.predictDisease(blob, "x.png");
    expect(result.label).toBe("blight");
    const [, init] = fetchImpl.mock.calls[0];
    const form = init?.body as FormData;
    expect(form).toBeInstanceOf(FormData);
    expect(form.get("image")).toBeTruthy();
  });

  it("passes n_samples and seed through to the explain endpoint", async () => {
    const payload = { overlay_data_uri: "data:image/png;base64,AAAA",
                      segments: [{ id: 3, score: 0.5 }], n_samples: 60, seed: 7 };
    const { client, fetchImpl } = clientWith(jsonResponse(payload));
    const blob = new Blob([new Uint8Array([9])], { type: "image/png" });
    const result = await client.explain(blob, { nSamples: 60, seed: 7 });
    expect(result.segments[0].id).toBe(3);
    const form = fetchImpl.mock.calls[0][1]?.body as FormData;
    expect(form.get("n_samples")).toBe("60");
    expect(form.get("seed")).toBe("7");
  });

  it("raises BackendError carrying the ApiError body", async () => {
    const { client } = clientWith(jsonResponse(
      { code: "unknown_crop", message: "unknown crop 'dragonfruit'", status: 400 }, 400));
    await expect(client.recommendFertilizer({ crop: "dragonfruit", n: 1, p: 1, k: 1 }))
      .rejects.toSatisfy((error: unknown) =>
        error instanceof BackendError && error.error.code === "unknown_crop"
        && error.error.status === 400);
  });

  it("wraps malformed error bodies", async () => {
    const { client } = clientWith(new Response("<html>boom</html>", { status: 502 }));
    await expect(client.news()).rejects.toSatisfy((error: unknown) =>
      error instanceof BackendError && (error as BackendError).error.status === 502);
  });

  it("propagates network failures untouched", async () => {
    const boom = new TypeError("fetch failed");
    const { client } = clientWith(boom);
    await expect(client.news()).rejects.toBe(boom);
  });

  it("fetches news and the disease catalog", async () => {
    const payload = { articles: [{ title: "t", link: "https://x", source: "s" }], stale: true };
    const { client, fetchImpl } = clientWith(jsonResponse(payload));
    const result = await client.news();
    expect(result.stale).toBe(true);
    expect(fetchImpl.mock.calls[0][0]).toBe("http://backend/api/news");
  });
});
