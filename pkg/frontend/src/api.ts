/** The one typed client layer: every backend interaction goes through here.
 *
 * Each call resolves to the typed response or throws BackendError carrying
 * the backend's {code, message, status} body; network-level failures throw
 * plain errors from fetch.
 */

import {
  ApiError,
  BackendError,
  CropFeatures,
  CropRecommendResponse,
  DiseasePredictResponse,
  DiseasesResponse,
  ExplainResponse,
  FertilizerRecommendResponse,
  FertilizerRequest,
  NewsResponse,
} from "./types.js";

export interface ClientOptions {
  /** Backend origin, e.g. "http://127.0.0.1:8000"; same-origin when empty. */
  baseUrl?: string;
  fetchImpl?: typeof fetch;
}

async function parseJson(response: Response): Promise<unknown> {
  try {
    return await response.json();
  } catch {
    throw new BackendError({
      code: "bad_response",
      message: `backend returned non-JSON (HTTP ${response.status})`,
      status: response.status,
    });
  }
}

function isApiError(body: unknown): body is ApiError {
  const b = body as Record<string, unknown>;
  return typeof b === "object" && b !== null
    && typeof b.code === "string" && typeof b.message === "string"
    && typeof b.status === "number";
}

export class AgromlClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: typeof fetch;

  constructor(options: ClientOptions = {}) {
    this.baseUrl = options.baseUrl ?? "";
    this.fetchImpl = options.fetchImpl ?? fetch.bind(globalThis);
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const body = await parseJson(response);
    if (!response.ok) {
      if (isApiError(body)) throw new BackendError(body);
      throw new BackendError({
        code: "unknown_error",
        message: `HTTP ${response.status}`,
        status: response.status,
      });
    }
    return body as T;
  }

  recommendCrop(features: CropFeatures): Promise<CropRecommendResponse> {
    return this.request("/api/crop-recommend", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(features),
    });
  }

  recommendFertilizer(payload: FertilizerRequest): Promise<FertilizerRecommendResponse> {
    return this.request("/api/fertilizer-recommend", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  predictDisease(image: Blob, filename = "leaf.png"): Promise<DiseasePredictResponse> {
    const form = new FormData();
    form.append("image", image, filename);
    return this.request("/api/disease-predict", { method: "POST", body: form });
  }

  explain(image: Blob, options: { nSamples?: number; seed?: number } = {},
          filename = "leaf.png"): Promise<ExplainResponse> {
    const form = new FormData();
    form.append("image", image, filename);
    if (options.nSamples !== undefined) form.append("n_samples", String(options.nSamples));
    if (options.seed !== undefined) form.append("seed", String(options.seed));
    return this.request("/api/explain", { method: "POST", body: form });
  }

  news(): Promise<NewsResponse> {
    return this.request("/api/news");
  }

  diseases(): Promise<DiseasesResponse> {
    return this.request("/api/diseases");
  }
}
