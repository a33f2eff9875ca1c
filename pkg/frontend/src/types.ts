/** Payload shapes for the backend API, mirroring schemas/ *.schema.json. */

export interface ApiError {
  code: string;
  message: string;
  status: number;
}

export interface CropFeatures {
  n: number;
  p: number;
  k: number;
  temperature: number;
  humidity: number;
  ph: number;
  rainfall: number;
}

export interface CropProbability {
  label: string;
  prob: number;
}

export interface CropRecommendResponse {
  crop: string;
  probabilities: CropProbability[];
}

export type FertilizerClass =
  | "N_HIGH" | "N_LOW"
  | "P_HIGH" | "P_LOW"
  | "K_HIGH" | "K_LOW"
  | "BALANCED";

export interface FertilizerRequest {
  crop: string;
  n: number;
  p: number;
  k: number;
}

export interface FertilizerRecommendResponse {
  class: FertilizerClass;
  nutrient: "N" | "P" | "K" | "";
  deviation: number;
  advice: string;
}

export interface DiseasePredictResponse {
  label: string;
  confidence: number;
  crop: string;
  disease: string;
  remedy: string;
}

export interface SegmentScore {
  id: number;
  score: number;
}

export interface ExplainResponse {
  overlay_data_uri: string;
  segments: SegmentScore[];
  n_samples: number;
  seed: number;
}

export interface Article {
  title: string;
  link: string;
  source: string;
  published?: string;
}

export interface NewsResponse {
  articles: Article[];
  stale: boolean;
}

export interface DiseaseEntry {
  label: string;
  display_name: string;
  crop: string;
  disease: string;
  description: string;
  remedy: string;
}

export interface DiseasesResponse {
  diseases: DiseaseEntry[];
}

/** Error thrown by the client when the backend answers with an ApiError body. */
export class BackendError extends Error {
  readonly error: ApiError;

  constructor(error: ApiError) {
    super(error.message);
    this.name = "BackendError";
    this.error = error;
  }
}

export const CROP_FIELDS: ReadonlyArray<keyof CropFeatures> = [
  "n", "p", "k", "temperature", "humidity", "ph", "rainfall",
];
