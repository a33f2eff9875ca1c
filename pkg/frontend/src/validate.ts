/** Client-side form validation, mirroring the API's rules so requests
 * that cannot succeed are never sent. */

import { CROP_FIELDS, CropFeatures } from "./types.js";

export interface FieldErrors {
  [field: string]: string;
}

const RANGES: Partial<Record<keyof CropFeatures, [number, number]>> = {
  humidity: [0, 100],
  ph: [0, 14],
  rainfall: [0, Infinity],
};

export function parseNumericField(name: string, raw: string): number | string {
  if (raw.trim() === "") return "required";
  const value = Number(raw);
  if (!Number.isFinite(value)) return "must be a number";
  return value;
}

/** Returns the parsed features, or per-field messages for invalid input. */
export function validateCropForm(raw: Record<string, string>):
    { features: CropFeatures } | { errors: FieldErrors } {
  const errors: FieldErrors = {};
  const features: Partial<CropFeatures> = {};
  for (const field of CROP_FIELDS) {
    const parsed = parseNumericField(field, raw[field] ?? "");
    if (typeof parsed === "string") {
      errors[field] = parsed;
      continue;
    }
    const range = RANGES[field];
    if (range && (parsed < range[0] || parsed > range[1])) {
      errors[field] = range[1] === Infinity
        ? `must be >= ${range[0]}`
        : `must be between ${range[0]} and ${range[1]}`;
      continue;
    }
    features[field] = parsed;
  }
  if (Object.keys(errors).length > 0) return { errors };
  return { features: features as CropFeatures };
}

export function validateFertilizerForm(raw: Record<string, string>):
    { crop: string; n: number; p: number; k: number } | { errors: FieldErrors } {
  const errors: FieldErrors = {};
  if (!raw.crop || raw.crop.trim() === "") errors.crop = "required";
  const values: Record<string, number> = {};
  for (const field of ["n", "p", "k"]) {
    const parsed = parseNumericField(field, raw[field] ?? "");
    if (typeof parsed === "string") errors[field] = parsed;
    else if (parsed < 0) errors[field] = "must be >= 0";
    else values[field] = parsed;
  }
  if (Object.keys(errors).length > 0) return { errors };
  return { crop: raw.crop.trim(), n: values.n, p: values.p, k: values.k };
}

export function validateImageFile(file: File | null, maxBytes: number):
    string | null {
  if (!file) return "choose an image first";
  if (!file.type.startsWith("image/")) return "file must be an image";
  if (file.size > maxBytes) {
    return `image must be smaller than ${(maxBytes / (1024 * 1024)).toFixed(0)} MB`;
  }
  return null;
}
