import { describe, expect, it } from "vitest";

import { validateCropForm, validateFertilizerForm, validateImageFile } from "../src/validate.js";

const GOOD = { n: "85", p: "48", k: "41", temperature: "22.5",
               humidity: "81", ph: "6.4", rainfall: "230" };

describe("crop form validation", () => {
  it("accepts a fully numeric form", () => {
    const result = validateCropForm(GOOD);
    expect("features" in result && result.features.rainfall).toBe(230);
  });

  it("flags empty fields as required without building a payload", () => {
    const result = validateCropForm({ ...GOOD, rainfall: "" });
    expect("errors" in result && result.errors.rainfall).toBe("required");
  });

  it("flags non-numeric text", () => {
    const result = validateCropForm({ ...GOOD, humidity: "abc" });
    expect("errors" in result && result.errors.humidity).toBe("must be a number");
  });

  it("mirrors the API ranges for humidity and ph", () => {
    const high = validateCropForm({ ...GOOD, humidity: "150" });
    expect("errors" in high).toBe(true);
    const acid = validateCropForm({ ...GOOD, ph: "15" });
    expect("errors" in acid).toBe(true);
    const negativeRain = validateCropForm({ ...GOOD, rainfall: "-2" });
    expect("errors" in negativeRain).toBe(true);
  });
});

describe("fertilizer form validation", () => {
  it("accepts crop plus three numbers", () => {
    const result = validateFertilizerForm({ crop: "rice", n: "50", p: "40", k: "40" });
    expect("crop" in result && result.crop).toBe("rice");
  });

  it("requires a crop and non-negative values", () => {
    expect("errors" in validateFertilizerForm({ crop: "", n: "1", p: "1", k: "1" })).toBe(true);
    expect("errors" in validateFertilizerForm({ crop: "rice", n: "-1", p: "1", k: "1" })).toBe(true);
  });
});

describe("image file validation", () => {
  it("requires a file of an image type within the size cap", () => {
    expect(validateImageFile(null, 1024)).toContain("choose");
    const text = new File([new Uint8Array(10)], "a.txt", { type: "text/plain" });
    expect(validateImageFile(text, 1024)).toContain("image");
    const big = new File([new Uint8Array(2048)], "a.png", { type: "image/png" });
    expect(validateImageFile(big, 1024)).toContain("smaller");
    const ok = new File([new Uint8Array(10)], "a.png", { type: "image/png" });
    expect(validateImageFile(ok, 1024)).toBeNull();
  });
});
