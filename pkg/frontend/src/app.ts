/** DOM wiring: one panel per feature, one in-flight request per panel,
 * all data flowing through the typed client. */

import { AgromlClient } from "./api.js";
import {
  renderCropResult,
  renderDiseaseCard,
  renderDiseasePortal,
  renderErrorBanner,
  renderExplainTimeout,
  renderExplanation,
  renderFertilizerResult,
  renderFieldErrors,
  renderImagePreview,
  renderNews,
  renderSpinner,
} from "./render.js";
import { BackendError } from "./types.js";
import { validateCropForm, validateFertilizerForm, validateImageFile } from "./validate.js";

const MAX_UPLOAD_BYTES = 5 * 1024 * 1024;
const APP_MODE_SAMPLES = 249;
const THOROUGH_SAMPLES = 1000;

// dev override: ?backend=http://127.0.0.1:8000 (same origin by default)
const backend = new URLSearchParams(window.location.search).get("backend") ?? "";
const client = new AgromlClient({ baseUrl: backend });

const inflight = new Set<string>();

function panelBusy(panel: string): boolean {
  return inflight.has(panel);
}

async function withPanel<T>(panel: string, task: () => Promise<T>): Promise<T | undefined> {
  if (panelBusy(panel)) return undefined;
  inflight.add(panel);
  try {
    return await task();
  } finally {
    inflight.delete(panel);
  }
}

function el<T extends HTMLElement>(selector: string): T {
  const node = document.querySelector<T>(selector);
  if (!node) throw new Error(`missing element ${selector}`);
  return node;
}

function formValues(form: HTMLFormElement): Record<string, string> {
  const values: Record<string, string> = {};
  new FormData(form).forEach((value, key) => {
    if (typeof value === "string") values[key] = value;
  });
  return values;
}

function showError(target: HTMLElement, error: unknown): void {
  if (error instanceof BackendError) {
    target.innerHTML = error.error.code === "explain_timeout"
      ? renderExplainTimeout(error.error)
      : renderErrorBanner(error.error);
  } else {
    target.innerHTML = renderErrorBanner({
      code: "network_error",
      message: String(error),
      status: 0,
    });
  }
}

// --- crop panel -------------------------------------------------------------

function wireCropPanel(): void {
  const form = el<HTMLFormElement>("#crop-form");
  const output = el<HTMLDivElement>("#crop-output");
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const parsed = validateCropForm(formValues(form));
    if ("errors" in parsed) {
      output.innerHTML = renderFieldErrors(parsed.errors);
      return;
    }
    void withPanel("crop", async () => {
      output.innerHTML = renderSpinner("asking the model...");
      try {
        output.innerHTML = renderCropResult(await client.recommendCrop(parsed.features));
      } catch (error) {
        showError(output, error);
      }
    });
  });
}

// --- fertilizer panel -------------------------------------------------------

function populateCropChoices(select: HTMLSelectElement): void {
  // seed list matches the bundled ideal table; the backend's unknown-crop
  // suggestions correct any drift if the table is edited
  const KNOWN = ["rice", "maize", "chickpea", "kidneybeans", "pigeonpeas",
    "mothbeans", "mungbean", "blackgram", "lentil", "pomegranate", "banana",
    "mango", "grapes", "watermelon", "muskmelon", "apple", "orange", "papaya",
    "coconut", "cotton", "jute", "coffee"];
  select.innerHTML = KNOWN.map((c) => `<option value="${c}">${c}</option>`).join("");
}

function wireFertilizerPanel(): void {
  const form = el<HTMLFormElement>("#fertilizer-form");
  const output = el<HTMLDivElement>("#fertilizer-output");
  populateCropChoices(el<HTMLSelectElement>("#fertilizer-crop"));
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const parsed = validateFertilizerForm(formValues(form));
    if ("errors" in parsed) {
      output.innerHTML = renderFieldErrors(parsed.errors);
      return;
    }
    void withPanel("fertilizer", async () => {
      output.innerHTML = renderSpinner("checking the rules...");
      try {
        const result = await client.recommendFertilizer(parsed);
        output.innerHTML = renderFertilizerResult(result);
      } catch (error) {
        showError(output, error);
      }
    });
  });
}

// --- disease + explanation panel ---------------------------------------------

function wireDiseasePanel(): void {
  const input = el<HTMLInputElement>("#disease-file");
  const preview = el<HTMLDivElement>("#disease-preview");
  const output = el<HTMLDivElement>("#disease-output");
  const explainOutput = el<HTMLDivElement>("#explain-output");
  const thorough = el<HTMLInputElement>("#explain-thorough");
  let currentFile: File | null = null;

  input.addEventListener("change", () => {
    currentFile = input.files?.[0] ?? null;
    explainOutput.innerHTML = "";
    const problem = validateImageFile(currentFile, MAX_UPLOAD_BYTES);
    if (problem) {
      output.innerHTML = renderFieldErrors({ image: problem });
      currentFile = null;
      return;
    }
    const reader = new FileReader();
    reader.onload = () => {
      preview.innerHTML = renderImagePreview(String(reader.result));
    };
    reader.readAsDataURL(currentFile as File);
    output.innerHTML = "";
  });

  el<HTMLButtonElement>("#disease-submit").addEventListener("click", () => {
    const problem = validateImageFile(currentFile, MAX_UPLOAD_BYTES);
    if (problem) {
      output.innerHTML = renderFieldErrors({ image: problem });
      return;
    }
    void withPanel("disease", async () => {
      output.innerHTML = renderSpinner("classifying the leaf...");
      try {
        output.innerHTML = renderDiseaseCard(
          await client.predictDisease(currentFile as File, currentFile!.name));
      } catch (error) {
        showError(output, error);
      }
    });
  });

  // "Explain" lives on the rendered prediction card
  output.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.dataset.action !== "explain" || !currentFile) return;
    const nSamples = thorough.checked ? THOROUGH_SAMPLES : APP_MODE_SAMPLES;
    void withPanel("explain", async () => {
      explainOutput.innerHTML =
        renderSpinner(`running ${nSamples} perturbations (this takes a while)...`);
      try {
        explainOutput.innerHTML = renderExplanation(
          await client.explain(currentFile as File, { nSamples }));
      } catch (error) {
        showError(explainOutput, error);
      }
    });
  });

  explainOutput.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.dataset.action !== "retry-fewer" || !currentFile) return;
    void withPanel("explain", async () => {
      explainOutput.innerHTML = renderSpinner("retrying with 60 samples...");
      try {
        explainOutput.innerHTML = renderExplanation(
          await client.explain(currentFile as File, { nSamples: 60 }));
      } catch (error) {
        showError(explainOutput, error);
      }
    });
  });
}

// --- news + portal ------------------------------------------------------------

function wireNewsPanel(): void {
  const output = el<HTMLDivElement>("#news-output");
  const refresh = async () => {
    await withPanel("news", async () => {
      output.innerHTML = renderSpinner("loading articles...");
      try {
        const result = await client.news();
        output.innerHTML = renderNews(result.articles, result.stale);
      } catch (error) {
        showError(output, error);
      }
    });
  };
  el<HTMLButtonElement>("#news-refresh").addEventListener("click", () => void refresh());
  void refresh();
}

function wirePortalPanel(): void {
  const output = el<HTMLDivElement>("#portal-output");
  void withPanel("portal", async () => {
    try {
      const result = await client.diseases();
      output.innerHTML = renderDiseasePortal(result.diseases);
    } catch (error) {
      showError(output, error);
    }
  });
}

// --- tabs ----------------------------------------------------------------------

function wireTabs(): void {
  const buttons = Array.from(document.querySelectorAll<HTMLButtonElement>("nav [data-panel]"));
  for (const button of buttons) {
    button.addEventListener("click", () => {
      for (const other of buttons) other.classList.toggle("active", other === button);
      for (const panel of Array.from(document.querySelectorAll<HTMLElement>("main section"))) {
        panel.hidden = panel.id !== button.dataset.panel;
      }
    });
  }
}

export function start(): void {
  wireTabs();
  wireCropPanel();
  wireFertilizerPanel();
  wireDiseasePanel();
  wireNewsPanel();
  wirePortalPanel();
}

start();
