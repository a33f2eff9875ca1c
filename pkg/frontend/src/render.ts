/** Pure view functions: API payloads in, HTML strings out.
 *
 * No numbers are computed here beyond display formatting; everything shown
 * traces to a response field. Keeping these DOM-free makes every panel
 * state testable in plain node.
 */

import {
  ApiError,
  Article,
  CropRecommendResponse,
  DiseaseEntry,
  DiseasePredictResponse,
  ExplainResponse,
  FertilizerRecommendResponse,
} from "./types.js";
import { FieldErrors } from "./validate.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

const pct = (p: number) => `${(p * 100).toFixed(1)}%`;

export function renderErrorBanner(error: ApiError, retryable = true): string {
  const retry = retryable
    ? `<button class="retry" data-action="retry">Retry</button>`
    : "";
  return `<div class="banner error" role="alert">
    <strong>Request failed (${error.status})</strong>
    <span class="code">${escapeHtml(error.code)}</span>
    <p>${escapeHtml(error.message)}</p>${retry}
  </div>`;
}

export function renderFieldErrors(errors: FieldErrors): string {
  const items = Object.entries(errors)
    .map(([field, message]) =>
      `<li data-field="${escapeHtml(field)}">${escapeHtml(field)}: ${escapeHtml(message)}</li>`)
    .join("");
  return `<ul class="field-errors">${items}</ul>`;
}

export function renderSpinner(label: string): string {
  return `<div class="progress" role="status"><span class="spinner"></span>${escapeHtml(label)}</div>`;
}

export function renderCropResult(result: CropRecommendResponse): string {
  const rows = result.probabilities.map((p) => `
    <div class="prob-row">
      <span class="label">${escapeHtml(p.label)}</span>
      <div class="bar"><div class="fill" style="width:${(p.prob * 100).toFixed(1)}%"></div></div>
      <span class="value">${pct(p.prob)}</span>
    </div>`).join("");
  return `<div class="result crop-result">
    <h3>Recommended crop: <em>${escapeHtml(result.crop)}</em></h3>
    ${rows}
  </div>`;
}

export function renderFertilizerResult(result: FertilizerRecommendResponse): string {
  if (result.class === "BALANCED") {
    return `<div class="result fertilizer-result balanced">
      <h3>Soil is balanced</h3>
      <p class="advice">${escapeHtml(result.advice)}</p>
    </div>`;
  }
  const direction = result.class.endsWith("_LOW") ? "short by" : "over by";
  return `<div class="result fertilizer-result corrective">
    <h3>${escapeHtml(result.class)}</h3>
    <p class="deviation">${escapeHtml(result.nutrient)} is ${direction}
      ${Math.abs(result.deviation)}</p>
    <p class="advice">${escapeHtml(result.advice)}</p>
  </div>`;
}

export function renderDiseaseCard(result: DiseasePredictResponse): string {
  return `<div class="result disease-card">
    <h3>${escapeHtml(result.label)} <span class="confidence">${pct(result.confidence)}</span></h3>
    <p class="meta">crop: ${escapeHtml(result.crop)} | disease: ${escapeHtml(result.disease)}</p>
    <p class="remedy">${escapeHtml(result.remedy)}</p>
    <button data-action="explain">Explain this prediction</button>
  </div>`;
}

export function renderExplanation(result: ExplainResponse): string {
  const rows = result.segments.map((s) =>
    `<li>segment ${s.id}: <code>${s.score.toFixed(6)}</code></li>`).join("");
  return `<div class="result explanation">
    <img class="overlay" alt="explanation overlay" src="${result.overlay_data_uri}">
    <p class="meta">${result.n_samples} samples, seed ${result.seed}</p>
    <ol class="segment-scores">${rows}</ol>
  </div>`;
}

export function renderExplainTimeout(error: ApiError): string {
  return `<div class="banner error" role="alert">
    <strong>Explanation timed out (${error.status})</strong>
    <p>${escapeHtml(error.message)}</p>
    <button class="retry" data-action="retry-fewer">Retry with fewer samples</button>
  </div>`;
}

export function renderNews(articles: Article[], stale: boolean): string {
  if (articles.length === 0) {
    const badge = stale ? `<span class="badge stale">may be outdated</span>` : "";
    return `<div class="empty">No articles available right now. ${badge}</div>`;
  }
  const items = articles.map((a) => {
    const date = a.published
      ? `<time datetime="${escapeHtml(a.published)}">${escapeHtml(a.published.slice(0, 10))}</time>`
      : "";
    return `<li>
      <a href="${escapeHtml(a.link)}" target="_blank" rel="noopener">${escapeHtml(a.title)}</a>
      <span class="source">${escapeHtml(a.source)}</span> ${date}
    </li>`;
  }).join("");
  const badge = stale ? `<span class="badge stale">may be outdated</span>` : "";
  return `<div class="news">${badge}<ul class="articles">${items}</ul></div>`;
}

export function renderDiseasePortal(entries: DiseaseEntry[]): string {
  if (entries.length === 0) {
    return `<div class="empty">The disease catalog is empty.</div>`;
  }
  const cards = entries.map((d) => `
    <details class="portal-entry">
      <summary>${escapeHtml(d.display_name)}</summary>
      <p class="meta">crop: ${escapeHtml(d.crop)} | disease: ${escapeHtml(d.disease)}</p>
      <p>${escapeHtml(d.description)}</p>
      <p class="remedy">${escapeHtml(d.remedy)}</p>
    </details>`).join("");
  return `<div class="portal">${cards}</div>`;
}

export function renderImagePreview(dataUri: string): string {
  return `<img class="preview" alt="upload preview" src="${dataUri}">`;
}
