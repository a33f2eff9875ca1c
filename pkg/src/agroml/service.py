"""HTTP API binding the four features: crop recommendation, fertilizer
recommendation, disease prediction, and explanations, plus news and the
disease portal.

All artifacts load once at startup and stay immutable while serving;
every error path produces the same ApiError JSON shape ({code, message,
status}), 4xx for caller faults and 5xx for internal or upstream ones.
"""

from __future__ import annotations

import base64
import math
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml
from fastapi import FastAPI, Request
from starlette.datastructures import UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import artifact, explain as explain_mod, newsfeed
from .errors import (
    AgromlError,
    ConfigInvalid,
    ExplainTimeout,
    ExternalUnavailable,
    NegativeInput,
    ProtocolViolation,
    UndecodableImage,
    UnknownCrop,
)
from .fertilizer import IdealNpkTable, load_advice_catalog, load_ideal_table, recommend_fertilizer
from .image import decode_image, encode_png, to_pipeline_size
from .predictor import (
    DiseaseCatalog,
    ExternalPredictor,
    load_disease_catalog,
    load_predictor,
    lookup_disease,
)

DEFAULT_APP_SAMPLES = 249
DEFAULT_EXPLAIN_BUDGET = 60.0
DEFAULT_MAX_UPLOAD = 5 * 1024 * 1024


@dataclass
class ServiceConfig:
    crop_model_path: str
    predictor_path: str
    fertilizer_csv_path: str
    advice_catalog_path: str
    disease_catalog_path: str
    host: str = "127.0.0.1"
    port: int = 8000
    feed_urls: tuple[str, ...] = ()
    feed_keywords: tuple[str, ...] = newsfeed.DEFAULT_KEYWORDS
    feed_ttl_seconds: float = newsfeed.DEFAULT_TTL_SECONDS
    explain_samples: int = DEFAULT_APP_SAMPLES
    explain_budget_seconds: float = DEFAULT_EXPLAIN_BUDGET
    explain_top_k: int = 10
    explain_workers: int = field(default_factory=lambda: os.cpu_count() or 2)
    max_upload_bytes: int = DEFAULT_MAX_UPLOAD
    external_endpoint: str | None = None
    external_labels: tuple[str, ...] = ()
    static_dir: str | None = None

    def validate(self) -> None:
        for name in ("crop_model_path", "predictor_path", "fertilizer_csv_path",
                     "advice_catalog_path", "disease_catalog_path"):
            value = getattr(self, name)
            if not Path(value).is_file():
                raise ConfigInvalid(name, f"file not found: {value}")
        if self.explain_samples < 2:
            raise ConfigInvalid("explain_samples", "must be >= 2")
        if self.max_upload_bytes <= 0:
            raise ConfigInvalid("max_upload_bytes", "must be > 0")
        if self.external_endpoint and not self.external_labels:
            raise ConfigInvalid("external_labels",
                                "required when external_endpoint is set")
        if self.static_dir and not Path(self.static_dir).is_dir():
            raise ConfigInvalid("static_dir", f"directory not found: {self.static_dir}")


_ENV_OVERRIDES = {
    "AGROML_HOST": ("host", str),
    "AGROML_PORT": ("port", int),
    "AGROML_CROP_MODEL": ("crop_model_path", str),
    "AGROML_PREDICTOR": ("predictor_path", str),
    "AGROML_FERTILIZER_CSV": ("fertilizer_csv_path", str),
    "AGROML_ADVICE_CATALOG": ("advice_catalog_path", str),
    "AGROML_DISEASE_CATALOG": ("disease_catalog_path", str),
}


def load_config(path: str | Path) -> ServiceConfig:
    """Parse the YAML config file and apply environment overrides."""
    path = Path(path)
    if not path.is_file():
        raise ConfigInvalid("config", f"file not found: {path}")
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    except yaml.YAMLError as exc:
        raise ConfigInvalid("config", f"cannot parse YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigInvalid("config", "top level must be a mapping")

    def resolve(p):
        p = Path(p)
        return str(p if p.is_absolute() else (path.parent / p))

    known = {
        "crop_model_path": resolve, "predictor_path": resolve,
        "fertilizer_csv_path": resolve, "advice_catalog_path": resolve,
        "disease_catalog_path": resolve, "static_dir": resolve,
        "host": str, "port": int,
        "feed_urls": lambda v: tuple(str(u) for u in v),
        "feed_keywords": lambda v: tuple(str(k) for k in v),
        "feed_ttl_seconds": float,
        "explain_samples": int, "explain_budget_seconds": float,
        "explain_top_k": int, "explain_workers": int,
        "max_upload_bytes": int,
        "external_endpoint": str,
        "external_labels": lambda v: tuple(str(l) for l in v),
    }
    kwargs = {}
    for key, value in raw.items():
        if key not in known:
            raise ConfigInvalid(key, "unknown configuration field")
        try:
            kwargs[key] = known[key](value)
        except (TypeError, ValueError) as exc:
            raise ConfigInvalid(key, f"bad value {value!r}: {exc}") from exc
    for env, (key, cast) in _ENV_OVERRIDES.items():
        if env in os.environ:
            kwargs[key] = cast(os.environ[env])
    missing = [k for k in ("crop_model_path", "predictor_path", "fertilizer_csv_path",
                           "advice_catalog_path", "disease_catalog_path") if k not in kwargs]
    if missing:
        raise ConfigInvalid(missing[0], "required path missing from config")
    return ServiceConfig(**kwargs)


class AppState:
    """Immutable artifacts shared by all requests."""

    def __init__(self, config: ServiceConfig):
        config.validate()
        self.config = config
        self.crop_model = artifact.load_model(Path(config.crop_model_path).read_bytes())
        if config.external_endpoint:
            self.predictor = ExternalPredictor(config.external_endpoint,
                                               config.external_labels)
        else:
            self.predictor = load_predictor(Path(config.predictor_path).read_bytes())
        self.fertilizer_table: IdealNpkTable = load_ideal_table(config.fertilizer_csv_path)
        self.advice_catalog = load_advice_catalog(config.advice_catalog_path)
        self.disease_catalog: DiseaseCatalog = load_disease_catalog(config.disease_catalog_path)
        uncovered = self.disease_catalog.covers(self.predictor.labels)
        if uncovered:
            raise ConfigInvalid("disease_catalog_path",
                                f"catalog missing entries for predictor labels: {uncovered[:5]}")
        self.feed_cache = newsfeed.FeedCache(
            feed_urls=config.feed_urls, keywords=config.feed_keywords,
            ttl_seconds=config.feed_ttl_seconds)
        self.explain_gate = threading.BoundedSemaphore(max(config.explain_workers, 1))


class _HttpError(Exception):
    def __init__(self, status: int, code: str, message: str):
        self.status = status
        self.code = code
        self.message = message


_ERROR_STATUS = {
    UnknownCrop: 400,
    NegativeInput: 400,
    UndecodableImage: 400,
    ExplainTimeout: 503,
    ExternalUnavailable: 502,
    ProtocolViolation: 502,
}


def _api_error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status,
                        content={"code": code, "message": message, "status": status})


def _require_number(body: dict, name: str, minimum: float | None = None) -> float:
    if name not in body:
        raise _HttpError(400, "missing_field", f"field {name!r} is required")
    value = body[name]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _HttpError(400, "non_numeric", f"field {name!r} must be a number")
    value = float(value)
    if not math.isfinite(value):
        raise _HttpError(400, "non_numeric", f"field {name!r} must be finite")
    if minimum is not None and value < minimum:
        raise _HttpError(400, "negative_input", f"field {name!r} must be >= {minimum}")
    return value


async def _read_upload(request: Request, state: AppState) -> bytes:
    form = await request.form()
    upload = form.get("image")
    if upload is None or not isinstance(upload, UploadFile):
        raise _HttpError(400, "missing_field", "multipart field 'image' is required")
    data = await upload.read()
    if len(data) > state.config.max_upload_bytes:
        raise _HttpError(413, "too_large",
                         f"upload exceeds {state.config.max_upload_bytes} bytes")
    return data


def create_app(config: ServiceConfig) -> FastAPI:
    state = AppState(config)
    app = FastAPI(title="agroml service", docs_url=None, redoc_url=None)
    app.state.agroml = state
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])

    @app.exception_handler(_HttpError)
    async def handle_http_error(request: Request, exc: _HttpError):
        return _api_error(exc.status, exc.code, exc.message)

    @app.exception_handler(AgromlError)
    async def handle_agroml_error(request: Request, exc: AgromlError):
        status = _ERROR_STATUS.get(type(exc), 500)
        return _api_error(status, exc.code, str(exc))

    @app.exception_handler(RequestValidationError)
    async def handle_validation(request: Request, exc: RequestValidationError):
        return _api_error(400, "missing_field", str(exc.errors()[:3]))

    @app.exception_handler(Exception)
    async def handle_unexpected(request: Request, exc: Exception):
        return _api_error(500, "internal_error", f"{type(exc).__name__}: {exc}")

    @app.post("/api/crop-recommend")
    async def crop_recommend(request: Request):
        try:
            body = await request.json()
        except Exception:
            raise _HttpError(400, "missing_field", "request body must be JSON")
        if not isinstance(body, dict):
            raise _HttpError(400, "missing_field", "request body must be a JSON object")
        features = [_require_number(body, name)
                    for name in ("n", "p", "k", "temperature", "humidity", "ph", "rainfall")]
        probs = state.crop_model.predict_proba(np.array(features))
        order = np.argsort(-probs, kind="stable")[:3]
        return {
            "crop": state.crop_model.class_names[int(order[0])],
            "probabilities": [{"label": state.crop_model.class_names[int(i)],
                               "prob": float(probs[i])} for i in order],
        }

    @app.post("/api/fertilizer-recommend")
    async def fertilizer_recommend(request: Request):
        try:
            body = await request.json()
        except Exception:
            raise _HttpError(400, "missing_field", "request body must be JSON")
        if not isinstance(body, dict):
            raise _HttpError(400, "missing_field", "request body must be a JSON object")
        crop = body.get("crop")
        if not isinstance(crop, str) or not crop.strip():
            raise _HttpError(400, "missing_field", "field 'crop' is required")
        n = _require_number(body, "n", minimum=0.0)
        p = _require_number(body, "p", minimum=0.0)
        k = _require_number(body, "k", minimum=0.0)
        rec = recommend_fertilizer(state.fertilizer_table, crop, n, p, k,
                                   state.advice_catalog)
        return {"class": rec.klass, "nutrient": rec.nutrient,
                "deviation": rec.deviation, "advice": rec.advice}

    @app.post("/api/disease-predict")
    async def disease_predict(request: Request):
        data = await _read_upload(request, state)
        image = to_pipeline_size(decode_image(data))
        label, confidence = state.predictor.predict(image)
        entry = lookup_disease(state.disease_catalog, label)
        return {"label": label, "confidence": confidence,
                "crop": entry["crop"], "disease": entry["disease"],
                "remedy": entry["remedy"]}

    @app.post("/api/explain")
    async def explain_endpoint(request: Request):
        form = await request.form()
        upload = form.get("image")
        if upload is None or not isinstance(upload, UploadFile):
            raise _HttpError(400, "missing_field", "multipart field 'image' is required")
        data = await upload.read()
        if len(data) > state.config.max_upload_bytes:
            raise _HttpError(413, "too_large",
                             f"upload exceeds {state.config.max_upload_bytes} bytes")
        n_samples = state.config.explain_samples
        if "n_samples" in form:
            try:
                n_samples = int(form["n_samples"])
            except (TypeError, ValueError):
                raise _HttpError(400, "invalid_sample_count", "n_samples must be an integer")
            if n_samples < 2:
                raise _HttpError(400, "invalid_sample_count", "n_samples must be >= 2")
        seed = 0
        if "seed" in form:
            try:
                seed = int(form["seed"])
            except (TypeError, ValueError):
                raise _HttpError(400, "invalid_seed", "seed must be an integer")

        image = to_pipeline_size(decode_image(data))
        with state.explain_gate:
            explanation, segmap = explain_mod.explain(
                image, state.predictor.predict_proba,
                n_samples=n_samples, top_k=state.config.explain_top_k, seed=seed,
                budget_seconds=state.config.explain_budget_seconds)
        overlay = explain_mod.render_overlay(image, segmap, explanation)
        uri = "data:image/png;base64," + base64.b64encode(encode_png(overlay)).decode("ascii")
        return {
            "overlay_data_uri": uri,
            "segments": [{"id": sid, "score": score}
                         for sid, score in explanation.ranked_scores()],
            "n_samples": n_samples,
            "seed": seed,
        }

    @app.get("/api/news")
    async def news():
        articles, stale = newsfeed.get_articles(state.feed_cache)
        return {
            "articles": [
                {"title": a.title, "link": a.link, "source": a.source,
                 **({"published": a.published.isoformat()} if a.published else {})}
                for a in articles
            ],
            "stale": stale,
        }

    @app.get("/api/diseases")
    async def diseases():
        entries = []
        for label in state.disease_catalog.labels():
            entry = state.disease_catalog.entries[label]
            entries.append({"label": label,
                            "display_name": entry["display_name"],
                            "crop": entry["crop"], "disease": entry["disease"],
                            "description": entry["description"],
                            "remedy": entry["remedy"]})
        return {"diseases": entries}

    if config.static_dir:
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app


def run_service(config: ServiceConfig) -> None:
    import uvicorn

    app = create_app(config)
    print(f"agroml service listening on http://{config.host}:{config.port}", flush=True)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
