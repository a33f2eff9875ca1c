"""Operator command line: benchmark, artifact training, one-shot
explanations, and serving.

Exit codes: 0 success, 1 operational failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import classifiers
from .artifact import save_model
from .crossval import cross_validate
from .errors import AgromlError, UnknownModelName
from .explain import explain, render_overlay
from .image import decode_image, encode_png, to_pipeline_size
from .predictor import (
    ReferenceTrainingConfig,
    load_predictor,
    save_predictor,
    train_reference_predictor_with_holdout,
)
from .tabular import accuracy, load_crop_dataset, stratified_kfold

# reporting order mirrors the benchmark table
BENCHMARK_MODELS = (
    ("decision_tree", lambda seed: classifiers.decision_tree()),
    ("naive_bayes", lambda seed: classifiers.naive_bayes()),
    ("svm", lambda seed: classifiers.svm()),
    ("logistic_regression", lambda seed: classifiers.logistic_regression()),
    ("random_forest", lambda seed: classifiers.random_forest(seed=seed)),
    ("gradient_boosted_trees", lambda seed: classifiers.gradient_boosted_trees(seed=seed)),
)
MODEL_NAMES = tuple(name for name, _ in BENCHMARK_MODELS)


def _fingerprint(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def cmd_benchmark(args) -> int:
    dataset = load_crop_dataset(args.data)
    wanted = args.models.split(",") if args.models else list(MODEL_NAMES)
    for name in wanted:
        if name not in MODEL_NAMES:
            raise UnknownModelName(name, MODEL_NAMES)

    rows = []
    for name, make_spec in BENCHMARK_MODELS:
        if name not in wanted:
            continue
        report = cross_validate(make_spec(args.seed), dataset, args.k, args.seed)
        rows.append({
            "model": name,
            "fold_accuracies": list(report.fold_accuracies),
            "mean_accuracy": report.mean_accuracy,
            "wall_seconds": report.wall_seconds,
        })
        print(f"{name:<24} mean={report.mean_accuracy:.4f} "
              f"folds=[{', '.join(f'{a:.4f}' for a in report.fold_accuracies)}] "
              f"({report.wall_seconds:.1f}s)")

    if args.report:
        payload = {
            "dataset": {"path": str(args.data), "rows": len(dataset),
                        "classes": len(dataset.class_names),
                        "sha256": _fingerprint(Path(args.data))},
            "seed": args.seed,
            "k": args.k,
            "models": rows,
        }
        Path(args.report).write_text(json.dumps(payload, indent=2), encoding="utf-8")
        print(f"report written to {args.report}")
    return 0


def cmd_train_crop(args) -> int:
    dataset = load_crop_dataset(args.data)
    X = dataset.feature_matrix()
    labels = dataset.labels()
    spec = classifiers.random_forest(seed=args.seed)

    folds = stratified_kfold(dataset, 5, args.seed)  # fold 0 as the holdout
    hold = folds.assignment == 0
    probe = classifiers.train(spec, X[~hold], [l for l, h in zip(labels, hold) if not h])
    holdout_acc = accuracy(probe.predict(X[hold]), [l for l, h in zip(labels, hold) if h])
    print(f"holdout accuracy: {holdout_acc:.4f} ({int(hold.sum())} samples)")

    model = classifiers.train(spec, X, labels)
    Path(args.out).write_bytes(save_model(model))
    print(f"crop model written to {args.out}")
    return 0


def cmd_train_predictor(args) -> int:
    config = ReferenceTrainingConfig(seed=args.seed)
    handle, holdout_acc = train_reference_predictor_with_holdout(args.images, config)
    print(f"holdout accuracy: {holdout_acc:.4f}")
    Path(args.out).write_bytes(save_predictor(handle))
    print(f"predictor written to {args.out} (labels: {', '.join(handle.labels)})")
    return 0


def cmd_explain(args) -> int:
    handle = load_predictor(Path(args.model).read_bytes())
    image = to_pipeline_size(decode_image(Path(args.image).read_bytes()))
    explanation, segmap = explain(image, handle.predict_proba,
                                  n_samples=args.samples, top_k=args.top_k,
                                  seed=args.seed)
    overlay = render_overlay(image, segmap, explanation)
    Path(args.out).write_bytes(encode_png(overlay))
    label = handle.labels[explanation.target_class]
    print(f"explained class: {label} ({segmap.n_segments} segments, "
          f"{explanation.n_samples} samples, seed {explanation.seed})")
    for sid, score in explanation.ranked_scores():
        print(f"  segment {sid:>3}  score {score:+.6f}")
    print(f"overlay written to {args.out}")
    return 0


def cmd_serve(args) -> int:
    from .service import load_config, run_service

    config = load_config(args.config)
    run_service(config)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="agroml",
                                     description="agricultural decision service toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("benchmark", help="cross-validate the crop models")
    p.add_argument("--data", required=True, help="crop CSV path")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--models", help="comma-separated subset of: " + ", ".join(MODEL_NAMES))
    p.add_argument("--report", help="optional JSON report path")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("train-crop", help="train and save the serving crop model")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_train_crop)

    p = sub.add_parser("train-predictor", help="train and save the reference image predictor")
    p.add_argument("--images", required=True, help="folder tree: one subfolder per class")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_train_predictor)

    p = sub.add_parser("explain", help="explain one image and write the overlay PNG")
    p.add_argument("--image", required=True)
    p.add_argument("--model", required=True, help="predictor artifact path")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--top-k", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AgromlError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 0
    except Exception as exc:  # operational failure, not usage
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
