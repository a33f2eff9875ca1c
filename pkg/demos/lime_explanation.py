"""End-to-end explanation walkthrough on synthetic leaves.

Generates a small healthy/blight leaf set, trains the reference
predictor on it, explains one diseased leaf, and writes two PNGs next to
this script: the input and the overlay with the influential superpixels
tinted green.
"""

from pathlib import Path

import numpy as np

from agroml.explain import explain, render_overlay
from agroml.image import decode_image, encode_png, to_pipeline_size
from agroml.predictor import ReferenceTrainingConfig, train_reference_predictor
from agroml.synthetic import leaf_image, write_leaf_dataset

OUT = Path(__file__).resolve().parent

print("generating a 2-class leaf set (healthy vs blight)...")
data_dir = OUT / "_leaf_data"
write_leaf_dataset(data_dir, per_class=30, size=160, seed=7)

print("training the reference predictor...")
handle = train_reference_predictor(data_dir, ReferenceTrainingConfig(seed=5))
print(f"labels: {handle.labels}")

sample = leaf_image(True, np.random.default_rng(123), size=160)
image = to_pipeline_size(sample)
label, confidence = handle.predict(image)
print(f"prediction on a fresh diseased leaf: {label} ({confidence:.2f})")

# gray fill makes dropped segments visible to a predictor that works on
# downsampled block means; per-segment mean fill barely perturbs it
print("running the explanation pipeline (1000 samples, gray fill)...")
explanation, segmap = explain(image, handle.predict_proba, n_samples=1000,
                              top_k=10, seed=1, fill="gray")
lesion = ((image.pixels[:, :, 0] > 120) & (image.pixels[:, :, 1] < 130)
          & (image.pixels[:, :, 2] < 80))
print(f"{segmap.n_segments} superpixels; top positive segments:")
for sid, score in explanation.ranked_scores():
    seg = segmap.labels == sid
    frac = (seg & lesion).sum() / seg.sum()
    print(f"  segment {sid:>3}  score {score:+.4f}  lesion fraction {frac:.2f}")

overlay = render_overlay(image, segmap, explanation)
(OUT / "lime_input.png").write_bytes(encode_png(image))
(OUT / "lime_overlay.png").write_bytes(encode_png(overlay))
print(f"wrote {OUT / 'lime_input.png'} and {OUT / 'lime_overlay.png'}")
print("the highlighted superpixels sit on the diseased regions of the leaf")
