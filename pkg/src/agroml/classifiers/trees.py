"""Decision trees grown with information-gain splits, plus the regression
trees used by gradient boosting.

Thresholds are midpoints between consecutive distinct sorted values. Ties
in gain break toward the lower feature index, then the lower threshold,
which makes growth deterministic. An impure node splits on the best
candidate even at zero gain (parity-style labelings such as XOR need the
zero-gain first cut); pure nodes and nodes at max depth become leaves, so
constant features are never split on.
"""

from __future__ import annotations

import numpy as np

from ..errors import AllZeroCounts

GAIN_EPS = 1e-12


def entropy(class_counts) -> float:
    """Shannon entropy in bits of a count vector: -sum p_i log2 p_i."""
    counts = np.asarray(class_counts, dtype=np.float64)
    if np.any(counts < 0):
        raise ValueError("class counts must be non-negative")
    total = counts.sum()
    if total <= 0:
        raise AllZeroCounts("entropy of all-zero counts is undefined")
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum()) + 0.0  # avoid -0.0 on pure nodes


def _entropy_rows(counts: np.ndarray) -> np.ndarray:
    """Entropy in bits for each row of a (m, C) count matrix."""
    totals = counts.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(totals > 0, counts / totals, 0.0)
        logs = np.where(p > 0, np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return -(p * logs).sum(axis=1)


class TreeNode:
    __slots__ = ("feature", "threshold", "left", "right", "value",
                 "n_samples", "impurity")

    def __init__(self, value, n_samples, impurity):
        self.feature = -1
        self.threshold = 0.0
        self.left = None
        self.right = None
        self.value = value          # class distribution or regression mean
        self.n_samples = n_samples
        self.impurity = impurity

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {"value": np.asarray(self.value).tolist(),
                    "n": int(self.n_samples), "impurity": float(self.impurity)}
        return {
            "feature": int(self.feature),
            "threshold": float(self.threshold),
            "value": np.asarray(self.value).tolist(),
            "n": int(self.n_samples),
            "impurity": float(self.impurity),
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TreeNode":
        node = cls(np.asarray(data["value"], dtype=np.float64),
                   data["n"], data["impurity"])
        if "feature" in data:
            node.feature = data["feature"]
            node.threshold = data["threshold"]
            node.left = cls.from_dict(data["left"])
            node.right = cls.from_dict(data["right"])
        return node


def _best_split_classification(X, y_onehot, idx, features, parent_entropy):
    """Best (feature, threshold, gain) over candidate features, or None.

    Gain is evaluated in bits against the parent entropy; candidates are
    scanned in ascending feature then threshold order with strict-greater
    comparison, which implements the deterministic tie-break.
    """
    n = idx.size
    best = None
    counts_total = y_onehot[idx].sum(axis=0)
    for f in features:
        values = X[idx, f]
        order = np.argsort(values, kind="stable")
        sv = values[order]
        distinct = np.nonzero(sv[1:] > sv[:-1])[0]  # split after position i
        if distinct.size == 0:
            continue
        cum = np.cumsum(y_onehot[idx][order], axis=0)
        left_counts = cum[distinct]
        right_counts = counts_total - left_counts
        n_left = distinct + 1
        n_right = n - n_left
        h_left = _entropy_rows(left_counts)
        h_right = _entropy_rows(right_counts)
        gains = parent_entropy - (n_left * h_left + n_right * h_right) / n
        pos = int(np.argmax(gains))
        gain = gains[pos]
        if best is None or gain > best[2]:
            threshold = (sv[distinct[pos]] + sv[distinct[pos] + 1]) / 2.0
            best = (f, threshold, float(gain))
    return best


def grow_classification_tree(X, y, n_classes, max_depth, rng=None,
                             n_candidate_features=None):
    """Entropy-criterion tree; leaves hold class frequency distributions.

    When ``n_candidate_features`` is set (forest mode), that many features
    are sampled per node without replacement using ``rng``; the candidates
    are sorted so the feature-index tie-break still applies.
    """
    y_onehot = np.zeros((y.size, n_classes), dtype=np.float64)
    y_onehot[np.arange(y.size), y] = 1.0
    d = X.shape[1]
    all_features = np.arange(d)

    def build(idx, depth):
        counts = y_onehot[idx].sum(axis=0)
        node_entropy = entropy(counts) if counts.sum() > 0 else 0.0
        node = TreeNode(counts / counts.sum(), idx.size, node_entropy)
        if node_entropy <= 0 or (max_depth is not None and depth >= max_depth) or idx.size < 2:
            return node
        if n_candidate_features is not None and n_candidate_features < d:
            features = np.sort(rng.choice(d, size=n_candidate_features, replace=False))
        else:
            features = all_features
        best = _best_split_classification(X, y_onehot, idx, features, node_entropy)
        if best is None:
            return node
        f, threshold, _gain = best
        mask = X[idx, f] <= threshold
        node.feature = f
        node.threshold = threshold
        node.left = build(idx[mask], depth + 1)
        node.right = build(idx[~mask], depth + 1)
        return node

    return build(np.arange(X.shape[0]), 0)


def _best_split_regression(X, y, idx, features, parent_sse):
    n = idx.size
    best = None
    target = y[idx]
    for f in features:
        values = X[idx, f]
        order = np.argsort(values, kind="stable")
        sv = values[order]
        distinct = np.nonzero(sv[1:] > sv[:-1])[0]
        if distinct.size == 0:
            continue
        ty = target[order]
        cum = np.cumsum(ty)
        cum_sq = np.cumsum(ty * ty)
        total = cum[-1]
        total_sq = cum_sq[-1]
        n_left = distinct + 1.0
        n_right = n - n_left
        sum_left = cum[distinct]
        sum_right = total - sum_left
        sse_left = cum_sq[distinct] - sum_left * sum_left / n_left
        sse_right = (total_sq - cum_sq[distinct]) - sum_right * sum_right / n_right
        gains = parent_sse - (sse_left + sse_right)
        pos = int(np.argmax(gains))
        gain = gains[pos]
        if best is None or gain > best[2]:
            threshold = (sv[distinct[pos]] + sv[distinct[pos] + 1]) / 2.0
            best = (f, threshold, float(gain))
    return best


def grow_regression_tree(X, y, max_depth):
    """Squared-error regression tree; leaves hold the mean target."""

    def build(idx, depth):
        target = y[idx]
        mean = float(target.mean())
        sse = float(((target - mean) ** 2).sum())
        node = TreeNode(mean, idx.size, sse / idx.size)
        if sse <= GAIN_EPS or (max_depth is not None and depth >= max_depth) or idx.size < 2:
            return node
        best = _best_split_regression(X, y, idx, np.arange(X.shape[1]), sse)
        if best is None:
            return node
        f, threshold, _gain = best
        mask = X[idx, f] <= threshold
        node.feature = f
        node.threshold = threshold
        node.left = build(idx[mask], depth + 1)
        node.right = build(idx[~mask], depth + 1)
        return node

    return build(np.arange(X.shape[0]), 0)


def tree_apply(root: TreeNode, X: np.ndarray) -> np.ndarray:
    """Route each row of X to its leaf value. Returns (n, C) for
    classification trees and (n,) for regression trees."""
    first = np.asarray(root.value)
    out_shape = (X.shape[0],) if first.ndim == 0 else (X.shape[0], first.shape[0])
    out = np.empty(out_shape, dtype=np.float64)

    def route(node, rows):
        if node.is_leaf:
            out[rows] = node.value
            return
        mask = X[rows, node.feature] <= node.threshold
        left_rows = rows[mask]
        right_rows = rows[~mask]
        if left_rows.size:
            route(node.left, left_rows)
        if right_rows.size:
            route(node.right, right_rows)

    route(root, np.arange(X.shape[0]))
    return out


def accumulate_importance(root: TreeNode, totals: np.ndarray) -> None:
    """Add this tree's impurity decreases (weighted by node sample counts)
    into ``totals`` indexed by feature."""

    def walk(node):
        if node.is_leaf:
            return
        decrease = node.n_samples * node.impurity \
            - node.left.n_samples * node.left.impurity \
            - node.right.n_samples * node.right.impurity
        totals[node.feature] += max(decrease, 0.0)
        walk(node.left)
        walk(node.right)

    walk(root)
