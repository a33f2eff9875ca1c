"""One-vs-rest SVM trained with sequential minimal optimization.

Kernel is polynomial, K(x, z) = (x.z + 1)^degree, evaluated on 0-1 scaled
inputs; the scaler is fit on the training set and embedded in the model.
The dual is solved per binary head by SMO using maximal-violating-pair
selection: each iteration takes the analytic two-variable step on the
worst KKT-violating (up, down) pair, so the bias never enters the update
and selection is a deterministic argmax. The kernel matrix is computed
once and shared by every head.

At exit of each head either all KKT violations are within the tolerance
or NonConvergence is raised; the iteration cap also raises NonConvergence.
"""

from __future__ import annotations

import numpy as np

from ..errors import NonConvergence
from ..tabular import ScalerParams, apply_minmax, fit_minmax
from .base import TrainedClassifier, softmax

_ETA_FLOOR = 1e-12  # curvature substitute for duplicate-point pairs


def poly_kernel(A: np.ndarray, B: np.ndarray, degree: int) -> np.ndarray:
    return (A @ B.T + 1.0) ** degree


class _SMOSolver:
    """Binary dual solver over a precomputed kernel matrix.

    State: ``alpha`` in [0, C]^n with sum(alpha * t) = 0, and the bias-free
    error cache E_i = f(x_i) - t_i where f(x) = sum_j alpha_j t_j K(x_j, x).
    The bias is recovered from the final violating-pair gap.
    """

    def __init__(self, K, t, c, tol, max_passes):
        self.K = K
        self.t = t.astype(np.float64)
        self.c = float(c)
        self.tol = tol
        self.max_passes = max_passes
        self.n = t.size
        self.alpha = np.zeros(self.n)
        self.b = 0.0
        self.E = -self.t.copy()

    def _selection_sets(self):
        pos = self.t > 0
        at_lower = self.alpha <= 0.0
        at_upper = self.alpha >= self.c
        up = (pos & ~at_upper) | (~pos & ~at_lower)
        low = (~pos & ~at_upper) | (pos & ~at_lower)
        return up, low

    def _take_step(self, i1, i2) -> bool:
        a1_old, a2_old = self.alpha[i1], self.alpha[i2]
        y1, y2 = self.t[i1], self.t[i2]
        s = y1 * y2
        if s > 0:
            L = max(0.0, a1_old + a2_old - self.c)
            H = min(self.c, a1_old + a2_old)
        else:
            L = max(0.0, a2_old - a1_old)
            H = min(self.c, self.c + a2_old - a1_old)
        if H <= L:
            return False
        k11, k12, k22 = self.K[i1, i1], self.K[i1, i2], self.K[i2, i2]
        eta = max(k11 + k22 - 2.0 * k12, _ETA_FLOOR)
        a2 = a2_old + y2 * (self.E[i1] - self.E[i2]) / eta
        a2 = min(max(a2, L), H)
        # snap to the box edges so clamp roundoff cannot leave alpha dust
        if a2 < 1e-8:
            a2 = 0.0
        elif a2 > self.c - 1e-8:
            a2 = self.c
        if a2 == a2_old:
            return False
        a1 = a1_old + s * (a2_old - a2)
        if a1 < 1e-8:
            a1 = 0.0
        elif a1 > self.c - 1e-8:
            a1 = self.c

        d1 = y1 * (a1 - a1_old)
        d2 = y2 * (a2 - a2_old)
        self.E += d1 * self.K[i1] + d2 * self.K[i2]
        self.alpha[i1] = a1
        self.alpha[i2] = a2
        return True

    def _violates(self, i) -> bool:
        r = (self.E[i] + self.b) * self.t[i]
        return (r < -self.tol and self.alpha[i] < self.c) or \
               (r > self.tol and self.alpha[i] > 0.0)

    def solve(self):
        neg_inf = -np.inf
        for iteration in range(self.max_passes + 1):
            up, low = self._selection_sets()
            score = -self.E
            up_scores = np.where(up, score, neg_inf)
            low_scores = np.where(low, score, np.inf)
            i = int(np.argmax(up_scores))
            j = int(np.argmin(low_scores))
            m = up_scores[i]
            mm = low_scores[j]
            if m - mm <= 2.0 * self.tol:
                if np.isfinite(m) and np.isfinite(mm):
                    self.b = (m + mm) / 2.0
                else:
                    # one selection set is empty: the bias is only bounded
                    # on one side, so sit on that bound
                    self.b = m if np.isfinite(m) else (mm if np.isfinite(mm) else 0.0)
                break
            if iteration == self.max_passes:
                raise NonConvergence("SMO pass cap exceeded", iteration)
            if not self._take_step(i, j):
                raise NonConvergence("SMO cannot improve the violating pair",
                                     iteration)
        if any(self._violates(i) for i in range(self.n)):
            raise NonConvergence("KKT violations remain at termination",
                                 self.max_passes)
        return self.alpha, self.b


class SvmModel(TrainedClassifier):
    """One-vs-rest polynomial-kernel SVM; per-head margins are mapped to a
    distribution by softmax."""

    def __init__(self, spec, class_names, scaler: ScalerParams, heads):
        super().__init__(spec, class_names)
        self.scaler = scaler
        self.heads = heads  # per class: dict(sv=(m,d) scaled, coef=(m,), b=float)

    @property
    def n_features(self) -> int:
        return self.scaler.lo.shape[0]

    def decision_values(self, X: np.ndarray) -> np.ndarray:
        S = apply_minmax(self.scaler, X)
        out = np.empty((X.shape[0], self.n_classes))
        for c, head in enumerate(self.heads):
            if head["sv"].shape[0]:
                G = poly_kernel(S, head["sv"], self.spec.kernel_degree)
                out[:, c] = G @ head["coef"] + head["b"]
            else:
                out[:, c] = head["b"]
        return out

    def _proba_matrix(self, X: np.ndarray) -> np.ndarray:
        return softmax(self.decision_values(X))


def train_svm(spec, X, class_names, y) -> SvmModel:
    scaler = fit_minmax(X)
    S = apply_minmax(scaler, X)
    K = poly_kernel(S, S, spec.kernel_degree)
    heads = []
    for c in range(len(class_names)):
        t = np.where(y == c, 1.0, -1.0)
        solver = _SMOSolver(K, t, spec.c, spec.smo_tolerance, spec.smo_max_passes)
        alpha, b = solver.solve()
        support = np.flatnonzero(alpha > 1e-10)
        heads.append({
            "sv": S[support].copy(),
            "coef": (alpha * t)[support],
            "b": float(b),
        })
    return SvmModel(spec, class_names, scaler, heads)
