"""Soft-margin kernel SVM trained by sequential minimal optimization.

Notation: ``g_i = sum_j alpha_j y_j K_ij`` and ``v_i = y_i - g_i``. A row is
in the "up" set if ``y_i alpha_i`` can still grow (y=+1, alpha<C or y=-1,
alpha>0) and in the "low" set if it can shrink. Optimality, up to ``tol``, is
``max(v[up]) - min(v[low]) <= tol``; any ``b`` between those two values then
satisfies every KKT condition within ``tol``.

Pairs are chosen by scanning rows in index order for the first KKT violator
and pairing it with the partner of maximal ``|E_i - E_j|`` (``E = -v`` up to
the shared bias) on the opposite side. Scans alternate between all rows and
the free (0 < alpha < C) rows as in Platt's original outer loop.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConvergenceError
from .kernels import KernelSpec, kernel_matrix, resolve_gamma

SV_EPS = 1e-8
_TAU = 1e-12


@dataclass
class SvmModel:
    spec: KernelSpec
    gamma: float
    support_vectors: np.ndarray  # (m, k)
    dual_coef: np.ndarray        # alpha_i * y_i for each support vector
    bias: float
    support_indices: np.ndarray  # row indices into the training matrix
    alpha: np.ndarray            # full dual vector, kept for diagnostics
    n_iter: int = 0
    kkt_gap: float = 0.0

    def __post_init__(self):
        if self.support_vectors.shape[0] == 0:
            raise ValueError("an SVM model needs at least one support vector")

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.support_vectors.shape[1]:
            raise ValueError(f"expected {self.support_vectors.shape[1]} features, got {X.shape[1]}")
        K = kernel_matrix(self.spec, self.gamma, X, self.support_vectors)
        return K @ self.dual_coef + self.bias

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        out = (self.decision_function(X) > 0).astype(np.int64)  # f = 0 -> 0
        return out[0] if X.ndim == 1 else out


def dual_objective(alpha: np.ndarray, y: np.ndarray, g: np.ndarray) -> float:
    """``sum(alpha) - 1/2 alpha^T Q alpha`` given ``g = K @ (alpha * y)``."""
    return float(alpha.sum() - 0.5 * np.dot(alpha * y, g))


def smo(K: np.ndarray, y: np.ndarray, C: float, tol: float = 1e-3,
        max_passes: int | None = None, trace: list | None = None):
    """Solve the SVM dual for a precomputed kernel matrix and labels in {-1, +1}.

    Returns ``(alpha, b, n_updates, gap)``. ``trace`` collects the dual
    objective after every pair update. The work budget is ``max_passes * n``
    row examinations (``max_passes`` full sweeps); free-row sweeps count only
    the rows they visit.
    """
    n = y.size
    if max_passes is None:
        max_passes = 10 * n
    alpha = np.zeros(n)
    g = np.zeros(n)
    pos = y > 0
    diagK = np.diag(K).copy()
    n_updates = 0

    def sets():
        up = np.where(pos, alpha < C, alpha > 0)
        low = np.where(pos, alpha > 0, alpha < C)
        return up, low

    def step(a: int, b: int) -> None:
        # move y_a*alpha_a up and y_b*alpha_b down by t > 0
        nonlocal n_updates
        gap = (y[a] - g[a]) - (y[b] - g[b])
        eta = diagK[a] + diagK[b] - 2.0 * K[a, b]
        t = gap / eta if eta > _TAU else np.inf
        lim_a = C - alpha[a] if y[a] > 0 else alpha[a]
        lim_b = alpha[b] if y[b] > 0 else C - alpha[b]
        t = min(t, lim_a, lim_b)
        if t == lim_a:
            alpha[a] = C if y[a] > 0 else 0.0
        else:
            alpha[a] += y[a] * t
        if t == lim_b:
            alpha[b] = 0.0 if y[b] > 0 else C
        else:
            alpha[b] -= y[b] * t
        g[:] += t * (K[:, a] - K[:, b])
        n_updates += 1
        if trace is not None:
            trace.append(dual_objective(alpha, y, g))

    cache = {}

    def extremes():
        # (argmax v over up, argmin v over low); only changes after a step
        if not cache:
            up, low = sets()
            v = y - g
            cache["v"] = v
            cache["j_up"] = int(np.argmax(np.where(up, v, -np.inf))) if up.any() else -1
            cache["j_low"] = int(np.argmin(np.where(low, v, np.inf))) if low.any() else -1
        return cache["v"], cache["j_up"], cache["j_low"]

    budget = max_passes * n  # row examinations, i.e. max_passes full sweeps
    examined = 0

    def scan(rows) -> int:
        nonlocal examined
        changed = 0
        for i in rows:
            examined += 1
            if examined > budget:
                raise ConvergenceError(f"SMO did not converge in {max_passes} passes", kkt_gap())
            v, j_up, j_low = extremes()
            if j_up < 0 or j_low < 0:
                return changed
            a_i = alpha[i]
            in_up = a_i < C if pos[i] else a_i > 0
            in_low = a_i > 0 if pos[i] else a_i < C
            if in_up and v[i] - v[j_low] > tol:
                step(i, j_low)
            elif in_low and v[j_up] - v[i] > tol:
                step(j_up, i)
            else:
                continue
            cache.clear()
            changed += 1
        return changed

    def kkt_gap() -> float:
        up, low = sets()
        v = y - g
        if not up.any() or not low.any():
            return 0.0
        return float(v[up].max() - v[low].min())

    # Platt's alternation: a full sweep, then sweeps over the free multipliers
    # until they settle, then another full sweep.
    examine_all = True
    while True:
        if examine_all:
            if scan(range(n)) == 0:
                break
            examine_all = False
        elif scan(np.flatnonzero((alpha > 0) & (alpha < C))) == 0:
            examine_all = True
    gap = kkt_gap()

    v = y - g
    free = (alpha > 0) & (alpha < C)
    if free.any():
        b = float(v[free].mean())
    else:
        up, low = sets()
        m = v[up].max() if up.any() else -np.inf
        M = v[low].min() if low.any() else np.inf
        b = float(0.5 * (m + M)) if np.isfinite(m) and np.isfinite(M) else float(m if np.isfinite(m) else M)
    return alpha, b, n_updates, gap


def svm_fit(X, y, spec: KernelSpec = KernelSpec(), tol: float = 1e-3,
            max_passes: int | None = None, trace: list | None = None) -> SvmModel:
    """Train on 0/1 labels (mapped internally to -1/+1)."""
    X = np.asarray(X, dtype=np.float64)
    y01 = np.asarray(y).astype(np.int64)
    if X.ndim != 2 or X.shape[0] != y01.shape[0]:
        raise ValueError("features and labels disagree in length")
    if np.unique(y01).size < 2:
        raise ValueError("svm_fit needs both classes in the training labels")
    ys = (2 * y01 - 1).astype(np.float64)
    gamma = resolve_gamma(spec.gamma_mode, X)
    K = kernel_matrix(spec, gamma, X, X)
    alpha, b, n_updates, gap = smo(K, ys, float(spec.C), tol=tol, max_passes=max_passes, trace=trace)
    sv = np.flatnonzero(alpha > SV_EPS)
    return SvmModel(spec=spec, gamma=gamma, support_vectors=X[sv].copy(),
                    dual_coef=alpha[sv] * ys[sv], bias=b, support_indices=sv,
                    alpha=alpha, n_iter=n_updates, kkt_gap=gap)


def svm_predict(model: SvmModel, x) -> np.ndarray:
    return model.predict(x)


def kkt_residuals(model: SvmModel, X, y, C: float | None = None) -> np.ndarray:
    """Per-row KKT violation (0 when satisfied) of a fitted model on its training data."""
    C = model.spec.C if C is None else C
    ys = 2 * np.asarray(y) - 1
    yf = ys * model.decision_function(X)
    a = model.alpha
    res = np.zeros(a.size)
    at0 = a <= 0
    atC = a >= C
    free = ~at0 & ~atC
    res[at0] = np.maximum(0.0, 1.0 - yf[at0])
    res[atC] = np.maximum(0.0, yf[atC] - 1.0)
    res[free] = np.abs(yf[free] - 1.0)
    return res
