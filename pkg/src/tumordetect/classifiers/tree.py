"""Binary CART decision tree with (optionally weighted) Gini impurity.

The tree is stored as flat node arrays so prediction is a vectorized descent
and serialization is a handful of lists. Samples with ``x[f] <= threshold``
go left.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_TIE_EPS = 1e-12


def gini(labels) -> float:
    """``1 - p0^2 - p1^2`` for a non-empty collection of 0/1 labels."""
    y = np.asarray(labels)
    if y.size == 0:
        raise ValueError("gini of an empty label set is undefined")
    p1 = float(np.count_nonzero(y == 1)) / y.size
    return 1.0 - p1 * p1 - (1.0 - p1) ** 2


@dataclass
class DecisionTreeModel:
    feature: np.ndarray    # -1 marks a leaf
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    label: np.ndarray      # leaf prediction (internal nodes keep their majority)
    counts: np.ndarray     # (n_nodes, 2) unweighted class counts reaching the node
    n_features: int
    max_depth: int | None = None
    min_samples_split: int = 2

    @property
    def n_nodes(self) -> int:
        return self.feature.shape[0]

    @property
    def depth(self) -> int:
        depth = np.zeros(self.n_nodes, dtype=int)
        for i in range(self.n_nodes):
            if self.feature[i] >= 0:
                depth[self.left[i]] = depth[self.right[i]] = depth[i] + 1
        return int(depth.max())

    def leaves(self) -> np.ndarray:
        return np.flatnonzero(self.feature < 0)

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf index reached by each row of ``X``."""
        X = _as_matrix(X, self.n_features)
        node = np.zeros(X.shape[0], dtype=np.intp)
        active = self.feature[node] >= 0
        while np.any(active):
            idx = np.flatnonzero(active)
            nd = node[idx]
            go_left = X[idx, self.feature[nd]] <= self.threshold[nd]
            node[idx] = np.where(go_left, self.left[nd], self.right[nd])
            active[idx] = self.feature[node[idx]] >= 0
        return node

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        single = X.ndim == 1
        out = self.label[self.apply(X)]
        return out[0] if single else out


def _as_matrix(X, n_features: int) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != n_features:
        raise ValueError(f"expected {n_features} features, got shape {X.shape}")
    return X


def best_split(X: np.ndarray, y: np.ndarray, w: np.ndarray, features: np.ndarray):
    """Lowest weighted child Gini over midpoints of consecutive distinct values.

    Returns ``(impurity, feature, threshold)`` or ``None`` when every candidate
    feature is constant. Ties resolve to the earliest feature in ``features``,
    then the smallest threshold.
    """
    m = X.shape[0]
    if m < 2 or features.size == 0:
        return None
    Xf = X[:, features]
    order = np.argsort(Xf, axis=0, kind="stable")
    xs = np.take_along_axis(Xf, order, axis=0)
    w1 = (w * y)[order]
    w0 = (w * (1 - y))[order]
    l1 = np.cumsum(w1, axis=0)[:-1]
    l0 = np.cumsum(w0, axis=0)[:-1]
    t1, t0 = w1.sum(axis=0), w0.sum(axis=0)
    r1, r0 = t1 - l1, t0 - l0
    wl, wr = l1 + l0, r1 + r0
    total = t1[0] + t0[0]
    with np.errstate(divide="ignore", invalid="ignore"):
        # weighted child impurity: sum over children of W_c * (1 - sum_k p_k^2)
        imp = (wl - (l1 * l1 + l0 * l0) / wl) + (wr - (r1 * r1 + r0 * r0) / wr)
    imp = imp / total
    valid = (xs[1:] > xs[:-1]) & (wl > 0) & (wr > 0)
    if not np.any(valid):
        return None
    imp = np.where(valid, imp, np.inf).T  # (n_features, m-1): feature-major scan order
    best = imp.min()
    f_pos, p = divmod(int(np.flatnonzero(imp.ravel() <= best + _TIE_EPS)[0]), m - 1)
    lo, hi = xs[p, f_pos], xs[p + 1, f_pos]
    thr = 0.5 * (lo + hi)
    if not lo <= thr < hi:
        thr = lo
    return float(best), int(features[f_pos]), float(thr)


@dataclass
class _Builder:
    X: np.ndarray
    y: np.ndarray
    w: np.ndarray
    max_depth: int | None
    min_samples_split: int
    features_per_split: int | None
    rng: np.random.Generator | None
    nodes: dict = field(default_factory=lambda: {k: [] for k in
                                                 ("feature", "threshold", "left", "right", "label", "counts")})

    def _new_node(self, idx: np.ndarray) -> int:
        yi, wi = self.y[idx], self.w[idx]
        w1 = float(wi[yi == 1].sum())
        w0 = float(wi[yi == 0].sum())
        n1 = int(np.count_nonzero(yi))
        nd = self.nodes
        nd["feature"].append(-1)
        nd["threshold"].append(0.0)
        nd["left"].append(-1)
        nd["right"].append(-1)
        nd["label"].append(1 if w1 > w0 else 0)  # tie -> 0
        nd["counts"].append((idx.size - n1, n1))
        return len(nd["feature"]) - 1

    def _candidates(self) -> np.ndarray:
        d = self.X.shape[1]
        if self.features_per_split is None or self.features_per_split >= d:
            return np.arange(d)
        return np.sort(self.rng.choice(d, size=self.features_per_split, replace=False))

    def build(self) -> None:
        root = np.arange(self.X.shape[0])
        stack = [(self._new_node(root), root, 0)]
        while stack:
            node, idx, depth = stack.pop()
            n0, n1 = self.nodes["counts"][node]
            if n0 == 0 or n1 == 0:
                continue
            if self.max_depth is not None and depth >= self.max_depth:
                continue
            if idx.size < self.min_samples_split:
                continue
            X, y, w = self.X[idx], self.y[idx], self.w[idx]
            cand = self._candidates()
            split = best_split(X, y, w, cand)
            if split is None and cand.size < self.X.shape[1]:
                # the random subset was all-constant here; widen to the remaining features
                split = best_split(X, y, w, np.setdiff1d(np.arange(self.X.shape[1]), cand))
            if split is None:
                continue
            _, f, thr = split
            mask = X[:, f] <= thr
            li, ri = idx[mask], idx[~mask]
            left, right = self._new_node(li), self._new_node(ri)
            self.nodes["feature"][node] = f
            self.nodes["threshold"][node] = thr
            self.nodes["left"][node] = left
            self.nodes["right"][node] = right
            # right pushed first so the left subtree is numbered first
            stack.append((right, ri, depth + 1))
            stack.append((left, li, depth + 1))


def tree_fit(X, y, max_depth: int | None = None, min_samples_split: int = 2,
             sample_weight=None, features_per_split: int | None = None,
             rng: np.random.Generator | None = None) -> DecisionTreeModel:
    """Greedy CART on 0/1 labels.

    A node becomes a leaf when it is pure, at ``max_depth``, smaller than
    ``min_samples_split``, or has no feature with two distinct values. Zero-gain
    splits are accepted so XOR-like layouts still separate.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y).astype(np.int64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("tree_fit needs a non-empty 2-D training matrix")
    if y.shape != (X.shape[0],):
        raise ValueError("labels do not match the training rows")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("labels must be 0 or 1")
    if sample_weight is None:
        w = np.full(X.shape[0], 1.0)
    else:
        w = np.asarray(sample_weight, dtype=np.float64)
        if w.shape != y.shape or np.any(w < 0):
            raise ValueError("sample_weight must be non-negative with one entry per row")
    if features_per_split is not None and rng is None:
        rng = np.random.default_rng()
    b = _Builder(X, y, w, max_depth, min_samples_split, features_per_split, rng)
    b.build()
    nd = b.nodes
    return DecisionTreeModel(
        feature=np.asarray(nd["feature"], dtype=np.intp),
        threshold=np.asarray(nd["threshold"], dtype=np.float64),
        left=np.asarray(nd["left"], dtype=np.intp),
        right=np.asarray(nd["right"], dtype=np.intp),
        label=np.asarray(nd["label"], dtype=np.int64),
        counts=np.asarray(nd["counts"], dtype=np.int64).reshape(-1, 2),
        n_features=X.shape[1],
        max_depth=max_depth,
        min_samples_split=min_samples_split,
    )


def tree_predict(model: DecisionTreeModel, x) -> np.ndarray:
    return model.predict(x)
