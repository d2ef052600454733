from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tree import DecisionTreeModel, tree_fit


@dataclass
class RandomForestModel:
    trees: list[DecisionTreeModel]
    features_per_split: int
    seeds: list[int]
    bootstrap: bool = True

    @property
    def n_trees(self) -> int:
        return len(self.trees)

    def votes(self, X: np.ndarray) -> np.ndarray:
        """(n_trees, n_rows) matrix of per-tree predictions."""
        return np.vstack([np.atleast_1d(t.predict(X)) for t in self.trees])

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        v = self.votes(X)
        out = majority_vote(v)
        return out[0] if X.ndim == 1 else out


def majority_vote(votes: np.ndarray) -> np.ndarray:
    """Column-wise majority of 0/1 votes; ties go to 0."""
    votes = np.asarray(votes)
    ones = votes.sum(axis=0)
    return (2 * ones > votes.shape[0]).astype(np.int64)


def forest_fit(X, y, n_trees: int = 100, max_depth: int | None = None,
               features_per_split: int | None = None, seed: int | None = 0,
               min_samples_split: int = 2, bootstrap: bool = True) -> RandomForestModel:
    """Bagged CART trees with per-node random feature subsets.

    ``features_per_split`` defaults to ``round(sqrt(d))``. Each tree draws its
    own seed from ``seed``, which drives both its bootstrap sample and its
    feature subsets, so equal seeds give equal forests.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y).astype(np.int64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("forest_fit needs a non-empty 2-D training matrix")
    if n_trees < 1:
        raise ValueError("n_trees must be at least 1")
    n, d = X.shape
    if features_per_split is None:
        features_per_split = max(1, int(round(np.sqrt(d))))
    if not 1 <= features_per_split <= d:
        raise ValueError(f"features_per_split must lie in [1, {d}]")

    master = np.random.default_rng(seed)
    seeds = [int(s) for s in master.integers(0, 2**63 - 1, size=n_trees)]
    trees = []
    for s in seeds:
        rng = np.random.default_rng(s)
        idx = rng.integers(0, n, size=n) if bootstrap else np.arange(n)
        trees.append(tree_fit(X[idx], y[idx], max_depth=max_depth,
                              min_samples_split=min_samples_split,
                              features_per_split=features_per_split, rng=rng))
    return RandomForestModel(trees=trees, features_per_split=features_per_split,
                             seeds=seeds, bootstrap=bootstrap)


def forest_predict(model: RandomForestModel, x) -> np.ndarray:
    return model.predict(x)
