"""Discrete AdaBoost over weighted-Gini decision stumps."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .tree import DecisionTreeModel, tree_fit

PERFECT_ERR = 1e-10
PERFECT_ALPHA = 10.0


@dataclass
class AdaBoostModel:
    stumps: list[DecisionTreeModel]
    alphas: list[float]
    rounds: int
    errors: list[float] = field(default_factory=list)  # weighted error of each kept stump

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        score = np.zeros(X.shape[0])
        for stump, alpha in zip(self.stumps, self.alphas):
            score += alpha * (2 * stump.predict(X) - 1)
        return score

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        out = (self.decision_function(X) > 0).astype(np.int64)  # zero score -> 0
        return out[0] if X.ndim == 1 else out

    def error_bound(self) -> list[float]:
        """Running product of 2*sqrt(err*(1-err)), an upper bound on training error."""
        bound, out = 1.0, []
        for e in self.errors:
            bound *= 2.0 * math.sqrt(e * (1.0 - e))
            out.append(bound)
        return out


def adaboost_fit(X, y, rounds: int = 50, trace: list | None = None) -> AdaBoostModel:
    """Fit up to ``rounds`` stumps.

    Stops early on a perfect stump (kept with alpha 10) or on a stump no
    better than chance (discarded). ``trace``, if given, receives the sample
    weights in use at the start of each round.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y).astype(np.int64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError("adaboost_fit needs at least 2 training rows")
    if np.unique(y).size < 2:
        raise ValueError("adaboost_fit needs both classes in the training labels")
    if rounds < 1:
        raise ValueError("rounds must be at least 1")
    ys = 2 * y - 1
    w = np.full(y.size, 1.0 / y.size)
    model = AdaBoostModel(stumps=[], alphas=[], rounds=rounds)
    for _ in range(rounds):
        if trace is not None:
            trace.append(w.copy())
        stump = tree_fit(X, y, max_depth=1, sample_weight=w)
        h = 2 * stump.predict(X) - 1
        err = float(w[h != ys].sum())
        if err >= 0.5:
            break
        if err <= PERFECT_ERR:
            model.stumps.append(stump)
            model.alphas.append(PERFECT_ALPHA)
            model.errors.append(max(err, 0.0))
            break
        alpha = 0.5 * math.log((1.0 - err) / err)
        model.stumps.append(stump)
        model.alphas.append(alpha)
        model.errors.append(err)
        w = w * np.exp(-alpha * ys * h)
        w /= w.sum()
    return model


def adaboost_predict(model: AdaBoostModel, x) -> np.ndarray:
    return model.predict(x)
