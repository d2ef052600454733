"""Kernel functions and the SVM hyperparameter record."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateDataError

KERNELS = ("linear", "polynomial", "rbf", "sigmoid")
GAMMA_MODES = ("auto", "scale")


@dataclass(frozen=True)
class KernelSpec:
    kind: str = "rbf"
    C: float = 1.0
    gamma_mode: str = "scale"
    degree: int = 3

    def __post_init__(self):
        if self.kind not in KERNELS:
            raise ValueError(f"unknown kernel {self.kind!r}; choose from {KERNELS}")
        if self.gamma_mode not in GAMMA_MODES:
            raise ValueError(f"unknown gamma mode {self.gamma_mode!r}; choose from {GAMMA_MODES}")
        if not self.C > 0:
            raise ValueError("C must be positive")
        if int(self.degree) != self.degree or self.degree < 1:
            raise ValueError("degree must be a positive integer")


def resolve_gamma(mode: str, X: np.ndarray) -> float:
    """``auto`` -> 1/k; ``scale`` -> 1/(k * pooled variance of all entries)."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.size == 0:
        raise ValueError("cannot resolve gamma from empty features")
    k = X.shape[1]
    if mode == "auto":
        return 1.0 / k
    if mode == "scale":
        var = float(X.var())
        if var <= 0.0:
            raise DegenerateDataError("gamma='scale' is undefined for zero-variance features")
        return 1.0 / (k * var)
    raise ValueError(f"unknown gamma mode {mode!r}")


def kernel_matrix(spec: KernelSpec, gamma: float, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Gram block ``K[i, j] = K(A[i], B[j])``."""
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    B = np.atleast_2d(np.asarray(B, dtype=np.float64))
    if A.shape[1] != B.shape[1]:
        raise ValueError(f"dimension mismatch: {A.shape[1]} vs {B.shape[1]}")
    if spec.kind == "rbf":
        sq = (A * A).sum(1)[:, None] + (B * B).sum(1)[None, :] - 2.0 * (A @ B.T)
        return np.exp(-gamma * np.maximum(sq, 0.0))
    dot = A @ B.T
    if spec.kind == "linear":
        return dot
    if spec.kind == "polynomial":
        return (gamma * dot) ** int(spec.degree)
    return np.tanh(gamma * dot)


def kernel_eval(spec: KernelSpec, gamma: float, x, y) -> float:
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.size} vs {y.size}")
    if spec.kind == "linear":
        return float(x @ y)
    if spec.kind == "polynomial":
        return float((gamma * (x @ y)) ** int(spec.degree))
    if spec.kind == "rbf":
        diff = x - y
        return float(np.exp(-gamma * (diff @ diff)))
    return float(np.tanh(gamma * (x @ y)))
