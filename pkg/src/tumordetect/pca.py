"""Principal component analysis via the n x n Gram matrix ("snapshot" method).

With 90,000 pixel features and a few hundred images the d x d covariance is
out of reach, but the centered Gram matrix ``Xc @ Xc.T`` shares its non-zero
spectrum. Each eigenvector ``u`` of the Gram matrix maps to a principal axis
``Xc.T @ u`` after normalization.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PcaModel:
    mean: np.ndarray                # (d,)
    components: np.ndarray          # (k, d), orthonormal rows, descending variance
    explained_variance: np.ndarray  # (k,)

    @property
    def k(self) -> int:
        return self.components.shape[0]

    @property
    def d(self) -> int:
        return self.mean.shape[0]

    def transform(self, x: np.ndarray) -> np.ndarray:
        return pca_transform(self, x)

    def inverse_transform(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(z) @ self.components + self.mean


def _fix_signs(components: np.ndarray) -> np.ndarray:
    # make each row's largest-magnitude entry positive
    idx = np.argmax(np.abs(components), axis=1)
    signs = np.sign(components[np.arange(components.shape[0]), idx])
    signs[signs == 0] = 1.0
    return components * signs[:, None]


def pca_fit(X: np.ndarray, k: int) -> PcaModel:
    """Fit the top-``k`` principal components of the rows of ``X``.

    Requires ``n >= 2`` and ``1 <= k <= min(n - 1, d)``. Variances use the
    ``n - 1`` denominator.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D feature matrix, got shape {X.shape}")
    n, d = X.shape
    if n < 2:
        raise ValueError(f"PCA needs at least 2 rows, got {n}")
    if not 1 <= k <= min(n - 1, d):
        raise ValueError(f"k={k} outside [1, {min(n - 1, d)}] for a {n}x{d} matrix")

    mean = X.mean(axis=0)
    Xc = X - mean
    gram = Xc @ Xc.T
    gram = (gram + gram.T) * 0.5
    evals, evecs = np.linalg.eigh(gram)
    order = np.argsort(evals)[::-1][:k]
    evals = evals[order]
    U = evecs[:, order]

    comps = U.T @ Xc
    norms = np.linalg.norm(comps, axis=1)
    if np.any(norms == 0):
        raise ValueError(f"data has rank below k={k}; cannot extract that many components")
    comps /= norms[:, None]
    # one Gram-Schmidt sweep removes the round-off drift left by the normalization
    q, r = np.linalg.qr(comps.T)
    comps = (q * np.sign(np.diag(r))).T

    variance = np.clip(evals / (n - 1), 0.0, None)
    return PcaModel(mean=mean, components=_fix_signs(comps), explained_variance=variance)


def pca_transform(model: PcaModel, x: np.ndarray) -> np.ndarray:
    """Project one vector (d,) or a batch (m, d) onto the model's components."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != model.d:
        raise ValueError(f"expected vectors of length {model.d}, got {x.shape[-1]}")
    return (x - model.mean) @ model.components.T


def save_pca(model: PcaModel, path: str | os.PathLike) -> None:
    """Text format: ``mean`` line, k component lines, one variance line (9 significant digits)."""
    def line(values):
        return ",".join(f"{v:.9g}" for v in values)

    with open(path, "w", encoding="ascii") as fh:
        fh.write("mean," + line(model.mean) + "\n")
        for comp in model.components:
            fh.write(line(comp) + "\n")
        fh.write(line(model.explained_variance) + "\n")


def load_pca(path: str | os.PathLike) -> PcaModel:
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if len(lines) < 3 or not lines[0].startswith("mean,"):
        raise ValueError(f"{path}: not a PCA model file")
    mean = np.array(lines[0].split(",")[1:], dtype=np.float64)
    comps = np.array([ln.split(",") for ln in lines[1:-1]], dtype=np.float64)
    var = np.array(lines[-1].split(","), dtype=np.float64)
    if comps.shape != (var.size, mean.size):
        raise ValueError(f"{path}: inconsistent component block {comps.shape}")
    return PcaModel(mean=mean, components=comps, explained_variance=var)
