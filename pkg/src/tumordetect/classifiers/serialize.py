"""Text persistence for trained models.

Layout: a header line ``tumordetect-model <variant>`` followed by one JSON
document. Floats go through ``repr`` so predictions round-trip exactly.
"""
from __future__ import annotations

import json
import os

import numpy as np

from ..pca import PcaModel
from .adaboost import AdaBoostModel
from .forest import RandomForestModel
from .kernels import KernelSpec
from .svm import SvmModel
from .tree import DecisionTreeModel

HEADER = "tumordetect-model"

_TREE_ARRAYS = {"feature": np.intp, "threshold": np.float64, "left": np.intp,
                "right": np.intp, "label": np.int64, "counts": np.int64}


def _tree_to_dict(t: DecisionTreeModel) -> dict:
    d = {k: getattr(t, k).tolist() for k in _TREE_ARRAYS}
    d.update(n_features=t.n_features, max_depth=t.max_depth, min_samples_split=t.min_samples_split)
    return d


def _tree_from_dict(d: dict) -> DecisionTreeModel:
    arrays = {k: np.asarray(d[k], dtype=dt) for k, dt in _TREE_ARRAYS.items()}
    arrays["counts"] = arrays["counts"].reshape(-1, 2)
    return DecisionTreeModel(**arrays, n_features=d["n_features"], max_depth=d["max_depth"],
                             min_samples_split=d["min_samples_split"])


def model_to_dict(model) -> tuple[str, dict]:
    if isinstance(model, DecisionTreeModel):
        return "tree", _tree_to_dict(model)
    if isinstance(model, RandomForestModel):
        return "forest", {"trees": [_tree_to_dict(t) for t in model.trees],
                          "features_per_split": model.features_per_split,
                          "seeds": model.seeds, "bootstrap": model.bootstrap}
    if isinstance(model, AdaBoostModel):
        return "adaboost", {"stumps": [_tree_to_dict(t) for t in model.stumps],
                            "alphas": model.alphas, "rounds": model.rounds, "errors": model.errors}
    if isinstance(model, SvmModel):
        s = model.spec
        return "svm", {"spec": {"kind": s.kind, "C": s.C, "gamma_mode": s.gamma_mode, "degree": s.degree},
                       "gamma": model.gamma, "support_vectors": model.support_vectors.tolist(),
                       "dual_coef": model.dual_coef.tolist(), "bias": model.bias,
                       "support_indices": model.support_indices.tolist(), "alpha": model.alpha.tolist(),
                       "n_iter": model.n_iter, "kkt_gap": model.kkt_gap}
    raise TypeError(f"cannot serialize {type(model).__name__}")


def model_from_dict(variant: str, d: dict):
    if variant == "tree":
        return _tree_from_dict(d)
    if variant == "forest":
        return RandomForestModel(trees=[_tree_from_dict(t) for t in d["trees"]],
                                 features_per_split=d["features_per_split"], seeds=d["seeds"],
                                 bootstrap=d["bootstrap"])
    if variant == "adaboost":
        return AdaBoostModel(stumps=[_tree_from_dict(t) for t in d["stumps"]], alphas=d["alphas"],
                             rounds=d["rounds"], errors=d["errors"])
    if variant == "svm":
        return SvmModel(spec=KernelSpec(**d["spec"]), gamma=d["gamma"],
                        support_vectors=np.asarray(d["support_vectors"], dtype=np.float64),
                        dual_coef=np.asarray(d["dual_coef"], dtype=np.float64), bias=d["bias"],
                        support_indices=np.asarray(d["support_indices"], dtype=np.intp),
                        alpha=np.asarray(d["alpha"], dtype=np.float64),
                        n_iter=d["n_iter"], kkt_gap=d["kkt_gap"])
    raise ValueError(f"unknown model variant {variant!r}")


def save_model(model, path: str | os.PathLike, pca: PcaModel | None = None, side: int | None = None) -> None:
    """Write a classifier, optionally bundled with the PCA it was trained behind."""
    variant, body = model_to_dict(model)
    doc = {"model": body}
    if pca is not None:
        doc["pca"] = {"mean": pca.mean.tolist(), "components": pca.components.tolist(),
                      "explained_variance": pca.explained_variance.tolist()}
    if side is not None:
        doc["side"] = side
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{HEADER} {variant}\n")
        json.dump(doc, fh)
        fh.write("\n")


def load_model(path: str | os.PathLike):
    """Return ``(model, pca_or_None, side_or_None)``."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2 or header[0] != HEADER:
            raise ValueError(f"{path}: missing '{HEADER} <variant>' header")
        doc = json.load(fh)
    model = model_from_dict(header[1], doc["model"])
    pca = None
    if "pca" in doc:
        p = doc["pca"]
        pca = PcaModel(mean=np.asarray(p["mean"]), components=np.asarray(p["components"]),
                       explained_variance=np.asarray(p["explained_variance"]))
    return model, pca, doc.get("side")
