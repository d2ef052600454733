"""The four binary classifiers. Each model exposes ``predict(X) -> {0, 1}``."""
from .adaboost import AdaBoostModel, adaboost_fit, adaboost_predict
from .forest import RandomForestModel, forest_fit, forest_predict, majority_vote
from .kernels import GAMMA_MODES, KERNELS, KernelSpec, kernel_eval, kernel_matrix, resolve_gamma
from .serialize import load_model, save_model
from .svm import SvmModel, kkt_residuals, svm_fit, svm_predict
from .tree import DecisionTreeModel, gini, tree_fit, tree_predict

__all__ = [
    "AdaBoostModel", "adaboost_fit", "adaboost_predict",
    "RandomForestModel", "forest_fit", "forest_predict", "majority_vote",
    "GAMMA_MODES", "KERNELS", "KernelSpec", "kernel_eval", "kernel_matrix", "resolve_gamma",
    "load_model", "save_model",
    "SvmModel", "kkt_residuals", "svm_fit", "svm_predict",
    "DecisionTreeModel", "gini", "tree_fit", "tree_predict",
]
