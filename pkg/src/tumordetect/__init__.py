"""Brain-MRI tumor detection with PCA features and four classical classifiers."""

__version__ = "0.1.0"

from .dataset import Dataset, GrayImage, build_dataset, load_dataset, load_image, save_dataset  # noqa: E402
from .evaluation import EvalReport, repeated_evaluate  # noqa: E402
from .gridsearch import enumerate_grid, grid_search  # noqa: E402
from .pca import PcaModel, pca_fit, pca_transform  # noqa: E402

__all__ = [
    "Dataset", "GrayImage", "build_dataset", "load_dataset", "load_image", "save_dataset",
    "EvalReport", "repeated_evaluate", "enumerate_grid", "grid_search",
    "PcaModel", "pca_fit", "pca_transform",
]
