"""Image ingestion and the flat feature-matrix text format.

Every image goes through the same chain: decode to 8-bit gray, bilinear
resize to ``side x side``, row-major flatten, divide by 255. Rows are stacked
into a :class:`Dataset` and persisted as comma-separated text with the label
in the last column.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DatasetParseError, EmptyDatasetError, ImageFormatError

DEFAULT_SIDE = 300
IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg", ".bmp", ".gif", ".tif", ".tiff", ".pgm", ".ppm"}

# ITU-R 601 luma weights
_LUMA = np.array([0.299, 0.587, 0.114])


@dataclass(frozen=True)
class GrayImage:
    """8-bit grayscale image; ``pixels`` has shape (height, width)."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.size == 0:
            raise ValueError(f"expected a non-empty 2-D pixel grid, got shape {px.shape}")
        if px.dtype != np.uint8:
            if np.any(px < 0) or np.any(px > 255) or np.any(px != np.round(px)):
                raise ValueError("pixel intensities must be integers in [0, 255]")
            px = px.astype(np.uint8)
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class Dataset:
    """n x d feature matrix in [0, 1] plus one binary label per row (1 = tumor)."""

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.features, dtype=np.float64)
        y = np.asarray(self.labels)
        if X.ndim != 2:
            raise ValueError(f"features must be 2-D, got shape {X.shape}")
        if y.ndim != 1 or y.shape[0] != X.shape[0]:
            raise ValueError(f"labels shape {y.shape} does not match {X.shape[0]} rows")
        if y.size and not np.all((y == 0) | (y == 1)):
            raise ValueError("labels must be 0 or 1")
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y.astype(np.int64))

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    def subset(self, idx: Sequence[int] | np.ndarray) -> "Dataset":
        idx = np.asarray(idx, dtype=np.intp)
        return Dataset(self.features[idx], self.labels[idx])

    def label_counts(self) -> tuple[int, int]:
        """(#healthy, #tumor)."""
        n1 = int(self.labels.sum())
        return self.n - n1, n1


def _round_half_up(x: np.ndarray) -> np.ndarray:
    return np.floor(x + 0.5)


def rgb_to_gray(rgb: np.ndarray) -> np.ndarray:
    """Luminance of an (..., 3) array, rounded to integers in [0, 255]."""
    y = _round_half_up(np.asarray(rgb, dtype=np.float64) @ _LUMA)
    return np.clip(y, 0, 255).astype(np.uint8)


def load_image(path: str | os.PathLike) -> GrayImage:
    """Decode a raster file into a :class:`GrayImage`.

    Color images are reduced with the 0.299/0.587/0.114 luma weights.
    Raises ``FileNotFoundError``/``OSError`` when the file can't be read and
    :class:`ImageFormatError` when it can't be decoded.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such image file: {path}")
    try:
        with Image.open(path) as im:
            im.load()
            if im.mode == "L":
                px = np.asarray(im, dtype=np.uint8)
            elif im.mode in ("I;16", "I;16B", "I;16L", "I"):
                arr = np.asarray(im, dtype=np.float64)
                hi = arr.max() if arr.size else 0
                scale = 255.0 / 65535.0 if hi > 255 else 1.0
                px = np.clip(_round_half_up(arr * scale), 0, 255).astype(np.uint8)
            else:
                px = rgb_to_gray(np.asarray(im.convert("RGB")))
    except UnidentifiedImageError as exc:
        raise ImageFormatError(f"cannot decode image {path}: {exc}") from exc
    except (SyntaxError, ValueError) as exc:
        # truncated or corrupt payloads surface from the decoders this way
        raise ImageFormatError(f"cannot decode image {path}: {exc}") from exc
    return GrayImage(px)


def resize_image(img: GrayImage, target_w: int, target_h: int) -> GrayImage:
    """Bilinear resample to ``target_w x target_h``.

    Pixel centers are aligned (``src = (dst + 0.5) * scale - 0.5``) and
    clamped to the source grid, so resizing to the same shape is the identity.
    """
    if target_w < 1 or target_h < 1:
        raise ValueError(f"target size must be positive, got {target_w}x{target_h}")
    src = img.pixels.astype(np.float64)
    h, w = src.shape
    if (h, w) == (target_h, target_w):
        return GrayImage(img.pixels.copy())

    def axis(n_out, n_in):
        pos = (np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5
        pos = np.clip(pos, 0.0, n_in - 1)
        lo = np.floor(pos).astype(np.intp)
        hi = np.minimum(lo + 1, n_in - 1)
        return lo, hi, pos - lo

    y0, y1, fy = axis(target_h, h)
    x0, x1, fx = axis(target_w, w)
    fy = fy[:, None]
    top = src[y0][:, x0] * (1 - fx) + src[y0][:, x1] * fx
    bot = src[y1][:, x0] * (1 - fx) + src[y1][:, x1] * fx
    out = top * (1 - fy) + bot * fy
    return GrayImage(np.clip(_round_half_up(out), 0, 255).astype(np.uint8))


def flatten(img: GrayImage) -> np.ndarray:
    """Row-major pixel sequence: index ``r * width + c`` holds pixel (r, c)."""
    return img.pixels.reshape(-1).astype(np.int64)


def unflatten(raw: np.ndarray, width: int, height: int) -> GrayImage:
    raw = np.asarray(raw)
    if raw.size != width * height:
        raise ValueError(f"{raw.size} values cannot form a {width}x{height} image")
    return GrayImage(raw.reshape(height, width))


def normalize(raw: np.ndarray) -> np.ndarray:
    raw = np.asarray(raw)
    if raw.size and (raw.min() < 0 or raw.max() > 255):
        raise ValueError("raw intensities must lie in [0, 255]")
    return raw.astype(np.float64) / 255.0


def denormalize(features: np.ndarray) -> np.ndarray:
    return _round_half_up(np.asarray(features, dtype=np.float64) * 255.0).astype(np.int64)


def image_to_features(img: GrayImage, side: int = DEFAULT_SIDE) -> np.ndarray:
    """resize -> flatten -> normalize for a single image."""
    return normalize(flatten(resize_image(img, side, side)))


def preprocess_file(path: str | os.PathLike, side: int = DEFAULT_SIDE) -> np.ndarray:
    return image_to_features(load_image(path), side)


def list_images(directory: str | os.PathLike) -> list[Path]:
    """Image files directly inside ``directory``, sorted by filename."""
    directory = Path(directory)
    if not directory.is_dir():
        raise NotADirectoryError(f"not a directory: {directory}")
    files = [p for p in directory.iterdir() if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES]
    return sorted(files, key=lambda p: p.name)


def build_dataset(tumor_dir: str | os.PathLike, healthy_dir: str | os.PathLike,
                  side: int = DEFAULT_SIDE) -> Dataset:
    """Preprocess every image of both directories (tumor first) into a Dataset."""
    if side < 1:
        raise ValueError("side must be positive")
    tumor = list_images(tumor_dir)
    healthy = list_images(healthy_dir)
    files = tumor + healthy
    if not files:
        raise EmptyDatasetError("empty dataset: no images found in either directory")
    X = np.empty((len(files), side * side), dtype=np.float64)
    for i, path in enumerate(files):
        try:
            X[i] = preprocess_file(path, side)
        except ImageFormatError as exc:
            raise ImageFormatError(f"{path.name}: {exc}") from exc
    y = np.concatenate([np.ones(len(tumor), np.int64), np.zeros(len(healthy), np.int64)])
    return Dataset(X, y)


def _format_rows(X: np.ndarray, y: np.ndarray) -> Iterable[str]:
    # one %-format over the whole row is ~3x faster than joining per-field strings
    template = ",".join(["%.6f"] * X.shape[1]) + ",%d\n"
    for row, label in zip(X, y):
        yield template % (*row.tolist(), int(label))


def save_dataset(ds: Dataset, path: str | os.PathLike) -> None:
    """Write one comma-separated line per row: d features (6 decimals) then the label."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.writelines(_format_rows(ds.features, ds.labels))


def load_dataset(path: str | os.PathLike) -> Dataset:
    rows: list[np.ndarray] = []
    labels: list[int] = []
    width = None
    with open(path, "r", encoding="ascii") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            tokens = line.split(",")
            if width is None:
                if len(tokens) < 2:
                    raise DatasetParseError(line_no, "need at least one feature and a label")
                width = len(tokens)
            elif len(tokens) != width:
                raise DatasetParseError(line_no, f"expected {width} fields, found {len(tokens)}")
            try:
                values = np.array(tokens, dtype=np.float64)
            except ValueError as exc:
                raise DatasetParseError(line_no, f"non-numeric field ({exc})") from None
            label = values[-1]
            if label not in (0.0, 1.0):
                raise DatasetParseError(line_no, f"label must be 0 or 1, got {tokens[-1]!r}")
            if not np.all(np.isfinite(values[:-1])):
                raise DatasetParseError(line_no, "non-finite feature value")
            rows.append(values[:-1])
            labels.append(int(label))
    if not rows:
        raise EmptyDatasetError(f"empty dataset: {path} has no rows")
    return Dataset(np.vstack(rows), np.asarray(labels, dtype=np.int64))
