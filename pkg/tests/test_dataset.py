import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays
from PIL import Image

from tumordetect.dataset import (Dataset, GrayImage, build_dataset, denormalize, flatten,
                                 load_dataset, load_image, normalize, resize_image,
                                 save_dataset, unflatten)
from tumordetect.errors import DatasetParseError, EmptyDatasetError, ImageFormatError

pixel_grids = arrays(np.uint8, st.tuples(st.integers(1, 12), st.integers(1, 12)))


def naive_bilinear(px, out_w, out_h):
    """Per-pixel reference resampler, center-aligned, clamped at the border."""
    h, w = px.shape
    out = np.zeros((out_h, out_w))
    for r in range(out_h):
        sy = min(max((r + 0.5) * h / out_h - 0.5, 0.0), h - 1)
        y0 = int(sy)
        y1 = min(y0 + 1, h - 1)
        wy = sy - y0
        for c in range(out_w):
            sx = min(max((c + 0.5) * w / out_w - 0.5, 0.0), w - 1)
            x0 = int(sx)
            x1 = min(x0 + 1, w - 1)
            wx = sx - x0
            top = px[y0, x0] * (1 - wx) + px[y0, x1] * wx
            bot = px[y1, x0] * (1 - wx) + px[y1, x1] * wx
            out[r, c] = top * (1 - wy) + bot * wy
    return np.clip(np.round(out), 0, 255)


# -- load_image ---------------------------------------------------------------

@pytest.mark.parametrize("rgb, gray", [((255, 255, 255), 255), ((0, 0, 0), 0), ((255, 0, 0), 76)])
def test_luminance_conversion(tmp_path, rgb, gray):
    path = tmp_path / "c.png"
    Image.new("RGB", (3, 2), rgb).save(path)
    img = load_image(path)
    assert (img.width, img.height) == (3, 2)
    assert np.all(img.pixels == gray)


def test_load_gray_png_and_jpeg(tmp_path):
    px = np.arange(64, dtype=np.uint8).reshape(8, 8) * 3
    Image.fromarray(px).save(tmp_path / "a.png")
    assert np.array_equal(load_image(tmp_path / "a.png").pixels, px)
    Image.fromarray(np.full((8, 8), 100, np.uint8)).save(tmp_path / "b.jpg", quality=95)
    assert np.all(np.abs(load_image(tmp_path / "b.jpg").pixels.astype(int) - 100) <= 1)


def test_load_image_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_image(tmp_path / "missing.png")
    bad = tmp_path / "bad.png"
    bad.write_bytes(b"definitely not an image")
    with pytest.raises(ImageFormatError):
        load_image(bad)


# -- resize -------------------------------------------------------------------

def test_resize_identity():
    px = np.random.default_rng(0).integers(0, 256, (300, 300), dtype=np.uint8)
    out = resize_image(GrayImage(px), 300, 300)
    assert np.array_equal(out.pixels, px)


@given(st.integers(0, 255), st.integers(1, 40), st.integers(1, 40), st.integers(1, 40), st.integers(1, 40))
def test_resize_constant_image_stays_constant(value, w, h, tw, th):
    out = resize_image(GrayImage(np.full((h, w), value, np.uint8)), tw, th)
    assert out.pixels.shape == (th, tw)
    assert np.all(out.pixels == value)


def test_resize_checkerboard_matches_naive_oracle():
    yy, xx = np.mgrid[0:600, 0:600]
    board = (((yy // 7 + xx // 5) % 2) * 255).astype(np.uint8)
    out = resize_image(GrayImage(board), 300, 300).pixels.astype(int)
    ref = naive_bilinear(board.astype(float), 300, 300)
    assert np.max(np.abs(out - ref)) <= 1


@given(pixel_grids, st.integers(1, 15), st.integers(1, 15))
def test_resize_matches_naive_oracle_small(px, tw, th):
    out = resize_image(GrayImage(px), tw, th).pixels.astype(int)
    assert np.max(np.abs(out - naive_bilinear(px.astype(float), tw, th))) <= 1


def test_resize_rejects_zero_target():
    with pytest.raises(ValueError):
        resize_image(GrayImage(np.zeros((4, 4), np.uint8)), 0, 4)


# -- flatten / normalize ------------------------------------------------------

def test_flatten_row_major():
    assert flatten(GrayImage(np.array([[1, 2], [3, 4]]))).tolist() == [1, 2, 3, 4]
    assert flatten(GrayImage(np.array([[9, 8, 7]]))).tolist() == [9, 8, 7]
    assert flatten(GrayImage(np.zeros((300, 300), np.uint8))).shape == (90000,)


@given(pixel_grids)
def test_flatten_is_bijective(px):
    img = GrayImage(px)
    flat = flatten(img)
    r, c = px.shape[0] - 1, px.shape[1] - 1
    assert flat[r * img.width + c] == px[r, c]
    assert np.array_equal(unflatten(flat, img.width, img.height).pixels, px)


def test_normalize_values():
    out = normalize(np.array([0, 255, 128]))
    assert out[0] == 0.0 and out[1] == 1.0
    assert out[2] == pytest.approx(0.50196078431, abs=1e-10)
    assert np.all(normalize(np.full(5, 17)) == 17 / 255)
    with pytest.raises(ValueError):
        normalize(np.array([0, 256]))
    with pytest.raises(ValueError):
        normalize(np.array([-1]))


@given(st.lists(st.integers(0, 255), min_size=1, max_size=50))
def test_normalize_monotone_and_invertible(raw):
    raw = np.array(raw)
    out = normalize(raw)
    assert np.all((out >= 0) & (out <= 1))
    order = np.argsort(raw, kind="stable")
    assert np.all(np.diff(out[order]) >= 0)
    assert np.array_equal(denormalize(out), raw)


# -- build_dataset ------------------------------------------------------------

def _write(dirpath, names, value=128, size=(5, 4)):
    dirpath.mkdir(parents=True, exist_ok=True)
    for name in names:
        Image.new("L", size, value).save(dirpath / name)


def test_build_dataset_labels_and_order(tmp_path):
    _write(tmp_path / "yes", ["b.png", "a.png", "c.png"], value=200)
    _write(tmp_path / "no", ["z.png", "m.png"], value=10)
    (tmp_path / "yes" / "notes.txt").write_text("ignored")
    ds = build_dataset(tmp_path / "yes", tmp_path / "no", side=10)
    assert (ds.n, ds.d) == (5, 100)
    assert ds.labels.tolist() == [1, 1, 1, 0, 0]
    assert ds.label_counts() == (2, 3)
    assert np.allclose(ds.features[:3], 200 / 255) and np.allclose(ds.features[3:], 10 / 255)


def test_build_dataset_single_image(tmp_path):
    _write(tmp_path / "yes", ["only.png"])
    (tmp_path / "no").mkdir()
    ds = build_dataset(tmp_path / "yes", tmp_path / "no", side=3)
    assert ds.n == 1 and ds.labels.tolist() == [1]


def test_build_dataset_empty(tmp_path):
    (tmp_path / "yes").mkdir()
    (tmp_path / "no").mkdir()
    with pytest.raises(EmptyDatasetError, match="empty dataset"):
        build_dataset(tmp_path / "yes", tmp_path / "no")


def test_build_dataset_names_bad_file(tmp_path):
    _write(tmp_path / "yes", ["good.png"])
    (tmp_path / "no").mkdir()
    (tmp_path / "no" / "broken.png").write_bytes(b"\x89PNG garbage")
    with pytest.raises(ImageFormatError, match="broken.png"):
        build_dataset(tmp_path / "yes", tmp_path / "no", side=4)


# -- save / load --------------------------------------------------------------

@given(st.integers(1, 8), st.integers(1, 30), st.integers(0, 2**32 - 1))
def test_save_load_round_trip(tmp_path_factory, n, d, seed):
    rng = np.random.default_rng(seed)
    ds = Dataset(rng.random((n, d)), rng.integers(0, 2, n))
    path = tmp_path_factory.mktemp("rt") / "ds.txt"
    save_dataset(ds, path)
    back = load_dataset(path)
    assert np.array_equal(back.labels, ds.labels)
    assert np.max(np.abs(back.features - ds.features)) <= 5e-7


def test_file_layout(tmp_path):
    ds = Dataset(np.array([[0.0, 0.5, 1.0], [0.25, 1 / 3, 0.123456789]]), np.array([1, 0]))
    path = tmp_path / "ds.txt"
    save_dataset(ds, path)
    assert path.read_text() == "0.000000,0.500000,1.000000,1\n0.250000,0.333333,0.123457,0\n"


@pytest.mark.parametrize("content, line", [
    ("0.1,0.2,1\n0.3,0.4,2\n", 2),
    ("0.1,0.2,1\n0.3,0\n", 2),
    ("0.1,abc,1\n", 1),
    ("0.1,0.2,1\n0.1,0.2,0\n0.5,0.5,0.5\n", 3),
])
def test_load_rejects_malformed(tmp_path, content, line):
    path = tmp_path / "bad.txt"
    path.write_text(content)
    with pytest.raises(DatasetParseError) as err:
        load_dataset(path)
    assert err.value.line_no == line
    assert f"line {line}" in str(err.value)


def test_dataset_invariants():
    with pytest.raises(ValueError):
        Dataset(np.zeros((2, 3)), np.array([0, 1, 1]))
    with pytest.raises(ValueError):
        Dataset(np.zeros((2, 3)), np.array([0, 2]))
