import numpy as np
import pytest
from hypothesis import given, strategies as st

from tumordetect.dataset import Dataset, GrayImage
from tumordetect.errors import EvaluationError, UndefinedMetricError
from tumordetect.evaluation import (EvalReport, RunRecord, SplitSpec, accuracy, aggregate, class_recall,
                                    format_table, make_fitter, prepare_runs, repeated_evaluate,
                                    reports_to_csv, split_indices, train_test_split)
from tumordetect.pca import pca_fit, pca_transform


def toy_dataset(n=60, d=16, seed=0):
    rng = np.random.default_rng(seed)
    y = np.arange(n) % 2
    X = rng.random((n, d)) * 0.3 + y[:, None] * 0.5
    return Dataset(X, y)


def test_split_sizes():
    ds = toy_dataset(253, 4)
    tr, te = train_test_split(ds, SplitSpec(0.8, 1))
    assert (tr.n, te.n) == (202, 51)
    tr, te = train_test_split(toy_dataset(2, 3), SplitSpec(0.8, 0))
    assert (tr.n, te.n) == (1, 1)


@given(st.integers(2, 300), st.floats(0.05, 0.95), st.integers(0, 10**6))
def test_split_partition(n, frac, seed):
    spec = SplitSpec(frac, seed)
    n_train = int(np.floor(frac * n))
    if n_train < 1 or n_train >= n:
        with pytest.raises(ValueError):
            split_indices(n, spec)
        return
    tr, te = split_indices(n, spec)
    assert tr.size == n_train and te.size == n - n_train
    assert np.array_equal(np.sort(np.concatenate([tr, te])), np.arange(n))
    tr2, te2 = split_indices(n, spec)
    assert np.array_equal(tr, tr2) and np.array_equal(te, te2)


def test_split_spec_validation():
    for bad in (0.0, 1.0, 1.5):
        with pytest.raises(ValueError):
            SplitSpec(bad)


def test_metrics():
    truth = np.array([1, 1, 0, 0, 1, 0, 1, 0, 1, 1])
    preds = truth.copy()
    preds[[0, 2]] = 1 - preds[[0, 2]]
    assert accuracy(preds, truth) == 80.0
    assert accuracy(truth, truth) == 100.0
    assert class_recall(truth, truth, 1) == class_recall(truth, truth, 0) == 100.0
    assert class_recall([1, 0, 0], [1, 1, 0], 1) == 50.0
    assert class_recall([1, 0, 0], [1, 1, 0], 0) == 100.0
    with pytest.raises(UndefinedMetricError):
        class_recall([1, 1], [1, 1], 0)
    with pytest.raises(ValueError):
        accuracy([1], [1, 0])
    with pytest.raises(ValueError):
        accuracy([], [])


@given(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)), min_size=1, max_size=60))
def test_accuracy_is_weighted_recall(pairs):
    truth = np.array([t for t, _ in pairs])
    preds = np.array([p for _, p in pairs])
    n1 = truth.sum()
    n0 = truth.size - n1
    total = 0.0
    if n1:
        total += n1 * class_recall(preds, truth, 1)
    if n0:
        total += n0 * class_recall(preds, truth, 0)
    assert accuracy(preds, truth) == pytest.approx(total / truth.size)


def test_pca_fit_on_training_rows_only():
    ds = toy_dataset()
    prepared = prepare_runs(ds, k_pca=5, runs=2, base_seed=3)
    for p in prepared:
        ref = pca_fit(ds.features[p.train_idx], 5)
        assert np.allclose(p.pca.mean, ds.features[p.train_idx].mean(axis=0))
        assert np.allclose(p.Z_test, pca_transform(ref, ds.features[p.test_idx]), atol=1e-10)
        assert p.seed == 3 + p.run


@pytest.mark.parametrize("algo", ["tree", "forest", "adaboost", "svm"])
def test_repeated_evaluate_runs(algo):
    ds = toy_dataset()
    rep = repeated_evaluate(ds, algo, k_pca=5, runs=3, base_seed=0,
                            external_image=ds.features[1])
    assert rep.runs == 3 and len(rep.records) == 3
    for r in rep.records:
        total = r.n_test_pos * r.recall_sick + r.n_test_neg * r.recall_not_sick
        assert r.accuracy == pytest.approx(total / r.n_test)
    assert rep.pct_test is not None and (rep.pct_test * 3 / 100) == pytest.approx(round(rep.pct_test * 3 / 100))
    assert rep.model_accuracy_pct > 90


def test_single_run_average_is_identity_and_deterministic():
    ds = toy_dataset()
    rep = repeated_evaluate(ds, "tree", k_pca=4, runs=1, base_seed=9)
    r = rep.records[0]
    assert rep.model_accuracy_pct == r.accuracy
    assert rep.pct_sick == r.recall_sick and rep.pct_not_sick == r.recall_not_sick
    again = repeated_evaluate(ds, "tree", k_pca=4, runs=1, base_seed=9)
    assert reports_to_csv([rep]) == reports_to_csv([again])


def test_pct_test_counts_tumor_predictions():
    recs = [RunRecord(run=i, seed=i, split_hash="h", n_test=2, n_test_pos=1, n_test_neg=1, accuracy=50.0,
                      recall_sick=100.0, recall_not_sick=0.0, external_pred=int(i < 7)) for i in range(10)]
    rep = aggregate("adaboost", recs)
    assert rep.pct_test == 70.0
    assert rep.model_accuracy_pct == 50.0


def test_missing_class_flags_run():
    recs = [RunRecord(0, 0, "a", 3, 3, 0, 100.0, 100.0, None),
            RunRecord(1, 1, "b", 3, 1, 2, 66.0, 0.0, 100.0)]
    rep = aggregate("tree", recs)
    assert rep.flagged_runs == [0]
    assert rep.pct_sick == 50.0 and rep.pct_not_sick == 100.0
    assert rep.pct_test is None


def test_errors_carry_run_index():
    y = np.zeros(20, int)
    y[0] = 1  # most training splits see a single class
    ds = Dataset(np.random.default_rng(0).random((20, 6)), y)
    with pytest.raises(EvaluationError, match=r"run \d+"):
        repeated_evaluate(ds, "svm", k_pca=3, runs=5)
    with pytest.raises(ValueError):
        repeated_evaluate(ds, "tree", runs=0)


def test_make_fitter_rejects_unknowns():
    with pytest.raises(ValueError):
        make_fitter("cnn")
    with pytest.raises(ValueError):
        make_fitter("tree", {"n_trees": 3})
    make_fitter("svm", {"kernel": "linear", "C": 2, "gamma": "auto", "degree": 3})


def test_external_image_through_pipeline():
    side = 4
    ds = toy_dataset(40, side * side)
    bright = GrayImage(np.full((8, 8), 230, np.uint8))
    rep = repeated_evaluate(ds, "tree", k_pca=3, runs=2, external_image=bright)
    assert rep.pct_test in (0.0, 50.0, 100.0)


def test_table_and_csv():
    rep = EvalReport("tree", 72.54, 79.34, 64.39, 30.0, 10)
    table = format_table([rep])
    assert "Decision Tree" in table and "72.54" in table and "P. not sick" in table
    assert reports_to_csv([rep]).splitlines() == [
        "algorithm,model_accuracy_pct,pct_sick,pct_not_sick,pct_test,runs",
        "tree,72.5400,79.3400,64.3900,30.0000,10",
    ]
