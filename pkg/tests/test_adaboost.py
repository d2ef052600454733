import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tumordetect.classifiers import AdaBoostModel, adaboost_fit, adaboost_predict, tree_fit

# Hand trace on x = 1..4, y = 0,1,0,1 (uniform start):
#   round 1: stump x<=1.5 -> 0, err 1/4 (x=3 wrong), alpha = ln(3)/2,
#            weights -> [1/6, 1/6, 1/2, 1/6]
#   round 2: stump x<=3.5 -> 0, err 1/6 (x=2 wrong), alpha = ln(5)/2
#   round 3: stump x<=2.5 -> 1, err 1/5 (x=1, x=4 wrong), alpha = ln(2)
X4 = np.array([[1.0], [2.0], [3.0], [4.0]])
Y4 = np.array([0, 1, 0, 1])


def test_hand_traced_first_round():
    trace = []
    model = adaboost_fit(X4, Y4, rounds=1, trace=trace)
    assert model.alphas[0] == pytest.approx(0.5 * math.log(3), abs=1e-9)
    assert model.errors[0] == pytest.approx(0.25)
    trace = []
    adaboost_fit(X4, Y4, rounds=3, trace=trace)
    assert np.allclose(trace[1], [1 / 6, 1 / 6, 1 / 2, 1 / 6], atol=1e-12)
    assert np.allclose(trace[2], [0.1, 0.5, 0.3, 0.1], atol=1e-12)


def test_hand_traced_three_rounds():
    model = adaboost_fit(X4, Y4, rounds=3)
    expected = [0.5 * math.log(3), 0.5 * math.log(5), math.log(2)]
    assert np.allclose(model.alphas, expected, atol=1e-9)
    assert [s.threshold[0] for s in model.stumps] == [1.5, 3.5, 2.5]
    assert np.array_equal(model.predict(X4), Y4)
    # two rounds are not enough: x=2 is still wrong
    assert adaboost_fit(X4, Y4, rounds=2).predict(X4).tolist() == [0, 0, 0, 1]


def test_perfect_stump_stops_early():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    model = adaboost_fit(X, np.array([0, 0, 1, 1]), rounds=50)
    assert len(model.stumps) == 1 and model.alphas == [10.0]
    assert np.array_equal(model.predict(X), [0, 0, 1, 1])


def test_chance_level_stump_is_discarded():
    # identical rows, opposite labels: best stump is a leaf with err exactly 0.5
    X = np.zeros((2, 1))
    model = adaboost_fit(X, np.array([0, 1]))
    assert model.stumps == [] and model.alphas == []
    assert model.predict(X).tolist() == [0, 0]


def test_weighted_vote():
    lo = tree_fit(np.array([[0.0], [1.0]]), np.array([0, 1]))   # x > 0.5 -> 1
    hi = tree_fit(np.array([[0.0], [1.0]]), np.array([1, 0]))   # x > 0.5 -> 0
    model = AdaBoostModel(stumps=[lo, hi], alphas=[1.0, 0.2], rounds=2)
    assert adaboost_predict(model, np.array([1.0])) == 1
    model = AdaBoostModel(stumps=[lo, hi], alphas=[0.2, 1.0], rounds=2)
    assert adaboost_predict(model, np.array([1.0])) == 0
    single = AdaBoostModel(stumps=[lo], alphas=[0.7], rounds=1)
    assert single.predict(np.array([[0.0], [1.0]])).tolist() == [0, 1]
    tied = AdaBoostModel(stumps=[lo, hi], alphas=[0.5, 0.5], rounds=2)
    assert tied.predict(np.array([1.0])) == 0


@given(st.integers(0, 2**32 - 1), st.integers(6, 60))
def test_exponential_bound(seed, n):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, 3))
    y = (X[:, 0] * X[:, 1] + 0.3 * rng.normal(size=n) > 0).astype(int)
    if y.min() == y.max():
        y[0] = 1 - y[0]
    model = adaboost_fit(X, y, rounds=20)
    assert all(e < 0.5 for e in model.errors)
    bound = model.error_bound()
    assert all(b2 <= b1 + 1e-15 for b1, b2 in zip(bound, bound[1:]))
    if bound:
        train_err = np.mean(model.predict(X) != y)
        assert train_err <= bound[-1] + 1e-12


def test_single_class_rejected():
    with pytest.raises(ValueError):
        adaboost_fit(np.zeros((3, 2)), np.ones(3))
