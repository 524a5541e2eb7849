import numpy as np
import pytest

from aquagauge import gbm
from aquagauge.errors import (
    ArityMismatch,
    EmptyTargets,
    InvalidHyperparams,
    InvariantViolation,
    LengthMismatch,
    NonFinite,
)
from aquagauge.gbm import (
    GbmModel,
    Hyperparams,
    gbm_fit,
    gbm_predict,
    init_constant,
    negative_gradient,
    squared_loss,
)
from aquagauge.metrics import r_squared
from aquagauge.model_io import serialize_model
from aquagauge.tree import FeatureMatrix, Leaf, RegressionTree, fit_tree

NAMES = ("x0", "x1", "x2", "x3")
SMALL = Hyperparams(n_trees=200, learning_rate=0.1, max_depth=4, min_samples_split=20, min_samples_leaf=5)


def additive_task(n, seed):
    rng = np.random.default_rng(seed)
    x = rng.uniform(-3, 3, size=(n, 4))
    y = 3 * np.sin(x[:, 0]) + x[:, 1] ** 2 + 2 * x[:, 2] + 0.5 * x[:, 3] + rng.normal(scale=0.3, size=n)
    return FeatureMatrix(x, NAMES), y


@pytest.fixture(scope="module")
def trained():
    x, y = additive_task(500, seed=0)
    return x, y, gbm_fit(x, y, SMALL)


@pytest.mark.parametrize("targets,expected", [
    ([1.0, 2.0, 3.0], 2.0),
    ([5.0], 5.0),
    ([-1.0, 1.0], 0.0),
])
def test_init_constant(targets, expected):
    assert init_constant(targets) == expected


def test_init_constant_empty():
    with pytest.raises(EmptyTargets):
        init_constant([])


@pytest.mark.parametrize("targets,predictions,expected", [
    ([3.0, 3.0], [1.0, 5.0], [2.0, -2.0]),
    ([1.5, -2.0], [1.5, -2.0], [0.0, 0.0]),
    ([10.0], [7.5], [2.5]),
])
def test_negative_gradient(targets, predictions, expected):
    assert negative_gradient(targets, predictions).tolist() == expected


def test_negative_gradient_length_mismatch():
    with pytest.raises(LengthMismatch):
        negative_gradient([1.0, 2.0], [1.0])


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(1)
    y = rng.uniform(-10, 10, size=1000)
    f = rng.uniform(-10, 10, size=1000)
    eps = 1e-4

    numeric = (squared_loss(y, f + eps) - squared_loss(y, f - eps)) / (-2 * eps)
    assert np.max(np.abs(numeric - negative_gradient(y, f))) < 1e-6


@pytest.mark.parametrize("field,value", [
    ("n_trees", -1),
    ("learning_rate", 0.0),
    ("learning_rate", 1.5),
    ("max_depth", -1),
    ("min_samples_split", 1),
    ("min_samples_leaf", 0),
    ("seed", 1.5),
    ("n_trees", 2.0),
])
def test_invalid_hyperparams(field, value):
    with pytest.raises(InvalidHyperparams) as exc:
        Hyperparams(**{field: value})
    assert exc.value.name == field


def test_default_hyperparams():
    hp = Hyperparams()
    assert (hp.n_trees, hp.learning_rate, hp.max_depth) == (100, 0.1, 8)
    assert (hp.min_samples_split, hp.min_samples_leaf) == (200, 30)


def test_constant_targets():
    x, _ = additive_task(60, seed=2)
    model = gbm_fit(x, np.full(60, 3.0), Hyperparams(n_trees=10, min_samples_split=2, min_samples_leaf=1))

    assert np.all(model.predict_many(x) == 3.0)
    assert model.training_curve == (0.0,) * 11


def test_single_mean_step():
    x, y = additive_task(100, seed=3)
    model = gbm_fit(x, y, Hyperparams(n_trees=1, max_depth=0))

    assert model.f0 == pytest.approx(np.mean(y))
    assert len(model.trees) == 1
    assert len(model.trees[0].nodes) == 1
    assert model.training_curve[1] == pytest.approx(np.var(y), rel=1e-12)


def test_fit_errors():
    x, y = additive_task(10, seed=4)
    with pytest.raises(EmptyTargets):
        gbm_fit(FeatureMatrix(np.zeros((0, 4)), NAMES), [])
    with pytest.raises(LengthMismatch):
        gbm_fit(x, y[:5])
    with pytest.raises(NonFinite):
        gbm_fit(x, np.append(y[:9], np.nan))


def test_training_curve_is_non_increasing(trained):
    _, _, model = trained

    assert len(model.training_curve) == len(model.trees) + 1 == 201
    assert np.all(np.diff(model.training_curve) <= 1e-12)
    assert model.training_curve[-1] < model.training_curve[1]


def test_training_and_held_out_fit(trained):
    x, y, model = trained
    x_test, y_test = additive_task(500, seed=1)

    assert r_squared(y, model.predict_many(x)) >= 0.95
    assert r_squared(y_test, model.predict_many(x_test)) >= 0.80


def test_agrees_with_naive_boosting_loop(trained):
    x, y, model = trained

    predictions = np.full(y.size, np.mean(y))
    for _ in range(SMALL.n_trees):
        tree = fit_tree(x, y - predictions, SMALL)
        predictions = predictions + SMALL.learning_rate * np.array([tree.predict_row(row) for row in x.values])

    assert np.max(np.abs(model.predict_many(x) - predictions)) < 1e-9


def test_parabola():
    rng = np.random.default_rng(8)
    xs = rng.uniform(-3, 3, size=(200, 1))
    y = xs[:, 0] ** 2
    model = gbm_fit(FeatureMatrix(xs, ("x",)), y, Hyperparams(n_trees=100, max_depth=3, min_samples_split=10, min_samples_leaf=5))

    assert model.training_curve[100] < model.training_curve[1]
    assert r_squared(y, model.predict_many(FeatureMatrix(xs, ("x",)))) > 0.95


def test_predict_is_sum_of_trees(trained):
    x, _, model = trained
    for row in x.values[:50]:
        expected = model.f0
        for tree in model.trees:
            expected += tree.predict_row(row)
        assert gbm_predict(model, row) == expected
        assert model.predict_row(row) == expected


def test_zero_and_single_leaf_models():
    hp = Hyperparams(n_trees=1)
    empty = GbmModel(f0=4.0, trees=(), hyperparams=hp, feature_names=("a",))
    one_leaf = GbmModel(f0=4.0, trees=(RegressionTree((Leaf(1.5, 3),)),), hyperparams=hp, feature_names=("a",))

    assert gbm_predict(empty, [123.0]) == 4.0
    assert gbm_predict(one_leaf, [-7.0]) == 5.5


def test_predict_errors(trained):
    _, _, model = trained
    with pytest.raises(ArityMismatch):
        gbm_predict(model, [1.0, 2.0])
    with pytest.raises(NonFinite):
        gbm_predict(model, [1.0, np.inf, 0.0, 0.0])
    with pytest.raises(ArityMismatch):
        model.predict_many(np.zeros((3, 2)))


def test_shrinkage_identity():
    x, y = additive_task(120, seed=5)
    hp = Hyperparams(n_trees=1, learning_rate=1.0, max_depth=3, min_samples_split=10, min_samples_leaf=3)
    model = gbm_fit(x, y, hp)

    f0 = float(np.mean(y))
    raw = fit_tree(x, y - f0, hp)
    assert np.array_equal(model.predict_many(x), f0 + raw.predict_many(x.values))


def test_fit_is_deterministic():
    x, y = additive_task(150, seed=6)
    hp = Hyperparams(n_trees=20, max_depth=3, min_samples_split=10, min_samples_leaf=3, seed=42)
    assert serialize_model(gbm_fit(x, y, hp)) == serialize_model(gbm_fit(x, y, hp))


def test_rising_loss_is_an_invariant_violation(monkeypatch):
    x, y = additive_task(30, seed=7)
    monkeypatch.setattr(gbm, "fit_tree", lambda rows, residuals, hp: RegressionTree((Leaf(100.0, 30),)))

    with pytest.raises(InvariantViolation):
        gbm_fit(x, y, Hyperparams(n_trees=3))
