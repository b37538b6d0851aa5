"""
Fold assignment, cross-validation and information criteria
"""

import numpy as np
import pytest
from sklearn.model_selection import KFold, StratifiedKFold

from boosting.design import prepare_design
from boosting.engine import EngineSpec
from fda.basis import FourierBasis
from fda.dataset import FunctionalDataSet
from learners.base import WeakLearnerSpec
from modelsel.criteria import aic_bic, df_curve, l2boost_df, select_by_information
from modelsel.cross_validation import cross_validate
from modelsel.curve import SelectionCurve
from modelsel.folds import FoldAssignment, kfold
from utils.errors import BoostingError, CrossValidationError, FuncBoostError

STUMP = WeakLearnerSpec("stump")
PENALIZED = WeakLearnerSpec("penalized", lam=5.0)


class TestFolds:
    def test_leave_one_out(self):
        folds = kfold(10, 10, seed=3)
        np.testing.assert_array_equal(folds.sizes, np.ones(10))

    def test_equal_sizes(self):
        np.testing.assert_array_equal(kfold(100, 10).sizes, np.full(10, 10))

    @pytest.mark.parametrize("n,K", [(7, 2), (23, 5), (101, 10)])
    def test_partition(self, n, K):
        folds = kfold(n, K, seed=11)
        assert folds.sizes.max() - folds.sizes.min() <= 1
        held_out = np.concatenate([test for _, test in folds])
        np.testing.assert_array_equal(np.sort(held_out), np.arange(n))
        for train, test in folds:
            assert np.intersect1d(train, test).size == 0
            assert train.size + test.size == n

    def test_stratified_counts(self):
        labels = np.array([-1.0] * 48 + [1.0] * 52)
        folds = kfold(100, 10, seed=5, labels=labels)
        assert folds.stratified
        for _, test in folds:
            negatives = int(np.sum(labels[test] < 0))
            positives = int(np.sum(labels[test] > 0))
            assert 4 <= negatives <= 5
            assert 5 <= positives <= 6
        assert folds.sizes.max() - folds.sizes.min() <= 1

    def test_seeded(self):
        np.testing.assert_array_equal(kfold(30, 4, seed=9).assignment, kfold(30, 4, seed=9).assignment)
        assert not np.array_equal(kfold(30, 4, seed=9).assignment, kfold(30, 4, seed=10).assignment)

    def test_matches_sklearn_splitters(self):
        labels = np.array([-1.0, 1.0, 1.0] * 10)
        folds = kfold(30, 5, seed=4, labels=labels)
        splitter = StratifiedKFold(n_splits=5, shuffle=True, random_state=4)
        for fold, (train, test) in enumerate(splitter.split(np.zeros((30, 1)), labels)):
            held_train, held_test = folds.split(fold)
            np.testing.assert_array_equal(held_test, np.sort(test))
            np.testing.assert_array_equal(held_train, np.sort(train))

        plain = kfold(23, 4, seed=8)
        for fold, (_, test) in enumerate(KFold(n_splits=4, shuffle=True, random_state=8).split(np.zeros((23, 1)))):
            np.testing.assert_array_equal(plain.split(fold)[1], np.sort(test))

    def test_leave_one_out_with_labels_drops_stratification(self):
        folds = kfold(10, 10, seed=1, labels=[1.0, -1.0] * 5)
        assert not folds.stratified
        np.testing.assert_array_equal(folds.sizes, np.ones(10))

    def test_label_length_mismatch(self):
        with pytest.raises(FuncBoostError):
            kfold(10, 2, labels=[1.0, -1.0])

    @pytest.mark.parametrize("K", [1, 11])
    def test_fold_count_range(self, K):
        with pytest.raises(FuncBoostError):
            kfold(10, K)

    def test_assignment_validation(self):
        with pytest.raises(FuncBoostError):
            FoldAssignment(3, [0, 1, 3], seed=None)


class TestSelectionCurve:
    def test_first_minimum_wins(self):
        curve = SelectionCurve([0.3, 0.1, 0.2, 0.1], "misclassification")
        assert curve.m_opt == 2
        assert curve.min_value == pytest.approx(0.1)
        np.testing.assert_array_equal(curve.iterations, [1, 2, 3, 4])

    def test_single_value(self):
        assert SelectionCurve([0.5], "mse").m_opt == 1

    def test_validation(self):
        with pytest.raises(FuncBoostError):
            SelectionCurve([], "mse")
        with pytest.raises(FuncBoostError):
            SelectionCurve([1.0], "accuracy")


class TestCrossValidate:
    def test_constant_labels_give_zero_error(self, rng):
        ds = FunctionalDataSet(FourierBasis(5), rng.normal(size=(20, 5)), np.ones(20), "label")
        for algorithm in ("adaboost", "logitboost"):
            curve = cross_validate(EngineSpec(algorithm, STUMP), ds, kfold(20, 5, seed=1), 8)
            assert curve.M_max == 8
            np.testing.assert_array_equal(curve.values, 0.0)
            assert curve.m_opt == 1

    def test_single_iteration(self, make_classification):
        ds = make_classification(n=30, shift=1.0, spread=1.0)
        curve = cross_validate(EngineSpec("logitboost", STUMP), ds, kfold(30, 3), 1)
        assert curve.M_max == 1 and curve.m_opt == 1

    def test_truncation_equals_retraining(self, make_regression):
        ds, _ = make_regression(n=30)
        engine = EngineSpec("l2boost", WeakLearnerSpec("componentwise"), shrinkage=0.3)
        folds = kfold(30, 3, seed=2)
        full = cross_validate(engine, ds, folds, 6)
        for m in (1, 3, 6):
            direct = 0.0
            for train, test in folds:
                model = engine.fit(ds.subset(train), m)
                direct += np.sum((model.scores(ds.coefficients[test]) - ds.response[test]) ** 2)
            assert full.values[m - 1] == pytest.approx(direct / ds.n, rel=1e-10)

    def test_pooled_error_and_fold_values(self, make_classification):
        ds = make_classification(n=33, shift=1.0, spread=1.0, seed=4)
        folds = kfold(33, 4, seed=4, labels=ds.response)
        curve = cross_validate(EngineSpec("adaboost", STUMP), ds, folds, 5)
        assert curve.metric == "misclassification"
        assert curve.fold_values.shape == (4, 5)
        pooled = (curve.fold_values * folds.sizes[:, None]).sum(axis=0) / ds.n
        np.testing.assert_allclose(curve.values, pooled)
        assert np.all((curve.values >= 0) & (curve.values <= 1))

    def test_thread_count_does_not_change_result(self, make_classification):
        ds = make_classification(n=40, shift=1.0, spread=1.0, seed=6)
        folds = kfold(40, 4, seed=6, labels=ds.response)
        engine = EngineSpec("logitboost", STUMP)
        serial = cross_validate(engine, ds, folds, 10, max_workers=1)
        threaded = cross_validate(engine, ds, folds, 10, max_workers=4)
        np.testing.assert_array_equal(serial.values, threaded.values)

    def test_fold_failure_names_the_fold(self, rng):
        # the training part of fold 0 holds only constant curves with balanced labels
        C = np.vstack([np.ones((4, 3)), rng.normal(size=(2, 3))])
        y = np.array([1.0, -1.0, 1.0, -1.0, 1.0, -1.0])
        folds = FoldAssignment(2, [1, 1, 1, 1, 0, 0], seed=None)
        with pytest.raises(CrossValidationError) as excinfo:
            cross_validate(EngineSpec("adaboost", STUMP), FunctionalDataSet(FourierBasis(3), C, y, "label"), folds, 3)
        assert excinfo.value.fold == 0
        assert isinstance(excinfo.value.cause, BoostingError)

    def test_progress_callback(self, make_classification):
        calls = []
        ds = make_classification(n=20, shift=1.0, spread=1.0)
        cross_validate(EngineSpec("logitboost", STUMP), ds, kfold(20, 4), 2,
                       progress_callback=lambda done, total: calls.append((done, total)))
        assert sorted(calls) == [(1, 4), (2, 4), (3, 4), (4, 4)]

    def test_rejects_mismatched_folds(self, make_classification):
        with pytest.raises(FuncBoostError):
            cross_validate(EngineSpec("logitboost", STUMP), make_classification(n=20), kfold(21, 3), 2)


class TestDegreesOfFreedom:
    def test_projection_smoother(self, rng):
        Q, _ = np.linalg.qr(rng.normal(size=(8, 3)))
        S = Q @ Q.T
        for m in (1, 2, 5):
            assert l2boost_df(S, m) == pytest.approx(3.0, abs=1e-10)

    def test_null_smoother(self):
        assert l2boost_df(np.zeros((4, 4)), 3) == 0.0
        np.testing.assert_array_equal(df_curve(np.zeros((4, 4)), 3), 0.0)

    def test_increasing_towards_n(self, rng):
        U, _ = np.linalg.qr(rng.normal(size=(6, 6)))
        S = U @ np.diag(rng.uniform(0.05, 0.95, size=6)) @ U.T
        df = df_curve(S, 300)
        assert np.all(np.diff(df[:60]) > 0)
        assert df[-1] == pytest.approx(6.0, abs=1e-6)
        np.testing.assert_allclose(df[:5], [l2boost_df(S, m) for m in range(1, 6)], atol=1e-10)

    def test_nonsymmetric_smoother(self, rng):
        S = 0.1 * rng.uniform(size=(5, 5))
        np.testing.assert_allclose(df_curve(S, 4, 0.5), [l2boost_df(S, m, 0.5) for m in range(1, 5)], atol=1e-10)

    def test_errors(self):
        with pytest.raises(FuncBoostError):
            l2boost_df(np.zeros((2, 3)), 1)
        with pytest.raises(FuncBoostError):
            l2boost_df(np.eye(2), 0)


class TestInformationCriteria:
    def test_formulas(self):
        df = np.array([1.0, 2.0])
        rss = np.array([10.0, 5.0])
        aic = aic_bic(df, rss, 10, "aic")
        bic = aic_bic(df, rss, 10, "bic")
        np.testing.assert_allclose(aic.values, 10 * np.log(rss / 10) + 2 * df)
        np.testing.assert_allclose(bic.values, 10 * np.log(rss / 10) + np.log(10) * df)
        assert aic.metric == "aic" and bic.metric == "bic"

    def test_zero_rss_stays_finite(self):
        curve = aic_bic([1.0, 2.0], [0.0, 0.0], 5)
        assert np.all(np.isfinite(curve.values))
        assert curve.m_opt == 1

    def test_bad_inputs(self):
        with pytest.raises(FuncBoostError):
            aic_bic([1.0], [1.0, 2.0], 5)
        with pytest.raises(FuncBoostError):
            aic_bic([1.0], [1.0], 5, "dic")

    def test_select_by_information(self, make_regression):
        ds, _ = make_regression(n=50)
        engine = EngineSpec("l2boost", PENALIZED, shrinkage=0.5)
        curve, model = select_by_information(engine, ds, 40, "bic")
        assert curve.M_max == 40 and model.M == 40
        assert np.all(np.isfinite(curve.values))
        assert 1 <= curve.m_opt <= 40

    def test_offset_counts_as_a_degree_of_freedom(self, make_regression):
        ds, _ = make_regression(n=40, seed=3)
        engine = EngineSpec("l2boost", PENALIZED, shrinkage=0.5)
        curve, model = select_by_information(engine, ds, 15, "aic")
        design, _ = prepare_design(ds, PENALIZED)
        df = df_curve(design.hat().S, 15, 0.5) + 1.0
        expected = aic_bic(df, np.asarray(model.training_loss), ds.n, "aic")
        np.testing.assert_allclose(curve.values, expected.values, rtol=1e-12)
        assert curve.m_opt == expected.m_opt

    def test_needs_fixed_smoother(self, make_regression):
        ds, _ = make_regression()
        with pytest.raises(BoostingError):
            select_by_information(EngineSpec("l2boost", WeakLearnerSpec("componentwise")), ds, 5)
        with pytest.raises(BoostingError):
            select_by_information(EngineSpec("logitboost", PENALIZED), ds, 5)
