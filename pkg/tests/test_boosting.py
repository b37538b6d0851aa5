"""
Boosting engines, losses and fitted models
"""

import numpy as np
import pytest

from boosting.adaboost import adaboost, adaboost_alpha, reweight
from boosting.design import prepare_design
from boosting.engine import EngineSpec
from boosting.l2boost import l2boost
from boosting.logitboost import RESPONSE_CLAMP, logitboost, working_response
from boosting.losses import LogisticLoss, QuadraticLoss, get_loss, negative_gradient
from boosting.model import BoostedModel, Stage, predict_boosted
from fda.basis import BSplineBasis, FourierBasis
from fda.dataset import FunctionalDataSet
from flm.scalar import predict_flm
from learners.base import WeakLearnerSpec
from learners.componentwise import ComponentwiseBase
from utils.errors import BasisError, BoostingError, DataFormatError

STUMP = WeakLearnerSpec("stump")
COMPONENTWISE = WeakLearnerSpec("componentwise")


def constant_model(slope=0.0, algorithm="logitboost"):
    """One componentwise stage on feature 0 of a 3-function Fourier basis"""
    basis = FourierBasis(3)
    return BoostedModel(
        algorithm=algorithm,
        loss="logistic",
        stages=(Stage(0.5, ComponentwiseBase(0, slope)),),
        data_basis=basis,
        beta_basis=basis,
        feature_mean=np.zeros(3),
        learner=COMPONENTWISE,
        label_map=(-1.0, 1.0),
    )


class TestLosses:
    def test_quadratic_residuals(self):
        np.testing.assert_array_equal(negative_gradient("quadratic", [1.0, 2.0], [1.0, 2.0]), [0.0, 0.0])
        np.testing.assert_array_equal(negative_gradient(QuadraticLoss(), [1.0, 2.0], [0.0, 0.0]), [1.0, 2.0])

    def test_logistic_matches_finite_differences(self, rng):
        loss = LogisticLoss()
        y = np.where(rng.normal(size=50) > 0, 1.0, -1.0)
        f = rng.normal(scale=3.0, size=50)
        h = 1e-6
        fd = -(loss.value(y, f + h) - loss.value(y, f - h)) / (2 * h)
        np.testing.assert_allclose(negative_gradient(loss, y, f), fd, rtol=1e-6)

    def test_logistic_is_finite_for_large_scores(self):
        f = np.array([-700.0, 700.0])
        y = np.array([1.0, -1.0])
        assert np.all(np.isfinite(LogisticLoss().value(y, f)))
        np.testing.assert_allclose(negative_gradient("logistic", y, f), [1.0, -1.0])

    def test_unknown_loss_and_shape_mismatch(self):
        with pytest.raises(BoostingError):
            get_loss("hinge")
        with pytest.raises(BoostingError):
            negative_gradient("quadratic", [1.0, 2.0], [1.0])


class TestAdaBoost:
    def test_alpha(self):
        assert adaboost_alpha(0.5) == 0.0
        assert adaboost_alpha(1.0 / (1.0 + np.e)) == pytest.approx(1.0, abs=1e-12)
        assert adaboost_alpha(0.0) == pytest.approx(np.log((1 - 1e-10) / 1e-10))

    def test_reweight_is_a_distribution(self):
        D = reweight(np.full(4, 0.25), np.array([True, False, False, False]), np.log(3.0))
        assert D.sum() == pytest.approx(1.0, abs=1e-12)
        assert D[0] == pytest.approx(0.5)

    def test_separable_toy_reaches_zero_training_error(self, make_classification):
        ds = make_classification(n=40, shift=4.0, spread=0.3)
        model = adaboost(ds, STUMP, 20)
        assert model.stop_reason == "perfect-fit"
        staged = model.staged_scores(ds)
        for m in range(model.M):
            np.testing.assert_array_equal(np.where(staged[:, m] >= 0, 1.0, -1.0), ds.response)

    @pytest.mark.parametrize("learner", [STUMP, COMPONENTWISE], ids=["stump", "componentwise"])
    def test_reweighting_identity(self, make_classification, learner):
        ds = make_classification(n=60, n_basis=5, shift=0.8, spread=1.0, active=(1, 2), seed=3)
        model = adaboost(ds, learner, 15)
        Z = model.features(ds)
        y = ds.response
        D = np.full(ds.n, 1.0 / ds.n)
        for m, stage in enumerate(model.stages):
            miss = stage.base.predict(Z) != y
            assert D @ miss == pytest.approx(model.training_loss[m], abs=1e-12)
            D = reweight(D, miss, stage.alpha)
            assert D.sum() == pytest.approx(1.0, abs=1e-12)
            assert np.all(D >= 0)
            assert D @ miss == pytest.approx(0.5, abs=1e-10)

    def test_first_learner_at_chance_fails(self):
        ds = FunctionalDataSet(FourierBasis(3), np.ones((4, 3)), [1.0, 1.0, -1.0, -1.0], "label")
        with pytest.raises(BoostingError):
            adaboost(ds, STUMP, 5)

    def test_resample_mode_is_seeded(self, make_classification):
        ds = make_classification(n=50, n_basis=5, shift=1.0, spread=1.0, active=(1, 3), seed=7)
        first = adaboost(ds, STUMP, 10, mode="resample", seed=42)
        second = adaboost(ds, STUMP, 10, mode="resample", seed=42)
        assert first.to_dict() == second.to_dict()
        assert first.metadata["mode"] == "resample"

    def test_rejects_scalar_response_and_bad_mode(self, make_regression, make_classification):
        ds, _ = make_regression()
        with pytest.raises(BoostingError):
            adaboost(ds, STUMP, 3)
        with pytest.raises(BoostingError):
            adaboost(make_classification(), STUMP, 3, mode="bagging")
        with pytest.raises(BoostingError):
            adaboost(make_classification(), STUMP, 0)


class TestL2Boost:
    def test_projection_learner_stalls_after_one_step(self, make_regression):
        ds, _ = make_regression(n=30, n_basis=5)
        model = l2boost(ds, WeakLearnerSpec("penalized", lam=0.0), 6)
        staged = model.staged_scores(ds)
        for m in range(1, 6):
            np.testing.assert_allclose(staged[:, m], staged[:, 0], atol=1e-10)

    def test_zero_response(self, rng):
        ds = FunctionalDataSet(FourierBasis(5), rng.normal(size=(20, 5)), np.zeros(20))
        for learner in (COMPONENTWISE, WeakLearnerSpec("penalized", lam=1.0)):
            model = l2boost(ds, learner, 4)
            np.testing.assert_allclose(model.staged_scores(ds), 0.0, atol=1e-14)

    def test_componentwise_matches_sequential_fits(self, make_regression):
        ds, _ = make_regression(n=25, n_basis=6, seed=4)
        nu = 0.3
        model = l2boost(ds, COMPONENTWISE, 12, shrinkage=nu)

        Z = ds.coefficients - ds.coefficients.mean(axis=0)
        r = ds.response - ds.response.mean()
        f = np.full(ds.n, ds.response.mean())
        expected = []
        for _ in range(12):
            slopes = (r @ Z) / np.sum(Z ** 2, axis=0)
            risks = [np.sum((r - s * Z[:, j]) ** 2) for j, s in enumerate(slopes)]
            j = int(np.argmin(risks))
            step = nu * slopes[j] * Z[:, j]
            f, r = f + step, r - step
            expected.append(f.copy())
        np.testing.assert_allclose(model.staged_scores(ds), np.column_stack(expected), atol=1e-10)

    def test_rss_non_increasing(self):
        learners = [COMPONENTWISE, WeakLearnerSpec("penalized", lam=1.0, penalty_order=2)]
        for seed in range(200):
            gen = np.random.default_rng(seed)
            ds = FunctionalDataSet(FourierBasis(5), gen.normal(size=(15, 5)), gen.normal(size=15))
            model = l2boost(ds, learners[seed % 2], 8)
            rss = np.array(model.training_loss)
            assert np.all(np.diff(rss) <= 1e-10 * max(1.0, rss[0]))

    @pytest.mark.parametrize("nu", [1.0, 0.25])
    def test_first_iterate_is_offset_plus_scaled_learner(self, make_regression, nu):
        ds, _ = make_regression(n=30, seed=2)
        learner = WeakLearnerSpec("penalized", lam=0.5)
        design, _ = prepare_design(ds, learner)
        offset = ds.response.mean()
        g_1 = design.fit(ds.response - offset).predict(design.Z)
        model = l2boost(ds, learner, 3, shrinkage=nu)
        np.testing.assert_allclose(model.scores(ds, 1), offset + nu * g_1, atol=1e-10)
        assert model.offset == pytest.approx(offset)

    def test_training_loss_is_rss(self, make_regression):
        ds, _ = make_regression(n=30)
        model = l2boost(ds, COMPONENTWISE, 5, shrinkage=0.5)
        rss = np.sum((model.staged_scores(ds) - ds.response[:, None]) ** 2, axis=0)
        np.testing.assert_allclose(model.training_loss, rss, rtol=1e-10)
        np.testing.assert_allclose(model.alphas, 0.5)

    def test_truncation_matches_shorter_run(self, make_regression):
        ds, _ = make_regression(n=30)
        long_run = l2boost(ds, COMPONENTWISE, 10, shrinkage=0.5)
        short_run = l2boost(ds, COMPONENTWISE, 4, shrinkage=0.5)
        np.testing.assert_allclose(long_run.staged_scores(ds)[:, :4], short_run.staged_scores(ds), atol=1e-12)
        np.testing.assert_allclose(long_run.truncate(4).scores(ds), short_run.scores(ds), atol=1e-12)

    def test_labels_are_boosted_as_numbers(self, make_classification):
        model = l2boost(make_classification(), COMPONENTWISE, 5)
        assert model.label_map == (-1.0, 1.0)
        assert model.loss == "quadratic"

    def test_rejects_bad_settings(self, make_regression):
        ds, _ = make_regression()
        with pytest.raises(BoostingError):
            l2boost(ds, COMPONENTWISE, 5, shrinkage=0.0)
        with pytest.raises(BoostingError):
            l2boost(FunctionalDataSet(FourierBasis(3), np.zeros((2, 3))), COMPONENTWISE, 5)


class TestLogitBoost:
    def test_first_working_response(self):
        u, D = working_response(np.array([1.0, -1.0]), np.full(2, 0.5))
        np.testing.assert_array_equal(D, [0.25, 0.25])
        np.testing.assert_array_equal(u, [2.0, -2.0])

    def test_working_response_clamps(self):
        u, D = working_response(np.array([1.0, -1.0]), np.array([1e-15, 1.0 - 1e-15]))
        np.testing.assert_array_equal(np.abs(u), [RESPONSE_CLAMP, RESPONSE_CLAMP])
        assert np.all(D >= 1e-10)

    def test_zero_score_gives_even_odds(self):
        np.testing.assert_allclose(predict_boosted(constant_model(), np.ones((3, 3)), output="probability"), 0.5)

    def test_separable_toy(self, make_classification):
        ds = make_classification(n=40, shift=3.0, spread=0.3)
        model = logitboost(ds, COMPONENTWISE, 50)
        np.testing.assert_array_equal(predict_boosted(model, ds, output="label"), ds.response)
        scores = predict_boosted(model, ds)
        probs = predict_boosted(model, ds, output="probability")
        order = np.argsort(scores)
        assert np.all(np.diff(probs[order]) >= 0)

    def test_probabilities_stay_inside_unit_interval(self, make_classification):
        ds = make_classification(n=40, shift=6.0, spread=0.2)
        model = logitboost(ds, STUMP, 30)
        for m in (1, 10, 30):
            p = predict_boosted(model, ds, m, "probability")
            assert np.all((p > 0) & (p < 1))

    def test_training_loss_is_logistic_risk(self, make_classification):
        ds = make_classification(n=30, shift=1.0, spread=1.0, seed=2)
        model = logitboost(ds, STUMP, 5)
        f = model.staged_scores(ds)[:, -1]
        assert model.training_loss[-1] == pytest.approx(np.mean(np.log1p(np.exp(-2 * ds.response * f))), rel=1e-10)

    def test_needs_labels(self, make_regression):
        ds, _ = make_regression()
        with pytest.raises(BoostingError):
            logitboost(ds, STUMP, 3)


class TestPredictBoosted:
    def test_single_term_truncation(self, make_classification):
        ds = make_classification(n=30, shift=1.0, spread=1.0, seed=5)
        model = logitboost(ds, STUMP, 6)
        Z = model.features(ds)
        first = model.stages[0]
        np.testing.assert_allclose(predict_boosted(model, ds, 1), first.alpha * first.base.predict(Z))

    def test_zero_score_is_positive_label(self):
        assert predict_boosted(constant_model(), np.zeros((1, 3)), output="label")[0] == 1.0

    def test_probability_symmetry(self, rng):
        model = constant_model(slope=1.7)
        C = rng.normal(size=(5, 3))
        p = predict_boosted(model, C, output="prob")
        q = predict_boosted(model, -C, output="prob")
        np.testing.assert_allclose(p + q, 1.0, atol=1e-12)

    def test_probability_needs_logitboost(self):
        with pytest.raises(BoostingError):
            predict_boosted(constant_model(algorithm="adaboost"), np.zeros((1, 3)), output="probability")

    def test_bad_truncation_and_output(self):
        with pytest.raises(BoostingError):
            predict_boosted(constant_model(), np.zeros((1, 3)), m_opt=2)
        with pytest.raises(BoostingError):
            predict_boosted(constant_model(), np.zeros((1, 3)), output="margin")


class TestBoostedModel:
    def test_rejects_curves_in_another_basis(self):
        model = constant_model()
        with pytest.raises(BasisError):
            model.scores(FunctionalDataSet(FourierBasis(3, (0.0, 2.0)), np.zeros((1, 3))))
        with pytest.raises(BasisError):
            model.scores(np.zeros((1, 5)))

    def test_linear_collapse_matches_scores(self, make_regression):
        ds, _ = make_regression(n=40)
        model = l2boost(ds, COMPONENTWISE, 20, shrinkage=0.2)
        linear = model.as_linear_model()
        np.testing.assert_allclose(predict_flm(linear, ds.coefficients), model.scores(ds), atol=1e-10)
        np.testing.assert_allclose(linear.coefficients, model.coefficient_vector())

    def test_stumps_have_no_coefficient_function(self, make_classification):
        model = adaboost(make_classification(n=30, shift=1.0, spread=1.0, seed=1), STUMP, 3)
        with pytest.raises(BoostingError):
            model.coefficient_vector()

    def test_dict_round_trip_preserves_scores(self, make_classification):
        ds = make_classification(n=30, shift=1.0, spread=1.0, seed=8)
        model = logitboost(ds, STUMP, 8)
        rebuilt = BoostedModel.from_dict(model.to_dict())
        np.testing.assert_array_equal(rebuilt.staged_scores(ds), model.staged_scores(ds))
        assert rebuilt.to_dict() == model.to_dict()

    def test_malformed_record(self):
        record = constant_model().to_dict()
        del record["stages"]
        with pytest.raises(DataFormatError):
            BoostedModel.from_dict(record)

    def test_separate_beta_basis(self, make_regression):
        ds, _ = make_regression(n=40)
        beta_basis = BSplineBasis((0.0, 1.0), 3, n_basis=6)
        engine = EngineSpec("l2boost", WeakLearnerSpec("penalized", lam=1e-4), shrinkage=0.5, beta_basis=beta_basis)
        model = engine.fit(ds, 10)
        assert model.beta_basis == beta_basis
        assert model.beta(np.linspace(0, 1, 11)).shape == (11,)
        np.testing.assert_allclose(predict_flm(model.as_linear_model(), ds.coefficients), model.scores(ds),
                                   atol=1e-9)

    def test_feature_mean_centers_training_scores(self, make_regression):
        ds, _ = make_regression(n=40)
        design, _ = prepare_design(ds, COMPONENTWISE)
        model = l2boost(ds, COMPONENTWISE, 2)
        np.testing.assert_allclose(model.features(ds), design.Z, atol=1e-12)

    def test_runs_are_deterministic(self, make_classification):
        ds = make_classification(n=40, shift=1.0, spread=1.0, seed=9)
        for engine in (EngineSpec("adaboost", STUMP), EngineSpec("logitboost", COMPONENTWISE),
                       EngineSpec("l2boost", WeakLearnerSpec("penalized", lam=0.5))):
            assert engine.fit(ds, 7).to_dict() == engine.fit(ds, 7).to_dict()


class TestEngineSpec:
    def test_validation(self):
        with pytest.raises(BoostingError):
            EngineSpec("gentleboost", STUMP)
        with pytest.raises(BoostingError):
            EngineSpec("l2boost", STUMP, shrinkage=1.5)
        with pytest.raises(BoostingError):
            EngineSpec("adaboost", STUMP, mode="bagging")

    def test_classifier_flag(self):
        assert EngineSpec("AdaBoost", STUMP).algorithm == "adaboost"
        assert EngineSpec("logitboost", STUMP).is_classifier
        assert not EngineSpec("l2boost", STUMP).is_classifier

    def test_progress_callback(self, make_classification):
        calls = []
        EngineSpec("logitboost", STUMP).fit(make_classification(n=30, shift=1.0, spread=1.0), 4,
                                            progress_callback=lambda m, M: calls.append((m, M)))
        assert calls == [(1, 4), (2, 4), (3, 4), (4, 4)]
