import math

import numpy as np
import pytest

from app.common.exceptions import InvalidDatasetError, InvalidInputError
from app.core.schema import (
    CoarseLabel,
    LossKind,
    NoiseLoss,
    Probabilities,
    Sample,
    Strategy,
    TaggedSample,
    Target,
)
from app.objective import (
    Objective,
    ObjectiveConfig,
    apply_strategy,
    batch_loss,
    encode_tagged,
    sample_loss,
)


def sample(coarse: str, i: int = 0) -> Sample:
    return Sample(id=f"s{i}", features=[float(i), -float(i)], coarse=CoarseLabel(coarse))


def mixed_samples():
    return [sample(c, i) for i, c in enumerate(["0", "1", "u", "1", "0", "u", "u"])]


def tagged(target: Target, kind: LossKind) -> TaggedSample:
    return TaggedSample(id="t", features=[0.0, 0.0], target=target, loss_kind=kind)


# (coarse label) -> (target, loss kind) or None when dropped; noise loss is PCE.
EXPECTED = {
    Strategy.U_IGNORE: {"0": ("0", "CE"), "1": ("1", "CE"), "u": None},
    Strategy.U_ZEROS: {"0": ("0", "CE"), "1": ("1", "CE"), "u": ("0", "CE")},
    Strategy.U_ONES: {"0": ("0", "CE"), "1": ("1", "CE"), "u": ("1", "CE")},
    Strategy.U_RM: {"0": ("0", "CE"), "1": ("1", "CE"), "u": ("1", "PCE")},
    Strategy.P_RM: {"0": ("0", "CE"), "1": ("1", "PCE"), "u": None},
    Strategy.PU_RM: {"0": ("0", "CE"), "1": ("1", "PCE"), "u": ("1", "PCE")},
    Strategy.U_UNIFORM: {"0": ("0", "PCE"), "1": ("1", "PCE"), "u": ("uniform", "UC")},
}


class TestApplyStrategy:
    @pytest.mark.parametrize("strategy", list(Strategy))
    @pytest.mark.parametrize("coarse", ["0", "1", "u"])
    def test_mapping_table(self, strategy, coarse):
        out = apply_strategy([sample(coarse)], ObjectiveConfig(strategy=strategy))
        expected = EXPECTED[strategy][coarse]
        if expected is None:
            assert out == []
        else:
            assert len(out) == 1
            assert (out[0].target.value, out[0].loss_kind.value) == expected

    def test_gce_noise_loss(self):
        cfg = ObjectiveConfig(strategy=Strategy.PU_RM, noise_loss=NoiseLoss.GCE)
        out = apply_strategy([sample("1"), sample("u")], cfg)
        assert [t.loss_kind for t in out] == [LossKind.GCE, LossKind.GCE]

    def test_blank_rejected(self):
        with pytest.raises(InvalidDatasetError):
            apply_strategy([sample("1"), sample("blank", 1)], ObjectiveConfig())

    @pytest.mark.parametrize("strategy", list(Strategy))
    def test_features_untouched_and_cardinality(self, strategy):
        samples = mixed_samples()
        out = apply_strategy(samples, ObjectiveConfig(strategy=strategy))
        by_id = {s.id: s for s in samples}
        for t in out:
            assert t.features == by_id[t.id].features
        n_uncertain = sum(s.coarse == CoarseLabel.UNCERTAIN for s in samples)
        if strategy in (Strategy.U_IGNORE, Strategy.P_RM):
            assert len(out) == len(samples) - n_uncertain
        else:
            assert len(out) == len(samples)

    def test_pu_rm_never_tags_positive_with_ce(self):
        out = apply_strategy(mixed_samples(), ObjectiveConfig(strategy=Strategy.PU_RM))
        assert not any(t.target == Target.ONE and t.loss_kind == LossKind.CE for t in out)

    def test_u_ones_and_u_rm_share_targets(self):
        samples = mixed_samples()
        ones = apply_strategy(samples, ObjectiveConfig(strategy=Strategy.U_ONES))
        rm = apply_strategy(samples, ObjectiveConfig(strategy=Strategy.U_RM))
        assert [t.target for t in ones] == [t.target for t in rm]
        differing = [a.id for a, b in zip(ones, rm) if a.loss_kind != b.loss_kind]
        assert differing == [s.id for s in samples if s.coarse == CoarseLabel.UNCERTAIN]


class TestSampleLoss:
    def test_pu_rm_positive_at_tangent(self):
        t = tagged(Target.ONE, LossKind.PCE)
        cfg = ObjectiveConfig(strategy=Strategy.PU_RM, tau=0.3)
        assert sample_loss(t, Probabilities.from_positive(0.3), cfg) == pytest.approx(1.20397, abs=1e-5)

    def test_pu_rm_confident_negative(self):
        t = tagged(Target.ZERO, LossKind.CE)
        assert sample_loss(t, Probabilities(p_neg=1.0, p_pos=0.0), ObjectiveConfig()) == 0.0

    def test_uniform_target(self):
        t = tagged(Target.UNIFORM, LossKind.UC)
        cfg = ObjectiveConfig(strategy=Strategy.U_UNIFORM, lam=1.0)
        assert sample_loss(t, Probabilities.from_positive(0.5), cfg) == pytest.approx(math.log(2.0))

    def test_lambda_scales_noise_terms_only(self):
        cfg = ObjectiveConfig(strategy=Strategy.U_UNIFORM, lam=2.5)
        unit = cfg.model_copy(update={"lam": 1.0})
        prob = Probabilities.from_positive(0.2)
        noisy = tagged(Target.ONE, LossKind.PCE)
        uniform = tagged(Target.UNIFORM, LossKind.UC)
        assert sample_loss(noisy, prob, cfg) == pytest.approx(2.5 * sample_loss(noisy, prob, unit))
        assert sample_loss(uniform, prob, cfg) == sample_loss(uniform, prob, unit)

    def test_lambda_ignored_outside_uniform_mode(self):
        t = tagged(Target.ONE, LossKind.PCE)
        prob = Probabilities.from_positive(0.2)
        weighted = ObjectiveConfig(strategy=Strategy.PU_RM, lam=3.0)
        assert sample_loss(t, prob, weighted) == sample_loss(t, prob, ObjectiveConfig())

    def test_tau_near_one_agrees_with_ce_on_confident_samples(self):
        rng = np.random.default_rng(3)
        samples = [sample(c, i) for i, c in enumerate(rng.choice(["0", "1", "u"], size=60))]
        pu = ObjectiveConfig(strategy=Strategy.PU_RM, tau=0.999)
        ones = ObjectiveConfig(strategy=Strategy.U_ONES)
        for a, b in zip(apply_strategy(samples, pu), apply_strategy(samples, ones)):
            s = rng.uniform(0.999, 1.0)
            p_pos = s if a.target == Target.ONE else 1.0 - s
            prob = Probabilities.from_positive(p_pos)
            assert abs(sample_loss(a, prob, pu) - sample_loss(b, prob, ones)) < 1e-2


class TestBatchLoss:
    def test_mixed_batch(self):
        batch = [tagged(Target.ONE, LossKind.PCE), tagged(Target.ZERO, LossKind.CE)]
        probs = [Probabilities.from_positive(0.3), Probabilities.from_positive(0.0)]
        assert batch_loss(batch, probs, ObjectiveConfig()) == pytest.approx(0.60199, abs=1e-5)

    def test_single_and_duplicate(self):
        t = tagged(Target.ONE, LossKind.PCE)
        prob = Probabilities.from_positive(0.42)
        single = sample_loss(t, prob, ObjectiveConfig())
        assert batch_loss([t], [prob], ObjectiveConfig()) == single
        assert batch_loss([t, t], [prob, prob], ObjectiveConfig()) == pytest.approx(single, rel=1e-15)

    def test_empty_batch(self):
        with pytest.raises(InvalidInputError):
            batch_loss([], [], ObjectiveConfig())

    def test_length_mismatch(self):
        with pytest.raises(InvalidInputError):
            batch_loss([tagged(Target.ONE, LossKind.CE)], [], ObjectiveConfig())

    def test_permutation_invariant(self):
        rng = np.random.default_rng(8)
        cfg = ObjectiveConfig(strategy=Strategy.U_UNIFORM, lam=0.5)
        batch = apply_strategy(mixed_samples(), cfg)
        probs = [Probabilities.from_positive(float(v)) for v in rng.uniform(0, 1, len(batch))]
        perm = rng.permutation(len(batch))
        shuffled = batch_loss([batch[i] for i in perm], [probs[i] for i in perm], cfg)
        assert shuffled == pytest.approx(batch_loss(batch, probs, cfg), rel=1e-12)


class TestObjectiveArrays:
    def test_encode_tagged(self):
        batch = [
            tagged(Target.ZERO, LossKind.CE),
            tagged(Target.ONE, LossKind.PCE),
            tagged(Target.UNIFORM, LossKind.UC),
        ]
        features, labels, kinds = encode_tagged(batch)
        assert features.shape == (3, 2)
        assert labels.tolist() == [0, 1, 1]
        assert kinds.tolist() == ["CE", "PCE", "UC"]

    def test_empty_mean_rejected(self):
        objective = Objective.from_config(ObjectiveConfig())
        with pytest.raises(InvalidInputError):
            objective.mean_value(np.array([], dtype=np.int8), np.array([]), np.array([]))

    def test_lambda_alias(self):
        cfg = ObjectiveConfig.model_validate({"strategy": "U-Uniform", "lambda": 0.25})
        assert cfg.lam == 0.25
