import numpy as np
import pytest
from pydantic import ValidationError

from app.common.exceptions import CheckpointError, InvalidInputError, UndefinedMetricError
from app.core.schema import CoarseLabel, Sample, Strategy, Subcategory
from app.data import ClusterSpec, SynthConfig, generate, synthesize
from app.model import (
    Checkpoint,
    TrainConfig,
    Trainer,
    TrainerState,
    ValidationData,
    ValidationRecord,
    fine_subcategory,
    forward_batch,
    select_best,
    train,
)
from app.objective import Objective, ObjectiveConfig, apply_strategy, encode_tagged


def datasets(synth: SynthConfig):
    return synthesize(synth), generate(synth.model_copy(update={"seed": synth.seed + 1000, "noise_rate": 0.0}))


def assert_same_params(a, b):
    for x, y in zip(a.arrays(), b.arrays()):
        np.testing.assert_array_equal(x, y)


class TestTrainConfig:
    def test_defaults(self):
        cfg = TrainConfig()
        assert cfg.layer_sizes == [2, 16, 16, 2]
        assert (cfg.iterations, cfg.batch_size, cfg.checkpoint_every) == (5000, 32, 1000)
        assert cfg.lr == 1e-4

    def test_checkpoint_every_must_divide(self):
        with pytest.raises(ValidationError):
            TrainConfig(iterations=1000, checkpoint_every=300)

    def test_digest_tracks_config(self):
        assert TrainConfig().digest() == TrainConfig().digest()
        assert TrainConfig(seed=1).digest() != TrainConfig().digest()


class TestTrain:
    def test_checkpoint_schedule(self, small_synth, tiny_train_config):
        result = train(tiny_train_config, *datasets(small_synth))
        assert [c.iteration for c in result.checkpoints] == [100, 200]
        assert [r.iteration for r in result.history] == [100, 200]
        assert any(c is result.best for c in result.checkpoints)
        for record in result.history:
            assert 0.0 <= record.auc_fg <= 1.0
            assert record.auc is not None
            assert record.uncertain_spread is not None

    def test_deterministic(self, small_synth, tiny_train_config):
        train_set, val_set = datasets(small_synth)
        a = train(tiny_train_config, train_set, val_set)
        b = train(tiny_train_config, train_set, val_set)
        for ca, cb in zip(a.checkpoints, b.checkpoints):
            assert ca.to_bytes() == cb.to_bytes()
        assert a.history == b.history

    def test_seed_changes_trajectory(self, small_synth, tiny_train_config):
        train_set, val_set = datasets(small_synth)
        a = train(tiny_train_config, train_set, val_set)
        b = train(tiny_train_config.model_copy(update={"seed": 6}), train_set, val_set)
        assert a.checkpoints[-1].to_bytes() != b.checkpoints[-1].to_bytes()

    def test_resume_is_bit_identical(self, small_synth, tiny_train_config):
        train_set, val_set = datasets(small_synth)
        full = train(tiny_train_config, train_set, val_set)
        restored = Checkpoint.from_bytes(full.checkpoints[0].to_bytes())
        resumed = train(tiny_train_config, train_set, val_set, resume_from=restored)
        assert [c.iteration for c in resumed.checkpoints] == [200]
        assert resumed.checkpoints[0].to_bytes() == full.checkpoints[-1].to_bytes()
        assert resumed.history[0] == full.history[-1]

    def test_resume_rejects_other_config(self, small_synth, tiny_train_config):
        train_set, val_set = datasets(small_synth)
        full = train(tiny_train_config, train_set, val_set)
        other = tiny_train_config.model_copy(update={"lr": 2e-3})
        with pytest.raises(CheckpointError):
            train(other, train_set, val_set, resume_from=full.checkpoints[0])

    def test_resume_rejects_other_training_set(self, small_synth, tiny_train_config):
        train_set, val_set = datasets(small_synth)
        full = train(tiny_train_config, train_set, val_set)
        with pytest.raises(CheckpointError):
            train(tiny_train_config, train_set[:-3], val_set, resume_from=full.checkpoints[0])

    def test_empty_training_set_after_strategy(self, tiny_train_config):
        uncertain_only = generate(SynthConfig.with_counts(0, 0, 0, 20))
        _, val_set = datasets(SynthConfig.with_counts(10, 10, 10, 10))
        cfg = tiny_train_config.model_copy(
            update={"objective": ObjectiveConfig(strategy=Strategy.U_IGNORE)}
        )
        with pytest.raises(InvalidInputError):
            train(cfg, uncertain_only, val_set)

    def test_validation_needs_both_subcategories(self, small_synth, tiny_train_config):
        train_set, _ = datasets(small_synth)
        val_set = generate(SynthConfig.with_counts(10, 10, 0, 10))
        with pytest.raises(UndefinedMetricError):
            train(tiny_train_config, train_set, val_set)

    def test_separable_data_fits_under_cross_entropy(self, separable_synth):
        train_set, val_set = datasets(separable_synth)
        cfg = TrainConfig(
            lr=1e-3, objective=ObjectiveConfig(strategy=Strategy.U_IGNORE), seed=0
        )
        result = train(cfg, train_set, val_set)
        x, labels, kinds = encode_tagged(apply_strategy(train_set, cfg.objective))
        _, p_pos = forward_batch(result.checkpoints[-1].params, x)
        loss = Objective.from_config(cfg.objective).mean_value(labels, kinds, p_pos)
        assert loss < 0.05

    def test_uniformity_objective_flattens_uncertain_predictions(self):
        uncertain = ClusterSpec(mean=(0.0, 0.0), std=1.0, count=300)
        empty = ClusterSpec(mean=(0.0, 0.0), count=0)
        synth = SynthConfig(negative=empty, typical_pos=empty, atypical_pos=empty, uncertain=uncertain)
        train_set, val_set = datasets(synth)
        cfg = TrainConfig(
            iterations=2000,
            checkpoint_every=500,
            lr=1e-3,
            selection_metric="uncertain_spread",
            objective=ObjectiveConfig(strategy=Strategy.U_UNIFORM),
        )
        result = train(cfg, train_set, val_set)
        best = next(r for r in result.history if r.iteration == result.best.iteration)
        assert best.uncertain_spread < 0.05
        assert best.auc_fg is None


class TestTrainer:
    def test_batches_cover_each_epoch(self, small_synth, tiny_train_config):
        train_set, _ = datasets(small_synth)
        trainer = Trainer.create(tiny_train_config, train_set)
        n = len(trainer.order)
        seen = np.concatenate([trainer.next_batch() for _ in range(n // 16)])
        assert len(set(seen.tolist())) == len(seen)

    def test_rejects_feature_width_mismatch(self, small_synth):
        train_set, _ = datasets(small_synth)
        with pytest.raises(InvalidInputError):
            Trainer.create(TrainConfig(layer_sizes=[3, 2]), train_set)

    def test_run_leaves_trainer_finished(self, small_synth, tiny_train_config):
        train_set, val_set = datasets(small_synth)
        trainer = Trainer.create(tiny_train_config, train_set)
        assert trainer.state == TrainerState.IDLE
        trainer.run(ValidationData.from_samples(val_set, 2))
        assert trainer.state == TrainerState.FINISHED
        with pytest.raises(RuntimeError):
            trainer.run(ValidationData.from_samples(val_set, 2))

    def test_failed_run_marks_error(self, small_synth, tiny_train_config):
        train_set, val_set = datasets(small_synth)
        trainer = Trainer.create(tiny_train_config, train_set)
        wrong_width = ValidationData.from_samples(
            [s.model_copy(update={"features": [0.0, 0.0, 0.0]}) for s in val_set], 3
        )
        with pytest.raises(InvalidInputError):
            trainer.run(wrong_width)
        assert trainer.state == TrainerState.ERROR


class TestSelection:
    def test_ties_resolve_to_earliest(self):
        checkpoints = ["first", "second", "third"]
        history = [
            ValidationRecord(iteration=i, train_loss=0.1, auc_fg=v)
            for i, v in [(1, 0.7), (2, 0.8), (3, 0.8)]
        ]
        assert select_best(checkpoints, history, "auc_fg") == "second"

    def test_spread_is_minimised(self):
        history = [
            ValidationRecord(iteration=i, train_loss=0.1, uncertain_spread=v)
            for i, v in [(1, 0.2), (2, 0.05), (3, 0.05)]
        ]
        assert select_best(["a", "b", "c"], history, "uncertain_spread") == "b"


class TestValidationLabels:
    def test_stored_fine_label_wins(self):
        s = Sample(
            id="a",
            features=[0, 0],
            coarse=CoarseLabel.POSITIVE,
            fine=Subcategory.TYPICAL,
            report_text="mild edema",
        )
        assert fine_subcategory(s) == Subcategory.TYPICAL

    def test_report_text_fallback(self):
        s = Sample(id="a", features=[0, 0], coarse=CoarseLabel.POSITIVE, report_text="mild edema")
        assert fine_subcategory(s) == Subcategory.ATYPICAL

    def test_default_typical(self):
        s = Sample(id="a", features=[0, 0], coarse=CoarseLabel.POSITIVE)
        assert fine_subcategory(s) == Subcategory.TYPICAL

    def test_only_coarse_positives_are_ranked(self):
        samples = generate(SynthConfig.with_counts(5, 4, 3, 2))
        val = ValidationData.from_samples(samples, dim=2)
        assert len(val.positives) == 7
        assert len(val.negatives) == 5
        assert len(val.uncertain) == 2
        assert sorted(val.subcategories).count(Subcategory.ATYPICAL) == 3
