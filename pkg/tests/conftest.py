import numpy as np
import pytest

from app.data import ClusterSpec, SynthConfig
from app.model import AdamState, Checkpoint, MlpParams, TrainConfig
from app.objective import ObjectiveConfig


def make_checkpoint(params: MlpParams, iteration: int = 0, n_samples: int = 4) -> Checkpoint:
    return Checkpoint(
        iteration=iteration,
        params=params,
        adam=AdamState.zeros_like(params),
        rng_state=np.random.default_rng(0).bit_generator.state,
        sampler_order=np.arange(n_samples, dtype=np.int64),
        sampler_cursor=0,
        config_hash="0" * 64,
    )


@pytest.fixture
def small_synth() -> SynthConfig:
    return SynthConfig.with_counts(40, 30, 30, 30, noise_rate=0.1, seed=3)


@pytest.fixture
def separable_synth() -> SynthConfig:
    return SynthConfig(
        negative=ClusterSpec(mean=(-3.0, 0.0), std=0.5, count=200),
        typical_pos=ClusterSpec(mean=(3.0, 0.0), std=0.5, count=100),
        atypical_pos=ClusterSpec(mean=(3.0, 1.5), std=0.5, count=100),
        uncertain=ClusterSpec(mean=(0.0, 0.0), count=0),
        seed=11,
    )


@pytest.fixture
def tiny_train_config() -> TrainConfig:
    return TrainConfig(
        layer_sizes=[2, 8, 2],
        iterations=200,
        batch_size=16,
        checkpoint_every=100,
        lr=1e-3,
        seed=5,
        objective=ObjectiveConfig(),
    )
