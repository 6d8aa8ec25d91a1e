"""Shared fixtures. The session warmup trains throwaway models through every
compiled inner loop so that timed tests never pay JIT compilation."""
import numpy as np
import pytest

from apportion import (KernelSpec, PriorityVector, SynthSpec, TrainConfig,
                       generate_synthetic, train_cscs, train_csova,
                       train_csovo, train_kernel, train_linear)


@pytest.fixture(scope="session", autouse=True)
def _warm_compiled_loops():
    data = generate_synthetic(SynthSpec(means=((-1.0, 0.0), (1.0, 0.0)),
                                        stddev=0.3, points_per_class=5, seed=0))
    theta = PriorityVector(np.array([1.0, 1.0]))
    cfg = TrainConfig(lambda_=0.1, iterations=10, seed=0)
    train_linear(data, theta, cfg)
    train_kernel(data, theta, cfg, KernelSpec(kind="rbf", gamma=0.5))
    train_csova(data, theta, cfg)
    train_cscs(data, theta, cfg)
    train_csovo(data, theta, cfg)


@pytest.fixture
def two_blobs():
    """Well-separated binary blobs used by several solver tests."""
    return generate_synthetic(SynthSpec(means=((-2.0, 0.0), (2.0, 0.0)),
                                        stddev=0.4, points_per_class=60,
                                        seed=7))
