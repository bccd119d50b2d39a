"""Shared fixtures: small exact contexts plus the seeded random ensemble."""

import numpy as np
import pytest

from svbound.ensemble import SweepSpec, draw_sigma, synth_matrix
from svbound.iterate import lower_step
from svbound.matrix import ComplexMatrix, build_context

ENSEMBLE_BASE_SEED = 20240801
ENSEMBLE_SIZE = 200


@pytest.fixture(scope="session")
def diag12_ctx():
    return build_context(ComplexMatrix.diagonal([1.0, 2.0]))


@pytest.fixture(scope="session")
def diag123_ctx():
    return build_context(ComplexMatrix.diagonal([1.0, 2.0, 3.0]))


@pytest.fixture(scope="session")
def ensemble():
    """200 synthetic samples with exactly known spectra, plus their contexts.

    Seeding matches the bench path: per-sample parameters come from a child
    stream (spawn_key=(1,)) of the sample seed so the matrix draw and the
    parameter draw never share raw output.  Built once per session; the first
    context also warms the compiled kernels so timed tests never pay for JIT.
    """
    spec = SweepSpec(
        n_range=(2, 8),
        spread_range=(1.0, 10.0),
        samples=ENSEMBLE_SIZE,
        base_seed=ENSEMBLE_BASE_SEED,
    )
    samples = []
    for i in range(spec.samples):
        seed = spec.base_seed + i
        params_rng = np.random.Generator(
            np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=(1,)))
        )
        sigma = draw_sigma(spec, params_rng)
        sample = synth_matrix(sigma, seed)
        ctx = build_context(sample.matrix)
        if not samples:
            lower_step(ctx, 0.0)  # warm the shifted-determinant kernel
        samples.append((sample, ctx))
    return samples
