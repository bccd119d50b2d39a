"""Synthetic matrices with known spectra, plus the bench sweep over them.

Randomness comes from numpy's Philox generator (counter-based, documented,
identical streams on every platform for a given 64-bit seed).  Complex
Gaussians are produced by the Box-Muller transform applied to the raw
uniform stream rather than the generator's own normal method, so the exact
draw sequence is pinned down by this module alone.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .iterate import IterationConfig, run_lower, run_upper
from .matrix import ComplexMatrix, build_context
from .oracle import Spectrum
from .seeds import lin_xie_root, yu_gu_lower, zou_lower

__all__ = [
    "SpectrumSample",
    "SweepSpec",
    "BenchRow",
    "BENCH_COLUMNS",
    "random_unitary",
    "synth_matrix",
    "bench_sweep",
]

BENCH_COLUMNS = (
    "seed",
    "n",
    "cond",
    "l",
    "l0",
    "a",
    "lower_bound",
    "lower_iters",
    "lower_status",
    "upper_bound",
    "upper_iters",
    "upper_status",
    "sigma_min",
    "sigma_max",
)


@dataclass(frozen=True)
class SpectrumSample:
    """A matrix together with the exact spectrum it was built from."""

    matrix: ComplexMatrix
    sigma: Spectrum
    seed: int


@dataclass(frozen=True)
class SweepSpec:
    """What a bench run should draw: sizes, conditioning, and how many."""

    n_range: tuple[int, int] = (2, 8)
    spread_range: tuple[float, float] = (1.0, 10.0)
    samples: int = 100
    base_seed: int = 0

    def __post_init__(self) -> None:
        lo, hi = self.n_range
        if not (2 <= lo <= hi):
            raise ValueError(f"n_range must satisfy 2 <= lo <= hi, got {self.n_range}")
        slo, shi = self.spread_range
        if not (1.0 <= slo <= shi) or not (math.isfinite(slo) and math.isfinite(shi)):
            raise ValueError(f"spread_range must satisfy 1 <= lo <= hi, got {self.spread_range}")
        if self.samples < 0:
            raise ValueError(f"samples must be nonnegative, got {self.samples}")


@dataclass(frozen=True)
class BenchRow:
    """One bench result; the fields mirror the CSV columns exactly."""

    seed: int
    n: int
    cond: float
    l: float
    l0: float
    a: float
    lower_bound: float
    lower_iters: int
    lower_status: str
    upper_bound: float
    upper_iters: int
    upper_status: str
    sigma_min: float
    sigma_max: float


def _generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def _complex_gaussians(rng: np.random.Generator, n: int) -> np.ndarray:
    """n*n standard complex Gaussians via Box-Muller on the uniform stream."""
    u1 = rng.random((n, n))
    u2 = rng.random((n, n))
    radius = np.sqrt(-2.0 * np.log1p(-u1))
    return radius * np.exp(2j * np.pi * u2)


def _haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """QR of a complex Gaussian matrix, with the R diagonal phases absorbed
    into Q so the distribution is exactly Haar."""
    q, r = np.linalg.qr(_complex_gaussians(rng, n))
    d = np.diagonal(r).copy()
    mags = np.abs(d)
    safe = np.where(mags == 0.0, 1.0, mags)
    q = q * (d / safe)
    return q


def random_unitary(n: int, rng_seed: int) -> ComplexMatrix:
    """A Haar-distributed n x n unitary, bit-reproducible from the seed."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return ComplexMatrix(_haar_unitary(_generator(rng_seed), n))


def synth_matrix(sigma: Sequence[float], rng_seed: int) -> SpectrumSample:
    """U diag(sigma) V^H for independent Haar U, V drawn from one stream."""
    values = tuple(float(v) for v in sigma)
    if not values:
        raise ValueError("sigma must not be empty")
    for v in values:
        if not (math.isfinite(v) and v > 0):
            raise ValueError(f"singular values must be finite and positive, got {v!r}")
    if any(values[i] < values[i + 1] for i in range(len(values) - 1)):
        raise ValueError("sigma must be sorted in descending order")
    n = len(values)
    rng = _generator(rng_seed)
    u = _haar_unitary(rng, n)
    v = _haar_unitary(rng, n)
    a = (u * np.asarray(values)) @ v.conj().T
    return SpectrumSample(matrix=ComplexMatrix(a), sigma=Spectrum(values), seed=int(rng_seed))


def draw_sigma(spec: SweepSpec, rng: np.random.Generator) -> tuple[float, ...]:
    """One descending spectrum matching the spec: the endpoints pin the
    condition number to the drawn spread, interior values fall in between."""
    n_lo, n_hi = spec.n_range
    s_lo, s_hi = spec.spread_range
    n = int(rng.integers(n_lo, n_hi + 1))
    spread = float(rng.uniform(s_lo, s_hi))
    scale = float(rng.uniform(0.5, 2.0))
    interior = sorted((float(rng.uniform(1.0, spread)) for _ in range(n - 2)), reverse=True)
    return tuple(scale * v for v in [spread, *interior, 1.0])


def _bench_one(spec: SweepSpec, index: int) -> BenchRow:
    sample_seed = spec.base_seed + index
    params_rng = np.random.Generator(
        np.random.Philox(np.random.SeedSequence(entropy=sample_seed, spawn_key=(1,)))
    )
    sigma = draw_sigma(spec, params_rng)
    sample = synth_matrix(sigma, sample_seed)
    n = sample.sigma.n
    cond = sample.sigma.sigma_max / sample.sigma.sigma_min
    try:
        ctx = build_context(sample.matrix)
        l = yu_gu_lower(ctx)
        l0 = zou_lower(ctx)
        a = lin_xie_root(ctx)
        lower = run_lower(ctx, IterationConfig())
        upper = run_upper(ctx, IterationConfig())
        return BenchRow(
            seed=sample_seed,
            n=n,
            cond=cond,
            l=l,
            l0=l0,
            a=a,
            lower_bound=lower.final_bound,
            lower_iters=lower.iterations,
            lower_status=lower.status,
            upper_bound=upper.final_bound,
            upper_iters=upper.iterations,
            upper_status=upper.status,
            sigma_min=sample.sigma.sigma_min,
            sigma_max=sample.sigma.sigma_max,
        )
    except Exception as exc:  # record the failure, never kill the sweep
        nan = float("nan")
        reason = f"error:{type(exc).__name__}"
        return BenchRow(
            seed=sample_seed, n=n, cond=cond, l=nan, l0=nan, a=nan,
            lower_bound=nan, lower_iters=0, lower_status=reason,
            upper_bound=nan, upper_iters=0, upper_status=reason,
            sigma_min=sample.sigma.sigma_min, sigma_max=sample.sigma.sigma_max,
        )


def bench_sweep(spec: SweepSpec, max_workers: Optional[int] = None) -> list[BenchRow]:
    """Evaluate every sample in the spec and return one row each, in order.

    ``max_workers`` > 1 fans the samples out over a thread pool; results
    come back in sample order either way, so output is deterministic.
    """
    indices = range(spec.samples)
    if max_workers is not None and max_workers < 1:
        raise ValueError(f"max_workers must be positive, got {max_workers}")
    if max_workers is None or max_workers == 1:
        return [_bench_one(spec, i) for i in indices]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(lambda i: _bench_one(spec, i), indices))
