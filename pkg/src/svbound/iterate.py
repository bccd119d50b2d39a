"""Monotone refinement of the extreme singular-value bounds.

Both directions iterate on the state variable lam = a_k^2 rather than a_k
itself, so no step ever squares and square-roots in turn (a_k is derived for
reporting only).  One step of each map:

* lower:  lam' = lam + |det(lam I - G)| * ((n-1) / (S - (n-1) lam))^(n-1)
* upper:  lam' = lam - |det(lam I - G)| * ((n-1) / ((n+1) lam - S))^(n-1)

where G is the Gram matrix and S the squared Frobenius norm.  Starting from
any 0 < lam <= sigma_min^2 the lower map increases monotonically to
sigma_min^2; starting from any lam >= sigma_max^2 the upper map decreases
monotonically to sigma_max^2.  Corrections are assembled entirely in log
scale and exponentiated once.

Stopping.  A run ends when the correction falls to tol_abs + tol_rel*lam,
when it is exactly zero (lam landed on an eigenvalue of G, reported as
``stalled-zero-correction``), when corrections stop decreasing (see below),
or when max_iter runs out, whichever comes first.  ``max-iter`` is a
first-class outcome: the final value is still a valid one-sided bound.

Noise floor.  In exact arithmetic the correction sequence of a valid run is
strictly decreasing (the derivative of the correction with respect to lam is
strictly negative on the valid range of the lower map and strictly positive
on that of the upper map, which the monotone lam sequence then traverses in
the decreasing direction).  So a computed correction that fails to decrease
can only be rounding noise from a nearly singular shifted determinant, and
continuing would let that noise push lam across the true limit and drift.
The run therefore stops, does not apply the suspect correction, and reports
``converged``: the iterate has reached the resolution floating point admits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .logdet import shifted_gram_logdet
from .matrix import BoundContext
from .seeds import SeedChoice, resolve_seed

__all__ = [
    "IterationConfig",
    "IterateRecord",
    "ConvergenceTrace",
    "StepDomainError",
    "STATUS_CONVERGED",
    "STATUS_MAX_ITER",
    "STATUS_STALLED",
    "lower_step",
    "upper_step",
    "run_lower",
    "run_upper",
]

STATUS_CONVERGED = "converged"
STATUS_MAX_ITER = "max-iter"
STATUS_STALLED = "stalled-zero-correction"

_DEFAULT_LOWER_SEED = SeedChoice("lin-xie")
_DEFAULT_UPPER_SEED = SeedChoice("frobenius")


class StepDomainError(ValueError):
    """lam is outside the range where the step formula is defined."""


@dataclass(frozen=True)
class IterationConfig:
    """Stopping controls for a refinement run.

    ``seed=None`` picks the direction default: the scalar-equation root for
    the lower run, the Frobenius norm for the upper run.
    """

    seed: Optional[SeedChoice] = None
    tol_abs: float = 0.0
    tol_rel: float = 1e-14
    max_iter: int = 100_000

    def __post_init__(self) -> None:
        if self.tol_abs < 0 or self.tol_rel < 0:
            raise ValueError("tolerances must be nonnegative")
        if self.tol_abs + self.tol_rel <= 0:
            raise ValueError("at least one of tol_abs, tol_rel must be positive")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {self.max_iter}")


@dataclass(frozen=True)
class IterateRecord:
    """One row of a trace: the k-th iterate and the correction computed there."""

    k: int
    lam: float
    a: float
    correction: float


@dataclass(frozen=True)
class ConvergenceTrace:
    """Full history of a run.

    ``final_lambda`` includes the last applied correction; on a noise-floor
    stop the final record's correction is reported but deliberately not
    applied, so ``final_lambda`` equals that record's ``lam``.
    """

    direction: str
    iterates: tuple[IterateRecord, ...]
    status: str
    final_lambda: float
    final_bound: float

    @property
    def iterations(self) -> int:
        return len(self.iterates)


def _check_lam(lam: float) -> float:
    lam = float(lam)
    if not math.isfinite(lam) or lam < 0:
        raise ValueError(f"lam must be finite and nonnegative, got {lam!r}")
    return lam


def _lower_correction(ctx: BoundContext, lam: float) -> float:
    n = ctx.n
    denom = ctx.frob_sq - (n - 1) * lam
    if denom <= 0:
        raise StepDomainError(
            f"S - (n-1)*lam = {denom!r} is not positive: lam={lam!r} exceeds the valid "
            "range of the lower step (the seed was above sigma_min^2)"
        )
    det = shifted_gram_logdet(ctx, lam)
    if det.is_zero:
        return 0.0
    correction = math.exp(det.log_mag + (n - 1) * (math.log(n - 1) - math.log(denom)))
    if not math.isfinite(correction):
        raise StepDomainError(f"lower correction overflowed at lam={lam!r}")
    return correction


def _upper_correction(ctx: BoundContext, lam: float) -> float:
    n = ctx.n
    denom = (n + 1) * lam - ctx.frob_sq
    if denom <= 0:
        raise StepDomainError(
            f"(n+1)*lam - S = {denom!r} is not positive: lam={lam!r} is below the valid "
            "range of the upper step (the seed was under sigma_max^2)"
        )
    det = shifted_gram_logdet(ctx, lam)
    if det.is_zero:
        return 0.0
    correction = math.exp(det.log_mag + (n - 1) * (math.log(n - 1) - math.log(denom)))
    if not math.isfinite(correction):
        raise StepDomainError(f"upper correction overflowed at lam={lam!r}")
    return correction


def lower_step(ctx: BoundContext, lam: float) -> float:
    """One increasing step; the result never drops below ``lam``."""
    lam = _check_lam(lam)
    new = lam + _lower_correction(ctx, lam)
    return max(new, lam)


def upper_step(ctx: BoundContext, lam: float) -> float:
    """One decreasing step, clamped into [0, lam]."""
    lam = _check_lam(lam)
    new = lam - _upper_correction(ctx, lam)
    return min(max(new, 0.0), lam)


def run_lower(ctx: BoundContext, config: Optional[IterationConfig] = None) -> ConvergenceTrace:
    """Iterate the lower map from the configured seed up toward sigma_min."""
    return _run(ctx, config, "lower")


def run_upper(ctx: BoundContext, config: Optional[IterationConfig] = None) -> ConvergenceTrace:
    """Iterate the upper map from the configured seed down toward sigma_max."""
    return _run(ctx, config, "upper")


def _run(ctx: BoundContext, config: Optional[IterationConfig], direction: str) -> ConvergenceTrace:
    if config is None:
        config = IterationConfig()
    lower = direction == "lower"
    choice = config.seed
    if choice is None:
        choice = _DEFAULT_LOWER_SEED if lower else _DEFAULT_UPPER_SEED
    seed_value = resolve_seed(choice, ctx, direction)
    lam = _check_lam(seed_value * seed_value)
    correction_at = _lower_correction if lower else _upper_correction

    records: list[IterateRecord] = []
    status = STATUS_MAX_ITER
    prev_correction = math.inf
    for k in range(1, config.max_iter + 1):
        correction = correction_at(ctx, lam)
        records.append(IterateRecord(k=k, lam=lam, a=math.sqrt(lam), correction=correction))
        if correction == 0.0:
            status = STATUS_STALLED
            break
        if correction >= prev_correction:
            # Rounding noise: true corrections decrease strictly.  Stop on the
            # last trusted iterate instead of applying a suspect step.
            status = STATUS_CONVERGED
            break
        applied = lam + correction if lower else max(lam - correction, 0.0)
        if correction <= config.tol_abs + config.tol_rel * lam:
            lam = applied
            status = STATUS_CONVERGED
            break
        prev_correction = correction
        lam = applied
    return ConvergenceTrace(
        direction=direction,
        iterates=tuple(records),
        status=status,
        final_lambda=lam,
        final_bound=math.sqrt(lam),
    )
