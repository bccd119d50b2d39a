"""Closed-form seed bounds on the smallest and largest singular values.

Three lower seeds of increasing sharpness and one upper seed, all evaluated
in log scale so products of n tiny (or huge) quantities cannot under- or
overflow:

* ``yu_gu_lower``:   l  = |det A| * ((n-1) / ||A||_F^2) ** ((n-1)/2)
* ``zou_lower``:     l0 = |det A| * ((n-1) / (||A||_F^2 - l^2)) ** ((n-1)/2)
* ``lin_xie_root``:  a  = the smallest positive root of
                     x^2 (||A||_F^2 - x^2)^(n-1) = |det A|^2 (n-1)^(n-1),
                     which always improves on l0 and equals sigma_min exactly
                     when the top n-1 singular values coincide.
* ``upper_seed``:    ||A||_F, the trivial upper bound on sigma_max.

For every nonsingular A the chain 0 < l < l0 < a <= sigma_min holds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .matrix import BoundContext

__all__ = [
    "SeedChoice",
    "BracketViolationError",
    "SEED_KINDS",
    "LOWER_SEED_KINDS",
    "UPPER_SEED_KINDS",
    "yu_gu_lower",
    "zou_lower",
    "lin_xie_root",
    "upper_seed",
    "resolve_seed",
]

SEED_KINDS = ("yu-gu", "zou", "lin-xie", "frobenius", "custom")
LOWER_SEED_KINDS = ("yu-gu", "zou", "lin-xie", "custom")
UPPER_SEED_KINDS = ("frobenius", "custom")

# The bisection bracket is mathematically guaranteed; allow this much log-scale
# rounding slack before declaring the context inconsistent.
_BRACKET_SLACK = 1e-9


class BracketViolationError(ArithmeticError):
    """The root bracket failed, i.e. |det A|^2 > (||A||_F^2 / n)^n.

    That inequality is impossible for a genuine matrix (it contradicts the
    arithmetic-geometric mean inequality on the squared singular values), so
    hitting this means the context quantities are inconsistent.
    """


@dataclass(frozen=True)
class SeedChoice:
    """Which starting bound an iteration should use.

    ``custom_value`` is required exactly for ``kind="custom"`` and is the
    caller's responsibility to keep inside the valid seed range.
    """

    kind: str
    custom_value: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind not in SEED_KINDS:
            raise ValueError(f"unknown seed kind {self.kind!r}, expected one of {SEED_KINDS}")
        if self.kind == "custom":
            if self.custom_value is None:
                raise ValueError("seed kind 'custom' needs a custom_value")
            if not (math.isfinite(self.custom_value) and self.custom_value > 0):
                raise ValueError(f"custom seed must be finite and positive, got {self.custom_value!r}")
        elif self.custom_value is not None:
            raise ValueError(f"custom_value only applies to kind 'custom', not {self.kind!r}")

    @classmethod
    def yu_gu(cls) -> "SeedChoice":
        return cls("yu-gu")

    @classmethod
    def zou(cls) -> "SeedChoice":
        return cls("zou")

    @classmethod
    def lin_xie(cls) -> "SeedChoice":
        return cls("lin-xie")

    @classmethod
    def frobenius(cls) -> "SeedChoice":
        return cls("frobenius")

    @classmethod
    def custom(cls, value: float) -> "SeedChoice":
        return cls("custom", float(value))


def _log_abs_det(ctx: BoundContext) -> float:
    return 0.5 * ctx.log_det_sq.log_mag


def yu_gu_lower(ctx: BoundContext) -> float:
    """The baseline determinant/Frobenius lower bound l on sigma_min."""
    n = ctx.n
    log_l = _log_abs_det(ctx) + 0.5 * (n - 1) * (math.log(n - 1) - math.log(ctx.frob_sq))
    return math.exp(log_l)

def zou_lower(ctx: BoundContext) -> float:
    """The refinement l0: reuse l to shrink the Frobenius mass in the denominator."""
    n = ctx.n
    l = yu_gu_lower(ctx)
    log_l0 = _log_abs_det(ctx) + 0.5 * (n - 1) * (math.log(n - 1) - math.log(ctx.frob_sq - l * l))
    return math.exp(log_l0)


def lin_xie_root(ctx: BoundContext, tol: float = 1e-12) -> float:
    """Sharpest of the closed-form lower seeds: a root of a scalar equation.

    Bisection runs on g(x) = 2 log x + (n-1) log(S - x^2) over (0, sqrt(S/n)];
    g is strictly increasing there and the right endpoint dominates the
    target by the AM-GM inequality, so the bracket never lies.  ``tol`` is
    the relative bracket width at which bisection stops (at most 200 steps
    regardless).
    """
    if not (math.isfinite(tol) and tol > 0):
        raise ValueError(f"tol must be finite and positive, got {tol!r}")
    n = ctx.n
    s = ctx.frob_sq
    target = ctx.log_det_sq.log_mag + (n - 1) * math.log(n - 1)

    def log_g(x: float) -> float:
        return 2.0 * math.log(x) + (n - 1) * math.log(s - x * x)

    hi = math.sqrt(s / n)
    top = log_g(hi)
    if top < target:
        if top < target - _BRACKET_SLACK * max(1.0, abs(target)):
            raise BracketViolationError(
                "root bracket violated: |det A|^2 exceeds (frob_sq/n)^n, context is inconsistent"
            )
        # Equality case up to rounding: every singular value coincides and the
        # root sits exactly at the endpoint.
        return hi
    lo = 0.0
    for _ in range(200):
        if hi - lo <= tol * hi:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # bracket exhausted at float resolution
        if log_g(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def upper_seed(ctx: BoundContext) -> float:
    """The Frobenius norm, a hard ceiling on sigma_max."""
    return math.sqrt(ctx.frob_sq)


def resolve_seed(choice: SeedChoice, ctx: BoundContext, direction: str) -> float:
    """Turn a SeedChoice into a number for the given direction.

    Built-in lower seeds are only valid for the lower iteration and vice
    versa; mixing them up raises immediately rather than letting the
    iteration fail with a confusing domain error.
    """
    if direction not in ("lower", "upper"):
        raise ValueError(f"direction must be 'lower' or 'upper', got {direction!r}")
    if choice.kind == "custom":
        return float(choice.custom_value)
    if direction == "lower":
        if choice.kind == "yu-gu":
            return yu_gu_lower(ctx)
        if choice.kind == "zou":
            return zou_lower(ctx)
        if choice.kind == "lin-xie":
            return lin_xie_root(ctx)
        raise ValueError(f"seed kind {choice.kind!r} only applies to the upper direction")
    if choice.kind == "frobenius":
        return upper_seed(ctx)
    raise ValueError(f"seed kind {choice.kind!r} only applies to the lower direction")
