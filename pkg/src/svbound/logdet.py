"""Determinant magnitudes in log scale.

Determinants of shifted Gram matrices underflow long before the bounds they
feed become meaningless, so magnitudes are carried around as logarithms and
exponentiated only at the last moment.  Exact singularity is a separate flag
rather than ``-inf`` so that downstream code can branch on it without
worrying about IEEE edge cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from ._kernels import lu_logabsdet, shifted_logabsdet

if TYPE_CHECKING:  # pragma: no cover - import cycle guard, types only
    from .matrix import BoundContext, ComplexMatrix

__all__ = ["LogMagnitude", "lu_logdet", "shifted_gram_logdet"]


@dataclass(frozen=True)
class LogMagnitude:
    """A nonnegative magnitude that is either exactly zero or ``exp(log_mag)``.

    ``log_mag`` is 0.0 whenever ``is_zero`` is set, so equality comparisons
    behave sensibly.
    """

    is_zero: bool
    log_mag: float = 0.0

    def __post_init__(self) -> None:
        if self.is_zero:
            object.__setattr__(self, "log_mag", 0.0)
        elif not math.isfinite(self.log_mag):
            raise ValueError(f"log magnitude must be finite, got {self.log_mag!r}")

    @classmethod
    def zero(cls) -> "LogMagnitude":
        return cls(True)

    @classmethod
    def from_log(cls, log_mag: float) -> "LogMagnitude":
        return cls(False, float(log_mag))

    @classmethod
    def from_value(cls, value: float) -> "LogMagnitude":
        if value < 0 or not math.isfinite(value):
            raise ValueError(f"expected a finite nonnegative value, got {value!r}")
        if value == 0.0:
            return cls.zero()
        return cls(False, math.log(value))

    def value(self) -> float:
        """Exponentiate back to a plain float.  May overflow to ``inf``."""
        return 0.0 if self.is_zero else math.exp(self.log_mag)

    def __mul__(self, other: "LogMagnitude") -> "LogMagnitude":
        if not isinstance(other, LogMagnitude):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return LogMagnitude.zero()
        return LogMagnitude(False, self.log_mag + other.log_mag)

    def __pow__(self, exponent: float) -> "LogMagnitude":
        if self.is_zero:
            if exponent <= 0:
                raise ValueError("cannot raise an exact zero to a nonpositive power")
            return LogMagnitude.zero()
        return LogMagnitude(False, self.log_mag * exponent)


def lu_logdet(matrix: "ComplexMatrix") -> LogMagnitude:
    """``log |det M|`` via LU elimination with partial pivoting.

    The pivot with the largest modulus wins; ties go to the lowest row
    index.  An exactly zero pivot column reports ``is_zero`` instead of a
    tiny magnitude, so callers never have to pick an epsilon.
    """
    if not matrix.is_square:
        raise ValueError(f"determinant needs a square matrix, got {matrix.rows}x{matrix.cols}")
    work = np.array(matrix.array, dtype=np.complex128, order="C", copy=True)
    is_zero, log_mag = lu_logabsdet(work)
    if is_zero:
        return LogMagnitude.zero()
    return LogMagnitude.from_log(log_mag)


def shifted_gram_logdet(ctx: "BoundContext", lam: float) -> LogMagnitude:
    """``log |det(lam*I - G)|`` for the Gram matrix G held by ``ctx``.

    The shifted matrix is assembled fresh inside the kernel on every call;
    nothing is updated in place across iterations, so magnitudes cannot
    drift over a long run.
    """
    lam = float(lam)
    if not math.isfinite(lam) or lam < 0:
        raise ValueError(f"shift must be finite and nonnegative, got {lam!r}")
    is_zero, log_mag = shifted_logabsdet(ctx.gram.array, lam)
    if is_zero:
        return LogMagnitude.zero()
    return LogMagnitude.from_log(log_mag)
