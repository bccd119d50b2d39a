"""Dense complex matrices and the shared context consumed by every bound.

All bound formulas in this package depend on the input matrix A only through
four quantities: the dimension n, the squared Frobenius norm, the magnitude
of det A (kept in log scale), and the Gram matrix A^H A.  ``build_context``
computes them once so repeated bound evaluations never touch A again.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .logdet import LogMagnitude, lu_logdet

__all__ = [
    "ComplexMatrix",
    "BoundContext",
    "SingularMatrixError",
    "frobenius_sq",
    "gram",
    "build_context",
]

_HERMITIAN_RTOL = 1e-12


class SingularMatrixError(ValueError):
    """Raised when a nonsingular matrix is required but det A is exactly zero."""


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """Immutable dense matrix of complex128 entries.

    The backing array is C-ordered and marked read-only, so instances can be
    shared freely (including across bench worker threads).  Construction
    copies its input and rejects non-finite entries outright; nothing else in
    the package needs to re-check for NaN or infinity.
    """

    array: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.array, dtype=np.complex128, order="C", copy=True)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ValueError(f"expected a 2-D matrix with positive dimensions, got shape {arr.shape}")
        if not (np.isfinite(arr.real).all() and np.isfinite(arr.imag).all()):
            raise ValueError("matrix entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "array", arr)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[complex]]) -> "ComplexMatrix":
        return cls(np.array(rows, dtype=np.complex128))

    @classmethod
    def identity(cls, n: int) -> "ComplexMatrix":
        return cls(np.eye(n, dtype=np.complex128))

    @classmethod
    def diagonal(cls, values: Iterable[complex]) -> "ComplexMatrix":
        return cls(np.diag(np.asarray(list(values), dtype=np.complex128)))

    @property
    def rows(self) -> int:
        return self.array.shape[0]

    @property
    def cols(self) -> int:
        return self.array.shape[1]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def entries(self) -> tuple[complex, ...]:
        """All entries in row-major order."""
        return tuple(complex(z) for z in self.array.ravel())

    def conjugate_transpose(self) -> "ComplexMatrix":
        return ComplexMatrix(self.array.conj().T)


@dataclass(frozen=True, eq=False)
class BoundContext:
    """Everything the seed formulas and iterations need to know about A.

    ``log_det_sq`` stores log |det A|^2 so products of n tiny singular values
    never underflow, and ``gram`` is symmetrized on construction so the
    shifted determinants downstream see an exactly Hermitian matrix.
    """

    n: int
    frob_sq: float
    log_det_sq: LogMagnitude
    gram: ComplexMatrix

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"context requires n >= 2, got n={self.n}")
        if not (np.isfinite(self.frob_sq) and self.frob_sq > 0):
            raise ValueError(f"frob_sq must be finite and positive, got {self.frob_sq!r}")
        if self.log_det_sq.is_zero:
            raise SingularMatrixError("context requires a nonsingular matrix")
        g = self.gram.array
        if g.shape != (self.n, self.n):
            raise ValueError(f"gram must be {self.n}x{self.n}, got {g.shape}")
        drift = np.abs(g - g.conj().T).max()
        scale = np.abs(g).max()
        if drift > _HERMITIAN_RTOL * scale:
            raise ValueError("gram matrix is not Hermitian within tolerance")


def frobenius_sq(matrix: ComplexMatrix) -> float:
    """Sum of squared entry moduli, accumulated without any square roots."""
    arr = matrix.array
    return float(np.sum(arr.real * arr.real) + np.sum(arr.imag * arr.imag))


def gram(matrix: ComplexMatrix) -> ComplexMatrix:
    """A^H A, symmetrized as (M + M^H)/2 to scrub floating-point drift."""
    if not matrix.is_square:
        raise ValueError(f"gram needs a square matrix, got {matrix.rows}x{matrix.cols}")
    arr = matrix.array
    m = arr.conj().T @ arr
    return ComplexMatrix((m + m.conj().T) / 2.0)


def build_context(matrix: ComplexMatrix) -> BoundContext:
    """Precompute the scalars shared by every bound.

    The determinant magnitude comes from one LU pass over A itself (not the
    Gram matrix), then is doubled in log scale; this halves the rounding
    error relative to factoring A^H A.
    """
    if not matrix.is_square:
        raise ValueError(f"context needs a square matrix, got {matrix.rows}x{matrix.cols}")
    if matrix.rows < 2:
        raise ValueError("context requires n >= 2; a 1x1 matrix has |a11| as its only singular value")
    det = lu_logdet(matrix)
    if det.is_zero:
        raise SingularMatrixError("matrix is singular: an exactly zero pivot column was hit")
    return BoundContext(
        n=matrix.rows,
        frob_sq=frobenius_sq(matrix),
        log_det_sq=det ** 2,
        gram=gram(matrix),
    )
