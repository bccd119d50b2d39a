"""Ground-truth singular values by cyclic Jacobi on the Gram matrix.

This is the reference the bounds are judged against in tests and in
``svbound verify``, so it deliberately shares no code with the LU path that
drives the bounds: eigenvalues come from two-sided unitary rotations, never
from pivots.  Jacobi is slow past a few dozen rows, hence the hard n <= 64
guard; within that range it is accurate to a few ulps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .matrix import ComplexMatrix, frobenius_sq, gram

__all__ = [
    "Spectrum",
    "JacobiConvergenceError",
    "MAX_ORACLE_DIM",
    "jacobi_hermitian_eigen",
    "singular_values",
    "root_is_exact",
]

MAX_ORACLE_DIM = 64
_MAX_SWEEPS = 30
_HERMITIAN_RTOL = 1e-10
_NEGATIVE_EIG_RTOL = 1e-10


class JacobiConvergenceError(ArithmeticError):
    """Off-diagonal mass refused to die within the sweep budget."""


@dataclass(frozen=True)
class Spectrum:
    """Singular values in descending order."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ValueError("a spectrum needs at least one value")
        for v in vals:
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"singular values must be finite and nonnegative, got {v!r}")
        if any(vals[i] < vals[i + 1] for i in range(len(vals) - 1)):
            raise ValueError("singular values must be sorted in descending order")
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def sigma_max(self) -> float:
        return self.values[0]

    @property
    def sigma_min(self) -> float:
        return self.values[-1]


def _off_diagonal_mass(h: np.ndarray) -> float:
    off = h.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def _diagonal_mass(h: np.ndarray) -> float:
    return float(np.linalg.norm(np.diagonal(h).real))


def jacobi_hermitian_eigen(matrix: ComplexMatrix, sweep_tol: float = 1e-14) -> list[float]:
    """Eigenvalues of a Hermitian matrix by cyclic-by-row Jacobi rotations.

    Sweeps the strict upper triangle in row order, annihilating one entry
    per rotation, until the Frobenius norm of the off-diagonal part falls
    to ``sweep_tol`` times that of the diagonal.  Returns the diagonal in
    whatever order it ends up; callers sort.
    """
    if not matrix.is_square:
        raise ValueError(f"eigenvalues need a square matrix, got {matrix.rows}x{matrix.cols}")
    n = matrix.rows
    if n > MAX_ORACLE_DIM:
        raise ValueError(f"oracle limited to n <= {MAX_ORACLE_DIM}, got n={n}")
    if not (math.isfinite(sweep_tol) and sweep_tol > 0):
        raise ValueError(f"sweep_tol must be finite and positive, got {sweep_tol!r}")
    arr = matrix.array
    drift = float(np.abs(arr - arr.conj().T).max())
    scale = float(np.abs(arr).max())
    if drift > _HERMITIAN_RTOL * max(scale, 1e-300):
        raise ValueError("matrix is not Hermitian within tolerance")

    h = np.array((arr + arr.conj().T) / 2.0, dtype=np.complex128, order="C")
    for _ in range(_MAX_SWEEPS):
        if _off_diagonal_mass(h) <= sweep_tol * _diagonal_mass(h):
            return [float(v) for v in np.diagonal(h).real]
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(h, p, q)
    if _off_diagonal_mass(h) <= sweep_tol * _diagonal_mass(h):
        return [float(v) for v in np.diagonal(h).real]
    raise JacobiConvergenceError(f"no convergence within {_MAX_SWEEPS} sweeps")


def _rotate(h: np.ndarray, p: int, q: int) -> None:
    g = h[p, q]
    absg = abs(g)
    if absg == 0.0:
        return
    alpha = h[p, p].real
    beta = h[q, q].real
    theta = (beta - alpha) / (2.0 * absg)
    if abs(theta) > 1e150:
        t = 1.0 / (2.0 * theta)
    else:
        t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = (t * c) * (g / absg)

    col_p = h[:, p].copy()
    col_q = h[:, q].copy()
    h[:, p] = c * col_p - np.conj(s) * col_q
    h[:, q] = s * col_p + c * col_q
    row_p = h[p, :].copy()
    row_q = h[q, :].copy()
    h[p, :] = c * row_p - s * row_q
    h[q, :] = np.conj(s) * row_p + c * row_q
    # Pin the analytically known results to kill accumulated roundoff.
    h[p, p] = alpha - t * absg
    h[q, q] = beta + t * absg
    h[p, q] = 0.0
    h[q, p] = 0.0


def singular_values(matrix: ComplexMatrix, sweep_tol: float = 1e-14) -> Spectrum:
    """All singular values of a square matrix, descending.

    Diagonalizes the symmetrized Gram matrix and takes square roots.
    Eigenvalues that round slightly negative are clamped to zero; anything
    more negative than rounding can explain is an error.
    """
    if not matrix.is_square:
        raise ValueError(f"singular values need a square matrix, got {matrix.rows}x{matrix.cols}")
    eigs = jacobi_hermitian_eigen(gram(matrix), sweep_tol=sweep_tol)
    floor = -_NEGATIVE_EIG_RTOL * max(frobenius_sq(matrix), 1e-300)
    cleaned = []
    for e in eigs:
        if e < floor:
            raise ValueError(
                f"Gram eigenvalue {e!r} is negative beyond rounding; the matrix is corrupt"
            )
        cleaned.append(math.sqrt(max(e, 0.0)))
    cleaned.sort(reverse=True)
    return Spectrum(tuple(cleaned))


def root_is_exact(spectrum: Spectrum, root: float, tol: float) -> bool:
    """Did the closed-form root land on sigma_min to within ``tol``?

    True exactly when the top n-1 singular values coincide; with a strict
    spread among them the root stays strictly below sigma_min.
    """
    return abs(root - spectrum.sigma_min) <= tol
