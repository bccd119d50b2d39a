"""Monotone, convergent two-sided bounds on extreme singular values.

Given a nonsingular complex square matrix, this package evaluates a family
of closed-form lower bounds on the smallest singular value, then refines the
sharpest of them through a monotonically increasing iteration that converges
to sigma_min itself.  A mirrored decreasing iteration squeezes down onto
sigma_max from the Frobenius norm.  A self-contained Jacobi eigensolver
serves as ground truth for verification, and a seeded ensemble module
generates matrices with known spectra for benchmarking.

Typical use::

    from svbound import ComplexMatrix, build_context, run_lower, run_upper

    ctx = build_context(ComplexMatrix.from_rows([[1, 1], [0, 2]]))
    lower = run_lower(ctx)   # increasing to sigma_min
    upper = run_upper(ctx)   # decreasing to sigma_max
"""

from .ensemble import (
    BenchRow,
    SpectrumSample,
    SweepSpec,
    bench_sweep,
    random_unitary,
    synth_matrix,
)
from .formats import (
    FORMAT_CSV,
    FORMAT_MATRIX_MARKET,
    FORMATS,
    MatrixParseError,
    detect_format,
    format_matrix,
    parse_matrix,
)
from .iterate import (
    STATUS_CONVERGED,
    STATUS_MAX_ITER,
    STATUS_STALLED,
    ConvergenceTrace,
    IterateRecord,
    IterationConfig,
    StepDomainError,
    lower_step,
    run_lower,
    run_upper,
    upper_step,
)
from .logdet import LogMagnitude, lu_logdet, shifted_gram_logdet
from .matrix import (
    BoundContext,
    ComplexMatrix,
    SingularMatrixError,
    build_context,
    frobenius_sq,
    gram,
)
from .oracle import (
    MAX_ORACLE_DIM,
    JacobiConvergenceError,
    Spectrum,
    jacobi_hermitian_eigen,
    root_is_exact,
    singular_values,
)
from .seeds import (
    BracketViolationError,
    SeedChoice,
    lin_xie_root,
    resolve_seed,
    upper_seed,
    yu_gu_lower,
    zou_lower,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # matrix
    "ComplexMatrix", "BoundContext", "SingularMatrixError",
    "frobenius_sq", "gram", "build_context",
    # formats
    "MatrixParseError", "FORMAT_MATRIX_MARKET", "FORMAT_CSV", "FORMATS",
    "parse_matrix", "format_matrix", "detect_format",
    # logdet
    "LogMagnitude", "lu_logdet", "shifted_gram_logdet",
    # seeds
    "SeedChoice", "BracketViolationError",
    "yu_gu_lower", "zou_lower", "lin_xie_root", "upper_seed", "resolve_seed",
    # iterate
    "IterationConfig", "IterateRecord", "ConvergenceTrace", "StepDomainError",
    "STATUS_CONVERGED", "STATUS_MAX_ITER", "STATUS_STALLED",
    "lower_step", "upper_step", "run_lower", "run_upper",
    # oracle
    "Spectrum", "JacobiConvergenceError", "MAX_ORACLE_DIM",
    "jacobi_hermitian_eigen", "singular_values", "root_is_exact",
    # ensemble
    "SpectrumSample", "SweepSpec", "BenchRow",
    "random_unitary", "synth_matrix", "bench_sweep",
]
