"""Closed-form seed bounds: frozen values, the strict chain, and edge cases."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from svbound.logdet import LogMagnitude
from svbound.matrix import BoundContext, ComplexMatrix, build_context
from svbound.seeds import (
    BracketViolationError,
    SeedChoice,
    lin_xie_root,
    resolve_seed,
    upper_seed,
    yu_gu_lower,
    zou_lower,
)


def value_space_root(n, frob_sq, det_sq):
    """Reference bisection for x^2 (S - x^2)^(n-1) = det_sq (n-1)^(n-1),
    done directly in value space (no logs) so it shares nothing with the
    implementation under test."""
    target = det_sq * (n - 1) ** (n - 1)
    lo, hi = 0.0, math.sqrt(frob_sq / n)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if mid * mid * (frob_sq - mid * mid) ** (n - 1) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TestFrozenValues:
    def test_diag12(self, diag12_ctx):
        assert_allclose(yu_gu_lower(diag12_ctx), 2.0 / math.sqrt(5.0), rtol=1e-14)
        assert_allclose(zou_lower(diag12_ctx), 2.0 / math.sqrt(4.2), rtol=1e-14)
        assert_allclose(lin_xie_root(diag12_ctx), 1.0, rtol=1e-9)

    def test_diag123(self, diag123_ctx):
        assert_allclose(yu_gu_lower(diag123_ctx), 6.0 / 7.0, rtol=1e-14)
        assert_allclose(zou_lower(diag123_ctx), 0.9046153846153846, rtol=1e-14)
        assert_allclose(lin_xie_root(diag123_ctx), 0.9111788076462428, rtol=1e-9)

    def test_identity3(self):
        ctx = build_context(ComplexMatrix.identity(3))
        assert_allclose(yu_gu_lower(ctx), 2.0 / 3.0, rtol=1e-14)
        assert_allclose(zou_lower(ctx), 18.0 / 23.0, rtol=1e-14)
        # All singular values coincide, so the root sits at the flat top of
        # the bracket where bisection loses quadratically many digits.
        assert_allclose(lin_xie_root(ctx), 1.0, rtol=1e-7)

    def test_upper_seed_is_frobenius_norm(self, diag12_ctx):
        assert_allclose(upper_seed(diag12_ctx), math.sqrt(5.0), rtol=1e-15)


class TestRootAgainstReference:
    def test_matches_value_space_bisection(self, ensemble):
        for sample, ctx in ensemble[:40]:
            expected = value_space_root(ctx.n, ctx.frob_sq, ctx.log_det_sq.value())
            assert_allclose(lin_xie_root(ctx), expected, rtol=1e-9)

    def test_two_by_two_root_is_always_sigma_min(self, ensemble):
        # For n=2 the scalar equation factors as (x^2 - s1^2)(x^2 - s2^2),
        # so the smallest positive root is sigma_min itself.
        seen = 0
        for sample, ctx in ensemble:
            if ctx.n != 2:
                continue
            seen += 1
            assert_allclose(lin_xie_root(ctx), sample.sigma.sigma_min, rtol=1e-9)
        assert seen > 0

    def test_tol_controls_bracket_width(self, diag123_ctx):
        coarse = lin_xie_root(diag123_ctx, tol=1e-3)
        fine = lin_xie_root(diag123_ctx, tol=1e-12)
        assert abs(coarse - fine) < 1e-3
        assert coarse != fine

    def test_rejects_bad_tol(self, diag12_ctx):
        with pytest.raises(ValueError):
            lin_xie_root(diag12_ctx, tol=0.0)


class TestChain:
    def test_strict_chain_on_ensemble(self, ensemble):
        for sample, ctx in ensemble[:60]:
            l = yu_gu_lower(ctx)
            l0 = zou_lower(ctx)
            a = lin_xie_root(ctx)
            s_min = sample.sigma.sigma_min
            assert 0.0 < l < l0 < a
            assert a <= s_min * (1.0 + 1e-9)

    def test_invariant_under_unit_phase(self, diag123_ctx):
        phased = build_context(
            ComplexMatrix(np.exp(0.7j) * np.diag([1.0, 2.0, 3.0]))
        )
        assert_allclose(yu_gu_lower(phased), yu_gu_lower(diag123_ctx), rtol=1e-12)
        assert_allclose(zou_lower(phased), zou_lower(diag123_ctx), rtol=1e-12)
        assert_allclose(lin_xie_root(phased), lin_xie_root(diag123_ctx), rtol=1e-12)


class TestBracketViolation:
    def test_inconsistent_context_raises(self):
        # det^2 bigger than (S/n)^n contradicts AM-GM; only a hand-built
        # context can claim it.
        ctx = BoundContext(
            n=2,
            frob_sq=2.0,
            log_det_sq=LogMagnitude.from_value(9.0),
            gram=ComplexMatrix.identity(2),
        )
        with pytest.raises(BracketViolationError):
            lin_xie_root(ctx)


class TestSeedChoice:
    def test_kinds(self):
        assert SeedChoice.yu_gu().kind == "yu-gu"
        assert SeedChoice.zou().kind == "zou"
        assert SeedChoice.lin_xie().kind == "lin-xie"
        assert SeedChoice.frobenius().kind == "frobenius"
        assert SeedChoice.custom(0.5).custom_value == 0.5

    def test_rejects_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown seed kind"):
            SeedChoice("random")

    def test_custom_requires_value(self):
        with pytest.raises(ValueError):
            SeedChoice("custom")
        with pytest.raises(ValueError):
            SeedChoice("custom", -1.0)
        with pytest.raises(ValueError):
            SeedChoice("yu-gu", 0.5)

    def test_resolve_directions(self, diag12_ctx):
        assert_allclose(
            resolve_seed(SeedChoice.zou(), diag12_ctx, "lower"),
            zou_lower(diag12_ctx),
            rtol=1e-15,
        )
        assert_allclose(
            resolve_seed(SeedChoice.frobenius(), diag12_ctx, "upper"),
            math.sqrt(5.0),
            rtol=1e-15,
        )
        assert resolve_seed(SeedChoice.custom(0.5), diag12_ctx, "lower") == 0.5

    def test_resolve_rejects_mismatch(self, diag12_ctx):
        with pytest.raises(ValueError, match="upper"):
            resolve_seed(SeedChoice.frobenius(), diag12_ctx, "lower")
        with pytest.raises(ValueError, match="lower"):
            resolve_seed(SeedChoice.lin_xie(), diag12_ctx, "upper")
        with pytest.raises(ValueError, match="direction"):
            resolve_seed(SeedChoice.zou(), diag12_ctx, "sideways")
