import math

import numpy as np
import pytest

from bdew.bivariate import (
    BdewParams,
    PairPoint,
    cond_cdf_given_eq,
    cond_cdf_given_le,
    cond_expectation,
    cond_pmf,
    joint_cdf,
    joint_hrf,
    joint_pgf,
    joint_pmf,
    joint_sf,
    marginal_cdf,
    marginal_pmf,
    max_combine,
    sample_pair,
    stress_strength,
)
from bdew.edw import EdwParams, edw_cdf
from bdew.series import SeriesControl, SeriesTruncationError

UNIT = BdewParams(1.0, 0.5, 1.0, 1.0, 1.0)


def grid_size(params, tol=1e-10):
    """Smallest square covering all but `tol` of the probability mass."""
    n = 8
    while 1.0 - joint_cdf(params, PairPoint(n, n)) >= tol:
        n *= 2
    return n


class TestConstruction:
    @pytest.mark.parametrize("bad", [
        dict(alpha=0.0, p=0.5, beta1=1, beta2=1, beta3=1),
        dict(alpha=1.0, p=1.0, beta1=1, beta2=1, beta3=1),
        dict(alpha=1.0, p=0.5, beta1=0.0, beta2=1, beta3=1),
        dict(alpha=1.0, p=0.5, beta1=1, beta2=-1, beta3=1),
        dict(alpha=1.0, p=0.5, beta1=1, beta2=1, beta3=0.0),
    ])
    def test_rejects_bad_params(self, bad):
        with pytest.raises(ValueError):
            BdewParams(**bad)

    def test_latent_components(self):
        b = BdewParams(1.5, 0.4, 0.5, 2.0, 3.0)
        assert b.component(1) == EdwParams(1.5, 0.4, 0.5)
        assert b.component(3) == EdwParams(1.5, 0.4, 3.0)
        assert b.marginal(2) == EdwParams(1.5, 0.4, 5.0)

    def test_pair_point_rejects_negative(self):
        with pytest.raises(ValueError):
            PairPoint(-1, 0)


class TestJointCdf:
    def test_hand_values(self):
        assert joint_cdf(UNIT, (0, 1)) == pytest.approx(0.1875, abs=1e-12)
        assert joint_cdf(UNIT, (1, 1)) == pytest.approx(0.75**3, abs=1e-12)

    def test_tends_to_one(self, battery):
        for params in battery:
            assert joint_cdf(params, (5000, 5000)) == pytest.approx(1.0, abs=1e-8)

    def test_nondecreasing(self, battery):
        for params in battery[:8]:
            for x1 in range(10):
                for x2 in range(10):
                    f = joint_cdf(params, (x1, x2))
                    assert joint_cdf(params, (x1 + 1, x2)) >= f - 1e-15
                    assert joint_cdf(params, (x1, x2 + 1)) >= f - 1e-15

    def test_pqd(self, battery):
        # joint CDF dominates the product of marginals everywhere
        for params in battery:
            for x1 in range(16):
                m1 = marginal_cdf(params, 1, x1)
                for x2 in range(16):
                    prod = m1 * marginal_cdf(params, 2, x2)
                    assert joint_cdf(params, (x1, x2)) >= prod - 1e-14


class TestJointPmf:
    def test_hand_values(self):
        assert joint_pmf(UNIT, (0, 0)) == pytest.approx(0.125, abs=1e-12)
        assert joint_pmf(UNIT, (0, 1)) == pytest.approx(0.0625, abs=1e-12)

    def test_four_corner_identity(self, battery):
        def F(params, x1, x2):
            if x1 < 0 or x2 < 0:
                return 0.0
            return joint_cdf(params, (x1, x2))

        for params in battery:
            for x1 in range(21):
                for x2 in range(21):
                    diff = (
                        F(params, x1, x2)
                        - F(params, x1 - 1, x2)
                        - F(params, x1, x2 - 1)
                        + F(params, x1 - 1, x2 - 1)
                    )
                    assert joint_pmf(params, (x1, x2)) == pytest.approx(
                        diff, abs=1e-12
                    )

    def test_normalization(self):
        for params in [UNIT, BdewParams(2.0, 0.5, 1.0, 2.0, 0.5)]:
            n = grid_size(params)
            total = sum(
                joint_pmf(params, (i, j))
                for i in range(n + 1)
                for j in range(n + 1)
            )
            assert total == pytest.approx(1.0, abs=1e-9)

    def test_diagonal_nonnegative_extreme_params(self):
        params = BdewParams(3.5239, 0.9998, 0.5327, 1.2491, 1.5922)
        for x in range(40):
            assert joint_pmf(params, (x, x)) >= 0.0


class TestMarginals:
    def test_hand_value(self):
        assert marginal_cdf(UNIT, 1, 0) == pytest.approx(0.25, abs=1e-12)
        assert marginal_pmf(UNIT, 1, 0) == pytest.approx(0.25, abs=1e-12)

    def test_matches_joint_limit(self):
        assert marginal_cdf(UNIT, 1, 3) == pytest.approx(
            joint_cdf(UNIT, (3, 400)), abs=1e-12
        )

    def test_symmetry(self):
        b = BdewParams(1.3, 0.6, 1.7, 1.7, 0.9)
        for x in range(10):
            assert marginal_cdf(b, 1, x) == marginal_cdf(b, 2, x)

    def test_row_sums(self, battery):
        for params in battery[:10]:
            n = grid_size(params, tol=1e-11)
            for x1 in range(6):
                row = sum(joint_pmf(params, (x1, j)) for j in range(n + 1))
                assert row == pytest.approx(
                    marginal_pmf(params, 1, x1), abs=1e-9
                )

    def test_which_validated(self):
        with pytest.raises(ValueError):
            marginal_cdf(UNIT, 3, 0)


class TestConditionals:
    def test_cond_pmf_hand_values(self):
        assert cond_pmf(UNIT, 0, 0) == pytest.approx(0.5, abs=1e-12)
        assert cond_pmf(UNIT, 1, 0) == pytest.approx(0.25, abs=1e-12)

    def test_cond_pmf_normalizes(self, battery):
        for params in battery[:8]:
            n = grid_size(params)
            for x2 in range(4):
                total = sum(cond_pmf(params, x1, x2) for x1 in range(n + 1))
                assert total == pytest.approx(1.0, abs=1e-9)

    def test_cond_cdf_le_hand_value(self):
        assert cond_cdf_given_le(UNIT, 0, 1) == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_cond_cdf_le_reduces_when_x2_below(self):
        # conditioning on X2 <= x2 < x1 leaves the bare beta1 CDF
        b = BdewParams(1.4, 0.45, 0.8, 1.9, 1.1)
        for x1 in range(2, 10):
            for x2 in range(0, x1):
                assert cond_cdf_given_le(b, x1, x2) == pytest.approx(
                    edw_cdf(b.component(1), x1), abs=1e-12
                )

    def test_cond_cdf_le_tends_to_one(self):
        assert cond_cdf_given_le(UNIT, 200, 3) == pytest.approx(1.0, abs=1e-12)

    def test_cond_cdf_eq_hand_value(self):
        assert cond_cdf_given_eq(UNIT, 0, 0) == pytest.approx(0.5, abs=1e-12)

    def test_cond_cdf_eq_is_partial_sum(self):
        b = BdewParams(0.9, 0.6, 1.2, 0.7, 1.5)
        for x2 in range(3):
            acc = 0.0
            prev = 0.0
            for x1 in range(12):
                acc += cond_pmf(b, x1, x2)
                val = cond_cdf_given_eq(b, x1, x2)
                assert val == pytest.approx(min(acc, 1.0), abs=1e-12)
                assert val >= prev - 1e-15
                prev = val

    def test_cond_expectation_hand_value(self):
        # geometric tail: sum_{x>=1} x 0.5^x 0.5 = 1 given X2 = 0
        assert cond_expectation(UNIT, 0) == pytest.approx(1.0, abs=1e-9)

    def test_cond_expectation_brute_force(self, battery):
        for params in battery[:6]:
            for x2 in range(3):
                brute = sum(x1 * cond_pmf(params, x1, x2) for x1 in range(400))
                assert cond_expectation(params, x2) == pytest.approx(
                    brute, abs=1e-8
                )

    def test_cond_expectation_independence_limit(self):
        # beta3 ~ 0 decouples the coordinates
        b = BdewParams(1.0, 0.5, 1.0, 1.0, 1e-8)
        mean = sum(1.0 - edw_cdf(b.component(1), x) for x in range(200))
        assert cond_expectation(b, 2) == pytest.approx(mean, rel=1e-5)

    def test_zero_probability_conditioning(self):
        with pytest.raises(ZeroDivisionError):
            cond_pmf(UNIT, 0, 10_000)


class TestPgf:
    def test_boundary_values(self):
        assert joint_pgf(UNIT, 1.0, 1.0) == 1.0
        assert joint_pgf(UNIT, 0.0, 0.0) == pytest.approx(0.125, abs=1e-10)

    def test_monotone_in_each_argument(self):
        prev = 0.0
        for u in np.linspace(0.0, 0.95, 12):
            val = joint_pgf(UNIT, float(u), 0.5)
            assert val >= prev
            prev = val

    def test_derivative_gives_marginal_mean(self):
        # E[X1] = 5/3 for the unit parameters (marginal is EDW beta = 2)
        for eps in (1e-4, 1e-5):
            slope = (joint_pgf(UNIT, 1.0 - eps, 1.0) - 1.0) / (-eps)
            assert slope == pytest.approx(5.0 / 3.0, rel=5e-4 + 10 * eps)

    def test_rejects_arguments_outside_disk(self):
        with pytest.raises(ValueError):
            joint_pgf(UNIT, 1.5, 0.0)


class TestStressStrength:
    def test_unit_hand_value(self):
        assert stress_strength(UNIT) == pytest.approx(5.0 / 21.0, abs=1e-9)

    def test_brute_force_agreement(self, battery):
        for params in battery:
            n = grid_size(params)
            brute = sum(
                joint_pmf(params, (x1, x2))
                for x2 in range(1, n + 1)
                for x1 in range(x2)
            )
            assert stress_strength(params) == pytest.approx(brute, abs=1e-9)

    def test_exchangeable_symmetry(self):
        b = BdewParams(1.2, 0.6, 1.4, 1.4, 0.8)
        diag = sum(joint_pmf(b, (x, x)) for x in range(grid_size(b) + 1))
        assert stress_strength(b) == pytest.approx((1.0 - diag) / 2.0, abs=1e-9)

    def test_decomposition(self, battery):
        for params in battery[:10]:
            swapped = BdewParams(
                params.alpha, params.p, params.beta2, params.beta1, params.beta3
            )
            diag = sum(
                joint_pmf(params, (x, x)) for x in range(grid_size(params) + 1)
            )
            total = stress_strength(params) + stress_strength(swapped) + diag
            assert total == pytest.approx(1.0, abs=1e-9)

    def test_truncation_failure_reported(self):
        with pytest.raises(SeriesTruncationError):
            stress_strength(UNIT, SeriesControl(tol=1e-12, max_terms=3))


class TestReliability:
    def test_sf_hand_value(self):
        assert joint_sf(UNIT, (0, 0)) == pytest.approx(0.625, abs=1e-12)

    def test_sf_vanishes_far_out(self):
        assert joint_sf(UNIT, (120, 120)) == pytest.approx(0.0, abs=1e-12)

    def test_inclusion_exclusion_identity(self, battery):
        for params in battery[:10]:
            for x1 in range(8):
                for x2 in range(8):
                    total = (
                        joint_sf(params, (x1, x2))
                        + marginal_cdf(params, 1, x1)
                        + marginal_cdf(params, 2, x2)
                        - joint_cdf(params, (x1, x2))
                    )
                    assert total == pytest.approx(1.0, abs=1e-12)

    def test_hrf_hand_value(self):
        assert joint_hrf(UNIT, (0, 0)) == pytest.approx(0.2, abs=1e-12)

    def test_hrf_times_sf_is_pmf(self, battery):
        for params in battery[:8]:
            for x1 in range(6):
                for x2 in range(6):
                    sf = joint_sf(params, (x1, x2))
                    if sf > 1e-12:
                        assert joint_hrf(params, (x1, x2)) * sf == pytest.approx(
                            joint_pmf(params, (x1, x2)), abs=1e-12
                        )

    def test_hrf_undefined_at_zero_survival(self):
        with pytest.raises(ZeroDivisionError):
            joint_hrf(UNIT, (5000, 5000))


class TestSpecialForms:
    def test_bdge_collapse(self):
        # alpha = 1 gives the geometric-kernel bivariate form
        b = BdewParams(1.0, 0.37, 1.8, 0.9, 2.2)
        for x1 in range(8):
            for x2 in range(8):
                z = min(x1, x2)
                expected = (
                    (1 - 0.37 ** (x1 + 1)) ** 1.8
                    * (1 - 0.37 ** (x2 + 1)) ** 0.9
                    * (1 - 0.37 ** (z + 1)) ** 2.2
                )
                assert joint_cdf(b, (x1, x2)) == pytest.approx(expected, abs=1e-12)

    def test_nbg_collapse(self):
        beta, p = 0.35, 0.55
        b = BdewParams(1.0, p, 1 - beta, 1 - beta, beta)
        for x1 in range(8):
            for x2 in range(8):
                z = min(x1, x2)
                expected = (
                    (1 - p ** (x1 + 1)) ** (1 - beta)
                    * (1 - p ** (x2 + 1)) ** (1 - beta)
                    * (1 - p ** (z + 1)) ** beta
                )
                assert joint_cdf(b, (x1, x2)) == pytest.approx(expected, abs=1e-12)


class TestMaxCombine:
    def test_sum_rule(self):
        combined = max_combine([UNIT, UNIT])
        assert combined == BdewParams(1.0, 0.5, 2.0, 2.0, 2.0)

    def test_cdf_is_product_everywhere(self):
        a = BdewParams(1.3, 0.6, 0.5, 1.0, 1.5)
        b = BdewParams(1.3, 0.6, 2.0, 0.7, 0.3)
        combined = max_combine([a, b])
        for x1 in range(16):
            for x2 in range(16):
                prod = joint_cdf(a, (x1, x2)) * joint_cdf(b, (x1, x2))
                assert joint_cdf(combined, (x1, x2)) == pytest.approx(
                    prod, abs=1e-13
                )

    def test_hand_value(self):
        combined = max_combine([UNIT, UNIT])
        assert joint_cdf(combined, (1, 1)) == pytest.approx(0.75**6, abs=1e-12)

    def test_singleton_identity(self):
        assert max_combine([UNIT]) == UNIT

    def test_rejects_mismatched(self):
        with pytest.raises(ValueError):
            max_combine([UNIT, BdewParams(2.0, 0.5, 1, 1, 1)])
        with pytest.raises(ValueError):
            max_combine([])


class TestSampling:
    def test_hand_value(self):
        assert sample_pair(UNIT, 0.9, 0.1, 0.1) == PairPoint(3, 0)

    def test_coordinates_dominate_shared_component(self):
        rng = np.random.default_rng(11)
        from bdew.edw import edw_sample_one

        for _ in range(200):
            u1, u2, u3 = rng.random(3)
            pt = sample_pair(UNIT, u1, u2, u3)
            v3 = edw_sample_one(UNIT.component(3), u3)
            assert pt.x1 >= v3 and pt.x2 >= v3

    def test_diagonal_mass(self):
        rng = np.random.default_rng(5)
        n = 100_000
        ties = 0
        for _ in range(n):
            u1, u2, u3 = rng.random(3)
            pt = sample_pair(UNIT, u1, u2, u3)
            ties += pt.x1 == pt.x2
        expected = sum(joint_pmf(UNIT, (x, x)) for x in range(60))
        se = math.sqrt(expected * (1.0 - expected) / n)
        assert ties > 0
        assert abs(ties / n - expected) < 4.0 * se
