import math

import numpy as np
import pytest

from compasscoh import (Coloring, FamilySpec, build_code, closed_form_threshold,
                        diamond_avg, kappa, logical_channel, power,
                        repetition_distribution, repetition_exact,
                        repetition_stirling, syndrome_distribution,
                        x_shor_channel, z_shor_channel, z_stacked_channel)
from compasscoh.families import (x_shor_distribution, z_shor_distribution,
                                 z_stacked_distribution)

THETAS = [k * 0.05 * math.pi for k in range(1, 10)]  # 0.05pi .. 0.45pi


def assert_channels_close(a, b, atol=1e-10):
    assert abs(a.epsilon - b.epsilon) <= atol, (a, b)
    assert abs(a.delta - b.delta) <= atol, (a, b)


class TestRepetitionExact:
    def test_l1_is_single_qubit(self):
        for theta in [0.0, 0.3 * math.pi, 0.9 * math.pi, -0.4 * math.pi]:
            ch = repetition_exact(1, theta)
            assert ch.epsilon == pytest.approx(1 - math.cos(theta), abs=1e-14)
            assert ch.delta == pytest.approx(math.sin(theta), abs=1e-14)

    @pytest.mark.parametrize("l", [3, 5, 7])
    @pytest.mark.parametrize("theta", THETAS)
    def test_matches_enumeration(self, l, theta):
        exact = logical_channel(build_code(Coloring(1, l, ())), theta)
        assert_channels_close(repetition_exact(l, theta), exact)

    @pytest.mark.parametrize("l", [3, 5])
    @pytest.mark.parametrize("theta", [0.3 * math.pi, 0.6 * math.pi])
    def test_ml_matches_enumeration(self, l, theta):
        exact = logical_channel(build_code(Coloring(1, l, ())), theta, "ml")
        assert_channels_close(repetition_exact(l, theta, "ml"), exact)

    def test_even_l_rejected(self):
        with pytest.raises(ValueError):
            repetition_exact(4, 0.1)

    def test_large_l_ratio_tracks_sin_squared(self):
        theta = 0.45 * math.pi
        e41 = repetition_exact(41, theta).epsilon
        e43 = repetition_exact(43, theta).epsilon
        assert e43 / e41 == pytest.approx(math.sin(theta) ** 2, rel=0.1)

    def test_log_domain_reaches_l_1001(self):
        ch = repetition_exact(1001, 0.3 * math.pi)
        assert 0 < ch.epsilon < 1e-50
        assert 0 < ch.delta < 1e-50
        assert math.isfinite(kappa(ch))

    def test_periodicity_and_parity(self):
        for l in [3, 7]:
            a = repetition_exact(l, 0.22 * math.pi)
            b = repetition_exact(l, 0.22 * math.pi + 2 * math.pi)
            assert_channels_close(a, b, atol=1e-12)
            c = repetition_exact(l, -0.22 * math.pi)
            assert c.epsilon == pytest.approx(a.epsilon, abs=1e-14)
            assert c.delta == pytest.approx(-a.delta, abs=1e-14)

    def test_distribution_sums_to_channel(self):
        l, theta = 7, 0.31 * math.pi
        dist = repetition_distribution(l, theta)
        assert float(np.sum(dist.p)) == pytest.approx(1.0, abs=1e-12)
        ch = repetition_exact(l, theta)
        eps = float(np.sum(dist.p * (1 - np.cos(dist.theta_s))))
        delta = float(np.sum(dist.p * np.sin(dist.theta_s)))
        assert eps == pytest.approx(ch.epsilon, abs=1e-12)
        assert delta == pytest.approx(ch.delta, abs=1e-12)


class TestKappaApproximation:
    def test_l5_within_band(self):
        """kappa ~ (cos/sin)^2 * eps holds up to the O(1/l) band at l=5."""
        theta = 0.3 * math.pi
        ch = repetition_exact(5, theta)
        approx = (math.cos(theta) / math.sin(theta)) ** 2 * ch.epsilon
        assert 1.0 <= kappa(ch) / approx <= 2.5

    def test_ratio_converges_to_one(self):
        theta = 0.3 * math.pi
        ratios = []
        for l in (5, 21, 81, 201):
            ch = repetition_exact(l, theta)
            approx = (math.cos(theta) / math.sin(theta)) ** 2 * ch.epsilon
            ratios.append(kappa(ch) / approx)
        assert all(b < a for a, b in zip(ratios, ratios[1:]))
        assert ratios[-1] == pytest.approx(1.0, abs=0.05)


class TestStirling:
    def test_within_ten_percent_at_l51(self):
        theta = 0.3 * math.pi
        approx = repetition_stirling(51, theta)
        exact = repetition_exact(51, theta)
        assert approx.epsilon == pytest.approx(exact.epsilon, rel=0.1)
        assert approx.delta == pytest.approx(exact.delta, rel=0.1)

    def test_error_shrinks_with_l(self):
        theta = 0.3 * math.pi
        errs = []
        for l in [11, 21, 41, 81]:
            approx = repetition_stirling(l, theta)
            exact = repetition_exact(l, theta)
            errs.append(abs(approx.epsilon - exact.epsilon) / exact.epsilon)
        assert all(b < a for a, b in zip(errs, errs[1:])), errs

    def test_vanishes_at_small_theta(self):
        assert repetition_stirling(11, 1e-6).epsilon < 1e-60

    def test_gated_outside_validity(self):
        with pytest.raises(ValueError):
            repetition_stirling(11, 0.5 * math.pi)
        with pytest.raises(ValueError):
            repetition_stirling(11, -0.6 * math.pi)


class TestZShor:
    def test_dx1_is_repetition(self):
        for theta in THETAS:
            assert_channels_close(z_shor_channel(1, 5, theta),
                                  repetition_exact(5, theta), atol=1e-15)

    @pytest.mark.parametrize("dims", [(3, 3), (3, 5)])
    @pytest.mark.parametrize("theta", THETAS)
    def test_matches_enumeration(self, dims, theta):
        from compasscoh import family_z_shor
        d_x, d_z = dims
        exact = logical_channel(build_code(family_z_shor(d_x, d_z)), theta)
        assert_channels_close(z_shor_channel(d_x, d_z, theta), exact)

    def test_kappa_zipping_identity(self):
        for d_x, d_z, theta in [(3, 3, 0.04 * math.pi), (5, 7, 0.02 * math.pi)]:
            k_z = kappa(z_shor_channel(d_x, d_z, theta))
            k_rep = kappa(repetition_exact(d_z, d_x * theta))
            assert k_z == k_rep  # identical by construction

    def test_ml_vs_minweight_split_at_zipped_pi_over_2(self):
        # zipped angle 3*theta crosses pi/2 at theta = pi/6
        below, above = 0.15 * math.pi, 0.2 * math.pi
        assert_channels_close(z_shor_channel(3, 5, below, "ml"),
                              z_shor_channel(3, 5, below, "minweight"), atol=1e-14)
        ml = z_shor_channel(3, 5, above, "ml")
        mw = z_shor_channel(3, 5, above, "minweight")
        assert ml.epsilon < mw.epsilon


class TestXShor:
    def test_dx1_is_repetition(self):
        assert_channels_close(x_shor_channel(1, 7, 0.3 * math.pi),
                              repetition_exact(7, 0.3 * math.pi), atol=1e-15)

    @pytest.mark.parametrize("dims", [(3, 3), (3, 5)])
    @pytest.mark.parametrize("theta", THETAS)
    def test_matches_enumeration(self, dims, theta):
        from compasscoh import family_x_shor
        d_x, d_z = dims
        exact = logical_channel(build_code(family_x_shor(d_x, d_z)), theta)
        assert_channels_close(x_shor_channel(d_x, d_z, theta), exact)

    def test_power_identity_cross_module(self):
        theta = 0.2 * math.pi
        per_row = repetition_exact(3, theta)
        from compasscoh import family_x_shor
        exact = logical_channel(build_code(family_x_shor(3, 3)), theta)
        assert_channels_close(power(per_row, 3), exact)

    def test_kappa_scales_linearly_in_dx(self):
        theta = 0.2 * math.pi
        k_col = kappa(repetition_exact(21, theta))
        k_x = kappa(x_shor_channel(21, 21, theta))
        assert k_x == pytest.approx(21 * k_col, rel=0.05)


class TestZStacked:
    def test_h1_is_square_x_shor(self):
        for theta in [0.1 * math.pi, 0.3 * math.pi]:
            assert_channels_close(z_stacked_channel(5, 1, theta),
                                  x_shor_channel(5, 5, theta), atol=1e-15)

    @pytest.mark.parametrize("theta", THETAS)
    def test_matches_enumeration_3_2(self, theta):
        from compasscoh import family_z_stacked
        exact = logical_channel(build_code(family_z_stacked(3, 2)), theta)
        assert_channels_close(z_stacked_channel(3, 2, theta), exact)

    @pytest.mark.parametrize("l,h", [(5, 2), (5, 3), (5, 4)])
    def test_matches_enumeration_25_qubits(self, l, h):
        """Covers leftover single rows: t_h = l mod h is 1, 2 and 1 here."""
        from compasscoh import family_z_stacked
        code = build_code(family_z_stacked(l, h))
        for top in (0.1, 0.3):
            exact = logical_channel(code, top * math.pi)
            assert_channels_close(z_stacked_channel(l, h, top * math.pi), exact)

    def test_kappa_low_noise_scaling(self):
        l, h, theta = 21, 3, 0.08 * math.pi
        k = kappa(z_stacked_channel(l, h, theta))
        k_block = kappa(repetition_exact(l, h * theta))
        assert k == pytest.approx((l / h) * k_block, rel=0.05)

    def test_invalid_h(self):
        with pytest.raises(ValueError):
            z_stacked_channel(5, 0, 0.1)
        with pytest.raises(ValueError):
            z_stacked_channel(5, 7, 0.1)


class TestThresholds:
    def test_closed_forms(self):
        assert closed_form_threshold(
            FamilySpec("repetition", l=11)).theta_th == math.pi / 2
        assert closed_form_threshold(
            FamilySpec("zshor", d_x=3, d_z=3)).theta_th == pytest.approx(math.pi / 6)
        assert closed_form_threshold(
            FamilySpec("xshor", d_x=9, d_z=9)).theta_th == math.pi / 2
        assert closed_form_threshold(
            FamilySpec("zstacked", l=9, h=2)).theta_th == pytest.approx(math.pi / 4)
        assert closed_form_threshold(
            FamilySpec("zstacked", l=9, h=3)).theta_th == pytest.approx(math.pi / 6)

    def test_family_spec_validation(self):
        with pytest.raises(ValueError):
            FamilySpec("repetition", l=4)
        with pytest.raises(ValueError):
            FamilySpec("zstacked", l=5, h=9)
        with pytest.raises(ValueError):
            FamilySpec("donut", l=5)

    def test_suppression_below_threshold(self):
        """ln(eps) decreasing, asymptotically linear, below threshold."""
        for build, theta in [
            (lambda l: repetition_exact(l, 0.45 * math.pi), None),
            (lambda l: z_shor_channel(3, l, 0.15 * math.pi), None),
            (lambda l: x_shor_channel(3, l, 0.45 * math.pi), None),
        ]:
            ls = list(range(11, 102, 10))
            logs = [math.log(build(l).epsilon) for l in ls]
            assert all(b < a for a, b in zip(logs, logs[1:]))
            slopes = [(b - a) / 10 for a, b in zip(logs, logs[1:])]
            assert slopes[-1] < 0
            assert slopes[-1] == pytest.approx(slopes[-2], rel=0.2)

    def test_growth_above_threshold(self):
        es = [repetition_exact(l, 0.55 * math.pi).epsilon for l in range(21, 62, 10)]
        assert all(b >= a for a, b in zip(es, es[1:]))


class TestProductDistributions:
    def test_x_shor_diamond_matches_enumeration(self):
        from compasscoh import family_x_shor
        theta = 0.22 * math.pi
        code = build_code(family_x_shor(3, 3))
        exact = diamond_avg(syndrome_distribution(code, theta))
        analytic = diamond_avg(x_shor_distribution(3, 3, theta))
        assert analytic == pytest.approx(exact, abs=1e-10)

    def test_z_stacked_diamond_matches_enumeration(self):
        from compasscoh import family_z_stacked
        theta = 0.17 * math.pi
        code = build_code(family_z_stacked(3, 2))
        exact = diamond_avg(syndrome_distribution(code, theta))
        analytic = diamond_avg(z_stacked_distribution(3, 2, theta))
        assert analytic == pytest.approx(exact, abs=1e-10)

    def test_z_shor_diamond_matches_enumeration(self):
        from compasscoh import family_z_shor
        theta = 0.11 * math.pi
        code = build_code(family_z_shor(3, 5))
        exact = diamond_avg(syndrome_distribution(code, theta))
        analytic = diamond_avg(z_shor_distribution(3, 5, theta))
        assert analytic == pytest.approx(exact, abs=1e-10)

    def test_repetition_diamond_matches_enumeration(self):
        theta = 0.2 * math.pi
        code = build_code(Coloring(1, 3, ()))
        exact = diamond_avg(syndrome_distribution(code, theta))
        analytic = diamond_avg(repetition_distribution(3, theta))
        assert analytic == pytest.approx(exact, abs=1e-12)

    def test_too_large_convolution_raises(self):
        with pytest.raises(ValueError):
            x_shor_distribution(21, 21, 0.2 * math.pi)
