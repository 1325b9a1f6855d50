import math

import numpy as np
import pytest

from squeezelim import (
    CavityParams,
    SqueezeSettings,
    ThresholdError,
    decoherence_limit,
    full_opt_sensitivity,
    limit_injection,
    limit_output_amp_only,
    limit_q0,
    limit_q0_infsqz,
    limit_q0_nosqz,
    limit_report,
    limit_threshold,
    noise_sm,
    norm_constants,
    optimal_gain,
    optimal_sensitivity,
    q_threshold,
    qcrb,
    qcrb_direct,
    sensitivity_sm,
    sensitivity_sm_general,
    transfer_sq_sm,
)

BETA_15DB = 10 ** 1.5


def n0(params):
    return norm_constants(params).N0


class TestNoiseSm:
    def test_vacuum(self):
        p = CavityParams(T_c=0.01, eps_int=0.004, eps_read=0.2)
        assert noise_sm(p, SqueezeSettings(), 0.0) == pytest.approx(1.0, abs=1e-15)

    def test_reflected_squeezing(self):
        p = CavityParams(T_c=0.01)
        assert noise_sm(p, SqueezeSettings(beta=10.0), 0.0) == pytest.approx(
            0.1, rel=1e-12
        )

    def test_threshold_error(self):
        p = CavityParams(T_c=0.01, eps_int=0.001)
        with pytest.raises(ThresholdError):
            noise_sm(p, SqueezeSettings(q=q_threshold(p)), 0.0)

    def test_reduced_case_contract(self):
        p = CavityParams(T_c=0.01, eps_inj=0.1)
        with pytest.raises(ValueError):
            noise_sm(p, SqueezeSettings(), 0.0)
        with pytest.raises(ValueError):
            noise_sm(CavityParams(T_c=0.01), SqueezeSettings(zeta=2.0), 0.0)


class TestTransferSm:
    def test_lossless_peak(self):
        p = CavityParams(T_c=0.01)
        expected = (
            8 * math.pi * p.P_c / (1.054571817e-34 * p.wavelength * 299792458.0)
        ) * 4 / 0.01
        assert transfer_sq_sm(p, SqueezeSettings(), 0.0) == pytest.approx(
            expected, rel=1e-12
        )

    def test_lorentzian_half_width(self):
        p = CavityParams(T_c=0.01, tau=1e-8)
        # 16 omega^2 tau^2 = T_c^2  ->  half the peak transfer
        omega = p.T_c / (4 * p.tau)
        peak = transfer_sq_sm(p, SqueezeSettings(), 0.0)
        assert transfer_sq_sm(p, SqueezeSettings(), omega) == pytest.approx(
            peak / 2, rel=1e-12
        )

    def test_threshold_approach_finite(self):
        p = CavityParams(T_c=0.01, eps_int=0.001, eps_read=0.05)
        q = q_threshold(p) * (1 - 1e-9)
        got = transfer_sq_sm(p, SqueezeSettings(q=q), 0.0)
        expected = (
            8 * math.pi * p.P_c / (1.054571817e-34 * p.wavelength * 299792458.0)
        ) * 4 * p.T_c * (1 - p.eps_read) / (2 * p.T_c + 2 * p.eps_int) ** 2
        assert got == pytest.approx(expected, rel=1e-6)


class TestSensitivitySm:
    def test_shot_noise_limited(self):
        p = CavityParams(T_c=0.01)
        assert sensitivity_sm(p, SqueezeSettings(), 0.0) == pytest.approx(
            n0(p) * p.T_c / 4, rel=1e-12
        )

    def test_threshold_is_error_not_value(self):
        p = CavityParams(T_c=0.01)
        with pytest.raises(ThresholdError):
            sensitivity_sm(p, SqueezeSettings(q=0.01), 0.0)

    def test_optimal_point_frozen(self):
        p = CavityParams(T_c=0.01, eps_int=0.001, eps_read=0.1)
        _, q_opt, _ = optimal_sensitivity(p, BETA_15DB)
        got = sensitivity_sm(p, SqueezeSettings(q=q_opt, beta=BETA_15DB), 0.0)
        assert got == pytest.approx(n0(p) * 1.2461673188431316e-3, rel=1e-12)

    def test_general_reduces_to_plain(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            p = CavityParams(
                T_c=rng.uniform(0.005, 0.05),
                eps_int=rng.uniform(0, 0.01),
                eps_read=rng.uniform(0, 0.3),
            )
            st = SqueezeSettings(
                q=rng.uniform(-0.9, 0.9) * q_threshold(p), beta=rng.uniform(1, 40)
            )
            omega = rng.uniform(0, 1e6)
            assert sensitivity_sm_general(p, st, omega) == pytest.approx(
                sensitivity_sm(p, st, omega), rel=1e-13
            )

    def test_evenness(self):
        p = CavityParams(T_c=0.01, eps_int=0.001, eps_read=0.1)
        st = SqueezeSettings(q=0.004, beta=3.0)
        assert sensitivity_sm(p, st, 2.5e5) == sensitivity_sm(p, st, -2.5e5)


class TestQcrb:
    def test_zero_at_threshold_gain(self):
        p = CavityParams(T_c=0.01)
        assert qcrb(p, SqueezeSettings(q=0.01)) == 0.0

    def test_zero_at_infinite_squeezing(self):
        p = CavityParams(T_c=0.01)
        assert qcrb(p, SqueezeSettings(beta=1e300)) == pytest.approx(0.0, abs=1e-340)

    def test_value(self):
        p = CavityParams(T_c=0.01)
        assert qcrb(p, SqueezeSettings()) == pytest.approx(n0(p) * 0.01, rel=1e-12)

    def test_documented_factor_four(self):
        p = CavityParams(T_c=0.01)
        for st in (SqueezeSettings(), SqueezeSettings(q=0.003, beta=7.0)):
            assert qcrb(p, st) == pytest.approx(4 * qcrb_direct(p, st), rel=1e-14)
        # direct lossless evaluation through the spectral formulas
        direct = sensitivity_sm(p, SqueezeSettings(q=0.003, beta=7.0), 0.0)
        assert direct == pytest.approx(
            qcrb_direct(p, SqueezeSettings(q=0.003, beta=7.0)), rel=1e-12
        )


class TestLimitQ0:
    def test_no_external_squeezing(self):
        p = CavityParams(T_c=0.01, eps_int=0.001, eps_read=0.1)
        expected = n0(p) / 0.9 * (0.01 * 0.1 / 4 + 0.001 / 2 + 0.001 ** 2 / 0.04)
        assert limit_q0(p, 1.0) == pytest.approx(expected, rel=1e-12)
        assert limit_q0_nosqz(p) == pytest.approx(expected, rel=1e-12)
        assert limit_q0(p, 1.0) == pytest.approx(
            n0(p) * 8.6111111111111111e-4, rel=1e-12
        )

    def test_infinite_external_squeezing(self):
        p = CavityParams(T_c=0.01, eps_int=0.001, eps_read=0.1)
        expected = n0(p) / 0.9 * (
            0.01 * 0.1 / 4 + (2 - 0.1) * 0.001 / 2 + 0.1 * 0.001 ** 2 / 0.04
        )
        assert limit_q0(p, 1e9) == pytest.approx(expected, rel=1e-6)
        assert limit_q0_infsqz(p) == pytest.approx(expected, rel=1e-12)

    def test_lossless_reference_vanishes(self):
        # the loss-induced reference excludes the squeezed shot-noise floor
        p = CavityParams(T_c=0.01)
        for beta in (1.0, 4.0, 100.0):
            assert limit_q0(p, beta) == pytest.approx(0.0, abs=1e-60)

    def test_equals_total_minus_shot_floor(self):
        p = CavityParams(T_c=0.01, eps_int=0.002, eps_read=0.2)
        for beta in (1.0, 3.5, 31.6):
            total = sensitivity_sm(p, SqueezeSettings(beta=beta), 0.0)
            floor = n0(p) * p.T_c / (4 * beta)
            assert limit_q0(p, beta) == pytest.approx(total - floor, rel=1e-10)


class TestLimitThreshold:
    def test_frozen_value(self):
        p = CavityParams(T_c=0.01, eps_int=0.001, eps_read=0.1)
        assert limit_threshold(p) == pytest.approx(n0(p) * 2.25e-3, rel=1e-12)

    def test_factor_of_four(self):
        p = CavityParams(T_c=0.01, eps_int=1e-9, eps_read=0.1)
        assert limit_threshold(p) / limit_q0_nosqz(p) == pytest.approx(4.0, rel=1e-4)

    def test_lossless_zero(self):
        assert limit_threshold(CavityParams(T_c=0.01)) == 0.0


class TestOptimalSensitivity:
    def test_frozen_example(self):
        p = CavityParams(T_c=0.01, eps_int=0.001, eps_read=0.1)
        s_opt, q_opt, clamped = optimal_sensitivity(p, BETA_15DB)
        assert s_opt == pytest.approx(n0(p) * 1.2461673188431316e-3, rel=1e-12)
        assert q_opt == pytest.approx(-6.5689882608236313e-3, rel=1e-12)
        assert not clamped

    def test_beta_one(self):
        p = CavityParams(T_c=0.01, eps_int=0.001, eps_read=0.1)
        s_opt, q_opt, _ = optimal_sensitivity(p, 1.0)
        assert s_opt == pytest.approx(n0(p) * (0.01 * 0.1 + 0.001), rel=1e-12)
        expected_q = q_threshold(p) - 2 * (0.01 * 0.1 + 0.001)
        assert q_opt == pytest.approx(expected_q, rel=1e-12)

    def test_infinite_squeezing_floor(self):
        p = CavityParams(T_c=0.01, eps_int=0.001, eps_read=0.1)
        s_opt, q_opt, clamped = optimal_sensitivity(p, 1e9)
        assert s_opt == pytest.approx(n0(p) * 0.001, rel=1e-5)
        assert q_opt == pytest.approx(-q_threshold(p), rel=1e-5)
        assert clamped  # analytic optimum sits inside the boundary guard

    def test_lossless_clamps_to_threshold(self):
        p = CavityParams(T_c=0.01)
        _, q_opt, clamped = optimal_sensitivity(p, 1.0)
        assert clamped
        assert q_opt == pytest.approx(q_threshold(p), rel=1e-5)

    def test_global_minimum_property(self):
        rng = np.random.default_rng(23)
        for _ in range(25):
            p = CavityParams(
                T_c=rng.uniform(0.005, 0.05),
                eps_int=rng.uniform(1e-5, 0.01),
                eps_read=rng.uniform(0.001, 0.4),
            )
            beta = rng.uniform(1.0, 100.0)
            s_opt, q_opt, clamped = optimal_sensitivity(p, beta)
            if clamped:
                continue
            q_th = q_threshold(p)
            qs = np.linspace(-q_th * (1 - 1e-6), q_th * (1 - 1e-6), 801)
            vals = np.array(
                [sensitivity_sm(p, SqueezeSettings(q=float(q), beta=beta), 0.0) for q in qs]
            )
            assert s_opt <= vals.min() * (1 + 1e-12)
            assert sensitivity_sm(
                p, SqueezeSettings(q=q_opt, beta=beta), 0.0
            ) == pytest.approx(s_opt, rel=1e-12)

    def test_monotonicity(self):
        base = dict(T_c=0.01, eps_int=0.001, eps_read=0.1)
        s0, _, _ = optimal_sensitivity(CavityParams(**base), 10.0)
        s_int, _, _ = optimal_sensitivity(
            CavityParams(T_c=0.01, eps_int=0.002, eps_read=0.1), 10.0
        )
        s_read, _, _ = optimal_sensitivity(
            CavityParams(T_c=0.01, eps_int=0.001, eps_read=0.2), 10.0
        )
        s_beta, _, _ = optimal_sensitivity(CavityParams(**base), 20.0)
        assert s_int >= s0 and s_read >= s0 and s_beta <= s0

    def test_ordering_and_floor(self):
        rng = np.random.default_rng(29)
        for _ in range(40):
            p = CavityParams(
                T_c=rng.uniform(0.005, 0.05),
                eps_int=rng.uniform(0.0, 0.01),
                eps_read=rng.uniform(0.0, 0.4),
            )
            beta = rng.uniform(1.0, 100.0)
            s_opt, _, _ = optimal_sensitivity(p, beta)
            assert s_opt <= limit_threshold(p) * (1 + 1e-12) or limit_threshold(p) == 0
            # total optimum never beats the total q=0 sensitivity it optimizes
            assert s_opt <= sensitivity_sm(p, SqueezeSettings(beta=beta), 0.0) * (
                1 + 1e-12
            )
            assert s_opt >= decoherence_limit(p) * (1 - 1e-12)


class TestFullOptSensitivity:
    def test_reduction_to_optimal(self):
        rng = np.random.default_rng(31)
        for _ in range(40):
            p = CavityParams(
                T_c=rng.uniform(0.005, 0.05),
                eps_int=rng.uniform(0, 0.01),
                eps_read=rng.uniform(0.001, 0.4),
            )
            beta = rng.uniform(1.0, 100.0)
            s_opt, _, _ = optimal_sensitivity(p, beta)
            assert full_opt_sensitivity(p, beta, 1.0, 0.0) == pytest.approx(
                s_opt, rel=1e-12
            )

    def test_injection_loss_limit(self):
        p = CavityParams(T_c=0.01, eps_int=0.001, eps_read=0.1, eps_inj=0.05)
        expected = n0(p) * (
            0.01 * 0.1 * 0.05 / (0.1 + 0.05 * 0.9) + 0.001
        )
        assert full_opt_sensitivity(p, 1e9, 1.0, 0.0) == pytest.approx(expected, rel=1e-5)
        assert limit_injection(p, 1.0) == pytest.approx(expected, rel=1e-12)

    def test_output_amplification_compensates_readout(self):
        p = CavityParams(T_c=0.01, eps_int=0.001, eps_read=0.1, eps_inj=0.05)
        assert full_opt_sensitivity(p, 10.0, 1e9, 0.0) == pytest.approx(
            n0(p) * 0.001, rel=1e-5
        )

    def test_matches_numeric_minimum_general(self):
        # the closed form equals the exact minimum of the extended
        # single-mode sensitivity at Omega = 0
        from squeezelim import numeric_optimal_gain

        rng = np.random.default_rng(37)
        for _ in range(10):
            p = CavityParams(
                T_c=0.01,
                eps_int=rng.uniform(0, 0.005),
                eps_read=rng.uniform(0.01, 0.3),
                eps_inj=rng.uniform(0.0, 0.2),
            )
            beta = rng.uniform(1.0, 50.0)
            zeta = rng.uniform(1.0, 20.0)
            res = numeric_optimal_gain(p, beta, zeta, 0.0, model="single_mode")
            assert res.S_star == pytest.approx(
                full_opt_sensitivity(p, beta, zeta, 0.0), rel=1e-9
            )

    def test_frequency_dependence(self):
        p = CavityParams(T_c=0.01, eps_int=0.001, eps_read=0.1, eps_inj=0.02, tau=1e-8)
        s0 = full_opt_sensitivity(p, 10.0, 2.0, 0.0)
        s1 = full_opt_sensitivity(p, 10.0, 2.0, 5e5)
        assert s1 > s0
        grid = np.array([0.0, 1e5, 3e5])
        vals = full_opt_sensitivity(p, 10.0, 2.0, grid)
        assert vals.shape == (3,)
        assert np.all(np.diff(vals) > 0)


class TestOutputAmpOnly:
    def test_no_injection_loss_floor(self):
        p = CavityParams(T_c=0.01, eps_int=0.001)
        assert limit_output_amp_only(p) == pytest.approx(n0(p) * 0.001, rel=1e-14)
        assert limit_injection(p, 1.0) == pytest.approx(n0(p) * 0.001, rel=1e-14)

    def test_frozen_value(self):
        p = CavityParams(T_c=0.01, eps_int=0.001, eps_inj=0.05)
        assert limit_output_amp_only(p) == pytest.approx(
            n0(p) * 1.10125e-3, rel=1e-12
        )

    def test_eps_int_equals_tc(self):
        p = CavityParams(T_c=0.01, eps_int=0.01, eps_inj=0.3)
        assert limit_output_amp_only(p) == pytest.approx(n0(p) * 0.01, rel=1e-14)


class TestLimitReport:
    def test_report_consistency(self):
        p = CavityParams(T_c=0.01, eps_int=0.001, eps_read=0.1)
        rep = limit_report(p, SqueezeSettings(beta=BETA_15DB))
        assert rep.optimal <= rep.at_threshold
        assert rep.qcrb_direct_ratio == 4.0
        assert rep.qcrb == pytest.approx(4 * rep.qcrb_direct, rel=1e-14)
        assert rep.decoherence_limit == pytest.approx(n0(p) * 0.001, rel=1e-14)
        assert rep.zeta_inf_limit == rep.decoherence_limit
        assert rep.full_opt0 == pytest.approx(rep.optimal, rel=1e-12)
        assert 0.0 < rep.amplification_crossover_eps_read < 1.0

    def test_crossover_location(self):
        # optimal gain changes sign at the reported readout loss
        p = CavityParams(T_c=0.01, eps_int=0.001)
        rep = limit_report(p, SqueezeSettings(beta=BETA_15DB))
        e_star = rep.amplification_crossover_eps_read
        from dataclasses import replace

        assert optimal_gain(replace(p, eps_read=e_star), BETA_15DB) == pytest.approx(
            0.0, abs=1e-12
        )
        assert optimal_gain(replace(p, eps_read=e_star * 0.9), BETA_15DB) > 0
        assert optimal_gain(replace(p, eps_read=e_star * 1.1), BETA_15DB) < 0
