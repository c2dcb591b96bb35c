import math

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import channels
from envloc import (
    ChannelKind,
    CpfScenario,
    DomainError,
    PhaseInsensitiveChannel,
    error_bounds,
    fid_additive,
    fid_additive_choi,
    fid_choi,
    fid_classical,
    fid_thermal,
    fid_thermal_choi,
)


def loss_pair(tau, eps_b, eps_t):
    return (
        PhaseInsensitiveChannel.from_thermal(tau, eps_b),
        PhaseInsensitiveChannel.from_thermal(tau, eps_t),
    )


class TestFidThermal:
    def test_equal_noise_is_unity(self):
        assert fid_thermal(0.3, 1.7, 1.7, 2.0) == pytest.approx(1.0, abs=1e-12)

    def test_hand_evaluated_point(self):
        # tau=1/2, both environments at vacuum, vacuum probe: alpha = beta = 4
        assert fid_thermal(0.5, 0.5, 0.5, 0.5) == pytest.approx(1.0, abs=1e-12)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            fid_thermal(1.0, 1.0, 2.0, 1.0)
        with pytest.raises(DomainError):
            fid_thermal(0.5, 0.4, 2.0, 1.0)
        with pytest.raises(DomainError):
            fid_thermal(0.5, 1.0, 2.0, 0.4)

    def test_reduces_to_classical_at_vacuum_probe(self):
        # identity alpha(a=1/2) = 2 gamma, beta(a=1/2) = 2 delta
        for tau in (0.1, 0.5, 0.9, 1.5, 2.0):
            for eps_t in (0.5, 0.7, 1.5, 5.0):
                for eps_b in (0.5, 1.1, 4.0):
                    bg, tg = loss_pair(tau, eps_b, eps_t)
                    assert fid_thermal(tau, eps_t, eps_b, 0.5) == pytest.approx(
                        fid_classical(bg, tg), abs=1e-12
                    )


class TestFidThermalChoi:
    def test_equal_noise_is_unity(self):
        assert fid_thermal_choi(0.9, 0.9) == 1.0
        assert fid_thermal_choi(0.5, 0.5) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("tau", [0.3, 0.99, 2.0])
    def test_large_squeezing_limit(self, tau):
        for eps_t, eps_b in ((0.6, 1.4), (1.0, 3.0), (5.0, 0.7)):
            assert fid_thermal(tau, eps_t, eps_b, 1e6) == pytest.approx(
                fid_thermal_choi(eps_t, eps_b), abs=1e-4
            )

    def test_monotone_in_difference_and_mean(self):
        # forward differences: decreasing in the noise gap, increasing in the mean
        avs = np.linspace(1.0, 8.0, 50)
        difs = np.linspace(0.0, 0.9, 50)
        h = 1e-5
        for av in avs:
            for dif in difs:
                if av - (dif + h) / 2.0 < 0.5 + 1e-6:
                    continue

                def f(av_, dif_):
                    return fid_thermal_choi(av_ + dif_ / 2.0, av_ - dif_ / 2.0)

                assert (f(av, dif + h) - f(av, dif)) / h <= 1e-10
                assert (f(av + h, dif) - f(av, dif)) / h >= -1e-10


class TestFidAdditive:
    def test_equal_noise_is_unity(self):
        assert fid_additive(0.2, 0.2, 3.0) == 1.0

    def test_zero_noise_requires_equality(self):
        assert fid_additive(0.0, 0.0, 1.0) == 1.0
        with pytest.raises(DomainError):
            fid_additive(0.0, 0.1, 1.0)

    def test_large_squeezing_limit(self):
        assert fid_additive(0.01, 0.03, 1e8) == pytest.approx(
            math.sqrt(3.0) / 2.0, abs=1e-6
        )


class TestFidAdditiveChoi:
    def test_reference_point(self):
        # 2 sqrt(3e-4) / 0.04 = sqrt(3)/2
        assert fid_additive_choi(0.01, 0.03) == pytest.approx(math.sqrt(3.0) / 2.0, rel=1e-12)

    def test_vanishing_noise_ratio_limit(self):
        # nu_t -> 0 drives the ratio to 2 and the fidelity to 0
        assert fid_additive_choi(1e-14, 0.03) == pytest.approx(0.0, abs=1e-6)

    def test_depends_only_on_ratio(self):
        for c in (0.1, 10.0):
            assert abs(
                fid_additive_choi(0.01, 0.03) - fid_additive_choi(0.01 * c, 0.03 * c)
            ) <= 1e-12

    def test_scale_free_form_cross_check(self):
        for nu_t, nu_b in ((0.5, 0.1), (2.0, 3.0), (1e-3, 5.0)):
            r = abs(nu_t - nu_b) / ((nu_t + nu_b) / 2.0)
            assert fid_additive_choi(nu_t, nu_b) == pytest.approx(
                math.sqrt(1.0 - r * r / 4.0), abs=1e-12
            )


class TestFidClassical:
    def test_additive_reference_point(self):
        bg = PhaseInsensitiveChannel.additive(0.03)
        tg = PhaseInsensitiveChannel.additive(0.01)
        expected = 1.0 / (math.sqrt(1.01 * 1.03) - math.sqrt(0.01 * 0.03))
        assert fid_classical(bg, tg) == pytest.approx(expected, rel=1e-12)
        assert fid_classical(bg, tg) == pytest.approx(0.99738, abs=5e-6)

    def test_equal_noise_is_unity(self):
        bg, tg = loss_pair(0.6, 1.3, 1.3)
        assert fid_classical(bg, tg) == pytest.approx(1.0, abs=1e-12)

    def test_mismatched_pairs_rejected(self):
        with pytest.raises(DomainError):
            fid_classical(
                PhaseInsensitiveChannel.loss(0.5, 0.5),
                PhaseInsensitiveChannel.loss(0.6, 0.5),
            )
        with pytest.raises(DomainError):
            fid_classical(
                PhaseInsensitiveChannel.additive(0.5),
                PhaseInsensitiveChannel.amplifier(2.0, 1.0),
            )

    def test_additive_matches_vacuum_probe_form(self):
        for nu_t, nu_b in ((0.01, 0.03), (0.5, 2.0), (1.0, 0.2)):
            bg = PhaseInsensitiveChannel.additive(nu_b)
            tg = PhaseInsensitiveChannel.additive(nu_t)
            assert fid_classical(bg, tg) == pytest.approx(
                fid_additive(nu_t, nu_b, 0.5), abs=1e-12
            )


@settings(max_examples=300, deadline=None)
@given(channels())
def test_fidelities_symmetric_under_noise_swap(bg):
    # build a partner of the same kind and transmissivity, different noise
    tg = PhaseInsensitiveChannel(bg.kind, bg.tau, bg.nu + 0.37)
    assert abs(fid_classical(bg, tg) - fid_classical(tg, bg)) <= 1e-12
    assert abs(fid_choi(bg, tg) - fid_choi(tg, bg)) <= 1e-12
    if bg.kind is not ChannelKind.ADDITIVE:
        a = 1.7
        assert abs(
            fid_thermal(bg.tau, tg.eps, bg.eps, a) - fid_thermal(bg.tau, bg.eps, tg.eps, a)
        ) <= 1e-12


class TestCpfScenario:
    def test_uniform_prior_default(self):
        bg, tg = loss_pair(0.5, 1.0, 2.0)
        scen = CpfScenario(4, 10, bg, tg)
        assert scen.effective_prior == (0.25,) * 4

    def test_prior_validation(self):
        bg, tg = loss_pair(0.5, 1.0, 2.0)
        with pytest.raises(DomainError):
            CpfScenario(3, 1, bg, tg, prior=(0.5, 0.5))
        with pytest.raises(DomainError):
            CpfScenario(2, 1, bg, tg, prior=(0.7, 0.4))
        with pytest.raises(DomainError):
            CpfScenario(2, 1, bg, tg, prior=(-0.1, 1.1))

    def test_pair_validation(self):
        with pytest.raises(DomainError):
            CpfScenario(
                2, 1,
                PhaseInsensitiveChannel.loss(0.5, 1.0),
                PhaseInsensitiveChannel.loss(0.4, 1.0),
            )
        with pytest.raises(DomainError):
            CpfScenario(1, 1, *loss_pair(0.5, 1.0, 2.0))

    def test_degenerate_flag(self):
        bg, tg = loss_pair(0.5, 1.0, 1.0)
        assert CpfScenario(2, 1, bg, tg).degenerate
        bg, tg = loss_pair(0.5, 1.0, 1.5)
        assert not CpfScenario(2, 1, bg, tg).degenerate


class TestErrorBounds:
    def test_zero_probes_random_guess(self):
        for m in (2, 5, 100):
            scen = CpfScenario(m, 0, *loss_pair(0.5, 1.0, 2.0))
            b = error_bounds(scen)
            assert b.quantum_lower == pytest.approx((m - 1) / (2 * m), rel=1e-12)
            assert b.quantum_upper == pytest.approx((m - 1) / m, rel=1e-12)
            assert b.classical_lower == pytest.approx((m - 1) / (2 * m), rel=1e-12)
            assert b.classical_upper == pytest.approx((m - 1) / m, rel=1e-12)

    def test_equal_noise_reduces_to_prior_terms(self):
        scen = CpfScenario(5, 7, *loss_pair(0.5, 1.0, 1.0))
        b = error_bounds(scen)
        assert b.quantum_lower == pytest.approx(4 / 10, rel=1e-12)
        assert b.quantum_upper == pytest.approx(4 / 5, rel=1e-12)

    def test_additive_crossing_values(self):
        # m=100, nu = (0.01, 0.03), M=20: the quantum upper bound sits below
        # the classical lower bound (~0.314 vs ~0.401)
        bg = PhaseInsensitiveChannel.additive(0.03)
        tg = PhaseInsensitiveChannel.additive(0.01)
        b = error_bounds(CpfScenario(100, 20, bg, tg))
        assert b.quantum_upper == pytest.approx(0.3145, abs=2e-3)
        assert b.classical_lower == pytest.approx(0.4012, abs=2e-3)
        assert b.quantum_upper <= b.classical_lower

    def test_log_domain_survives_huge_probe_counts(self):
        scen = CpfScenario(2, 10_000, *loss_pair(0.5, 1.0, 5.0))
        b = error_bounds(scen)
        assert b.quantum_lower == 0.0  # underflowed in linear scale
        assert math.isfinite(b.quantum_lower_db)
        assert b.quantum_lower_db < -3000.0

    def test_uniform_reduction_matches_general_prior_path(self):
        bg, tg = loss_pair(0.7, 0.8, 2.4)
        m, probes = 6, 13
        uniform = CpfScenario(m, probes, bg, tg)
        explicit = CpfScenario(m, probes, bg, tg, prior=(1.0 / m,) * m)
        bu, be = error_bounds(uniform), error_bounds(explicit)
        assert bu.quantum_lower == pytest.approx(be.quantum_lower, rel=1e-12)
        assert bu.quantum_upper == pytest.approx(be.quantum_upper, rel=1e-12)

    def test_general_prior_cap(self):
        bg, tg = loss_pair(0.7, 0.8, 2.4)
        scen = CpfScenario(3, 0, bg, tg, prior=(0.6, 0.3, 0.1))
        b = error_bounds(scen)
        assert b.quantum_upper == pytest.approx(0.4, rel=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(channels())
    def test_ordering_invariants(self, bg):
        tg = PhaseInsensitiveChannel(bg.kind, bg.tau, bg.nu + 0.4)
        for probes in (0, 1, 7, 200):
            b = error_bounds(CpfScenario(3, probes, bg, tg))
            assert b.quantum_lower <= b.quantum_upper
            assert b.classical_lower <= b.classical_upper
            assert 0.0 <= b.quantum_lower <= 1.0
            assert 0.0 <= b.classical_upper <= 1.0
