import math

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import channels, physical_cms, williamson_pair
from envloc import (
    ChannelKind,
    DomainError,
    PhaseInsensitiveChannel,
    TwoModeCovariance,
    apply_channel,
    discard_mode,
    fid_additive,
    fid_thermal,
    gaussian_fidelity,
    symplectic_eigenvalues,
    tmsv_cm,
    two_mode_squeeze,
    vacuum_cm,
)

Z = np.diag([1.0, -1.0])


class TestChannelType:
    def test_loss_bounds(self):
        PhaseInsensitiveChannel.loss(0.5, 0.25)
        with pytest.raises(DomainError):
            PhaseInsensitiveChannel.loss(1.2, 0.5)
        with pytest.raises(DomainError):
            PhaseInsensitiveChannel.loss(0.5, 0.2)  # below (1-tau)/2

    def test_amplifier_bounds(self):
        PhaseInsensitiveChannel.amplifier(2.0, 0.5)
        with pytest.raises(DomainError):
            PhaseInsensitiveChannel.amplifier(0.9, 1.0)
        with pytest.raises(DomainError):
            PhaseInsensitiveChannel.amplifier(2.0, 0.4)

    def test_additive_bounds(self):
        PhaseInsensitiveChannel.additive(0.0)
        with pytest.raises(DomainError):
            PhaseInsensitiveChannel(ChannelKind.ADDITIVE, 0.9, 0.1)
        with pytest.raises(DomainError):
            PhaseInsensitiveChannel.additive(-0.1)

    def test_eps_and_nbar(self):
        ch = PhaseInsensitiveChannel.loss(0.5, 0.5)
        assert ch.eps == pytest.approx(1.0)
        assert ch.nbar == pytest.approx(0.5)
        with pytest.raises(DomainError):
            PhaseInsensitiveChannel.additive(0.3).eps

    def test_from_thermal_roundtrip(self):
        ch = PhaseInsensitiveChannel.from_thermal(0.7, 2.5)
        assert ch.kind is ChannelKind.LOSS
        assert ch.eps == pytest.approx(2.5, rel=1e-14)
        amp = PhaseInsensitiveChannel.from_thermal(1.8, 0.9)
        assert amp.kind is ChannelKind.AMPLIFIER
        assert amp.eps == pytest.approx(0.9, rel=1e-14)


class TestTmsv:
    def test_vacuum_limit(self):
        np.testing.assert_allclose(tmsv_cm(0.5).entries, 0.5 * np.eye(4), atol=0)

    def test_unit_variance_blocks(self):
        v = tmsv_cm(1.0)
        np.testing.assert_allclose(v.block(0, 0), np.eye(2), atol=0)
        np.testing.assert_allclose(v.block(0, 1), math.sqrt(3.0) / 2.0 * Z, atol=1e-15)

    def test_purity_at_high_squeezing(self):
        hi, lo = symplectic_eigenvalues(tmsv_cm(10.0))
        assert abs(hi - 0.5) < 1e-9
        assert abs(lo - 0.5) < 1e-9

    def test_below_vacuum_rejected(self):
        with pytest.raises(DomainError):
            tmsv_cm(0.49)


class TestApplyChannel:
    def test_matches_output_form(self):
        # blocks a I, sqrt(tau (a^2 - 1/4)) Z, (a tau + nu) I
        a, tau, nu = 1.0, 0.5, 0.75
        v = apply_channel(tmsv_cm(a), PhaseInsensitiveChannel.loss(tau, nu))
        np.testing.assert_allclose(v.block(0, 0), a * np.eye(2), atol=1e-15)
        np.testing.assert_allclose(
            v.block(0, 1), math.sqrt(tau * (a * a - 0.25)) * Z, atol=1e-15
        )
        np.testing.assert_allclose(v.block(1, 1), (a * tau + nu) * np.eye(2), atol=1e-15)

    def test_identity_channel(self):
        v = tmsv_cm(2.0)
        out = apply_channel(v, PhaseInsensitiveChannel.additive(0.0))
        np.testing.assert_allclose(out.entries, v.entries, atol=0)

    def test_full_replacement_by_vacuum(self):
        out = apply_channel(tmsv_cm(3.0), PhaseInsensitiveChannel.loss(0.0, 0.5))
        np.testing.assert_allclose(out.block(1, 1), 0.5 * np.eye(2), atol=1e-15)
        np.testing.assert_allclose(out.block(0, 1), np.zeros((2, 2)), atol=1e-15)

    @settings(max_examples=1000, deadline=None)
    @given(physical_cms(), channels())
    def test_preserves_physicality(self, v, ch):
        out = apply_channel(v, ch)  # construction validates physicality
        assert symplectic_eigenvalues(out)[1] >= 0.5 - 1e-9


class TestTwoModeSqueeze:
    def test_zero_squeezing_is_identity(self):
        v = tmsv_cm(1.3)
        np.testing.assert_allclose(two_mode_squeeze(v, 0.0).entries, v.entries, atol=0)

    def test_vacuum_to_tmsv(self):
        # r = (1/2) ln(2a + sqrt(4 a^2 - 1)) maps vacuum to the squeezed pair
        for a in (0.5, 1.0, 3.7, 20.0):
            r = 0.5 * math.log(2.0 * a + math.sqrt(4.0 * a * a - 1.0))
            out = two_mode_squeeze(vacuum_cm(), r)
            np.testing.assert_allclose(out.entries, tmsv_cm(a).entries, atol=1e-9)

    def test_determinant_preserved(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            g = rng.normal(size=(4, 4))
            v = TwoModeCovariance(0.5 * np.eye(4) + 0.4 * (g @ g.T))
            r = rng.uniform(-1.5, 1.5)
            out = two_mode_squeeze(v, r)
            assert np.linalg.det(out.entries) == pytest.approx(
                np.linalg.det(v.entries), rel=1e-10
            )

    @settings(max_examples=200, deadline=None)
    @given(physical_cms())
    def test_preserves_symplectic_spectrum(self, v):
        before = symplectic_eigenvalues(v)
        after = symplectic_eigenvalues(two_mode_squeeze(v, 0.8))
        assert after[0] == pytest.approx(before[0], rel=1e-9, abs=1e-9)
        assert after[1] == pytest.approx(before[1], rel=1e-9, abs=1e-9)


class TestDiscardMode:
    def test_tmsv_blocks(self):
        a = 1.7
        np.testing.assert_allclose(discard_mode(tmsv_cm(a), 0), a * np.eye(2), atol=0)
        np.testing.assert_allclose(discard_mode(vacuum_cm(), 1), 0.5 * np.eye(2), atol=0)

    def test_bad_index(self):
        with pytest.raises(DomainError):
            discard_mode(vacuum_cm(), 2)


class TestSymplecticEigenvalues:
    def test_vacuum_and_pure(self):
        assert symplectic_eigenvalues(vacuum_cm()) == pytest.approx((0.5, 0.5))
        assert symplectic_eigenvalues(tmsv_cm(4.0)) == pytest.approx((0.5, 0.5), abs=1e-9)

    def test_channel_output_against_invariant_oracle(self):
        v = apply_channel(tmsv_cm(1.0), PhaseInsensitiveChannel.loss(0.5, 0.75))
        got = symplectic_eigenvalues(v)
        want = williamson_pair(v.entries)
        assert got == pytest.approx(want, rel=1e-10)

    @settings(max_examples=200, deadline=None)
    @given(physical_cms())
    def test_matches_invariant_oracle(self, v):
        # the invariant formula loses half the digits when the spectrum is
        # degenerate (sqrt of a cancelling discriminant), hence the sqrt(eps)
        # tolerance
        got = symplectic_eigenvalues(v)
        want = williamson_pair(v.entries)
        assert got[0] == pytest.approx(want[0], rel=1e-7, abs=1e-7)
        assert got[1] == pytest.approx(want[1], rel=1e-7, abs=1e-7)


class TestCovarianceValidation:
    def test_asymmetric_rejected(self):
        m = 0.5 * np.eye(4)
        m[0, 1] = 1e-3
        with pytest.raises(DomainError):
            TwoModeCovariance(m)

    def test_unphysical_rejected(self):
        with pytest.raises(DomainError):
            TwoModeCovariance(0.4 * np.eye(4))

    def test_wrong_shape_rejected(self):
        with pytest.raises(DomainError):
            TwoModeCovariance(np.eye(3))


class TestGaussianFidelity:
    @settings(max_examples=200, deadline=None)
    @given(physical_cms())
    def test_self_fidelity(self, v):
        assert gaussian_fidelity(v, v) == pytest.approx(1.0, abs=1e-9)

    @settings(max_examples=200, deadline=None)
    @given(physical_cms(), physical_cms())
    def test_symmetric_and_bounded(self, v1, v2):
        f12 = gaussian_fidelity(v1, v2)
        f21 = gaussian_fidelity(v2, v1)
        assert 0.0 <= f12 <= 1.0
        assert abs(f12 - f21) <= 1e-12

    @settings(max_examples=200, deadline=None)
    @given(physical_cms(), physical_cms())
    def test_unity_only_for_equal_states(self, v1, v2):
        if np.max(np.abs(v1.entries - v2.entries)) > 1e-3:
            assert gaussian_fidelity(v1, v2) < 1.0

    def test_closed_form_oracle(self):
        # the loss-channel closed form is an independent route to the same number
        ch1 = PhaseInsensitiveChannel.loss(0.5, 0.25)
        ch2 = PhaseInsensitiveChannel.loss(0.5, 0.75)
        v1 = apply_channel(tmsv_cm(1.0), ch1)
        v2 = apply_channel(tmsv_cm(1.0), ch2)
        assert gaussian_fidelity(v1, v2) == pytest.approx(
            fid_thermal(0.5, 0.5, 1.5, 1.0), abs=1e-9
        )

    def test_vacuum_overlap_decreases_with_squeezing(self):
        vals = [gaussian_fidelity(vacuum_cm(), tmsv_cm(a)) for a in (1.0, 2.0, 4.0, 8.0)]
        assert all(b < a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("tau", [0.1, 0.5, 0.9, 1.5, 2.0])
@pytest.mark.parametrize("a", [0.5, 1.0, 5.0, 50.0])
def test_thermal_grid_agrees_with_cm_route(tau, a):
    for eps_t in (0.5, 0.7, 1.5, 5.0):
        for eps_b in (0.5, 1.1, 4.0):
            ch_t = PhaseInsensitiveChannel.from_thermal(tau, eps_t)
            ch_b = PhaseInsensitiveChannel.from_thermal(tau, eps_b)
            cm = gaussian_fidelity(apply_channel(tmsv_cm(a), ch_t), apply_channel(tmsv_cm(a), ch_b))
            closed = fid_thermal(tau, eps_t, eps_b, a)
            assert cm == pytest.approx(closed, abs=1e-9)


@pytest.mark.parametrize("a", [0.5, 1.0, 5.0, 50.0])
def test_additive_grid_agrees_with_cm_route(a):
    for nu_t in (0.01, 0.03, 0.5, 2.0):
        for nu_b in (0.01, 0.2, 1.0):
            cm = gaussian_fidelity(
                apply_channel(tmsv_cm(a), PhaseInsensitiveChannel.additive(nu_t)),
                apply_channel(tmsv_cm(a), PhaseInsensitiveChannel.additive(nu_b)),
            )
            assert cm == pytest.approx(fid_additive(nu_t, nu_b, a), abs=1e-9)
