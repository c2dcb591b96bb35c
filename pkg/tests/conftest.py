"""Shared generators for property tests."""

from __future__ import annotations

import math

import numpy as np
from hypothesis import strategies as st

from envloc import ChannelKind, PhaseInsensitiveChannel, TwoModeCovariance, two_mode_squeeze

_finite = dict(allow_nan=False, allow_infinity=False)


def channels(kind: ChannelKind | None = None) -> st.SearchStrategy[PhaseInsensitiveChannel]:
    """Valid channels; noise drawn above the class floor."""

    def build(kind: ChannelKind, tau: float, extra: float) -> PhaseInsensitiveChannel:
        if kind is ChannelKind.LOSS:
            return PhaseInsensitiveChannel.loss(tau, (1.0 - tau) / 2.0 + extra)
        if kind is ChannelKind.AMPLIFIER:
            return PhaseInsensitiveChannel.amplifier(tau, (tau - 1.0) / 2.0 + extra)
        return PhaseInsensitiveChannel.additive(extra)

    kinds = st.just(kind) if kind else st.sampled_from(list(ChannelKind))

    def with_tau(k: ChannelKind):
        if k is ChannelKind.LOSS:
            taus = st.floats(min_value=0.0, max_value=0.999, exclude_max=False, **_finite)
            extras = st.floats(min_value=0.0, max_value=5.0, **_finite)
        elif k is ChannelKind.AMPLIFIER:
            taus = st.floats(min_value=1.001, max_value=4.0, **_finite)
            extras = st.floats(min_value=0.0, max_value=5.0, **_finite)
        else:
            # zero additive noise is a valid channel but has no unequal-pair
            # fidelity; keep the strategy inside the fidelity domain
            taus = st.just(1.0)
            extras = st.floats(min_value=1e-6, max_value=5.0, **_finite)
        return st.tuples(st.just(k), taus, extras)

    return kinds.flatmap(with_tau).map(lambda t: build(*t))


def physical_cms() -> st.SearchStrategy[TwoModeCovariance]:
    """Physical covariance matrices: vacuum floor plus a random Gram term,
    optionally squeezed."""

    def build(seed: int, scale: float, r: float) -> TwoModeCovariance:
        rng = np.random.default_rng(seed)
        g = rng.normal(size=(4, 4))
        v = TwoModeCovariance(0.5 * np.eye(4) + scale * (g @ g.T))
        return two_mode_squeeze(v, r) if r else v

    return st.builds(
        build,
        st.integers(min_value=0, max_value=2**31),
        st.floats(min_value=0.0, max_value=1.5, **_finite),
        st.floats(min_value=-1.0, max_value=1.0, **_finite),
    )


def williamson_pair(v: np.ndarray) -> tuple[float, float]:
    """Symplectic eigenvalues from the two-mode invariants, an oracle
    independent of the eigensolver route:
    nu_pm^2 = (Delta +- sqrt(Delta^2 - 4 det V)) / 2 with
    Delta = det A + det B + 2 det C."""
    a = np.linalg.det(v[:2, :2])
    b = np.linalg.det(v[2:, 2:])
    c = np.linalg.det(v[:2, 2:])
    delta = a + b + 2.0 * c
    det_v = np.linalg.det(v)
    disc = math.sqrt(max(delta * delta - 4.0 * det_v, 0.0))
    hi = math.sqrt(max((delta + disc) / 2.0, 0.0))
    lo = math.sqrt(max((delta - disc) / 2.0, 0.0))
    return hi, lo
