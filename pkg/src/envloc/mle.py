"""Exact error probability of the photon-counting + maximum-likelihood
receiver, the squeeze-and-count return-state pipeline, and scaling bounds.

The receiver counts the total photons returned by each channel over all
probes and picks the channel with the largest total when the target
environment is hotter than the background (smallest when colder), breaking
ties uniformly at random.  Per-channel totals are sums of independent
geometric (thermal) counts, so each total follows a negative-binomial law;
the success probability is a single sum over the target's total count,
with a binomial factor enumerating how many background channels tie.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln
from scipy.stats import nbinom

from .bounds import CpfScenario
from .errors import (
    DegenerateSpecError,
    DomainError,
    NumericalInstabilityError,
    UnsupportedProtocolError,
)
from .gaussian import (
    ChannelKind,
    PhaseInsensitiveChannel,
    apply_channel,
    discard_mode,
    two_mode_squeeze,
    vacuum_cm,
)

#: Stop the count sum once the target distribution holds all but this mass.
MASS_TOL = 1e-12
#: ... and the last consecutive per-count contributions stay below this.
TERM_TOL = 1e-15
_TERM_TOL_RUN = 10


class Ordering(enum.Enum):
    TARGET_HOTTER = "target_hotter"
    TARGET_COLDER = "target_colder"


@dataclass(frozen=True)
class MleSpec:
    """Inputs of one receiver-error evaluation.

    Mean photon numbers per probe for the target and background return
    states, the number of channel positions, and the probes per channel.
    The decision rule follows from the sign of the occupation difference.
    """

    nbar_target: float
    nbar_background: float
    positions: int
    probes: int

    def __post_init__(self) -> None:
        if self.nbar_target < 0.0 or self.nbar_background < 0.0:
            raise DomainError("mean photon numbers must be non-negative")
        if self.nbar_target == self.nbar_background:
            raise DegenerateSpecError(
                f"equal occupations {self.nbar_target}: the count rule cannot distinguish"
            )
        if not isinstance(self.positions, int) or self.positions < 2:
            raise DomainError(f"positions must be an integer >= 2, got {self.positions}")
        if not isinstance(self.probes, int) or self.probes < 1:
            raise DomainError(f"probes must be an integer >= 1, got {self.probes}")

    @property
    def ordering(self) -> Ordering:
        if self.nbar_target > self.nbar_background:
            return Ordering.TARGET_HOTTER
        return Ordering.TARGET_COLDER


def thermal_pmf(nbar: float, k: int | np.ndarray) -> float | np.ndarray:
    """P(k) = nbar^k / (nbar+1)^(k+1) for a thermal mode, via logs."""
    if nbar < 0.0:
        raise DomainError(f"mean photon number must be >= 0, got {nbar}")
    k_arr = np.asarray(k)
    if np.any(k_arr < 0):
        raise DomainError("photon counts must be non-negative")
    if nbar == 0.0:
        out = np.where(k_arr == 0, 1.0, 0.0)
        return float(out) if np.isscalar(k) else out
    logp = k_arr * math.log(nbar / (1.0 + nbar)) - math.log1p(nbar)
    out = np.exp(logp)
    return float(out) if np.isscalar(k) else out


def _sum_logpmf(nbar: float, probes: int, k: np.ndarray) -> np.ndarray:
    q_log = math.log(nbar / (1.0 + nbar))
    return (
        gammaln(k + probes)
        - gammaln(k + 1.0)
        - gammaln(probes)
        + k * q_log
        - probes * math.log1p(nbar)
    )


def thermal_sum_pmf(nbar: float, probes: int, k: int | np.ndarray) -> float | np.ndarray:
    """Probability that ``probes`` iid thermal modes of occupation ``nbar``
    hold ``k`` photons in total.

    C(k+M-1, k) (nbar/(1+nbar))^k (1/(1+nbar))^M with the binomial factor
    counting the ways the photons split across the modes; assembled with
    log-gamma so large counts and probe numbers do not overflow.
    """
    if nbar < 0.0:
        raise DomainError(f"mean photon number must be >= 0, got {nbar}")
    if probes < 1:
        raise DomainError(f"probes must be >= 1, got {probes}")
    k_arr = np.asarray(k, dtype=np.float64)
    if np.any(k_arr < 0):
        raise DomainError("photon counts must be non-negative")
    if nbar == 0.0:
        out = np.where(k_arr == 0, 1.0, 0.0)
        return float(out) if np.isscalar(k) else out
    out = np.exp(_sum_logpmf(nbar, probes, k_arr))
    return float(out) if np.isscalar(k) else out


def count_cdf_below(nbar: float, probes: int, n_c: int) -> float:
    """Probability that the total count over ``probes`` modes is < ``n_c``.

    The empty sum at n_c = 0 is 0; the complement identity
    P(count > n_c) = 1 - count_cdf_below(nbar, probes, n_c + 1) holds.
    """
    if n_c < 0:
        raise DomainError(f"count threshold must be >= 0, got {n_c}")
    if n_c == 0:
        return 0.0
    k = np.arange(n_c, dtype=np.float64)
    return float(min(1.0, math.fsum(np.atleast_1d(thermal_sum_pmf(nbar, probes, k)))))


@dataclass(frozen=True)
class MleEvaluation:
    """Receiver error with the bookkeeping of the truncated count sum."""

    error: float
    success: float
    truncation_bound: float
    count_window: tuple[int, int]


def _count_window(nbar: float, probes: int, mass_tol: float) -> tuple[int, int]:
    """Count range that carries all but ~mass_tol of the total-count law."""
    if nbar == 0.0:
        return 0, 0
    p = 1.0 / (1.0 + nbar)
    edge = mass_tol / 10.0
    lo = int(nbinom.ppf(edge, probes, p))
    hi = int(nbinom.ppf(1.0 - edge, probes, p))
    return max(lo - 32, 0), hi + 32


def mle_error_info(
    spec: MleSpec, mass_tol: float = MASS_TOL, term_tol: float = TERM_TOL
) -> MleEvaluation:
    """Error probability of the count-and-select rule, with detail.

    The success probability sums, over the target's total count n and the
    number c of channels sharing the extreme count, the chance that the
    remaining m - c background channels fall strictly on the losing side,
    times 1/c for the uniform tie-break:

        sum_c (1/c) C(m-1, c-1) sum_n W(n)^(m-c) P_T(n) P_B(n)^(c-1)

    where W is the background total-count cdf below n (hotter target) or
    the tail above n (colder target), with 0^0 = 1 understood.  The count
    sum is truncated once the target law's cumulative mass exceeds
    1 - ``mass_tol`` and the trailing per-count contributions stay under
    ``term_tol``; the neglected mass bounds the truncation error because
    the per-count contribution never exceeds the target pmf.
    """
    m, probes = spec.positions, spec.probes
    nb_t, nb_b = spec.nbar_target, spec.nbar_background
    hotter = spec.ordering is Ordering.TARGET_HOTTER

    lo, hi = _count_window(nb_t, probes, mass_tol)
    hi_b = _count_window(nb_b, probes, term_tol)[1]
    log_binom = gammaln(m) - gammaln(np.arange(1, m + 1)) - gammaln(np.arange(m, 0, -1))

    for _attempt in range(48):
        # background pmf over the full range [0, max(hi, hi_b)] so the
        # cumulative weights W are exact up to the far tail
        full = np.arange(0, max(hi, hi_b) + 1, dtype=np.float64)
        pmf_b_full = (
            np.where(full == 0, 1.0, 0.0)
            if nb_b == 0.0
            else np.exp(_sum_logpmf(nb_b, probes, full))
        )
        if hotter:
            w_full = np.concatenate(([0.0], np.cumsum(pmf_b_full)[:-1]))
        else:
            tail = np.cumsum(pmf_b_full[::-1])[::-1]
            w_full = np.concatenate((tail[1:], [0.0]))

        n = np.arange(lo, hi + 1, dtype=np.float64)
        pmf_t = (
            np.where(n == 0, 1.0, 0.0)
            if nb_t == 0.0
            else np.exp(_sum_logpmf(nb_t, probes, n))
        )
        pmf_b = pmf_b_full[lo : hi + 1]
        w = w_full[lo : hi + 1]

        terms = np.zeros_like(pmf_t)
        c_sums = []
        b_pow = np.ones_like(pmf_b)
        # exponents m-c for c = 1..m, built by repeated multiplication
        w_powers: list[np.ndarray] = [np.ones_like(w)]
        for _ in range(m - 1):
            w_powers.append(w_powers[-1] * w)
        for c in range(1, m + 1):
            contrib = (
                math.exp(log_binom[c - 1]) / c * w_powers[m - c] * pmf_t * b_pow
            )
            terms += contrib
            c_sums.append(float(np.sum(contrib)))
            if c < m:
                b_pow = b_pow * pmf_b
        success = math.fsum(c_sums)

        mass = float(np.sum(pmf_t))
        tail_mass = max(1.0 - mass, 0.0)
        run = terms[-_TERM_TOL_RUN:] if terms.size >= _TERM_TOL_RUN else terms
        # a zero-occupation target has finite support; no tail to watch
        if tail_mass <= mass_tol and (nb_t == 0.0 or bool(np.all(run < term_tol))):
            break
        lo = 0
        hi = 2 * hi + 64
    else:  # pragma: no cover - geometric tails always converge
        raise NumericalInstabilityError("count sum failed to converge")

    success = min(success, 1.0)
    return MleEvaluation(
        error=max(1.0 - success, 0.0),
        success=success,
        truncation_bound=tail_mass,
        count_window=(int(lo), int(hi)),
    )


def mle_error(spec: MleSpec, mass_tol: float = MASS_TOL, term_tol: float = TERM_TOL) -> float:
    """Error probability of the count-and-select receiver."""
    return mle_error_info(spec, mass_tol, term_tol).error


def _quantum_occupations(scen: CpfScenario) -> tuple[float, float]:
    if scen.background.kind is ChannelKind.ADDITIVE:
        raise UnsupportedProtocolError(
            "the squeeze-and-count receiver does not exist for additive noise"
        )
    return scen.target.eps - 0.5, scen.background.eps - 0.5


def mle_error_quantum(scen: CpfScenario, **tol) -> float:
    """Receiver error with entangled probing in the infinite-squeezing
    limit, where the return state is thermal with occupation eps - 1/2."""
    nb_t, nb_b = _quantum_occupations(scen)
    return mle_error(MleSpec(nb_t, nb_b, scen.positions, scen.probes), **tol)


def _classical_occupations(scen: CpfScenario) -> tuple[float, float]:
    if scen.background.kind is ChannelKind.ADDITIVE:
        # vacuum probes come back thermal with occupation nu
        return scen.target.nu, scen.background.nu
    at = abs(1.0 - scen.background.tau)
    return (scen.target.eps - 0.5) * at, (scen.background.eps - 0.5) * at


def mle_error_classical(scen: CpfScenario, **tol) -> float:
    """Receiver error with vacuum probing, where the return state is
    thermal with occupation nbar |1 - tau| (nu for additive noise)."""
    nb_t, nb_b = _classical_occupations(scen)
    return mle_error(MleSpec(nb_t, nb_b, scen.positions, scen.probes), **tol)


def mle_advantage_probes(scen: CpfScenario, probe_limit: int) -> int | None:
    """Smallest probe count at which the entangled receiver error drops
    below the classical lower bound; None if not reached by the limit or
    if the receiver does not exist for the channel class."""
    from .bounds import error_bounds

    if scen.background.kind is ChannelKind.ADDITIVE:
        return None
    if scen.degenerate:
        return None
    for probes in range(1, probe_limit + 1):
        s = scen.with_probes(probes)
        if mle_error_quantum(s) < error_bounds(s).classical_lower:
            return probes
    return None


@dataclass(frozen=True)
class ReturnStatePipeline:
    """Squeeze, probe, anti-squeeze, discard: the receiver's state prep.

    A two-mode squeezer of parameter ``r0`` acting on vacuum prepares the
    probe of variance ``a``; after the channel, a second squeezer of
    parameter ``r1`` concentrates the output into one thermal mode and the
    other mode is discarded (the idler for loss, the channel mode for
    amplification).
    """

    a: float
    channel: PhaseInsensitiveChannel

    def __post_init__(self) -> None:
        if self.a < 0.5:
            raise DomainError(f"probe variance must be >= 1/2, got {self.a}")
        if self.channel.kind is ChannelKind.ADDITIVE:
            raise UnsupportedProtocolError(
                "the anti-squeezing parameter diverges for additive noise"
            )

    @property
    def r0(self) -> float:
        """Squeezing that maps vacuum to the probe: (1/2) ln(2a + sqrt(4a^2 - 1))."""
        return 0.5 * math.log(2.0 * self.a + math.sqrt(4.0 * self.a * self.a - 1.0))

    @property
    def r1(self) -> float:
        """Anti-squeezing applied to the channel output:
        (1/2) ln(|1 - sqrt(tau)| / (1 + sqrt(tau)))."""
        st = math.sqrt(self.channel.tau)
        return 0.5 * math.log(abs(1.0 - st) / (1.0 + st))


def return_state_variance(a: float, channel: PhaseInsensitiveChannel) -> float:
    """Closed form of the retained mode's variance,
    (nu + 2 a tau - tau sqrt(4a^2 - 1)) / |1 - tau|."""
    if channel.kind is ChannelKind.ADDITIVE:
        raise UnsupportedProtocolError("no return state for additive noise")
    tau, nu = channel.tau, channel.nu
    return (nu + 2.0 * a * tau - tau * math.sqrt(4.0 * a * a - 1.0)) / abs(1.0 - tau)


def return_state_cm(p: ReturnStatePipeline) -> np.ndarray:
    """Run the symplectic pipeline and return the retained 2x2 block.

    Composes vacuum -> two_mode_squeeze(r0) -> channel -> two_mode_squeeze(r1)
    -> discard, and matches ``return_state_variance`` times the identity.
    """
    v = two_mode_squeeze(vacuum_cm(), p.r0)
    v = apply_channel(v, p.channel)
    v = two_mode_squeeze(v, p.r1)
    discard = 0 if p.channel.kind is ChannelKind.LOSS else 1
    return discard_mode(v, discard)


def mle_scaling_bounds(p_err_2: float, positions: int) -> tuple[float, float]:
    """Bounds on the m-channel receiver error from the two-channel error:
    exact 1 - (1 - p)^(m-1) and its first-order form (m-1) p."""
    if not 0.0 <= p_err_2 <= 1.0:
        raise DomainError(f"error probability must lie in [0, 1], got {p_err_2}")
    if positions < 2:
        raise DomainError(f"positions must be >= 2, got {positions}")
    exact = -math.expm1((positions - 1) * math.log1p(-p_err_2)) if p_err_2 < 1.0 else 1.0
    return exact, (positions - 1) * p_err_2
