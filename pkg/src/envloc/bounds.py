"""Closed-form output fidelities and fidelity-based discrimination bounds.

The discrimination problem: one of ``positions`` channels has a different
induced noise (the target); all share the same transmissivity.  Each
channel is probed ``probes`` times.  Bounds on the optimal error
probability follow from the pairwise fidelity F between the two possible
single-probe output states:

    lower  = sum_{i>j} p_i p_j F^(4M)
    upper  = min(1 - max_i p_i,  2 sum_{i>j} sqrt(p_i p_j) F^(2M))

With a uniform prior these reduce to (m-1)/(2m) F^(4M) and
(m-1) min(1/m, F^(2M)).  Quantum bounds use the infinite-squeezing
(Choi-limit) fidelity; classical bounds use the vacuum-probe fidelity.
Powers are taken in the log domain so that probes up to ~1e4 do not
underflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError
from .gaussian import ChannelKind, PhaseInsensitiveChannel

_EPS = 2.220446049250313e-16

#: Linear probabilities with log10 below this are reported as 0.0.
_LOG10_FLOOR = -300.0


def _guarded_sqrt_pair(big: float, small: float) -> tuple[float, float]:
    """sqrt(big + small), sqrt(big - small) with the difference snapped to
    zero when it cancels below rounding scale."""
    diff = big - small
    if diff < 32.0 * _EPS * (abs(big) + abs(small)):
        diff = 0.0
    return math.sqrt(big + small), math.sqrt(diff)


def fid_thermal(tau: float, eps_t: float, eps_b: float, a: float) -> float:
    """Output fidelity of two thermal loss or amplifier channels probed by
    half a two-mode squeezed vacuum of variance ``a``.

    Returns sqrt(2) (sqrt(alpha+beta) + sqrt(alpha-beta)) / beta, where
    alpha and beta collect the channel and probe parameters.
    """
    if tau < 0.0 or tau == 1.0:
        raise DomainError(f"thermal fidelity requires tau >= 0 and tau != 1, got {tau}")
    if eps_t < 0.5 or eps_b < 0.5:
        raise DomainError(f"environment variances must be >= 1/2, got ({eps_t}, {eps_b})")
    if a < 0.5:
        raise DomainError(f"probe variance must be >= 1/2, got {a}")
    at = abs(1.0 - tau)
    alpha = (
        4.0 * eps_t * eps_b
        + 4.0 * a * a * (4.0 * eps_t * eps_b + 1.0)
        + (4.0 * a * a - 1.0) * math.sqrt((4.0 * eps_t**2 - 1.0) * (4.0 * eps_b**2 - 1.0))
    ) * at * at + 8.0 * a * (eps_t + eps_b) * tau * at + (1.0 + tau) ** 2
    beta = 4.0 * (tau + 2.0 * a * (eps_t + eps_b) * at)
    s_plus, s_minus = _guarded_sqrt_pair(alpha, beta)
    return min(1.0, math.sqrt(2.0) * (s_plus + s_minus) / beta)


def fid_thermal_choi(eps_t: float, eps_b: float) -> float:
    """Infinite-squeezing limit of ``fid_thermal``; independent of tau."""
    if eps_t < 0.5 or eps_b < 0.5:
        raise DomainError(f"environment variances must be >= 1/2, got ({eps_t}, {eps_b})")
    if eps_t == eps_b:
        return 1.0
    num = math.sqrt(
        4.0 * eps_t * eps_b + 1.0 + math.sqrt((4.0 * eps_t**2 - 1.0) * (4.0 * eps_b**2 - 1.0))
    )
    return min(1.0, num / (math.sqrt(2.0) * (eps_t + eps_b)))


def fid_additive(nu_t: float, nu_b: float, a: float) -> float:
    """Output fidelity of two additive-noise channels probed by half a
    two-mode squeezed vacuum of variance ``a``."""
    if nu_t == nu_b:
        return 1.0
    if nu_t <= 0.0 or nu_b <= 0.0:
        raise DomainError(f"additive noises must be positive, got ({nu_t}, {nu_b})")
    if a < 0.5:
        raise DomainError(f"probe variance must be >= 1/2, got {a}")
    num = 2.0 * a * math.sqrt(nu_t * nu_b) + math.sqrt((2.0 * a * nu_t + 1.0) * (2.0 * a * nu_b + 1.0))
    return min(1.0, num / (2.0 * a * (nu_t + nu_b) + 1.0))


def fid_additive_choi(nu_t: float, nu_b: float) -> float:
    """Infinite-squeezing limit for additive-noise channels.

    Equals 2 sqrt(nu_t nu_b) / (nu_t + nu_b), which depends only on the
    ratio r of the noise difference to the noise mean: sqrt(1 - r^2/4).
    Both forms are evaluated and cross-checked.
    """
    if nu_t == nu_b:
        return 1.0
    if nu_t <= 0.0 or nu_b <= 0.0:
        raise DomainError(f"additive noises must be positive, got ({nu_t}, {nu_b})")
    direct = 2.0 * math.sqrt(nu_t * nu_b) / (nu_t + nu_b)
    # ratio form sqrt(1 - r^2/4), factored as (1 - r/2)(1 + r/2) so the
    # difference does not cancel as r -> 2
    nu_av = (nu_t + nu_b) / 2.0
    ratio = abs(nu_t - nu_b) / nu_av
    via_ratio = math.sqrt((1.0 - ratio / 2.0) * (1.0 + ratio / 2.0))
    if abs(direct - via_ratio) > 1e-12:
        raise DomainError(
            f"inconsistent additive fidelity forms: {direct} vs {via_ratio}"
        )
    return min(1.0, direct)


def _check_pair(background: PhaseInsensitiveChannel, target: PhaseInsensitiveChannel) -> None:
    if background.kind is not target.kind:
        raise DomainError(
            f"channel kinds differ: {background.kind.value} vs {target.kind.value}"
        )
    if background.tau != target.tau:
        raise DomainError(f"transmissivities differ: {background.tau} vs {target.tau}")


def fid_classical(background: PhaseInsensitiveChannel, target: PhaseInsensitiveChannel) -> float:
    """Minimum output fidelity over classical (coherent-state) probing.

    The optimum is achieved by vacuum probes, i.e. the squeezed-probe
    fidelity at a = 1/2.  Loss/amplifier channels use the reduced form
    (sqrt(gamma+delta) + sqrt(gamma-delta)) / delta; additive channels use
    1 / (sqrt((nu_t+1)(nu_b+1)) - sqrt(nu_t nu_b)).
    """
    _check_pair(background, target)
    if background.kind is ChannelKind.ADDITIVE:
        nu_t, nu_b = target.nu, background.nu
        if nu_t == nu_b:
            return 1.0
        if nu_t <= 0.0 or nu_b <= 0.0:
            raise DomainError(f"additive noises must be positive, got ({nu_t}, {nu_b})")
        return min(1.0, 1.0 / (math.sqrt((nu_t + 1.0) * (nu_b + 1.0)) - math.sqrt(nu_t * nu_b)))
    tau = background.tau
    eps_t, eps_b = target.eps, background.eps
    at = abs(1.0 - tau)
    gamma = 4.0 * eps_t * eps_b * at * at + 2.0 * (eps_t + eps_b) * tau * at + (1.0 + tau * tau)
    delta = 2.0 * (tau + (eps_t + eps_b) * at)
    s_plus, s_minus = _guarded_sqrt_pair(gamma, delta)
    return min(1.0, (s_plus + s_minus) / delta)


def fid_choi(background: PhaseInsensitiveChannel, target: PhaseInsensitiveChannel) -> float:
    """Infinite-squeezing output fidelity for a valid channel pair."""
    _check_pair(background, target)
    if background.kind is ChannelKind.ADDITIVE:
        if background.nu == target.nu:
            return 1.0
        return fid_additive_choi(target.nu, background.nu)
    return fid_thermal_choi(target.eps, background.eps)


@dataclass(frozen=True)
class CpfScenario:
    """One instance of the channel-position-finding problem.

    ``positions`` channels, of which one (the target) differs from the
    ``positions - 1`` identical background channels only in its induced
    noise; every channel is probed ``probes`` times.  The prior over
    target positions defaults to uniform.
    """

    positions: int
    probes: int
    background: PhaseInsensitiveChannel
    target: PhaseInsensitiveChannel
    prior: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.positions, int) or self.positions < 2:
            raise DomainError(f"positions must be an integer >= 2, got {self.positions}")
        if not isinstance(self.probes, int) or self.probes < 0:
            raise DomainError(f"probes must be an integer >= 0, got {self.probes}")
        _check_pair(self.background, self.target)
        if self.prior is not None:
            p = tuple(float(x) for x in self.prior)
            if len(p) != self.positions:
                raise DomainError(
                    f"prior length {len(p)} does not match positions {self.positions}"
                )
            if any(x < 0.0 for x in p):
                raise DomainError("prior entries must be non-negative")
            if abs(math.fsum(p) - 1.0) > 1e-12:
                raise DomainError(f"prior must sum to 1, got {math.fsum(p)}")
            object.__setattr__(self, "prior", p)

    @property
    def effective_prior(self) -> tuple[float, ...]:
        if self.prior is not None:
            return self.prior
        return (1.0 / self.positions,) * self.positions

    @property
    def degenerate(self) -> bool:
        """True when target and background noises coincide."""
        return self.background.nu == self.target.nu

    def with_probes(self, probes: int) -> "CpfScenario":
        return CpfScenario(self.positions, probes, self.background, self.target, self.prior)


def _db(log10_p: float) -> float:
    """10 log10(p) from a log10 probability."""
    return 10.0 * log10_p


def _linear(log10_p: float) -> float:
    return 10.0**log10_p if log10_p > _LOG10_FLOOR else 0.0


@dataclass(frozen=True)
class ErrorBoundSet:
    """Error-probability bounds for one scenario, linear and in decibels.

    Underflowed linear probabilities are 0.0 while the dB fields retain
    the exact log-domain value.
    """

    quantum_lower: float
    quantum_upper: float
    classical_lower: float
    classical_upper: float
    quantum_lower_db: float
    quantum_upper_db: float
    classical_lower_db: float
    classical_upper_db: float

    def __post_init__(self) -> None:
        pairs = (
            (self.quantum_lower, self.quantum_upper),
            (self.classical_lower, self.classical_upper),
        )
        for low, high in pairs:
            if not (0.0 <= low <= 1.0 and 0.0 <= high <= 1.0):
                raise DomainError(f"bounds must lie in [0, 1], got ({low}, {high})")
            if low > high * (1.0 + 1e-12) + 1e-300:
                raise DomainError(f"lower bound {low} exceeds upper bound {high}")


def error_bounds(scen: CpfScenario) -> ErrorBoundSet:
    """Quantum and classical error bounds for ``scen``.

    The quantum pair uses the Choi-limit fidelity, the classical pair the
    vacuum-probe fidelity; both are capped by the best guess from the
    prior alone (error 1 - max_i p_i, i.e. (m-1)/m when uniform).
    """
    prior = scen.effective_prior
    m = scen.positions
    probes = scen.probes

    sum_pp = math.fsum(prior[i] * prior[j] for i in range(m) for j in range(i))
    sum_sqrt = math.fsum(
        math.sqrt(prior[i] * prior[j]) for i in range(m) for j in range(i)
    )
    guess_err = 1.0 - max(prior)

    f_q = fid_choi(scen.background, scen.target)
    f_c = fid_classical(scen.background, scen.target)

    def bound_pair(fid: float) -> tuple[float, float, float, float]:
        log10_f = math.log10(fid) if fid > 0.0 else -math.inf
        lo_pow = 4.0 * probes * log10_f if probes > 0 else 0.0
        up_pow = 2.0 * probes * log10_f if probes > 0 else 0.0
        lo_log = math.log10(sum_pp) + lo_pow if sum_pp > 0 else -math.inf
        pgm_log = math.log10(2.0 * sum_sqrt) + up_pow if sum_sqrt > 0 else -math.inf
        guess_log = math.log10(guess_err) if guess_err > 0.0 else -math.inf
        up_log = min(pgm_log, guess_log)
        return _linear(lo_log), _linear(up_log), _db(lo_log), _db(up_log)

    q_lo, q_up, q_lo_db, q_up_db = bound_pair(f_q)
    c_lo, c_up, c_lo_db, c_up_db = bound_pair(f_c)
    return ErrorBoundSet(q_lo, q_up, c_lo, c_up, q_lo_db, q_up_db, c_lo_db, c_up_db)
