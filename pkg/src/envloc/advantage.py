"""Quantum-advantage tests, minimal probe counts, and noise-plane scans.

A provable quantum advantage requires the classical lower bound to exceed
the quantum upper bound at some probe count, which happens for large
enough M exactly when (F_classical)^2 > F_choi.  The smallest such M
follows from 2 M ln((F_class)^2 / F_choi) >= ln(2 m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import CpfScenario, error_bounds, fid_choi, fid_classical
from .errors import DomainError
from .gaussian import PhaseInsensitiveChannel

INFEASIBLE, NO_ADVANTAGE, ADVANTAGE = -1, 0, 1


@dataclass(frozen=True)
class AdvantageReport:
    """Outcome of the advantage analysis for one channel pair.

    ``fidelity_m_star`` is the smallest probe count at which the quantum
    upper bound drops to the classical lower bound (None when the
    condition fails); ``mle_m_star`` is the smallest probe count at which
    the counting-receiver error beats the classical lower bound, when it
    was searched for.
    """

    condition_holds: bool
    fidelity_m_star: int | None
    mle_m_star: int | None = None

    def __post_init__(self) -> None:
        if not self.condition_holds and self.fidelity_m_star is not None:
            raise DomainError("fidelity_m_star requires the advantage condition to hold")


def advantage_condition(
    background: PhaseInsensitiveChannel, target: PhaseInsensitiveChannel
) -> bool:
    """Strict test (F_classical)^2 > F_choi, no tolerance."""
    return fid_classical(background, target) ** 2 > fid_choi(background, target)


def fidelity_advantage_probes(scen: CpfScenario) -> int | None:
    """Smallest probe count with quantum_upper <= classical_lower.

    Starts from the closed-form ceiling of ln(2m) / (2 ln(Fc^2/F)) and
    verifies against the bounds directly; on a tie-boundary disagreement
    the direct comparison wins.  Returns None when the advantage
    condition fails.
    """
    if not advantage_condition(scen.background, scen.target):
        return None
    f_c = fid_classical(scen.background, scen.target)
    f_q = fid_choi(scen.background, scen.target)
    m_guess = math.ceil(math.log(2 * scen.positions) / (2.0 * math.log(f_c * f_c / f_q)))
    m_guess = max(m_guess, 1)

    def holds(probes: int) -> bool:
        b = error_bounds(scen.with_probes(probes))
        return b.quantum_upper_db <= b.classical_lower_db

    m = m_guess
    while m > 1 and holds(m - 1):
        m -= 1
    while not holds(m):
        m += 1
    return m


def additive_advantage_threshold(nu_av: float) -> float | None:
    """Noise-difference threshold above which additive channels with mean
    noise ``nu_av`` admit a provable advantage.

    Returns None when the radicand is negative (mean noise below 1), in
    which case every positive noise difference qualifies.
    """
    if nu_av <= 0.0:
        raise DomainError(f"mean noise must be positive, got {nu_av}")
    radicand = (
        32.0 * nu_av**4
        - 8.0 * nu_av**2
        - 8.0 * nu_av
        - 1.0
        - (4.0 * nu_av + 1.0) * math.sqrt(8.0 * nu_av + 1.0)
    )
    if radicand < 0.0:
        return None
    return math.sqrt(radicand) / (2.0 * math.sqrt(2.0) * nu_av)


def advantage_region(
    tau: float, eps_dif_grid: np.ndarray, eps_av_grid: np.ndarray
) -> np.ndarray:
    """Advantage flags over a (noise difference, mean noise) grid.

    Entry [i, j] refers to (eps_dif_grid[i], eps_av_grid[j]) and is 1
    where the advantage condition holds, 0 where it fails, and -1 where
    the point is infeasible (the smaller environment variance would fall
    below 1/2, which requires eps_av >= (eps_dif + 1) / 2).
    """
    if tau == 1.0:
        raise DomainError("region scans are parametrized by environment variance; tau != 1")
    difs = np.asarray(eps_dif_grid, dtype=np.float64)
    avs = np.asarray(eps_av_grid, dtype=np.float64)
    mask = np.full((difs.size, avs.size), NO_ADVANTAGE, dtype=np.int8)
    for i, dif in enumerate(difs):
        for j, av in enumerate(avs):
            lo = av - dif / 2.0
            if dif < 0.0 or lo < 0.5:
                mask[i, j] = INFEASIBLE
                continue
            bg = PhaseInsensitiveChannel.from_thermal(tau, av + dif / 2.0)
            tg = PhaseInsensitiveChannel.from_thermal(tau, lo)
            mask[i, j] = ADVANTAGE if advantage_condition(bg, tg) else NO_ADVANTAGE
    return mask


def advantage_report(
    scen: CpfScenario, mle_probe_limit: int | None = None
) -> AdvantageReport:
    """Bundle the condition, the bound crossing, and (optionally) the
    counting-receiver crossing searched up to ``mle_probe_limit``."""
    holds = advantage_condition(scen.background, scen.target)
    m_fid = fidelity_advantage_probes(scen) if holds else None
    m_mle = None
    if mle_probe_limit is not None:
        from .mle import mle_advantage_probes

        m_mle = mle_advantage_probes(scen, mle_probe_limit)
    return AdvantageReport(holds, m_fid, m_mle)
