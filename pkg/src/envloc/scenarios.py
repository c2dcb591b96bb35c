"""Physical scenario builders and error-probability curve generation.

Turns application parameters (blackbody pixels under microwave imaging,
lossy communication lines with excess noise, additive-noise frequency
channels) into channel-pair scenarios, and sweeps the probe count to
produce figure-ready curves.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

from scipy.integrate import quad

from .bounds import CpfScenario, error_bounds
from .errors import DegenerateScenarioWarning, DomainError
from .gaussian import ChannelKind, PhaseInsensitiveChannel
from .mle import mle_error_classical, mle_error_quantum


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants in SI units."""

    h: float
    k: float
    c_light: float


#: 2018 CODATA (exact) values.
CODATA2018 = PhysicalConstants(h=6.62607015e-34, k=1.380649e-23, c_light=299792458.0)

#: Relative tolerance of the spectral quadrature.
QUAD_RTOL = 1e-10


@dataclass(frozen=True)
class BlackbodyPixel:
    """Emitting pixel observed by a photon detector.

    ``area`` in m^2, ``solid_angle`` in steradian, ``pulse_duration`` in
    seconds, detection band [f_min, f_max] in Hz, temperature in kelvin.
    """

    area: float
    solid_angle: float
    pulse_duration: float
    f_min: float
    f_max: float
    temperature: float

    def __post_init__(self) -> None:
        for name in ("area", "solid_angle", "pulse_duration", "f_min", "f_max", "temperature"):
            if getattr(self, name) <= 0.0:
                raise DomainError(f"{name} must be positive")
        if self.f_min >= self.f_max:
            raise DomainError(f"empty band: f_min={self.f_min} >= f_max={self.f_max}")

    @classmethod
    def at_wavelength(
        cls,
        area: float,
        solid_angle: float,
        pulse_duration: float,
        wavelength: float,
        temperature: float,
        bandwidth: float | None = None,
        constants: PhysicalConstants = CODATA2018,
    ) -> "BlackbodyPixel":
        """Band of width ``bandwidth`` centered on the carrier c/wavelength.

        The default bandwidth is the transform limit of the pulse,
        1 / (4 * pulse_duration).
        """
        if bandwidth is None:
            bandwidth = 1.0 / (4.0 * pulse_duration)
        f0 = constants.c_light / wavelength
        return cls(area, solid_angle, pulse_duration, f0 - bandwidth / 2.0, f0 + bandwidth / 2.0, temperature)


def blackbody_induced_noise(
    pixel: BlackbodyPixel,
    constants: PhysicalConstants = CODATA2018,
    rtol: float = QUAD_RTOL,
) -> float:
    """Channel noise collected from a blackbody pixel, in shot-noise units.

    Integrates the emitted photon flux per unit bandwidth,
    2 f^2 / (c^2 (exp(h f / k T) - 1)), over the detection band and scales
    by area, solid angle, and pulse duration.
    """
    h, k, c = constants.h, constants.k, constants.c_light
    kt = k * pixel.temperature

    def integrand(f: float) -> float:
        x = h * f / kt
        if x > 700.0:  # exp would overflow; flux is zero to double precision
            return 0.0
        return 2.0 * f * f / (c * c * math.expm1(x))

    value, _ = quad(integrand, pixel.f_min, pixel.f_max, epsrel=rtol, epsabs=0.0)
    return pixel.area * pixel.solid_angle * pixel.pulse_duration * value


def _warn_if_degenerate(scen: CpfScenario) -> CpfScenario:
    if scen.degenerate:
        warnings.warn(
            "target and background noises coincide; bounds degenerate to guessing",
            DegenerateScenarioWarning,
            stacklevel=3,
        )
    return scen


def imaging_scenario(
    pixel: BlackbodyPixel,
    t_target: float,
    t_background: float,
    tau: float,
    positions: int,
    probes: int = 0,
    constants: PhysicalConstants = CODATA2018,
    quad_rtol: float = QUAD_RTOL,
) -> CpfScenario:
    """Locate the pixel at ``t_target`` among pixels at ``t_background``.

    Both pixels share the geometry of ``pixel`` (its own temperature field
    is ignored); each temperature sets the induced noise of a loss channel
    of transmissivity ``tau``.
    """
    if not tau < 1.0:
        raise DomainError(f"imaging channels are lossy; tau must be < 1, got {tau}")
    nu_t = blackbody_induced_noise(replace(pixel, temperature=t_target), constants, quad_rtol)
    nu_b = blackbody_induced_noise(replace(pixel, temperature=t_background), constants, quad_rtol)
    floor = (1.0 - tau) / 2.0
    if nu_t < floor or nu_b < floor:
        raise DomainError(
            f"induced noise below the loss-channel floor (1-tau)/2 = {floor}: "
            f"target {nu_t}, background {nu_b}"
        )
    return _warn_if_degenerate(
        CpfScenario(
            positions,
            probes,
            background=PhaseInsensitiveChannel.loss(tau, nu_b),
            target=PhaseInsensitiveChannel.loss(tau, nu_t),
        )
    )


def eavesdropper_scenario(
    tau: float, excess_background: float, excess_target: float, positions: int, probes: int = 0
) -> CpfScenario:
    """Locate the communication line with anomalous excess noise.

    Excess noise eps_x = (1 - tau) nbar / tau inverts to the environment
    occupation nbar = eps_x tau / (1 - tau); the channel noise is then
    (1 - tau)(nbar + 1/2).
    """
    if not 0.0 < tau < 1.0:
        raise DomainError(f"communication lines are lossy; need 0 < tau < 1, got {tau}")
    if excess_background < 0.0 or excess_target < 0.0:
        raise DomainError("excess noise must be non-negative")

    def to_nu(excess: float) -> float:
        nbar = excess * tau / (1.0 - tau)
        return (1.0 - tau) * (nbar + 0.5)

    return _warn_if_degenerate(
        CpfScenario(
            positions,
            probes,
            background=PhaseInsensitiveChannel.loss(tau, to_nu(excess_background)),
            target=PhaseInsensitiveChannel.loss(tau, to_nu(excess_target)),
        )
    )


def additive_scenario(
    nu_target: float, nu_background: float, positions: int, probes: int = 0
) -> CpfScenario:
    """Locate the additive-noise channel with anomalous induced noise."""
    if nu_target <= 0.0 or nu_background <= 0.0:
        raise DomainError("additive noises must be positive")
    return _warn_if_degenerate(
        CpfScenario(
            positions,
            probes,
            background=PhaseInsensitiveChannel.additive(nu_background),
            target=PhaseInsensitiveChannel.additive(nu_target),
        )
    )


@dataclass(frozen=True)
class FigureRow:
    """One probe count of a figure curve; probabilities and decibels.

    ``quantum_mle`` is None for additive scenarios, where the
    squeeze-and-count receiver does not exist.
    """

    probes: int
    quantum_lower: float
    quantum_upper: float
    classical_lower: float
    quantum_mle: float | None
    classical_mle: float
    quantum_lower_db: float
    quantum_upper_db: float
    classical_lower_db: float
    quantum_mle_db: float | None
    classical_mle_db: float


@dataclass(frozen=True)
class FigureCurve:
    """Error-probability curves of one scenario over a probe-count sweep."""

    description: str
    scenario: CpfScenario
    rows: tuple[FigureRow, ...]


def _db_of(p: float) -> float:
    return 10.0 * math.log10(p) if p > 0.0 else -math.inf


def figure_curve(scen: CpfScenario, probe_counts, **mle_tol) -> FigureCurve:
    """Evaluate bounds and receiver benchmarks across ``probe_counts``.

    Probe counts must be strictly increasing.  A zero-probe row carries
    the no-information values: bounds at their prior-only levels and both
    receivers at the random-guess error (m-1)/m, since every channel then
    ties at zero counts.  ``mle_tol`` forwards truncation tolerances to
    the receiver evaluation.
    """
    counts = [int(p) for p in probe_counts]
    if not counts:
        raise DomainError("probe range is empty")
    if any(b <= a for a, b in zip(counts, counts[1:])):
        raise DomainError("probe counts must be strictly increasing")
    if counts[0] < 0:
        raise DomainError("probe counts must be non-negative")

    additive = scen.background.kind is ChannelKind.ADDITIVE
    guess = (scen.positions - 1) / scen.positions
    rows = []
    for probes in counts:
        s = scen.with_probes(probes)
        b = error_bounds(s)
        if probes == 0:
            q_mle = None if additive else guess
            c_mle = guess
        else:
            q_mle = None if additive else mle_error_quantum(s, **mle_tol)
            c_mle = mle_error_classical(s, **mle_tol)
        rows.append(
            FigureRow(
                probes=probes,
                quantum_lower=b.quantum_lower,
                quantum_upper=b.quantum_upper,
                classical_lower=b.classical_lower,
                quantum_mle=q_mle,
                classical_mle=c_mle,
                quantum_lower_db=b.quantum_lower_db,
                quantum_upper_db=b.quantum_upper_db,
                classical_lower_db=b.classical_lower_db,
                quantum_mle_db=None if q_mle is None else _db_of(q_mle),
                classical_mle_db=_db_of(c_mle),
            )
        )
    kind = scen.background.kind.value
    desc = (
        f"{kind} channels, m={scen.positions}, tau={scen.background.tau}, "
        f"nu_b={scen.background.nu:.6g}, nu_t={scen.target.nu:.6g}"
    )
    return FigureCurve(description=desc, scenario=scen, rows=tuple(rows))
