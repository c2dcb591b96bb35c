"""Covariance-matrix algebra for one- and two-mode Gaussian states.

Conventions
-----------
* Quadrature ordering is (x1, p1, x2, p2); each mode contributes a 2x2
  block.
* Shot noise is 1/2: the vacuum covariance matrix is I/2.  No other
  convention is supported.
* First moments are assumed to vanish throughout; there is no
  displacement tracking.

All operations are pure functions and safe to call concurrently.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NumericalInstabilityError

_I2 = np.eye(2)
_Z2 = np.diag([1.0, -1.0])

#: Symplectic form for two modes in (x1, p1, x2, p2) ordering.
OMEGA = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))

#: Tolerance on the smaller symplectic eigenvalue when checking physicality.
PHYSICALITY_TOL = 1e-9

#: Relative tolerance when checking matrix symmetry.
SYMMETRY_TOL = 1e-12

_EPS = float(np.finfo(np.float64).eps)


class ChannelKind(enum.Enum):
    LOSS = "loss"
    AMPLIFIER = "amplifier"
    ADDITIVE = "additive"


@dataclass(frozen=True)
class PhaseInsensitiveChannel:
    """One-mode phase-insensitive Gaussian channel.

    Parametrized by a generalized transmissivity ``tau`` (< 1 loss,
    > 1 amplifier, = 1 additive noise) and the induced quadrature noise
    ``nu`` in shot-noise units.
    """

    kind: ChannelKind
    tau: float
    nu: float

    def __post_init__(self) -> None:
        tau, nu = self.tau, self.nu
        # 1e-12 relative slack: nu is often computed as (1-tau)*(nbar+1/2)
        # and may land an ulp below the class boundary.
        slack = 1e-12 * (1.0 + abs(nu))
        if self.kind is ChannelKind.LOSS:
            if not 0.0 <= tau < 1.0:
                raise DomainError(f"loss channel requires 0 <= tau < 1, got tau={tau}")
            if nu < (1.0 - tau) / 2.0 - slack:
                raise DomainError(
                    f"loss channel requires nu >= (1-tau)/2 = {(1 - tau) / 2}, got nu={nu}"
                )
        elif self.kind is ChannelKind.AMPLIFIER:
            if not tau > 1.0:
                raise DomainError(f"amplifier channel requires tau > 1, got tau={tau}")
            if nu < (tau - 1.0) / 2.0 - slack:
                raise DomainError(
                    f"amplifier channel requires nu >= (tau-1)/2 = {(tau - 1) / 2}, got nu={nu}"
                )
        elif self.kind is ChannelKind.ADDITIVE:
            if tau != 1.0:
                raise DomainError(f"additive channel requires tau = 1, got tau={tau}")
            if nu < 0.0:
                raise DomainError(f"additive channel requires nu >= 0, got nu={nu}")
        else:  # pragma: no cover - enum exhausts the kinds
            raise DomainError(f"unknown channel kind {self.kind!r}")

    @classmethod
    def loss(cls, tau: float, nu: float) -> "PhaseInsensitiveChannel":
        return cls(ChannelKind.LOSS, tau, nu)

    @classmethod
    def amplifier(cls, tau: float, nu: float) -> "PhaseInsensitiveChannel":
        return cls(ChannelKind.AMPLIFIER, tau, nu)

    @classmethod
    def additive(cls, nu: float) -> "PhaseInsensitiveChannel":
        return cls(ChannelKind.ADDITIVE, 1.0, nu)

    @classmethod
    def from_thermal(cls, tau: float, eps: float) -> "PhaseInsensitiveChannel":
        """Build a loss or amplifier channel from its environment variance.

        ``eps`` is the quadrature variance of the thermal environment
        (>= 1/2); the induced noise is nu = eps * |1 - tau|.
        """
        if tau == 1.0:
            raise DomainError("tau = 1 has no thermal-environment parametrization")
        kind = ChannelKind.LOSS if tau < 1.0 else ChannelKind.AMPLIFIER
        return cls(kind, tau, eps * abs(1.0 - tau))

    @property
    def eps(self) -> float:
        """Environment quadrature variance nu / |1 - tau| (loss/amplifier only)."""
        if self.kind is ChannelKind.ADDITIVE:
            raise DomainError("eps = nu/|1-tau| is undefined for additive channels")
        return self.nu / abs(1.0 - self.tau)

    @property
    def nbar(self) -> float:
        """Mean photon number of the environment, eps - 1/2."""
        return self.eps - 0.5


@dataclass(frozen=True)
class TwoModeCovariance:
    """4x4 real symmetric covariance matrix of a two-mode Gaussian state.

    Validated on construction: symmetric to within ``SYMMETRY_TOL``
    (relative) and physical, i.e. both symplectic eigenvalues at least
    1/2 - ``PHYSICALITY_TOL``.
    """

    entries: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        m = np.asarray(self.entries, dtype=np.float64)
        if m.shape != (4, 4):
            raise DomainError(f"covariance matrix must be 4x4, got shape {m.shape}")
        scale = max(1.0, float(np.max(np.abs(m))))
        if float(np.max(np.abs(m - m.T))) > SYMMETRY_TOL * scale:
            raise DomainError("covariance matrix is not symmetric")
        object.__setattr__(self, "entries", m)
        nu_min = symplectic_eigenvalues(self)[1]
        if nu_min < 0.5 - PHYSICALITY_TOL:
            raise DomainError(
                f"non-physical covariance matrix: smallest symplectic eigenvalue {nu_min}"
            )

    def block(self, i: int, j: int) -> np.ndarray:
        """2x2 block (i, j) with modes indexed from 0."""
        return self.entries[2 * i : 2 * i + 2, 2 * j : 2 * j + 2].copy()


def vacuum_cm() -> TwoModeCovariance:
    """Two-mode vacuum covariance matrix, I/2."""
    return TwoModeCovariance(0.5 * np.eye(4))


def tmsv_cm(a: float) -> TwoModeCovariance:
    """Two-mode squeezed vacuum with diagonal quadrature variance ``a``.

    The state carries a - 1/2 mean photons per mode; a = 1/2 is vacuum.
    Diagonal blocks are a*I, off-diagonal blocks sqrt(a^2 - 1/4)*Z.
    """
    if a < 0.5:
        raise DomainError(f"squeezing parameter must satisfy a >= 1/2, got {a}")
    c = math.sqrt(a * a - 0.25)
    return TwoModeCovariance(np.block([[a * _I2, c * _Z2], [c * _Z2, a * _I2]]))


def apply_channel(v: TwoModeCovariance, ch: PhaseInsensitiveChannel) -> TwoModeCovariance:
    """Send the second mode through ``ch``, leaving the first untouched.

    V -> (I + sqrt(tau) I) V (I + sqrt(tau) I)^T + (0 + nu I), with the
    direct sums acting as identity on mode one.
    """
    s = math.sqrt(ch.tau)
    x = np.diag([1.0, 1.0, s, s])
    add = np.diag([0.0, 0.0, ch.nu, ch.nu])
    return TwoModeCovariance(x @ v.entries @ x.T + add)


def two_mode_squeeze(v: TwoModeCovariance, r: float) -> TwoModeCovariance:
    """Apply the two-mode squeezing symplectic S(r) = [[cosh r I, sinh r Z],
    [sinh r Z, cosh r I]] to both modes."""
    ch, sh = math.cosh(r), math.sinh(r)
    s = np.block([[ch * _I2, sh * _Z2], [sh * _Z2, ch * _I2]])
    return TwoModeCovariance(s @ v.entries @ s.T)


def discard_mode(v: TwoModeCovariance, which: int) -> np.ndarray:
    """Trace out one mode and return the retained 2x2 covariance block.

    ``which`` is the index (0 or 1) of the mode to discard.
    """
    if which not in (0, 1):
        raise DomainError(f"mode index must be 0 or 1, got {which}")
    keep = 1 - which
    return v.block(keep, keep)


def symplectic_eigenvalues(v: TwoModeCovariance | np.ndarray) -> tuple[float, float]:
    """Symplectic spectrum of a two-mode covariance matrix, descending.

    The absolute eigenvalues of i*Omega*V come in two degenerate pairs;
    the deduplicated pair is returned.
    """
    m = v.entries if isinstance(v, TwoModeCovariance) else np.asarray(v, dtype=np.float64)
    ev = np.abs(np.linalg.eigvals(OMEGA @ m))
    ev.sort()
    return float(ev[3]), float(ev[1])


def _boundary_det(m: np.ndarray) -> float:
    """det(V + i/2 Omega), snapped to zero below the rounding floor.

    For a symmetric two-mode V the determinant reduces to the real
    polynomial det V - Delta/4 + 1/16 with Delta = det A + det B + 2 det C
    (equivalently (nu1^2 - 1/4)(nu2^2 - 1/4)), which vanishes for states
    saturating the uncertainty bound.  Entry rounding alone shifts it off
    zero by O(eps * scale), and the square root taken downstream amplifies
    that to sqrt(eps); the floor restores the boundary exactly.
    """
    det_v = float(np.linalg.det(m))
    delta = (
        float(np.linalg.det(m[:2, :2]))
        + float(np.linalg.det(m[2:, 2:]))
        + 2.0 * float(np.linalg.det(m[:2, 2:]))
    )
    d = det_v - 0.25 * delta + 0.0625
    floor = 512.0 * _EPS * (abs(det_v) + 0.25 * abs(delta) + 0.0625)
    return 0.0 if abs(d) < floor else d


def gaussian_fidelity(v1: TwoModeCovariance, v2: TwoModeCovariance) -> float:
    """Bures fidelity of two zero-mean two-mode Gaussian states.

    F = (sqrt(chi) + sqrt(chi - 1)) / det(V1 + V2)^(1/4) with
    chi = 2 sqrt(A) + 2 sqrt(B) + 1/2,
    A = det(Omega V1 Omega V2 - I/4) / det(V1 + V2),
    B = det(V1 + i/2 Omega) det(V2 + i/2 Omega) / det(V1 + V2).

    Raises NumericalInstabilityError if chi falls below 1 by more than
    1e-9; the result is clamped to [0, 1] after the same tolerance check.
    """
    m1, m2 = v1.entries, v2.entries
    if np.array_equal(m1, m2):
        return 1.0
    # canonical argument order makes the evaluation exactly symmetric
    if tuple(m1.ravel()) > tuple(m2.ravel()):
        m1, m2 = m2, m1
    det_sum = float(np.linalg.det(m1 + m2))
    a_term = float(np.linalg.det(OMEGA @ m1 @ OMEGA @ m2 - 0.25 * np.eye(4))) / det_sum
    b_term = _boundary_det(m1) * _boundary_det(m2) / det_sum
    a_term = max(a_term, 0.0)
    b_term = max(b_term, 0.0)
    chi = 2.0 * math.sqrt(a_term) + 2.0 * math.sqrt(b_term) + 0.5
    if math.isnan(chi) or math.isinf(chi):
        raise NumericalInstabilityError(f"fidelity intermediate chi = {chi}")
    if chi < 1.0 - PHYSICALITY_TOL:
        raise NumericalInstabilityError(f"fidelity intermediate chi = {chi} < 1")
    # chi - 1 cancels exactly for pure-state self-overlap; snap rounding
    # residue to zero before the square root amplifies it
    chi_m1 = chi - 1.0
    if chi_m1 < 64.0 * _EPS * chi:
        chi_m1 = 0.0
    fid = (math.sqrt(max(chi, 1.0)) + math.sqrt(max(chi_m1, 0.0))) / det_sum**0.25
    if fid > 1.0 + PHYSICALITY_TOL:
        raise NumericalInstabilityError(f"fidelity {fid} exceeds 1 beyond tolerance")
    return min(max(fid, 0.0), 1.0)
