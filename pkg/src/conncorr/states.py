"""Canonical three-qubit pure states and their reduced density matrices."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qmat import DomainError, partial_trace

__all__ = [
    "PAIRS",
    "CanonicalParams",
    "canonical_state",
    "from_amplitudes",
    "density",
    "reduce_pair",
    "reduce_single",
    "sample_canonical",
    "check_pair",
]

NORM_TOL = 1e-12

# qubit labels kept by each pair, and the one traced out
PAIRS = {"12": (1, 2), "13": (1, 3), "23": (2, 3)}
_COMPLEMENT = {"12": 3, "13": 2, "23": 1}

# basis indices |000>, |100>, |101>, |110>, |111>
CANONICAL_INDICES = (0, 4, 5, 6, 7)


def check_pair(pair):
    """Normalize a pair selector (``12``, ``"13"``...) to its string key."""
    key = str(pair)
    if key == "31":
        key = "13"
    elif key == "32":
        key = "23"
    elif key == "21":
        key = "12"
    if key not in PAIRS:
        raise DomainError(f"pair must be one of 12, 13, 23; got {pair!r}")
    return key


@dataclass(frozen=True)
class CanonicalParams:
    """Amplitudes of the five-term canonical form and its single phase."""

    l0: float
    l1: float
    l2: float
    l3: float
    l4: float
    phi: float = 0.0

    def __post_init__(self):
        lam = self.lambdas
        if np.any(lam < 0):
            raise DomainError("amplitudes must be non-negative")
        if abs(float(lam @ lam) - 1.0) > NORM_TOL:
            raise DomainError(f"squared amplitudes sum to {float(lam @ lam)!r}, not 1")
        if not 0.0 <= self.phi <= np.pi:
            raise DomainError("phase must lie in [0, pi]")

    @property
    def lambdas(self):
        return np.array([self.l0, self.l1, self.l2, self.l3, self.l4], dtype=float)

    @classmethod
    def normalized(cls, l0, l1, l2, l3, l4, phi=0.0):
        """Build from unnormalized non-negative amplitudes."""
        lam = np.array([l0, l1, l2, l3, l4], dtype=float)
        norm = np.linalg.norm(lam)
        if norm == 0.0:
            raise DomainError("all amplitudes are zero")
        lam = lam / norm
        return cls(*map(float, lam), phi=float(phi))


def canonical_state(p):
    """State vector of `p` in the computational basis (length 8)."""
    psi = np.zeros(8, dtype=complex)
    psi[list(CANONICAL_INDICES)] = [
        p.l0,
        p.l1 * np.exp(1j * p.phi),
        p.l2,
        p.l3,
        p.l4,
    ]
    return psi


def from_amplitudes(a):
    """Normalized copy of an arbitrary 8-component amplitude vector."""
    a = np.asarray(a, dtype=complex).reshape(-1)
    if a.shape != (8,):
        raise DomainError("three-qubit states have 8 amplitudes")
    norm = np.linalg.norm(a)
    if norm == 0.0:
        raise DomainError("zero vector is not a state")
    return a / norm


def density(psi):
    """Projector |psi><psi|. Accepts stacks of states with shape (..., d)."""
    psi = np.asarray(psi, dtype=complex)
    return psi[..., :, None] * np.conj(psi[..., None, :])


def reduce_pair(rho3, pair):
    """Two-qubit state of `pair`, tracing out the third qubit."""
    return partial_trace(rho3, _COMPLEMENT[check_pair(pair)])


def reduce_single(rho3, qubit):
    """Single-qubit state of `qubit` (1, 2 or 3)."""
    qubit = int(qubit)
    if qubit not in (1, 2, 3):
        raise DomainError(f"qubit must be 1, 2 or 3; got {qubit}")
    return partial_trace(rho3, [q for q in (1, 2, 3) if q != qubit])


def _draw(rng):
    lam = np.abs(rng.standard_normal(5))
    lam /= np.linalg.norm(lam)
    return lam, rng.uniform(0.0, np.pi)


def sample_canonical(seed):
    """Random canonical parameters, deterministic in `seed`.

    Amplitudes are |N(0, 1)| draws projected onto the unit sphere and the
    phase is uniform on [0, pi].
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    lam, phi = _draw(rng)
    # renormalize once more so the dataclass check sees |lam| == 1 to rounding
    return CanonicalParams.normalized(*lam, phi=phi)
