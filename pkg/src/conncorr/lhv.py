"""Hidden-variable model with a vector observable.

A correlation matrix is brought to diagonal form ``r = U diag(q) V^T``.
With exponents ``k_j = (1 - q_j) / (2 q_j)`` and a hidden variable lambda
uniform on [0, 1], the vector

    F(v, lambda) = (lambda^k_x v_x, lambda^k_y v_y, lambda^k_z v_z)

reproduces the correlator, since the integral of lambda^(2 k_j) is q_j:

    a^T r b = sum_j q_j a~_j b~_j = int_0^1 F(a~, l) . F(b~, l) dl

where a~ = U^T a and b~ = V^T b. Spin outcomes are drawn from

    P_j(S = +-1 | a, lambda) = (sqrt(3) +- 3 lambda^k_j a~_j) / 6
    P(S_a, S_b | a, b, lambda) = sum_j P_j(S_a | a, lambda) P_j(S_b | b, lambda)

Single-component factors can be negative, so the joint table is checked
and flagged rather than trusted as a probability distribution.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qmat import DomainError, NumericError, svd3

__all__ = [
    "LhvModel",
    "OutcomeDistribution",
    "build_model",
    "f_observable",
    "correlator_closed",
    "joint_distribution",
    "mc_correlator",
    "k_distribution",
    "freedom_of_choice_witness",
    "rescaled_conditionals",
]

ACTIVE_CUT = 1e-12
Q_CEILING = 1.0 + 1e-9
SIGNED_TOL = 1e-12
K_GUARD = 1e-14
SQRT3 = np.sqrt(3.0)
# outcome order of every table: (+,+), (+,-), (-,+), (-,-)
OUTCOMES = ((1, 1), (1, -1), (-1, 1), (-1, -1))
_SASB = np.array([1.0, -1.0, -1.0, 1.0])


@dataclass(frozen=True)
class LhvModel:
    q: np.ndarray
    k: np.ndarray
    basis_a: np.ndarray
    basis_b: np.ndarray
    active: tuple

    @property
    def is_zero(self):
        return not self.active


@dataclass(frozen=True)
class OutcomeDistribution:
    """Joint outcome table ordered as :data:`OUTCOMES`."""

    p: np.ndarray
    signed: bool

    def __getitem__(self, outcome):
        return self.p[OUTCOMES.index(tuple(outcome))]


def build_model(r) -> LhvModel:
    """Diagonalize a 3x3 correlation matrix into an :class:`LhvModel`."""
    u, q, v = svd3(r)
    if q[0] > Q_CEILING:
        raise DomainError(f"singular value {q[0]!r} exceeds 1; not a physical correlation matrix")
    if np.max(np.abs(u @ np.diag(q) @ v.T - np.asarray(r, dtype=float))) > 1e-10:
        raise NumericError("SVD reconstruction error above 1e-10")
    q = np.minimum(q, 1.0)
    active = tuple(int(j) for j in np.flatnonzero(q >= ACTIVE_CUT))
    k = np.full(3, np.inf)
    k[list(active)] = (1.0 - q[list(active)]) / (2.0 * q[list(active)])
    return LhvModel(q=q, k=k, basis_a=u, basis_b=v, active=active)


def _rotate(m: LhvModel, v, side):
    v = np.asarray(v, dtype=float)
    if side == "a":
        return m.basis_a.T @ v
    if side == "b":
        return m.basis_b.T @ v
    raise DomainError(f"side must be 'a' or 'b'; got {side!r}")


def _weights(m: LhvModel, lam):
    # lambda^k_j for active j, 0 for inactive; broadcasts over lam
    lam = np.asarray(lam, dtype=float)
    w = np.zeros(lam.shape + (3,))
    for j in m.active:
        w[..., j] = np.power(lam, m.k[j])
    return w


def f_observable(m: LhvModel, v, lam, side="a"):
    """Vector observable F for lab-frame direction `v` at hidden value `lam`."""
    return _weights(m, lam) * _rotate(m, v, side)


def correlator_closed(m: LhvModel, a, b):
    """sum_j q_j a~_j b~_j."""
    at, bt = _rotate(m, a, "a"), _rotate(m, b, "b")
    return float(sum(m.q[j] * at[j] * bt[j] for j in m.active))


def _component_factors(m: LhvModel, v, lam, side):
    # P_j(S = +1), P_j(S = -1) with shape lam.shape + (3,)
    x = f_observable(m, v, lam, side)
    return (SQRT3 + 3 * x) / 6, (SQRT3 - 3 * x) / 6


def _joint_tables(m, a, b, lam):
    pa_plus, pa_minus = _component_factors(m, a, lam, "a")
    pb_plus, pb_minus = _component_factors(m, b, lam, "b")
    return np.stack(
        [
            np.sum(pa_plus * pb_plus, axis=-1),
            np.sum(pa_plus * pb_minus, axis=-1),
            np.sum(pa_minus * pb_plus, axis=-1),
            np.sum(pa_minus * pb_minus, axis=-1),
        ],
        axis=-1,
    )


def joint_distribution(m: LhvModel, a, b, lam) -> OutcomeDistribution:
    """P(S_a, S_b | a, b, lambda) as a four-entry table."""
    p = _joint_tables(m, a, b, float(lam))
    return OutcomeDistribution(p=p, signed=bool(np.any(p < -SIGNED_TOL)))


def mc_correlator(m: LhvModel, a, b, n, seed=0, chunk=1 << 16):
    """Monte Carlo estimate of sum S_a S_b P(S_a, S_b | a, b).

    Each draw takes lambda uniform on [0, 1]. When the joint table at that
    lambda is non-negative an outcome pair is sampled from it; otherwise the
    exact conditional expectation of S_a S_b is used for that draw.
    Draws are processed in chunks, each with its own spawned random stream.

    Returns
    -------
    estimate, stderr, signed_fraction : float
    """
    n = int(n)
    if n < 1:
        raise DomainError("sample count must be positive")
    if m.is_zero:
        # every table is uniform, so the conditional expectation is 0 for all lambda
        return 0.0, 0.0, 0.0
    streams = np.random.SeedSequence(seed).spawn((n + chunk - 1) // chunk)
    total = total_sq = 0.0
    signed = 0
    left = n
    for ss in streams:
        size = min(chunk, left)
        left -= size
        rng = np.random.default_rng(ss)
        lam = rng.uniform(0.0, 1.0, size)
        tables = _joint_tables(m, a, b, lam)
        is_signed = np.any(tables < -SIGNED_TOL, axis=-1)
        cdf = np.cumsum(np.clip(tables, 0.0, None), axis=-1)
        u = rng.uniform(0.0, 1.0, size) * cdf[:, -1]
        pick = np.minimum(np.sum(cdf <= u[:, None], axis=-1), 3)
        values = np.where(is_signed, tables @ _SASB, _SASB[pick])
        total += values.sum()
        total_sq += (values * values).sum()
        signed += int(is_signed.sum())
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0)
    stderr = np.sqrt(var / (n - 1)) if n > 1 else 0.0
    return float(mean), float(stderr), signed / n


def k_distribution(m: LhvModel, a, b, lam):
    """P(k | a, b, lambda) = sum_{S_a, S_b} P_k(S_a | a, lambda) P_k(S_b | b, lambda)."""
    pa_plus, pa_minus = _component_factors(m, a, lam, "a")
    pb_plus, pb_minus = _component_factors(m, b, lam, "b")
    return (pa_plus + pa_minus) * (pb_plus + pb_minus)


def freedom_of_choice_witness(m: LhvModel, settings1, settings2, lam):
    """Max-norm change of P(k | a, b, lambda) between two (a, b) settings."""
    p1 = k_distribution(m, *settings1, lam)
    p2 = k_distribution(m, *settings2, lam)
    return float(np.max(np.abs(p1 - p2)))


def rescaled_conditionals(m: LhvModel, a, b, lam, k):
    """P(S | v, lambda, k) = P_k(S | v, lambda) / sqrt(P(k | a, b, lambda)).

    Returns
    -------
    pa, pb : dict
        Maps each outcome +1 / -1 to its rescaled weight for sides a and b.
    """
    pk = k_distribution(m, a, b, lam)[k]
    if pk <= K_GUARD:
        raise NumericError(f"P(k={k}) = {pk!r} is too small to rescale by")
    pa_plus, pa_minus = _component_factors(m, a, lam, "a")
    pb_plus, pb_minus = _component_factors(m, b, lam, "b")
    root = np.sqrt(pk)
    pa = {1: float(pa_plus[k] / root), -1: float(pa_minus[k] / root)}
    pb = {1: float(pb_plus[k] / root), -1: float(pb_minus[k] / root)}
    return pa, pb
