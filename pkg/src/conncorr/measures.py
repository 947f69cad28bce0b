"""Entanglement measures E1..E5, concurrences and negativity.

The five measures are invariants of the canonical three-qubit state:

    E1 = 2 l0 l3                 (1|2 concurrence)
    E2 = 2 l0 l2                 (1|3 concurrence)
    E3 = 2 |l1 l4 e^{i phi} - l2 l3|   (2|3 concurrence)
    E4 = 2 l0 l4                 (square root of the three-tangle)
    E5 = l0^2 (l2^2 l3^2 - l1^2 l4^2 + |l1 l4 e^{i phi} - l2 l3|^2)

Most functions accept either one matrix or a stack of matrices.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qmat import SY, DomainError, NumericError, eigh_jacobi, hermitian_eigenvalues, partial_transpose
from .states import CanonicalParams, check_pair, density, reduce_pair, reduce_single

__all__ = [
    "MeasureSet",
    "ConcurrenceSet",
    "NegativityResult",
    "E5_MATRIX_OFFSET",
    "e_values",
    "measures_from_params",
    "bipartite_concurrence",
    "concurrences",
    "measures_from_concurrences",
    "e5_matrix",
    "wootters_concurrence",
    "negativity",
    "measures_from_state",
]

SQRT_CLAMP = 1e-10
# e5_matrix exceeds the amplitude form of E5 by exactly this constant
E5_MATRIX_OFFSET = 1.0 / 3.0
_YY = np.kron(SY, SY)


@dataclass(frozen=True)
class MeasureSet:
    e1: float
    e2: float
    e3: float
    e4: float
    e5: float
    pair: str = "12"

    def as_tuple(self):
        return (self.e1, self.e2, self.e3, self.e4, self.e5)


@dataclass(frozen=True)
class ConcurrenceSet:
    """Pure-state concurrences of every bipartition of a three-qubit state.

    ``c12`` is the concurrence of the (12)|3 cut, so it equals ``c3``;
    likewise ``c13 == c2`` and ``c23 == c1``.
    """

    c1: float
    c2: float
    c3: float
    c12: float
    c13: float
    c23: float


@dataclass(frozen=True)
class NegativityResult:
    negativity: float
    log_negativity: float


def e_values(lams, phi):
    """Vectorized E1..E5 for amplitude rows ``lams[..., 5]`` and phases."""
    lams = np.asarray(lams, dtype=float)
    l0, l1, l2, l3, l4 = np.moveaxis(lams, -1, 0)
    mix = np.abs(l1 * l4 * np.exp(1j * np.asarray(phi)) - l2 * l3)
    e1 = 2 * l0 * l3
    e2 = 2 * l0 * l2
    e3 = 2 * mix
    e4 = 2 * l0 * l4
    e5 = l0**2 * (l2**2 * l3**2 - l1**2 * l4**2 + mix**2)
    return e1, e2, e3, e4, e5


def measures_from_params(p: CanonicalParams, pair="12") -> MeasureSet:
    """The five measures of `p`, tagged with the pair they describe.

    The values are pair independent; the tag tells the coefficient formulas
    which of E1, E2, E3 plays the role of the pair's own concurrence.
    """
    e = e_values(p.lambdas, p.phi)
    return MeasureSet(*(float(x) for x in e), pair=check_pair(pair))


def bipartite_concurrence(rho_a):
    """sqrt(2 (1 - Tr rho_a^2)) for a reduced state of a pure parent."""
    rho_a = np.asarray(rho_a, dtype=complex)
    purity = np.real(np.einsum("...ij,...ji->...", rho_a, rho_a))
    return np.sqrt(np.maximum(0.0, 2.0 * (1.0 - purity)))


def concurrences(psi) -> ConcurrenceSet:
    """All bipartite concurrences of a three-qubit pure state vector."""
    rho = density(psi)
    c1, c2, c3 = (float(bipartite_concurrence(reduce_single(rho, q))) for q in (1, 2, 3))
    c12, c13, c23 = (float(bipartite_concurrence(reduce_pair(rho, s))) for s in ("12", "13", "23"))
    return ConcurrenceSet(c1, c2, c3, c12, c13, c23)


def _guarded_sqrt(x, name):
    x = np.asarray(x, dtype=float)
    if np.any(x < -SQRT_CLAMP):
        raise NumericError(f"{name}: square-root argument {np.min(x)!r} is negative")
    return np.sqrt(np.maximum(x, 0.0))


def measures_from_concurrences(cs: ConcurrenceSet, e1):
    """Recover (E2, E3, E4) of the 12 pair from concurrences and E1.

    Uses E2^2 = C12^2 + E1^2 - C2^2, E3^2 = C12^2 + E1^2 - C1^2 and
    E4^2 = C1^2 + C2^2 - C12^2 - 2 E1^2.
    """
    e1sq = e1 * e1
    e2 = _guarded_sqrt(cs.c12**2 + e1sq - cs.c2**2, "E2")
    e3 = _guarded_sqrt(cs.c12**2 + e1sq - cs.c1**2, "E3")
    e4 = _guarded_sqrt(cs.c1**2 + cs.c2**2 - cs.c12**2 - 2 * e1sq, "E4")
    return float(e2), float(e3), float(e4)


def _cube_trace(r):
    return np.real(np.einsum("...ij,...jk,...ki->...", r, r, r))


def e5_matrix(rho_pair, rho_a, rho_b, ms: MeasureSet):
    """E5 from reduced matrices:

    Tr((rho_a x rho_b) rho_pair) - Tr(rho_a^3)/3 - Tr(rho_b^3)/3
    + (E1^2 + E2^2 + E3^2 + E4^2)/4

    The value is independent of which pair is used, but it sits exactly
    :data:`E5_MATRIX_OFFSET` above the amplitude form of E5 (a product
    state gives 1 - 1/3 - 1/3 = 1/3).
    """
    rho_pair = np.asarray(rho_pair, dtype=complex)
    rho_a = np.asarray(rho_a, dtype=complex)
    rho_b = np.asarray(rho_b, dtype=complex)
    prod = np.einsum("...ij,...kl->...ikjl", rho_a, rho_b).reshape(rho_pair.shape)
    overlap = np.real(np.einsum("...ij,...ji->...", prod, rho_pair))
    esq = ms.e1**2 + ms.e2**2 + ms.e3**2 + ms.e4**2
    return overlap - _cube_trace(rho_a) / 3 - _cube_trace(rho_b) / 3 + esq / 4


def wootters_concurrence(rho, *, psd_tol=1e-8, rank_cut=1e-13):
    """Two-qubit concurrence max(0, mu1 - mu2 - mu3 - mu4).

    The mu are the square roots of the eigenvalues of
    rho (sy x sy) rho* (sy x sy). They equal the singular values of
    ``tau = W^T (sy x sy) W`` where ``rho = W W^dagger``, and those are
    read off as the non-negative eigenvalues of the Hermitian dilation
    ``[[0, tau], [tau^dagger, 0]]``. This avoids square-rooting eigenvalues
    that are zero up to rounding.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[-2:] != (4, 4):
        raise DomainError("wootters_concurrence expects 4x4 density matrices")
    p, v = eigh_jacobi(rho)
    if np.any(p < -psd_tol):
        raise DomainError(f"density matrix has eigenvalue {np.min(p)!r}")
    p = np.where(p < rank_cut, 0.0, p)
    w = v * np.sqrt(p)[..., None, :]
    tau = np.swapaxes(w, -1, -2) @ _YY @ w
    batch = rho.shape[:-2]
    dil = np.zeros(batch + (8, 8), dtype=complex)
    dil[..., :4, 4:] = tau
    dil[..., 4:, :4] = np.conj(np.swapaxes(tau, -1, -2))
    mu = hermitian_eigenvalues(dil)[..., ::-1][..., :4]
    c = mu[..., 0] - mu[..., 1] - mu[..., 2] - mu[..., 3]
    c = np.maximum(c, 0.0)
    return float(c) if c.ndim == 0 else c


def negativity(rho) -> NegativityResult:
    """Negativity of the partial transpose and ln(2N + 1).

    For a stack of matrices the result fields are arrays.
    """
    lam = hermitian_eigenvalues(partial_transpose(rho))
    n = np.sum((np.abs(lam) - lam) / 2.0, axis=-1)
    en = np.log(2.0 * n + 1.0)
    if np.ndim(n) == 0:
        return NegativityResult(float(n), float(en))
    return NegativityResult(n, en)


def measures_from_state(psi, pair="12") -> MeasureSet:
    """E1..E5 of an arbitrary three-qubit pure state vector.

    E1, E2, E3 are the two-qubit concurrences of rho12, rho13 and rho23,
    E4 comes from E4^2 = C1^2 - E1^2 - E2^2 and E5 from :func:`e5_matrix`
    minus :data:`E5_MATRIX_OFFSET`, which puts it on the same scale as the
    amplitude form. For canonical states this agrees with
    :func:`measures_from_params`.
    """
    rho = density(psi)
    pairs = {s: reduce_pair(rho, s) for s in ("12", "13", "23")}
    e1, e2, e3 = (wootters_concurrence(pairs[s]) for s in ("12", "13", "23"))
    r1, r2 = reduce_single(rho, 1), reduce_single(rho, 2)
    c1 = float(bipartite_concurrence(r1))
    e4 = float(_guarded_sqrt(c1**2 - e1**2 - e2**2, "E4"))
    partial = MeasureSet(e1, e2, e3, e4, 0.0, pair=check_pair(pair))
    e5 = float(e5_matrix(pairs["12"], r1, r2, partial)) - E5_MATRIX_OFFSET
    return MeasureSet(e1, e2, e3, e4, e5, pair=partial.pair)
