"""Correlation matrices, their cubic invariants and maximal CHSH violation.

For a two-qubit state the correlation matrix R has entries
``R[j, k] = Tr(rho sigma_j x sigma_k)``. The connected matrix subtracts the
product of the single-qubit Bloch vectors. The largest CHSH value reachable
with R is ``2 sqrt(u1 + u2)`` for the two largest eigenvalues u1, u2 of
``R^T R``; :func:`classify` gets the same number from the trigonometric
solution of the characteristic cubic.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .measures import MeasureSet
from .qmat import I2, PAULIS, DomainError, NumericError, charpoly3, hermitian_eigenvalues
from .states import check_pair

__all__ = [
    "TSIRELSON",
    "CubicClassification",
    "MeasurementSetting",
    "r_matrix",
    "bloch_vectors",
    "connected_r_matrix",
    "gram",
    "classify",
    "classify_coefficients",
    "alpha_quantum",
    "alpha_connected",
    "max_violation_eigen",
    "bell_value",
    "chsh_optimize",
]

TSIRELSON = 2.0 * np.sqrt(2.0)
DEGENERATE_G2 = 1e-12
# gamma2 from the traceless Gram matrix carries no cancellation noise, so the
# equal-roots branch is only needed where (-gamma2)^(3/2) would underflow
DEGENERATE_G2_MATRIX = 1e-28
ARCCOS_WINDOW = 1e-9
IMAG_TOL = 1e-10
UNIT_TOL = 1e-12

# sigma_j x sigma_k, sigma_j x I, I x sigma_k as (3, 3, 4, 4) / (3, 4, 4) stacks
_PP = np.einsum("aij,bkl->abikjl", PAULIS, PAULIS).reshape(3, 3, 4, 4)
_PI = np.einsum("aij,kl->aikjl", PAULIS, I2).reshape(3, 4, 4)
_IP = np.einsum("ij,akl->aikjl", I2, PAULIS).reshape(3, 4, 4)


@dataclass(frozen=True)
class CubicClassification:
    """Invariants of ``x^3 + alpha1 x^2 + alpha2 x + alpha3`` for R^T R.

    Fields are floats for a single matrix and arrays for a batch.
    """

    alpha1: float
    alpha2: float
    alpha3: float
    gamma1: float
    gamma2: float
    theta: float
    discriminant: float
    gamma: float


@dataclass(frozen=True)
class MeasurementSetting:
    """Unit vectors a, b, a', b' of a CHSH experiment."""

    a: np.ndarray
    b: np.ndarray
    a2: np.ndarray
    b2: np.ndarray


def _expect(rho, ops):
    # Tr(rho O) for a stack of operators; returns real part after a residue check
    rho = rho.reshape(rho.shape[:-2] + (1,) * (ops.ndim - 2) + (4, 4))
    vals = np.einsum("...ij,...ji->...", ops, rho)
    if np.max(np.abs(vals.imag), initial=0.0) > IMAG_TOL:
        raise NumericError("Pauli expectation has a non-negligible imaginary part")
    return vals.real


def _as_two_qubit(rho):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[-2:] != (4, 4):
        raise DomainError("expected 4x4 two-qubit density matrices")
    return rho


def r_matrix(rho):
    """3x3 correlation matrix ``Tr(rho sigma_j x sigma_k)`` (stack aware)."""
    return _expect(_as_two_qubit(rho), _PP)


def bloch_vectors(rho):
    """Bloch vectors of both single-qubit marginals of a two-qubit state."""
    rho = _as_two_qubit(rho)
    return _expect(rho, _PI), _expect(rho, _IP)


def connected_r_matrix(rho):
    """Correlation matrix minus the outer product of the Bloch vectors."""
    rho = _as_two_qubit(rho)
    s1, s2 = bloch_vectors(rho)
    return r_matrix(rho) - s1[..., :, None] * s2[..., None, :]


def gram(r):
    """r^T r; einsum keeps the summation order fixed so r and -r agree bitwise."""
    r = np.asarray(r, dtype=float)
    return np.einsum("...ji,...jk->...ik", r, r)


def _discriminant(a1, a2, a3, g1, g2, bound_direct):
    # g1^2 + g2^3 evaluated two ways; keep the one with the smaller rounding bound.
    # The expanded polynomial form is exact when alpha2 = alpha3 = 0, where the
    # direct form can miss zero by an ulp and push theta off by ~1e-8.
    direct = g1**2 + g2**3
    terms = (18 * a1 * a2 * a3, -4 * a1**3 * a3, a1**2 * a2**2, -4 * a2**3, -27 * a3**2)
    expanded = -sum(terms) / 108
    bound_expanded = sum(np.abs(t) for t in terms) / 108
    return np.where(bound_expanded < bound_direct, expanded, direct)


def _closed_form(a1, a2, a3, g1, g2, disc, cutoff, window=ARCCOS_WINDOW):
    # relative test so tiny but well-separated spectra are not flattened
    degenerate = np.abs(g2) <= cutoff * a1**2 / 9
    neg_g2 = np.where(degenerate, 1.0, -g2)
    if np.any(~degenerate & (neg_g2 < 0)):
        raise NumericError("gamma2 is positive: the cubic has complex roots")
    arg = np.where(degenerate, 1.0, g1 / neg_g2**1.5)
    if np.any(np.abs(arg) > 1.0 + window):
        raise NumericError(f"arccos argument {arg.flat[np.argmax(np.abs(arg))]!r} outside [-1, 1]")
    # atan2 form of arccos(arg) / 3; arccos loses half the digits near arg = 1
    theta = np.where(degenerate, 0.0, np.arctan2(np.sqrt(np.maximum(-disc, 0.0)), g1) / 3)
    top_two = np.where(
        degenerate,
        -2 * a1 / 3,
        -2 * a1 / 3 + 2 * np.sqrt(neg_g2) * np.cos(theta - np.pi / 3),
    )
    gamma = 2 * np.sqrt(np.maximum(top_two, 0.0))

    fields = (a1, a2, a3, g1, g2, theta, disc, gamma)
    if np.ndim(a1) == 0:
        fields = tuple(float(f) for f in fields)
    return CubicClassification(*fields)


def classify_coefficients(alpha1, alpha2, alpha3) -> CubicClassification:
    """Discriminant data and closed-form maximal violation from coefficients.

    gamma = 2 sqrt(-2 alpha1/3 + 2 sqrt(-gamma2) cos(theta - pi/3)) with
    gamma1 = -alpha1^3/27 - alpha3/2 + alpha1 alpha2/6,
    gamma2 = alpha2/3 - alpha1^2/9 and
    theta = arccos(gamma1 / (-gamma2)^(3/2)) / 3, evaluated as
    atan2(sqrt(-Delta), gamma1) / 3. When ``|gamma2|`` is below
    1e-12 times ``alpha1^2 / 9`` the three roots coincide and
    gamma = 2 sqrt(-2 alpha1/3).
    """
    a1 = np.asarray(alpha1, dtype=float)
    a2 = np.asarray(alpha2, dtype=float)
    a3 = np.asarray(alpha3, dtype=float)
    g1 = -a1**3 / 27 - a3 / 2 + a1 * a2 / 6
    g2 = a2 / 3 - a1**2 / 9
    g1_scale = np.abs(a1) ** 3 / 27 + np.abs(a3) / 2 + np.abs(a1 * a2) / 6
    g2_scale = np.abs(a2) / 3 + a1**2 / 9
    bound = 2 * np.abs(g1) * g1_scale + 3 * g2**2 * g2_scale + g1**2 + np.abs(g2) ** 3
    return _closed_form(a1, a2, a3, g1, g2, _discriminant(a1, a2, a3, g1, g2, bound), DEGENERATE_G2)


def classify(r) -> CubicClassification:
    """Cubic invariants and closed-form gamma of ``r^T r`` (stack aware).

    The alphas come from :func:`charpoly3`. gamma1 and gamma2 are the
    invariants of the depressed cubic, read from the traceless part
    ``G - tr(G)/3`` of the Gram matrix: gamma2 = -tr(G'^2)/6 and
    gamma1 = det(G')/2. This equals the alpha expressions but avoids their
    cancellation when the spectrum is nearly degenerate, which also lets the
    equal-roots branch use the much smaller cutoff
    :data:`DEGENERATE_G2_MATRIX`.
    """
    g = gram(r)
    a1, a2, a3 = charpoly3(g)
    shifted = g - (np.trace(g, axis1=-2, axis2=-1) / 3)[..., None, None] * np.eye(3)
    g2 = -np.einsum("...ij,...ij->...", shifted, shifted) / 6
    g1 = -charpoly3(shifted)[2] / 2
    size = np.sqrt(np.einsum("...ij,...ij->...", shifted, shifted))
    bound = 2 * np.abs(g1) * size**3 + 3 * g2**2 * size**2 + g1**2 + np.abs(g2) ** 3
    disc = _discriminant(a1, a2, a3, g1, g2, bound)
    # rounding of G itself (~eps ||G||) moves the arccos argument by about
    # 10 eps ||G|| / sqrt(-gamma2); allow ten times that on top of the fixed window
    noise = np.finfo(float).eps * np.sqrt(np.einsum("...ij,...ij->...", g, g))
    window = ARCCOS_WINDOW + 100 * noise / np.sqrt(np.maximum(-g2, np.finfo(float).tiny))
    return _closed_form(a1, a2, a3, g1, g2, disc, DEGENERATE_G2_MATRIX, window)


def _pair_roles(ms: MeasureSet, pair):
    # (own, other, other) concurrences: the pair's own one moves into E1's slot
    e1, e2, e3 = ms.e1, ms.e2, ms.e3
    key = check_pair(ms.pair if pair is None else pair)
    if key == "13":
        return e2, e1, e3
    if key == "23":
        return e3, e2, e1
    return e1, e2, e3


def alpha_quantum(ms: MeasureSet, pair=None):
    """Cubic coefficients of R^T R written in terms of E1, E2, E3, E5."""
    x, y, z = (v * v for v in _pair_roles(ms, pair))
    shifted = ms.e5 - x / 4
    a1 = y + z - 2 * x - 1
    a2 = (y - x) * (z - x) - 8 * shifted
    a3 = -16 * shifted**2
    return a1, a2, a3


def alpha_connected(ms: MeasureSet, pair=None):
    """Cubic coefficients of R_c^T R_c in terms of E1..E5.

    The formulas are written for the 12 pair; 13 and 23 follow by exchanging
    E1^2 with E2^2 or E3^2.
    """
    x, y, z = (v * v for v in _pair_roles(ms, pair))
    t = ms.e4 * ms.e4
    k = 4 * ms.e5 - x
    a1 = -(x + y + t) * (x + z + t) + 2 * k
    a2 = x * (x + t) * (2 * x + y + z + 2 * t) + k * k
    a3 = -x * x * (x + t) ** 2
    return a1, a2, a3


def max_violation_eigen(r):
    """2 sqrt(u1 + u2) from the two largest eigenvalues of r^T r."""
    u = hermitian_eigenvalues(gram(r))
    top = u[..., -1] + u[..., -2]
    g = 2 * np.sqrt(np.maximum(top, 0.0))
    return float(g) if np.ndim(g) == 0 else g


def _unit(v, name):
    v = np.asarray(v, dtype=float)
    if v.shape != (3,) or abs(np.linalg.norm(v) - 1.0) > UNIT_TOL:
        raise DomainError(f"{name} must be a unit 3-vector")
    return v


def bell_value(r, m: MeasurementSetting):
    """CHSH combination a.R(b + b') + a'.R(b - b')."""
    r = np.asarray(r, dtype=float)
    a, b = _unit(m.a, "a"), _unit(m.b, "b")
    a2, b2 = _unit(m.a2, "a'"), _unit(m.b2, "b'")
    return float(a @ r @ (b + b2) + a2 @ r @ (b - b2))


def _normalize(v, fallback):
    n = np.linalg.norm(v)
    return v / n if n > 1e-300 else fallback


def _random_unit(rng):
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def _polish(r, m: MeasurementSetting):
    # BFGS on unnormalized vectors; removes the slow drift left by alternation
    # when the two smaller singular values of r nearly coincide
    def neg_value(x):
        vs = x.reshape(4, 3)
        norms = np.linalg.norm(vs, axis=1)
        a, a2, b, b2 = vs / norms[:, None]
        val = a @ r @ (b + b2) + a2 @ r @ (b - b2)
        grads = np.array([r @ (b + b2), r @ (b - b2), r.T @ (a + a2), r.T @ (a - a2)])
        units = np.array([a, a2, b, b2])
        grads = (grads - np.sum(grads * units, axis=1)[:, None] * units) / norms[:, None]
        return -val, -grads.ravel()

    x0 = np.concatenate([m.a, m.a2, m.b, m.b2])
    res = optimize.minimize(neg_value, x0, jac=True, method="BFGS", options={"gtol": 1e-13, "maxiter": 200})
    vs = res.x.reshape(4, 3)
    a, a2, b, b2 = vs / np.linalg.norm(vs, axis=1)[:, None]
    return float(a @ r @ (b + b2) + a2 @ r @ (b - b2)), MeasurementSetting(a, b, a2, b2)


def chsh_optimize(r, restarts=10, seed=0, max_iter=500, tol=1e-12):
    """Maximize :func:`bell_value` by alternating exact half-steps.

    With b, b' fixed the best a and a' are the directions of R(b + b') and
    R(b - b'); with a, a' fixed the best b and b' are the directions of
    R^T(a + a') and R^T(a - a'). Each restart starts from random vectors and
    iterates until no vector moves by more than `tol`. The best restart is
    then refined by quasi-Newton ascent on the same objective.

    Returns
    -------
    value : float
        Best value seen over all restarts and iterations.
    setting : MeasurementSetting
        Vectors achieving `value`.
    """
    if restarts < 1:
        raise DomainError("restarts must be at least 1")
    r = np.asarray(r, dtype=float)
    rng = np.random.default_rng(seed)
    best_val = -np.inf
    best = None
    for _ in range(restarts):
        b, b2 = _random_unit(rng), _random_unit(rng)
        a, a2 = _random_unit(rng), _random_unit(rng)
        for _ in range(max_iter):
            old = np.concatenate([a, a2, b, b2])
            a = _normalize(r @ (b + b2), a)
            a2 = _normalize(r @ (b - b2), a2)
            b = _normalize(r.T @ (a + a2), b)
            b2 = _normalize(r.T @ (a - a2), b2)
            val = float(a @ r @ (b + b2) + a2 @ r @ (b - b2))
            if val > best_val:
                best_val = val
                best = MeasurementSetting(a.copy(), b.copy(), a2.copy(), b2.copy())
            if np.max(np.abs(np.concatenate([a, a2, b, b2]) - old)) < tol:
                break
    if best_val > 0.0:
        val, setting = _polish(r, best)
        if val > best_val:
            best_val, best = val, setting
    return best_val, best
