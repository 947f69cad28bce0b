"""Small dense matrix kernel for qubit density matrices.

Everything here works on matrices of dimension 2, 3, 4 or 8. The Jacobi
eigensolver also accepts stacks of matrices with shape ``(..., n, n)`` so
that parameter scans can diagonalize many states at once.

Qubits are ordered big-endian: qubit 1 is the most significant bit of the
basis index, so ``|abc>`` sits at index ``4a + 2b + c``.
"""
from __future__ import annotations

import numpy as np

__all__ = [
    "DomainError",
    "NumericError",
    "UnsupportedDimensionError",
    "I2",
    "SX",
    "SY",
    "SZ",
    "PAULIS",
    "kron",
    "partial_trace",
    "partial_transpose",
    "is_hermitian",
    "hermitian_eigenvalues",
    "eigh_jacobi",
    "charpoly3",
    "svd3",
]

HERMITIAN_TOL = 1e-12
SUPPORTED_DIMS = (2, 3, 4, 8)


class DomainError(ValueError):
    """Input outside the domain of an operation."""


class UnsupportedDimensionError(DomainError):
    pass


class NumericError(ArithmeticError):
    """A numerical routine failed a consistency guard."""


I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = np.stack([SX, SY, SZ])


def _n_qubits(dim):
    n = int(round(np.log2(dim)))
    if 2**n != dim or dim not in SUPPORTED_DIMS:
        raise UnsupportedDimensionError(f"dimension {dim} is not a qubit register of size 1-3")
    return n


def kron(a, b):
    """Tensor product with the first factor as the major index."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[-1] * b.shape[-1] > 8:
        raise UnsupportedDimensionError(
            f"kron result of dimension {a.shape[-1] * b.shape[-1]} exceeds 8"
        )
    return np.kron(a, b)


def partial_trace(rho, drop):
    """Trace out the qubits listed in `drop` (1-based).

    Parameters
    ----------
    rho : array_like, shape (..., 2**n, 2**n)
        Density matrix (or stack of them) on n = 2 or 3 qubits.
    drop : int or iterable of int
        Qubit labels to remove.

    Returns
    -------
    numpy.ndarray
        Reduced matrix over the kept qubits, in their original order.
    """
    rho = np.asarray(rho, dtype=complex)
    n = _n_qubits(rho.shape[-1])
    drop = {int(drop)} if np.isscalar(drop) else {int(d) for d in drop}
    if not drop or not drop <= set(range(1, n + 1)):
        raise DomainError(f"invalid subsystem set {sorted(drop)} for {n} qubits")
    if len(drop) == n:
        raise DomainError("cannot trace out every qubit")
    batch = rho.shape[:-2]
    t = rho.reshape(batch + (2,) * (2 * n))
    nb = len(batch)
    # trace highest labels first so remaining axis positions stay valid
    for q in sorted(drop, reverse=True):
        m = t.ndim - nb
        half = m // 2
        t = np.trace(t, axis1=nb + q - 1, axis2=nb + half + q - 1)
    d = 2 ** (n - len(drop))
    return t.reshape(batch + (d, d))


def partial_transpose(rho):
    """Transpose the second qubit of a two-qubit matrix (or stack)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[-2:] != (4, 4):
        raise UnsupportedDimensionError("partial_transpose expects 4x4 matrices")
    batch = rho.shape[:-2]
    t = rho.reshape(batch + (2, 2, 2, 2))
    return np.swapaxes(t, -3, -1).reshape(batch + (4, 4))


def is_hermitian(h, tol=HERMITIAN_TOL):
    h = np.asarray(h)
    return bool(np.max(np.abs(h - np.conj(np.swapaxes(h, -1, -2))), initial=0.0) <= tol)


def eigh_jacobi(h, tol=1e-13, max_sweeps=100, check=True):
    """Cyclic Jacobi diagonalization of Hermitian matrices.

    Works on a single matrix or a stack ``(..., n, n)``; every matrix in the
    stack is rotated with its own angles. A matrix stops being swept once its
    off-diagonal Frobenius norm is at most ``tol * max(1, ||h||_F)``, so each
    result is independent of the rest of the stack.

    Returns
    -------
    w : numpy.ndarray, shape (..., n)
        Eigenvalues in ascending order.
    v : numpy.ndarray, shape (..., n, n)
        Unitary whose columns are the matching eigenvectors.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim < 2 or h.shape[-1] != h.shape[-2]:
        raise DomainError("expected square matrices")
    if check and not is_hermitian(h, max(HERMITIAN_TOL, HERMITIAN_TOL * np.max(np.abs(h), initial=0.0))):
        raise DomainError("matrix is not Hermitian")
    n = h.shape[-1]
    batch = h.shape[:-2]
    a = h.reshape((-1, n, n)).copy()
    a = 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))
    v = np.broadcast_to(np.eye(n, dtype=complex), a.shape).copy()
    scale = np.maximum(1.0, np.linalg.norm(a, axis=(-2, -1)))
    offmask = ~np.eye(n, dtype=bool)

    for _ in range(max_sweeps + 1):
        off = np.sqrt(np.sum(np.abs(a[:, offmask]) ** 2, axis=-1))
        # converged matrices are frozen so results do not depend on batch-mates
        act = np.flatnonzero(off > tol * scale)
        if act.size == 0:
            break
        sub, subv, subscale = a[act], v[act], scale[act]
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = sub[:, p, q]
                r = np.abs(apq)
                # entries this small are already zero for any tolerance we use
                nz = r > 1e-100 * subscale
                rs = np.where(nz, r, 1.0)
                phase = np.where(nz, apq / rs, 1.0)
                tau = (sub[:, q, q].real - sub[:, p, p].real) / (2.0 * rs)
                sgn = np.where(tau >= 0.0, 1.0, -1.0)
                t = np.where(nz, sgn / (np.abs(tau) + np.hypot(1.0, tau)), 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # U = diag(1, conj(phase)) @ [[c, s], [-s, c]] on the (p, q) plane
                u = np.empty((sub.shape[0], 2, 2), dtype=complex)
                u[:, 0, 0] = c
                u[:, 0, 1] = s
                u[:, 1, 0] = -s * np.conj(phase)
                u[:, 1, 1] = c * np.conj(phase)
                idx = [p, q]
                sub[:, :, idx] = sub[:, :, idx] @ u
                sub[:, idx, :] = np.conj(np.swapaxes(u, -1, -2)) @ sub[:, idx, :]
                sub[:, p, q] = 0.0
                sub[:, q, p] = 0.0
                subv[:, :, idx] = subv[:, :, idx] @ u
        a[act] = sub
        v[act] = subv
    else:
        raise NumericError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    w = np.real(np.diagonal(a, axis1=-2, axis2=-1))
    order = np.argsort(w, axis=-1)
    w = np.take_along_axis(w, order, axis=-1)
    v = np.take_along_axis(v, order[:, None, :], axis=-1)
    return w.reshape(batch + (n,)), v.reshape(batch + (n, n))


def hermitian_eigenvalues(h, **kwargs):
    """Ascending real eigenvalues of a Hermitian matrix (or stack)."""
    return eigh_jacobi(h, **kwargs)[0]


def charpoly3(m):
    """Coefficients (a1, a2, a3) of ``x**3 + a1 x**2 + a2 x + a3`` for 3x3 `m`.

    Broadcasts over leading axes.
    """
    m = np.asarray(m, dtype=float)
    if m.shape[-2:] != (3, 3):
        raise UnsupportedDimensionError("charpoly3 expects 3x3 matrices")
    tr = np.trace(m, axis1=-2, axis2=-1)
    minors = (
        m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]
        + m[..., 0, 0] * m[..., 2, 2] - m[..., 0, 2] * m[..., 2, 0]
        + m[..., 1, 1] * m[..., 2, 2] - m[..., 1, 2] * m[..., 2, 1]
    )
    det = (
        m[..., 0, 0] * (m[..., 1, 1] * m[..., 2, 2] - m[..., 1, 2] * m[..., 2, 1])
        - m[..., 0, 1] * (m[..., 1, 0] * m[..., 2, 2] - m[..., 1, 2] * m[..., 2, 0])
        + m[..., 0, 2] * (m[..., 1, 0] * m[..., 2, 1] - m[..., 1, 1] * m[..., 2, 0])
    )
    return -tr, minors, -det


def _complete_basis(u, rank):
    # fill columns rank..2 of a 3x3 matrix with an orthonormal completion
    if rank == 3:
        return u
    if rank == 0:
        return np.eye(3)
    if rank == 1:
        e = np.eye(3)[np.argmin(np.abs(u[:, 0]))]
        w = e - (e @ u[:, 0]) * u[:, 0]
        u[:, 1] = w / np.linalg.norm(w)
    u[:, 2] = np.cross(u[:, 0], u[:, 1])
    return u


def svd3(r, tol=1e-15, max_sweeps=60):
    """Singular value decomposition of a real 3x3 matrix.

    The right factor diagonalizes ``r.T @ r``; it is found with one-sided
    (Hestenes) Jacobi rotations applied to the columns of `r`, which keeps
    small singular values accurate instead of square-rooting eigenvalues.

    Returns
    -------
    u : ndarray (3, 3)
        Orthogonal left factor.
    q : ndarray (3,)
        Singular values, descending and non-negative.
    v : ndarray (3, 3)
        Orthogonal right factor; the first nonzero entry of each column is
        positive. ``r == u @ diag(q) @ v.T``.
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3):
        raise UnsupportedDimensionError("svd3 expects a 3x3 matrix")
    a = r.copy()
    v = np.eye(3)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(2):
            for k in range(p + 1, 3):
                alpha = a[:, p] @ a[:, p]
                beta = a[:, k] @ a[:, k]
                gamma = a[:, p] @ a[:, k]
                if abs(gamma) <= tol * np.sqrt(alpha * beta) or gamma == 0.0:
                    continue
                rotated = True
                diff = beta - alpha
                if abs(diff) > 1e150 * abs(gamma):
                    # zeta would overflow; t -> 1 / (2 zeta)
                    t = gamma / diff
                else:
                    zeta = diff / (2.0 * gamma)
                    t = np.copysign(1.0, zeta) / (abs(zeta) + np.hypot(1.0, zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                rot = np.array([[c, s], [-s, c]])
                a[:, [p, k]] = a[:, [p, k]] @ rot
                v[:, [p, k]] = v[:, [p, k]] @ rot
        if not rotated:
            break

    q = np.linalg.norm(a, axis=0)
    order = np.argsort(-q, kind="stable")
    q, a, v = q[order], a[:, order], v[:, order]

    cutoff = 1e-300 + 1e-15 * q[0]
    rank = int(np.sum(q > cutoff))
    u = np.zeros((3, 3))
    u[:, :rank] = a[:, :rank] / q[:rank]
    q[rank:] = 0.0
    u = _complete_basis(u, rank)

    for j in range(3):
        nz = np.flatnonzero(np.abs(v[:, j]) > 1e-14)
        if nz.size and v[nz[0], j] < 0:
            v[:, j] = -v[:, j]
            u[:, j] = -u[:, j]
    return u, q, v
