"""Dense complex linear algebra used throughout the package.

Determinants, minors, Pfaffians, indefinite-unitary tests, and the real
rank / kernel machinery used by the minimality and reduction checks.
All functions take and return numpy arrays and never mutate their inputs.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

SKEW_TOL = 1e-12
RANK_TOL = 1e-8


def _as_matrix(M, dtype=complex) -> np.ndarray:
    A = np.asarray(M, dtype=dtype)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-d matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def det_cofactor(M) -> complex:
    """Determinant by Laplace expansion along the first row."""
    A = _as_matrix(M)
    n, m = A.shape
    if n != m:
        raise ValueError(f"determinant of non-square {n}x{m} matrix")
    return _cofactor(A)


def _cofactor(A: np.ndarray) -> complex:
    n = A.shape[0]
    if n == 1:
        return complex(A[0, 0])
    if n == 2:
        return complex(A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0])
    total = 0j
    cols = np.arange(n)
    for j in range(n):
        if A[0, j] == 0:
            continue
        sub = A[1:, cols != j]
        total += (-1) ** j * A[0, j] * _cofactor(sub)
    return complex(total)


def det_lu(M) -> complex:
    """Determinant by Gaussian elimination with partial pivoting."""
    A = _as_matrix(M).copy()
    n, m = A.shape
    if n != m:
        raise ValueError(f"determinant of non-square {n}x{m} matrix")
    sign = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if A[p, k] == 0:
            return 0j
        if p != k:
            A[[k, p]] = A[[p, k]]
            sign = -sign
        A[k + 1:, k:] -= np.outer(A[k + 1:, k] / A[k, k], A[k, k:])
    return complex(sign * np.prod(np.diag(A)))


def det(M) -> complex:
    """Determinant: cofactor expansion up to 4x4, LU with pivoting above."""
    A = _as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"determinant of non-square {A.shape[0]}x{A.shape[1]} matrix")
    if A.shape[0] <= 4:
        return _cofactor(A)
    return det_lu(A)


def _check_indices(idx, bound: int, what: str) -> list[int]:
    idx = [int(i) for i in idx]
    if not idx:
        raise ValueError(f"empty {what} index list")
    if any(i < 0 or i >= bound for i in idx):
        raise ValueError(f"{what} index out of range 0..{bound - 1}: {idx}")
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError(f"{what} indices must be strictly increasing: {idx}")
    return idx


def minor_det(Z, rows, cols) -> complex:
    """Determinant of the submatrix of Z on the given rows and columns."""
    A = _as_matrix(Z)
    r = _check_indices(rows, A.shape[0], "row")
    c = _check_indices(cols, A.shape[1], "column")
    if len(r) != len(c):
        raise ValueError(f"row/column index lists differ in length: {len(r)} vs {len(c)}")
    return det(A[np.ix_(r, c)])


def cayley_det_expansion(Z) -> float:
    """det(I_p - Z Z^*) for p x q Z (p <= q) as an alternating sum of
    squared moduli of all k x k minors.
    """
    A = _as_matrix(Z)
    p, q = A.shape
    if p > q:
        raise ValueError(f"expansion needs p <= q, got {p}x{q}")
    total = 1.0
    for k in range(1, p + 1):
        s = 0.0
        for rows in combinations(range(p), k):
            for cols in combinations(range(q), k):
                s += abs(det(A[np.ix_(rows, cols)])) ** 2
        total += (-1) ** k * s
    return total


def pfaffian(A) -> complex:
    """Pfaffian of a skew-symmetric matrix by expansion along the first row.

    The input is symmetrized to (A - A^T)/2 first; asymmetry above
    ``SKEW_TOL`` is rejected.  Odd order gives exactly 0.
    """
    M = _as_matrix(A)
    n, m = M.shape
    if n != m:
        raise ValueError(f"Pfaffian of non-square {n}x{m} matrix")
    asym = float(np.max(np.abs(M + M.T)))
    if asym > SKEW_TOL:
        raise ValueError(f"matrix is not skew-symmetric (max |A + A^T| = {asym:.3e})")
    if n % 2:
        return 0j
    return _pf((M - M.T) / 2)


def _pf(A: np.ndarray) -> complex:
    n = A.shape[0]
    if n == 0:
        return 1 + 0j
    if n == 2:
        return complex(A[0, 1])
    total = 0j
    keep = np.ones(n, dtype=bool)
    keep[0] = False
    for j in range(1, n):
        if A[0, j] == 0:
            continue
        keep[j] = False
        # 0-based column j carries sign (-1)^(j+1)
        total += (-1) ** (j + 1) * A[0, j] * _pf(A[np.ix_(keep, keep)])
        keep[j] = True
    return complex(total)


def signature_matrix(p: int, q: int) -> np.ndarray:
    return np.diag(np.r_[np.ones(p), -np.ones(q)])


def is_J_unitary(U, p: int, q: int, tol: float = 1e-10) -> bool:
    """True iff ||U J U^* - J||_inf <= tol with J = diag(I_p, -I_q)."""
    M = _as_matrix(U)
    if M.shape != (p + q, p + q):
        raise ValueError(f"expected a {(p + q)}x{(p + q)} matrix, got {M.shape}")
    J = signature_matrix(p, q)
    return bool(np.max(np.abs(M @ J @ M.conj().T - J)) <= tol)


def jacobi_svd(C, sweeps: int = 60, eps: float = 1e-15):
    """One-sided (Hestenes) Jacobi SVD of a real matrix.

    Returns ``(sigma, V)`` with the singular values in descending order and
    the matching right singular vectors as the columns of ``V``.  Column
    pairs are swept in fixed cyclic order, so the result is reproducible.
    """
    A = np.array(C, dtype=float, copy=True)
    if A.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    n = A.shape[1]
    V = np.eye(n)
    for _ in range(sweeps):
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                ai, aj = A[:, i], A[:, j]
                alpha = ai @ ai
                beta = aj @ aj
                gamma = ai @ aj
                if abs(gamma) <= eps * np.sqrt(alpha * beta) or gamma == 0:
                    continue
                rotated = True
                # tan of the rotation angle, written so nothing overflows
                d = beta - alpha
                t = (1.0 if d >= 0 else -1.0) * 2 * gamma / (abs(d) + np.hypot(d, 2 * gamma))
                c = 1 / np.sqrt(1 + t * t)
                s = c * t
                A[:, [i, j]] = np.column_stack((c * ai - s * aj, s * ai + c * aj))
                V[:, [i, j]] = np.column_stack((c * V[:, i] - s * V[:, j], s * V[:, i] + c * V[:, j]))
        if not rotated:
            break
    sigma = np.linalg.norm(A, axis=0)
    order = np.argsort(-sigma, kind="stable")
    return sigma[order], V[:, order]


def real_rank(C, tol: float = RANK_TOL) -> int:
    """Number of singular values above ``tol * sigma_max``."""
    A = np.asarray(C, dtype=float)
    if A.size == 0:
        return 0
    sigma, _ = jacobi_svd(A)
    if sigma[0] == 0:
        return 0
    return int(np.sum(sigma > tol * sigma[0]))


def real_kernel_vector(C, tol: float = RANK_TOL) -> np.ndarray | None:
    """A unit real vector annihilated by C, or None if C has full column rank.

    The sign is fixed so that the largest-magnitude entry is positive.
    """
    A = np.asarray(C, dtype=float)
    if A.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    sigma, V = jacobi_svd(A)
    scale = float(np.max(np.abs(A))) if A.size else 0.0
    if scale == 0:
        v = np.zeros(A.shape[1])
        v[-1] = 1.0
        return v
    if sigma[-1] > tol * sigma[0]:
        return None
    v = V[:, -1] / np.linalg.norm(V[:, -1])
    k = int(np.argmax(np.abs(v)))
    if v[k] < 0:
        v = -v
    if np.max(np.abs(A @ v)) > 1e-9 * scale:
        return None
    return v


def extend_orthonormal(v) -> np.ndarray:
    """Real orthogonal matrix whose last column is the unit vector v.

    The other columns come from Gram-Schmidt (two passes) on the standard
    basis vectors, taken in order.
    """
    v = np.asarray(v, dtype=float).ravel()
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("cannot extend the zero vector")
    if abs(norm - 1) > 1e-12:
        raise ValueError(f"vector must have unit norm, got {norm!r}")
    m = v.size
    basis = [v]
    for i in range(m):
        if len(basis) == m:
            break
        w = np.zeros(m)
        w[i] = 1.0
        for _ in range(2):
            for b in basis:
                w = w - (b @ w) * b
        nw = np.linalg.norm(w)
        if nw > 1e-6:
            basis.append(w / nw)
    if len(basis) != m:
        raise RuntimeError("orthonormal completion failed")
    return np.column_stack(basis[1:] + [v])


def nearest_unitary_rows(W) -> np.ndarray:
    """Polar projection of a k x m (k <= m) matrix onto matrices with
    orthonormal rows."""
    U, _, Vh = np.linalg.svd(np.asarray(W, dtype=complex), full_matrices=False)
    return U @ Vh


def complete_unitary(W) -> np.ndarray:
    """Append rows to a k x m matrix with orthonormal rows to get an m x m
    unitary matrix."""
    W = np.asarray(W, dtype=complex)
    k, m = W.shape
    if k == m:
        return W.copy()
    _, _, Vh = np.linalg.svd(W, full_matrices=True)
    comp = Vh[k:]
    return np.vstack([W, comp])
