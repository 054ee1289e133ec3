"""Algebraic obstructions: perfect squares and diagonal congruence under U(n, 1)."""

from __future__ import annotations

from dataclasses import dataclass
from math import cos

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize

from ..polytable import PolyTable, sqrt_series

SQUARE_TOL = 1e-10
SEARCH_FLOOR = 0.01
UNDECIDED = "undecided"


def _shift_point(nvars: int, k: int) -> np.ndarray:
    # fixed, irrational-looking points of moderate size; deterministic
    return np.array([((j + 1) * 0.6180339887 * (k + 1)) % 1 * 0.5 + 0.5 for j in range(nvars)])


def perfect_square_test(P: PolyTable, tol: float = SQUARE_TOL) -> bool:
    """True iff P = c * Q^2 for a polynomial Q (c absorbs the leading scalar).

    P is moved so that it does not vanish at the origin, normalized to
    constant term 1, and its series square root up to degree deg(P)/2 is
    squared and compared coefficientwise, relative to the largest
    coefficient of the normalized P.
    """
    if P.is_zero():
        return True
    d = P.degree
    if d % 2:
        return False
    if d == 0:
        return True
    if abs(P.constant_term()) < 1e-8 * P.max_abs_coeff():
        best = None
        for k in range(8):
            S = P.shift(_shift_point(P.nvars, k))
            ratio = abs(S.constant_term()) / S.max_abs_coeff()
            if best is None or ratio > best[0]:
                best = (ratio, S)
        if best[0] < 1e-8:
            raise ValueError("could not find a point where P is nonzero")
        P = best[1]
    P = P * (1 / P.constant_term())
    Q = sqrt_series(P, d // 2)
    diff = Q * Q - P
    return diff.max_abs_coeff() <= tol * P.max_abs_coeff()


def one_minus_sum_squares(polys) -> PolyTable:
    n = polys[0].nvars
    out = PolyTable.constant(n, 1.0)
    for f in polys:
        out = out - f * f
    return out


def H_theta(n: int, theta: float) -> PolyTable:
    """s^2 - cos(2 theta) z_1^2 - sum_{j>=2} z_j^2 in the variables (z_1, ..., z_n, s)."""
    v = [PolyTable.var(n + 1, i) for i in range(n + 1)]
    out = v[n] * v[n] - v[0] * v[0] * cos(2 * theta)
    for j in range(1, n):
        out = out - v[j] * v[j]
    return out


def spectrum_theta(n: int, theta: float) -> np.ndarray:
    """diag(cos 2theta, 1, ..., 1, -1) of size n+1, so that H_theta = -(z, s) A (z, s)^t."""
    return np.r_[cos(2 * theta), np.ones(n - 1), -1.0]


def congruence_criterion(lam: float, lams) -> bool | str:
    """False when |lam| < |lam_1| <= ... <= |lam_{n+1}|: then no U in U(n, 1)
    and complex c give U diag(lam, lam_2, ...) U^t = c diag(lam_1, lam_2, ...).
    Otherwise the obstruction says nothing and UNDECIDED is returned."""
    mods = [abs(float(x)) for x in lams]
    if len(mods) < 2:
        raise ValueError("need at least two spectral values lam_1, ..., lam_{n+1}")
    if abs(float(lam)) < mods[0] and all(a <= b for a, b in zip(mods, mods[1:])):
        return False
    return UNDECIDED


def _J(k: int) -> np.ndarray:
    return np.diag(np.r_[np.ones(k - 1), -1.0])


def _unpack(x: np.ndarray, k: int) -> np.ndarray:
    """Anti-Hermitian K from k^2 real parameters."""
    K = np.zeros((k, k), dtype=complex)
    iu = np.triu_indices(k, 1)
    t = len(iu[0])
    K[iu] = x[:t] + 1j * x[t:2 * t]
    K = K - K.conj().T
    K[np.diag_indices(k)] = 1j * x[2 * t:]
    return K


def u_n1_element(x: np.ndarray, k: int) -> np.ndarray:
    """expm(K J) with K anti-Hermitian; preserves J = diag(1, ..., 1, -1)."""
    return expm(_unpack(x, k) @ _J(k))


def congruence_residual(U: np.ndarray, A: np.ndarray, B: np.ndarray) -> tuple[float, complex]:
    """min over c of ||U A U^t - c B||_F, with c in closed form."""
    M = U @ A @ U.T
    c = np.vdot(B, M) / np.vdot(B, B)
    return float(np.linalg.norm(M - c * B)), complex(c)


@dataclass
class SearchResult:
    best_residual: float
    c: complex
    U: np.ndarray
    restarts: int
    iters: int
    seed: int


def congruence_search(A, B, trials: int = 50, iters: int = 500, seed: int = 0,
                      scale: float = 1.0) -> SearchResult:
    """Numerical search for U in U(n, 1), c in C with U A U^t = c B.

    Nelder-Mead over the generator of U, restarted from the identity and then
    from random generators.  A large best residual is evidence, not proof.
    """
    A = np.diag(np.asarray(A, dtype=float)) if np.ndim(A) == 1 else np.asarray(A, dtype=float)
    B = np.diag(np.asarray(B, dtype=float)) if np.ndim(B) == 1 else np.asarray(B, dtype=float)
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise ValueError("A and B must be square of the same size")
    k = A.shape[0]
    rng = np.random.default_rng(seed)

    def f(x):
        return congruence_residual(u_n1_element(x, k), A, B)[0]

    best_x = np.zeros(k * k)
    best = f(best_x)
    ran = 0
    for r in range(trials):
        ran += 1
        x0 = np.zeros(k * k) if r == 0 else rng.standard_normal(k * k) * scale
        out = minimize(f, x0, method="Nelder-Mead",
                       options={"maxiter": iters, "xatol": 1e-12, "fatol": 1e-14})
        if out.fun < best:
            best, best_x = float(out.fun), out.x
        if best == 0.0:
            break
    U = u_n1_element(best_x, k)
    res, c = congruence_residual(U, A, B)
    return SearchResult(res, c, U, ran, iters, seed)
