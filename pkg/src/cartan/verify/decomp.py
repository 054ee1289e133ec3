"""Unitary decompositions of isometries into D^IV_m, the quadratic relation
they imply, and the rank certificate / reduction for non-minimal maps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..domains import homogeneous_lift_IV
from ..linalg import (
    RANK_TOL,
    complete_unitary,
    extend_orthonormal,
    nearest_unitary_rows,
    real_kernel_vector,
    real_rank,
)
from ..mapzoo.core import HoloMap, _canon, leading_components, rotate
from ..polytable import PolyTable
from .checks import isometry_residual
from .report import TOL_DECOMP, TOL_ISOMETRY, Report, SamplePlan, report_params, sample_ball

FIT_RMAX = 0.7
H_ZERO_TOL = 1e-12
CLASSIFY_TOL = 1e-7
VANISH_TOL = 1e-9


class DecompositionError(ValueError):
    pass


@dataclass
class DAngeloDecomposition:
    """(z_1, ..., z_n, h, 0, ..., 0) V = F with h = sum F_i^2 / 2 and V unitary."""

    F: HoloMap
    V: np.ndarray
    residual: float
    h_zero: bool

    @property
    def n(self) -> int:
        return self.F.n

    @property
    def m(self) -> int:
        return self.V.shape[0]

    def h(self, Z: np.ndarray) -> np.ndarray:
        W = self.F.evaluate_coords(Z)
        return 0.5 * np.sum(W * W, axis=1)


def _require_type_iv(F):
    if F.target.kind != "IV":
        raise ValueError("this check applies to maps into D^IV_m")


def dangelo_solve(F: HoloMap, seed: int = 0, samples: int | None = None) -> DAngeloDecomposition:
    _require_type_iv(F)
    m, n = F.target.dims[0], F.n
    gate = isometry_residual(F, SamplePlan(200, seed + 1))
    if not gate.passed:
        raise DecompositionError(
            f"{F.family} fails the isometry gate (residual {gate.max_residual:.3e})"
        )
    N = samples or max(4 * m * m, 64)
    Z = sample_ball(n, N, seed, FIT_RMAX)
    W = F.evaluate_coords(Z)
    h = 0.5 * np.sum(W * W, axis=1)
    h_zero = bool(np.max(np.abs(h)) <= H_ZERO_TOL)
    L = Z if h_zero else np.column_stack([Z, h])
    cond = np.linalg.cond(L)
    if cond > 1e8:
        raise DecompositionError(f"ill-conditioned fit (condition number {cond:.2e})")
    rows, *_ = np.linalg.lstsq(L, W, rcond=None)
    V = complete_unitary(nearest_unitary_rows(rows))
    residual = float(np.max(np.abs(L @ V[: L.shape[1]] - W)))
    if residual > TOL_DECOMP:
        raise DecompositionError(f"reconstruction residual {residual:.3e} above {TOL_DECOMP}")
    return DAngeloDecomposition(F, V, residual, h_zero)


@dataclass
class QuadraticData:
    """a h^2 + (p - 2) h + q = 0 with p linear and q quadratic."""

    a: complex
    p: PolyTable
    q: PolyTable
    tag: str
    relation_residual: float


def quadratic_classify(D: DAngeloDecomposition, seed: int = 7, count: int = 200) -> QuadraticData:
    n, m = D.n, D.m
    V = D.V
    u1 = V[n] if not D.h_zero else np.zeros(m)
    U = V[:n]  # row i-1 holds u_{i+1, j}
    a = complex(np.sum(u1 * u1))
    z = [PolyTable.var(n, i) for i in range(n)]
    L = []
    for j in range(m):
        Lj = PolyTable.zero(n)
        for i in range(n):
            Lj = Lj + z[i] * U[i, j]
        L.append(Lj)
    p = PolyTable.zero(n)
    q = PolyTable.zero(n)
    for j in range(m):
        p = p + L[j] * (2 * u1[j])
        q = q + L[j] * L[j]
    # fresh points, away from the fit sample
    Z = sample_ball(n, count, seed, FIT_RMAX)
    h = D.h(Z)
    pv, qv = p(Z), q(Z)
    rel = float(np.max(np.abs(a * h * h + (pv - 2) * h + qv)))
    if D.h_zero:
        tag = "h_zero_linear" if np.max(np.abs(qv)) <= CLASSIFY_TOL else "inconsistent"
    elif abs(a) <= CLASSIFY_TOL and np.max(np.abs(h - qv / (2 - pv))) <= CLASSIFY_TOL:
        tag = "a_zero_degree2"
    else:
        tag = "inconsistent"
    return QuadraticData(a, p, q, tag, rel)


def _common_denominator(F, Z: np.ndarray) -> np.ndarray | None:
    comps = getattr(F, "components", None)
    if comps is None:
        return None
    canon = []
    for c in comps:
        for d in (c.den, c.rad_den):
            if d is not None and d.degree > 0:
                cd, _ = _canon(d)
                if not any(x.allclose(cd, 1e-13) for x in canon):
                    canon.append(cd)
    out = np.ones(len(Z), dtype=complex)
    for cd in canon:
        out = out * cd(Z)
    return out


def lift_samples(F, Z: np.ndarray) -> tuple[np.ndarray, str]:
    """xi(F(z)) with the map's denominators cleared where known."""
    xi = homogeneous_lift_IV(F.evaluate_coords(Z))
    den = _common_denominator(F, Z)
    if den is None:
        return xi, "sampling-certified"
    return xi * den[:, None], "denominator-cleared"


def minimality_rank(F, plan: SamplePlan, tol: float = RANK_TOL) -> Report:
    """Real rank of the m+2 homogeneous-lift components, sampled."""
    _require_type_iv(F)
    m, n = F.target.dims[0], F.n
    if m <= n:
        raise ValueError(f"no proper maps from B^{n} into D^IV_{m} with m <= n")
    if plan.count < 4 * (m + 2):
        raise ValueError(f"need at least {4 * (m + 2)} samples")
    Z = plan.points(n)
    G, how = lift_samples(F, Z)
    C = np.vstack([G.real, G.imag])
    r = real_rank(C, tol)
    full = r == m + 2
    aux = {"rank": r, "columns": m + 2, "full": full, "certificate": how}
    return Report("minimality", F.family, report_params(F), plan.to_json(), 0.0,
                  float(m + 2 - r), float(m + 2 - r), [], aux)


def reduce_nonminimal(F: HoloMap, seed: int = 0):
    """(C, G) with F C = (G, ~0) for a real orthogonal C, or None."""
    _require_type_iv(F)
    m, n = F.target.dims[0], F.n
    if m <= 2:
        return None
    D = dangelo_solve(F, seed)
    k = n if D.h_zero else n + 1
    rows = D.V[:k]
    v = real_kernel_vector(np.vstack([rows.real, rows.imag]))
    if v is None:
        return None
    C = extend_orthonormal(v)
    FC = rotate(F, C)
    Z = sample_ball(n, 500, seed + 2)
    last = float(np.max(np.abs(FC.components[-1].evaluate(Z))))
    if last > VANISH_TOL:
        return None
    G = leading_components(FC, m - 1)
    if not isometry_residual(G, SamplePlan(1000, seed + 3), TOL_ISOMETRY).passed:
        return None
    return C, G
