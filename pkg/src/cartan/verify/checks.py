"""Pointwise checks: the defect functional equation, metric pullback,
properness probes and degree bounds."""

from __future__ import annotations

import numpy as np

from ..domains import ball_metric_exact, boundary_defect, from_coords, metric
from ..mapzoo.core import PoleError, BranchError, degree
from .report import (
    report_params,
    TOL_ISOMETRY,
    TOL_METRIC,
    TOL_PROPER,
    Report,
    SamplePlan,
    residual_report,
    sample_sphere,
)

JAC_STEP = 1e-5
METRIC_RMAX = 0.8


class BasePointError(ValueError):
    """The map does not send 0 to 0."""


def _check_origin(F, tol: float = 1e-12):
    w = F.origin_value()
    if np.max(np.abs(w)) > tol:
        raise BasePointError(
            f"{F.family} moves the origin (|F(0)| = {np.max(np.abs(w)):.3e}); "
            "compose with automorphisms so that F(0) = 0 first"
        )


def image_defect(F, Z: np.ndarray) -> np.ndarray:
    return boundary_defect(F.target, from_coords(F.target, F.evaluate_coords(Z)))


def reference_defect(F, Z: np.ndarray, relative: bool) -> np.ndarray:
    """(1 - |z|^2)^e, or (1 - sum |g_i|^2)^e against the base map g."""
    if relative:
        if getattr(F, "base", None) is None:
            raise ValueError(f"{F.family} has no base map for a relative check")
        G = F.base.evaluate_coords(Z)
        s = 1 - np.sum(np.abs(G) ** 2, axis=1)
    else:
        s = 1 - np.sum(np.abs(Z) ** 2, axis=1)
    return s ** F.exponent


def isometry_residual(F, plan: SamplePlan, tol: float = TOL_ISOMETRY, relative: bool = False) -> Report:
    """max |defect(F(z)) - (1 - |z|^2)^e| over the plan's samples.

    With ``relative`` the reference is (1 - sum |g_i(z)|^2)^e for the base map g.
    """
    _check_origin(F)
    Z = plan.points(F.n)
    res = np.abs(image_defect(F, Z) - reference_defect(F, Z, relative))
    check = "isometry_relative" if relative else "isometry"
    return residual_report(check, F, plan.to_json(), tol, res, Z, {"exponent": F.exponent})


def jacobian(F, z: np.ndarray, step: float = JAC_STEP) -> np.ndarray:
    """J[i, a] = dF_a/dz_i by central differences along the real axes (F holomorphic)."""
    n = F.n
    E = np.eye(n) * step
    P = np.vstack([z + E, z - E])
    W = F.evaluate_coords(P)
    return (W[:n] - W[n:]) / (2 * step)


def pullback_metric(F, z: np.ndarray, h: float = 1e-4) -> np.ndarray:
    J = jacobian(F, z)
    w = F.evaluate_coords(z[None])[0]
    g = metric(F.target, from_coords(F.target, w), h)
    return J @ g @ J.conj().T


def expected_lambda(F) -> float:
    return F.target.genus * F.exponent / (F.n + 1)


def metric_pullback(F, plan: SamplePlan, h: float = 1e-4, tol: float = TOL_METRIC) -> Report:
    """Relative deviation of F*g_target from lambda * g_ball, lambda fit at 0."""
    rmax = plan.rmax if plan.rmax is not None else METRIC_RMAX
    if rmax > METRIC_RMAX + 1e-12:
        raise ValueError(f"metric samples must stay within radius {METRIC_RMAX}")
    plan = SamplePlan(plan.count, plan.seed, rmax)
    n = F.n
    z0 = np.zeros(n, dtype=complex)
    A0 = pullback_metric(F, z0, h)
    B0 = ball_metric_exact(n, z0)
    lam = float(np.real(np.vdot(B0, A0)) / np.real(np.vdot(B0, B0)))
    Z = plan.points(n)
    res = np.empty(len(Z))
    for i, z in enumerate(Z):
        A = pullback_metric(F, z, h)
        B = lam * ball_metric_exact(n, z)
        res[i] = np.linalg.norm(A - B) / np.linalg.norm(B)
    lam_exp = expected_lambda(F)
    aux = {"lambda": lam, "lambda_expected": lam_exp,
           "lambda_rel_error": abs(lam - lam_exp) / lam_exp, "step": h}
    return residual_report("metric", F, plan.to_json(), tol, res, Z, aux)


DEFAULT_T_GRID = (0.5, 0.9, 0.99, 0.995, 0.999)


def properness_probe(F, directions: int = 64, t_grid=DEFAULT_T_GRID, seed: int = 0,
                     tol: float = TOL_PROPER) -> Report:
    """defect(F(t u)) along random boundary directions u.

    A direction passes when the final defect is below tol and the last three
    values decrease.  A failing direction scores max(final defect, 1).
    """
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size < 2 or np.any(np.diff(t) <= 0) or t[0] <= 0 or t[-1] >= 1:
        raise ValueError("t grid must be increasing inside (0, 1)")
    U = sample_sphere(F.n, directions, np.random.default_rng(seed))
    scores = np.empty(directions)
    table = []
    singular = []
    tail = min(3, t.size)
    for k, u in enumerate(U):
        try:
            d = image_defect(F, t[:, None] * u[None, :])
        except (PoleError, BranchError) as exc:
            singular.append({"direction": k, "error": str(exc)})
            scores[k] = 1.0
            table.append(None)
            continue
        table.append(d)
        decreasing = bool(np.all(np.diff(d[-tail:]) < 0))
        scores[k] = d[-1] if decreasing else max(d[-1], 1.0)
    k = int(np.argmax(scores))
    aux = {"t_grid": list(t), "worst_defects": None if table[k] is None else list(table[k]),
           "singular": singular}
    plan = {"count": directions, "seed": seed, "rmax": float(t[-1])}
    return Report("proper", F.family, report_params(F), plan, tol, float(scores[k]),
                  float(np.mean(scores)), [complex(v) for v in U[k] * t[-1]], aux)


def degree_check(F, plan: SamplePlan | None = None, tol: float = TOL_ISOMETRY) -> Report:
    """deg F in {1, 2}, deg F = 2 when m < 2n, and degree-1 maps in the
    isotropic linear normal form (F F^t = 0, |F|^2 = |z|^2)."""
    if F.target.kind != "IV":
        raise ValueError("degree bounds are stated for type IV targets")
    m, n = F.target.dims[0], F.n
    if not m >= n + 1 >= 3:
        raise ValueError(f"degree bounds need m >= n + 1 >= 3 (m = {m}, n = {n})")
    _check_origin(F)
    d = degree(F)
    plan = plan or SamplePlan(1000, 0)
    Z = plan.points(n)
    violations = []
    if d not in (1, 2):
        violations.append(f"degree {d} outside {{1, 2}}")
    if m < 2 * n and d != 2:
        violations.append(f"degree {d} but m = {m} < 2n forces degree 2")
    res = np.zeros(len(Z))
    if d == 1:
        W = F.evaluate_coords(Z)
        res = np.maximum(np.abs(np.sum(W * W, axis=1)),
                         np.abs(np.sum(np.abs(W) ** 2, axis=1) - np.sum(np.abs(Z) ** 2, axis=1)))
    if violations:
        res = np.maximum(res, 1.0)
    aux = {"degree": d, "violations": violations}
    return residual_report("degree", F, plan.to_json(), tol, res, Z, aux)
