"""Sample plans and verification reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

TOL_ISOMETRY = 1e-10
TOL_METRIC = 1e-6
TOL_LAMBDA = 1e-4
TOL_DECOMP = 1e-8
TOL_PROPER = 0.05


@dataclass(frozen=True)
class SamplePlan:
    """count points, uniform in the ball (radius u^{1/(2n)}), scaled by rmax."""

    count: int
    seed: int = 0
    rmax: float | None = None

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("sample count must be >= 1")
        if self.rmax is not None and not 0 < self.rmax < 1:
            raise ValueError("rmax must lie in (0, 1)")

    def points(self, n: int) -> np.ndarray:
        return sample_ball(n, self.count, self.seed, self.rmax)

    def to_json(self) -> dict:
        return {"count": self.count, "seed": self.seed, "rmax": self.rmax}


def sample_sphere(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    x = rng.standard_normal((count, 2 * n))
    x /= np.linalg.norm(x, axis=1)[:, None]
    return x[:, :n] + 1j * x[:, n:]


def sample_ball(n: int, count: int, seed: int, rmax: float | None = None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    u = sample_sphere(n, count, rng)
    r = rng.random(count) ** (1 / (2 * n))
    if rmax is not None:
        r = r * rmax
    return u * r[:, None]


def _plain(x):
    """JSON-ready copy: numpy scalars to Python, complex to [re, im]."""
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


@dataclass
class Report:
    check: str
    family: str
    params: dict
    plan: dict
    tolerance: float
    max_residual: float
    mean_residual: float
    witness_z: list = field(default_factory=list)
    aux: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tolerance)

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "family": self.family,
            "params": _plain(self.params),
            "plan": _plain(self.plan),
            "tolerance": float(self.tolerance),
            "max_residual": float(self.max_residual),
            "mean_residual": float(self.mean_residual),
            "pass": self.passed,
            "witness": {"z": _plain(self.witness_z), "aux": _plain(self.aux)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(", ", ": "))


def report_params(F) -> dict:
    """Family parameters with the source dimension in front."""
    return {"n": F.n, **{k: v for k, v in F.params.items() if k != "n"}}


def residual_report(check: str, F, plan: dict, tol: float, res: np.ndarray, Z: np.ndarray,
                    aux: dict | None = None) -> Report:
    """Report from per-sample residuals; max and mean taken in index order."""
    res = np.asarray(res, dtype=float)
    k = int(np.argmax(res))
    return Report(check, F.family, report_params(F), plan, tol, float(res[k]), float(np.mean(res)),
                  [complex(v) for v in Z[k]], aux or {})
