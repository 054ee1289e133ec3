"""Family registry: JSON descriptors to maps, the family listing, and the
standard isometry suite."""

from __future__ import annotations

from math import pi

import numpy as np

from . import mapzoo as mz
from .domains import DomainSpec

Q = pi / 4


class DescriptorError(ValueError):
    """A family descriptor that cannot be built."""


def build_generator(desc: dict):
    try:
        kind = desc["kind"]
        return mz.ball_proper_generators(kind, int(desc["n"]), desc.get("d"),
                                         desc.get("exponents"), desc.get("coeffs"))
    except KeyError as exc:
        raise DescriptorError(f"generator descriptor lacks {exc}") from None


def _dims(p: dict):
    d = p["dims"]
    return tuple(d) if isinstance(d, (list, tuple)) else (int(d),)


_BUILDERS = {
    "R_n+k": lambda p: mz.build_R(p["n"], p["k"], p["thetas"]),
    "I_n+k": lambda p: mz.build_I(p["n"], p["k"], p["thetas"], p.get("alpha")),
    "I_family4": lambda p: mz.build_I_family4(p["n"], p["k"], p["theta"], p.get("beta"), p.get("alpha")),
    "R_I_canonical": lambda p: mz.build_canonical("I", _dims(p)),
    "R_II_canonical": lambda p: mz.build_canonical("II", _dims(p)),
    "R_III_canonical": lambda p: mz.build_canonical("III", _dims(p)),
    "R_IV_canonical": lambda p: mz.build_canonical("IV", _dims(p)),
    "I_IV_canonical": lambda p: mz.build_canonical("IV_I", _dims(p)),
    "H_G": lambda p: mz.build_HG(p["type"], _dims(p), build_generator(p["G"])),
    "W_G": lambda p: mz.build_WG(int(p["m"]), build_generator(p["G"])),
    "M_NkF": lambda p: mz.build_MNk(build_generator(p["F"]), p["k"], p.get("theta")),
    "poly_isometry": lambda p: mz.build_polynomial_isometry(p["type"], _dims(p)),
    "linear_2n": lambda p: mz.linear_embedding_2n(p["n"]),
    "identity": lambda p: mz.identity_map(p["n"]),
    "whitney": lambda p: mz.whitney_map(p["n"]),
    "homogeneous": lambda p: mz.homogeneous_map(p["n"], p["d"]),
    "monomial": lambda p: mz.monomial_map(p["n"], p["exponents"], p["coeffs"]),
}

# name, topic, source, target, parameter ranges
CATALOG = [
    ("R_n+k", "rational isometries into type IV", "B^n", "D^IV_{n+k}",
     "2 <= k <= n+2; thetas in (0, pi/4], k-1 of them (n-1 for k=n+1, n for k=n+2, not all pi/4)"),
    ("I_n+k", "radical isometries into type IV", "B^n", "D^IV_{n+k}",
     "2 <= k <= n+2; thetas in (0, pi/4]; k >= n+1 not all pi/4; k = n+2 adds alpha in (0, pi/4)"),
    ("I_family4", "one-parameter inequivalent families", "B^n", "D^IV_{n+k}",
     "n >= 2; k = 2: theta in (0, pi/4]; k >= 3: 0 < beta <= theta <= pi/4, beta < pi/4; "
     "k = n+2: alpha in (0, pi/4)"),
    ("R_I_canonical", "canonical isometry, type I", "B^{p+q-1}", "D^I_{p,q}", "q >= p >= 2"),
    ("R_II_canonical", "canonical isometry, type II (defect exponent 2)", "B^{2m-3}", "D^II_m", "m >= 3"),
    ("R_III_canonical", "canonical isometry, type III", "B^m", "D^III_m", "m >= 2"),
    ("R_IV_canonical", "canonical rational isometry, type IV", "B^m", "D^IV_{m+1}", "m >= 2"),
    ("I_IV_canonical", "canonical radical isometry, type IV", "B^m", "D^IV_{m+1}", "m >= 2"),
    ("H_G", "proper maps built from a ball map G", "B^n", "D^I_{p,q} / D^II_m / D^III_m / D^IV_{m+1}",
     "G polynomial, G(0) = 0, with p+q-1 / 2m-3 / m / m components"),
    ("W_G", "radical proper maps built from G", "B^n", "D^IV_{m+1}", "G: B^n -> B^m polynomial, m >= n"),
    ("M_NkF", "proper maps from real monomial ball maps", "B^n", "D^IV_{N+k}",
     "F monomial with real coefficients; 1 <= k <= N+1; theta in (0, pi/4) for k >= 2"),
    ("poly_isometry", "polynomial isometries (sliced canonical maps)", "B^{n_Omega - 1}",
     "D^I_{p,q} / D^II_n / D^III_n / D^IV_{n+1}", "q >= p >= 2; n >= 4 (II); n >= 2 (III, IV)"),
    ("linear_2n", "isotropic linear isometry", "B^n", "D^IV_{2n}", "n >= 1"),
    ("identity", "ball generator", "B^n", "B^n", "n >= 1"),
    ("whitney", "ball generator", "B^n", "B^{2n-1}", "n >= 1"),
    ("homogeneous", "ball generator", "B^n", "B^{C(n+d-1, d)}", "n, d >= 1"),
    ("monomial", "ball generator", "B^n", "B^N", "distinct monomials, real coefficients"),
    ("gap", "utility: gap intervals K(n), I_k", "-", "-", "n >= 3"),
]


def list_families() -> list[dict]:
    return [{"family": a, "topic": b, "source": c, "target": d, "params": e} for a, b, c, d, e in CATALOG]


def build_from_descriptor(desc: dict):
    """Map from {family, n?, target?, params, exponent?, pad?}."""
    if not isinstance(desc, dict) or "family" not in desc:
        raise DescriptorError("descriptor must be an object with a 'family' field")
    fam = desc["family"]
    if fam not in _BUILDERS:
        raise DescriptorError(f"unknown family {fam!r}")
    params = dict(desc.get("params", {}))
    if "n" in desc:
        params.setdefault("n", desc["n"])
    try:
        F = _BUILDERS[fam](params)
    except KeyError as exc:
        raise DescriptorError(f"{fam}: missing parameter {exc}") from None
    except (TypeError, ValueError) as exc:
        raise DescriptorError(f"{fam}: {exc}") from None
    if "exponent" in desc:
        F = F.with_exponent(int(desc["exponent"]))
    if desc.get("pad"):
        F = mz.pad_zero(F, int(desc["pad"]))
    if desc.get("rotation_seed") is not None:
        m = F.target.dims[0]
        Qm, _ = np.linalg.qr(np.random.default_rng(int(desc["rotation_seed"])).standard_normal((m, m)))
        F = mz.rotate(F, Qm)
    if "target" in desc and DomainSpec.from_json(desc["target"]) != F.target:
        raise DescriptorError(f"{fam}: declared target {desc['target']} but the map lands in {F.target}")
    return F


def _R(n, k, th):
    return {"family": "R_n+k", "params": {"n": n, "k": k, "thetas": th}}


def _I(n, k, th, alpha=None):
    p = {"n": n, "k": k, "thetas": th}
    if alpha is not None:
        p["alpha"] = alpha
    return {"family": "I_n+k", "params": p}


def _angle_lists(count: int, needs_not_all_quarter: bool):
    out = [[pi / 6] * count]
    if needs_not_all_quarter:
        out.append([pi / 6] + [Q] * (count - 1))
    else:
        out.append([Q] * count)
    return out


def isometry_suite_descriptors() -> list[dict]:
    """Every shipped isometric family at the parameters of the standard sweep."""
    out: list[dict] = []
    for n in (2, 3, 4):
        for k in range(2, n + 3):
            if k <= n:
                r_count, i_count = k - 1, k - 1
            elif k == n + 1:
                r_count, i_count = n - 1, n
            else:
                r_count, i_count = n, n
            for th in _angle_lists(r_count, k == n + 2):
                out.append(_R(n, k, th))
            for th in _angle_lists(i_count, k >= n + 1):
                out.append(_I(n, k, th, pi / 8 if k == n + 2 else None))
    for n in (2, 3, 4):
        for k in range(2, n + 3):
            for theta in (pi / 6, Q):
                p = {"n": n, "k": k, "theta": theta}
                if k >= 3:
                    p["beta"] = pi / 8
                if k == n + 2:
                    p["alpha"] = pi / 7
                out.append({"family": "I_family4", "params": p})
    out += [{"family": "R_I_canonical", "params": {"dims": d}} for d in ([2, 2], [2, 3])]
    out += [{"family": "R_II_canonical", "params": {"dims": [m]}} for m in (4, 5)]
    out += [{"family": "R_III_canonical", "params": {"dims": [m]}} for m in (2, 3, 4)]
    out += [{"family": f, "params": {"dims": [m]}} for f in ("R_IV_canonical", "I_IV_canonical")
            for m in (2, 3, 4, 5)]
    out += [{"family": "poly_isometry", "params": {"type": "I", "dims": d}} for d in ([2, 2], [2, 3], [3, 3])]
    out += [{"family": "poly_isometry", "params": {"type": "II", "dims": [m]}} for m in (4, 5)]
    out += [{"family": "poly_isometry", "params": {"type": t, "dims": [m]}} for t in ("III", "IV")
            for m in (2, 3, 4)]
    out += [{"family": "linear_2n", "params": {"n": n}} for n in (1, 2, 3, 4)]
    return out


def isometry_suite_config(seed: int = 42, count: int = 1000) -> dict:
    jobs = [{"map": d, "checks": ["isometry"], "plan": {"count": count}} for d in isometry_suite_descriptors()]
    return {"seed": seed, "jobs": jobs}
