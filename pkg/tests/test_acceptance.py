"""Acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line, repeated in the terminal summary.
Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import json
import subprocess
import sys
import time
from itertools import combinations
from math import pi
from pathlib import Path

import numpy as np
import pytest

from cartan import catalog
from cartan import mapzoo as mz
from cartan import verify as vf
from cartan.linalg import cayley_det_expansion, pfaffian
from cartan.polytable import PolyTable, variables

from conftest import random_complex, record

ROOT = Path(__file__).resolve().parent.parent
SUITE = ROOT / "configs" / "isometry_suite.json"


def _cli(*args):
    t0 = time.perf_counter()
    r = subprocess.run([sys.executable, "-m", "cartan", *args], capture_output=True)
    return r, time.perf_counter() - t0


def test_criterion_1_isometry_suite():
    r, elapsed = _cli("verify", "--config", str(SUITE), "--seed", "42", "--json")
    reports = [json.loads(x) for x in r.stdout.decode().splitlines()]
    families = {d["family"] for d in reports}
    failed = [d for d in reports if not d["pass"]]
    worst = max(d["max_residual"] for d in reports)
    need = {"R_n+k", "I_n+k", "I_family4", "R_I_canonical", "R_II_canonical", "R_III_canonical",
            "R_IV_canonical", "I_IV_canonical", "poly_isometry", "linear_2n"}
    ok = (r.returncode == 0 and not failed and need <= families and elapsed < 30
          and all(d["plan"]["count"] == 1000 and d["tolerance"] == 1e-10 for d in reports))
    record(1, ok, f"{len(reports)} maps, worst residual {worst:.2e} (tol 1e-10), {elapsed:.1f} s (limit 30 s)")
    assert ok, failed[:3]


def test_criterion_2_determinant_identities():
    rng = np.random.default_rng(2)
    worst_exp = 0.0
    for p in range(1, 6):
        for q in range(p, 6):
            for _ in range(100):
                Z = random_complex(rng, (p, q), 0.5 / np.sqrt(q))
                direct = np.linalg.det(np.eye(p) - Z @ Z.conj().T).real
                worst_exp = max(worst_exp, abs(cayley_det_expansion(Z) - direct))
    worst_pf = 0.0
    odd_zero = True
    for n in range(1, 9):
        for _ in range(100):
            A = random_complex(rng, (n, n))
            A = A - A.T
            if n % 2:
                odd_zero &= pfaffian(A) == 0
            else:
                d = np.linalg.det(A)
                worst_pf = max(worst_pf, abs(pfaffian(A) ** 2 - d) / max(1.0, abs(d)))
    ok = worst_exp <= 1e-10 and worst_pf <= 1e-9 and odd_zero
    record(2, ok, f"minor expansion {worst_exp:.1e} (tol 1e-10), pf^2 vs det {worst_pf:.1e} (tol 1e-9), "
                  f"odd pf exactly 0: {odd_zero}")
    assert ok


def _type_iv_isometries():
    out = [mz.build_R(2, k, [pi / 6] * c) for k, c in ((2, 1), (3, 1), (4, 2))]
    out += [mz.build_I(2, k, [pi / 5] * c, alpha=pi / 8 if k == 4 else None) for k, c in ((2, 1), (3, 2), (4, 2))]
    out += [mz.build_R(3, 3, [pi / 6, pi / 4]), mz.build_I_family4(3, 3, pi / 5, pi / 8)]
    out += [mz.build_canonical(kind, [m]) for kind in ("IV", "IV_I") for m in (2, 3, 4, 5)]
    out += [mz.linear_embedding_2n(2), mz.build_polynomial_isometry("IV", [3])]
    return out


def test_criterion_3_lambda_constants():
    rows = []
    for F in _type_iv_isometries():
        r = vf.metric_pullback(F, vf.SamplePlan(20, 3))
        m, n = F.target.dims[0], F.n
        rows.append((F.family, r, abs(r.aux["lambda"] - m / (n + 1)) / (m / (n + 1))))
    for kind, dims in (("I", [2, 2]), ("I", [2, 3]), ("II", [4]), ("II", [5]), ("III", [2]), ("III", [3])):
        F = mz.build_canonical(kind, dims)
        r = vf.metric_pullback(F, vf.SamplePlan(20, 3))
        lam = F.target.genus * F.exponent / (F.n + 1)
        rows.append((F.family, r, abs(r.aux["lambda"] - lam) / lam))
    worst_lam = max(e for _, _, e in rows)
    worst_metric = max(r.max_residual for _, r, _ in rows)
    ok = worst_lam <= 1e-4 and all(r.passed for _, r, _ in rows)
    record(3, ok, f"{len(rows)} maps, worst lambda rel. error {worst_lam:.1e} (tol 1e-4), "
                  f"worst metric deviation {worst_metric:.1e}")
    assert ok


def test_criterion_4_reduction_and_minimality():
    n = 2
    chains = []
    ok = True
    for base in (mz.build_canonical("IV", [2]), mz.build_I(2, 2, [pi / 6]), mz.build_R(2, 4, [pi / 6, pi / 4])):
        m0 = base.target.dims[0]
        for m in (8, 9):
            C, _ = np.linalg.qr(np.random.default_rng(m).standard_normal((m, m)))
            F = mz.rotate(mz.pad_zero(base, m - m0), C)
            dims = [m]
            while True:
                ok &= vf.isometry_residual(F, vf.SamplePlan(1000, 42)).passed
                out = vf.reduce_nonminimal(F)
                if out is None:
                    break
                F = out[1]
                dims.append(F.target.dims[0])
            ok &= dims[-1] <= 2 * n + 2
            chains.append(dims)
    ranks = []
    for theta in (pi / 6, pi / 5, pi / 4):
        r = vf.minimality_rank(mz.build_I(n, 2, [theta]), vf.SamplePlan(200, 5))
        ranks.append(r.aux["rank"])
        ok &= r.aux["rank"] == n + 4
    record(4, ok, f"reduction chains {chains}; I_(n+2) ranks {ranks} (need {n + 4})")
    assert ok


def test_criterion_5_degree_bounds():
    maps = []
    for n in (2, 3, 4):
        for k in range(1, n + 3):
            if k == 1:
                continue
            c = k - 1 if k <= n else (n - 1 if k == n + 1 else n)
            th = [pi / 6] * c
            maps.append(mz.build_R(n, k, th))
    maps += [mz.build_canonical("IV", [m]) for m in (3, 4, 5)]
    maps += [mz.build_polynomial_isometry("IV", [m]) for m in (3, 4)]
    maps += [mz.linear_embedding_2n(n) for n in (2, 3, 4)]
    ok = True
    linear = []
    for F in maps:
        m, n = F.target.dims[0], F.n
        r = vf.degree_check(F, vf.SamplePlan(1000, 8))
        d = r.aux["degree"]
        ok &= r.passed and d in (1, 2)
        if n + 1 <= m < 2 * n:
            ok &= d == 2
        if d == 1:
            linear.append(F.family)
            ok &= F.family == "linear_2n" and m == 2 * n
            W = F.evaluate_coords(vf.SamplePlan(1000, 9).points(n))
            ok &= float(np.max(np.abs(np.sum(W * W, axis=1)))) <= 1e-10
    record(5, ok, f"{len(maps)} rational maps, degree-1 families: {sorted(set(linear))}")
    assert ok


def test_criterion_6_obstructions():
    rng = np.random.default_rng(6)
    z = variables(2)
    squares = []
    for _ in range(20):
        count = int(rng.integers(1, 4))
        exps = set()
        while len(exps) < count:
            e = tuple(int(x) for x in rng.integers(0, 3, 2))
            if sum(e):
                exps.add(e)
        coeffs = rng.uniform(0.1, 1, count)
        coeffs /= np.sqrt(np.sum(coeffs**2))
        polys = [z[0] ** a * z[1] ** b * float(c) for (a, b), c in zip(sorted(exps), coeffs)]
        squares.append(vf.perfect_square_test(vf.one_minus_sum_squares(polys)))
    h = [vf.perfect_square_test(vf.H_theta(n, t)) for n in (2, 3) for t in (0.0, pi / 6, pi / 5)]
    angles = (pi / 12, pi / 6, pi / 4)
    crit, best = [], []
    for t1, t2 in combinations(angles, 2):
        lo, hi = sorted((t1, t2))
        crit.append(vf.congruence_criterion(np.cos(2 * hi), vf.spectrum_theta(2, lo)))
        res = vf.congruence_search(vf.spectrum_theta(2, t1), vf.spectrum_theta(2, t2), 50, 500, seed=42)
        best.append(res.best_residual)
    equal = [vf.congruence_search(vf.spectrum_theta(2, t), vf.spectrum_theta(2, t), 50, 500, seed=42).best_residual
             for t in angles]
    ok = (not any(squares) and not any(h) and all(c is False for c in crit)
          and min(best) >= 0.01 and max(equal) <= 1e-10)
    record(6, ok, f"square tests false {20 - sum(squares)}/20 and {6 - sum(h)}/6; criterion {crit}; "
                  f"search residuals {[round(b, 3) for b in best]} (floor 0.01), equal {max(equal):.1e}")
    assert ok


def test_criterion_7_properness():
    gens = [mz.identity_map(2), mz.identity_map(3), mz.whitney_map(2), mz.homogeneous_map(2, 2)]
    maps = []
    for G in gens:
        N = len(G.components)
        maps.append(mz.build_HG("IV", [N], G))
        maps.append(mz.build_WG(N, G))
        maps.append(mz.build_HG("III", [N], G))
        if N == 3:
            maps.append(mz.build_HG("I", [2, 2], G))
            maps.append(mz.build_HG("II", [3], G))
    F0 = mz.homogeneous_map(2, 2)
    maps += [mz.build_MNk(F0, k, pi / 7 if k >= 2 else None) for k in range(1, 5)]
    reports = [vf.properness_probe(F, 64, seed=7) for F in maps]
    worst = max(r.max_residual for r in reports)
    W = mz.build_WG(3, mz.whitney_map(2))
    plan = vf.SamplePlan(1000, 42)
    plain = vf.isometry_residual(W, plan)
    rel = vf.isometry_residual(W, plan, relative=True)
    ok = all(r.passed for r in reports) and not plain.passed and rel.passed
    record(7, ok, f"{len(maps)} maps proper, worst final defect {worst:.1e} (tol 0.05); Whitney W_G "
                  f"plain residual {plain.max_residual:.1e} fails, relative {rel.max_residual:.1e} holds")
    assert ok


def test_criterion_8_gap_utility():
    def gap(n):
        r, _ = _cli("gap", "--n", str(n))
        return json.loads(r.stdout)

    g3, g4, g10 = gap(3), gap(4), gap(10)
    expected = {3: (1, [[4, 4]]), 4: (2, [[5, 6], [9, 9]]), 10: (3, None)}
    got = {3: (g3["K"], g3["I"]), 4: (g4["K"], g4["I"]), 10: (g10["K"], None)}
    ok = got == expected
    record(8, ok, f"K(3), I = {got[3]}; K(4), I = {got[4]} (expected {expected[4]}); K(10) = {g10['K']}")
    assert ok


def test_criterion_9_determinism():
    a, _ = _cli("verify", "--config", str(SUITE), "--seed", "42", "--json")
    b, _ = _cli("verify", "--config", str(SUITE), "--seed", "42", "--json")
    ok = a.returncode == b.returncode == 0 and a.stdout == b.stdout and len(a.stdout) > 0
    record(9, ok, f"two runs, {len(a.stdout)} bytes each, identical: {a.stdout == b.stdout}")
    assert ok
