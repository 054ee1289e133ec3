"""Command-line front end: list families, run verification jobs, gap intervals."""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import verify as vf
from .catalog import DescriptorError, build_from_descriptor, list_families
from .mapzoo import gap_intervals
from .verify.report import report_params

DEFAULT_SEED = 20151201
SEED_ENV = "CARTAN_SEED"
CHECKS = ("isometry", "metric", "proper", "minimality", "reduce", "dangelo", "quadratic",
          "degree", "congruence")
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class ConfigError(ValueError):
    pass


def resolve_seed(flag, config_seed) -> int:
    """flag > config file > $CARTAN_SEED > DEFAULT_SEED."""
    if flag is not None:
        return int(flag)
    if config_seed is not None:
        return int(config_seed)
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"{SEED_ENV}={env!r} is not an integer") from None
    return DEFAULT_SEED


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: malformed JSON ({exc})") from None
    if not isinstance(cfg, dict) or not isinstance(cfg.get("jobs"), list):
        raise ConfigError("config must be an object with a 'jobs' list")
    return cfg


def normalize_jobs(cfg: dict, seed_flag=None, samples=None, tol_isometry=None) -> list[dict]:
    """Resolve seeds, sample counts and tolerances; build every map once to
    surface descriptor errors before anything runs."""
    run_seed = resolve_seed(seed_flag, cfg.get("seed"))
    jobs = []
    for i, job in enumerate(cfg["jobs"]):
        if not isinstance(job, dict):
            raise ConfigError(f"job {i}: not an object")
        checks = job.get("checks", ["isometry"])
        bad = [c for c in checks if c not in CHECKS]
        if bad or not checks:
            raise ConfigError(f"job {i}: unknown checks {bad}" if bad else f"job {i}: no checks")
        plan = dict(job.get("plan", {}))
        if seed_flag is not None or "seed" not in plan:
            plan["seed"] = run_seed
        if samples is not None:
            plan["count"] = int(samples)
        plan.setdefault("count", 1000)
        try:
            vf.SamplePlan(int(plan["count"]), int(plan["seed"]), plan.get("rmax"))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"job {i}: bad plan ({exc})") from None
        tols = dict(job.get("tolerances", {}))
        if tol_isometry is not None:
            tols["isometry"] = float(tol_isometry)
        out = {"index": i, "checks": list(checks), "plan": plan, "tolerances": tols,
               "options": dict(job.get("options", {}))}
        if any(c != "congruence" for c in checks):
            if "map" not in job:
                raise ConfigError(f"job {i}: missing 'map' descriptor")
            try:
                build_from_descriptor(job["map"])
            except DescriptorError as exc:
                raise ConfigError(f"job {i}: {exc}") from None
            out["map"] = job["map"]
        if "congruence" in checks:
            cj = job.get("congruence")
            if not isinstance(cj, dict) or not {"n", "theta1", "theta2"} <= cj.keys():
                raise ConfigError(f"job {i}: congruence needs {{n, theta1, theta2}}")
            out["congruence"] = cj
        jobs.append(out)
    return jobs


def _failure(check: str, family: str, params: dict, plan: dict, tol: float, err: Exception) -> vf.Report:
    return vf.Report(check, family, params, plan, tol, float("inf"), float("inf"), [],
                     {"error": f"{type(err).__name__}: {err}"})


def _scalar_report(check, F, plan, tol, residual, aux) -> vf.Report:
    return vf.Report(check, F.family, report_params(F), plan, tol, float(residual), float(residual), [], aux)


def _run_congruence(job: dict) -> list[vf.Report]:
    cj = job["congruence"]
    n, t1, t2 = int(cj["n"]), float(cj["theta1"]), float(cj["theta2"])
    seed = int(job["plan"]["seed"])
    opts = job["options"]
    trials, iters = int(opts.get("trials", 50)), int(opts.get("iters", 500))
    A, B = vf.spectrum_theta(n, t1), vf.spectrum_theta(n, t2)
    lo, hi = sorted((t1, t2))
    # the smaller |lambda_1| = |cos 2 theta| belongs to the larger angle
    crit = vf.congruence_criterion(np.cos(2 * hi), vf.spectrum_theta(n, lo))
    res = vf.congruence_search(A, B, trials, iters, seed)
    floor = float(job["tolerances"].get("congruence", vf.SEARCH_FLOOR))
    equal = np.allclose(A, B)
    params = {"n": n, "theta1": t1, "theta2": t2}
    plan = {"trials": trials, "iters": iters, "seed": seed}
    aux = {"criterion": crit, "best_c": res.c, "restarts": res.restarts}
    if equal:
        return [vf.Report("congruence", "H_theta", params, plan, 1e-10, res.best_residual,
                          res.best_residual, [], aux)]
    # inequivalent spectra pass when the search stays above the floor
    gap = max(0.0, floor - res.best_residual)
    if crit is not False:
        gap = max(gap, 1.0)
    aux["best_residual"] = res.best_residual
    aux["floor"] = floor
    return [vf.Report("congruence", "H_theta", params, plan, 0.0, gap, gap, [], aux)]


def _run_check(check: str, F, job: dict) -> list[vf.Report]:
    p = job["plan"]
    plan = vf.SamplePlan(int(p["count"]), int(p["seed"]), p.get("rmax"))
    tols, opts = job["tolerances"], job["options"]
    if check == "isometry":
        relative = opts.get("relative")
        if relative is None:
            relative = F.base is not None and not F.isometric
        return [vf.isometry_residual(F, plan, tols.get("isometry", vf.TOL_ISOMETRY), bool(relative))]
    if check == "metric":
        mplan = vf.SamplePlan(min(plan.count, int(opts.get("metric_samples", 20))), plan.seed, p.get("rmax"))
        r = vf.metric_pullback(F, mplan, tol=tols.get("metric", vf.TOL_METRIC))
        lam_err = r.aux["lambda_rel_error"]
        lam = vf.Report("lambda", F.family, report_params(F), r.plan, tols.get("lambda", vf.TOL_LAMBDA),
                        lam_err, lam_err, [],
                        {"lambda": r.aux["lambda"], "lambda_expected": r.aux["lambda_expected"]})
        return [r, lam]
    if check == "proper":
        return [vf.properness_probe(F, int(opts.get("directions", 64)), seed=plan.seed,
                                    tol=tols.get("proper", vf.TOL_PROPER))]
    if check == "minimality":
        count = max(plan.count, 4 * (F.target.dims[0] + 2))
        return [vf.minimality_rank(F, vf.SamplePlan(count, plan.seed, plan.rmax))]
    if check == "reduce":
        n = F.n
        dims = [F.target.dims[0]]
        G = F
        while True:
            out = vf.reduce_nonminimal(G, plan.seed)
            if out is None:
                break
            G = out[1]
            dims.append(G.target.dims[0])
        iso = vf.isometry_residual(G, plan)
        excess = max(0, dims[-1] - (2 * n + 2))
        aux = {"dims": dims, "final_isometry_residual": iso.max_residual}
        return [_scalar_report("reduce", F, plan.to_json(), 0.0,
                               excess + (0 if iso.passed else 1), aux)]
    if check == "dangelo":
        D = vf.dangelo_solve(F, plan.seed)
        return [_scalar_report("dangelo", F, plan.to_json(), tols.get("dangelo", vf.TOL_DECOMP),
                               D.residual, {"h_zero": D.h_zero, "m": D.m})]
    if check == "quadratic":
        D = vf.dangelo_solve(F, plan.seed)
        Qd = vf.quadratic_classify(D, plan.seed + 7)
        return [_scalar_report("quadratic", F, plan.to_json(), tols.get("quadratic", vf.CLASSIFY_TOL),
                               Qd.relation_residual, {"a": Qd.a, "tag": Qd.tag})]
    if check == "degree":
        return [vf.degree_check(F, plan, tols.get("degree", vf.TOL_ISOMETRY))]
    raise ConfigError(f"unknown check {check}")


def run_job(job: dict) -> list[str]:
    """Report lines for one job; check-time errors become failing reports."""
    lines = []
    F = build_from_descriptor(job["map"]) if "map" in job else None
    for check in job["checks"]:
        try:
            reps = _run_congruence(job) if check == "congruence" else _run_check(check, F, job)
        except Exception as exc:  # noqa: BLE001 - reported, not swallowed
            fam = F.family if F is not None else "H_theta"
            params = report_params(F) if F is not None else dict(job.get("congruence", {}))
            reps = [_failure(check, fam, params, job["plan"], job["tolerances"].get(check, 0.0), exc)]
        lines += [r.to_json() for r in reps]
    return lines


def run_jobs(jobs: list[dict], workers: int = 1):
    """Yield each job's lines in job order."""
    if workers <= 1:
        for job in jobs:
            yield run_job(job)
        return
    with ProcessPoolExecutor(max_workers=workers) as ex:
        yield from ex.map(run_job, jobs)


def _passed(line: str) -> bool:
    return json.loads(line)["pass"]


def _text_line(line: str) -> str:
    d = json.loads(line)
    flag = "PASS" if d["pass"] else "FAIL"
    return f"{flag}  {d['check']:<18} {d['family']:<16} max={d['max_residual']:.3e} tol={d['tolerance']:.1e}  {json.dumps(d['params'])}"


def cmd_verify(args) -> int:
    try:
        cfg = load_config(args.config)
        jobs = normalize_jobs(cfg, args.seed, args.samples, args.tol_isometry)
    except ConfigError as exc:
        print(f"cartan verify: {exc}", file=sys.stderr)
        return EXIT_USAGE
    ok = True
    for lines in run_jobs(jobs, args.workers):
        for line in lines:
            ok &= _passed(line)
            print(line if args.json else _text_line(line), flush=True)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_list_families(args) -> int:
    fams = list_families()
    if args.json:
        print(json.dumps(fams, indent=1))
    else:
        for f in fams:
            print(f"{f['family']:<16} {f['source']:>10} -> {f['target']:<12} {f['topic']}")
            print(f"{'':<16} {f['params']}")
    return EXIT_OK


def cmd_gap(args) -> int:
    try:
        g = gap_intervals(args.n)
    except ValueError as exc:
        print(f"cartan gap: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(json.dumps(g.to_json(), separators=(", ", ": ")))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cartan",
                                 description="Holomorphic maps into classical domains: build and verify.")
    sub = ap.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run the jobs of a JSON config")
    v.add_argument("--config", required=True)
    v.add_argument("--seed", type=int)
    v.add_argument("--samples", type=int)
    v.add_argument("--tol-isometry", type=float)
    v.add_argument("--json", action="store_true", help="one JSON report per line")
    v.add_argument("--workers", type=int, default=1)
    v.set_defaults(func=cmd_verify)
    lf = sub.add_parser("list-families", help="catalog of buildable families")
    lf.add_argument("--json", action="store_true")
    lf.set_defaults(func=cmd_list_families)
    g = sub.add_parser("gap", help="gap intervals for proper monomial maps")
    g.add_argument("--n", type=int, required=True)
    g.set_defaults(func=cmd_gap)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        # reader went away (e.g. piped into head); stop quietly
        sys.stdout = open(os.devnull, "w")
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
