"""Command-line front end: sweeps, caching, CSV/JSON emission, verification.

Every command is a pure function of its configuration: re-running with
the same flags (at any parallelism degree) produces byte-identical
output files.  Per-n results are cached as JSON keyed by a hash of the
schema version and the exact settings that produced them.
"""

import argparse
import hashlib
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .families import build_adjusted, build_raw
from .metrics import (
    fit_growth,
    lebesgue_constant,
    level_minmax,
    muckenhoupt_constant,
    mz_ratio,
)

SCHEMA_VERSION = "1"
CACHE_ENV_VAR = "LSHAPEARC_CACHE_DIR"


def _fmt(v) -> str:
    if v is None:
        return ""
    v = float(v)
    if v != v:
        return "nan"
    if v != 0.0 and abs(v) < 1e-4:
        return f"{v:.6e}"
    return f"{v:.6f}"


# ---------------------------------------------------------------------------
# caching
# ---------------------------------------------------------------------------


def _cache_dir(args) -> str:
    return args.cache_dir or os.environ.get(CACHE_ENV_VAR) or None


def _cache_key(payload: dict) -> str:
    blob = json.dumps({"schema_version": SCHEMA_VERSION, **payload}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:24]


def _cached(cache_dir, payload, compute):
    if cache_dir is None:
        return compute()
    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(cache_dir, f"{payload['command']}-{_cache_key(payload)}.json")
    if os.path.exists(path):
        try:
            with open(path) as fh:
                return json.load(fh)
        except (json.JSONDecodeError, OSError) as exc:
            print(f"warning: discarding corrupt cache entry {path}: {exc}", file=sys.stderr)
    result = compute()
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(result, fh, sort_keys=True)
    os.replace(tmp, path)
    return result


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_ns(args) -> list:
    if args.n is not None:
        return [args.n]
    if args.sweep:
        k0, k1 = (int(x) for x in args.sweep.split(".."))
        return [2**k for k in range(k0, k1 + 1)]
    if args.list:
        return [int(x) for x in args.list.split(",")]
    raise SystemExit("one of --n, --sweep, --list is required")


def _map_jobs(fn, tasks, jobs):
    """Order-preserving map; results identical at any parallelism degree."""
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


# ---------------------------------------------------------------------------
# workers (module-level for pickling)
# ---------------------------------------------------------------------------


def _build(n, family_kind):
    return build_adjusted(n) if family_kind == "adjusted" and n > 0 else build_raw(n)


def _lebesgue_task(cfg):
    def compute():
        fam = _build(cfg["n"], cfg["family"])
        rec = lebesgue_constant(fam, grid_per_gap=cfg["grid_per_gap"], refine_tol=cfg["refine_tol"])
        return {"n": cfg["n"], "family": cfg["family"], "L": rec.value, "argmax_t": rec.location}

    return _cached(cfg["cache_dir"], {"command": "lebesgue", **{k: cfg[k] for k in ("n", "family", "grid_per_gap", "refine_tol")}}, compute)


def _minmax_task(cfg):
    def compute():
        lo, hi = level_minmax(cfg["n"], convention=cfg["convention"])
        return {"n": cfg["n"], "rho": 1.0 + 1.0 / (cfg["n"] + (1 if cfg["convention"] == "one_over_n_plus_1" else 0)),
                "min": lo.value, "max": hi.value}

    return _cached(cfg["cache_dir"], {"command": "minmax", **{k: cfg[k] for k in ("n", "convention")}}, compute)


def _apweight_task(cfg):
    def compute():
        rec = muckenhoupt_constant(cfg["n"], cfg["p"], window_step_denom=cfg["window_step_denom"], window_max=cfg["window_max"])
        return {"n": cfg["n"], "p": cfg["p"], "M": rec.value,
                "step_denom": rec.settings["window_step_denom"], "window_max": rec.settings["window_max"]}

    return _cached(cfg["cache_dir"], {"command": "apweight", **{k: cfg[k] for k in ("n", "p", "window_step_denom", "window_max")}}, compute)


def _mzratio_task(cfg):
    def compute():
        rec = mz_ratio(cfg["n"], cfg["p"], quad_tol=cfg["quad_tol"])
        return {"n": cfg["n"], "p": cfg["p"], "k": int(rec.location), "R": rec.value, "dist": rec.settings["dist"]}

    return _cached(cfg["cache_dir"], {"command": "mzratio", **{k: cfg[k] for k in ("n", "p", "quad_tol")}}, compute)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_nodes(args):
    fam = _build(args.n, args.family)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "config": {"n": args.n, "family": args.family},
        "n": fam.n,
        "family": fam.kind,
        "angles": list(fam.angles),
        "folded": list(fam.folded),
        "points": [[z.real, z.imag] for z in fam.points],
        "adjusted_pairs": [list(p) for p in fam.adjusted_pairs],
    }
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def cmd_lebesgue(args):
    ns = _parse_ns(args)
    cache_dir = _cache_dir(args)
    tasks = [
        {"n": n, "family": args.family, "grid_per_gap": args.grid_per_gap,
         "refine_tol": args.refine_tol, "cache_dir": cache_dir}
        for n in sorted(ns)
    ]
    rows = _map_jobs(_lebesgue_task, tasks, args.jobs)
    lines = ["n,family,L_n,L_over_log,argmax_t,grid_per_gap,refine_tol"]
    for r in rows:
        over = r["L"] / np.log(r["n"]) if r["n"] >= 2 else float("nan")
        lines.append(
            f"{r['n']},{r['family']},{_fmt(r['L'])},{_fmt(over)},{_fmt(r['argmax_t'])},{args.grid_per_gap},{args.refine_tol:g}"
        )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_minmax(args):
    ns = _parse_ns(args)
    convention = "one_over_n_plus_1" if args.rho == "n+1" else "one_over_n"
    cache_dir = _cache_dir(args)
    tasks = [{"n": n, "convention": convention, "cache_dir": cache_dir} for n in sorted(ns)]
    rows = _map_jobs(_minmax_task, tasks, args.jobs)
    lines = ["n,rho,min,max,ratio"]
    for r in rows:
        lines.append(f"{r['n']},{_fmt(r['rho'])},{_fmt(r['min'])},{_fmt(r['max'])},{_fmt(r['max'] / r['min'])}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_apweight(args):
    ns = _parse_ns(args)
    ps = [float(x) for x in args.p.split(",")]
    cache_dir = _cache_dir(args)
    tasks = [
        {"n": n, "p": p, "window_step_denom": args.window_step_denom,
         "window_max": args.window_max, "cache_dir": cache_dir}
        for n in sorted(ns)
        for p in ps
    ]
    rows = _map_jobs(_apweight_task, tasks, args.jobs)
    lines = ["n,p,M_n,step_denom,window_max"]
    for r in rows:
        lines.append(f"{r['n']},{r['p']:g},{_fmt(r['M'])},{r['step_denom']},{r['window_max']}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_mzratio(args):
    ns = _parse_ns(args)
    cache_dir = _cache_dir(args)
    tasks = [
        {"n": n, "p": float(args.p), "quad_tol": args.quad_tol, "cache_dir": cache_dir}
        for n in sorted(ns)
    ]
    rows = _map_jobs(_mzratio_task, tasks, args.jobs)
    lines = ["n,p,k,R,dist"]
    for r in rows:
        lines.append(f"{r['n']},{r['p']:g},{r['k']},{_fmt(r['R'])},{_fmt(r['dist'])}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_fit(args):
    with open(args.input) as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    if args.value_col:
        col = args.value_col
    else:
        candidates = [c for c in ("L_n", "M_n", "R", "ratio") if c in header]
        if not candidates:
            raise SystemExit(f"no known value column in {header}; use --value-col")
        col = candidates[0]
    i_n, i_v = header.index("n"), header.index(col)
    pairs = [(int(r[i_n]), float(r[i_v])) for r in rows]
    model = "affine_in_logn" if args.model == "affine" else "power_law"
    fit = fit_growth(pairs, model)
    preds = []
    for n, v in pairs:
        if model == "affine_in_logn":
            fitted = (fit.a + fit.b * np.log(n)) * np.log(n)
        else:
            fitted = fit.a + fit.b * n**fit.beta
        preds.append({"n": n, "value": v, "fitted": float(fitted)})
    doc = {
        "schema_version": SCHEMA_VERSION,
        "model": fit.model,
        "a": fit.a,
        "b": fit.b,
        "beta": fit.beta,
        "residual_rms": fit.residual_rms,
        "n_range": list(fit.n_range),
        "value_column": col,
        "predictions": preds,
    }
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def cmd_verify(args):
    from .verify import run_all

    results = run_all(flip_branch=args.debug_flip_branch)
    width = max(len(name) for name, _, _ in results)
    failures = 0
    lines = []
    for name, ok, detail in results:
        status = "PASS" if ok else "FAIL"
        failures += 0 if ok else 1
        lines.append(f"{status}  {name:<{width}}  {detail}")
    lines.append(f"{len(results) - failures}/{len(results)} invariant checks passed")
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if failures == 0 else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_common(sp, sweep=True):
    if sweep:
        sp.add_argument("--n", type=int, default=None, help="single degree")
        sp.add_argument("--sweep", help="powers-of-two range k0..k1 (degrees 2^k0..2^k1)")
        sp.add_argument("--list", help="comma-separated explicit degrees")
    sp.add_argument("--out", default=None, help="output path (default stdout)")
    sp.add_argument("--cache-dir", default=None,
                    help=f"cache directory (default ${CACHE_ENV_VAR} if set)")
    sp.add_argument("--jobs", type=int, default=1, help="parallel workers")


def build_parser():
    ap = argparse.ArgumentParser(prog="lshapearc",
                                 description="Interpolation-node experiments on the L-shape arc")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("nodes", help="dump a node family as JSON")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--family", choices=["raw", "adjusted"], default="adjusted")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_nodes)

    for name in ("lebesgue", "sweep"):
        sp = sub.add_parser(name, help="Lebesgue constants (CSV)")
        _add_common(sp)
        sp.add_argument("--family", choices=["raw", "adjusted"], default="adjusted")
        sp.add_argument("--grid-per-gap", type=int, default=64)
        sp.add_argument("--refine-tol", type=float, default=1e-9)
        sp.set_defaults(func=cmd_lebesgue)

    sp = sub.add_parser("minmax", help="level-curve extrema of the nodal magnitude (CSV)")
    _add_common(sp)
    sp.add_argument("--rho", choices=["n", "n+1"], default="n+1")
    sp.set_defaults(func=cmd_minmax)

    sp = sub.add_parser("apweight", help="Muckenhoupt A_p constants (CSV)")
    _add_common(sp)
    sp.add_argument("--p", default="2", help="comma-separated exponents > 1")
    sp.add_argument("--window-step-denom", type=int, default=128)
    sp.add_argument("--window-max", type=int, default=None)
    sp.set_defaults(func=cmd_apweight)

    sp = sub.add_parser("mzratio", help="basis-integral to level-distance ratios (CSV)")
    _add_common(sp)
    sp.add_argument("--p", default="2")
    sp.add_argument("--quad-tol", type=float, default=1e-8)
    sp.set_defaults(func=cmd_mzratio)

    sp = sub.add_parser("fit", help="growth-law fit of a sweep CSV (JSON)")
    sp.add_argument("input", help="CSV produced by a sweep command")
    sp.add_argument("--model", choices=["affine", "power"], required=True)
    sp.add_argument("--value-col", default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("verify", help="run the cross-module invariant suite")
    sp.add_argument("--out", default=None)
    sp.add_argument("--debug-flip-branch", action="store_true",
                    help="negative control: check the endpoint against the reflected branch")
    sp.set_defaults(func=cmd_verify)

    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
