"""Command-line front door: evaluate functionals, bounds, certifications,
campaigns, and ratio extrema.

Exit codes: 0 = success with every requested inequality holding,
1 = at least one violation (for CI gating), 2 = usage or domain errors.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bounds as bnd
from . import discrete as disc
from . import integral as intg
from .functions import (
    DomainError,
    certify_superquadratic,
    function_from_id,
    load_tabulated,
)
from .report import bound_reports_json, write_bound_reports, write_campaign
from .verify import CampaignConfig, run_campaign

EVAL_TARGETS = ("jensen", "chebychev", "jensen_k", "chebychev_k", "mean",
                "jensen_k_int", "chebychev_k_int", "mean_int")
BOUND_TARGETS = (
    "lower", "lambda", "halved", "sandwich", "convex_sandwich",
    "chebychev_magnitude", "jensen_upper_c",
    "lower_int", "sandwich_int", "chebychev_magnitude_int",
    "jensen_upper_c_int",
)


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="jensengap",
        description="Jensen/Chebychev functional gaps and superquadraticity bounds",
    )
    sub = ap.add_subparsers(dest="verb", required=True)

    def common(p, instance=False, densities=False):
        p.add_argument("--fn", help="function id or tabulated CSV path")
        p.add_argument("--tolerance", type=float, default=1e-9)
        p.add_argument("--out", help="output file (or directory for campaign)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        if instance:
            p.add_argument("--instance", help="instance JSON file")
            p.add_argument("--r-instance",
                           help="instance JSON carrying alternate weights")
        if densities:
            p.add_argument("--p", action="append", default=None,
                           help="density id (repeat per axis)")
            p.add_argument("--r", action="append", default=None,
                           help="alternate density id (repeat per axis)")
            p.add_argument("--q", help="comma-separated outer weights")
            p.add_argument("--interval", nargs=2, type=float,
                           metavar=("A", "B"))
            p.add_argument("--quad-mode",
                           choices=("tensor_gauss", "monte_carlo"),
                           default="tensor_gauss")
            p.add_argument("--quad-nodes", type=int, default=16)
            p.add_argument("--samples", type=int, default=10 ** 5)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--resolution", type=int, default=256)

    pe = sub.add_parser("eval", help="evaluate a functional")
    pe.add_argument("target", choices=EVAL_TARGETS)
    common(pe, instance=True, densities=True)

    pb = sub.add_parser("bound", help="evaluate both sides of an inequality")
    pb.add_argument("target", choices=BOUND_TARGETS)
    common(pb, instance=True, densities=True)
    pb.add_argument("--lambda", dest="lam", type=float, default=1.0)
    pb.add_argument("--m-tilde", type=float)
    pb.add_argument("--M-tilde", dest="M_tilde", type=float)

    pc = sub.add_parser("certify", help="grid-certify superquadraticity")
    common(pc)
    pc.add_argument("--xmax", type=float, default=4.0)
    pc.add_argument("--points", type=int, default=65)

    pk = sub.add_parser("campaign", help="run a randomized campaign")
    pk.add_argument("--config", required=True, help="campaign config JSON")
    pk.add_argument("--out", help="output directory")
    pk.add_argument("--format", choices=("json", "csv"), default="json")
    pk.add_argument("--no-figures", action="store_true")

    px = sub.add_parser("extrema", help="weight/density ratio extrema")
    common(px, instance=True, densities=True)
    return ap


def _load_fn(fn_id: str):
    if fn_id is None:
        raise SystemExit2("--fn is required")
    if fn_id.endswith(".csv"):
        return load_tabulated(fn_id)
    return function_from_id(fn_id)


class SystemExit2(Exception):
    pass


def _instance(args) -> disc.GroupedInstance:
    if not args.instance:
        raise SystemExit2("--instance is required")
    return disc.load_instance(args.instance)


def _r_groups(args):
    if not getattr(args, "r_instance", None):
        raise SystemExit2("--r-instance is required for sandwich bounds")
    other = disc.load_instance(args.r_instance)
    return [p for p, _ in other.groups]


def _densities(args, which: str):
    ids = getattr(args, which)
    if not ids:
        raise SystemExit2(f"--{which} density id(s) required")
    if not args.interval:
        raise SystemExit2("--interval A B is required")
    iv = (args.interval[0], args.interval[1])
    out = []
    for d in ids:
        if d.endswith(".csv"):
            out.append(intg.load_tabulated_density(d))
        else:
            out.append(intg.density_from_id(d, iv))
    return out


def _quad(args) -> intg.QuadratureSpec:
    return intg.QuadratureSpec(
        mode=args.quad_mode,
        nodes_per_axis=args.quad_nodes,
        sample_count=args.samples,
        seed=args.seed,
    )


def _q_weights(args, k: int) -> np.ndarray:
    if args.q:
        vals = [float(v) for v in args.q.split(",")]
    else:
        vals = [1.0 / k] * k
    return disc.WeightVector(tuple(vals)).array


def _auto_range(f, values):
    vals = np.asarray(values)
    return float(np.min(vals)), float(np.max(vals))


def _emit(payload: str, args) -> None:
    if getattr(args, "out", None):
        from pathlib import Path

        p = Path(args.out)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(payload + "\n")
    print(payload)


def _do_eval(args) -> int:
    t = args.target
    if t in ("jensen", "chebychev", "jensen_k", "chebychev_k", "mean"):
        inst = _instance(args)
        if t == "mean":
            _emit(json.dumps({"value": disc.weighted_mean(inst)}), args)
            return 0
        f = _load_fn(args.fn)
        if t == "jensen":
            p, x = inst.groups[0]
            fv = disc.jensen(f, p, x)
        elif t == "chebychev":
            p, x = inst.groups[0]
            fv = disc.chebychev(f, p, x)
        elif t == "jensen_k":
            fv = disc.jensen_k(f, inst)
        else:
            fv = disc.chebychev_k(f, inst)
    else:
        dens = _densities(args, "p")
        q = _q_weights(args, len(dens))
        quad = _quad(args)
        if t == "mean_int":
            _emit(json.dumps(
                {"value": intg.integral_mean(dens, q, quad)}), args)
            return 0
        f = _load_fn(args.fn)
        if t == "jensen_k_int":
            fv = intg.jensen_k_int(f, dens, q, quad)
        else:
            fv = intg.chebychev_k_int(f, dens, q, quad)
    _emit(json.dumps({
        "value": fv.value, "term_count": fv.term_count,
        "xbar": fv.xbar, "stderr": fv.stderr,
    }), args)
    return 0


def _do_bound(args) -> int:
    t = args.target
    tol = args.tolerance
    f = _load_fn(args.fn)
    reports = []
    if t in ("lower", "lambda", "halved", "sandwich", "convex_sandwich",
             "chebychev_magnitude", "jensen_upper_c"):
        inst = _instance(args)
        if t == "lower":
            reports = [bnd.lower_bound_superquadratic(f, inst, tol)]
        elif t == "lambda":
            p, x = inst.groups[0]
            reports = [bnd.lambda_bound(f, p, x, args.lam, tol)]
        elif t == "halved":
            reports = [bnd.halved_bound(f, inst, tol)]
        elif t == "sandwich":
            reports = list(bnd.sandwich_bounds(f, inst, _r_groups(args), tol))
        elif t == "convex_sandwich":
            reports = list(bnd.convex_sandwich(f, inst, _r_groups(args), tol))
        else:
            S = disc.combo_values(inst.node_arrays(), inst.q)
            if t == "chebychev_magnitude":
                lo, hi = ((args.m_tilde, args.M_tilde)
                          if args.m_tilde is not None
                          else _auto_range(f, f.f(S)))
                reports = [bnd.chebychev_magnitude_bound(f, inst, lo, hi, tol)]
            else:
                lo, hi = ((args.m_tilde, args.M_tilde)
                          if args.m_tilde is not None
                          else _auto_range(f, f.C(S)))
                reports = list(bnd.jensen_upper_via_C(f, inst, lo, hi, tol))
    else:
        p_dens = _densities(args, "p")
        q = _q_weights(args, len(p_dens))
        quad = _quad(args)
        if t == "lower_int":
            reports = [intg.lower_bound_superquadratic_int(
                f, p_dens, q, quad, tol)]
        elif t == "sandwich_int":
            r_dens = _densities(args, "r")
            lo, hi = intg.sandwich_bounds_int(
                f, p_dens, r_dens, q, quad, args.resolution, tol)
            reports = [lo] + ([hi] if hi is not None else [])
            if hi is None:
                print("note: upper-side report skipped (ratio unbounded)",
                      file=sys.stderr)
        else:
            S = intg._nodes_or_samples(p_dens, q, quad)
            if t == "chebychev_magnitude_int":
                lo_v, hi_v = ((args.m_tilde, args.M_tilde)
                              if args.m_tilde is not None
                              else _auto_range(f, f.f(S)))
                reports = [intg.chebychev_magnitude_bound_int(
                    f, p_dens, q, quad, lo_v, hi_v, tol)]
            else:
                lo_v, hi_v = ((args.m_tilde, args.M_tilde)
                              if args.m_tilde is not None
                              else _auto_range(f, f.C(S)))
                reports = [intg.jensen_upper_via_C_int(
                    f, p_dens, q, quad, lo_v, hi_v, tol)]
    if args.out:
        write_bound_reports(reports, args.out, args.format)
    print(bound_reports_json(reports))
    return 0 if all(r.holds for r in reports) else 1


def _do_certify(args) -> int:
    f = _load_fn(args.fn)
    xmax = min(args.xmax, f.upper)
    grid = np.linspace(0.0, xmax, args.points)
    rep = certify_superquadratic(f, grid, grid, args.tolerance)
    payload = json.dumps({
        "function": f.name,
        "verdict": rep.verdict,
        "worst_violation": rep.worst_violation,
        "witness": list(rep.witness),
        "envelope_gap": (rep.envelope_gap
                         if np.isfinite(rep.envelope_gap)
                         else repr(rep.envelope_gap)),
    }, indent=2, sort_keys=True)
    _emit(payload, args)
    return 0 if rep.verdict == "certified" else 1


def _do_campaign(args) -> int:
    config = CampaignConfig.load(args.config)
    report = run_campaign(config)
    if args.out:
        write_campaign(report, args.out, figures=not args.no_figures)
    else:
        print(report.to_json())
    for iid, st in sorted(report.per_inequality.items()):
        print(f"{iid}: {st['count']} checks, "
              f"{st['violation_count']} violations, "
              f"slack_min={st['slack_min']:.3e}", file=sys.stderr)
    return 0 if report.total_violations == 0 else 1


def _do_extrema(args) -> int:
    if getattr(args, "p", None):
        p_dens = _densities(args, "p")
        r_dens = _densities(args, "r")
        ext = intg.ratio_extrema_int(p_dens, r_dens, args.resolution)
        payload = {
            "m": ext.m,
            "M": ext.M if np.isfinite(ext.M) else "inf",
            "arg_m": list(ext.arg_m),
            "arg_M": list(ext.arg_M),
            "m_from_limit": ext.m_from_limit,
            "M_from_limit": ext.M_from_limit,
        }
    else:
        inst = _instance(args)
        ext = bnd.ratio_extrema([p for p, _ in inst.groups], _r_groups(args))
        payload = {
            "m": ext.m, "M": ext.M,
            "argmin": list(ext.argmin), "argmax": list(ext.argmax),
        }
    _emit(json.dumps(payload, indent=2, sort_keys=True), args)
    return 0


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.verb == "eval":
            return _do_eval(args)
        if args.verb == "bound":
            return _do_bound(args)
        if args.verb == "certify":
            return _do_certify(args)
        if args.verb == "campaign":
            return _do_campaign(args)
        if args.verb == "extrema":
            return _do_extrema(args)
        return 2
    except (SystemExit2, DomainError, bnd.HypothesisViolation,
            disc.EnumerationCapError, ValueError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
