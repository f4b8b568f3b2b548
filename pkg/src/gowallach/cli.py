"""Command-line interface.

Every command builds a report dict and prints it as JSON, a text table or
CSV. JSON output is deterministic (sorted keys, no timings), so identical
inputs and seed give byte-identical files.

Exit codes: 0 success, 1 a check or classification failed (the report holds
the witness), 2 usage error, 3 invalid space descriptor or algebra.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .catalog import CATALOG_NAMES, catalog, load_space, parse_space_ref
from .classify import ProbePlan, classify_space, is_go_metric, metric_grid, random_metrics
from .decomposition import triple_symbols, verify_space
from .errors import GWError, InvalidAlgebra, InvalidDescriptor
from .geodesic import InvariantMetric, is_geodesic_vector, solve_completion
from .lie import AlgebraVector
from .sampler import sample_arrays
from .scalar import format_scalar, is_exact, parse_scalar, set_tolerance
from .solve_small import (
    compare_with_listed,
    completeness_report,
    enumerate_stiefel4,
    enumerate_su2,
    stiefel4_space,
    su2_space,
)
from .sweeps import prop13_sweep, roundtrip_sweep
from .verify import euler_arnold_flow

log = logging.getLogger("gowallach")

DEFAULT_SEED = 0x5EED
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DESCRIPTOR = 0, 1, 2, 3


@dataclass
class SessionConfig:
    mode: str = "exact"
    tolerance: float = 1e-9
    seed: int = DEFAULT_SEED
    fmt: str = "table"
    output: str | None = None


@dataclass
class Result:
    report: dict
    table: list[str] = field(default_factory=list)
    rows: list[list] | None = None   # CSV rows, header first
    code: int = EXIT_OK


class UsageError(GWError):
    pass


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed {text!r}") from None
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _parse_metric(text: str, cfg: SessionConfig) -> InvariantMetric:
    g = InvariantMetric.parse(text)
    if not g.exact:
        _float_mode(cfg, f"metric {text}")
    return g


def _float_mode(cfg: SessionConfig, what: str) -> None:
    if cfg.mode != "float":
        cfg.mode = "float"
        set_tolerance(cfg.tolerance)
        log.warning("float literal in %s: switching to float mode (tolerance %g)", what, cfg.tolerance)


def parse_vector(text: str, space, cfg: SessionConfig) -> AlgebraVector:
    """``label=value`` pairs separated by commas or spaces; missing labels are 0."""
    alg = space.algebra
    coeffs = [Fraction(0)] * alg.dim
    items = [t for t in re.split(r"[,\s]+", text.strip()) if t]
    if not items:
        raise UsageError("empty vector")
    for item in items:
        label, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"expected label=value, got {item!r}")
        try:
            v = parse_scalar(value)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad coefficient {value!r}") from None
        if not is_exact(v):
            _float_mode(cfg, f"vector {text}")
        coeffs[alg.lookup(label)] += v
    return AlgebraVector(alg, coeffs)


def _space(args) -> object:
    ref = args.space
    params = getattr(args, "params", None) or []
    if params:
        return catalog(ref, *params)
    return parse_space_ref(ref)


def _fmt_vec(v) -> dict:
    return v.as_dict()


def _kv_rows(report: dict) -> list[list]:
    rows = [["key", "value"]]
    for k in sorted(report):
        v = report[k]
        rows.append([k, v if isinstance(v, (str, int, float, bool)) or v is None
                     else json.dumps(v, sort_keys=True)])
    return rows


# ---------------------------------------------------------------- commands

def cmd_space_list(args, cfg) -> Result:
    params = {"su2_trivial": "", "stiefel_n": "n", "so_klm": "k,l,m",
              "product_s2_cubed": "", "quad_diag_su2": ""}
    rows = [["name", "params"]] + [[n, params[n]] for n in CATALOG_NAMES]
    report = {"schema": "gw/1", "kind": "space_list", "spaces": [
        {"name": n, "params": params[n]} for n in CATALOG_NAMES]}
    table = [f"{n:<18} {params[n]}" for n in CATALOG_NAMES]
    return Result(report, table, rows)


def _verification(d) -> Result:
    rep = verify_space(d)
    report = {"schema": "gw/1", "kind": "space", "descriptor": d.to_dict(),
              "verification": rep.to_dict()}
    l, d1, d2, d3 = d.dims
    table = [f"space {d.name}: dim g = {d.algebra.dim}, l = {l}, d1 = {d1}, d2 = {d2}, d3 = {d3}"]
    for part in ("k", "m1", "m2", "m3"):
        table.append(f"  {part:<3} {' '.join(d.labels_of(part)) or '-'}")
    table.append(f"  checks: {', '.join(rep.checked)}")
    table.append("  verified: yes" if rep.ok else "  verified: NO")
    for v in rep.violations:
        table.append(f"  violation {v.condition}: {v.witness[0]}, {v.witness[1]} ({v.detail})")
    for w in rep.warnings:
        table.append(f"  warning: {w}")
    rows = [["condition", "witness_a", "witness_b", "detail"]] + [
        [v.condition, *v.witness, v.detail] for v in rep.violations]
    return Result(report, table, rows, EXIT_OK if rep.ok else EXIT_DESCRIPTOR)


def cmd_space_show(args, cfg) -> Result:
    return _verification(_space(args))


def cmd_space_check(args, cfg) -> Result:
    return _verification(load_space(args.file))


def cmd_symbols(args, cfg) -> Result:
    d = _space(args)
    table = triple_symbols(d)
    values = table.to_dict()
    report = {"schema": "gw/1", "kind": "triple_symbols", "space": d.name, "symbols": values}
    lines = [f"triple symbols of {d.name}"] + [f"  [{k}] = {v}" for k, v in values.items()]
    rows = [["ijk", "value"]] + [[k, v] for k, v in values.items()]
    return Result(report, lines, rows)


def cmd_geodesic_check(args, cfg) -> Result:
    d = _space(args)
    g = _parse_metric(args.metric, cfg)
    X = parse_vector(args.vector, d, cfg)
    res = is_geodesic_vector(X, g, d)
    labels = [d.algebra.labels[i] for i in d.m]
    report = {"schema": "gw/1", "kind": "geodesic_check", "space": d.name, "metric": str(g),
              "mode": cfg.mode, "vector": _fmt_vec(X), "geodesic": res.is_geodesic,
              "residuals": {lab: format_scalar(r) for lab, r in zip(labels, res.residuals)}}
    lines = [f"{'geodesic' if res else 'NOT geodesic'}: X = {_fmt_vec(X)} on {d.name}, metric {g}"]
    lines += [f"  residual[{lab}] = {format_scalar(r)}" for lab, r in zip(labels, res.residuals)]
    rows = [["basis", "residual"]] + [[lab, format_scalar(r)] for lab, r in zip(labels, res.residuals)]
    return Result(report, lines, rows, EXIT_OK if res else EXIT_FAIL)


def cmd_geodesic_complete(args, cfg) -> Result:
    d = _space(args)
    g = _parse_metric(args.metric, cfg)
    x_m = parse_vector(args.mvector, d, cfg)
    comp = solve_completion(x_m, g, d)
    body = comp.to_dict()
    report = {"schema": "gw/1", "kind": "geodesic_complete", "space": d.name, "metric": str(g),
              "mode": cfg.mode, "x_m": _fmt_vec(x_m), **body}
    sysd = body["system"]
    lines = [f"completion on {d.name}, metric {g}, x_m = {_fmt_vec(x_m)}",
             f"  columns: {' '.join(sysd['cols']) or '-'}"]
    for lab, row, b in zip(sysd["rows"], sysd["A"], sysd["B"]):
        lines.append(f"  {lab:>8} | {' '.join(f'{v:>6}' for v in row)} | {b:>6}")
    lines.append(f"  rank A = {comp.rank_A}, rank (A|B) = {comp.rank_AB}")
    lines.append(f"  x_k = {body['solution']}" if comp.exists else "  no completion exists")
    rows = [["row", *sysd["cols"], "B"]] + [[lab, *row, b] for lab, row, b in
                                           zip(sysd["rows"], sysd["A"], sysd["B"])]
    return Result(report, lines, rows, EXIT_OK if comp.exists else EXIT_FAIL)


def cmd_classify(args, cfg) -> Result:
    d = _space(args)
    plan = ProbePlan(n_random=args.random_probes, seed=cfg.seed)
    if args.metric:
        g = _parse_metric(args.metric, cfg)
        res = is_go_metric(d, g, plan)
        report = {"schema": "gw/1", "kind": "go_metric", "space": d.name, "seed": cfg.seed,
                  "probe_counts": plan.counts(d), "mode": cfg.mode, **res.to_dict()}
        lines = [f"{d.name}, metric {g}: {'pass' if res.passed else 'FAIL'} "
                 f"({res.probes_run} probes run)"]
        if res.witness:
            lines.append(f"  witness ({res.witness.kind}, band {res.witness.to_dict()['band']}): "
                         f"{res.witness.to_dict()['coefficients']}")
        else:
            lines.append("  pass is certified only on the probe set")
        rows = _kv_rows(res.to_dict())
        return Result(report, lines, rows, EXIT_OK if res.passed else EXIT_FAIL)
    metrics = metric_grid() + random_metrics(args.random_metrics, cfg.seed)
    c = classify_space(d, metrics, plan)
    report = c.to_dict()
    lines = [f"{d.name}: {c.verdict}",
             f"  metrics: {report['metrics_passed']}/{report['metrics_tested']} pass; probes per "
             f"metric: {c.probe_counts['structured']} structured + {c.probe_counts['random']} random "
             f"(seed {cfg.seed:#x})"]
    if c.witness is not None:
        w = c.witness.witness.to_dict()
        lines.append(f"  witness: metric {c.witness.metric}, {w['kind']} probe in {w['band']}: "
                     f"{w['coefficients']}")
    lines.append("  note: pass is certified only on the probe set; fail is exact")
    rows = [["metric", "pass", "probes_run", "witness_band", "witness"]]
    for r in c.results:
        w = r.witness.to_dict() if r.witness else None
        rows.append([str(r.metric), r.passed, r.probes_run, w["band"] if w else "",
                     json.dumps(w["coefficients"], sort_keys=True) if w else ""])
    return Result(report, lines, rows, EXIT_FAIL if c.verdict == "undetermined" else EXIT_OK)


def cmd_enumerate(args, cfg) -> Result:
    g = _parse_metric(args.metric, cfg)
    if args.which == "su2":
        fams, d, listed = enumerate_su2(g), su2_space(), None
    else:
        fams, d = enumerate_stiefel4(g), stiefel4_space()
        listed = compare_with_listed(g, seed=cfg.seed)
    report = {"schema": "gw/1", "kind": "families", "space": d.name, "metric": str(g),
              "families": [f.to_dict() for f in fams]}
    lines = [f"geodesic vectors of {d.name}, metric {g}: {len(fams)} families"]
    lines += ["  " + f.canonical() for f in fams]
    if listed is not None:
        report["listed_family_check"] = listed
        lines.append("comparison with the listed families for this metric case:")
        for item in listed:
            tail = "" if item["verdict"] == "confirmed" else f", counterexample {item['counterexample']}"
            lines.append(f"  {item['verdict']:<17} {item['listed_family']}{tail}")
    rows = [["name", "free_params", "fixed_zero", "nonzero", "constraints"]] + [
        [f.name, " ".join(f.free_params), " ".join(f.fixed_zero), " ".join(f.nonzero),
         "; ".join(str(c) for c in f.constraints)] for f in fams]
    return Result(report, lines, rows)


def cmd_sample(args, cfg) -> Result:
    d = _space(args)
    g = _parse_metric(args.metric, cfg)
    pts = sample_arrays(d, g, args.attempts, cfg.seed)
    labels = d.algebra.labels
    report = {"schema": "gw/1", "kind": "samples", "space": d.name, "metric": str(g),
              "seed": cfg.seed, "attempts": args.attempts, "found": len(pts),
              "vectors": [[float(f"{x:.12g}") for x in p] for p in pts], "labels": list(labels)}
    lines = [f"{len(pts)} distinct unit geodesic vectors from {args.attempts} starts on {d.name}, "
             f"metric {g}"]
    lines += ["  " + " ".join(f"{x:+.6f}" for x in p) for p in pts[:50]]
    if len(pts) > 50:
        lines.append(f"  ... {len(pts) - 50} more (use --format json or csv)")
    rows = [list(labels)] + [[f"{x:.12g}" for x in p] for p in pts]
    code = EXIT_OK
    if args.check_families:
        check = completeness_report(d.name, g, args.attempts, cfg.seed)
        report["completeness"] = check
        lines.append(f"max distance to the enumerated families: {check['max_distance']:.3e} "
                     f"({'ok' if check['ok'] else 'OUTSIDE'} at {check['tolerance']:g})")
        lines += [f"  {name}: {n}" for name, n in check["per_family"].items()]
        code = EXIT_OK if check["ok"] else EXIT_FAIL
    return Result(report, lines, rows, code)


def cmd_verify(args, cfg) -> Result:
    d = _space(args)
    g = _parse_metric(args.metric, cfg)
    v0 = parse_vector(args.v0, d, cfg)
    flow = euler_arnold_flow(v0, g, d, args.T, args.dt, args.sample_every)
    summ = flow.summary()
    stationary = flow.drift < 1e-8
    # the oracle passes when the flow agrees with the algebraic criterion
    geodesic = bool(is_geodesic_vector(v0, g, d))
    report = {"schema": "gw/1", "kind": "euler_arnold", "space": d.name, "metric": str(g),
              "dt": args.dt, "stationary": stationary, "geodesic": geodesic,
              "agrees": stationary == geodesic, **summ}
    if args.csv:
        flow.to_csv(args.csv)
    lines = [f"Euler-Arnold flow on {d.name}, metric {g}, v0 = {_fmt_vec(v0)}",
             f"  T = {args.T}, dt = {args.dt}",
             f"  drift = {flow.drift:.3e} ({'stationary' if stationary else 'moves'})",
             f"  relative energy drift = {flow.energy_drift:.3e}",
             f"  algebraic test: {'geodesic' if geodesic else 'not geodesic'} "
             f"({'agrees' if stationary == geodesic else 'DISAGREES'})"]
    rows = list(csv.reader(io.StringIO(flow.to_csv())))
    return Result(report, lines, rows, EXIT_OK if stationary == geodesic else EXIT_FAIL)


def cmd_sweep(args, cfg) -> Result:
    fn = roundtrip_sweep if args.which == "roundtrip" else prop13_sweep
    report = fn(args.samples, cfg.seed)
    bad = report.get("failures", report.get("disagreements", []))
    lines = [f"{report['kind']}: {report['samples']} samples, seed {cfg.seed:#x}: "
             f"{'ok' if report['ok'] else 'FAILED'}"]
    for k in ("per_space", "outcomes"):
        if k in report:
            lines += [f"  {name}: {val}" for name, val in report[k].items()]
    lines += [f"  failure: {b}" for b in bad]
    return Result(report, lines, _kv_rows(report), EXIT_OK if report["ok"] else EXIT_FAIL)


# ---------------------------------------------------------------- parser

def _add_space(p, with_params=True):
    p.add_argument("space", help="catalog name (optionally name:p1,p2) or a space JSON file")
    if with_params:
        p.add_argument("params", nargs="*", type=int, help="catalog parameters")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("table", "json", "csv"),
                        default=argparse.SUPPRESS, help="output format (default table)")
    common.add_argument("--output", "-o", default=argparse.SUPPRESS, help="write output to a file")
    common.add_argument("--seed", type=_seed, default=argparse.SUPPRESS,
                        help="random seed (default $GW_SEED or 0x5EED)")
    common.add_argument("--tolerance", type=float, default=argparse.SUPPRESS,
                        help="zero tolerance in float mode (default 1e-9)")
    common.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="gowallach", parents=[common],
                                description="Geodesic vectors and the g.o. property on "
                                            "generalized Wallach spaces, in exact arithmetic.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("space", help="catalog and descriptor checks", parents=[common])
    ssub = sp.add_subparsers(dest="space_cmd", required=True)
    ssub.add_parser("list", parents=[common]).set_defaults(func=cmd_space_list)
    show = ssub.add_parser("show", parents=[common], help="dump and verify a catalog space")
    _add_space(show)
    show.set_defaults(func=cmd_space_show)
    check = ssub.add_parser("check", parents=[common], help="load and verify a space JSON file")
    check.add_argument("file")
    check.set_defaults(func=cmd_space_check)

    sy = sub.add_parser("symbols", parents=[common], help="triple symbols [ijk]")
    _add_space(sy)
    sy.set_defaults(func=cmd_symbols)

    gp = sub.add_parser("geodesic", help="geodesic-vector test and completion", parents=[common])
    gsub = gp.add_subparsers(dest="geo_cmd", required=True)
    gc = gsub.add_parser("check", parents=[common])
    _add_space(gc, with_params=False)
    gc.add_argument("--metric", required=True, help="l1,l2,l3 (rationals such as 3/2)")
    gc.add_argument("--vector", required=True, help="label=value pairs, e.g. e12=1,e34=-2")
    gc.set_defaults(func=cmd_geodesic_check)
    gm = gsub.add_parser("complete", parents=[common])
    _add_space(gm, with_params=False)
    gm.add_argument("--metric", required=True)
    gm.add_argument("--mvector", required=True, help="m-part as label=value pairs")
    gm.set_defaults(func=cmd_geodesic_complete)

    cl = sub.add_parser("classify", parents=[common], help="g.o. test for one metric or the grid")
    _add_space(cl)
    cl.add_argument("--metric", help="test one metric instead of the grid")
    cl.add_argument("--random-probes", type=int, default=200)
    cl.add_argument("--random-metrics", type=int, default=50)
    cl.set_defaults(func=cmd_classify)

    en = sub.add_parser("enumerate", parents=[common], help="closed-form geodesic-vector families")
    en.add_argument("which", choices=("su2", "stiefel4"))
    en.add_argument("--metric", required=True)
    en.set_defaults(func=cmd_enumerate)

    sa = sub.add_parser("sample", parents=[common], help="Newton multistart sampler")
    _add_space(sa, with_params=False)
    sa.add_argument("--metric", required=True)
    sa.add_argument("--attempts", type=int, default=100)
    sa.add_argument("--check-families", action="store_true",
                    help="measure each sample's distance to the closed-form families "
                         "(su2_trivial and stiefel_n:4 only)")
    sa.set_defaults(func=cmd_sample)

    ve = sub.add_parser("verify", parents=[common], help="dynamical oracles")
    vsub = ve.add_subparsers(dest="verify_cmd", required=True)
    ea = vsub.add_parser("euler-arnold", parents=[common])
    ea.add_argument("space", nargs="?", default="su2_trivial")
    ea.add_argument("--metric", required=True)
    ea.add_argument("--v0", required=True, help="initial velocity as label=value pairs")
    ea.add_argument("--T", type=float, default=10.0)
    ea.add_argument("--dt", type=float, default=1e-3)
    ea.add_argument("--sample-every", type=int, default=100)
    ea.add_argument("--csv", help="also write the trajectory CSV here")
    ea.set_defaults(func=cmd_verify)

    sw = sub.add_parser("sweep", parents=[common], help="seeded consistency sweeps")
    sw.add_argument("which", choices=("roundtrip", "prop13"))
    sw.add_argument("--samples", type=int, default=10_000)
    sw.set_defaults(func=cmd_sweep)
    return p


def render(result: Result, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result.report, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(result.rows or _kv_rows(result.report))
        return buf.getvalue()
    return "\n".join(result.table) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    verbose = getattr(args, "verbose", 0) or 0
    logging.basicConfig(level=logging.DEBUG if verbose > 1 else
                        logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    seed = getattr(args, "seed", None)
    if seed is None:
        env = os.environ.get("GW_SEED")
        try:
            seed = _seed(env) if env else DEFAULT_SEED
        except argparse.ArgumentTypeError as exc:
            print(f"gowallach: GW_SEED: {exc}", file=sys.stderr)
            return EXIT_USAGE
    cfg = SessionConfig(seed=seed, fmt=getattr(args, "fmt", "table"),
                        output=getattr(args, "output", None),
                        tolerance=getattr(args, "tolerance", 1e-9))
    try:
        result = args.func(args, cfg)
    except (InvalidDescriptor, InvalidAlgebra) as exc:
        print(f"gowallach: invalid descriptor: {exc}", file=sys.stderr)
        return EXIT_DESCRIPTOR
    except (GWError, ValueError) as exc:
        print(f"gowallach: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        set_tolerance(1e-9)
    text = render(result, cfg.fmt)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return result.code

