"""Exit criteria, one test per criterion, each at its stated tolerance.

Every test records a one-line PASS/FAIL verdict in RESULTS (printed in the
pytest terminal summary) before asserting. Run this file directly to get
just the verdict lines.
"""

import itertools
import json
import random
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gowallach.catalog import catalog  # noqa: E402
from gowallach.classify import classify_space, metric_grid  # noqa: E402
from gowallach.decomposition import triple_symbols  # noqa: E402
from gowallach.geodesic import InvariantMetric, is_geodesic_vector  # noqa: E402
from gowallach.scalar import set_tolerance  # noqa: E402
from gowallach.solve_small import (  # noqa: E402
    LISTED_FAMILIES, compare_with_listed, completeness_report, enumerate_stiefel4, enumerate_su2,
    family_vector, stiefel4_space, su2_space,
)
from gowallach.sweeps import prop13_sweep, roundtrip_sweep  # noqa: E402
from gowallach.verify import integrate  # noqa: E402

from conftest import CATALOG_INSTANCES  # noqa: E402

GOLDEN = Path(__file__).parent / "golden"
CASE_METRICS = {1: (1, 1, 2), 2: (1, 2, 1), 3: (2, 1, 1), 4: (1, 2, 3)}
# brute-force sum over so(4) basis matrices, frozen (see test_decomposition)
STIEFEL4_123 = "1/2"
TYPE23_SPACES = [("so_klm", 2, 2, 1), ("so_klm", 2, 2, 2), ("stiefel_n", 4), ("stiefel_n", 5),
                 ("quad_diag_su2",)]

pytestmark = pytest.mark.acceptance

RESULTS: dict[int, str] = {}
# JSON reports of criteria 3-6 from their first run, for the determinism check
REPORTS: dict[str, str] = {}


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = f"CRITERION {n}: {'PASS' if ok else 'FAIL'} {detail}"


def dump(report) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


# ---------------------------------------------------------------- runners
# (shared by the criteria and the determinism re-run)

def run_completeness() -> str:
    return dump([completeness_report("stiefel_n:4", InvariantMetric(*CASE_METRICS[c]), 1000)
                 for c in (1, 2, 3, 4)])


def run_classify_type1() -> str:
    return dump(classify_space(catalog("product_s2_cubed")).to_dict())


def run_classify_type23() -> str:
    return dump([classify_space(catalog(s[0], *s[1:])).to_dict() for s in TYPE23_SPACES])


def run_roundtrip() -> str:
    return dump(roundtrip_sweep(10_000))


# ---------------------------------------------------------------- criteria

def test_criterion_1_su2_families():
    golden = json.loads((GOLDEN / "su2_families.json").read_text())
    t0 = time.perf_counter()
    mismatches = []
    for key in ("1,1,2", "1,2,1", "2,1,1", "1,2,3", "1,1,1"):
        fams = enumerate_su2(InvariantMetric.parse(key))
        got = sorted((sorted(f.free_params), sorted(f.fixed_zero)) for f in fams
                     if not f.constraints)
        want = sorted((sorted(f["free_params"]), sorted(f["fixed_zero"])) for f in golden[key])
        if got != want or len(fams) != len(want):
            mismatches.append(key)
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed < 1.0
    record(1, ok, f"su2 families match golden for 5 metrics (mismatches {mismatches}), {elapsed:.2f}s < 1s")
    assert ok


def test_criterion_2_stiefel4_soundness():
    t0 = time.perf_counter()
    d = stiefel4_space()
    rng = random.Random(0x5EED)
    bad, checked, missing = [], 0, []
    for case, lam in CASE_METRICS.items():
        g = InvariantMetric(*lam)
        fams = enumerate_stiefel4(g)
        for fam in fams:
            for _ in range(100):
                checked += 1
                if not is_geodesic_vector(family_vector(fam.instantiate(rng), d), g, d):
                    bad.append((case, fam.name))
        by_free = {}
        for f in fams:
            by_free.setdefault(tuple(sorted(f.free_params)), []).append(f)
        listed = {r["listed_family"]: r for r in compare_with_listed(g)}
        for lf in LISTED_FAMILIES:
            if case not in lf.cases or listed[lf.text]["verdict"] != "confirmed":
                continue
            match = by_free.get(tuple(sorted(lf.shape)), [])
            if lf.listed_constraints:
                match = [f for f in match if [str(c) for c in f.constraints] == ["e_13*e_23 + e_14*e_24"]]
            if not match:
                missing.append((case, lf.text))
    # the explicitly named isolated families of the all-distinct case
    case4 = {tuple(f.free_params) for f in enumerate_stiefel4(InvariantMetric(1, 2, 3))}
    for must in [("e_12",), ("e_34",), ("e_13", "e_14", "e_23", "e_24")]:
        if must not in case4:
            missing.append((4, must))
    elapsed = time.perf_counter() - t0
    ok = not bad and not missing and elapsed < 5.0
    record(2, ok, f"{checked} family instances exactly geodesic ({len(bad)} bad), "
                  f"listed families missing {missing}, {elapsed:.2f}s < 5s")
    assert ok


def test_criterion_3_stiefel4_completeness():
    t0 = time.perf_counter()
    text = run_completeness()
    elapsed = time.perf_counter() - t0
    REPORTS["3"] = text
    reports = json.loads(text)
    worst = max(r["max_distance"] for r in reports)
    n = sum(r["solutions"] for r in reports)
    ok = all(r["ok"] for r in reports) and worst <= 1e-8 and elapsed < 30.0
    record(3, ok, f"{n} distinct sampled solutions over 4 cases, max distance to families "
                  f"{worst:.2e} <= 1e-8, {elapsed:.1f}s < 30s")
    assert ok


def test_criterion_4_type1_all_metrics():
    t0 = time.perf_counter()
    text = run_classify_type1()
    elapsed = time.perf_counter() - t0
    REPORTS["4"] = text
    rep = json.loads(text)
    rhs_zero = all(row["rhs_always_zero"] for row in rep["table"])
    ok = (rep["verdict"] == "go_for_all_metrics" and rep["metrics_tested"] == 75 and rhs_zero
          and elapsed < 10.0)
    record(4, ok, f"product_s2_cubed verdict {rep['verdict']} over {rep['metrics_tested']} metrics, "
                  f"rhs_B identically zero: {rhs_zero}, {elapsed:.1f}s < 10s")
    assert ok


def test_criterion_5_type23_iff_standard():
    t0 = time.perf_counter()
    text = run_classify_type23()
    elapsed = time.perf_counter() - t0
    REPORTS["5"] = text
    reports = json.loads(text)
    grid = {str(g) for g in metric_grid()}
    verdicts, bad_witness = {}, []
    for rep in reports:
        verdicts[rep["space"]] = rep["verdict"]
        for row in rep["table"]:
            if row["metric"] not in grid or row["pass"]:
                continue
            lam = [float(x.split("/")[0]) / float(x.split("/")[1]) if "/" in x else float(x)
                   for x in row["metric"].split(",")]
            w = row["witness"]
            i, j = (int(m[1]) for m in w["band"].split("+"))
            if (w["kind"] != "structured" or w["band"] not in ("m1+m2", "m1+m3")
                    or lam[i - 1] == lam[j - 1]):
                bad_witness.append((rep["space"], row["metric"], w["band"]))
    ok = (all(v == "go_iff_standard" for v in verdicts.values()) and not bad_witness
          and elapsed < 60.0)
    record(5, ok, f"verdicts {sorted(set(verdicts.values()))} on {len(verdicts)} spaces, "
                  f"structured m1+m2 or m1+m3 witness with distinct lambdas for every failing grid metric "
                  f"({len(bad_witness)} exceptions), {elapsed:.1f}s < 60s")
    assert ok


def test_criterion_6_completion_round_trip():
    t0 = time.perf_counter()
    text = run_roundtrip()
    elapsed = time.perf_counter() - t0
    REPORTS["6"] = text
    rep = json.loads(text)
    ok = rep["ok"] and rep["samples"] == 10_000 and elapsed < 60.0
    record(6, ok, f"{rep['samples']} samples, {len(rep['failures'])} rank or round-trip failures, "
                  f"{elapsed:.1f}s < 60s")
    assert ok


def test_criterion_7_prop13_equivalence():
    t0 = time.perf_counter()
    rep = prop13_sweep(10_000)
    elapsed = time.perf_counter() - t0
    ok = rep["ok"] and rep["samples"] == 10_000 and all(rep["outcomes"].values())
    record(7, ok, f"{rep['samples']} samples on so(5) and su(2) descriptors, "
                  f"{len(rep['disagreements'])} disagreements, outcomes {rep['outcomes']}, {elapsed:.1f}s")
    assert ok


def test_criterion_8_triple_symbols():
    problems = []
    for inst in CATALOG_INSTANCES:
        d = catalog(inst[0], *inst[1:])
        t = triple_symbols(d)
        for key, v in t.values.items():
            if any(t[p] != v for p in itertools.permutations(key)):
                problems.append((d.name, key, "symmetry"))
            if len(set(key)) < 3 and v != 0:
                problems.append((d.name, key, "coincident"))
    prod_zero = all(v == 0 for v in triple_symbols(catalog("product_s2_cubed")).values.values())
    s4 = str(triple_symbols(catalog("stiefel_n", 4))["123"])
    ok = not problems and prod_zero and s4 == STIEFEL4_123
    record(8, ok, f"{len(CATALOG_INSTANCES)} catalog spaces symmetric and vanishing on coincident indices "
                  f"({len(problems)} problems), product all zero: {prod_zero}, stiefel_n:4 [123] = {s4}")
    assert ok


def test_criterion_9_euler_arnold():
    t0 = time.perf_counter()
    d = su2_space()
    g = InvariantMetric(1, 2, 3)
    rng = random.Random(0x5EED)
    reps = [family_vector(f.instantiate(rng), d) for f in enumerate_su2(g) for _ in range(5)]
    V_fam = np.array([[float(x) for x in v.coeffs] for v in reps])
    nrng = np.random.default_rng(0x5EED)
    V_rand = nrng.standard_normal((100, 3))
    try:
        set_tolerance(1e-9)
        nongeo = all(not is_geodesic_vector(d.algebra.vector(list(v)), g, d) for v in V_rand)
    finally:
        set_tolerance(1e-9)
    drift_f, edrift_f, _ = integrate(V_fam, g, d, T=10.0, dt=1e-3)
    drift_r, edrift_r, _ = integrate(V_rand, g, d, T=10.0, dt=1e-3)
    elapsed = time.perf_counter() - t0
    energy = max(edrift_f.max(), edrift_r.max())
    ok = (drift_f.max() < 1e-8 and nongeo and drift_r.min() > 1e-3 and energy < 1e-8
          and elapsed < 20.0)
    record(9, ok, f"max drift of {len(V_fam)} family representatives {drift_f.max():.1e} < 1e-8, "
                  f"min drift of 100 non-geodesic starts {drift_r.min():.3f} > 1e-3, "
                  f"max relative energy drift {energy:.1e} < 1e-8, {elapsed:.1f}s < 20s")
    assert ok


def test_criterion_10_determinism():
    runners = {"3": run_completeness, "4": run_classify_type1, "5": run_classify_type23,
               "6": run_roundtrip}
    differing = []
    for key, fn in runners.items():
        first = REPORTS.get(key) or fn()
        if fn() != first:
            differing.append(key)
    ok = not differing
    record(10, ok, f"JSON reports of criteria 3-6 byte-identical across two runs "
                   f"(differing: {differing})")
    assert ok


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items(), key=lambda kv: (len(kv[0]), kv[0])):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    for n in sorted(RESULTS):
        print(RESULTS[n])
    raise SystemExit(1 if failed else 0)
