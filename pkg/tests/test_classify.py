import json
from fractions import Fraction

import pytest

from gowallach.catalog import catalog
from gowallach.classify import (
    BANDS, ProbePlan, classify_space, is_go_metric, metric_grid, random_metrics,
)
from gowallach.decomposition import permuted
from gowallach.geodesic import InvariantMetric


def test_metric_grid_dedup():
    grid = metric_grid()
    assert len(grid) == 25
    assert sum(g.is_standard() for g in grid) == 1
    keys = {tuple(v / g.lambda1 for v in g.lambdas) for g in grid}
    assert len(keys) == 25


def test_random_metrics_seeded():
    assert random_metrics(5, 1) == random_metrics(5, 1)
    assert random_metrics(5, 1) != random_metrics(5, 2)


def test_probe_plan_counts(stiefel4):
    plan = ProbePlan(n_random=7)
    probes = plan.probes(stiefel4)
    counts = plan.counts(stiefel4)
    assert counts == {"structured": (1 * 2 + 1 * 2 + 2 * 2) * 4, "random": 7}
    assert len(probes) == counts["structured"] + counts["random"]
    assert all(p.vector.support() for p in probes)
    assert all(set(p.vector.support()) <= set(stiefel4.m) for p in probes)


def test_standard_metric_passes(any_space):
    res = is_go_metric(any_space, InvariantMetric(1, 1, 1), ProbePlan(n_random=20))
    assert res.passed and res.witness is None


def test_type1_passes_nonstandard():
    res = is_go_metric(catalog("product_s2_cubed"), InvariantMetric(1, 2, 3))
    assert res.passed and res.rhs_always_zero


def test_stiefel4_fails_with_band_witness(stiefel4):
    res = is_go_metric(stiefel4, InvariantMetric(1, 1, 2))
    assert not res.passed
    assert res.witness.kind == "structured"
    assert res.witness.band in ((1, 2), (1, 3))
    out = res.to_dict()
    assert out["pass"] is False and out["witness"]["band"] in ("m1+m2", "m1+m3")


@pytest.mark.parametrize("lam", [(1, 2, 2), (2, 1, 2), (2, 2, 1), (1, 2, 3)])
def test_witness_band_uses_distinct_lambdas(lam):
    for d in (catalog("stiefel_n", 5), catalog("so_klm", 2, 2, 1), catalog("quad_diag_su2")):
        res = is_go_metric(d, InvariantMetric(*lam), ProbePlan(n_random=0))
        assert not res.passed
        i, j = res.witness.band
        assert res.witness.band in BANDS
        assert lam[i - 1] != lam[j - 1]


def test_classify_small_metric_list():
    d = catalog("stiefel_n", 4)
    metrics = [InvariantMetric(1, 1, 1), InvariantMetric(1, 2, 3), InvariantMetric(2, 2, 1)]
    cls = classify_space(d, metrics, ProbePlan(n_random=10))
    assert cls.verdict == "go_iff_standard"
    assert cls.witness is not None and not cls.witness.passed
    data = cls.to_dict()
    assert data["schema"] == "gw/1" and data["metrics_tested"] == 3 and data["metrics_passed"] == 1


def test_classify_undetermined_without_standard():
    cls = classify_space(catalog("stiefel_n", 4), [InvariantMetric(1, 2, 3)], ProbePlan(n_random=0))
    assert cls.verdict == "undetermined"


def test_classify_deterministic():
    d = catalog("so_klm", 2, 2, 1)
    plan = ProbePlan(n_random=20)
    a = json.dumps(classify_space(d, metric_grid()[:6], plan).to_dict(), sort_keys=True)
    b = json.dumps(classify_space(d, metric_grid()[:6], plan).to_dict(), sort_keys=True)
    assert a == b


def test_scaling_and_permutation_invariance(stiefel4):
    plan = ProbePlan(n_random=30)
    for lam in [(1, 1, 2), (1, 2, 3), (3, 3, 3), (2, 1, 1)]:
        g = InvariantMetric(*lam)
        base = is_go_metric(stiefel4, g, plan).passed
        assert is_go_metric(stiefel4, g.scaled(Fraction(7, 3)), plan).passed == base
        for order in [(2, 3, 1), (3, 2, 1)]:
            assert is_go_metric(permuted(stiefel4, order), g.permuted(order), plan).passed == base
