import json
import random
from fractions import Fraction

import pytest

from gowallach.errors import InvalidMetric
from gowallach.geodesic import InvariantMetric, is_geodesic_vector
from gowallach.scalar import QuadraticSurd
from gowallach.solve_small import (
    LISTED_FAMILIES, compare_with_listed, enumerate_stiefel4, enumerate_su2, family_vector,
    metric_case, stiefel4_space, su2_space,
)

CASE_METRICS = {1: (1, 1, 2), 2: (1, 2, 1), 3: (2, 1, 1), 4: (1, 2, 3)}


def _shape_key(fam):
    return (sorted(fam["free_params"]), sorted(fam["fixed_zero"]))


@pytest.mark.parametrize("key", ["1,1,2", "1,2,1", "2,1,1", "1,2,3", "1,1,1"])
def test_su2_golden(golden_dir, key):
    golden = json.loads((golden_dir / "su2_families.json").read_text())[key]
    fams = enumerate_su2(InvariantMetric.parse(key))
    assert sorted(_shape_key(f.to_dict()) for f in fams) == sorted(_shape_key(f) for f in golden)
    assert all(not f.constraints for f in fams)


@pytest.mark.parametrize("lam", [(1, 1, 2), (2, 1, 1), (1, 2, 3), (1, 1, 1), (Fraction(1, 2), 3, 7)])
def test_su2_soundness(lam):
    g = InvariantMetric(*lam)
    d = su2_space()
    rng = random.Random(1)
    for fam in enumerate_su2(g):
        for _ in range(100):
            assert is_geodesic_vector(family_vector(fam.instantiate(rng), d), g, d)


STIEFEL_METRICS = list(CASE_METRICS.values()) + [(1, 1, 1), (3, 2, 1), (1, 5, 5), (2, 3, 7), (1, 3, 2)]


@pytest.mark.parametrize("lam", STIEFEL_METRICS)
def test_stiefel4_soundness(lam):
    g = InvariantMetric(*lam)
    d = stiefel4_space()
    rng = random.Random(2)
    for fam in enumerate_stiefel4(g):
        for _ in range(100):
            values = fam.instantiate(rng)
            assert fam.contains(values)
            assert all(values[v] != 0 for v in fam.nonzero)
            assert is_geodesic_vector(family_vector(values, d), g, d), fam.name


def test_twisted_branch_only_when_mu_nu_positive():
    names = lambda lam: {f.name for f in enumerate_stiefel4(InvariantMetric(*lam))}
    assert any("twisted" in n for n in names((1, 2, 3)))
    assert any("twisted" in n for n in names((3, 2, 1)))
    assert not any("twisted" in n for n in names((2, 1, 3)))
    assert not any("twisted" in n for n in names((1, 1, 2)))


def test_twisted_irrational_ratio_is_exact():
    fams = {f.name: f for f in enumerate_stiefel4(InvariantMetric(1, 2, 3))}
    fam = fams["e_34!=0,e_12!=0:twisted+"]
    values = fam.instantiate(random.Random(0))
    assert isinstance(values["e_12"], QuadraticSurd)
    d = stiefel4_space()
    assert is_geodesic_vector(family_vector(values, d), InvariantMetric(1, 2, 3), d)


@pytest.mark.parametrize("case", [1, 2, 3, 4])
def test_listed_families_appear(case):
    g = InvariantMetric(*CASE_METRICS[case])
    report = {r["listed_family"]: r for r in compare_with_listed(g)}
    emitted = enumerate_stiefel4(g)
    for listed in LISTED_FAMILIES:
        if case not in listed.cases or report[listed.text]["verdict"] != "confirmed":
            continue
        labels = sorted(listed.shape)
        match = [f for f in emitted if sorted(f.free_params) == labels]
        assert match, listed.text
        assert report[listed.text]["covered_by_enumeration"]


def test_case4_isolated_families():
    fams = {f.name: f for f in enumerate_stiefel4(InvariantMetric(1, 2, 3))}
    assert fams["e_34=0,e_12!=0"].free_params == ("e_12",)
    assert fams["e_34!=0,e_12=0"].free_params == ("e_34",)
    m23 = fams["e_34=0,e_12=0"]
    assert [str(c) for c in m23.constraints] == ["e_13*e_23 + e_14*e_24"]
    assert fams["e_34=0,e_12=0"].free_params == ("e_13", "e_14", "e_23", "e_24")


def test_case1_orthogonality_family():
    fams = {f.name: f for f in enumerate_stiefel4(InvariantMetric(1, 1, 2))}
    assert [str(c) for c in fams["e_34=0,e_12=0"].constraints] == ["e_13*e_23 + e_14*e_24"]


def test_case3_axis_family():
    fams = {f.name: f for f in enumerate_stiefel4(InvariantMetric(2, 1, 1))}
    assert fams["e_34!=0,e_12=0"].free_params == ("e_34",)
    assert fams["e_34=0,e_12=0"].constraints == ()


@pytest.mark.parametrize("case", [1, 2])
def test_mixed_branch_flags_missing_relations(case):
    g = InvariantMetric(*CASE_METRICS[case])
    rows = [r for r in compare_with_listed(g) if r["listed_family"].startswith("a34 e34 + a") and
            "a12" not in r["listed_family"]]
    assert rows and all(r["verdict"] == "needs_constraints" for r in rows)
    for r in rows:
        assert r["implied_constraints"] and r["counterexample"]


def test_compare_report_deterministic():
    g = InvariantMetric(1, 2, 3)
    assert json.dumps(compare_with_listed(g)) == json.dumps(compare_with_listed(g))
    assert compare_with_listed(InvariantMetric(1, 1, 1)) == []


def test_metric_case():
    assert [metric_case(InvariantMetric(*CASE_METRICS[c])) for c in (1, 2, 3, 4)] == [1, 2, 3, 4]
    assert metric_case(InvariantMetric(2, 2, 2)) == 0


def test_rejects_bad_metric():
    with pytest.raises(InvalidMetric):
        InvariantMetric(-1, 1, 1)


def test_family_serialization():
    for fam in enumerate_stiefel4(InvariantMetric(1, 2, 3)):
        data = fam.to_dict()
        assert set(data) == {"name", "free_params", "fixed_zero", "nonzero", "constraints", "description"}
        assert fam.canonical().startswith(fam.name)
