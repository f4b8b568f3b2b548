import numpy as np
import pytest

from gowallach.catalog import catalog
from gowallach.geodesic import InvariantMetric, geodesic_equations, is_geodesic_vector
from gowallach.lie import AlgebraVector
from gowallach.sampler import canonical_direction, dedup, sample_arrays, sample_geodesic_vectors, variety_distance
from gowallach.scalar import set_tolerance
from gowallach.solve_small import completeness_report
from gowallach.errors import InvalidInput


def test_su2_samples_lie_in_module_union():
    d = catalog("su2_trivial")
    pts = sample_arrays(d, InvariantMetric(1, 2, 3), 200)
    assert pts
    for p in pts:
        assert np.sum(np.abs(p) > 1e-8) == 1
    # three axes, up to sign
    assert len(pts) == 3


def test_samples_are_geodesic_in_float_mode():
    d = catalog("stiefel_n", 5)
    g = InvariantMetric(1, 2, 3)
    vecs = sample_geodesic_vectors(d, g, 30)
    assert vecs
    try:
        set_tolerance(1e-9)
        for v in vecs:
            assert is_geodesic_vector(v, g, d)
            assert abs(np.linalg.norm([float(c) for c in v.coeffs]) - 1) < 1e-12
    finally:
        set_tolerance(1e-9)


def test_sampler_deterministic():
    d = catalog("stiefel_n", 4)
    g = InvariantMetric(1, 2, 3)
    a = sample_arrays(d, g, 50, seed=42)
    b = sample_arrays(d, g, 50, seed=42)
    assert len(a) == len(b) and all(np.array_equal(x, y) for x, y in zip(a, b))


def test_canonical_direction_and_dedup():
    x = canonical_direction(np.array([0.0, -3.0, 4.0]))
    assert x[1] > 0 and np.isclose(np.linalg.norm(x), 1.0)
    assert not np.signbit(x[0])
    pts = dedup([np.array([1.0, 0.0]), np.array([1.0, 1e-9]), np.array([0.0, 1.0])])
    assert len(pts) == 2


def test_variety_distance():
    d = catalog("su2_trivial")
    eqs = geodesic_equations(InvariantMetric(1, 2, 3), d)
    order = d.algebra.labels
    assert variety_distance([1.0, 0.0, 0.0], eqs, order) == 0.0
    dist = variety_distance([1.0, 0.1, 0.0], eqs, order)
    # an upper bound from the projection, close to the true distance 0.1
    assert 0.1 - 1e-12 <= dist < 0.11


@pytest.mark.parametrize("lam", [(1, 1, 2), (1, 2, 3)])
def test_completeness_small(lam):
    rep = completeness_report("stiefel_n:4", InvariantMetric(*lam), n_attempts=100)
    assert rep["ok"] and rep["solutions"] > 0
    assert sum(rep["per_family"].values()) == rep["solutions"]


def test_completeness_rejects_other_spaces():
    with pytest.raises(InvalidInput):
        completeness_report("stiefel_n:5", InvariantMetric(1, 2, 3))
