import itertools
from fractions import Fraction

import numpy as np
import pytest

from gowallach.catalog import catalog
from gowallach.errors import InvalidInput, UnsupportedSpace
from gowallach.geodesic import InvariantMetric, is_geodesic_vector
from gowallach.solve_small import enumerate_su2, family_vector
from gowallach.verify import euler_arnold_flow, integrate

import random

SU2 = catalog("su2_trivial")
PATTERNS = [(1, 1, 2), (1, 2, 1), (2, 1, 1), (1, 2, 3), (1, 1, 1)]
GRID = [Fraction(k, 5) for k in range(-5, 6)]


def test_examples():
    alg = SU2.algebra
    g = InvariantMetric(1, 2, 3)
    assert euler_arnold_flow(alg.vector({"X_a": 1}), g, SU2).drift < 1e-8
    assert euler_arnold_flow(alg.vector({"ih": 1, "X_a": 1}), g, SU2).drift > 1e-3
    rng = np.random.default_rng(0)
    drift, edrift, _ = integrate(rng.standard_normal((20, 3)), InvariantMetric(1, 1, 1), SU2)
    assert drift.max() < 1e-8 and edrift.max() < 1e-8


@pytest.mark.parametrize("lam", PATTERNS)
def test_stationarity_equivalence(lam):
    g = InvariantMetric(*lam)
    grid = [c for c in itertools.product(GRID, repeat=3) if any(c)]
    rng = random.Random(4)
    reps = [family_vector(f.instantiate(rng), SU2) for f in enumerate_su2(g) for _ in range(3)]
    vectors = [SU2.algebra.vector(list(c)) for c in grid] + reps
    V0 = np.array([[float(x) for x in v.coeffs] for v in vectors])
    V0 /= np.linalg.norm(V0, axis=1)[:, None]
    drift, edrift, _ = integrate(V0, g, SU2, T=10.0, dt=1e-3)
    for v, dr in zip(vectors, drift):
        assert (dr < 1e-8) == bool(is_geodesic_vector(v, g, SU2)), (v, dr)
    assert edrift.max() < 1e-8


def test_flow_result_and_csv(tmp_path):
    g = InvariantMetric(1, 2, 3)
    v0 = SU2.algebra.vector({"ih": 1, "X_a": Fraction(1, 2)})
    flow = euler_arnold_flow(v0, g, SU2, T=1.0, dt=1e-2, sample_every=10)
    assert len(flow.times) == 11 and flow.times[-1] == pytest.approx(1.0)
    assert flow.drift >= flow.drift_log.max() - 1e-15
    assert np.allclose(flow.energy, flow.energy[0], rtol=1e-8)
    text = flow.to_csv(tmp_path / "f.csv")
    head = text.splitlines()[0]
    assert head == "t,ih,X_a,Y_a,drift,energy"
    assert (tmp_path / "f.csv").read_text() == text
    assert set(flow.summary()) == {"T", "drift", "relative_energy_drift", "v0", "v_end"}


def test_errors():
    g = InvariantMetric(1, 2, 3)
    v = SU2.algebra.vector({"ih": 1})
    with pytest.raises(InvalidInput):
        euler_arnold_flow(v, g, SU2, T=1.0, dt=0.0)
    with pytest.raises(InvalidInput):
        euler_arnold_flow(v, g, SU2, T=1e-4, dt=1e-3)
    with pytest.raises(InvalidInput):
        euler_arnold_flow(SU2.algebra.zero(), g, SU2)
    s = catalog("stiefel_n", 4)
    with pytest.raises(UnsupportedSpace):
        euler_arnold_flow(s.algebra.vector({"e_12": 1}), g, s)
