"""Probe-based g.o. test for a fixed metric and metric-grid classification.

A metric fails as soon as one probe vector x in m has no k-part a with
x + a geodesic; that failure is a proof. Passing means every probe had a
completion, which is evidence only up to the probe set.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .decomposition import SpaceDescriptor
from .geodesic import InvariantMetric, solve_completion
from .lie import AlgebraVector

DEFAULT_SEED = 0x5EED
STRUCTURED_COEFFS = ((1, 1), (1, -1), (1, 2), (2, 1))
BANDS = ((1, 2), (1, 3), (2, 3))
RANDOM_COEFFS = (-3, -2, -1, 1, 2, 3)


@dataclass(frozen=True)
class Probe:
    kind: str           # "structured" or "random"
    band: tuple[int, ...]  # module numbers the probe touches
    vector: AlgebraVector

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "band": "+".join(f"m{i}" for i in self.band),
            "coefficients": self.vector.as_dict(),
        }


@dataclass(frozen=True)
class ProbePlan:
    """Structured probes ``alpha e + beta f`` for e in m_i, f in m_j and every
    band (i, j), followed by ``n_random`` dense random probes in m."""

    coeff_grid: tuple[tuple[int, int], ...] = STRUCTURED_COEFFS
    n_random: int = 200
    seed: int = DEFAULT_SEED

    def probes(self, d: SpaceDescriptor) -> list[Probe]:
        return list(self.iter_probes(d))

    def iter_probes(self, d: SpaceDescriptor) -> Iterator[Probe]:
        alg = d.algebra
        mods = d.modules()
        for i, j in BANDS:
            for e, f in itertools.product(mods[i - 1], mods[j - 1]):
                for alpha, beta in self.coeff_grid:
                    c = [Fraction(0)] * alg.dim
                    c[e] = Fraction(alpha)
                    c[f] = Fraction(beta)
                    yield Probe("structured", (i, j), AlgebraVector(alg, c))
        rng = random.Random(self.seed)
        for _ in range(self.n_random):
            c = [Fraction(0)] * alg.dim
            for idx in d.m:
                c[idx] = Fraction(rng.choice(RANDOM_COEFFS))
            yield Probe("random", (1, 2, 3), AlgebraVector(alg, c))

    def counts(self, d: SpaceDescriptor) -> dict:
        mods = d.modules()
        structured = sum(len(mods[i - 1]) * len(mods[j - 1]) for i, j in BANDS) * len(self.coeff_grid)
        return {"structured": structured, "random": self.n_random}


@dataclass
class MetricResult:
    metric: InvariantMetric
    passed: bool
    probes_run: int
    witness: Probe | None = None
    rhs_always_zero: bool = True   # rhs_B vanished on every probe evaluated

    def to_dict(self) -> dict:
        return {
            "metric": str(self.metric),
            "pass": self.passed,
            "probes_run": self.probes_run,
            "rhs_always_zero": self.rhs_always_zero,
            "witness": self.witness.to_dict() if self.witness else None,
        }


def is_go_metric(d: SpaceDescriptor, g: InvariantMetric, plan: ProbePlan | None = None,
                 probes: Sequence[Probe] | None = None) -> MetricResult:
    """Run the completion test on every probe; stop at the first failure."""
    plan = plan or ProbePlan()
    if probes is None:
        probes = plan.probes(d)
    rhs_zero = True
    for n, probe in enumerate(probes, start=1):
        comp = solve_completion(probe.vector, g, d)
        if any(v != 0 for v in comp.system.rhs_B):
            rhs_zero = False
        if not comp.exists:
            return MetricResult(g, False, n, probe, rhs_zero)
    return MetricResult(g, True, len(probes), None, rhs_zero)


def metric_grid(values: Sequence[int] = (1, 2, 3)) -> list[InvariantMetric]:
    """All triples over ``values`` with scalar multiples of an earlier triple removed."""
    seen = set()
    out = []
    for lam in itertools.product(values, repeat=3):
        fr = tuple(Fraction(v) for v in lam)
        key = tuple(v / fr[0] for v in fr)
        if key in seen:
            continue
        seen.add(key)
        out.append(InvariantMetric(*fr))
    return out


def random_metrics(n: int, seed: int = DEFAULT_SEED) -> list[InvariantMetric]:
    """Seeded rational metrics with numerators in 1..12 and denominators in 1..6."""
    rng = random.Random(seed ^ 0xA11CE)
    return [
        InvariantMetric(*(Fraction(rng.randint(1, 12), rng.randint(1, 6)) for _ in range(3)))
        for _ in range(n)
    ]


@dataclass
class GOClassification:
    space: str
    verdict: str   # go_for_all_metrics | go_iff_standard | undetermined
    results: list[MetricResult]
    plan: ProbePlan
    probe_counts: dict
    witness: MetricResult | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "schema": "gw/1",
            "kind": "classification",
            "space": self.space,
            "verdict": self.verdict,
            "seed": self.plan.seed,
            "probe_counts": self.probe_counts,
            "metrics_tested": len(self.results),
            "metrics_passed": sum(r.passed for r in self.results),
            "witness": self.witness.to_dict() if self.witness else None,
            "table": [r.to_dict() for r in self.results],
            "notes": list(self.notes),
        }


def classify_space(d: SpaceDescriptor, metrics: Sequence[InvariantMetric] | None = None,
                   plan: ProbePlan | None = None, n_random_metrics: int = 50) -> GOClassification:
    """Evaluate :func:`is_go_metric` over a metric list (default: the {1,2,3}^3
    grid up to scaling plus seeded random metrics) and summarize.

    go_for_all_metrics: every metric passes. go_iff_standard: exactly the
    equal-lambda metrics pass, and at least one of each kind was tested.
    Anything else is undetermined.
    """
    plan = plan or ProbePlan()
    if metrics is None:
        metrics = metric_grid() + random_metrics(n_random_metrics, plan.seed)
    probes = plan.probes(d)
    results = [is_go_metric(d, g, plan, probes) for g in metrics]
    std = [r for r in results if r.metric.is_standard()]
    nonstd = [r for r in results if not r.metric.is_standard()]
    if all(r.passed for r in results):
        verdict = "go_for_all_metrics"
    elif std and nonstd and all(r.passed for r in std) and not any(r.passed for r in nonstd):
        verdict = "go_iff_standard"
    else:
        verdict = "undetermined"
    witness = next((r for r in results if not r.passed), None)
    notes = ["pass is certified only on the probe set; fail is exact"]
    return GOClassification(d.name, verdict, results, plan, plan.counts(d), witness, notes)
