"""Seeded randomized consistency sweeps with JSON-ready reports.

``roundtrip_sweep`` checks the completion solver against an independent
rank computation; ``prop13_sweep`` checks that the three algebraic forms of
the geodesic condition agree with each other.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from . import linalg
from .catalog import catalog
from .decomposition import SpaceDescriptor
from .geodesic import InvariantMetric, check_prop13, is_geodesic_vector, solve_completion
from .lie import AlgebraVector

ROUNDTRIP_SPACES = (
    ("su2_trivial",), ("stiefel_n", 4), ("stiefel_n", 5), ("so_klm", 2, 2, 1),
    ("so_klm", 2, 2, 2), ("product_s2_cubed",), ("quad_diag_su2",),
)
PROP13_SPACES = (("su2_trivial",), ("stiefel_n", 5), ("so_klm", 2, 2, 1))
COEFFS = (-3, -2, -1, 1, 2, 3)


def _random_metric(rng: random.Random) -> InvariantMetric:
    # a quarter standard, a quarter with one coincidence, half generic
    roll = rng.random()
    a = Fraction(rng.randint(1, 6), rng.randint(1, 3))
    if roll < 0.25:
        return InvariantMetric(a, a, a)
    b = Fraction(rng.randint(1, 6), rng.randint(1, 3))
    if roll < 0.5:
        lam = [a, a, b]
        rng.shuffle(lam)
        return InvariantMetric(*lam)
    return InvariantMetric(a, b, Fraction(rng.randint(1, 6), rng.randint(1, 3)))


def _random_in(rng: random.Random, d: SpaceDescriptor, idx: Sequence[int], density: float) -> AlgebraVector:
    c = [Fraction(0)] * d.algebra.dim
    for i in idx:
        if rng.random() < density:
            c[i] = Fraction(rng.choice(COEFFS))
    if idx and all(c[i] == 0 for i in idx):
        c[rng.choice(list(idx))] = Fraction(rng.choice(COEFFS))
    return AlgebraVector(d.algebra, c)


def _random_m(rng, d):
    # sparse vectors (often inside one or two modules) alongside dense ones
    density = rng.choice((0.2, 0.5, 1.0))
    mods = rng.choice(((1,), (2,), (3,), (1, 2), (1, 3), (2, 3), (1, 2, 3)))
    idx = [i for m in mods for i in d.modules()[m - 1]]
    return _random_in(rng, d, idx, density)


def _gj_rank(rows) -> int:
    return linalg.echelon_solve([list(r) for r in rows], [Fraction(0)] * len(rows))[0]


def roundtrip_sweep(n: int = 10_000, seed: int = 0x5EED,
                    spaces: Sequence[tuple] = ROUNDTRIP_SPACES) -> dict:
    """Completion exists iff rank(A) = rank(A|B), with ranks recomputed by
    Gauss-Jordan elimination (the solver itself uses Bareiss), and every
    completion passes the geodesic test."""
    rng = random.Random(seed)
    built = [catalog(s[0], *s[1:]) for s in spaces]
    per_space = {d.name: {"samples": 0, "completable": 0} for d in built}
    failures = []
    for trial in range(n):
        d = rng.choice(built)
        g = _random_metric(rng)
        x_m = _random_m(rng, d)
        comp = solve_completion(x_m, g, d)
        A = comp.system.matrix_A
        aug = [list(r) + [b] for r, b in zip(A, comp.system.rhs_B)]
        ra = _gj_rank(A) if d.k else 0
        rab = _gj_rank(aug)
        ok = (ra == comp.rank_A and rab == comp.rank_AB and comp.exists == (ra == rab))
        if comp.exists:
            ok = ok and bool(is_geodesic_vector(comp.solution + x_m, g, d))
        stats = per_space[d.name]
        stats["samples"] += 1
        stats["completable"] += comp.exists
        if not ok and len(failures) < 10:
            failures.append({"trial": trial, "space": d.name, "metric": str(g),
                             "x_m": x_m.as_dict()})
    return {
        "schema": "gw/1",
        "kind": "roundtrip_sweep",
        "seed": seed,
        "samples": n,
        "per_space": per_space,
        "failures": failures,
        "ok": not failures,
    }


def prop13_sweep(n: int = 10_000, seed: int = 0x5EED,
                 spaces: Sequence[tuple] = PROP13_SPACES) -> dict:
    """Agreement of the three algebraic forms of the geodesic condition.

    Half the samples use a = the completion of x (when one exists) so the
    "all true" outcome is exercised as well as "all false".
    """
    rng = random.Random(seed)
    built = [catalog(s[0], *s[1:]) for s in spaces]
    outcomes = {"all_true": 0, "all_false": 0}
    disagreements = []
    for trial in range(n):
        d = rng.choice(built)
        g = _random_metric(rng)
        x = _random_m(rng, d)
        a = _random_in(rng, d, d.k, 0.5) if d.k else AlgebraVector(d.algebra, [Fraction(0)] * d.algebra.dim)
        if rng.random() < 0.5:
            sol = solve_completion(x, g, d).solution
            if sol is not None:
                a = sol
        res = check_prop13(a, x, g, d)
        if res.agree():
            outcomes["all_true" if res.bracket_in_k else "all_false"] += 1
        elif len(disagreements) < 10:
            disagreements.append({"trial": trial, "space": d.name, "metric": str(g),
                                  "conditions": list(res)})
    return {
        "schema": "gw/1",
        "kind": "prop13_sweep",
        "seed": seed,
        "samples": n,
        "outcomes": outcomes,
        "disagreements": disagreements,
        "ok": not disagreements,
    }
