"""Numeric multistart sampler for the geodesic-vector equations of any space.

Unknowns are all coefficients of X (k and m). The residual map is the list
of geodesic residuals plus the sphere condition ``|X|^2 = 1``; Gauss-Newton
steps use least squares so the system may be over- or under-determined.
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from .decomposition import SpaceDescriptor
from .geodesic import InvariantMetric
from .lie import AlgebraVector
from .polynomial import Polynomial

log = logging.getLogger(__name__)

TOL = 1e-12
MAX_ITER = 200
DAMPING = 0.5
DEDUP = 1e-6
SNAP = 1e-6


def residual_tensor(g: InvariantMetric, d: SpaceDescriptor) -> np.ndarray:
    """T with ``residual_r(x) = x @ T[r] @ x``."""
    lam = [float(v) for v in g.per_index(d)]
    T = np.zeros((len(d.m), d.algebra.dim, d.algebra.dim))
    for r, terms in enumerate(d.residual_terms):
        for a, h, val in terms:
            T[r, a, h] += lam[h] * float(val)
    return T


class _System:
    def __init__(self, T: np.ndarray):
        self.T = T
        self.S = T + T.transpose(0, 2, 1)

    def F(self, x):
        return np.append(np.einsum("a,rab,b->r", x, self.T, x), x @ x - 1.0)

    def J(self, x):
        return np.vstack([self.S @ x, 2.0 * x])


def canonical_direction(x: np.ndarray) -> np.ndarray:
    """Unit vector with its first clearly nonzero coordinate positive."""
    x = x / np.linalg.norm(x)
    for v in x:
        if abs(v) > 1e-9:
            return (x if v > 0 else -x) + 0.0  # + 0.0 turns -0.0 into 0.0
    return x


def _newton(sys: _System, x: np.ndarray) -> np.ndarray | None:
    f = sys.F(x)
    fn = np.linalg.norm(f)
    converged_at = None
    for it in range(MAX_ITER):
        if fn < TOL and converged_at is None:
            converged_at = it
        step = np.linalg.lstsq(sys.J(x), -f, rcond=None)[0]
        t = 1.0
        while True:
            xn = x + t * step
            fnew = sys.F(xn)
            nn = np.linalg.norm(fnew)
            if nn < fn or t < 1e-6:
                break
            t *= DAMPING
        if not nn < fn:
            break
        x, f, fn = xn, fnew, nn
        # keep polishing after convergence while the residual still drops
        # fast; near branch intersections this pulls small coordinates to 0
        if converged_at is not None and it - converged_at > 60:
            break
    if not fn < TOL:
        return None
    return _snap(sys, x)


def _snap(sys: _System, x: np.ndarray, cut: float = SNAP) -> np.ndarray:
    """Zero coordinates below ``cut`` when that still leaves a solution.

    Near intersections of solution branches the residual vanishes to third
    order, so float Newton stalls a few 1e-9 away from the exact branch.
    """
    small = np.abs(x) < cut
    if not small.any() or small.all():
        return x
    y = np.where(small, 0.0, x)
    y /= np.linalg.norm(y)
    return y if np.linalg.norm(sys.F(y)) < TOL else x


def sample_geodesic_vectors(d: SpaceDescriptor, g: InvariantMetric, n_attempts: int = 100,
                            seed: int = 0x5EED) -> list[AlgebraVector]:
    """Distinct unit geodesic vectors reached by damped Newton from seeded
    random starts on the coefficient sphere (half of them sparse), up to sign."""
    return [AlgebraVector(d.algebra, list(map(float, x))) for x in
            sample_arrays(d, g, n_attempts, seed)]


def sample_arrays(d: SpaceDescriptor, g: InvariantMetric, n_attempts: int = 100,
                  seed: int = 0x5EED) -> list[np.ndarray]:
    sys = _System(residual_tensor(g, d))
    rng = np.random.default_rng(seed)
    found = []
    dim = d.algebra.dim
    for _ in range(n_attempts):
        x0 = rng.standard_normal(dim)
        # half the starts sit on a random coordinate subspace: full-support
        # starts tend to fall into the largest basin only
        if rng.random() < 0.5:
            keep = rng.permutation(dim)[: rng.integers(1, dim + 1)]
            mask = np.zeros(dim, dtype=bool)
            mask[keep] = True
            x0 = np.where(mask, x0, 0.0)
        x = _newton(sys, x0 / np.linalg.norm(x0))
        if x is not None:
            found.append(canonical_direction(x))
    log.debug("sampler: %d/%d starts converged", len(found), n_attempts)
    return dedup(found)


def dedup(points: Sequence[np.ndarray], tol: float = DEDUP) -> list[np.ndarray]:
    """Deterministic greedy deduplication over the lexicographically sorted set."""
    ordered = sorted(points, key=lambda p: tuple(np.round(p, 12)))
    kept: list[np.ndarray] = []
    for p in ordered:
        if all(np.linalg.norm(p - q) > tol for q in kept):
            kept.append(p)
    return kept


def variety_distance(point: Sequence[float], equations: Sequence[Polynomial],
                     order: Sequence[str], max_iter: int = 100) -> float:
    """Upper bound on the distance from ``point`` to the zero set of
    ``equations``, by Gauss-Newton projection (minimum-norm steps)."""
    x = np.array(point, dtype=float)
    start = x.copy()
    names = list(order)

    def evaluate(y):
        vals = dict(zip(names, y))
        F = np.array([float(e.evaluate(vals)) for e in equations])
        J = np.zeros((len(equations), len(names)))
        for r, e in enumerate(equations):
            for name, v in e.gradient(vals).items():
                J[r, names.index(name)] = float(v)
        return F, J

    if not equations:
        return 0.0
    for _ in range(max_iter):
        F, J = evaluate(x)
        if np.linalg.norm(F) < 1e-15:
            break
        x = x + np.linalg.lstsq(J, -F, rcond=None)[0]
    F, _ = evaluate(x)
    if np.linalg.norm(F) > 1e-12:
        return float("inf")
    return float(np.linalg.norm(x - start))
