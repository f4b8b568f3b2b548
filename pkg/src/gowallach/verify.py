"""Euler-Arnold flow for a left-invariant metric on a Lie group (K trivial).

The reduced geodesic equation for the body velocity is

    v' = Lambda^{-1} [Lambda v, v],

whose equilibria are exactly the v with [v, Lambda v] = 0, i.e. the geodesic
vectors. Integrating it with fixed-step RK4 gives a dynamical cross-check of
the algebraic criterion that shares no code with it beyond the structure
constants.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .decomposition import SpaceDescriptor
from .errors import InvalidInput, UnsupportedSpace
from .geodesic import InvariantMetric
from .lie import AlgebraVector


@dataclass
class FlowResult:
    times: np.ndarray        # sample times
    velocities: np.ndarray   # v(t) at the sample times, shape (n, dim)
    drift_log: np.ndarray    # metric norm |v(t) - v(0)| at the sample times
    energy: np.ndarray       # <v(t), v(t)> at the sample times
    drift: float             # max over every step, not only the samples
    energy_drift: float      # max relative |E(t) - E(0)| / E(0) over every step
    labels: tuple[str, ...] = ()

    def to_csv(self, target=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", *self.labels, "drift", "energy"])
        for t, v, dr, e in zip(self.times, self.velocities, self.drift_log, self.energy):
            w.writerow([f"{t:.6g}", *(f"{x:.17g}" for x in v), f"{dr:.6e}", f"{e:.17g}"])
        text = buf.getvalue()
        if target is not None:
            Path(target).write_text(text)
        return text

    def summary(self) -> dict:
        return {
            "T": float(self.times[-1]),
            "drift": self.drift,
            "relative_energy_drift": self.energy_drift,
            "v0": [float(x) for x in self.velocities[0]],
            "v_end": [float(x) for x in self.velocities[-1]],
        }


class _Field:
    """Vectorised right-hand side, working on arrays of shape (batch, dim)."""

    def __init__(self, g: InvariantMetric, d: SpaceDescriptor):
        if d.k:
            raise UnsupportedSpace("the Euler-Arnold oracle needs k = 0 (a Lie group)")
        alg = d.algebra
        n = alg.dim
        self.C = np.zeros((n, n, n))
        for (a, b), row in alg.structure.items():
            for c, v in row:
                self.C[a, b, c] = float(v)
        self.C_flat = self.C.reshape(n * n, n)
        self.lam = np.array([float(v) for v in g.per_index(d)])
        self.gram = np.array([[float(v) for v in row] for row in alg.gram])
        # metric matrix: <x, y> = x^T M y with M = diag(lam) B
        self.M = self.lam[:, None] * self.gram

    def __call__(self, V: np.ndarray) -> np.ndarray:
        # sum_ab (lam V)_a V_b C_abc, as one matrix product over flattened (a, b)
        outer = ((V * self.lam)[:, :, None] * V[:, None, :]).reshape(len(V), -1)
        return (outer @ self.C_flat) / self.lam

    def norm2(self, V: np.ndarray) -> np.ndarray:
        return ((V @ self.M) * V).sum(axis=1)


def _check_steps(T: float, dt: float) -> int:
    if not dt > 0:
        raise InvalidInput("dt must be positive")
    if T < dt:
        raise InvalidInput("T must be at least dt")
    return int(round(T / dt))


def integrate(V0: np.ndarray, g: InvariantMetric, d: SpaceDescriptor, T: float = 10.0,
              dt: float = 1e-3, sample_every: int = 0):
    """RK4 over a batch of initial velocities.

    Returns ``(drift, energy_drift, samples)`` where the first two are arrays
    over the batch and ``samples`` is a list of ``(t, V)`` snapshots taken
    every ``sample_every`` steps (empty when 0).
    """
    f = _Field(g, d)
    steps = _check_steps(T, dt)
    V = np.array(V0, dtype=float, ndmin=2)
    start = V.copy()
    e0 = f.norm2(V)
    drift = np.zeros(len(V))
    edrift = np.zeros(len(V))
    samples = [(0.0, V.copy())] if sample_every else []
    for step in range(1, steps + 1):
        k1 = f(V)
        k2 = f(V + 0.5 * dt * k1)
        k3 = f(V + 0.5 * dt * k2)
        k4 = f(V + dt * k3)
        V = V + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        drift = np.maximum(drift, np.sqrt(np.maximum(f.norm2(V - start), 0.0)))
        edrift = np.maximum(edrift, np.abs(f.norm2(V) - e0) / e0)
        if sample_every and (step % sample_every == 0 or step == steps):
            samples.append((step * dt, V.copy()))
    return drift, edrift, samples


def euler_arnold_flow(v0: AlgebraVector, g: InvariantMetric, d: SpaceDescriptor,
                      T: float = 10.0, dt: float = 1e-3, sample_every: int = 100) -> FlowResult:
    if v0.algebra is not d.algebra:
        raise InvalidInput("v0 is not over the descriptor's algebra")
    if v0.is_zero():
        raise InvalidInput("v0 must be nonzero")
    f = _Field(g, d)
    drift, edrift, samples = integrate([float(x) for x in v0.coeffs], g, d, T, dt,
                                       max(1, sample_every))
    times = np.array([t for t, _ in samples])
    vel = np.vstack([V[0] for _, V in samples])
    start = vel[0]
    return FlowResult(
        times=times,
        velocities=vel,
        drift_log=np.sqrt(np.maximum(f.norm2(vel - start), 0.0)),
        energy=f.norm2(vel),
        drift=float(drift[0]),
        energy_drift=float(edrift[0]),
        labels=d.algebra.labels,
    )
