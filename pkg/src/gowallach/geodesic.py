"""Invariant metrics, the geodesic-vector criterion and the linear system
for the k-part of a geodesic vector.

Everything is written against the Gram matrix of B, so bases only need to
be B-orthogonal, not B-orthonormal, and exact inputs stay rational.

Sign convention for the completion system ``A x = rhs`` (rows indexed by
m-basis vectors ``e``, columns by k-basis vectors ``e0_i``)::

    A[e][i] = -<[e0_i, e]_m, x_m>
    rhs[e]  =  <[x_m, e]_m, x_m>

so that ``x_k + x_m`` is a geodesic vector exactly when ``A x = rhs``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from . import linalg
from .decomposition import SpaceDescriptor, project
from .errors import AlgebraMismatch, InvalidMetric, SupportError, ZeroVector
from .lie import AlgebraVector, bracket
from .polynomial import Polynomial
from .scalar import format_scalar, is_exact, is_zero, parse_scalar, scalars_equal

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class InvariantMetric:
    """``<.,.> = l1 B|m1 + l2 B|m2 + l3 B|m3`` with all ``l_i > 0``."""

    lambda1: object
    lambda2: object
    lambda3: object

    def __post_init__(self):
        for n, v in enumerate(self.lambdas, start=1):
            if isinstance(v, str):
                v = parse_scalar(v)
                object.__setattr__(self, f"lambda{n}", v)
            elif isinstance(v, int):
                v = Fraction(v)
                object.__setattr__(self, f"lambda{n}", v)
            if not v > 0:
                raise InvalidMetric(f"lambda{n} must be positive, got {v}")

    @classmethod
    def parse(cls, text: str) -> "InvariantMetric":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise InvalidMetric(f"metric needs three comma-separated values, got {text!r}")
        try:
            return cls(*(parse_scalar(p) for p in parts))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidMetric(f"bad metric {text!r}: {exc}") from None

    @property
    def lambdas(self) -> tuple:
        return (self.lambda1, self.lambda2, self.lambda3)

    @property
    def exact(self) -> bool:
        return is_exact(*self.lambdas)

    def is_standard(self) -> bool:
        l1, l2, l3 = self.lambdas
        return scalars_equal(l1, l2) and scalars_equal(l1, l3)

    def scaled(self, c) -> "InvariantMetric":
        return InvariantMetric(*(c * v for v in self.lambdas))

    def permuted(self, order: Sequence[int]) -> "InvariantMetric":
        return InvariantMetric(*(self.lambdas[o - 1] for o in order))

    def per_index(self, d: SpaceDescriptor) -> list:
        """lambda of the module containing each basis index (0 on k)."""
        lam = (Fraction(0),) + self.lambdas
        return [lam[mod] for mod in d.module_of]

    def __str__(self) -> str:
        return ",".join(format_scalar(v) for v in self.lambdas)


def _check_alg(v: AlgebraVector, d: SpaceDescriptor) -> None:
    if v.algebra is not d.algebra:
        raise AlgebraMismatch("vector is not over the descriptor's algebra")


def apply_metric_operator(x: AlgebraVector, g: InvariantMetric, d: SpaceDescriptor) -> AlgebraVector:
    """Lambda x: multiplication by lambda_i on m_i, zero on k."""
    _check_alg(x, d)
    lam = g.per_index(d)
    return AlgebraVector(x.algebra, [l * c for l, c in zip(lam, x.coeffs)])


def killing(u: AlgebraVector, v: AlgebraVector) -> object:
    u._check(v)
    gram = u.algebra.gram
    total = Fraction(0)
    for a, x in enumerate(u.coeffs):
        if x == 0:
            continue
        row = gram[a]
        for b, y in enumerate(v.coeffs):
            if y != 0 and row[b]:
                total += x * row[b] * y
    return total


def inner_product(u: AlgebraVector, v: AlgebraVector, g: InvariantMetric, d: SpaceDescriptor):
    """sum_i lambda_i B(proj_i u, proj_i v); k-components are ignored."""
    _check_alg(u, d)
    _check_alg(v, d)
    if any(not is_zero(u.coeffs[i]) or not is_zero(v.coeffs[i]) for i in d.k):
        log.debug("inner_product: ignoring k-components")
    return killing(apply_metric_operator(u, g, d), project(v, "m", d))


class GeodesicCheck(NamedTuple):
    is_geodesic: bool
    residuals: tuple

    def __bool__(self) -> bool:
        return self.is_geodesic


def residuals(X: AlgebraVector, g: InvariantMetric, d: SpaceDescriptor) -> tuple:
    """<[X, e]_m, X_m> for every m-basis vector e, in the order of ``d.m``."""
    _check_alg(X, d)
    lam = g.per_index(d)
    c = X.coeffs
    out = []
    for terms in d.residual_terms:
        r = Fraction(0)
        for a, h, val in terms:
            if c[a] != 0 and c[h] != 0:
                r += c[a] * c[h] * lam[h] * val
        out.append(r)
    return tuple(out)


def is_geodesic_vector(X: AlgebraVector, g: InvariantMetric, d: SpaceDescriptor) -> GeodesicCheck:
    if X.is_zero():
        raise ZeroVector("geodesic vectors are nonzero")
    res = residuals(X, g, d)
    return GeodesicCheck(all(is_zero(r) for r in res), res)


@dataclass(frozen=True)
class GeodesicSystem:
    """``matrix_A x = rhs_B`` for the k-coefficients x of a geodesic vector."""

    matrix_A: tuple[tuple, ...]
    rhs_B: tuple
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]

    @property
    def exact(self) -> bool:
        return all(is_exact(*r) for r in self.matrix_A) and is_exact(*self.rhs_B)

    def to_dict(self) -> dict:
        return {
            "A": [[format_scalar(v) for v in row] for row in self.matrix_A],
            "B": [format_scalar(v) for v in self.rhs_B],
            "rows": list(self.row_labels),
            "cols": list(self.col_labels),
        }


def _check_m_support(x_m: AlgebraVector, d: SpaceDescriptor) -> None:
    _check_alg(x_m, d)
    if any(x_m.coeffs[i] != 0 for i in d.k):
        raise SupportError("x_m has components in k")
    if x_m.is_zero():
        raise ZeroVector("x_m must be nonzero")


def assemble_system(x_m: AlgebraVector, g: InvariantMetric, d: SpaceDescriptor) -> GeodesicSystem:
    _check_m_support(x_m, d)
    lam = g.per_index(d)
    c = x_m.coeffs
    col_pos = {i: n for n, i in enumerate(d.k)}
    rows_A, rhs = [], []
    for terms in d.residual_terms:
        row = [Fraction(0)] * len(d.k)
        r = Fraction(0)
        for a, h, val in terms:
            if c[h] == 0:
                continue
            w = lam[h] * val * c[h]
            if a in col_pos:
                row[col_pos[a]] -= w
            elif c[a] != 0:
                r += c[a] * w
        rows_A.append(tuple(row))
        rhs.append(r)
    labels = d.algebra.labels
    return GeodesicSystem(
        tuple(rows_A), tuple(rhs), d.m, d.k,
        tuple(labels[i] for i in d.m), tuple(labels[i] for i in d.k),
    )


@dataclass(frozen=True)
class Completion:
    system: GeodesicSystem
    rank_A: int
    rank_AB: int
    solution: AlgebraVector | None  # the k-part x_k, when one exists

    @property
    def exists(self) -> bool:
        return self.solution is not None

    def to_dict(self) -> dict:
        return {
            "system": self.system.to_dict(),
            "rank_A": self.rank_A,
            "rank_AB": self.rank_AB,
            "exists": self.exists,
            "solution": self.solution.as_dict() if self.solution is not None else None,
        }


def solve_completion(x_m: AlgebraVector, g: InvariantMetric, d: SpaceDescriptor) -> Completion:
    """Rank test rank(A) == rank(A|B) plus one solution when it passes.

    Exact systems use Bareiss elimination for the ranks and the echelon
    particular solution (free variables zero); float systems use SVD ranks
    and the minimum-norm least-squares solution.
    """
    system = assemble_system(x_m, g, d)
    A, b = system.matrix_A, system.rhs_B
    aug = [list(row) + [v] for row, v in zip(A, b)]
    if system.exact:
        rank_a = linalg.bareiss_rank(A) if d.k else 0
        rank_ab = linalg.bareiss_rank(aug)
        sol = None
        if rank_a == rank_ab:
            if d.k:
                _, sol = linalg.echelon_solve(A, b)
            else:
                sol = []
    else:
        rank_a = linalg.float_rank(A) if d.k else 0
        rank_ab = linalg.float_rank(aug)
        sol = (linalg.float_solve(A, b) if d.k else []) if rank_a == rank_ab else None
    if sol is None:
        return Completion(system, rank_a, rank_ab, None)
    coeffs = [Fraction(0)] * d.algebra.dim
    for i, v in zip(d.k, sol):
        coeffs[i] = v
    x_k = AlgebraVector(d.algebra, coeffs)
    # round trip: the completed vector must satisfy the criterion
    if not is_geodesic_vector(x_k + x_m, g, d):
        raise ArithmeticError("completion failed the geodesic round-trip check")
    return Completion(system, rank_a, rank_ab, x_k)


def completion_exists(x_m: AlgebraVector, g: InvariantMetric, d: SpaceDescriptor) -> AlgebraVector | None:
    """A k-part x_k with x_k + x_m geodesic, or None when none exists."""
    return solve_completion(x_m, g, d).solution


class Prop13(NamedTuple):
    bracket_in_k: bool      # [a + x, Lambda x] in k
    adjoint_identity: bool  # <[a, x], y> = <x, [x, y]_m> for all y in m
    orthogonality: bool     # <[a + x, y]_m, x> = 0 for all y in m

    def agree(self) -> bool:
        return self.bracket_in_k == self.adjoint_identity == self.orthogonality


def check_prop13(a: AlgebraVector, x: AlgebraVector, g: InvariantMetric, d: SpaceDescriptor) -> Prop13:
    """Evaluate the three algebraic forms of "exp t(a+x) . o is a geodesic"
    independently of each other and of :func:`residuals`."""
    _check_alg(a, d)
    if any(a.coeffs[i] != 0 for i in d.m):
        raise SupportError("a must lie in k")
    _check_m_support(x, d)
    ax = a + x
    w = bracket(ax, apply_metric_operator(x, g, d))
    cond2 = all(is_zero(w.coeffs[i]) for i in d.m)
    ys = [d.algebra.basis_vector(i) for i in d.m]
    ad_ax = bracket(a, x)
    cond3 = all(
        is_zero(inner_product(ad_ax, y, g, d) - inner_product(x, project(bracket(x, y), "m", d), g, d))
        for y in ys
    )
    cond4 = all(
        is_zero(inner_product(project(bracket(ax, y), "m", d), x, g, d)) for y in ys
    )
    return Prop13(cond2, cond3, cond4)


def geodesic_equations(g: InvariantMetric, d: SpaceDescriptor) -> list[Polynomial]:
    """The residuals <[X, e]_m, X_m> as quadratic polynomials in the basis
    coefficients of X (variables named by basis labels), one per m-basis e."""
    lam = g.per_index(d)
    labels = d.algebra.labels
    polys = []
    for terms in d.residual_terms:
        coeffs: dict = {}
        for a, h, val in terms:
            key = Polynomial.monomial_key({labels[a]: 1, labels[h]: 1})
            coeffs[key] = coeffs.get(key, 0) + lam[h] * val
        polys.append(Polynomial(coeffs, order=labels))
    return polys
