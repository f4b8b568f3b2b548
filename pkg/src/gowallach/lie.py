"""Compact Lie algebras as exact structure-constant tensors.

An algebra is a basis plus a sparse tensor ``c`` with
``[e_a, e_b] = sum_g c[a][b][g] e_g`` and the Gram matrix of the negative
Killing form in that basis. The Gram is always recomputed from the
structure constants (``-trace(ad e_a . ad e_b)``), never taken on trust.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg
from .errors import (
    AlgebraMismatch,
    InvalidAlgebra,
    InvalidDimension,
    InvalidInput,
    NotCompactSemisimple,
)
from .scalar import format_scalar, is_zero, parse_scalar, to_exact

Bracket = Mapping[tuple[int, int], tuple[tuple[int, Fraction], ...]]


@dataclass(frozen=True, eq=False)
class LieAlgebraData:
    """Basis-indexed structure constants and the negative Killing Gram matrix.

    Build instances with :meth:`from_structure`; it checks antisymmetry, the
    Jacobi identity and positive definiteness before returning.
    """

    labels: tuple[str, ...]
    structure: Bracket
    gram: tuple[tuple[Fraction, ...], ...]
    name: str = ""
    _index: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return len(self.labels)

    @classmethod
    def from_structure(
        cls,
        labels: Sequence[str],
        entries: Iterable[tuple[int, int, int, object]],
        name: str = "",
        gram: Sequence[Sequence[object]] | None = None,
        check: bool = True,
    ) -> "LieAlgebraData":
        """Assemble an algebra from ``(a, b, g, c)`` entries meaning
        ``[e_a, e_b]`` has ``e_g``-coefficient ``c``.

        Entries may be given for one ordering of each pair only; the other
        ordering is filled in by antisymmetry. If both are given they must
        agree. A supplied ``gram`` is compared against the ad-trace Gram.
        """
        labels = tuple(labels)
        dim = len(labels)
        if dim == 0:
            raise InvalidDimension("algebra must have positive dimension")
        if len(set(labels)) != dim:
            raise InvalidInput("basis labels must be distinct")
        raw: dict[tuple[int, int, int], Fraction] = {}
        for a, b, g, c in entries:
            a, b, g = int(a), int(b), int(g)
            if not (0 <= a < dim and 0 <= b < dim and 0 <= g < dim):
                raise InvalidInput(f"structure index out of range: {(a, b, g)}")
            if (a, b, g) in raw:
                raise InvalidInput(f"duplicate structure entry {(a, b, g)}")
            raw[(a, b, g)] = to_exact(parse_scalar(c) if isinstance(c, str) else Fraction(c))
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (a, b, g), c in raw.items():
            if a == b:
                if c != 0:
                    raise InvalidAlgebra(f"[{labels[a]}, {labels[a]}] must vanish")
                continue
            other = raw.get((b, a, g))
            if other is not None and other != -c:
                raise InvalidAlgebra(f"antisymmetry fails for [{labels[a]}, {labels[b]}]")
            table.setdefault((a, b), {})[g] = c
            table.setdefault((b, a), {})[g] = -c
        structure = {
            key: tuple(sorted((g, c) for g, c in row.items() if c != 0))
            for key, row in table.items()
        }
        structure = {k: v for k, v in structure.items() if v}
        computed = _ad_trace_gram(dim, structure)
        alg = cls(labels, structure, computed, name, {lab: i for i, lab in enumerate(labels)})
        if check:
            bad = jacobi_violation(alg)
            if bad is not None:
                a, b, c = bad
                raise InvalidAlgebra(
                    f"Jacobi identity fails on ({labels[a]}, {labels[b]}, {labels[c]})"
                )
        if not linalg.is_positive_definite(computed):
            raise NotCompactSemisimple(
                f"negative Killing form of {name or 'algebra'} is not positive definite"
            )
        if gram is not None:
            supplied = [[to_exact(parse_scalar(v) if isinstance(v, str) else Fraction(v))
                         for v in row] for row in gram]
            if [list(r) for r in computed] != supplied:
                raise InvalidAlgebra("supplied gram disagrees with -trace(ad ad)")
        return alg

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InvalidInput(f"unknown basis label {label!r}") from None

    def lookup(self, label: str) -> int:
        """Like :meth:`index` but also accepts labels with underscores
        dropped, e.g. ``e12`` for ``e_12``."""
        if label in self._index:
            return self._index[label]
        squashed = label.replace("_", "")
        hits = [i for i, lab in enumerate(self.labels) if lab.replace("_", "") == squashed]
        if len(hits) == 1:
            return hits[0]
        raise InvalidInput(f"unknown basis label {label!r}")

    def zero(self) -> "AlgebraVector":
        return AlgebraVector(self, (Fraction(0),) * self.dim)

    def basis_vector(self, which: int | str) -> "AlgebraVector":
        i = self.index(which) if isinstance(which, str) else which
        coeffs = [Fraction(0)] * self.dim
        coeffs[i] = Fraction(1)
        return AlgebraVector(self, tuple(coeffs))

    def basis(self) -> list["AlgebraVector"]:
        return [self.basis_vector(i) for i in range(self.dim)]

    def vector(self, coeffs: Mapping[str, object] | Sequence[object]) -> "AlgebraVector":
        """Build a vector from a full coefficient list or a label mapping
        (missing labels are zero)."""
        if isinstance(coeffs, Mapping):
            out: list = [Fraction(0)] * self.dim
            for lab, v in coeffs.items():
                out[self.lookup(lab)] = parse_scalar(v) if isinstance(v, str) else v
            return AlgebraVector(self, tuple(out))
        if len(coeffs) != self.dim:
            raise InvalidInput(f"expected {self.dim} coefficients, got {len(coeffs)}")
        return AlgebraVector(self, tuple(coeffs))

    def bracket_basis(self, a: int, b: int) -> tuple[tuple[int, Fraction], ...]:
        return self.structure.get((a, b), ())

    def to_dict(self) -> dict:
        entries = []
        for (a, b), row in sorted(self.structure.items()):
            if a < b:
                for g, c in row:
                    entries.append([a, b, g, format_scalar(c)])
        return {
            "name": self.name,
            "dim": self.dim,
            "labels": list(self.labels),
            "structure": entries,
            "gram": [[format_scalar(v) for v in row] for row in self.gram],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "LieAlgebraData":
        try:
            labels = data["labels"]
            entries = data["structure"]
        except KeyError as exc:
            raise InvalidInput(f"algebra JSON missing field {exc}") from None
        if "dim" in data and int(data["dim"]) != len(labels):
            raise InvalidInput("algebra JSON: dim does not match labels")
        return cls.from_structure(
            labels, [tuple(e) for e in entries], name=data.get("name", ""),
            gram=data.get("gram"),
        )


class AlgebraVector:
    """Coefficient vector over the basis of a :class:`LieAlgebraData`."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: LieAlgebraData, coeffs: Sequence):
        coeffs = tuple(coeffs)
        if len(coeffs) != algebra.dim:
            raise InvalidInput(
                f"vector has {len(coeffs)} coefficients, algebra dim is {algebra.dim}"
            )
        self.algebra = algebra
        self.coeffs = coeffs

    def _check(self, other: "AlgebraVector") -> None:
        if other.algebra is not self.algebra:
            raise AlgebraMismatch("vectors belong to different algebras")

    def __add__(self, other: "AlgebraVector") -> "AlgebraVector":
        self._check(other)
        return AlgebraVector(self.algebra, [x + y for x, y in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "AlgebraVector") -> "AlgebraVector":
        self._check(other)
        return AlgebraVector(self.algebra, [x - y for x, y in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "AlgebraVector":
        return AlgebraVector(self.algebra, [-x for x in self.coeffs])

    def __mul__(self, scalar) -> "AlgebraVector":
        return AlgebraVector(self.algebra, [scalar * x for x in self.coeffs])

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraVector):
            return NotImplemented
        return other.algebra is self.algebra and self.coeffs == other.coeffs

    __hash__ = None  # type: ignore[assignment]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, key: int | str):
        if isinstance(key, str):
            key = self.algebra.lookup(key)
        return self.coeffs[key]

    def is_zero(self) -> bool:
        return all(is_zero(x) for x in self.coeffs)

    def support(self) -> list[int]:
        return [i for i, x in enumerate(self.coeffs) if not is_zero(x)]

    def as_dict(self) -> dict[str, str]:
        return {
            self.algebra.labels[i]: format_scalar(x)
            for i, x in enumerate(self.coeffs)
            if not is_zero(x)
        }

    def __repr__(self) -> str:
        terms = " + ".join(f"{v}*{k}" for k, v in self.as_dict().items()) or "0"
        return f"AlgebraVector({terms})"


def bracket(u: AlgebraVector, v: AlgebraVector) -> AlgebraVector:
    u._check(v)
    alg = u.algebra
    out: list = [Fraction(0)] * alg.dim
    vs = [(b, y) for b, y in enumerate(v.coeffs) if y != 0]
    for a, x in enumerate(u.coeffs):
        if x == 0:
            continue
        for b, y in vs:
            for g, c in alg.structure.get((a, b), ()):
                out[g] += x * y * c
    return AlgebraVector(alg, out)


def killing_gram(algebra: LieAlgebraData) -> tuple[tuple[Fraction, ...], ...]:
    """Gram matrix of ``B = -Killing form``; cached at construction."""
    return algebra.gram


def _ad_trace_gram(dim: int, structure: Bracket) -> tuple[tuple[Fraction, ...], ...]:
    # ad(e_a)[g][h] = c[a][h][g];  tr(ad_a ad_b) = sum_{g,h} c[a][h][g] c[b][g][h]
    lookup = [[dict(structure.get((a, h), ())) for h in range(dim)] for a in range(dim)]
    gram = [[Fraction(0)] * dim for _ in range(dim)]
    for a in range(dim):
        for b in range(a, dim):
            t = Fraction(0)
            for h in range(dim):
                for g, c1 in lookup[a][h].items():
                    c2 = lookup[b][g].get(h)
                    if c2 is not None:
                        t += c1 * c2
            gram[a][b] = gram[b][a] = -t
    return tuple(tuple(r) for r in gram)


def jacobi_violation(alg: LieAlgebraData) -> tuple[int, int, int] | None:
    """First basis triple on which the Jacobi identity fails, or None."""
    basis = alg.basis()
    for a, b, c in itertools.combinations(range(alg.dim), 3):
        x, y, z = basis[a], basis[b], basis[c]
        s = bracket(bracket(x, y), z) + bracket(bracket(y, z), x) + bracket(bracket(z, x), y)
        if not s.is_zero():
            return a, b, c
    return None


def _so_label(i: int, j: int, n: int) -> str:
    return f"e_{i}{j}" if n < 10 else f"e_{i}_{j}"


def so_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def build_so_basis(n: int) -> LieAlgebraData:
    """so(n) in the basis ``e_ij = E_ij - E_ji`` (i < j, lexicographic).

    Brackets: ``[e_ij, e_jk] = e_ik`` for distinct i, j, k, zero when the
    index pairs are disjoint, extended by ``e_ji = -e_ij``.
    """
    if int(n) != n or n < 3:
        raise InvalidDimension(f"so(n) needs n >= 3, got {n}")
    pairs = so_pairs(n)
    pos = {p: k for k, p in enumerate(pairs)}

    def oriented(i, j):
        return (1, pos[(i, j)]) if i < j else (-1, pos[(j, i)])

    entries = []
    for (p, q) in itertools.combinations(pairs, 2):
        shared = set(p) & set(q)
        if len(shared) != 1:
            continue
        (x,) = shared
        u = p[0] if p[1] == x else p[1]
        w = q[0] if q[1] == x else q[1]
        s1 = 1 if p[1] == x else -1   # p = s1 * e_{u x}
        s2 = 1 if q[0] == x else -1   # q = s2 * e_{x w}
        s3, g = oriented(u, w)
        entries.append((pos[p], pos[q], g, Fraction(s1 * s2 * s3)))
    labels = [_so_label(i, j, n) for i, j in pairs]
    return LieAlgebraData.from_structure(labels, entries, name=f"so({n})")


SU2_LABELS = ("ih", "X_a", "Y_a")


def build_su2_basis() -> LieAlgebraData:
    """su(2) with [ih, X_a] = Y_a, [ih, Y_a] = -X_a, [X_a, Y_a] = ih."""
    entries = [(0, 1, 2, 1), (0, 2, 1, -1), (1, 2, 0, 1)]
    return LieAlgebraData.from_structure(SU2_LABELS, entries, name="su(2)")


def build_direct_sum(parts: Sequence[LieAlgebraData], name: str = "") -> LieAlgebraData:
    """Block direct sum; labels are prefixed ``f1.``, ``f2.``, ..."""
    if not parts:
        raise InvalidInput("direct sum of an empty list")
    labels, entries, offset = [], [], 0
    for n, part in enumerate(parts, start=1):
        labels.extend(f"f{n}.{lab}" for lab in part.labels)
        for (a, b), row in part.structure.items():
            if a < b:
                entries.extend((a + offset, b + offset, g + offset, c) for g, c in row)
        offset += part.dim
    name = name or " + ".join(p.name or "?" for p in parts)
    return LieAlgebraData.from_structure(labels, entries, name=name)


def change_basis(
    alg: LieAlgebraData,
    vectors: Sequence[Sequence[object]],
    labels: Sequence[str],
    name: str = "",
) -> LieAlgebraData:
    """Re-express ``alg`` in a new basis given by rational coefficient rows."""
    if len(vectors) != alg.dim or len(labels) != alg.dim:
        raise InvalidInput("new basis must have exactly dim vectors and labels")
    rows = [[Fraction(v) for v in vec] for vec in vectors]
    try:
        inv = linalg.inverse([list(col) for col in zip(*rows)])
    except ZeroDivisionError:
        raise InvalidInput("new basis vectors are linearly dependent") from None
    new = [AlgebraVector(alg, r) for r in rows]
    entries = []
    for a, b in itertools.combinations(range(alg.dim), 2):
        w = bracket(new[a], new[b]).coeffs
        for g in range(alg.dim):
            c = sum((inv[g][h] * w[h] for h in range(alg.dim) if w[h] != 0), Fraction(0))
            if c != 0:
                entries.append((a, b, g, c))
    return LieAlgebraData.from_structure(labels, entries, name=name or alg.name)


def rescale_basis(alg: LieAlgebraData, factors: Sequence[object], labels=None) -> LieAlgebraData:
    """New basis ``f_a = factors[a] * e_a``."""
    vecs = [[Fraction(factors[a]) if b == a else 0 for b in range(alg.dim)]
            for a in range(alg.dim)]
    return change_basis(alg, vecs, labels or alg.labels, name=alg.name)
