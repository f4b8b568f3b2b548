"""Reductive decompositions g = k + m1 + m2 + m3 and their invariants."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .errors import AlgebraMismatch, InvalidDescriptor, InvalidInput
from .lie import AlgebraVector, LieAlgebraData, bracket
from .scalar import format_scalar

PARTS = ("k", "m1", "m2", "m3")


@dataclass(frozen=True, eq=False)
class SpaceDescriptor:
    """Index sets carving the basis of ``algebra`` into k, m1, m2, m3.

    The four sets must partition the basis. Everything else (orthogonality,
    reductivity, the Wallach condition) is checked by :func:`verify_space`,
    which reports rather than raises.
    """

    algebra: LieAlgebraData
    k: tuple[int, ...]
    m1: tuple[int, ...]
    m2: tuple[int, ...]
    m3: tuple[int, ...]
    name: str = ""
    user_supplied: bool = False
    # module number per basis index: 0 for k, 1..3 for m_i
    module_of: tuple[int, ...] = field(init=False, repr=False)
    trilinear: Mapping = field(init=False, repr=False)
    residual_terms: tuple = field(init=False, repr=False)

    def __post_init__(self):
        sets = [tuple(int(i) for i in s) for s in (self.k, self.m1, self.m2, self.m3)]
        for attr, s in zip(PARTS, sets):
            object.__setattr__(self, attr, s)
        flat = [i for s in sets for i in s]
        dim = self.algebra.dim
        if sorted(flat) != list(range(dim)):
            raise InvalidDescriptor(
                f"index sets must partition range({dim}); got {sorted(flat)}"
            )
        if not (self.m1 and self.m2 and self.m3):
            raise InvalidDescriptor("each of m1, m2, m3 must be nonempty")
        module_of = [0] * dim
        for n, s in enumerate(sets):
            for i in s:
                module_of[i] = n
        object.__setattr__(self, "module_of", tuple(module_of))
        tri = _trilinear_form(self.algebra)
        object.__setattr__(self, "trilinear", tri)
        object.__setattr__(self, "residual_terms", self._residual_terms(tri))

    def _residual_terms(self, tri):
        # for each m-basis e: (a, h, B([e_a, e], e_h)) with h in m, nonzero
        out = []
        for e in self.m:
            terms = []
            for a in range(self.algebra.dim):
                for h, val in tri.get((a, e), ()):
                    if self.module_of[h]:
                        terms.append((a, h, val))
            out.append(tuple(terms))
        return tuple(out)

    @property
    def m(self) -> tuple[int, ...]:
        return self.m1 + self.m2 + self.m3

    def part(self, name: str) -> tuple[int, ...]:
        if name == "m":
            return self.m
        if name not in PARTS:
            raise InvalidInput(f"unknown part {name!r}; expected one of k, m, m1, m2, m3")
        return getattr(self, name)

    def modules(self) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        return self.m1, self.m2, self.m3

    @property
    def dims(self) -> tuple[int, int, int, int]:
        """(l, d1, d2, d3)."""
        return len(self.k), len(self.m1), len(self.m2), len(self.m3)

    def labels_of(self, name: str) -> list[str]:
        return [self.algebra.labels[i] for i in self.part(name)]

    def to_dict(self, inline_algebra: bool = True) -> dict:
        return {
            "name": self.name,
            "algebra": self.algebra.to_dict() if inline_algebra else self.algebra.name,
            "k": list(self.k),
            "m1": list(self.m1),
            "m2": list(self.m2),
            "m3": list(self.m3),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "SpaceDescriptor":
        from .catalog import algebra_from_ref

        try:
            alg_spec = data["algebra"]
            parts = [data[p] for p in PARTS]
        except KeyError as exc:
            raise InvalidDescriptor(f"space JSON missing field {exc}") from None
        if isinstance(alg_spec, str):
            algebra = algebra_from_ref(alg_spec)
        else:
            algebra = LieAlgebraData.from_dict(alg_spec)
        return cls(algebra, *parts, name=data.get("name", ""), user_supplied=True)


def _trilinear_form(alg: LieAlgebraData) -> dict[tuple[int, int], tuple[tuple[int, Fraction], ...]]:
    """B([e_a, e_b], e_c) for all basis pairs, sparse in c."""
    gram = alg.gram
    out = {}
    for (a, b), row in alg.structure.items():
        acc: dict[int, Fraction] = {}
        for g, c in row:
            for col, gv in enumerate(gram[g]):
                if gv:
                    acc[col] = acc.get(col, Fraction(0)) + c * gv
        entries = tuple((col, v) for col, v in sorted(acc.items()) if v)
        if entries:
            out[(a, b)] = entries
    return out


@dataclass
class Violation:
    condition: str
    witness: tuple[str, str]
    detail: str

    def to_dict(self) -> dict:
        return {"condition": self.condition, "witness": list(self.witness), "detail": self.detail}


@dataclass
class VerificationReport:
    space: str
    dims: tuple[int, int, int, int]
    violations: list[Violation] = field(default_factory=list)
    checked: tuple[str, ...] = ()
    irreducibility_checked: bool = False
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "space": self.space,
            "dims": {"l": self.dims[0], "d1": self.dims[1], "d2": self.dims[2], "d3": self.dims[3]},
            "ok": self.ok,
            "checked": list(self.checked),
            "violations": [v.to_dict() for v in self.violations],
            "irreducibility_checked": self.irreducibility_checked,
            "warnings": list(self.warnings),
        }


CHECKS = (
    "b_orthogonality",
    "k_subalgebra",
    "reductivity",
    "module_invariance",
    "wallach",
)


def verify_space(d: SpaceDescriptor) -> VerificationReport:
    """Check every descriptor condition by bracketing all basis pairs.

    One violation is recorded per failing condition, with the first
    witnessing basis pair in basis order. Irreducibility of the modules is
    not checked.
    """
    alg = d.algebra
    lab = alg.labels
    mod = d.module_of
    found: dict[str, Violation] = {}

    def flag(cond, a, b, detail):
        if cond not in found:
            found[cond] = Violation(cond, (lab[a], lab[b]), detail)

    for a in range(alg.dim):
        for b in range(a + 1, alg.dim):
            if alg.gram[a][b] != 0 and mod[a] != mod[b]:
                flag("b_orthogonality", a, b, f"B = {format_scalar(alg.gram[a][b])}")

    for a, b in itertools.combinations(range(alg.dim), 2):
        row = alg.bracket_basis(a, b)
        if not row:
            continue
        out_mods = {mod[g] for g, _ in row}
        ma, mb = mod[a], mod[b]
        if ma == 0 and mb == 0:
            if out_mods - {0}:
                flag("k_subalgebra", a, b, "[k, k] has a component in m")
        elif ma == 0 or mb == 0:
            target = mb or ma
            if 0 in out_mods:
                flag("reductivity", a, b, f"[k, m{target}] has a component in k")
            if out_mods - {0, target}:
                flag("module_invariance", a, b, f"[k, m{target}] leaves m{target}")
        elif ma == mb:
            if out_mods - {0}:
                flag("wallach", a, b, f"[m{ma}, m{ma}] has a component in m")

    report = VerificationReport(
        space=d.name,
        dims=d.dims,
        violations=[found[c] for c in CHECKS if c in found],
        checked=CHECKS,
    )
    if d.user_supplied:
        report.warnings.append(
            "module irreducibility is not verified for user-supplied descriptors"
        )
    return report


def project(v: AlgebraVector, part: str, d: SpaceDescriptor) -> AlgebraVector:
    """Coefficient masking onto k, m, m1, m2 or m3."""
    if v.algebra is not d.algebra:
        raise AlgebraMismatch("vector is not over the descriptor's algebra")
    keep = set(d.part(part))
    zero = Fraction(0)
    return AlgebraVector(v.algebra, [x if i in keep else zero for i, x in enumerate(v.coeffs)])


@dataclass(frozen=True)
class TripleSymbolTable:
    values: Mapping[tuple[int, int, int], Fraction]

    def __getitem__(self, key) -> Fraction:
        if isinstance(key, str):
            key = tuple(int(c) for c in key)
        return self.values[tuple(key)]

    def nonzero(self) -> dict[tuple[int, int, int], Fraction]:
        return {k: v for k, v in self.values.items() if v != 0}

    def to_dict(self) -> dict[str, str]:
        return {"".join(map(str, k)): format_scalar(v) for k, v in sorted(self.values.items())}


def triple_symbols(d: SpaceDescriptor) -> TripleSymbolTable:
    """The symbols [ijk] with B-orthonormal normalization, kept rational.

    For a B-orthogonal module basis each squared term is divided by the
    three squared B-norms. Non-diagonal module Grams are handled by
    contracting with the inverse Gram blocks, which gives the same
    basis-independent value.
    """
    alg = d.algebra
    gram = alg.gram
    mods = d.modules()
    inv = []
    diagonal = True
    for idx in mods:
        block = [[gram[a][b] for b in idx] for a in idx]
        if any(block[i][j] for i in range(len(idx)) for j in range(len(idx)) if i != j):
            diagonal = False
        inv.append(linalg.inverse(block))
    values = {}
    for i, j, k in itertools.product(range(3), repeat=3):
        mi, mj, mk = mods[i], mods[j], mods[k]
        pos_k = {c: n for n, c in enumerate(mk)}
        t = [[[Fraction(0)] * len(mk) for _ in mj] for _ in mi]
        for x, a in enumerate(mi):
            for y, b in enumerate(mj):
                for c, val in d.trilinear.get((a, b), ()):
                    if c in pos_k:
                        t[x][y][pos_k[c]] = val
        if diagonal:
            total = Fraction(0)
            for x, a in enumerate(mi):
                for y, b in enumerate(mj):
                    for z, c in enumerate(mk):
                        if t[x][y][z]:
                            total += t[x][y][z] ** 2 / (gram[a][a] * gram[b][b] * gram[c][c])
        else:
            total = _contract(t, inv[i], inv[j], inv[k])
        values[(i + 1, j + 1, k + 1)] = total
    return TripleSymbolTable(values)


def _contract(t, gi, gj, gk) -> Fraction:
    ni, nj, nk = len(gi), len(gj), len(gk)
    raised = [[[sum((gi[x][x2] * gj[y][y2] * gk[z][z2] * t[x2][y2][z2]
                     for x2 in range(ni) for y2 in range(nj) for z2 in range(nk)
                     if t[x2][y2][z2]), Fraction(0))
                for z in range(nk)] for y in range(nj)] for x in range(ni)]
    return sum((t[x][y][z] * raised[x][y][z]
                for x in range(ni) for y in range(nj) for z in range(nk)), Fraction(0))


def permuted(d: SpaceDescriptor, order: Sequence[int], name: str = "") -> SpaceDescriptor:
    """Relabel modules: new m_i is old m_{order[i-1]}."""
    mods = d.modules()
    new = [mods[o - 1] for o in order]
    return SpaceDescriptor(d.algebra, d.k, *new, name=name or f"{d.name}[{''.join(map(str, order))}]",
                           user_supplied=d.user_supplied)

