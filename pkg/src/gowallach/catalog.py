"""Constructible generalized Wallach spaces.

==================  ===========================================  =========
name                space                                        params
==================  ===========================================  =========
su2_trivial         SU(2)/{e}, m_i spanned by ih, X_a, Y_a       -
stiefel_n           SO(n)/SO(n-2)                                n >= 4
so_klm              SO(k+l+m)/SO(k)xSO(l)xSO(m)                  k, l, m
product_s2_cubed    (S^2)^3 = (SO(3)/SO(2))^3                    -
quad_diag_su2       SU(2)^4 / diag SU(2)                         -
==================  ===========================================  =========
"""

from __future__ import annotations

import json
from pathlib import Path

from .decomposition import SpaceDescriptor
from .errors import InvalidInput, UnknownSpace
from .lie import (
    SU2_LABELS,
    LieAlgebraData,
    build_direct_sum,
    build_so_basis,
    build_su2_basis,
    change_basis,
    so_pairs,
)

CATALOG_NAMES = ("su2_trivial", "stiefel_n", "so_klm", "product_s2_cubed", "quad_diag_su2")


def _su2_trivial() -> SpaceDescriptor:
    return SpaceDescriptor(build_su2_basis(), (), (0,), (1,), (2,), name="su2_trivial")


def _so_klm(k: int, l: int, m: int, name: str | None = None) -> SpaceDescriptor:
    # blocks occupy consecutive index ranges P, Q, R (in that order);
    # m1 = P x Q, m2 = P x R, m3 = Q x R
    if min(k, l, m) < 1 or k + l + m < 3:
        raise InvalidInput(f"so_klm needs k, l, m >= 1 and k+l+m >= 3, got {(k, l, m)}")
    n = k + l + m
    alg = build_so_basis(n)
    block = {}
    for i in range(1, n + 1):
        block[i] = 0 if i <= k else (1 if i <= k + l else 2)
    strip = {(0, 1): 1, (0, 2): 2, (1, 2): 3}
    parts: dict[int, list[int]] = {0: [], 1: [], 2: [], 3: []}
    for idx, (i, j) in enumerate(so_pairs(n)):
        bi, bj = block[i], block[j]
        parts[0 if bi == bj else strip[(bi, bj)]].append(idx)
    return SpaceDescriptor(alg, parts[0], parts[1], parts[2], parts[3],
                           name=name or f"so_klm:{k},{l},{m}")


def _stiefel(n: int) -> SpaceDescriptor:
    if n < 4:
        raise InvalidInput(f"stiefel_n needs n >= 4, got {n}")
    # blocks {1}, {2}, {3..n}: k = so(n-2) on {3..n}, m1 = e_12,
    # m2 = e_1j, m3 = e_2j (j >= 3)
    return _so_klm(1, 1, n - 2, name=f"stiefel_n:{n}")


def _product_s2_cubed() -> SpaceDescriptor:
    so3 = build_so_basis(3)  # e_12, e_13, e_23; so(2) = span e_12
    alg = build_direct_sum([so3, so3, so3], name="so(3)+so(3)+so(3)")
    return SpaceDescriptor(alg, (0, 3, 6), (1, 2), (4, 5), (7, 8), name="product_s2_cubed")


QUAD_SIGNS = {
    "k": (1, 1, 1, 1),
    "m1": (1, 1, -1, -1),
    "m2": (1, -1, 1, -1),
    "m3": (1, -1, -1, 1),
}


def _quad_diag_su2() -> SpaceDescriptor:
    su2 = build_su2_basis()
    total = build_direct_sum([su2] * 4, name="4 su(2)")
    vectors, labels, parts = [], [], {}
    for part, signs in QUAD_SIGNS.items():
        parts[part] = []
        for x in range(3):
            vec = [0] * 12
            for copy, s in enumerate(signs):
                vec[3 * copy + x] = s
            parts[part].append(len(vectors))
            vectors.append(vec)
            labels.append(f"{part}.{SU2_LABELS[x]}")
    alg = change_basis(total, vectors, labels, name="su(2)^4 (diagonal basis)")
    return SpaceDescriptor(alg, parts["k"], parts["m1"], parts["m2"], parts["m3"],
                           name="quad_diag_su2")


def catalog(name: str, *params: int) -> SpaceDescriptor:
    """Construct a catalog space by name."""
    params = tuple(int(p) for p in params)
    if name == "su2_trivial":
        _no_params(name, params)
        return _su2_trivial()
    if name == "stiefel_n":
        if len(params) != 1:
            raise InvalidInput("stiefel_n takes one parameter n")
        return _stiefel(params[0])
    if name == "so_klm":
        if len(params) != 3:
            raise InvalidInput("so_klm takes three parameters k, l, m")
        return _so_klm(*params)
    if name == "product_s2_cubed":
        _no_params(name, params)
        return _product_s2_cubed()
    if name == "quad_diag_su2":
        _no_params(name, params)
        return _quad_diag_su2()
    raise UnknownSpace(f"unknown catalog space {name!r}; known: {', '.join(CATALOG_NAMES)}")


def _no_params(name, params):
    if params:
        raise InvalidInput(f"{name} takes no parameters")


def parse_space_ref(text: str) -> SpaceDescriptor:
    """``name``, ``name:p1,p2,...`` or a path to a space JSON file."""
    path = Path(text)
    if text.endswith(".json") or (path.exists() and path.is_file()):
        return load_space(path)
    name, _, rest = text.partition(":")
    try:
        params = [int(p) for p in rest.split(",") if p.strip()] if rest else []
    except ValueError:
        raise InvalidInput(f"bad catalog parameters in {text!r}") from None
    return catalog(name, *params)


def load_space(path: str | Path) -> SpaceDescriptor:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read space descriptor {path}: {exc}") from None
    return SpaceDescriptor.from_dict(data)


def algebra_from_ref(ref: str) -> LieAlgebraData:
    """Algebra references usable inside space JSON: ``so:N`` or ``su2``."""
    name, _, arg = ref.partition(":")
    if name == "so" and arg:
        return build_so_basis(int(arg))
    if name == "su2" and not arg:
        return build_su2_basis()
    raise UnknownSpace(f"unknown algebra reference {ref!r}; use 'so:N' or 'su2'")
