"""Finite-dimensional Lie superalgebras given by structure constants.

A :class:`GSpec` is the coefficient data for the current part ``g ⊗ A``.  Specs are
loaded from a small JSON document::

    {"basis": ["e", "h", "f"], "parity": [0, 0, 0],
     "brackets": {"0,2": [[1, "1"]], "1,0": [[0, "2"]], "1,2": [[2, "-2"]]}}

Pair keys may use indices or basis names.  Omitted pairs are zero; the reversed
pair is filled in by super-antisymmetry and any explicitly given reversed pair
must agree with it.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .exact import Scalar, add_into, format_scalar, scalar, span_rank


class ParseError(ValueError):
    pass


class JacobiViolation(ValueError):
    def __init__(self, triple, lhs, rhs):
        super().__init__(f"super Jacobi identity fails on {triple}: {lhs} != {rhs}")
        self.triple = triple
        self.lhs = lhs
        self.rhs = rhs


Table = Dict[Tuple[int, int], Tuple[Tuple[int, Scalar], ...]]


@dataclass(frozen=True)
class GSpec:
    name: str
    basis_names: Tuple[str, ...]
    parities: Tuple[int, ...]
    structure_constants: Table = field(repr=False)
    perfect: bool = field(default=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    def bracket(self, s: int, u: int) -> Tuple[Tuple[int, Scalar], ...]:
        return self.structure_constants.get((s, u), ())

    def index(self, name: str) -> int:
        return self.basis_names.index(name)

    def to_document(self) -> dict:
        brackets = {}
        for (s, u), terms in sorted(self.structure_constants.items()):
            if s <= u and terms:
                brackets[f"{s},{u}"] = [[w, format_scalar(c)] for w, c in terms]
        return {"name": self.name, "basis": list(self.basis_names), "parity": list(self.parities), "brackets": brackets}

    @property
    def warnings(self) -> List[str]:
        return [] if self.perfect else [f"NotPerfect: [g,g] != g for {self.name}"]


def _sign(p: int) -> int:
    return -1 if p & 1 else 1


def check_jacobi(basis_names: Sequence[str], parities: Sequence[int], table: Table):
    """First basis triple violating the super Jacobi identity, or None.

    Checks [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|} [b,[a,c]].
    """
    n = len(basis_names)

    def br(x: Dict[int, Scalar], y: Dict[int, Scalar]) -> Dict[int, Scalar]:
        out: Dict[int, Scalar] = {}
        for s, cs in x.items():
            for u, cu in y.items():
                for w, cw in table.get((s, u), ()):
                    add_into(out, w, cs * cu * cw)
        return out

    for a in range(n):
        for b in range(n):
            ab = br({a: 1}, {b: 1})
            for c in range(n):
                lhs = br({a: 1}, br({b: 1}, {c: 1}))
                rhs = br(ab, {c: 1})
                for w, cw in br({b: 1}, br({a: 1}, {c: 1})).items():
                    add_into(rhs, w, _sign(parities[a] * parities[b]) * cw)
                if lhs != rhs:
                    return (a, b, c), lhs, rhs
    return None


def _is_perfect(n: int, table: Table) -> bool:
    images = [dict(terms) for terms in table.values() if terms]
    return span_rank(images) == n


def build_gspec(name: str, basis_names: Sequence[str], parities: Sequence[int], brackets: Dict[Tuple[int, int], Dict[int, Scalar]], *, validate: bool = True) -> GSpec:
    """Complete ``brackets`` by super-antisymmetry, validate, and compute perfectness.

    ``validate=False`` skips the Jacobi check; it exists so that deliberately
    corrupted tables can be fed to the sweeps.
    """
    n = len(basis_names)
    if len(parities) != n:
        raise ParseError("parity list length differs from basis length")
    if len(set(basis_names)) != n:
        raise ParseError("duplicate basis names")
    for p in parities:
        if p not in (0, 1):
            raise ParseError(f"parity must be 0 or 1, got {p!r}")
    given: Dict[Tuple[int, int], Dict[int, Scalar]] = {}
    for (s, u), terms in brackets.items():
        if not (0 <= s < n and 0 <= u < n):
            raise ParseError(f"bracket pair ({s},{u}) out of range")
        for w in terms:
            if not 0 <= w < n:
                raise ParseError(f"bracket ({s},{u}) has output index {w} out of range")
            if terms[w] and parities[w] != (parities[s] + parities[u]) % 2:
                raise ParseError(f"bracket ({s},{u}) has a term of the wrong parity at index {w}")
        given[(s, u)] = {w: c for w, c in terms.items() if c}
    full: Dict[Tuple[int, int], Dict[int, Scalar]] = {}
    for (s, u), terms in given.items():
        sign = -_sign(parities[s] * parities[u])
        mirrored = {w: sign * c for w, c in terms.items()}
        other = given.get((u, s))
        if other is not None and other != mirrored:
            raise ParseError(f"bracket entries ({s},{u}) and ({u},{s}) violate super-antisymmetry")
        full[(s, u)] = terms
        full[(u, s)] = mirrored
    table: Table = {k: tuple(sorted(v.items())) for k, v in full.items() if v}
    if validate:
        bad = check_jacobi(basis_names, parities, table)
        if bad is not None:
            raise JacobiViolation(*bad)
    return GSpec(name, tuple(basis_names), tuple(parities), table, _is_perfect(n, table))


def _pair_index(key: str, names: Sequence[str]) -> Tuple[int, int]:
    parts = [p.strip() for p in key.split(",")]
    if len(parts) != 2:
        raise ParseError(f"bracket key {key!r} must look like 's,u'")
    out = []
    for p in parts:
        if p.lstrip("-").isdigit():
            out.append(int(p))
        elif p in names:
            out.append(names.index(p))
        else:
            raise ParseError(f"unknown basis element {p!r} in bracket key {key!r}")
    return out[0], out[1]


def load_gspec(document: Union[str, dict], name: Optional[str] = None) -> GSpec:
    """Parse a GSpec document (JSON text or already-decoded dict)."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(document, dict):
        raise ParseError("GSpec document must be an object")
    try:
        names = [str(x) for x in document["basis"]]
        parities = [int(p) for p in document["parity"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"missing or malformed basis/parity: {exc}") from None
    raw = document.get("brackets", {})
    if not isinstance(raw, dict):
        raise ParseError("brackets must be an object")
    brackets: Dict[Tuple[int, int], Dict[int, Scalar]] = {}
    for key, terms in raw.items():
        pair = _pair_index(key, names)
        if pair in brackets:
            raise ParseError(f"bracket pair {key!r} given twice")
        acc: Dict[int, Scalar] = {}
        try:
            for w, c in terms:
                w = names.index(w) if isinstance(w, str) and w in names else int(w)
                add_into(acc, w, scalar(c))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"malformed bracket entry {key!r}: {exc}") from None
        brackets[pair] = acc
    return build_gspec(name or document.get("name", "custom"), names, parities, brackets)


def load_gspec_file(path: Union[str, Path]) -> GSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return load_gspec(text, name=path.stem)


def _sl2() -> GSpec:
    e, h, f = 0, 1, 2
    return build_gspec(
        "sl2",
        ["e", "h", "f"],
        [0, 0, 0],
        {(e, f): {h: 1}, (h, e): {e: 2}, (h, f): {f: -2}},
    )


def _osp12() -> GSpec:
    e, h, f, x, y = range(5)
    return build_gspec(
        "osp12",
        ["e", "h", "f", "x", "y"],
        [0, 0, 0, 1, 1],
        {
            (e, f): {h: 1},
            (h, e): {e: 2},
            (h, f): {f: -2},
            (h, x): {x: 1},
            (h, y): {y: -1},
            (e, y): {x: -1},
            (f, x): {y: -1},
            (x, x): {e: 2},
            (y, y): {f: -2},
            (x, y): {h: 1},
        },
    )


def abelian(dim: int = 1) -> GSpec:
    names = [f"a{i}" for i in range(dim)]
    return build_gspec(f"abelian{dim}", names, [0] * dim, {})


BUILTINS = {"sl2": _sl2, "osp12": _osp12, "osp(1|2)": _osp12}


def builtin_gspec(name: str) -> GSpec:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise ParseError(f"unknown built-in g {name!r}; choose from sl2, osp12") from None


def resolve_gspec(ref: Optional[str]) -> Optional[GSpec]:
    """``None``/'none' -> None, '@path' -> file, otherwise a built-in name."""
    if ref is None or ref.lower() in ("none", "0", ""):
        return None
    if ref.startswith("@"):
        return load_gspec_file(ref[1:])
    return builtin_gspec(ref)
