"""Structure-constants engine for the Witt superalgebra and its current extensions.

Basis atoms (all degrees range over the whole of Z; windows only bound sweeps):

====== ===================== =================
family element              parity
====== ===================== =================
D(i)   d_i = t^{i+1} d/dt    even
H(i)   h_i = t^i xi d/dxi    even
Q(i)   Q_i = t^i d/dxi       odd
G(i)   G_i = t^{i+1} xi d/dt odd
EV     x_s ⊗ t^i             |x_s|
OD     x_s ⊗ t^i xi          |x_s| + 1
CEN    central element C     even
====== ===================== =================

Five algebras share this table; they differ only in which families are legal
and whether the central terms are switched on (``L_hat`` only).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

from .exact import Scalar, SparseVec, add_into, scalar
from .gspec import GSpec
from .reports import Report


class IllegalFamily(ValueError):
    pass


class Family(IntEnum):
    D = 0
    H = 1
    Q = 2
    G = 3
    EV = 4
    OD = 5
    CEN = 6


_D, _H, _Q, _G, _EV, _OD, _CEN = (int(f) for f in Family)


class BasisVector(NamedTuple):
    """Tagged basis atom; tuple order is the canonical total order."""

    family: int
    degree: int
    g_index: int = -1

    def label(self, g: Optional[GSpec] = None) -> str:
        fam = Family(self.family).name
        if self.family == _CEN:
            return "C"
        if self.family in (_EV, _OD):
            x = g.basis_names[self.g_index] if g is not None else str(self.g_index)
            suffix = "xi" if self.family == _OD else ""
            return f"{x}*t^{self.degree}{suffix}"
        return f"{fam.lower() if fam in ('D', 'H') else fam}{self.degree}"

    def __repr__(self) -> str:
        return self.label()


def D(i: int) -> BasisVector:
    return BasisVector(_D, i)


def H(i: int) -> BasisVector:
    return BasisVector(_H, i)


def Q(i: int) -> BasisVector:
    return BasisVector(_Q, i)


def G(i: int) -> BasisVector:
    return BasisVector(_G, i)


def EV(s: int, i: int) -> BasisVector:
    return BasisVector(_EV, i, s)


def OD(s: int, i: int) -> BasisVector:
    return BasisVector(_OD, i, s)


CEN = BasisVector(_CEN, 0)

AlgElement = SparseVec


def elem(*terms) -> SparseVec:
    """Build an element from atoms or (coefficient, atom) pairs."""
    d: Dict[BasisVector, Scalar] = {}
    for t in terms:
        if isinstance(t, BasisVector):
            add_into(d, t, 1)
        else:
            coef, atom = t
            add_into(d, atom, scalar(coef))
    return SparseVec._wrap(d)


class VariantTag(str, Enum):
    W_SUPER = "w-super"
    L = "l"
    L_HAT = "l-hat"
    FRAK_L = "frak-l"
    FRAK_W = "frak-w"


_FAMILIES = {
    VariantTag.W_SUPER: frozenset({_D, _H, _Q, _G}),
    VariantTag.L: frozenset({_D, _H, _Q, _G, _EV, _OD}),
    VariantTag.L_HAT: frozenset({_D, _H, _Q, _G, _EV, _OD, _CEN}),
    VariantTag.FRAK_L: frozenset({_D, _EV, _OD}),
    VariantTag.FRAK_W: frozenset({_D}),
}

# Bracket readings.  "corrected" puts the central term on [Q_i, G_j] and sets
# [G_i, G_j] = 0; "literal" transcribes the table with the G-G line and no Q-G
# line, and only exists to show that reading fails the Jacobi sweep.
CORRECTED = "corrected"
LITERAL = "literal"


@dataclass(frozen=True, eq=False)
class AlgebraVariant:
    tag: VariantTag
    g: Optional[GSpec] = None
    convention: str = CORRECTED
    _cache: Dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "tag", VariantTag(self.tag))
        if self.convention not in (CORRECTED, LITERAL):
            raise ValueError(f"unknown bracket convention {self.convention!r}")

    @property
    def families(self) -> frozenset:
        fams = _FAMILIES[self.tag]
        if self.g is None or self.g.dim == 0:
            fams = fams - {_EV, _OD}
        return fams

    @property
    def has_center(self) -> bool:
        return self.tag is VariantTag.L_HAT

    @property
    def g_dim(self) -> int:
        return self.g.dim if self.g is not None else 0

    def name(self) -> str:
        return self.tag.value + (f"[{self.g.name}]" if self.g is not None else "")

    def centerless(self) -> "AlgebraVariant":
        if self.tag is VariantTag.L_HAT:
            return AlgebraVariant(VariantTag.L, self.g, self.convention)
        return self

    def parity(self, a: BasisVector) -> int:
        f = a.family
        if f == _EV:
            return self.g.parities[a.g_index]
        if f == _OD:
            return 1 - self.g.parities[a.g_index]
        return 1 if f in (_Q, _G) else 0

    def check_atom(self, a: BasisVector) -> None:
        if a.family not in self.families:
            raise IllegalFamily(f"{Family(a.family).name} is not a family of {self.name()}")
        if a.family in (_EV, _OD) and not 0 <= a.g_index < self.g_dim:
            raise IllegalFamily(f"g index {a.g_index} out of range for {self.name()}")

    def basis(self, window: int, include_center: bool = True) -> List[BasisVector]:
        """All atoms with degree in [-window, window], canonically ordered."""
        out = []
        fams = sorted(self.families)
        for f in fams:
            if f == _CEN:
                if include_center:
                    out.append(CEN)
                continue
            for i in range(-window, window + 1):
                if f in (_EV, _OD):
                    out.extend(BasisVector(f, i, s) for s in range(self.g_dim))
                else:
                    out.append(BasisVector(f, i))
        return sorted(out)

    def degree_basis(self, degree: int) -> List[BasisVector]:
        out = []
        for f in sorted(self.families):
            if f == _CEN:
                if degree == 0:
                    out.append(CEN)
            elif f in (_EV, _OD):
                out.extend(BasisVector(f, degree, s) for s in range(self.g_dim))
            else:
                out.append(BasisVector(f, degree))
        return out

    # -- brackets ------------------------------------------------------------

    def bracket_atoms(self, a: BasisVector, b: BasisVector) -> Tuple[Tuple[BasisVector, Scalar], ...]:
        key = (a, b)
        hit = self._cache.get(key)
        if hit is None:
            self.check_atom(a)
            self.check_atom(b)
            hit = tuple(sorted(self._bracket(a, b).items()))
            self._cache[key] = hit
        return hit

    def _bracket(self, a: BasisVector, b: BasisVector) -> Dict[BasisVector, Scalar]:
        if a.family <= b.family:
            return self._ordered(a, b)
        sign = 1 if self.parity(a) & self.parity(b) else -1
        return {k: sign * v for k, v in self._ordered(b, a).items()}

    def _ordered(self, a: BasisVector, b: BasisVector) -> Dict[BasisVector, Scalar]:
        fa, fb = a.family, b.family
        i, j = a.degree, b.degree
        n = i + j
        central = self.has_center and n == 0
        out: Dict[BasisVector, Scalar] = {}
        if fa == _CEN or fb == _CEN:
            return out
        if fa == _D:
            if fb == _D:
                add_into(out, D(n), j - i)
            elif fb == _H:
                add_into(out, H(n), j)
                if central:
                    add_into(out, CEN, -i * i)
            elif fb == _Q:
                add_into(out, Q(n), j)
            elif fb == _G:
                add_into(out, G(n), j - i)
            elif fb == _EV:
                add_into(out, EV(b.g_index, n), j)
            elif fb == _OD:
                add_into(out, OD(b.g_index, n), j)
        elif fa == _H:
            if fb == _H:
                if central:
                    add_into(out, CEN, 2 * i)
            elif fb == _Q:
                add_into(out, Q(n), -1)
            elif fb == _G:
                add_into(out, G(n), 1)
            elif fb == _OD:
                add_into(out, OD(b.g_index, n), 1)
        elif fa == _Q:
            if fb == _G and self.convention == CORRECTED:
                add_into(out, D(n), 1)
                add_into(out, H(n), i)
                if central:
                    add_into(out, CEN, -i * i)
            elif fb == _OD:
                add_into(out, EV(b.g_index, n), -1 if self.g.parities[b.g_index] else 1)
        elif fa == _G:
            if fb == _G and self.convention == LITERAL:
                add_into(out, D(n), 1)
                add_into(out, H(n), i)
                if central:
                    add_into(out, CEN, -i * i)
            elif fb == _EV:
                add_into(out, OD(b.g_index, n), -j if self.g.parities[b.g_index] else j)
        elif fa == _EV:
            if fb == _EV:
                for w, c in self.g.bracket(a.g_index, b.g_index):
                    add_into(out, EV(w, n), c)
            elif fb == _OD:
                for w, c in self.g.bracket(a.g_index, b.g_index):
                    add_into(out, OD(w, n), c)
        # OD-OD vanishes since xi^2 = 0
        return out

    def bracket(self, a: SparseVec, b: SparseVec) -> SparseVec:
        """Bilinear extension of the basis bracket."""
        out: Dict[BasisVector, Scalar] = {}
        for x, cx in a.items():
            for y, cy in b.items():
                c = cx * cy
                for w, cw in self.bracket_atoms(x, y):
                    add_into(out, w, c * cw)
        return SparseVec._wrap(out)

    def parity_of(self, v: SparseVec) -> Optional[int]:
        """Common parity of all terms, or None for an inhomogeneous element."""
        ps = {self.parity(a) for a in v}
        return ps.pop() if len(ps) == 1 else None


def atom(x: Union[BasisVector, SparseVec]) -> SparseVec:
    return x if isinstance(x, SparseVec) else SparseVec._wrap({x: 1})


def bracket(variant: AlgebraVariant, a, b) -> SparseVec:
    return variant.bracket(atom(a), atom(b))


def make_variant(tag: Union[str, VariantTag], g: Optional[GSpec] = None, convention: str = CORRECTED) -> AlgebraVariant:
    tag = VariantTag(tag)
    if tag is VariantTag.FRAK_W or tag is VariantTag.W_SUPER:
        g = None
    return AlgebraVariant(tag, g, convention)


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

def _fmt(variant: AlgebraVariant, vec: Dict[BasisVector, Scalar]) -> Dict[str, Scalar]:
    return {a.label(variant.g): c for a, c in sorted(vec.items())}


def _label(variant: AlgebraVariant, a: BasisVector) -> str:
    return a.label(variant.g)


def verify_jacobi(variant: AlgebraVariant, window: int, max_witnesses: int = 1) -> Report:
    """Exhaustive super Jacobi sweep over all basis triples of degree in [-window, window].

    Checks [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|}[b,[a,c]].
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    report = Report(
        "super-jacobi",
        "super Jacobi identity [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|}[b,[a,c]] on all basis triples",
        certified_window=window,
    )
    basis = variant.basis(window)
    par = {a: variant.parity(a) for a in basis}
    br = variant.bracket_atoms
    # pair brackets within the window are reused as inner brackets
    inner = {(b, c): br(b, c) for b in basis for c in basis}
    checked = 0
    for a in basis:
        pa = par[a]
        for b in basis:
            ab = inner[(a, b)]
            sign = -1 if pa & par[b] else 1
            for c in basis:
                diff: Dict[BasisVector, Scalar] = {}
                get = diff.get
                for u, cu in inner[(b, c)]:
                    for w, cw in br(a, u):
                        diff[w] = get(w, 0) + cu * cw
                for u, cu in ab:
                    for w, cw in br(u, c):
                        diff[w] = get(w, 0) - cu * cw
                for u, cu in inner[(a, c)]:
                    for w, cw in br(b, u):
                        diff[w] = get(w, 0) - sign * cu * cw
                checked += 1
                if any(diff.values()):
                    lhs = variant.bracket(atom(a), variant.bracket(atom(b), atom(c)))
                    rhs = variant.bracket(variant.bracket(atom(a), atom(b)), atom(c)) + variant.bracket(
                        atom(b), variant.bracket(atom(a), atom(c))
                    ).scale(sign)
                    report.fail(
                        triple=[_label(variant, a), _label(variant, b), _label(variant, c)],
                        lhs=_fmt(variant, lhs),
                        rhs=_fmt(variant, rhs),
                    )
                    if len(report.witnesses) >= max_witnesses:
                        report.details["checked"] = checked
                        return report
    report.details["checked"] = checked
    return report


def verify_super_antisymmetry(variant: AlgebraVariant, window: int, max_witnesses: int = 1) -> Report:
    """Sweep [a,b] + (-1)^{|a||b|}[b,a] = 0 over all basis pairs in the window."""
    if window < 1:
        raise ValueError("window must be >= 1")
    report = Report(
        "super-antisymmetry",
        "super-antisymmetry [a,b] = -(-1)^{|a||b|}[b,a] on all basis pairs",
        certified_window=window,
    )
    basis = variant.basis(window)
    checked = 0
    for a in basis:
        for b in basis:
            sign = -1 if variant.parity(a) & variant.parity(b) else 1
            total: Dict[BasisVector, Scalar] = dict(variant.bracket_atoms(a, b))
            for w, c in variant.bracket_atoms(b, a):
                add_into(total, w, sign * c)
            checked += 1
            if total:
                report.fail(
                    pair=[_label(variant, a), _label(variant, b)],
                    ab=_fmt(variant, dict(variant.bracket_atoms(a, b))),
                    ba=_fmt(variant, dict(variant.bracket_atoms(b, a))),
                )
                if len(report.witnesses) >= max_witnesses:
                    report.details["checked"] = checked
                    return report
    report.details["checked"] = checked
    return report


def verify_grading(variant: AlgebraVariant, window: int) -> Report:
    """Degree and parity additivity of the bracket, and centrality of C."""
    report = Report(
        "grading",
        "deg[a,b] = deg a + deg b, |[a,b]| = |a| + |b|, [C, .] = 0",
        certified_window=window,
    )
    basis = variant.basis(window)
    for a in basis:
        for b in basis:
            want_deg = a.degree + b.degree
            want_par = (variant.parity(a) + variant.parity(b)) % 2
            for w, _ in variant.bracket_atoms(a, b):
                if w.degree != want_deg or variant.parity(w) != want_par:
                    return report.fail(pair=[_label(variant, a), _label(variant, b)], term=_label(variant, w))
            if (a == CEN or b == CEN) and variant.bracket_atoms(a, b):
                return report.fail(pair=[_label(variant, a), _label(variant, b)], reason="C not central")
    return report
