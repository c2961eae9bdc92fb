"""Degree-zero 2-cocycles and the second cohomology of the centerless variants.

An even 2-cocycle ``alpha`` supported on pairs of opposite degree is a vector of
unknowns, one per unordered pair ``{a, b}`` of basis atoms with
``deg a + deg b = 0``, ``|deg a| <= N`` and ``|a| + |b|`` even.  Super-antisymmetry is
built in: ``alpha(b, a) = -(-1)^{|a||b|} alpha(a, b)``, so an even pair ``a == a``
is forced to vanish and an odd one is a free unknown.

Every triple with degrees in ``[-N, N]`` summing to zero contributes the equation

    alpha(x, [y, z]) - alpha([x, y], z) - (-1)^{|x||y|} alpha(y, [x, z]) = 0.

Coboundaries are ``rho([a, b])`` for ``rho`` dual to a degree-zero atom.  Canonical
representatives live in a gauge slice transversal to the coboundaries: one linear
condition per coboundary direction, listed in :func:`gauge_conditions`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .algebra import (
    CEN,
    AlgebraVariant,
    BasisVector,
    D,
    EV,
    Family,
    G,
    H,
    OD,
    Q,
    VariantTag,
)
from .exact import EchelonBasis, Scalar, SparseVec, add_into, normalize
from .reports import Report

_D, _H, _Q, _G, _EV, _OD, _CEN = (int(f) for f in Family)

MIN_WINDOW = 3

Pair = Tuple[BasisVector, BasisVector]


class IllegalVariant(ValueError):
    pass


class WindowUnstable(RuntimeError):
    def __init__(self, variant_name: str, dims: Dict[int, int]):
        super().__init__(f"H^2 dimension of {variant_name} is not stable across windows: {dims}")
        self.dims = dims


class CocycleUnknowns:
    """Index of the degree-zero even pairs ``a <= b`` within window N."""

    def __init__(self, variant: AlgebraVariant, N: int):
        self.variant = variant
        self.N = N
        pairs: List[Pair] = []
        for i in range(0, N + 1):
            left = variant.degree_basis(-i)
            right = variant.degree_basis(i)
            for a in left:
                if a == CEN:
                    continue
                for b in right:
                    if b == CEN or (variant.parity(a) + variant.parity(b)) % 2:
                        continue
                    if i == 0 and b < a:
                        continue
                    if a == b and variant.parity(a) == 0:
                        continue
                    pairs.append((a, b) if a <= b else (b, a))
        pairs.sort()
        self.pairs: Tuple[Pair, ...] = tuple(pairs)
        self.index: Dict[Pair, int] = {p: n for n, p in enumerate(pairs)}

    def __len__(self) -> int:
        return len(self.pairs)

    def lookup(self, a: BasisVector, b: BasisVector) -> Optional[Tuple[int, int]]:
        """(variable, sign) with ``alpha(a, b) = sign * var``, or None if identically zero."""
        if a.degree + b.degree != 0 or a == CEN or b == CEN:
            return None
        if b < a:
            pa, pb = self.variant.parity(a), self.variant.parity(b)
            idx = self.index.get((b, a))
            if idx is None:
                return None
            return idx, (1 if pa & pb else -1)
        idx = self.index.get((a, b))
        return None if idx is None else (idx, 1)

    def table(self, vec: Mapping[int, Scalar]) -> Dict[Pair, Scalar]:
        return {self.pairs[v]: c for v, c in sorted(vec.items()) if c}


def _check_variant(variant: AlgebraVariant) -> None:
    if variant.has_center:
        raise IllegalVariant(
            f"{variant.name()} already carries a center; compute central extensions of a centerless variant"
        )


def _equation(unk: CocycleUnknowns, x, y, z) -> Dict[int, Scalar]:
    v = unk.variant
    br = v.bracket_atoms
    row: Dict[int, Scalar] = {}

    def put(a, b, coef):
        hit = unk.lookup(a, b)
        if hit is not None:
            add_into(row, hit[0], coef * hit[1])

    for w, c in br(y, z):
        put(x, w, c)
    for w, c in br(x, y):
        put(w, z, -c)
    sign = -1 if v.parity(x) & v.parity(y) else 1
    for w, c in br(x, z):
        put(y, w, -sign * c)
    return row


def iter_triples(variant: AlgebraVariant, N: int):
    """Basis triples with degrees in [-N, N] summing to zero and even total parity."""
    by_deg = {i: [a for a in variant.degree_basis(i) if a != CEN] for i in range(-N, N + 1)}
    par = variant.parity
    for dx in range(-N, N + 1):
        for dy in range(-N, N + 1):
            dz = -dx - dy
            if abs(dz) > N:
                continue
            for x in by_deg[dx]:
                for y in by_deg[dy]:
                    pxy = par(x) + par(y)
                    for z in by_deg[dz]:
                        if (pxy + par(z)) % 2 == 0:
                            yield x, y, z


def build_cocycle_system(variant: AlgebraVariant, N: int) -> Tuple[EchelonBasis, CocycleUnknowns]:
    """Reduced echelon form of the cocycle equations, plus the unknown index.

    Equations are inserted one at a time, so the echelon basis never holds more
    rows than there are unknowns.
    """
    _check_variant(variant)
    if N < MIN_WINDOW:
        raise ValueError(f"window must be >= {MIN_WINDOW}")
    unk = CocycleUnknowns(variant, N)
    system = EchelonBasis()
    full = len(unk)
    for x, y, z in iter_triples(variant, N):
        row = _equation(unk, x, y, z)
        if row:
            system.add(row)
            if system.rank == full:
                break
    return system, unk


def nullspace_of(system: EchelonBasis, n: int) -> List[Dict[int, Scalar]]:
    """rref-canonical nullspace of an echelon system over variables 0..n-1."""
    out = []
    pivots = system.rows
    for f in range(n):
        if f in pivots:
            continue
        vec = {f: 1}
        for p, row in pivots.items():
            c = row.get(f)
            if c:
                vec[p] = -c
        out.append(vec)
    return out


def coboundaries(unk: CocycleUnknowns) -> List[Tuple[BasisVector, Dict[int, Scalar]]]:
    """``rho_c([a, b])`` for every degree-zero atom c, as vectors over the unknowns."""
    v = unk.variant
    out = []
    for c in v.degree_basis(0):
        if c == CEN:
            continue
        vec: Dict[int, Scalar] = {}
        for n, (a, b) in enumerate(unk.pairs):
            for w, coef in v.bracket_atoms(a, b):
                if w == c:
                    vec[n] = coef
        out.append((c, vec))
    return out


def gauge_conditions(unk: CocycleUnknowns) -> List[Tuple[str, Dict[int, Scalar]]]:
    """One linear condition per nonzero coboundary direction.

    ===================== ===========================================
    coboundary direction  condition
    ===================== ===========================================
    d_0                   alpha(d_1, d_-1) = 0
    h_0                   alpha(Q_1, G_-1) - alpha(Q_-1, G_1) = 0
    x ⊗ 1   (x even)      alpha(d_1, x ⊗ t^-1) = 0
    x ⊗ xi  (x odd)       alpha(d_1, x ⊗ t^-1 xi) = 0
    ===================== ===========================================
    """
    v = unk.variant
    out = []

    def cond(name, terms):
        vec: Dict[int, Scalar] = {}
        for coef, a, b in terms:
            hit = unk.lookup(a, b)
            if hit is not None:
                add_into(vec, hit[0], coef * hit[1])
        if vec:
            out.append((name, vec))

    fams = v.families
    cond("d0", [(1, D(1), D(-1))])
    if _H in fams and _Q in fams:
        cond("h0", [(1, Q(1), G(-1)), (-1, Q(-1), G(1))])
    for s in range(v.g_dim):
        name = v.g.basis_names[s]
        if v.g.parities[s] == 0:
            cond(f"{name}*1", [(1, D(1), EV(s, -1))])
        else:
            cond(f"{name}*xi", [(1, D(1), OD(s, -1))])
    return out


@dataclass
class CocycleSolution:
    variant: AlgebraVariant
    certified_window: int
    h2_dimension: int
    cocycle_dimension: int
    coboundary_dimension: int
    unknowns: CocycleUnknowns = field(repr=False)
    representatives: List[Dict[Pair, Scalar]] = field(default_factory=list)
    _rep_vectors: List[Dict[int, Scalar]] = field(default_factory=list, repr=False)
    _coboundary_vectors: List[Dict[int, Scalar]] = field(default_factory=list, repr=False)
    stability: Dict[int, int] = field(default_factory=dict)

    def rep_function(self, n: int) -> Callable[[BasisVector, BasisVector], Scalar]:
        return table_function(self.representatives[n], self.variant)

    def to_dict(self) -> dict:
        g = self.variant.g
        return {
            "variant": self.variant.name(),
            "h2_dimension": self.h2_dimension,
            "certified_window": self.certified_window,
            "cocycle_dimension": self.cocycle_dimension,
            "coboundary_dimension": self.coboundary_dimension,
            "window_dimensions": {str(k): v for k, v in sorted(self.stability.items())},
            "representatives": [
                [[a.label(g), b.label(g), c] for (a, b), c in sorted(rep.items())] for rep in self.representatives
            ],
        }


def _to_pairs(unk: CocycleUnknowns, vec: Mapping[int, Scalar]) -> Dict[Pair, Scalar]:
    return unk.table(vec)


def _solve_once(variant: AlgebraVariant, N: int) -> CocycleSolution:
    system, unk = build_cocycle_system(variant, N)
    n = len(unk)
    z_basis = nullspace_of(system, n)
    cob = [vec for _, vec in coboundaries(unk)]
    space = EchelonBasis()
    for z in z_basis:
        space.add(z)
    b_space = EchelonBasis()
    for b in cob:
        if not space.contains(b):
            raise AssertionError("coboundary fails the cocycle system")
        b_space.add(b)
    h2 = space.rank - b_space.rank

    # gauge slice: cocycle system plus one condition per coboundary direction
    gauged = EchelonBasis()
    for _, row in system.rows.items():
        gauged.add(row)
    for _, row in gauge_conditions(unk):
        gauged.add(row)
    reps = nullspace_of(gauged, n)
    if len(reps) != h2:
        raise AssertionError(f"gauge slice has dimension {len(reps)}, expected {h2}")
    check = EchelonBasis()
    for vec in cob + reps:
        check.add(vec)
    if check.rank != space.rank:
        raise AssertionError("gauge slice is not transversal to the coboundaries")
    reps = [_normalize(unk, r) for r in _rref_vectors(reps)]
    sol = CocycleSolution(
        variant=variant,
        certified_window=N,
        h2_dimension=h2,
        cocycle_dimension=space.rank,
        coboundary_dimension=b_space.rank,
        unknowns=unk,
        representatives=[_to_pairs(unk, r) for r in reps],
        _rep_vectors=reps,
        _coboundary_vectors=cob,
    )
    return sol


def _rref_vectors(vectors: Sequence[Dict[int, Scalar]]) -> List[Dict[int, Scalar]]:
    basis = EchelonBasis()
    for v in vectors:
        basis.add(v)
    return [dict(row) for _, row in basis.sorted_rows()]


def _normalize(unk: CocycleUnknowns, vec: Dict[int, Scalar]) -> Dict[int, Scalar]:
    """Scale so that alpha(d_1, h_-1) = -1 when that entry is nonzero."""
    hit = unk.lookup(D(1), H(-1))
    if hit is None:
        return vec
    value = vec.get(hit[0], 0) * hit[1]
    if not value:
        return vec
    factor = Fraction(-1) / value
    return {k: normalize(c * factor) for k, c in vec.items()}


def solve_h2(variant: AlgebraVariant, N: int, check_stability: bool = True) -> CocycleSolution:
    """dim H^2 in degree zero with canonical representatives.

    With ``check_stability`` the dimension is recomputed at ``N + 1`` and
    :class:`WindowUnstable` is raised on disagreement.
    """
    _check_variant(variant)
    sol = _solve_once(variant, N)
    sol.stability[N] = sol.h2_dimension
    if check_stability:
        nxt = _solve_once(variant, N + 1)
        sol.stability[N + 1] = nxt.h2_dimension
        if nxt.h2_dimension != sol.h2_dimension:
            raise WindowUnstable(variant.name(), sol.stability)
    return sol


def canonical_form(sol: CocycleSolution, alpha: Union[Mapping[Pair, Scalar], Callable]) -> List[Scalar]:
    """Class coordinates of a cocycle on the solution's representatives.

    ``alpha`` is projected along the coboundaries onto the gauge slice and then
    expressed in the representative basis.  Raises ValueError if ``alpha`` is not
    a cocycle within the window.
    """
    unk = sol.unknowns
    fn = alpha if callable(alpha) else table_function(alpha, sol.variant)
    vec: Dict[int, Scalar] = {}
    for n, (a, b) in enumerate(unk.pairs):
        c = fn(a, b)
        if c:
            vec[n] = c
    basis = EchelonBasis(track=True)
    for r in sol._rep_vectors:
        basis.add(r)
    for b in sol._coboundary_vectors:
        basis.add(b)
    combo = basis.express(vec)
    if combo is None:
        raise ValueError("table is not a cocycle on the solver window")
    return [combo.get(i, 0) for i in range(len(sol._rep_vectors))]


# ---------------------------------------------------------------------------
# explicit tables
# ---------------------------------------------------------------------------

def table_function(table: Mapping[Pair, Scalar], variant: AlgebraVariant) -> Callable[[BasisVector, BasisVector], Scalar]:
    """Callable alpha from a table over ordered pairs ``a <= b``; completed by super-antisymmetry."""

    def alpha(a: BasisVector, b: BasisVector) -> Scalar:
        if (a, b) in table:
            return table[(a, b)]
        if (b, a) in table:
            sign = 1 if variant.parity(a) & variant.parity(b) else -1
            return sign * table[(b, a)]
        return 0

    return alpha


def central_cocycle(a: BasisVector, b: BasisVector) -> Scalar:
    """alpha(d_i,h_j) = -i^2 delta, alpha(h_i,h_j) = 2i delta, alpha(Q_i,G_j) = -i^2 delta, zero elsewhere."""
    if a.degree + b.degree != 0:
        return 0
    fa, fb, i = a.family, b.family, a.degree
    if fa == _D and fb == _H:
        return -i * i
    if fa == _H and fb == _D:
        j = b.degree
        return j * j
    if fa == _H and fb == _H:
        return 2 * i
    if fa == _Q and fb == _G:
        return -i * i
    if fa == _G and fb == _Q:
        j = b.degree
        return -j * j
    return 0


def literal_central_cocycle(a: BasisVector, b: BasisVector) -> Scalar:
    """Same table with the odd term placed on G-G pairs instead of Q-G."""
    if a.degree + b.degree != 0:
        return 0
    fa, fb, i = a.family, b.family, a.degree
    if fa in (_Q, _G) and fb in (_Q, _G):
        return -i * i if fa == fb == _G else 0
    return central_cocycle(a, b)


def zero_cocycle(a: BasisVector, b: BasisVector) -> Scalar:
    return 0


def verify_cocycle(alpha: Callable[[BasisVector, BasisVector], Scalar], variant: AlgebraVariant, window: int, max_witnesses: int = 1) -> Report:
    """Check both cocycle axioms for a degree-zero bilinear form on an in-window sweep."""
    variant = variant.centerless()
    report = Report(
        "cocycle",
        "alpha(x,y) = -(-1)^{|x||y|} alpha(y,x) and "
        "alpha(x,[y,z]) = alpha([x,y],z) + (-1)^{|x||y|} alpha(y,[x,z])",
        certified_window=window,
    )
    g = variant.g
    basis = [a for a in variant.basis(window) if a != CEN]
    for a in basis:
        for b in basis:
            v = alpha(a, b)
            if v and a.degree + b.degree != 0:
                raise ValueError(f"table is not supported on degree-zero pairs: ({a.label(g)}, {b.label(g)})")
            sign = 1 if variant.parity(a) & variant.parity(b) else -1
            if v != sign * alpha(b, a):
                report.fail(axiom="antisymmetry", pair=[a.label(g), b.label(g)], ab=v, ba=alpha(b, a))
                if len(report.witnesses) >= max_witnesses:
                    return report
    checked = 0
    for x, y, z in iter_triples(variant, window):
        checked += 1

        def ev(pairs_terms):
            return sum((c * alpha(p, q) for p, q, c in pairs_terms), 0)

        br = variant.bracket_atoms
        lhs = ev([(x, w, c) for w, c in br(y, z)])
        sign = -1 if variant.parity(x) & variant.parity(y) else 1
        rhs = ev([(w, z, c) for w, c in br(x, y)]) + sign * ev([(y, w, c) for w, c in br(x, z)])
        if lhs != rhs:
            report.fail(axiom="cocycle", triple=[x.label(g), y.label(g), z.label(g)], lhs=lhs, rhs=rhs)
            if len(report.witnesses) >= max_witnesses:
                break
    report.details["checked"] = checked
    return report
