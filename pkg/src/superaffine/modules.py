"""Tensor modules Gamma(lambda, V) = A ⊗ V.

V is a finite-dimensional module over a_0 / a_1 = gl(1,1) ⊕ g, given by matrices
for the coset generators ``td0 = (t-1)d_0``, ``h0``, ``tQ0 = (t-1)Q_0``, ``G0`` and
one ``g:<name>`` matrix per basis vector of g.  The action of any a_0 element is
obtained by reducing it modulo a_1 onto those cosets.

For ``a = t^n xi^r`` the algebra acts by

=========== ==============================================================
generator   image of a ⊗ v
=========== ==============================================================
t^i xi^q    t^i xi^q a ⊗ v
d_i         t^i a ⊗ (d_i - d_0) v + t^i (lambda a + d_0(a)) ⊗ v
h_i         t^i a ⊗ h_i v + xi Q_i(a) ⊗ v + (-1)^{|a|} t^i xi a ⊗ (Q_i - Q_0) v
Q_i         (-1)^{|a|} t^i a ⊗ (Q_i - Q_0) v + t^i Q_0(a) ⊗ v
G_i         (-1)^{|a|} t^i a ⊗ G_i v + xi (lambda t^i a + d_i(a)) ⊗ v
            + t^i xi a ⊗ (d_i - d_0) v
x ⊗ t^i     (-1)^{|a||x|} t^i a ⊗ (x ⊗ t^i) v
x ⊗ t^i xi  (-1)^{(|a|+1)|x|} t^i xi a ⊗ (x ⊗ t^i) v
            + (-1)^{|a|(|x|+1)} t^i a ⊗ (x ⊗ t^i xi) v
=========== ==============================================================

The last term always vanishes because ``x ⊗ t^i xi`` lies in a_1.  The
``t^i xi a`` terms of h_i and G_i come from writing ``xi . Q_i`` and ``xi . d_i`` as
``xi t^i Q_0 + t^i xi (t^-i Q_i - Q_0)`` and ``xi t^i d_0 + t^i xi (t^-i d_i - d_0)``;
they only matter when (t-1)Q_0 or (t-1)d_0 acts nontrivially on V.
"""
from __future__ import annotations

import json
import random
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

from .algebra import (
    CEN,
    AlgebraVariant,
    BasisVector,
    D,
    Family,
    IllegalFamily,
    Q,
    VariantTag,
    make_variant,
)
from .exact import EchelonBasis, Scalar, SparseVec, add_into, mat_lincomb, mat_mul, normalize, scalar
from .filtration import DELTA_COSETS, WindowTooSmall, quotient_bracket_table, quotient_coordinates
from .gspec import GSpec, ParseError
from .reports import Report

_D, _H, _Q, _G, _EV, _OD, _CEN = (int(f) for f in Family)

Matrix = List[List[Scalar]]


class InvalidVSpec(ValueError):
    def __init__(self, message: str, pair: Optional[Tuple[str, str]] = None):
        super().__init__(message)
        self.pair = pair


# ---------------------------------------------------------------------------
# V specs
# ---------------------------------------------------------------------------

def _zero(n: int) -> Matrix:
    return [[0] * n for _ in range(n)]


def _super_commutator(a: Matrix, b: Matrix, pa: int, pb: int) -> Matrix:
    ab, ba = mat_mul(a, b), mat_mul(b, a)
    sign = -1 if pa & pb else 1
    n = len(a)
    return [[normalize(ab[i][j] - sign * ba[i][j]) for j in range(n)] for i in range(n)]


class A0ModuleSpec:
    """Matrices of the gl(1,1) ⊕ g generators on V, validated at construction.

    Raises :class:`InvalidVSpec` if a matrix does not respect the parity grading
    or the representation property fails on some generator pair.
    """

    def __init__(self, name: str, parities: Sequence[int], matrices: Dict[str, Matrix], g: Optional[GSpec]):
        self.name = name
        self.dim = len(parities)
        self.parities = tuple(int(p) for p in parities)
        self.g = g
        variant = make_variant("l" if g is not None else "w-super", g)
        self.variant = variant
        table = quotient_bracket_table(variant, include_g=g is not None)
        self.generators = table.names
        self.generator_parities = table.parities
        unknown = set(matrices) - set(self.generators)
        if unknown:
            raise InvalidVSpec(f"unknown generator(s) {sorted(unknown)}; expected a subset of {list(self.generators)}")
        n = self.dim
        self.matrices: Dict[str, Matrix] = {}
        for name_, gp in zip(self.generators, self.generator_parities):
            m = matrices.get(name_)
            if m is None:
                m = _zero(n)
            if len(m) != n or any(len(row) != n for row in m):
                raise InvalidVSpec(f"matrix {name_} is not {n}x{n}")
            m = [[scalar(c) for c in row] for row in m]
            for i in range(n):
                for j in range(n):
                    if m[i][j] and (self.parities[i] + self.parities[j]) % 2 != gp:
                        raise InvalidVSpec(f"matrix {name_} has entry ({i},{j}) of the wrong parity")
            self.matrices[name_] = m
        self._validate(table)

    def _validate(self, table) -> None:
        names, pars = self.generators, self.generator_parities
        n = self.dim
        for a in range(len(names)):
            for b in range(len(names)):
                lhs = mat_lincomb(
                    ((c, self.matrices[names[w]]) for w, c in table.brackets.get((a, b), {}).items()), n
                )
                rhs = _super_commutator(self.matrices[names[a]], self.matrices[names[b]], pars[a], pars[b])
                if lhs != rhs:
                    raise InvalidVSpec(
                        f"representation property fails on ({names[a]}, {names[b]})",
                        pair=(names[a], names[b]),
                    )

    def matrix_of(self, coords: Dict[str, Scalar]) -> Matrix:
        return mat_lincomb(((c, self.matrices[name]) for name, c in coords.items()), self.dim)

    def to_document(self) -> dict:
        from .exact import format_scalar

        return {
            "name": self.name,
            "dim": self.dim,
            "parity": list(self.parities),
            "generators": {
                k: [[format_scalar(c) for c in row] for row in m]
                for k, m in self.matrices.items()
                if any(any(row) for row in m)
            },
        }


def load_vspec(document: Union[str, dict], g: Optional[GSpec], name: str = "custom") -> A0ModuleSpec:
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(document, dict):
        raise ParseError("V-spec document must be an object")
    try:
        dim = int(document["dim"])
        parities = [int(p) for p in document.get("parity", [0] * dim)]
        gens = document.get("generators", {})
        mats = {k: [[scalar(c) for c in row] for row in m] for k, m in gens.items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed V-spec: {exc}") from None
    if len(parities) != dim:
        raise ParseError("parity list length differs from dim")
    return A0ModuleSpec(document.get("name", name), parities, mats, g)


def load_vspec_file(path: Union[str, Path], g: Optional[GSpec]) -> A0ModuleSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return load_vspec(text, g, name=path.stem)


def trivial_vspec(g: Optional[GSpec]) -> A0ModuleSpec:
    return A0ModuleSpec("trivial", [0], {}, g)


def gl11_vspec(g: Optional[GSpec]) -> A0ModuleSpec:
    """The natural 1|1-dimensional gl(1,1) module; g acts as zero."""
    return A0ModuleSpec(
        "gl11",
        [0, 1],
        {
            "h0": [[1, 0], [0, 0]],
            "td0": [[0, 0], [0, 1]],
            "G0": [[0, 1], [0, 0]],
            "tQ0": [[0, 0], [1, 0]],
        },
        g,
    )


def adjoint_vspec(g: GSpec) -> A0ModuleSpec:
    """Adjoint module of g; gl(1,1) acts as zero."""
    if g is None:
        raise InvalidVSpec("the adjoint module needs a nonzero g")
    n = g.dim
    mats = {}
    for s in range(n):
        m = _zero(n)
        for u in range(n):
            for w, c in g.bracket(s, u):
                m[w][u] = c
        mats[f"g:{g.basis_names[s]}"] = m
    return A0ModuleSpec(f"adjoint-{g.name}", g.parities, mats, g)


def resolve_vspec(ref: str, g: Optional[GSpec]) -> A0ModuleSpec:
    if ref.startswith("@"):
        return load_vspec_file(ref[1:], g)
    if ref == "trivial":
        return trivial_vspec(g)
    if ref == "gl11":
        return gl11_vspec(g)
    if ref == "adjoint":
        return adjoint_vspec(g)
    if ref == "adjoint-sl2":
        if g is None or g.name != "sl2":
            raise InvalidVSpec("adjoint-sl2 needs --g sl2")
        return adjoint_vspec(g)
    raise ParseError(f"unknown V-spec {ref!r}; choose from trivial, gl11, adjoint-sl2, adjoint, @file")


# ---------------------------------------------------------------------------
# the module
# ---------------------------------------------------------------------------

class MBasis(NamedTuple):
    """``t^n xi^r ⊗ v_j``."""

    n: int
    r: int
    j: int

    def label(self) -> str:
        return f"t^{self.n}{'xi' if self.r else ''}*v{self.j}"


class AAtom(NamedTuple):
    """``t^n xi^r`` in the supercommutative algebra A."""

    n: int
    r: int

    def label(self) -> str:
        return f"t^{self.n}{'xi' if self.r else ''}"


def mvec(*terms) -> SparseVec:
    d: Dict[MBasis, Scalar] = {}
    for t in terms:
        if isinstance(t, MBasis):
            add_into(d, t, 1)
        else:
            add_into(d, t[1], scalar(t[0]))
    return SparseVec._wrap(d)


def derivation_on_A(x: BasisVector, f: AAtom) -> Dict[AAtom, Scalar]:
    """Action of a Witt atom on A by superderivations; current atoms act by zero."""
    i, n, r = x.degree, f.n, f.r
    fam = x.family
    if fam == _D:
        return {AAtom(n + i, r): n} if n else {}
    if fam == _H:
        return {AAtom(n + i, 1): 1} if r else {}
    if fam == _Q:
        return {AAtom(n + i, 0): 1} if r else {}
    if fam == _G:
        return {AAtom(n + i, 1): n} if (n and not r) else {}
    return {}


class TensorModule:
    """Gamma(lambda, V) over the centerless variant with the module's g."""

    def __init__(self, lam, vspec: A0ModuleSpec):
        self.lam = scalar(lam)
        self.v = vspec
        self.variant = vspec.variant
        self._pull: Dict[Tuple[int, int, int], Matrix] = {}
        self._cache: Dict[Tuple[BasisVector, MBasis], Tuple[Tuple[MBasis, Scalar], ...]] = {}

    @property
    def dim_v(self) -> int:
        return self.v.dim

    def name(self) -> str:
        from .exact import format_scalar

        return f"Gamma({format_scalar(self.lam)}, {self.v.name})"

    def parity(self, b: MBasis) -> int:
        return (b.r + self.v.parities[b.j]) % 2

    # pullback of a_0 elements to V
    def pullback(self, x: BasisVector) -> Matrix:
        key = (x.family, x.degree, x.g_index)
        m = self._pull.get(key)
        if m is None:
            i = x.degree
            if x.family == _D:
                e = SparseVec._wrap({D(i): 1, D(0): -1}) if i else SparseVec()
            elif x.family == _Q:
                e = SparseVec._wrap({Q(i): 1, Q(0): -1}) if i else SparseVec()
            else:
                e = SparseVec._wrap({x: 1})
            coords = quotient_coordinates(e, self.variant, include_g=self.v.g is not None) if e else {}
            m = self._pull[key] = self.v.matrix_of(coords)
        return m

    def _apply_matrix(self, m: Matrix, j: int) -> List[Tuple[int, Scalar]]:
        return [(w, m[w][j]) for w in range(self.v.dim) if m[w][j]]

    def act_basis(self, x: BasisVector, b: MBasis) -> Tuple[Tuple[MBasis, Scalar], ...]:
        key = (x, b)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = tuple(sorted(self._act(x, b).items()))
        return hit

    def _act(self, x: BasisVector, b: MBasis) -> Dict[MBasis, Scalar]:
        fam = x.family
        if fam == _CEN:
            raise IllegalFamily("the central element does not act on Gamma(lambda, V)")
        self.variant.check_atom(x)
        i = x.degree
        n, r, j = b
        lam = self.lam
        out: Dict[MBasis, Scalar] = {}
        sgn_a = -1 if r else 1
        if fam == _D:
            for w, c in self._apply_matrix(self.pullback(x), j):
                add_into(out, MBasis(n + i, r, w), c)
            add_into(out, MBasis(n + i, r, j), lam + n)
        elif fam == _H:
            for w, c in self._apply_matrix(self.pullback(x), j):
                add_into(out, MBasis(n + i, r, w), c)
            if r:
                add_into(out, MBasis(n + i, 1, j), 1)
            else:
                for w, c in self._apply_matrix(self.pullback(Q(i)), j):
                    add_into(out, MBasis(n + i, 1, w), c)
        elif fam == _Q:
            for w, c in self._apply_matrix(self.pullback(x), j):
                add_into(out, MBasis(n + i, r, w), sgn_a * c)
            if r:
                add_into(out, MBasis(n + i, 0, j), 1)
        elif fam == _G:
            for w, c in self._apply_matrix(self.pullback(x), j):
                add_into(out, MBasis(n + i, r, w), sgn_a * c)
            if not r:
                add_into(out, MBasis(n + i, 1, j), lam + n)
                for w, c in self._apply_matrix(self.pullback(D(i)), j):
                    add_into(out, MBasis(n + i, 1, w), c)
        elif fam == _EV:
            px = self.v.g.parities[x.g_index]
            sign = -1 if (r & px) else 1
            for w, c in self._apply_matrix(self.pullback(x), j):
                add_into(out, MBasis(n + i, r, w), sign * c)
        elif fam == _OD:
            px = self.v.g.parities[x.g_index]
            if not r:
                sign = -1 if px else 1
                ev = BasisVector(_EV, i, x.g_index)
                for w, c in self._apply_matrix(self.pullback(ev), j):
                    add_into(out, MBasis(n + i, 1, w), sign * c)
            sign2 = -1 if (r * (px + 1)) % 2 else 1
            for w, c in self._apply_matrix(self.pullback(x), j):
                add_into(out, MBasis(n + i, r, w), sign2 * c)
        return out

    def act(self, x: Union[BasisVector, SparseVec], w: SparseVec) -> SparseVec:
        """Module action of an algebra element on a module vector."""
        elem = x if isinstance(x, SparseVec) else SparseVec._wrap({x: 1})
        out: Dict[MBasis, Scalar] = {}
        for a, ca in elem.items():
            if a.family == _CEN:
                raise IllegalFamily("the central element does not act on Gamma(lambda, V)")
            for b, cb in w.items():
                c = ca * cb
                for m, cm in self.act_basis(a, b):
                    add_into(out, m, c * cm)
        return SparseVec._wrap(out)

    def act_A(self, f: AAtom, w: SparseVec) -> SparseVec:
        out: Dict[MBasis, Scalar] = {}
        for b, c in w.items():
            if f.r and b.r:
                continue
            add_into(out, MBasis(b.n + f.n, f.r | b.r, b.j), c)
        return SparseVec._wrap(out)

    def slice_basis(self, n: int) -> List[MBasis]:
        return [MBasis(n, r, j) for r in (0, 1) for j in range(self.v.dim)]


# ---------------------------------------------------------------------------
# sweeps and reports
# ---------------------------------------------------------------------------

def _lab(vec: SparseVec) -> Dict[str, Scalar]:
    return {b.label(): c for b, c in vec.sorted_items()}


def verify_module_axioms(
    m: TensorModule,
    window: int,
    guard: int = 2,
    sample: Union[str, Tuple[int, int]] = "all",
    max_witnesses: int = 1,
) -> Report:
    """Super-commutator, weight grading, A-associativity and semidirect sweeps.

    Algebra atoms range over degrees in [-window, window]; module basis vectors
    over slices [-guard, guard].  ``sample=(seed, count)`` checks a random subset
    of the algebra pairs instead of all of them.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    report = Report(
        "module-axioms",
        "[a,b] w = a(b w) - (-1)^{|a||b|} b(a w); A acts associatively and unitally; "
        "x(f w) - (-1)^{|x||f|} f(x w) = x(f) w",
        certified_window=window,
    )
    variant = m.variant
    g = variant.g
    atoms = [a for a in variant.basis(window) if a != CEN]
    vecs = [b for n in range(-guard, guard + 1) for b in m.slice_basis(n)]
    pairs = [(a, b) for a in atoms for b in atoms]
    if sample != "all":
        seed, count = sample
        rng = random.Random(seed)
        pairs = rng.sample(pairs, min(count, len(pairs)))
        report.details["seed"] = seed
    par = variant.parity
    counts = {"commutator": 0, "grading": 0, "associativity": 0, "semidirect": 0}

    def done():
        report.details.update(counts)
        return report

    for x in atoms:
        for b in vecs:
            counts["grading"] += 1
            for out, _ in m.act_basis(x, b):
                if out.n != b.n + x.degree or m.parity(out) != (m.parity(b) + par(x)) % 2:
                    report.fail(law="grading", atom=x.label(g), vector=b.label(), term=out.label())
                    if len(report.witnesses) >= max_witnesses:
                        return done()
    for x, y in pairs:
        xy = variant.bracket(SparseVec._wrap({x: 1}), SparseVec._wrap({y: 1}))
        sign = -1 if par(x) & par(y) else 1
        for b in vecs:
            counts["commutator"] += 1
            w = SparseVec._wrap({b: 1})
            lhs = m.act(xy, w)
            rhs = m.act(x, m.act(y, w)) - m.act(y, m.act(x, w)).scale(sign)
            if lhs != rhs:
                report.fail(law="commutator", pair=[x.label(g), y.label(g)], vector=b.label(), lhs=_lab(lhs), rhs=_lab(rhs))
                if len(report.witnesses) >= max_witnesses:
                    return done()
    a_atoms = [AAtom(n, r) for n in range(-window, window + 1) for r in (0, 1)]
    for b in vecs:
        w = SparseVec._wrap({b: 1})
        if m.act_A(AAtom(0, 0), w) != w:
            report.fail(law="unit", vector=b.label())
            return done()
        for f in a_atoms:
            fw = m.act_A(f, w)
            for h in a_atoms:
                counts["associativity"] += 1
                # xi^2 = 0; t is even so no sign otherwise
                if f.r and h.r:
                    prod = SparseVec()
                else:
                    prod = m.act_A(AAtom(f.n + h.n, f.r | h.r), w)
                if prod != m.act_A(f, m.act_A(h, w)):
                    report.fail(law="associativity", pair=[f.label(), h.label()], vector=b.label())
                    if len(report.witnesses) >= max_witnesses:
                        return done()
            for x in atoms:
                counts["semidirect"] += 1
                sign = -1 if par(x) & f.r else 1
                lhs = m.act(x, fw) - m.act_A(f, m.act(x, w)).scale(sign)
                rhs: Dict[MBasis, Scalar] = {}
                for f2, c in derivation_on_A(x, f).items():
                    for k, v in m.act_A(f2, w).items():
                        add_into(rhs, k, c * v)
                if lhs != SparseVec._wrap(rhs):
                    report.fail(law="semidirect", pair=[x.label(g), f.label()], vector=b.label(),
                                lhs=_lab(lhs), rhs=_lab(SparseVec._wrap(rhs)))
                    if len(report.witnesses) >= max_witnesses:
                        return done()
    return done()


def weight_report(m: TensorModule, window: int) -> Report:
    """Dimension of each d_0 weight space lambda + n for n in [-window, window]."""
    report = Report(
        "weight-report",
        "supp = lambda + Z with weight spaces of dimension 2 dim V",
        certified_window=window,
    )
    offsets = list(range(-window, window + 1))
    dims = []
    for n in offsets:
        basis = m.slice_basis(n)
        target = m.lam + n
        rows = EchelonBasis()
        for b in basis:
            image = m.act(D(0), SparseVec._wrap({b: 1})) - SparseVec._wrap({b: target})
            stray = [k for k in image if k.n != n]
            if stray:
                return report.fail(reason="d_0 leaves the slice", vector=b.label())
            rows.add(dict(image.items()))
        dims.append(len(basis) - rows.rank)
    report.details["support_offsets"] = offsets
    report.details["slice_dimensions"] = dims
    report.details["bounded"] = max(dims) == min(dims)
    report.details["expected"] = 2 * m.dim_v
    if any(d != 2 * m.dim_v for d in dims):
        report.fail(reason="slice dimension differs from 2 dim V", slice_dimensions=dims)
    return report


def submodule_probe(m: TensorModule, window: int, generators: Sequence[SparseVec]) -> Report:
    """Windowed closure of ``generators`` under the algebra basis.

    Each generator is split into slices (d_0 separates them), then atoms are
    applied as long as the image stays in [-window, window].  A proper windowed
    span does not certify a submodule; a full one is evidence toward simplicity.
    """
    report = Report(
        "submodule-probe",
        "windowed span of generators under the algebra action",
        certified_window=window,
    )
    for gen in generators:
        for b in gen:
            if abs(b.n) >= window:
                raise WindowTooSmall(f"generator component {b.label()} is not inside window {window}")
    spans = {n: EchelonBasis(order=lambda b: (b.r, b.j)) for n in range(-window, window + 1)}
    queue: List[Tuple[int, Dict[MBasis, Scalar]]] = []

    def push(vec: SparseVec):
        by_slice: Dict[int, Dict[MBasis, Scalar]] = {}
        for b, c in vec.items():
            by_slice.setdefault(b.n, {})[b] = c
        for n, part in by_slice.items():
            if n in spans and spans[n].add(part):
                queue.append((n, part))

    for gen in generators:
        push(gen)
    variant = m.variant
    while queue:
        n, part = queue.pop()
        w = SparseVec._wrap(dict(part))
        for i in range(-window - n, window - n + 1):
            for x in variant.degree_basis(i):
                if x != CEN:
                    push(m.act(x, w))
    dims = {n: spans[n].rank for n in spans}
    full = all(dims[n] == 2 * m.dim_v for n in dims)
    report.details["slice_dimensions"] = [dims[n] for n in sorted(dims)]
    report.details["proper"] = not full
    report.details["caveat"] = "a proper windowed span does not certify a submodule"
    notes = []
    for n in sorted(dims):
        if m.lam + n == 0 and any(b.n == n and b.r == 0 for gen in generators for b in gen):
            notes.append(f"lambda + n = 0 at n = {n}: d_i and G_i kill t^{n} ⊗ V up to the V-action")
    if notes:
        report.details["notes"] = notes
    return report


def faithful_gl11_identification(v: A0ModuleSpec) -> Report:
    """Check that V realizes the coset algebra faithfully inside gl(dim V).

    With the 1|1-dimensional module this exhibits an explicit isomorphism of the
    computed coset table onto gl(1,1).
    """
    report = Report("gl11-identification", "coset generators map injectively and bracket-preservingly to matrices")
    images = EchelonBasis()
    for name in DELTA_COSETS:
        m = v.matrices[name]
        images.add({(i, j): c for i, row in enumerate(m) for j, c in enumerate(row) if c})
    report.details["rank"] = images.rank
    report.details["matrices"] = {k: v.matrices[k] for k in DELTA_COSETS}
    if images.rank != len(DELTA_COSETS):
        report.fail(reason="coset generators are not mapped injectively", rank=images.rank)
    return report
