"""Quadratic operators on tensor modules.

* Differentiators ``Omega^{(m)}_{k,s} = sum_i (-1)^i C(m,i) d_{k-i} d_{s+i}``.
* Operators ``sum_i (-1)^i C(m,i) y_{j-i} d_{p+i}`` with ``y`` a current
  ``x ⊗ t^*`` or ``x ⊗ t^* xi``.
* The A-module structure on ``I = g ⊗ A`` and windowed membership in
  ``K(M) = {sum w_i ⊗ v_i : sum (a w_i) v_i = 0 for all a in A}``.
* The shifted generators ``dbar_i = d_i + i h_i / 2``.

Words act right factor first: ``(a b) w = a (b w)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

from .algebra import CEN, AlgebraVariant, BasisVector, D, EV, Family, H, OD, make_variant
from .exact import EchelonBasis, Scalar, SparseVec, add_into, normalize, solve_in_span
from .filtration import WindowTooSmall
from .modules import AAtom, MBasis, TensorModule
from .reports import Report

_D, _H, _Q, _G, _EV, _OD, _CEN = (int(f) for f in Family)


def _alt(m: int, i: int) -> int:
    return comb(m, i) * (-1 if i & 1 else 1)


class UEAWord:
    """Formal linear combination of ordered products of basis atoms."""

    def __init__(self, terms: Iterable[Tuple[Scalar, Tuple[BasisVector, ...]]] = ()):
        acc: Dict[Tuple[BasisVector, ...], Scalar] = {}
        for c, word in terms:
            add_into(acc, tuple(word), c)
        self.terms = SparseVec._wrap(acc)

    def __iter__(self):
        return iter(self.terms.sorted_items())

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, UEAWord) and self.terms == other.terms

    def __repr__(self) -> str:
        return " + ".join(f"{c}*{'·'.join(a.label() for a in w)}" for w, c in self)

    def degree_shift(self) -> Optional[int]:
        shifts = {sum(a.degree for a in w) for w, _ in self}
        return shifts.pop() if len(shifts) == 1 else None

    def apply(self, module: TensorModule, w: SparseVec) -> SparseVec:
        out: Dict[MBasis, Scalar] = {}
        for word, c in self.terms.items():
            vec = w
            for atom in reversed(word):
                vec = module.act(atom, vec)
                if not vec:
                    break
            for b, cb in vec.items():
                add_into(out, b, c * cb)
        return SparseVec._wrap(out)


def differentiator(k: int, s: int, m: int) -> UEAWord:
    if m < 0:
        raise ValueError("m must be >= 0")
    return UEAWord((_alt(m, i), (D(k - i), D(s + i))) for i in range(m + 1))


def current_operator(y_family: int, g_index: int, j: int, p: int, m: int) -> UEAWord:
    """``sum_i (-1)^i C(m,i) y_{j-i} d_{p+i}`` with y = x_s ⊗ t^{j-i} (EV) or x_s ⊗ t^{j-i} xi (OD)."""
    return UEAWord(
        (_alt(m, i), (BasisVector(y_family, j - i, g_index), D(p + i))) for i in range(m + 1)
    )


# ---------------------------------------------------------------------------
# annihilation searches
# ---------------------------------------------------------------------------

class NotFoundUpTo(NamedTuple):
    limit: int
    witness: Optional[dict]


def _interior(window: int, guard: int) -> range:
    if window < guard:
        raise WindowTooSmall(f"window {window} is smaller than the guard band {guard}")
    return range(-(window - guard), window - guard + 1)


def _first_nonannihilated(module: TensorModule, words: Iterable[Tuple[dict, UEAWord]], slices: range):
    for tag, word in words:
        for n in slices:
            for b in module.slice_basis(n):
                out = word.apply(module, SparseVec._wrap({b: 1}))
                if out:
                    return dict(tag, vector=b.label(), image={k.label(): c for k, c in out.sorted_items()})
    return None


def minimal_annihilating_m(
    module: TensorModule,
    k_range: Sequence[int],
    s_range: Sequence[int],
    window: int,
    limit: int = 6,
) -> Union[Tuple[int, Optional[dict]], NotFoundUpTo]:
    """Smallest m <= limit with Omega^{(m)}_{k,s} killing every interior slice vector.

    Returns ``(m, witness for m - 1)``; the guard band is ``max|k| + max|s| + limit``.
    """
    guard = max(abs(k) for k in k_range) + max(abs(s) for s in s_range) + limit
    slices = _interior(window, guard)
    last = None
    for m in range(limit + 1):
        words = (({"k": k, "s": s, "m": m}, differentiator(k, s, m)) for k in k_range for s in s_range)
        bad = _first_nonannihilated(module, words, slices)
        if bad is None:
            return m, last
        last = bad
    return NotFoundUpTo(limit, last)


def verify_lemma52(
    module: TensorModule,
    m: int,
    window: int,
    j_range: Sequence[int] = range(-2, 3),
    p_range: Sequence[int] = range(-2, 3),
) -> Report:
    """Both current operator families of order m annihilate every interior slice vector."""
    report = Report(
        "current-annihilators",
        "sum_i (-1)^i C(m,i) y_{j-i} d_{p+i} annihilates M for y = x ⊗ t^*, x ⊗ t^* xi",
        certified_window=window,
    )
    variant = module.variant
    if variant.g_dim == 0:
        report.details["note"] = "g is zero; the family is empty"
        return report
    guard = max(abs(j) for j in j_range) + max(abs(p) for p in p_range) + m
    slices = _interior(window, guard)
    words = (
        ({"family": Family(f).name, "x": variant.g.basis_names[s], "j": j, "p": p, "m": m}, current_operator(f, s, j, p, m))
        for f in (_EV, _OD)
        for s in range(variant.g_dim)
        for j in j_range
        for p in p_range
    )
    bad = _first_nonannihilated(module, words, slices)
    if bad is not None:
        report.fail(**bad)
    report.details["m"] = m
    report.details["interior_slices"] = [slices.start, slices.stop - 1]
    return report


# ---------------------------------------------------------------------------
# symbolic commutator [Omega, y]
# ---------------------------------------------------------------------------

def _normal_order(variant: AlgebraVariant, word: Tuple[BasisVector, ...], coef: Scalar, out: Dict) -> None:
    """Rewrite a word of d's and one current atom with the current moved to the left."""
    for pos in range(1, len(word)):
        left, right = word[pos - 1], word[pos]
        if left.family == _D and right.family in (_EV, _OD):
            swapped = word[: pos - 1] + (right, left) + word[pos + 1:]
            _normal_order(variant, swapped, coef, out)
            for w, c in variant.bracket_atoms(left, right):
                _normal_order(variant, word[: pos - 1] + (w,) + word[pos + 1:], coef * c, out)
            return
    add_into(out, word, coef)


def commutator_with_current(variant: AlgebraVariant, word: UEAWord, y: BasisVector) -> Dict[Tuple[BasisVector, ...], Scalar]:
    """Normal-ordered ``[word, y]`` for a word of d's and a current atom y."""
    out: Dict[Tuple[BasisVector, ...], Scalar] = {}
    for w, c in word:
        _normal_order(variant, w + (y,), c, out)
        add_into(out, (y,) + w, -c)
    return out


def verify_current_closure(variant: AlgebraVariant, m: int, total: int = 0, radius: int = 3, family: int = _EV, g_index: int = 0) -> Report:
    """The order-(m+2) current operators lie in the span of the commutators [Omega^{(m)}_{k,p}, y_j].

    All (k, p, j) with ``k + p + j = total`` and entries bounded by a radius wide
    enough for the target supports are used; the linear terms of each commutator
    must vanish and every target ``sum_i (-1)^i C(m+2,i) y_{J-i} d_{P+i}`` with
    ``J + P = total`` and ``|J|, |P| <= radius`` must be a finite combination.
    """
    report = Report(
        "current-closure",
        "[Omega^{(m)}_{k,p}, y_j] spans the order-(m+2) operators sum_i (-1)^i C(m+2,i) y_{J-i} d_{P+i}",
    )
    if m < 2:
        raise ValueError("linear terms survive for m < 2")
    wide = radius + m + 4
    span = EchelonBasis()
    for k in range(-wide, wide + 1):
        for p in range(-wide, wide + 1):
            j = total - k - p
            if abs(j) > wide:
                continue
            y = BasisVector(family, j, g_index)
            comm = commutator_with_current(variant, differentiator(k, p, m), y)
            linear = {w: c for w, c in comm.items() if len(w) == 1}
            if linear:
                report.fail(reason="linear terms survive", k=k, p=p, j=j,
                            terms={w[0].label(variant.g): c for w, c in linear.items()})
                return report
            span.add({w: c for w, c in comm.items()})
    checked = 0
    for J in range(-radius, radius + 1):
        P = total - J
        if abs(P) > radius:
            continue
        target = current_operator(family, g_index, J, P, m + 2)
        checked += 1
        if not span.contains(dict(target.terms.items())):
            report.fail(J=J, P=P, m=m)
            return report
    report.details.update({"m": m, "order": m + 2, "total_degree": total, "checked": checked})
    return report


# ---------------------------------------------------------------------------
# K(M)
# ---------------------------------------------------------------------------

def a_times_current(a: AAtom, w: BasisVector) -> Optional[BasisVector]:
    """A-module structure on I = g ⊗ A; None means zero."""
    if w.family == _EV:
        return BasisVector(_OD if a.r else _EV, w.degree + a.n, w.g_index)
    if w.family == _OD:
        return None if a.r else BasisVector(_OD, w.degree + a.n, w.g_index)
    raise ValueError("I is spanned by current atoms")


@dataclass(frozen=True)
class CoverElement:
    """``sum_k c_k w_k ⊗ v_k`` with w_k current atoms and v_k module vectors."""

    terms: Tuple[Tuple[Scalar, BasisVector, SparseVec], ...]

    def scale_by(self, a: AAtom) -> "CoverElement":
        out = []
        for c, w, v in self.terms:
            aw = a_times_current(a, w)
            if aw is not None:
                out.append((c, aw, v))
        return CoverElement(tuple(out))

    def support(self) -> int:
        return max(
            (max([abs(w.degree)] + [abs(b.n) for b in v]) for _, w, v in self.terms),
            default=0,
        )

    def evaluate(self, module: TensorModule) -> SparseVec:
        out: Dict[MBasis, Scalar] = {}
        for c, w, v in self.terms:
            for b, cb in module.act(w, v).items():
                add_into(out, b, c * cb)
        return SparseVec._wrap(out)


def k_membership(c: CoverElement, module: TensorModule, window: int) -> bool:
    """Check ``sum (a w_k) v_k = 0`` for every A-atom a of degree in [-window, window]."""
    if c.support() > window:
        raise WindowTooSmall(f"cover element supported up to {c.support()}, outside window {window}")
    for n in range(-window, window + 1):
        for r in (0, 1):
            if c.scale_by(AAtom(n, r)).evaluate(module):
                return False
    return True


def cover_element(module: TensorModule, s: int, j: int, p: int, m: int, v: SparseVec) -> CoverElement:
    """``sum_i (-1)^i C(m,i) (x_s ⊗ t^{j-i}) ⊗ d_{p+i} v``."""
    return CoverElement(
        tuple((_alt(m, i), EV(s, j - i), module.act(D(p + i), v)) for i in range(m + 1))
    )


# ---------------------------------------------------------------------------
# dbar
# ---------------------------------------------------------------------------

def dbar(i: int) -> SparseVec:
    return SparseVec._wrap({D(i): 1, H(i): Fraction(i, 2)} if i else {D(0): 1})


_HAT = None


def _hat_variant() -> AlgebraVariant:
    global _HAT
    if _HAT is None:
        _HAT = make_variant("l-hat")
    return _HAT


def dbar_bracket_check(i: int, j: int) -> Report:
    """Bracket [dbar_i, dbar_j] with the central term kept; reports the central coefficient."""
    v = _hat_variant()
    br = v.bracket(dbar(i), dbar(j))
    central = br.get(CEN, 0)
    noncentral = SparseVec._wrap({a: c for a, c in br.items() if a != CEN})
    want = dbar(i + j).scale(j - i)
    report = Report(
        "dbar-bracket",
        "[dbar_i, dbar_j] = (j-i) dbar_{i+j} + c(j) delta_{i+j,0} C with dbar_i = d_i + i h_i / 2",
    )
    report.details.update({"i": i, "j": j, "central": central})
    if noncentral != want:
        report.fail(i=i, j=j, noncentral={a.label(): c for a, c in noncentral.sorted_items()})
    if central and i + j != 0:
        report.fail(i=i, j=j, reason="central term off the diagonal")
    return report


def dbar_central_cubic(radius: int = 6) -> Report:
    """Fit c(j) from [dbar_{-j}, dbar_j] for |j| <= radius by an exact cubic.

    The fit uses four points and every other point must lie on it.  The report
    lists the coefficients (constant first), whether the cubic is odd, and the
    comparison with ``+j^3 / 2``.
    """
    if radius < 3:
        raise ValueError("a cubic fit needs radius >= 3")
    report = Report(
        "dbar-central-cubic",
        "central coefficient of [dbar_{-j}, dbar_j] as a cubic in j",
        certified_window=radius,
    )
    points = {j: dbar_bracket_check(-j, j).details["central"] for j in range(-radius, radius + 1)}
    basis_points = [0, 1, 2, 3]
    rows = [[Fraction(j) ** e for e in range(4)] for j in basis_points]
    vectors = [{r: rows[r][e] for r in range(4) if rows[r][e]} for e in range(4)]
    coeffs = solve_in_span({r: points[j] for r, j in enumerate(basis_points) if points[j]}, vectors)
    coeffs = [normalize(Fraction(c)) for c in coeffs]
    for j, c in points.items():
        if sum(coeffs[e] * j ** e for e in range(4)) != c:
            report.fail(reason="not a cubic", j=j, value=c)
    odd = coeffs[0] == 0 and coeffs[2] == 0
    report.details["coefficients"] = coeffs
    report.details["odd"] = odd
    report.details["leading"] = coeffs[3]
    report.details["matches_plus_half_j_cubed"] = coeffs == [0, 0, 0, Fraction(1, 2)]
    if coeffs[3] == -Fraction(1, 2) and odd and coeffs[1] == 0:
        report.details["notice"] = "computed c(j) = -j^3/2; sign differs from +j^3/2"
    if not odd:
        report.fail(reason="central cubic is not odd", coefficients=coeffs)
    return report
