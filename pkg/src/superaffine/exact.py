"""Exact rational arithmetic: scalars, sparse vectors and Gauss-Jordan elimination.

Scalars are Python ``int`` or :class:`fractions.Fraction` values.  Both are exact;
integral values are kept as ``int`` because the hot loops (bracket sweeps, cocycle
assembly) are dominated by integer structure constants.  Nothing here ever
produces a float.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Any, Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

Scalar = Union[int, Fraction]


class SubspaceNotContained(ValueError):
    """Raised by :func:`quotient_dimension` when a subspace vector escapes the span."""

    def __init__(self, witness: "SparseVec"):
        super().__init__(f"subspace vector not contained in span: {witness!r}")
        self.witness = witness


def scalar(value: Any) -> Scalar:
    """Coerce ``value`` to an exact scalar.

    Accepts ints, Fractions and rational literals ``"p/q"`` / ``"p"``.  Floats are
    rejected outright.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE"):
            raise ValueError(f"not a rational literal: {value!r}")
        return normalize(Fraction(text))
    raise TypeError(f"cannot convert {type(value).__name__} to an exact scalar")


def normalize(value: Scalar) -> Scalar:
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


def format_scalar(value: Scalar) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# ---------------------------------------------------------------------------
# sparse vectors
# ---------------------------------------------------------------------------

def add_into(acc: Dict[Hashable, Scalar], key: Hashable, coef: Scalar) -> None:
    """``acc[key] += coef`` keeping the no-stored-zero invariant."""
    value = acc.get(key, 0) + coef
    if value:
        acc[key] = normalize(value)
    else:
        acc.pop(key, None)


def axpy_into(acc: Dict[Hashable, Scalar], coef: Scalar, items: Iterable[Tuple[Hashable, Scalar]]) -> None:
    if not coef:
        return
    for key, c in items:
        add_into(acc, key, coef * c)


class SparseVec(Mapping):
    """Immutable finite map ``key -> nonzero scalar``.

    Keys must be mutually comparable when a deterministic order is required
    (``sorted_items``); arithmetic itself only needs hashability.
    """

    __slots__ = ("_d", "_hash")

    def __init__(self, entries: Union[Mapping, Iterable[Tuple[Hashable, Any]], None] = None):
        d: Dict[Hashable, Scalar] = {}
        if entries is not None:
            items = entries.items() if isinstance(entries, Mapping) else entries
            for key, coef in items:
                add_into(d, key, scalar(coef))
        self._d = d
        self._hash = None

    @classmethod
    def _wrap(cls, d: Dict[Hashable, Scalar]) -> "SparseVec":
        # trusted constructor: d already satisfies the invariant and is not shared
        obj = cls.__new__(cls)
        obj._d = d
        obj._hash = None
        return obj

    @classmethod
    def basis(cls, key: Hashable, coef: Scalar = 1) -> "SparseVec":
        return cls({key: coef})

    def __getitem__(self, key):
        return self._d[key]

    def get(self, key, default=0):
        return self._d.get(key, default)

    def __iter__(self) -> Iterator:
        return iter(self._d)

    def __len__(self) -> int:
        return len(self._d)

    def __bool__(self) -> bool:
        return bool(self._d)

    def items(self):
        return self._d.items()

    def sorted_items(self) -> List[Tuple[Hashable, Scalar]]:
        return sorted(self._d.items())

    def to_dict(self) -> Dict[Hashable, Scalar]:
        return dict(self._d)

    def __add__(self, other: "SparseVec") -> "SparseVec":
        d = dict(self._d)
        for key, coef in other.items():
            add_into(d, key, coef)
        return SparseVec._wrap(d)

    def __sub__(self, other: "SparseVec") -> "SparseVec":
        d = dict(self._d)
        for key, coef in other.items():
            add_into(d, key, -coef)
        return SparseVec._wrap(d)

    def __neg__(self) -> "SparseVec":
        return SparseVec._wrap({k: -v for k, v in self._d.items()})

    def scale(self, s: Any) -> "SparseVec":
        s = scalar(s)
        if not s:
            return SparseVec()
        return SparseVec._wrap({k: normalize(v * s) for k, v in self._d.items()})

    def __mul__(self, s):
        return self.scale(s)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, SparseVec):
            return self._d == other._d
        if isinstance(other, Mapping):
            return self._d == {k: v for k, v in other.items() if v}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __repr__(self) -> str:
        try:
            items = self.sorted_items()
        except TypeError:
            items = list(self._d.items())
        body = ", ".join(f"{k!r}: {format_scalar(v)}" for k, v in items)
        return f"SparseVec({{{body}}})"


def linear_combination(pairs: Iterable[Tuple[Scalar, Mapping]]) -> SparseVec:
    acc: Dict[Hashable, Scalar] = {}
    for coef, vec in pairs:
        axpy_into(acc, coef, vec.items())
    return SparseVec._wrap(acc)


# ---------------------------------------------------------------------------
# incremental echelon form
# ---------------------------------------------------------------------------

class EchelonBasis:
    """Incrementally maintained reduced row-echelon basis of a span.

    Vectors are dicts keyed by column keys.  ``order`` maps a key to its rank in
    the column order; pivots are always the smallest column (in that order) of a
    row, and every stored row is zero on all other pivot columns.  With
    ``track=True`` every row also records its expression in terms of the inserted
    generators, which is what :meth:`express` uses.
    """

    def __init__(self, order=None, track: bool = False):
        self._order = order if order is not None else (lambda key: key)
        self.rows: Dict[Hashable, Dict[Hashable, Scalar]] = {}
        self._combo: Dict[Hashable, Dict[int, Scalar]] = {}
        self.track = track
        self.count = 0

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, vec: Dict, combo: Optional[Dict] = None) -> Dict:
        rows = self.rows
        if not rows:
            return vec
        for key in [k for k in vec if k in rows]:
            coef = vec.get(key)
            if not coef:
                continue
            row = rows[key]
            for k2, c2 in row.items():
                add_into(vec, k2, -coef * c2)
            if combo is not None:
                for g, c2 in self._combo[key].items():
                    add_into(combo, g, -coef * c2)
        return vec

    def reduce(self, vec: Mapping) -> Dict:
        """Return the residual of ``vec`` modulo the span (a new dict)."""
        return self._reduce(dict(vec.items()))

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    def add(self, vec: Mapping) -> bool:
        """Insert ``vec``; return True if it enlarged the span."""
        index = self.count
        self.count += 1
        combo = {index: 1} if self.track else None
        res = self._reduce(dict(vec.items()), combo)
        if not res:
            return False
        pivot = min(res, key=self._order)
        inv = Fraction(1) / res[pivot]
        res = {k: normalize(v * inv) for k, v in res.items()}
        if combo is not None:
            combo = {k: normalize(v * inv) for k, v in combo.items()}
        # clear the new pivot column from existing rows
        for key, row in self.rows.items():
            coef = row.get(pivot)
            if coef:
                for k2, c2 in res.items():
                    add_into(row, k2, -coef * c2)
                if combo is not None:
                    tc = self._combo[key]
                    for g, c2 in combo.items():
                        add_into(tc, g, -coef * c2)
        self.rows[pivot] = res
        if combo is not None:
            self._combo[pivot] = combo
        return True

    def express(self, vec: Mapping) -> Optional[Dict[int, Scalar]]:
        """Coefficients over inserted generators whose combination equals ``vec``.

        Returns None when ``vec`` is outside the span.  Requires ``track=True``.
        """
        if not self.track:
            raise RuntimeError("express() needs an EchelonBasis built with track=True")
        work = dict(vec.items())
        out: Dict[int, Scalar] = {}
        for key in list(work):
            coef = work.get(key)
            if not coef or key not in self.rows:
                continue
            for k2, c2 in self.rows[key].items():
                add_into(work, k2, -coef * c2)
            for g, c2 in self._combo[key].items():
                add_into(out, g, coef * c2)
        if work:
            return None
        return out

    def pivots(self) -> List[Hashable]:
        return sorted(self.rows, key=self._order)

    def sorted_rows(self) -> List[Tuple[Hashable, Dict[Hashable, Scalar]]]:
        return [(p, self.rows[p]) for p in self.pivots()]


# ---------------------------------------------------------------------------
# dense-shaped rational matrices
# ---------------------------------------------------------------------------

class RationalMatrix:
    """``rows x cols`` matrix with sparse exact entries, columns indexed 0..cols-1."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Optional[Sequence[Mapping[int, Any]]] = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix shape")
        self.rows = rows
        self.cols = cols
        data = []
        for r in range(rows):
            src = entries[r] if entries is not None and r < len(entries) else {}
            row = SparseVec(src)
            for c in row:
                if not 0 <= c < cols:
                    raise IndexError(f"column {c} out of range for {cols} columns")
            data.append(row)
        self.entries: Tuple[SparseVec, ...] = tuple(data)

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[Any]]) -> "RationalMatrix":
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        sparse = [{c: v for c, v in enumerate(row) if scalar(v)} for row in dense]
        return cls(rows, cols, sparse)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, [{i: 1} for i in range(n)])

    def to_dense(self) -> List[List[Scalar]]:
        return [[row.get(c, 0) for c in range(self.cols)] for row in self.entries]

    def apply(self, vec: Mapping[int, Scalar]) -> SparseVec:
        out = {}
        for r, row in enumerate(self.entries):
            s = 0
            for c, coef in row.items():
                v = vec.get(c)
                if v:
                    s += coef * v
            if s:
                out[r] = normalize(s)
        return SparseVec._wrap(out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RationalMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        return f"RationalMatrix({self.rows}x{self.cols}, {self.to_dense()!r})"


def rref(m: RationalMatrix) -> Tuple[RationalMatrix, List[int]]:
    """Reduced row-echelon form over Q and the list of pivot columns.

    Plain Gauss-Jordan on sparse rows; pivot rows are emitted in increasing
    pivot-column order, followed by zero rows, so the output shape equals the
    input shape.
    """
    basis = EchelonBasis()
    for row in m.entries:
        basis.add(row)
    pivots = basis.pivots()
    rows = [basis.rows[p] for p in pivots]
    rows += [{}] * (m.rows - len(rows))
    return RationalMatrix(m.rows, m.cols, rows), pivots


def rank(m: RationalMatrix) -> int:
    return len(rref(m)[1])


def nullspace_basis(m: RationalMatrix) -> List[SparseVec]:
    """Basis of ``{x : m x = 0}`` in rref-canonical form.

    One vector per free column f: x_f = 1, x_p = -R[p, f] for each pivot p, and
    zero elsewhere.  The list is ordered by free column.
    """
    reduced, pivots = rref(m)
    pivot_rows = list(zip(pivots, reduced.entries))
    pivot_set = set(pivots)
    out = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        vec = {f: 1}
        for p, row in pivot_rows:
            c = row.get(f)
            if c:
                vec[p] = -c
        out.append(SparseVec._wrap(vec))
    return out


def span_rank(vectors: Iterable[Mapping]) -> int:
    basis = EchelonBasis(order=_sort_key)
    for v in vectors:
        basis.add(v)
    return basis.rank


def quotient_dimension(space: Sequence[Mapping], subspace: Sequence[Mapping]) -> int:
    """``dim span(space) - dim span(subspace)`` after checking containment."""
    basis = EchelonBasis(order=_sort_key)
    for v in space:
        basis.add(v)
    for w in subspace:
        if not basis.contains(w):
            raise SubspaceNotContained(SparseVec(w))
    return basis.rank - span_rank(subspace)


def solve_in_span(target: Mapping, vectors: Sequence[Mapping]) -> Optional[List[Scalar]]:
    """Coefficients c with ``sum c_i vectors[i] == target``, or None."""
    basis = EchelonBasis(order=_sort_key, track=True)
    for v in vectors:
        basis.add(v)
    combo = basis.express(target)
    if combo is None:
        return None
    return [combo.get(i, 0) for i in range(len(vectors))]


def _sort_key(key):
    return key


def mat_mul(a: Sequence[Sequence[Scalar]], b: Sequence[Sequence[Scalar]]) -> List[List[Scalar]]:
    n, k = len(a), len(b)
    m = len(b[0]) if k else 0
    out = []
    for i in range(n):
        row = a[i]
        out.append([normalize(sum(row[t] * b[t][j] for t in range(k))) for j in range(m)])
    return out


def mat_lincomb(terms: Iterable[Tuple[Scalar, Sequence[Sequence[Scalar]]]], n: int) -> List[List[Scalar]]:
    out = [[0] * n for _ in range(n)]
    for coef, mat in terms:
        if not coef:
            continue
        for i in range(n):
            for j in range(n):
                if mat[i][j]:
                    out[i][j] = normalize(out[i][j] + coef * mat[i][j])
    return out
