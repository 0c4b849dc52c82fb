"""Exact sparse linear algebra over the rationals.

Rows are stored as ``{column: Fraction}`` dictionaries with no explicit
zeros.  Everything here is pure; the matrices handed out are never mutated
after construction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Rational = Fraction


class DimensionError(ValueError):
    pass


class SparseVec:
    """A finite map from column index to a nonzero rational."""

    __slots__ = ("entries",)

    def __init__(self, entries: Mapping[int, object] | None = None):
        clean = {}
        if entries:
            for idx, val in entries.items():
                if idx < 0:
                    raise DimensionError(f"negative index {idx}")
                if val:
                    clean[int(idx)] = Fraction(val)
        self.entries = clean

    @classmethod
    def from_dense(cls, values: Sequence) -> "SparseVec":
        return cls({i: v for i, v in enumerate(values) if v})

    def to_dense(self, n: int) -> list[Fraction]:
        out = [Fraction(0)] * n
        for i, v in self.entries.items():
            out[i] = v
        return out

    def dot(self, other: "SparseVec") -> Fraction:
        a, b = self.entries, other.entries
        if len(a) > len(b):
            a, b = b, a
        return sum((v * b[i] for i, v in a.items() if i in b), Fraction(0))

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SparseVec) and self.entries == other.entries

    def __hash__(self):
        return hash(frozenset(self.entries.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{i}: {v}" for i, v in sorted(self.entries.items()))
        return f"SparseVec({{{body}}})"


class SparseMat:
    """Row-major sparse matrix with a declared column count."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows: Iterable, ncols: int):
        self.ncols = int(ncols)
        built = []
        for r in rows:
            row = r if isinstance(r, SparseVec) else SparseVec(r)
            if row.entries and max(row.entries) >= self.ncols:
                raise DimensionError(
                    f"column {max(row.entries)} outside ncols={self.ncols}"
                )
            built.append(row)
        self.rows = tuple(built)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence], ncols: int | None = None):
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls([SparseVec.from_dense(r) for r in rows], ncols)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "SparseMat":
        return cls([SparseVec() for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> "SparseMat":
        return cls([SparseVec({i: 1}) for i in range(n)], n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def to_dense(self) -> list[list[Fraction]]:
        return [r.to_dense(self.ncols) for r in self.rows]

    def matvec(self, v: SparseVec) -> SparseVec:
        return SparseVec({i: r.dot(v) for i, r in enumerate(self.rows)})

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SparseMat)
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __repr__(self) -> str:
        return f"SparseMat(nrows={self.nrows}, ncols={self.ncols})"


def vstack(ms: Sequence[SparseMat]) -> SparseMat:
    if not ms:
        raise DimensionError("vstack of an empty family")
    ncols = ms[0].ncols
    for m in ms:
        if m.ncols != ncols:
            raise DimensionError(f"ncols mismatch: {m.ncols} != {ncols}")
    return SparseMat([r for m in ms for r in m.rows], ncols)


def _reduce(rows: Iterable[Mapping[int, Fraction]]):
    # incremental Gauss-Jordan; pivot rows are kept fully reduced so a single
    # pass over the pivot columns of an incoming row clears all of them
    pivots: dict[int, dict[int, Fraction]] = {}
    for raw in rows:
        r = {c: Fraction(v) for c, v in raw.items() if v}
        for c in [c for c in r if c in pivots]:
            f = r.get(c)
            if not f:
                continue
            for cc, vv in pivots[c].items():
                nv = r.get(cc, 0) - f * vv
                if nv:
                    r[cc] = nv
                else:
                    r.pop(cc, None)
        if not r:
            continue
        p = min(r)
        inv = 1 / r[p]
        r = {c: v * inv for c, v in r.items()}
        for row in pivots.values():
            f = row.get(p)
            if not f:
                continue
            for cc, vv in r.items():
                nv = row.get(cc, 0) - f * vv
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
        pivots[p] = r
    return pivots


def rref(m: SparseMat) -> tuple[SparseMat, list[int]]:
    """Reduced row-echelon form and pivot columns (zero rows dropped)."""
    pivots = _reduce(r.entries for r in m.rows)
    cols = sorted(pivots)
    return SparseMat([SparseVec(pivots[c]) for c in cols], m.ncols), cols


def rank(m: SparseMat) -> int:
    return len(_reduce(r.entries for r in m.rows))


def _kernel_from_pivots(pivots, ncols: int) -> list[SparseVec]:
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = {f: Fraction(1)}
        for p, row in pivots.items():
            x = row.get(f)
            if x:
                v[p] = -x
        basis.append(SparseVec(v))
    return basis


def kernel_basis(m: SparseMat) -> list[SparseVec]:
    """Basis of {v : m v = 0}, one vector per free column."""
    return _kernel_from_pivots(_reduce(r.entries for r in m.rows), m.ncols)


def joint_kernel(ms: Sequence[SparseMat]) -> list[SparseVec]:
    """Basis of the intersection of the kernels of every matrix in ``ms``."""
    stacked = vstack(ms)
    return kernel_basis(stacked)


def span_rank(vectors: Iterable[SparseVec]) -> int:
    return len(_reduce(v.entries for v in vectors))


def in_span(v: SparseVec, basis: Sequence[SparseVec]) -> bool:
    return span_rank(list(basis) + [v]) == span_rank(basis)
