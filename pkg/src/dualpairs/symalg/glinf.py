"""Finite windows of the central extension of gl(infinity).

A ``GlInfElement`` holds the entries a_ij with lo <= i, j <= hi.  Elements
produced by ``phi`` are truncations of infinite matrices and carry
``truncated=True``; brackets of truncated elements are only trusted away
from the window edges, so ``glinf_bracket`` shrinks the window accordingly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from . import poly as P
from .diffop import DiffOp, psi_cocycle


class WindowError(ValueError):
    pass


def chi(i: int) -> int:
    return 1 if i <= 0 else 0


class GlInfElement:
    __slots__ = ("window", "entries", "central", "truncated")

    def __init__(self, window, entries: Mapping | None = None, central=0, truncated=False):
        lo, hi = window
        if lo > hi:
            raise WindowError(f"empty window {window}")
        self.window = (int(lo), int(hi))
        clean = {}
        for (i, j), v in (entries or {}).items():
            if not (lo <= i <= hi and lo <= j <= hi):
                raise WindowError(f"entry ({i},{j}) outside window {window}")
            if v:
                clean[(int(i), int(j))] = Fraction(v)
        self.entries = dict(sorted(clean.items()))
        self.central = Fraction(central)
        self.truncated = bool(truncated)

    def __add__(self, other: "GlInfElement") -> "GlInfElement":
        w = _union(self.window, other.window)
        out = dict(self.entries)
        for key, v in other.entries.items():
            out[key] = out.get(key, 0) + v
        return GlInfElement(w, out, self.central + other.central, self.truncated or other.truncated)

    def scale(self, c) -> "GlInfElement":
        c = Fraction(c)
        return GlInfElement(
            self.window, {k: c * v for k, v in self.entries.items()}, c * self.central, self.truncated
        )

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def restrict(self, window) -> "GlInfElement":
        lo, hi = window
        keep = {
            (i, j): v for (i, j), v in self.entries.items() if lo <= i <= hi and lo <= j <= hi
        }
        return GlInfElement(window, keep, self.central, self.truncated)

    def max_degree(self) -> int:
        return max((abs(j - i) for i, j in self.entries), default=0)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GlInfElement)
            and self.entries == other.entries
            and self.central == other.central
        )

    def agrees_on(self, other: "GlInfElement", window) -> bool:
        return self.restrict(window) == other.restrict(window)

    def __repr__(self) -> str:
        return f"GlInfElement(window={self.window}, {len(self.entries)} entries, C={self.central})"


def _union(a, b):
    return (min(a[0], b[0]), max(a[1], b[1]))


def E(i: int, j: int, window=None) -> GlInfElement:
    if window is None:
        window = (min(i, j), max(i, j))
    return GlInfElement(window, {(i, j): 1})


def central(c=1, window=(0, 0)) -> GlInfElement:
    return GlInfElement(window, {}, c)


def cocycle_C(a: GlInfElement, b: GlInfElement) -> Fraction:
    """C(A, B) = Tr([J, A] B) with J = sum_{i <= 0} E_ii."""
    total = Fraction(0)
    for (i, j), v in a.entries.items():
        d = chi(i) - chi(j)
        if d:
            w = b.entries.get((j, i))
            if w:
                total += d * v * w
    return total


def _matmul(a: Mapping, b: Mapping) -> dict:
    rows: dict[int, list] = {}
    for (m, j), w in b.items():
        rows.setdefault(m, []).append((j, w))
    out: dict = {}
    for (i, m), v in a.items():
        for j, w in rows.get(m, ()):
            out[(i, j)] = out.get((i, j), 0) + v * w
    return out


def glinf_bracket(a: GlInfElement, b: GlInfElement) -> GlInfElement:
    """[a, b] = ab - ba + C(a, b) C.

    For truncated operands the result window is shrunk by the largest
    degree present so that every retained entry is exact.
    """
    lo, hi = _union(a.window, b.window)
    truncated = a.truncated or b.truncated
    if truncated:
        margin = max(a.max_degree(), b.max_degree())
        lo, hi = lo + margin, hi - margin
        if lo > hi:
            raise WindowError("window too small for an exact bracket; enlarge it")
    ab = _matmul(a.entries, b.entries)
    ba = _matmul(b.entries, a.entries)
    out = dict(ab)
    for key, v in ba.items():
        out[key] = out.get(key, 0) - v
    out = {(i, j): v for (i, j), v in out.items() if lo <= i <= hi and lo <= j <= hi}
    return GlInfElement((lo, hi), out, cocycle_C(a, b), truncated)


def phi(a: DiffOp, window) -> GlInfElement:
    """Windowed image of t^k f(D) -> sum_j f(-j) E_{j-k, j}; C -> C."""
    lo, hi = window
    out = {}
    for k, f in a.terms.items():
        for j in range(lo, hi + 1):
            if lo <= j - k <= hi:
                v = P.peval(f, -j)
                if v:
                    out[(j - k, j)] = out.get((j - k, j), 0) + v
    return GlInfElement(window, out, a.central, truncated=True)


def cocycle_window(a: DiffOp, b: DiffOp) -> tuple[int, int]:
    """Smallest window on which C(phi a, phi b) is computed exactly."""
    k = max((abs(d) for d in a.degrees() + b.degrees()), default=0)
    return (min(0, 1 - k), max(1, k))


def cocycle_compat(a: DiffOp, b: DiffOp, window) -> tuple[Fraction, Fraction]:
    """(Psi(a, b), C(phi a, phi b)); equal when phi respects the cocycles."""
    need = cocycle_window(a, b)
    if window[0] > need[0] or window[1] < need[1]:
        raise WindowError(f"window {window} must contain {need}")
    return psi_cocycle(a, b), cocycle_C(phi(a, window), phi(b, window))


def in_dinf(a: GlInfElement) -> bool:
    """a_ij = -a_{1-j,1-i} wherever both entries fall in the window."""
    lo, hi = a.window
    for (i, j), v in a.entries.items():
        ii, jj = 1 - j, 1 - i
        if lo <= ii <= hi and lo <= jj <= hi and a.entries.get((ii, jj), 0) != -v:
            return False
    return True
