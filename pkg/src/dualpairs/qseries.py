"""Truncated q-series with half-integer exponents.

Exponents are stored doubled: the key ``k`` stands for ``q^(k/2)``.  A
series of order ``order2`` carries every coefficient with ``0 <= k <=
order2`` and nothing beyond.
"""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from functools import lru_cache
from typing import Iterable, Mapping

PRODUCT_KINDS = ("one_minus_q_j", "one_plus_q_j", "one_minus_q_2j", "one_plus_q_half_odd")


class SeriesError(ValueError):
    pass


class ConsistencyError(AssertionError):
    """Two closed forms that must agree did not."""


class QSeries:
    __slots__ = ("order2", "coeffs")

    def __init__(self, coeffs: Mapping[int, int] | None = None, order2: int = 0):
        if order2 < 0:
            raise SeriesError("order2 must be non-negative")
        self.order2 = int(order2)
        clean = {}
        for k, c in (coeffs or {}).items():
            if k < 0:
                raise SeriesError(f"negative exponent {k}/2")
            if k <= order2 and c:
                clean[int(k)] = int(c)
        self.coeffs = clean

    @classmethod
    def one(cls, order2: int) -> "QSeries":
        return cls({0: 1}, order2)

    @classmethod
    def from_list(cls, values: Iterable[int], order2: int | None = None, step: int = 2):
        """Integer-exponent coefficients ``values[n]`` of ``q^n`` (``step=2``)."""
        values = list(values)
        if order2 is None:
            order2 = step * (len(values) - 1) if values else 0
        return cls({step * n: v for n, v in enumerate(values)}, order2)

    def __getitem__(self, k2: int) -> int:
        if k2 > self.order2:
            raise SeriesError(f"q^({k2}/2) beyond truncation {self.order2}/2")
        return self.coeffs.get(k2, 0)

    def to_list(self, step: int = 2) -> list[int]:
        """Coefficients at ``q^0, q^(step/2), ...`` up to the truncation."""
        return [self.coeffs.get(k, 0) for k in range(0, self.order2 + 1, step)]

    def truncate(self, order2: int) -> "QSeries":
        if order2 > self.order2:
            raise SeriesError("cannot extend a truncated series")
        return QSeries(self.coeffs, order2)

    def _common(self, other: "QSeries") -> int:
        return min(self.order2, other.order2)

    def __add__(self, other: "QSeries") -> "QSeries":
        n = self._common(other)
        out = defaultdict(int)
        for s in (self, other):
            for k, c in s.coeffs.items():
                out[k] += c
        return QSeries(out, n)

    def __neg__(self) -> "QSeries":
        return QSeries({k: -c for k, c in self.coeffs.items()}, self.order2)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def scale(self, factor: int) -> "QSeries":
        return QSeries({k: factor * c for k, c in self.coeffs.items()}, self.order2)

    def exact_div(self, d: int) -> "QSeries":
        out = {}
        for k, c in self.coeffs.items():
            q, r = divmod(c, d)
            if r:
                raise SeriesError(f"coefficient {c} at q^({k}/2) not divisible by {d}")
            out[k] = q
        return QSeries(out, self.order2)

    def __mul__(self, other: "QSeries") -> "QSeries":
        n = self._common(other)
        out = defaultdict(int)
        for ka, ca in self.coeffs.items():
            if ka > n:
                continue
            for kb, cb in other.coeffs.items():
                if ka + kb <= n:
                    out[ka + kb] += ca * cb
        return QSeries(out, n)

    def shift(self, k2: int) -> "QSeries":
        """Multiply by ``q^(k2/2)``, keeping the truncation."""
        return QSeries({k + k2: c for k, c in self.coeffs.items()}, self.order2)

    def inverse(self) -> "QSeries":
        c0 = self.coeffs.get(0, 0)
        if c0 not in (1, -1):
            raise SeriesError("only series with constant term +-1 are invertible")
        n = self.order2
        inv = {0: c0}
        terms = sorted((k, c) for k, c in self.coeffs.items() if k > 0)
        for k in range(1, n + 1):
            acc = 0
            for kk, c in terms:
                if kk > k:
                    break
                acc += c * inv.get(k - kk, 0)
            if acc:
                inv[k] = -acc * c0
        return QSeries(inv, n)

    def __truediv__(self, other: "QSeries") -> "QSeries":
        return self * other.inverse()

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, QSeries)
            and self.order2 == other.order2
            and self.coeffs == other.coeffs
        )

    def agrees_with(self, other: "QSeries") -> bool:
        """Coefficientwise equality up to the smaller truncation."""
        n = self._common(other)
        return self.truncate(n) == other.truncate(n)

    def csv_rows(self) -> list[tuple[int, int, int]]:
        return [(k, 2, self.coeffs.get(k, 0)) for k in range(self.order2 + 1)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("exponent_numerator", "exponent_denominator", "coefficient"))
        w.writerows(self.csv_rows())
        return buf.getvalue()

    def __repr__(self) -> str:
        parts = []
        for k in sorted(self.coeffs):
            e = f"{k // 2}" if k % 2 == 0 else f"{k}/2"
            parts.append(f"{self.coeffs[k]}*q^{e}")
        return f"QSeries({' + '.join(parts) or '0'} + O(q^{(self.order2 + 1)}/2))"


def product_form(kind: str, order2: int) -> QSeries:
    """Expand one of the Euler-type infinite products up to ``q^(order2/2)``."""
    if order2 < 0:
        raise SeriesError("order2 must be non-negative")
    if kind == "one_minus_q_j":
        factors = ((2 * j, -1) for j in range(1, order2 // 2 + 1))
    elif kind == "one_plus_q_j":
        factors = ((2 * j, 1) for j in range(1, order2 // 2 + 1))
    elif kind == "one_minus_q_2j":
        factors = ((4 * j, -1) for j in range(1, order2 // 4 + 1))
    elif kind == "one_plus_q_half_odd":
        factors = ((2 * j - 1, 1) for j in range(1, (order2 + 1) // 2 + 1))
    else:
        raise SeriesError(f"unknown product kind {kind!r}")
    out = QSeries.one(order2)
    for k, sign in factors:
        out = out * QSeries({0: 1, k: sign}, order2)
    return out


def gauss_rhs(order2: int) -> QSeries:
    """The theta series sum over all integers j of (-q)^(j^2)."""
    coeffs: dict[int, int] = {0: 1}
    j = 1
    while 2 * j * j <= order2:
        coeffs[2 * j * j] = 2 * (-1) ** j
        j += 1
    return QSeries(coeffs, order2)


def euler_inverse(order2: int) -> QSeries:
    """1 / prod(1 - q^j): the partition generating function."""
    return product_form("one_minus_q_j", order2).inverse()


def ch_virasoro_c1(m: int, order2: int) -> QSeries:
    """Character of the c = 1 Virasoro module of highest weight 4 m^2."""
    if m < 0:
        raise SeriesError("m must be non-negative")
    num = QSeries({2 * 4 * m * m: 1, 2 * (2 * m + 1) ** 2: -1}, order2)
    return num * euler_inverse(order2)


def ch_v1plus_product(order2: int) -> QSeries:
    s = product_form("one_plus_q_j", order2) + product_form("one_minus_q_j", order2)
    return (s * product_form("one_minus_q_2j", order2).inverse()).exact_div(2)


def ch_v1plus_theta(order2: int) -> QSeries:
    coeffs: dict[int, int] = {}
    j = 0
    while 2 * j * j <= order2:
        coeffs[2 * j * j] = (-1) ** j
        j += 1
    return QSeries(coeffs, order2) * euler_inverse(order2)


def ch_v1plus(order2: int) -> QSeries:
    """Vacuum character of the c = 1 W-subalgebra; both closed forms are checked."""
    a = ch_v1plus_product(order2)
    b = ch_v1plus_theta(order2)
    if a != b:
        raise ConsistencyError(f"closed forms disagree: {a} vs {b}")
    return a


def virasoro_sum(M: int, order2: int) -> QSeries:
    out = QSeries({}, order2)
    for m in range(M + 1):
        out = out + ch_virasoro_c1(m, order2)
    return out


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    """p(n) by Euler's pentagonal recurrence."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    total = 0
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 > n:
            break
        sign = 1 if k % 2 else -1
        total += sign * partition_count(n - g1)
        g2 = k * (3 * k + 1) // 2
        if g2 <= n:
            total += sign * partition_count(n - g2)
        k += 1
    return total


class BigradedSeries:
    """Coefficients indexed by (charge, doubled energy), truncated in energy."""

    __slots__ = ("order2", "coeffs")

    def __init__(self, coeffs: Mapping[tuple[int, int], int], order2: int):
        self.order2 = order2
        self.coeffs = {
            (int(m), int(k)): int(c) for (m, k), c in coeffs.items() if c and k <= order2
        }

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.coeffs.get(key, 0)

    def charge_slice(self, m: int) -> QSeries:
        return QSeries({k: c for (mm, k), c in self.coeffs.items() if mm == m}, self.order2)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BigradedSeries)
            and self.order2 == other.order2
            and self.coeffs == other.coeffs
        )

    def __repr__(self) -> str:
        return f"BigradedSeries({len(self.coeffs)} terms, order2={self.order2})"


def charged_fermion_product(order2: int) -> BigradedSeries:
    """prod over half-odd r of (1 + z q^r)(1 + z^-1 q^r), expanded."""
    poly: dict[tuple[int, int], int] = {(0, 0): 1}
    for r2 in range(1, order2 + 1, 2):
        for z in (1, -1):
            nxt = defaultdict(int)
            for (m, k), c in poly.items():
                nxt[(m, k)] += c
                if k + r2 <= order2:
                    nxt[(m + z, k + r2)] += c
            poly = nxt
    return BigradedSeries(poly, order2)


def jacobi_triple_form(order2: int) -> BigradedSeries:
    """sum over m of z^m q^(m^2/2) / prod(1 - q^j): the bosonized form."""
    p = euler_inverse(order2)
    out = {}
    m = 0
    while m * m <= order2:
        for mm in {m, -m}:
            for k, c in p.coeffs.items():
                if m * m + k <= order2:
                    out[(mm, m * m + k)] = c
        m += 1
    return BigradedSeries(out, order2)
