"""Highest-weight labels from exponent-multiplicity sets.

For the A family, F(x) + c = sum_s n_s e^(s x) and Delta(x) = F(x) / (e^x - 1).
For the D+ family, F(x) + c = sum_e n_e cosh(e x) and
Delta+(x) = F(x) / (2 sinh(x/2)).  Labels are the Taylor data
Delta(x) = sum_n Delta_n x^n / n!, computed with exact truncated series.

The multiplicity at exponent 0 is fixed by F(0) = 0 and may be omitted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Mapping


class MalformedExponentSet(ValueError):
    pass


@dataclass(frozen=True)
class ExponentSet:
    c: Fraction
    exponents: tuple  # sorted ((exponent, multiplicity), ...)
    family: str = "A"

    def __init__(self, c, exponents: Mapping | None = None, family: str = "A"):
        if family not in ("A", "Dplus"):
            raise ValueError(f"unknown family {family!r}")
        merged: dict[Fraction, Fraction] = {}
        for s, n in (exponents or {}).items():
            s = Fraction(s)
            if family == "Dplus":
                s = abs(s)
            n = Fraction(n)
            if s != 0 and (n.denominator != 1 or n <= 0):
                raise MalformedExponentSet(f"multiplicity {n} at exponent {s} must be a positive integer")
            if s == 0 and family == "A" and (n.denominator != 1 or n < 0):
                raise MalformedExponentSet(f"multiplicity {n} at exponent 0")
            if s == 0 and family == "Dplus" and (2 * n).denominator != 1:
                raise MalformedExponentSet(f"multiplicity {n} at exponent 0 must lie in Z/2")
            merged[s] = merged.get(s, 0) + n
        object.__setattr__(self, "c", Fraction(c))
        object.__setattr__(self, "exponents", tuple(sorted(merged.items())))
        object.__setattr__(self, "family", family)

    def as_dict(self) -> dict:
        return dict(self.exponents)

    def nonzero(self) -> dict:
        return {s: n for s, n in self.exponents if s != 0}

    def zero_multiplicity(self) -> Fraction:
        """Explicit or implied multiplicity at exponent 0."""
        d = self.as_dict()
        if 0 in d:
            return d[0]
        return self.c - sum(self.nonzero().values(), Fraction(0))

    def check(self) -> None:
        d = self.as_dict()
        total = sum(d.values(), Fraction(0))
        if 0 in d and total != self.c:
            raise MalformedExponentSet(
                f"F(0) = {total - self.c} != 0: multiplicities sum to {total}, c = {self.c}"
            )
        if self.family == "A" and 0 not in d and total > self.c:
            raise MalformedExponentSet(
                f"implied multiplicity {self.c - total} at exponent 0 is negative"
            )


@dataclass(frozen=True)
class LabelsA:
    c: Fraction
    delta: tuple  # Delta_0 .. Delta_N


@dataclass(frozen=True)
class LabelsDplus:
    c: Fraction
    delta_plus: tuple  # Delta+_n for n = 1, 3, 5, ... <= N
    indices: tuple = field(default=())

    def get(self, n: int) -> Fraction:
        return dict(zip(self.indices, self.delta_plus))[n]


def _exp_series(s: Fraction, order: int) -> list[Fraction]:
    return [s**n / factorial(n) for n in range(order + 1)]


def _divide(num: list[Fraction], den: list[Fraction]) -> list[Fraction]:
    # den[0] != 0; same truncation
    out = []
    for n in range(len(num)):
        acc = num[n] - sum((out[i] * den[n - i] for i in range(n)), Fraction(0))
        out.append(acc / den[0])
    return out


def labels_from_exponents(e: ExponentSet, N: int, epsilon: int = 1):
    """Labels up to index N; ``epsilon`` flips the sign of every exponent."""
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    e.check()
    order = N + 1
    F = [Fraction(0)] * (order + 1)
    for s, n in e.nonzero().items():
        if e.family == "A":
            ser = _exp_series(epsilon * s, order)
        else:
            ser = [x if k % 2 == 0 else 0 for k, x in enumerate(_exp_series(s, order))]
        for k in range(1, order + 1):
            F[k] += n * ser[k]
    F_over_x = F[1:]
    if e.family == "A":
        unit = [Fraction(1, factorial(n + 1)) for n in range(order)]
        q = _divide(F_over_x, unit)
        return LabelsA(e.c, tuple(q[n] * factorial(n) for n in range(N + 1)))
    unit = [
        Fraction(2, factorial(n + 1) * 2 ** (n + 1)) if n % 2 == 0 else Fraction(0)
        for n in range(order)
    ]
    q = _divide(F_over_x, unit)
    idx = tuple(range(1, N + 1, 2))
    return LabelsDplus(e.c, tuple(q[n] * factorial(n) for n in idx), idx)
