"""Fermionic Fock spaces: l charged pairs and optionally one neutral fermion.

A monomial is a tuple of occupation bitmasks, one per species.  Species
``2(p-1)`` is psi^{-p}, ``2(p-1)+1`` is psi^{+p} and, when present, species
``2l`` is the neutral phi.  Bit ``k`` of a mask records the creation factor
at mode ``-(2k+1)/2``, i.e. energy ``(2k+1)/2``.

The canonical factor order is: by pair, psi^- before psi^+, then mode
descending (energy ascending); the neutral factors come last.  Signs are
read off from the number of factors standing to the left of a slot, which
is a popcount, so every sign is the sign of an actual sequence of
transpositions.

Operators act exactly on monomials of any energy.  ``emax2`` only bounds
basis enumeration and block materialization; results escaping it are
flagged, never dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

Monomial = tuple  # tuple[int, ...] of per-species occupation masks


class WindowError(ValueError):
    """An operation would need states or modes outside the configured window."""


@dataclass(frozen=True)
class FockConfig:
    l: int = 1
    with_neutral: bool = False
    emax2: int = 12

    def __post_init__(self):
        if self.l < 0 or (self.l == 0 and not self.with_neutral):
            raise ValueError("need l >= 1 or a neutral fermion")
        if self.emax2 < 0:
            raise ValueError("emax2 must be non-negative")

    @property
    def nspecies(self) -> int:
        return 2 * self.l + (1 if self.with_neutral else 0)

    @property
    def neutral_species(self) -> int:
        if not self.with_neutral:
            raise ValueError("configuration has no neutral fermion")
        return 2 * self.l

    @property
    def central_charge(self) -> Fraction:
        return Fraction(self.l) + (Fraction(1, 2) if self.with_neutral else 0)

    def species(self, label: "FermionLabel") -> int:
        if label.kind == "neutral":
            return self.neutral_species
        if not 1 <= label.pair <= self.l:
            raise ValueError(f"pair {label.pair} outside 1..{self.l}")
        return 2 * (label.pair - 1) + (1 if label.sign == "+" else 0)

    def with_emax2(self, emax2: int) -> "FockConfig":
        return FockConfig(self.l, self.with_neutral, emax2)


@dataclass(frozen=True)
class FermionLabel:
    kind: str = "charged"
    sign: str = "+"
    pair: int = 1

    def __post_init__(self):
        if self.kind not in ("charged", "neutral"):
            raise ValueError(f"unknown fermion kind {self.kind!r}")
        if self.kind == "charged" and self.sign not in ("+", "-"):
            raise ValueError(f"sign must be + or -, got {self.sign!r}")


def psi(sign: str, pair: int = 1) -> FermionLabel:
    return FermionLabel("charged", sign, pair)


def phi() -> FermionLabel:
    return FermionLabel("neutral", "", 0)


def conjugate_species(s: int, config: FockConfig) -> int:
    if config.with_neutral and s == 2 * config.l:
        return s
    return s ^ 1


# -- raw mask kernels -------------------------------------------------------

def _position(masks: Monomial, s: int, k: int) -> int:
    n = 0
    for t in range(s):
        n += masks[t].bit_count()
    return n + (masks[s] & ((1 << k) - 1)).bit_count()


def create(masks: Monomial, s: int, k: int):
    """Insert the factor (s, level k); returns (sign, monomial) or None."""
    bit = 1 << k
    m = masks[s]
    if m & bit:
        return None
    sign = -1 if _position(masks, s, k) & 1 else 1
    out = list(masks)
    out[s] = m | bit
    return sign, tuple(out)


def annihilate(masks: Monomial, s: int, k: int):
    """Remove the factor (s, level k) by contraction; (sign, monomial) or None."""
    bit = 1 << k
    m = masks[s]
    if not m & bit:
        return None
    sign = -1 if _position(masks, s, k) & 1 else 1
    out = list(masks)
    out[s] = m ^ bit
    return sign, tuple(out)


def apply_mode_raw(masks: Monomial, s: int, n2: int, conj: int):
    """Apply the mode n2/2 of species s; ``conj`` is its contraction partner."""
    if n2 < 0:
        return create(masks, s, (-n2 - 1) >> 1)
    return annihilate(masks, conj, (n2 - 1) >> 1)


def mask_levels(m: int) -> list[int]:
    out = []
    while m:
        low = m & -m
        out.append(low.bit_length() - 1)
        m ^= low
    return out


def energy2(masks: Monomial) -> int:
    total = 0
    for m in masks:
        total += m.bit_count()
        while m:
            low = m & -m
            total += 2 * (low.bit_length() - 1)
            m ^= low
    return total


def charges(masks: Monomial, l: int) -> tuple[int, ...]:
    """Per-pair charge #psi^- - #psi^+ (the eigenvalue of J^0_0 on that pair)."""
    return tuple(masks[2 * p].bit_count() - masks[2 * p + 1].bit_count() for p in range(l))


def parity(masks: Monomial) -> int:
    return sum(m.bit_count() for m in masks) & 1


def vacuum_monomial(config: FockConfig) -> Monomial:
    return (0,) * config.nspecies


# -- vectors ----------------------------------------------------------------

def _fmt_half(n2: int) -> str:
    return f"{n2 // 2}" if n2 % 2 == 0 else f"{n2}/2"


def monomial_factors(masks: Monomial, config: FockConfig) -> list[tuple[FermionLabel, int]]:
    """Factors in canonical order as (label, doubled mode)."""
    out = []
    for s, m in enumerate(masks):
        if config.with_neutral and s == 2 * config.l:
            label = phi()
        else:
            label = psi("+" if s & 1 else "-", s // 2 + 1)
        out.extend((label, -(2 * k + 1)) for k in mask_levels(m))
    return out


def format_monomial(masks: Monomial, config: FockConfig) -> str:
    words = []
    for label, n2 in monomial_factors(masks, config):
        if label.kind == "neutral":
            words.append(f"phi({_fmt_half(n2)})")
        else:
            words.append(f"psi({label.sign},{label.pair},{_fmt_half(n2)})")
    return " ".join(words) if words else "|0>"


def monomial_from_factors(
    factors: Sequence[tuple[FermionLabel, int]], config: FockConfig
) -> tuple[int, Monomial]:
    """Build the word f_1 f_2 ... |0> (leftmost applied last); returns (sign, monomial)."""
    sign, mono = 1, vacuum_monomial(config)
    for label, n2 in reversed(factors):
        if n2 >= 0 or n2 % 2 == 0:
            raise ValueError("factors must be creation modes in 1/2 + Z, n < 0")
        res = create(mono, config.species(label), (-n2 - 1) >> 1)
        if res is None:
            return 0, mono
        sign *= res[0]
        mono = res[1]
    return sign, mono


class FockVector:
    """Finite rational combination of monomials.  Treat as immutable."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def basis_vector(cls, mono: Monomial, coeff=1) -> "FockVector":
        return cls({mono: coeff})

    def __add__(self, other: "FockVector") -> "FockVector":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return FockVector(out)

    def __neg__(self) -> "FockVector":
        return FockVector({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + (-other)

    def __rmul__(self, scalar) -> "FockVector":
        return FockVector({m: scalar * c for m, c in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FockVector) and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, mono: Monomial):
        return self.terms.get(mono, 0)

    def max_energy2(self) -> int:
        return max((energy2(m) for m in self.terms), default=0)

    def overflows(self, config: FockConfig) -> bool:
        return any(energy2(m) > config.emax2 for m in self.terms)

    def dump(self, config: FockConfig) -> str:
        """One line per monomial: ``psi(-,1,-3/2) psi(+,1,-1/2) : 5/2``."""
        lines = []
        for m in sorted(self.terms, key=lambda mm: (energy2(mm), mm)):
            lines.append(f"{format_monomial(m, config)} : {Fraction(self.terms[m])}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"FockVector({len(self.terms)} terms)"


def vacuum(config: FockConfig) -> FockVector:
    return FockVector({vacuum_monomial(config): 1})


def monomial_vector(factors: Sequence[tuple[FermionLabel, int]], config: FockConfig) -> FockVector:
    """The vector f_1 ... f_k |0> for creation factors given in any order."""
    sign, mono = monomial_from_factors(factors, config)
    return FockVector({mono: sign}) if sign else FockVector()


def apply_mode(
    label: FermionLabel, n2: int, v: FockVector, config: FockConfig
) -> tuple[FockVector, bool]:
    """Exact action of the mode n2/2 of ``label``; the flag reports window overflow."""
    if n2 % 2 == 0:
        raise ValueError("fermion modes live in 1/2 + Z; n2 must be odd")
    s = config.species(label)
    conj = conjugate_species(s, config)
    out: dict = {}
    for m, c in v.terms.items():
        res = apply_mode_raw(m, s, n2, conj)
        if res is not None:
            sign, mm = res
            out[mm] = out.get(mm, 0) + sign * c
    w = FockVector(out)
    return w, w.overflows(config)


# -- enumeration ------------------------------------------------------------

@lru_cache(maxsize=None)
def _distinct_odd_subsets(e2max: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Index e2 -> tuple of (mask, count) with sum of (2k+1) over bits equal to e2."""
    table: list[list[tuple[int, int]]] = [[] for _ in range(e2max + 1)]
    table[0].append((0, 0))
    for k in range(0, (e2max + 1) // 2):
        w = 2 * k + 1
        bit = 1 << k
        for e in range(e2max, w - 1, -1):
            table[e].extend((m | bit, c + 1) for m, c in table[e - w])
    return tuple(tuple(sorted(t)) for t in table)


@lru_cache(maxsize=None)
def _basis_cached(l: int, with_neutral: bool, charge_key, energy2_: int, parity_: int | None):
    nspecies = 2 * l + (1 if with_neutral else 0)
    table = _distinct_odd_subsets(max(energy2_, 0))
    out: list[Monomial] = []

    def rec(s: int, remaining: int, acc: list, counts: list):
        if s == nspecies:
            if remaining:
                return
            if charge_key is not None:
                for p in range(l):
                    if counts[2 * p] - counts[2 * p + 1] != charge_key[p]:
                        return
            if parity_ is not None and sum(counts) % 2 != parity_:
                return
            out.append(tuple(acc))
            return
        for e in range(remaining + 1):
            for m, c in table[e]:
                acc.append(m)
                counts.append(c)
                rec(s + 1, remaining - e, acc, counts)
                acc.pop()
                counts.pop()

    if energy2_ >= 0:
        rec(0, energy2_, [], [])
    return tuple(out)


def basis(
    config: FockConfig,
    charge: Sequence[int] | None,
    energy2_: int,
    parity_: int | None = None,
) -> tuple[Monomial, ...]:
    """All monomials of the given doubled energy (and per-pair charges / parity)."""
    if energy2_ > config.emax2:
        raise WindowError(f"energy2={energy2_} beyond emax2={config.emax2}")
    key = None if charge is None else tuple(int(c) for c in charge)
    if key is not None and len(key) != config.l:
        raise ValueError(f"need {config.l} charges, got {len(key)}")
    return _basis_cached(config.l, config.with_neutral, key, energy2_, parity_)


def graded_dim(config: FockConfig, charge, energy2_: int, parity_: int | None = None) -> int:
    return len(basis(config, charge, energy2_, parity_))


def charge_sectors(config: FockConfig, energy2_: int) -> list[tuple[int, ...]]:
    """Charge vectors occurring at a given energy, sorted."""
    return sorted({charges(m, config.l) for m in basis(config, None, energy2_)})


def tau_raw(masks: Monomial, pair: int) -> tuple[int, Monomial]:
    a, b = 2 * (pair - 1), 2 * (pair - 1) + 1
    na, nb = masks[a].bit_count(), masks[b].bit_count()
    out = list(masks)
    out[a], out[b] = masks[b], masks[a]
    return (-1 if (na * nb) & 1 else 1), tuple(out)


def tau(v: FockVector, pair: int, config: FockConfig) -> FockVector:
    """Exchange psi^{+p} and psi^{-p} (fixing the vacuum), re-canonicalized."""
    if not 1 <= pair <= config.l:
        raise ValueError(f"pair {pair} outside 1..{config.l}")
    out = {}
    for m, c in v.terms.items():
        sign, mm = tau_raw(m, pair)
        out[mm] = sign * c
    return FockVector(out)
