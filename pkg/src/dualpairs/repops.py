"""Exact operators on the Fock space and the relation suites that check them.

Every operator here is built from normally ordered fermion bilinears

    sum over a + b = k of c(a) :X_a Y_b:

where ``:X_a Y_b: = -Y_b X_a`` when X_a annihilates and Y_b creates, and
``X_a Y_b`` otherwise.  On a monomial only finitely many terms survive, and
they are enumerated directly from the occupied levels, so the action is
exact on every monomial regardless of ``emax2``.  The window still governs
block materialization and the safe-energy policy of ``commutator``.

Mode conventions (n in 1/2 + Z, doubled as n2):

    E_ij       = sum_p :psi^{+p}_{1/2-i} psi^{-p}_{j-1/2}:            degree j - i
    J^n_k      = sum_p sum_{a+b=k} [-a-1/2]_n :psi^{-p}_a psi^{+p}_b:  degree k
    W^n_k      = 1/2 sum_p sum_{a+b=k} [-a-1/2]_n
                     (:psi^{-p}_a psi^{+p}_b: + :psi^{+p}_a psi^{-p}_b:)
    W^n_k      = 1/2 sum_{a+b=k} [-a-1/2]_n :phi_a phi_b:          (neutral)
    d(i,j)     = E_ij - E_{1-j,1-i}   resp.   :phi_{1/2-i} phi_{j-1/2}:

[x]_n is the falling factorial; it comes from d^n/dz^n z^{-a-1/2}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, partial
from math import comb
from typing import Callable, Iterable, Sequence

from .exact import SparseMat, SparseVec
from .fock import (
    FockConfig,
    FockVector,
    Monomial,
    WindowError,
    annihilate,
    basis,
    create,
    energy2,
    format_monomial,
    mask_levels,
    psi,
    phi as phi_label,
    conjugate_species,
)
from .symalg import poly as P
from .symalg.diffop import DiffOp, J as J_sym, Wop as W_sym, diffop_bracket
from .symalg.glinf import E as E_sym
from .symalg.glinf import GlInfElement, cocycle_C, glinf_bracket, in_dinf
from .symalg.glinf import cocycle_compat as _cocycle_compat

MODE_CONVENTIONS = (
    "E_ij = sum_p :psi^{+p}_{1/2-i} psi^{-p}_{j-1/2}:",
    "J^n_k = sum_p sum_{a+b=k} [-a-1/2]_n :psi^{-p}_a psi^{+p}_b:",
    "W^n_k = 1/2 sum_p sum_{a+b=k} [-a-1/2]_n (:psi^{-p}_a psi^{+p}_b: + :psi^{+p}_a psi^{-p}_b:)",
    "W^n_k = 1/2 sum_{a+b=k} [-a-1/2]_n :phi_a phi_b: (neutral)",
    "d(i,j) = E_ij - E_{1-j,1-i}, neutral d(i,j) = :phi_{1/2-i} phi_{j-1/2}:",
)

Action = Callable[[Monomial], dict]


class ModeOperator:
    """A homogeneous linear operator on the Fock space of ``config``.

    ``principal_degree`` is the energy decrease: a vector of doubled energy
    e2 is sent to doubled energy e2 - 2 * principal_degree.
    """

    __slots__ = ("name", "principal_degree", "config", "_act", "_cache", "max_energy2", "_blocks")

    def __init__(self, name: str, principal_degree: int, config: FockConfig, act: Action,
                 max_energy2: int | None = None):
        self.name = name
        self.principal_degree = principal_degree
        self.config = config
        self._act = act
        self._cache: dict = {}
        self._blocks: dict = {}
        self.max_energy2 = max_energy2

    def act_monomial(self, mono: Monomial) -> dict:
        r = self._cache.get(mono)
        if r is None:
            if self.max_energy2 is not None and energy2(mono) > self.max_energy2:
                raise WindowError(
                    f"{self.name} is only safe up to energy2={self.max_energy2}"
                )
            r = {m: c for m, c in self._act(mono).items() if c}
            self._cache[mono] = r
        return r

    def apply(self, v: FockVector) -> FockVector:
        out: dict = {}
        for m, c in v.terms.items():
            for mm, cc in self.act_monomial(m).items():
                out[mm] = out.get(mm, 0) + c * cc
        return FockVector(out)

    def apply_checked(self, v: FockVector) -> tuple[FockVector, bool]:
        w = self.apply(v)
        return w, w.overflows(self.config)

    def block(self, energy2_: int, charge=None, parity=None):
        """Matrix of the map from one basis block; rows are the reached monomials.

        Returns (SparseMat, domain monomials, codomain monomials).
        """
        key = (energy2_, None if charge is None else tuple(charge), parity)
        hit = self._blocks.get(key)
        if hit is not None:
            return hit
        target = energy2_ - 2 * self.principal_degree
        if target > self.config.emax2:
            raise WindowError(
                f"{self.name} maps energy2={energy2_} to {target} > emax2={self.config.emax2}"
            )
        dom = basis(self.config, charge, energy2_, parity)
        rows: dict = {}
        for col, m in enumerate(dom):
            for mm, c in self.act_monomial(m).items():
                rows.setdefault(mm, {})[col] = c
        cod = sorted(rows)
        mat = SparseMat([SparseVec(rows[mm]) for mm in cod], len(dom))
        out = (mat, dom, tuple(cod))
        self._blocks[key] = out
        return out

    # -- algebra of operators --

    def _check_degree(self, other: "ModeOperator"):
        if self.config != other.config:
            raise ValueError("operators live on different Fock spaces")
        if self.principal_degree != other.principal_degree:
            raise ValueError(
                f"cannot add degrees {self.principal_degree} and {other.principal_degree}"
            )

    def __add__(self, other: "ModeOperator") -> "ModeOperator":
        self._check_degree(other)
        a, b = self, other

        def act(m):
            out = dict(a.act_monomial(m))
            for mm, c in b.act_monomial(m).items():
                out[mm] = out.get(mm, 0) + c
            return out

        return ModeOperator(f"({a.name} + {b.name})", a.principal_degree, a.config, act,
                            _min_cap(a.max_energy2, b.max_energy2))

    def scale(self, c) -> "ModeOperator":
        c = Fraction(c)
        a = self

        def act(m):
            return {mm: c * v for mm, v in a.act_monomial(m).items()}

        return ModeOperator(f"{c}*{a.name}", a.principal_degree, a.config, act, a.max_energy2)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other: "ModeOperator") -> "ModeOperator":
        return self + other.scale(-1)

    def __matmul__(self, other: "ModeOperator") -> "ModeOperator":
        """Composition: (self @ other)(v) = self(other(v))."""
        if self.config != other.config:
            raise ValueError("operators live on different Fock spaces")
        a, b = self, other

        def act(m):
            out: dict = {}
            for m1, c1 in b.act_monomial(m).items():
                for m2, c2 in a.act_monomial(m1).items():
                    out[m2] = out.get(m2, 0) + c1 * c2
            return out

        return ModeOperator(f"{a.name} {b.name}", a.principal_degree + b.principal_degree,
                            a.config, act, b.max_energy2)

    def __repr__(self) -> str:
        return f"ModeOperator({self.name}, degree={self.principal_degree})"


def _min_cap(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def identity(config: FockConfig, c=1) -> ModeOperator:
    c = Fraction(c)
    return ModeOperator(f"{c}*id", 0, config, lambda m: {m: c})


def zero_operator(config: FockConfig, degree: int = 0) -> ModeOperator:
    return ModeOperator("0", degree, config, lambda m: {})


def mode_operator(label, n2: int, config: FockConfig) -> ModeOperator:
    """A single fermion mode.

    Half-integer degrees do not fit ``principal_degree``, so it is left at 0;
    these operators are only combined in pairs by the anticommutator suite.
    """
    s = config.species(label)
    conj = conjugate_species(s, config)

    def act(m):
        r = create(m, s, (-n2 - 1) >> 1) if n2 < 0 else annihilate(m, conj, (n2 - 1) >> 1)
        return {} if r is None else {r[1]: r[0]}

    return ModeOperator(_mode_name(label, n2), 0, config, act)


def _mode_name(label, n2):
    if label.kind == "neutral":
        return f"phi({n2}/2)"
    return f"psi({label.sign},{label.pair},{n2}/2)"


# -- bilinear kernel ---------------------------------------------------------

def _bilinear_act(m: Monomial, sx: int, cx: int, sy: int, cy: int, k2: int, coeff) -> dict:
    """sum_{a2+b2=k2} coeff(a2) :X_a Y_b: applied to the monomial m."""
    out: dict = {}

    def add(mono, c):
        out[mono] = out.get(mono, 0) + c

    # both create
    if k2 < 0:
        for a2 in range(k2 + 1, 0, 2):
            c = coeff(a2)
            if not c:
                continue
            b2 = k2 - a2
            r1 = create(m, sy, (-b2 - 1) >> 1)
            if r1 is None:
                continue
            r2 = create(r1[1], sx, (-a2 - 1) >> 1)
            if r2 is not None:
                add(r2[1], c * r1[0] * r2[0])
    # X annihilates: a2 from occupied levels of cx
    for kx in mask_levels(m[cx]):
        a2 = 2 * kx + 1
        b2 = k2 - a2
        c = coeff(a2)
        if not c:
            continue
        if b2 > 0:
            r1 = annihilate(m, cy, (b2 - 1) >> 1)
            if r1 is None:
                continue
            r2 = annihilate(r1[1], cx, kx)
            if r2 is not None:
                add(r2[1], c * r1[0] * r2[0])
        else:
            r1 = annihilate(m, cx, kx)
            r2 = create(r1[1], sy, (-b2 - 1) >> 1)
            if r2 is not None:
                add(r2[1], -c * r1[0] * r2[0])
    # X creates, Y annihilates: b2 from occupied levels of cy
    for ky in mask_levels(m[cy]):
        b2 = 2 * ky + 1
        a2 = k2 - b2
        if a2 >= 0:
            continue
        c = coeff(a2)
        if not c:
            continue
        r1 = annihilate(m, cy, ky)
        r2 = create(r1[1], sx, (-a2 - 1) >> 1)
        if r2 is not None:
            add(r2[1], c * r1[0] * r2[0])
    return out


@dataclass(frozen=True)
class Bilinear:
    """c(a) :X_a Y_b: summed over a + b = k, X, Y given by species indices."""

    sx: int
    sy: int
    k2: int
    coeff: Callable
    weight: Fraction = Fraction(1)


def _combine(config: FockConfig, parts: Sequence[Bilinear], central=0) -> Action:
    prepared = [
        (b.sx, conjugate_species(b.sx, config), b.sy, conjugate_species(b.sy, config), b.k2,
         b.coeff, Fraction(b.weight))
        for b in parts
    ]
    central = Fraction(central)

    def act(m):
        out: dict = {m: central} if central else {}
        for sx, cx, sy, cy, k2, coeff, w in prepared:
            for mm, c in _bilinear_act(m, sx, cx, sy, cy, k2, coeff).items():
                out[mm] = out.get(mm, 0) + w * c
        return out

    return act


def _charged_species(config: FockConfig, p: int) -> tuple[int, int]:
    return 2 * (p - 1), 2 * (p - 1) + 1  # (minus, plus)


def _mode_window_ok(config: FockConfig, *n2s: int) -> bool:
    bound = 2 * config.emax2 + 1
    return all(abs(n) <= bound for n in n2s)


def _require_charged(config: FockConfig, what: str):
    if config.l < 1:
        raise ValueError(f"{what} needs at least one charged pair")


def _falling_at(n: int):
    f = P.falling(n)

    @lru_cache(maxsize=None)
    def coeff(a2: int) -> Fraction:
        return P.peval(f, Fraction(-a2 - 1, 2))

    return coeff


# -- operator constructors ---------------------------------------------------

@lru_cache(maxsize=None)
def op_E(i: int, j: int, config: FockConfig) -> ModeOperator:
    _require_charged(config, "E_ij")
    a2, b2 = 1 - 2 * i, 2 * j - 1
    if not _mode_window_ok(config, a2, b2):
        raise WindowError(f"E({i},{j}) uses modes outside the window of emax2={config.emax2}")
    coeff = lambda x, a2=a2: 1 if x == a2 else 0
    parts = []
    for p in range(1, config.l + 1):
        minus, plus = _charged_species(config, p)
        parts.append(Bilinear(plus, minus, a2 + b2, coeff))
    return ModeOperator(f"E({i},{j})", j - i, config, _combine(config, parts))


def _neutral_d(i: int, j: int, config: FockConfig, weight=1) -> Bilinear:
    a2 = 1 - 2 * i
    s = config.neutral_species
    return Bilinear(s, s, a2 + 2 * j - 1, lambda x, a2=a2: 1 if x == a2 else 0, Fraction(weight))


@lru_cache(maxsize=None)
def op_dinf(i: int, j: int, config: FockConfig) -> ModeOperator:
    """Image of d(i,j) = E_ij - E_{1-j,1-i}; the neutral part is :phi phi:."""
    if not _mode_window_ok(config, 1 - 2 * i, 2 * j - 1):
        raise WindowError(f"d({i},{j}) uses modes outside the window")
    name = f"d({i},{j})"
    ops = []
    if config.l:
        ops.append(op_E(i, j, config) - op_E(1 - j, 1 - i, config))
    if config.with_neutral:
        ops.append(ModeOperator(name, j - i, config,
                                _combine(config, [_neutral_d(i, j, config)])))
    out = ops[0]
    for o in ops[1:]:
        out = out + o
    out.name = name
    return out


@lru_cache(maxsize=None)
def op_J(n: int, k: int, config: FockConfig) -> ModeOperator:
    if n < 0:
        raise ValueError("n must be non-negative")
    _require_charged(config, "J^n_k")
    coeff = _falling_at(n)
    parts = []
    for p in range(1, config.l + 1):
        minus, plus = _charged_species(config, p)
        parts.append(Bilinear(minus, plus, 2 * k, coeff))
    return ModeOperator(f"J^{n}_{k}", k, config, _combine(config, parts))


@lru_cache(maxsize=None)
def op_W(n: int, k: int, config: FockConfig) -> ModeOperator:
    if n < 1 or n % 2 == 0:
        raise ValueError("W^n_k is defined here for odd positive n")
    coeff = _falling_at(n)
    half = Fraction(1, 2)
    parts = []
    for p in range(1, config.l + 1):
        minus, plus = _charged_species(config, p)
        parts.append(Bilinear(minus, plus, 2 * k, coeff, half))
        parts.append(Bilinear(plus, minus, 2 * k, coeff, half))
    if config.with_neutral:
        s = config.neutral_species
        parts.append(Bilinear(s, s, 2 * k, coeff, half))
    return ModeOperator(f"W^{n}_{k}", k, config, _combine(config, parts))


HORIZONTAL_KINDS = ("e", "e_star", "e_star_star")


@lru_cache(maxsize=None)
def op_horizontal(kind: str, p: int, q: int, config: FockConfig) -> ModeOperator:
    """Zero modes of :psi^-p psi^-q: (e), :psi^+p psi^-q: (e_star), :psi^+p psi^+q: (e_star_star)."""
    if not (1 <= p <= config.l and 1 <= q <= config.l):
        raise ValueError(f"pair indices must lie in 1..{config.l}")
    mp, pp = _charged_species(config, p)
    mq, pq = _charged_species(config, q)
    sx, sy = {"e": (mp, mq), "e_star": (pp, mq), "e_star_star": (pp, pq)}[kind]
    one = lambda a2: 1
    return ModeOperator(f"{kind}^{p}{q}(0)", 0, config,
                        _combine(config, [Bilinear(sx, sy, 0, one)]))


def _phi_coeff(f, k: int, scale=1):
    # term sum_j f(-j) E_{j-k,j}: a = 1/2 - j + k, so j = (2k + 1 - a2) / 2
    @lru_cache(maxsize=None)
    def coeff(a2: int) -> Fraction:
        return scale * P.peval(f, -Fraction(2 * k + 1 - a2, 2))

    return coeff


def op_from_diffop(a: DiffOp, config: FockConfig) -> ModeOperator:
    """The operator of phi(a): sum_j f(-j) E_{j-k,j} per term, C acting as the central charge.

    On the neutral space the image is read through d(i,j) with weight 1/2,
    which is a representation on elements whose phi-image lies in d-bar.
    """
    degs = a.degrees()
    if len(degs) > 1:
        raise ValueError("op_from_diffop expects a homogeneous element")
    k = degs[0] if degs else 0
    parts = []
    for kk, f in a.terms.items():
        for p in range(1, config.l + 1):
            minus, plus = _charged_species(config, p)
            parts.append(Bilinear(plus, minus, 2 * kk, _phi_coeff(f, kk)))
        if config.with_neutral:
            s = config.neutral_species
            parts.append(Bilinear(s, s, 2 * kk, _phi_coeff(f, kk), Fraction(1, 2)))
    central = a.central * config.central_charge
    return ModeOperator(f"phi[{a.text()}]", k, config, _combine(config, parts, central))


def op_from_glinf(A: GlInfElement, config: FockConfig) -> ModeOperator:
    """sum a_ij E_ij (charged) plus 1/2 sum a_ij d(i,j) (neutral) plus central charge * C."""
    degs = {j - i for i, j in A.entries}
    if len(degs) > 1:
        raise ValueError("op_from_glinf expects a homogeneous element")
    if config.with_neutral and not in_dinf(A):
        raise ValueError("the neutral space only carries d-infinity elements")
    k = degs.pop() if degs else 0
    parts = []
    for (i, j), v in A.entries.items():
        a2 = 1 - 2 * i
        coeff = lambda x, a2=a2: 1 if x == a2 else 0
        for p in range(1, config.l + 1):
            minus, plus = _charged_species(config, p)
            parts.append(Bilinear(plus, minus, 2 * k, coeff, v))
        if config.with_neutral:
            parts.append(_neutral_d(i, j, config, v / 2))
    central = A.central * config.central_charge
    return ModeOperator("glinf", k, config, _combine(config, parts, central))


def safe_commutator_energy2(a: ModeOperator, b: ModeOperator, emax2: int) -> int:
    """Largest input energy2 for which both ab and ba stay inside emax2."""
    worst = 0
    for x, y in ((a, b), (b, a)):
        first = 2 * max(0, -y.principal_degree)
        second = -2 * y.principal_degree + 2 * max(0, -x.principal_degree)
        worst = max(worst, first, second)
    return emax2 - worst


def commutator(a: ModeOperator, b: ModeOperator, safe_energy2: int) -> ModeOperator:
    """ab - ba, refusing inputs above ``safe_energy2``."""
    if safe_energy2 > safe_commutator_energy2(a, b, a.config.emax2):
        raise WindowError(
            f"[{a.name}, {b.name}] is not safe at energy2={safe_energy2} "
            f"with emax2={a.config.emax2}"
        )
    c = (a @ b) - (b @ a)
    c.name = f"[{a.name}, {b.name}]"
    c.max_energy2 = safe_energy2
    return c


def anticommutator(a: ModeOperator, b: ModeOperator) -> ModeOperator:
    c = (a @ b) + (b @ a)
    c.name = f"{{{a.name}, {b.name}}}"
    return c


# -- reports -----------------------------------------------------------------

def _fmt(x) -> str:
    return str(Fraction(x))


@dataclass
class RelationReport:
    suite: str
    params: dict = field(default_factory=dict)
    instances: int = 0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, instance: str, witness: str, lhs: str, rhs: str):
        self.failures.append(
            {"instance": instance, "witness_monomial": witness, "lhs": lhs, "rhs": rhs}
        )

    def merge(self, other: "RelationReport") -> "RelationReport":
        self.instances += other.instances
        self.failures.extend(other.failures)
        self.notes.extend(other.notes)
        return self

    def to_dict(self) -> dict:
        d = {
            "suite": self.suite,
            "params": self.params,
            "instances": self.instances,
            "failures": self.failures,
        }
        if self.notes:
            d["notes"] = self.notes
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _dump(d: dict, config: FockConfig) -> str:
    return FockVector(d).dump(config) or "0"


def compare_on_basis(lhs: ModeOperator, rhs: ModeOperator, max_energy2: int,
                     report: RelationReport, instance: str) -> bool:
    """Check lhs == rhs on every monomial of energy2 <= max_energy2; record the first failure."""
    report.instances += 1
    config = lhs.config
    for e2 in range(0, max_energy2 + 1):
        for m in basis(config, None, e2):
            a = lhs.act_monomial(m)
            b = rhs.act_monomial(m)
            if a != b:
                report.record(instance, format_monomial(m, config), _dump(a, config),
                              _dump(b, config))
                return False
    return True


def _check_bracket(a: ModeOperator, b: ModeOperator, expected: ModeOperator, cap: int,
                   report: RelationReport, instance: str):
    safe = min(cap, safe_commutator_energy2(a, b, a.config.emax2))
    if safe < 0:
        report.notes.append(f"{instance}: skipped, no safe energy")
        return
    compare_on_basis(commutator(a, b, safe), expected, safe, report, instance)


def _params(config: FockConfig, **extra) -> dict:
    d = {"l": config.l, "neutral": config.with_neutral, "emax2": config.emax2}
    d.update(extra)
    return d


# -- suites ------------------------------------------------------------------

def _labels(config: FockConfig):
    out = []
    for p in range(1, config.l + 1):
        out += [psi("+", p), psi("-", p)]
    if config.with_neutral:
        out.append(phi_label())
    return out


def anticommutator_suite(config: FockConfig, level2: int = 5, cap: int | None = None) -> RelationReport:
    """{X_m, Y_n} = delta on all pairs of modes with |m|, |n| <= level2/2."""
    cap = config.emax2 - level2 if cap is None else cap
    rep = RelationReport("anticommutators", _params(config, level2=level2, safe_energy2=cap))
    labels = _labels(config)
    modes = [n2 for n2 in range(-level2, level2 + 1, 2)]
    zero = zero_operator(config)
    ops = {(lab, n2): mode_operator(lab, n2, config) for lab in labels for n2 in modes}
    for i, x in enumerate(labels):
        for y in labels[i:]:
            if x.kind == "neutral" and y.kind == "neutral":
                paired = True
            elif x.kind == "charged" and y.kind == "charged":
                paired = x.pair == y.pair and x.sign != y.sign
            else:
                paired = False
            for m2 in modes:
                for n2 in modes:
                    exp = identity(config) if paired and m2 == -n2 else zero
                    compare_on_basis(anticommutator(ops[(x, m2)], ops[(y, n2)]), exp, cap, rep,
                                     f"{{{_mode_name(x, m2)}, {_mode_name(y, n2)}}}")
    return rep


def glinf_suite(config: FockConfig, idx: int = 3, cap: int = 8) -> RelationReport:
    """[E_ab, E_cd] = d_bc E_ad - d_da E_cb + C(E_ab, E_cd) l."""
    rep = RelationReport("glinf", _params(config, idx=idx, cap=cap))
    rng = range(-idx, idx + 1)
    for a in rng:
        for b in rng:
            x = op_E(a, b, config)
            for c in rng:
                for d in rng:
                    y = op_E(c, d, config)
                    deg = b - a + d - c
                    exp = zero_operator(config, deg)
                    if b == c:
                        exp = exp + op_E(a, d, config)
                    if d == a:
                        exp = exp - op_E(c, b, config)
                    cc = cocycle_C(E_sym(a, b), E_sym(c, d))
                    if cc:
                        exp = exp + identity(config, cc * config.l)
                    _check_bracket(x, y, exp, cap, rep, f"[E({a},{b}), E({c},{d})]")
    return rep


def dinf_suite(config: FockConfig, idx: int = 2, cap: int = 8) -> RelationReport:
    """d-infinity brackets, predicted through the windowed gl-infinity bracket."""
    rep = RelationReport("dinf", _params(config, idx=idx, cap=cap))
    rng = range(-idx + 1, idx + 1)
    win = (-2 * idx - 2, 2 * idx + 3)

    def d_elem(i, j):
        return E_sym(i, j, win) - E_sym(1 - j, 1 - i, win)

    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    br = glinf_bracket(d_elem(a, b), d_elem(c, d))
                    exp = op_from_glinf(br, config) if br.entries or br.central else \
                        zero_operator(config, b - a + d - c)
                    exp.principal_degree = b - a + d - c
                    _check_bracket(op_dinf(a, b, config), op_dinf(c, d, config), exp, cap, rep,
                                   f"[d({a},{b}), d({c},{d})]")
    return rep


def heisenberg_suite(config: FockConfig, mmax: int = 3, cap: int = 8) -> RelationReport:
    rep = RelationReport("heisenberg", _params(config, mmax=mmax, cap=cap))
    rng = range(-mmax, mmax + 1)
    for m in rng:
        for n in rng:
            exp = identity(config, m * config.l) if m == -n else zero_operator(config, m + n)
            _check_bracket(op_J(0, m, config), op_J(0, n, config), exp, cap, rep,
                           f"[J^0_{m}, J^0_{n}]")
    return rep


def _virasoro(config, build, mmax, cap, sign_den, suite, central):
    rep = RelationReport(suite, _params(config, mmax=mmax, cap=cap))
    rng = range(-mmax, mmax + 1)
    for m in rng:
        for n in rng:
            exp = build(1, m + n, config).scale(m - n) if m != n else zero_operator(config, m + n)
            if m == -n and m * m * m - m:
                exp = exp + identity(config, Fraction(m**3 - m, sign_den) * central)
            _check_bracket(build(1, m, config), build(1, n, config), exp, cap, rep,
                           f"[{suite[-1]}^1_{m}, {suite[-1]}^1_{n}]")
    return rep


def virasoro_J_suite(config: FockConfig, mmax: int = 3, cap: int = 8) -> RelationReport:
    """[J^1_m, J^1_n] = (m-n) J^1_{m+n} - d_{m,-n} (m^3-m)/6 l."""
    return _virasoro(config, op_J, mmax, cap, -6, "virasoro_J", config.l)


def virasoro_W_suite(config: FockConfig, mmax: int = 3, cap: int = 8) -> RelationReport:
    """[W^1_m, W^1_n] = (m-n) W^1_{m+n} + d_{m,-n} (m^3-m)/12 c."""
    return _virasoro(config, op_W, mmax, cap, 12, "virasoro_W", config.central_charge)


def cocycle_compat_suite(rmax: int = 4, kmax: int = 4) -> RelationReport:
    """Psi(J^r_k, J^s_-k) = C(phi J^r_k, phi J^s_-k) for r, s <= rmax, |k| <= kmax."""
    rep = RelationReport("cocycle_compat", {"rmax": rmax, "kmax": kmax})
    win = (-kmax - 2, kmax + 2)
    for r in range(rmax + 1):
        for s in range(rmax + 1):
            for k in range(-kmax, kmax + 1):
                rep.instances += 1
                lhs, rhs = _cocycle_compat(J_sym(r, k), J_sym(s, -k), win)
                if lhs != rhs:
                    rep.record(f"(J^{r}_{k}, J^{s}_{-k})", "", _fmt(lhs), _fmt(rhs))
    return rep


def e_sum_for_diffop(a: DiffOp, config: FockConfig) -> ModeOperator:
    """The windowed sum of op_E realizing phi(a) (charged spaces only)."""
    (k, f), = a.terms.items()
    bound = config.emax2
    out = zero_operator(config, k)
    for j in range(-bound, bound + 2):
        i = j - k
        if not _mode_window_ok(config, 1 - 2 * i, 2 * j - 1):
            continue
        v = P.peval(f, -j)
        if v:
            out = out + op_E(i, j, config).scale(v)
    if a.central:
        out = out + identity(config, a.central * config.l)
    return out


def phi_consistency_suite(config: FockConfig, nmax: int = 3, kmax: int = 3,
                          cap: int | None = None) -> RelationReport:
    """op_J and op_W against the images of J^n_k and W^n_k under phi.

    J lies outside D^+, so its image only acts on purely charged spaces.
    """
    cap = config.emax2 - 2 * kmax if cap is None else cap
    rep = RelationReport("phi_consistency", _params(config, nmax=nmax, kmax=kmax, cap=cap))
    for k in range(-kmax, kmax + 1):
        e_cap = min(cap, config.emax2 - 2 * max(0, -k))
        for n in range(nmax + 1):
            if config.l and not config.with_neutral:
                compare_on_basis(op_J(n, k, config), op_from_diffop(J_sym(n, k), config),
                                 e_cap, rep, f"J^{n}_{k} vs phi")
                compare_on_basis(op_J(n, k, config), e_sum_for_diffop(J_sym(n, k), config),
                                 e_cap, rep, f"J^{n}_{k} vs E-sum")
            if n % 2:
                compare_on_basis(op_W(n, k, config), op_from_diffop(W_sym(n, k), config),
                                 e_cap, rep, f"W^{n}_{k} vs phi")
    return rep


def locality_check(m: int, n: int, amax: int, bmax: int, config: FockConfig,
                   family: str = "J", cap: int | None = None) -> RelationReport:
    """sum_k (-1)^k binom(N,k) [X^m_{a+N-k}, X^n_{b+k}] = 0 with N = m + n + 2."""
    build = {"J": op_J, "W": op_W}[family]
    N = m + n + 2
    rep = RelationReport("locality", _params(config, family=family, m=m, n=n, amax=amax,
                                             bmax=bmax))
    for a in range(-amax, amax + 1):
        for b in range(-bmax, bmax + 1):
            deg = a + b + N
            total = zero_operator(config, deg)
            safe = config.emax2 if cap is None else cap
            terms = []
            for k in range(N + 1):
                x = build(m, a + N - k, config)
                y = build(n, b + k, config)
                safe = min(safe, safe_commutator_energy2(x, y, config.emax2))
                terms.append((k, x, y))
            if safe < 0:
                rep.notes.append(f"a={a}, b={b}: skipped, no safe energy")
                continue
            for k, x, y in terms:
                total = total + commutator(x, y, safe).scale((-1) ** k * comb(N, k))
            compare_on_basis(total, zero_operator(config, deg), safe, rep,
                             f"{family}: m={m}, n={n}, a={a}, b={b}")
    return rep


def j1_from_j0_operator(k: int, config: FockConfig) -> ModeOperator:
    """1/2((-k-1) J^0_k + sum_{a+b=k} :J^0_a J^0_b:), modes a >= 0 to the right.

    The infinite sum is truncated per monomial at the energy of that
    monomial, beyond which every term vanishes.
    """
    if config.l != 1:
        raise ValueError("the J^1 from J^0 identity is checked for l = 1")
    half = Fraction(1, 2)

    def act(mono):
        e = (energy2(mono) + 1) // 2 + abs(k) + 1
        out: dict = {}
        for mm, c in op_J(0, k, config).act_monomial(mono).items():
            out[mm] = out.get(mm, 0) + half * (-k - 1) * c
        for a in range(k - e, e + 1):
            b = k - a
            left, right = (a, b) if a < 0 else (b, a)
            first = op_J(0, right, config).act_monomial(mono)
            for m1, c1 in first.items():
                for m2, c2 in op_J(0, left, config).act_monomial(m1).items():
                    out[m2] = out.get(m2, 0) + half * c1 * c2
        return out

    return ModeOperator(f"(J^1_{k} from J^0)", k, config, act)


def j1_from_j0_check(config: FockConfig, safe_energy2: int, kmax: int = 3) -> RelationReport:
    rep = RelationReport("j1_from_j0", _params(config, safe_energy2=safe_energy2, kmax=kmax))
    for k in range(-kmax, kmax + 1):
        cap = min(safe_energy2, config.emax2 + 2 * min(0, k))
        compare_on_basis(op_J(1, k, config), j1_from_j0_operator(k, config), cap, rep,
                         f"J^1_{k}")
    return rep


def horizontal_commute_suite(config: FockConfig, group: str, nmax: int = 3, kmax: int = 2,
                             cap: int = 8) -> RelationReport:
    """Group zero modes commute with the algebra: J for GL, W for O_2l."""
    rep = RelationReport("horizontal_commute", _params(config, group=group, nmax=nmax,
                                                       kmax=kmax))
    l = config.l
    pairs = [(p, q) for p in range(1, l + 1) for q in range(1, l + 1)]
    if group == "gl":
        hs = [op_horizontal("e_star", p, q, config) for p, q in pairs]
        algs = [op_J(n, k, config) for n in range(nmax + 1) for k in range(-kmax, kmax + 1)]
    else:
        hs = [op_horizontal(kind, p, q, config) for kind in HORIZONTAL_KINDS for p, q in pairs
              if kind == "e_star" or p < q]
        algs = [op_W(n, k, config) for n in range(1, nmax + 1, 2)
                for k in range(-kmax, kmax + 1)]
    for h in hs:
        for x in algs:
            _check_bracket(h, x, zero_operator(config, x.principal_degree), cap, rep,
                           f"[{h.name}, {x.name}]")
    return rep


def horizontal_gl_suite(config: FockConfig, cap: int = 8) -> RelationReport:
    """[e*^pq, e*^rs] = d_qr e*^ps - d_sp e*^rq on the zero modes."""
    rep = RelationReport("horizontal_gl", _params(config, cap=cap))
    l = config.l
    idx = range(1, l + 1)
    for p in idx:
        for q in idx:
            for r in idx:
                for s in idx:
                    exp = zero_operator(config)
                    if q == r:
                        exp = exp + op_horizontal("e_star", p, s, config)
                    if s == p:
                        exp = exp - op_horizontal("e_star", r, q, config)
                    _check_bracket(op_horizontal("e_star", p, q, config),
                                   op_horizontal("e_star", r, s, config), exp, cap, rep,
                                   f"[e*{p}{q}, e*{r}{s}]")
    return rep


def symbolic_bracket_suite(kmax: int = 3, nmax: int = 3) -> RelationReport:
    """The explicit Virasoro formulas agree with the symbolic bracket."""
    rep = RelationReport("symbolic_virasoro", {"kmax": kmax})
    for m in range(-kmax, kmax + 1):
        for n in range(-kmax, kmax + 1):
            rep.instances += 2
            lhs = diffop_bracket(J_sym(1, m), J_sym(1, n))
            rhs = J_sym(1, m + n).scale(m - n) + DiffOp.C(Fraction(-(m**3 - m), 6) if m == -n else 0)
            if lhs != rhs:
                rep.record(f"[J^1_{m}, J^1_{n}]", "", lhs.text(), rhs.text())
            lhs = diffop_bracket(W_sym(1, m), W_sym(1, n))
            rhs = W_sym(1, m + n).scale(m - n) + DiffOp.C(Fraction(m**3 - m, 12) if m == -n else 0)
            if lhs != rhs:
                rep.record(f"[W^1_{m}, W^1_{n}]", "", lhs.text(), rhs.text())
    return rep


def relation_tasks(config: FockConfig) -> list[tuple[str, Callable[..., RelationReport], dict]]:
    """The standard battery for one configuration as picklable (name, function, kwargs)."""
    c = config
    charged = c.l > 0
    tasks = [("anticommutators", anticommutator_suite, {"config": c})]
    if charged:
        tasks += [
            ("glinf", glinf_suite, {"config": c}),
            ("heisenberg", heisenberg_suite, {"config": c}),
            ("virasoro_J", virasoro_J_suite, {"config": c}),
        ]
    tasks += [
        ("dinf", dinf_suite, {"config": c}),
        ("virasoro_W", virasoro_W_suite, {"config": c}),
        ("cocycle_compat", cocycle_compat_suite, {}),
        ("phi_consistency", phi_consistency_suite, {"config": c}),
        ("symbolic_virasoro", symbolic_bracket_suite, {}),
    ]
    if charged:
        for m in range(3):
            for n in range(3):
                tasks.append((f"locality_J_{m}_{n}", locality_check,
                              {"m": m, "n": n, "amax": 2, "bmax": 2, "config": c,
                               "family": "J"}))
    for m in (1, 3):
        for n in (1, 3):
            tasks.append((f"locality_W_{m}_{n}", locality_check,
                          {"m": m, "n": n, "amax": 2, "bmax": 2, "config": c, "family": "W"}))
    if c.l == 1 and not c.with_neutral:
        tasks.append(("j1_from_j0", j1_from_j0_check, {"config": c, "safe_energy2": c.emax2}))
    if charged:
        tasks += [
            ("horizontal_commute_gl", horizontal_commute_suite, {"config": c, "group": "gl"}),
            ("horizontal_commute_o2l", horizontal_commute_suite, {"config": c, "group": "o2l"}),
            ("horizontal_gl", horizontal_gl_suite, {"config": c}),
        ]
    return tasks


def relation_suites(config: FockConfig) -> list[Callable[[], RelationReport]]:
    """The standard battery as zero-argument thunks, in a fixed order."""
    return [partial(fn, **kw) for _, fn, kw in relation_tasks(config)]
