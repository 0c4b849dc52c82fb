"""Dual-pair decompositions of the fermionic Fock space, checked by computation.

Joint highest weight vectors are found as simultaneous kernels of the group
raising zero modes and every positive-degree algebra operator acting inside
the energy window.  Their weights are then read off from Cartan eigenvalues
and compared with the predicted weight maps and exponent sets.

Group weights are eigenvalues of e*^{pp}(0), i.e. #psi^{+p} - #psi^{-p};
this is minus the charge of pair p.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Sequence

from .exact import SparseMat, SparseVec, joint_kernel, rank, span_rank, _reduce
from .fock import (
    FockConfig,
    FockVector,
    basis,
    charges,
    energy2,
    format_monomial,
    graded_dim,
    parity,
    tau,
    tau_raw,
    vacuum,
)
from .qseries import ch_v1plus, partition_count
from .repops import (
    RelationReport,
    op_dinf,
    op_E,
    op_horizontal,
    op_J,
    op_W,
)
from .symalg import poly as P
from .symalg.diffop import DiffOp, basis_convert
from .symalg.labels import ExponentSet, LabelsA, LabelsDplus, labels_from_exponents

GROUPS = ("gl", "o2l", "o1")


class NotHighestWeight(ValueError):
    """The vector is not an eigenvector of a Cartan element it was probed with."""


class ConventionError(RuntimeError):
    """No global exponent sign reconciles computed and predicted labels."""


# -- parametrizations ----------------------------------------------------------

@dataclass(frozen=True)
class PartitionA:
    parts: tuple

    def __init__(self, parts: Sequence[int]):
        parts = tuple(int(p) for p in parts)
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be non-increasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def l(self) -> int:
        return len(self.parts)

    def label(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class PartitionD:
    parts: tuple
    bar: bool = False
    det: bool = False

    def __init__(self, parts: Sequence[int], bar: bool = False, det: bool = False):
        parts = tuple(int(p) for p in parts)
        if not parts:
            raise ValueError("need at least one part")
        if any(a < b for a, b in zip(parts, parts[1:])) or parts[-1] < 0:
            raise ValueError(f"parts must be non-increasing and non-negative: {parts}")
        if bar and parts[-1] == 0:
            raise ValueError("a barred label needs a positive last part")
        if not bar and parts[-1] > 0:
            raise ValueError("a positive last part must be barred")
        if bar and det:
            raise ValueError("det twists only apply when the last part is 0")
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "bar", bool(bar))
        object.__setattr__(self, "det", bool(det))

    @property
    def l(self) -> int:
        return len(self.parts)

    def cutoffs(self) -> tuple[int, int]:
        """(i, j): parts > 1 and parts >= 1."""
        i = sum(1 for m in self.parts if m > 1)
        j = sum(1 for m in self.parts if m >= 1)
        return i, j

    def label(self) -> str:
        body = [str(p) for p in self.parts]
        if self.bar:
            body[-1] = body[-1] + "bar"
        s = "(" + ",".join(body) + ")"
        return s + "*det" if self.det else s


@dataclass(frozen=True)
class WeightGlInf:
    coeffs: tuple  # sorted ((j, coefficient of ^a Lambda-hat_j), ...)
    c: Fraction

    def __init__(self, coeffs, c):
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        clean = tuple(sorted((int(j), int(n)) for j, n in items if n))
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "c", Fraction(c))

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def text(self) -> str:
        return " + ".join(f"{n}*aL{j}" for j, n in self.coeffs) or "0"


@dataclass(frozen=True)
class WeightDinf:
    coeffs: tuple  # sorted ((i, coefficient of ^d Lambda-hat_i), ...)
    c: Fraction

    def __init__(self, coeffs, c):
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        clean = tuple(sorted((int(i), Fraction(n)) for i, n in items if n))
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "c", Fraction(c))

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def implied_c(self) -> Fraction:
        d = self.as_dict()
        return Fraction(d.get(0, 0) + d.get(1, 0), 2) + sum(
            (v for i, v in d.items() if i >= 2), Fraction(0)
        )

    def text(self) -> str:
        return " + ".join(f"{n}*dL{i}" for i, n in self.coeffs) or "0"


# -- predicted weights and exponents -------------------------------------------

def weight_map_aa(lam: PartitionA) -> WeightGlInf:
    out: dict[int, int] = {}
    for m in lam.parts:
        out[m] = out.get(m, 0) + 1
    return WeightGlInf(out, lam.l)


def _dd(lam: PartitionD, i: int, j: int) -> WeightDinf:
    l = lam.l
    out: dict[int, int] = {}

    def add(k, n):
        out[k] = out.get(k, 0) + n

    if lam.bar:
        add(0, l - i)
        add(1, l - i)
    elif lam.det:
        add(0, j - i)
        add(1, 2 * l - i - j)
    else:
        add(0, 2 * l - i - j)
        add(1, j - i)
    for m in lam.parts[:i]:
        add(m, 1)
    return WeightDinf(out, l)


def weight_map_dd(lam: PartitionD) -> WeightDinf:
    """Reading where i counts the parts greater than 1 in every case."""
    i, j = lam.cutoffs()
    return _dd(lam, i, j)


def weight_map_dd_alt(lam: PartitionD) -> WeightDinf:
    """The other reading of the barred case: i counts every (positive) part."""
    i, j = lam.cutoffs()
    if lam.bar:
        i = lam.l
    return _dd(lam, i, j)


def exponent_set_A(lam: PartitionA) -> ExponentSet:
    out: dict[int, int] = {}
    for m in lam.parts:
        out[m] = out.get(m, 0) + 1
    return ExponentSet(lam.l, out, "A")


def exponent_set_D(lam: PartitionD, c=None) -> ExponentSet:
    i, j = lam.cutoffs()
    l = lam.l
    out: dict[int, int] = {}
    for m in lam.parts[:i]:
        out[m] = out.get(m, 0) + 1
    if lam.bar:
        ones = l - i
    elif lam.det:
        ones = 2 * l - i - j
    else:
        ones = j - i
    if ones:
        out[1] = out.get(1, 0) + ones
    return ExponentSet(l if c is None else c, out, "Dplus")


# -- dimensions ----------------------------------------------------------------

def gl_dim(lam: PartitionA) -> int:
    m = lam.parts
    l = len(m)
    num = prod(m[a] - m[b] + b - a for a in range(l) for b in range(a + 1, l))
    den = prod(b - a for a in range(l) for b in range(a + 1, l))
    return num // den


def so_dim(mu: Sequence[int]) -> int:
    """Weyl dimension of the so_{2l} module of highest weight mu."""
    l = len(mu)
    x = [mu[a] + l - 1 - a for a in range(l)]
    r = [l - 1 - a for a in range(l)]
    num = prod(x[a] ** 2 - x[b] ** 2 for a in range(l) for b in range(a + 1, l))
    den = prod(r[a] ** 2 - r[b] ** 2 for a in range(l) for b in range(a + 1, l))
    return num // den


def o_dim(lam: PartitionD) -> int:
    d = so_dim(lam.parts)
    return 2 * d if lam.bar else d


# -- highest weight vector search ------------------------------------------------

def _group_raising(group: str, config: FockConfig):
    l = config.l
    ops = []
    if group in ("gl", "o2l"):
        ops += [op_horizontal("e_star", p, q, config)
                for p in range(1, l + 1) for q in range(p + 1, l + 1)]
    if group == "o2l":
        ops += [op_horizontal("e_star_star", p, q, config)
                for p in range(1, l + 1) for q in range(p + 1, l + 1)]
    return ops


def index_window(config: FockConfig) -> range:
    """Indices i whose modes 1/2 - i or i - 1/2 can act on states below emax2."""
    h = config.emax2 // 2 + 1
    return range(-h, h + 2)


def _algebra_raising(group: str, config: FockConfig):
    idx = index_window(config)
    if group == "gl":
        return [op_E(i, j, config) for i in idx for j in idx if i < j]
    ops = []
    for i in idx:
        for j in idx:
            # d(i,j) = -d(1-j,1-i): keep one of each pair
            if i < j and (i, j) <= (1 - j, 1 - i):
                ops.append(op_dinf(i, j, config))
    return ops


def _sectors(group: str, config: FockConfig, e2: int):
    """Domain blocks at one energy: charge vectors, or parity for the neutral space."""
    if group == "o1":
        return [("parity", p) for p in (0, 1) if graded_dim(config, None, e2, p)]
    seen = sorted({charges(m, config.l) for m in basis(config, None, e2)})
    return [("charge", c) for c in seen]


def _block_basis(config, kind, key, e2):
    if kind == "parity":
        return basis(config, None, e2, key)
    return basis(config, key, e2)


def _kernel(ops, config, kind, key, e2):
    dom = _block_basis(config, kind, key, e2)
    n = len(dom)
    mats = []
    for op in ops:
        if kind == "parity":
            mat, _, _ = op.block(e2, None, key)
        else:
            mat, _, _ = op.block(e2, key)
        if mat.nrows:
            mats.append(mat)
    if not mats:
        mats = [SparseMat([], n)]
    vecs = joint_kernel(mats)
    return [FockVector({dom[i]: c for i, c in v.entries.items()}) for v in vecs]


def find_joint_hwvs(group: str, config: FockConfig) -> dict:
    """Map (group weight, energy2) -> basis of the joint highest weight space.

    The group weight is the tuple of e*^{pp}(0) eigenvalues for gl / o2l and
    the fermion parity (0 or 1) for o1.
    """
    if group not in GROUPS:
        raise ValueError(f"group must be one of {GROUPS}")
    if group == "o1" and not config.with_neutral:
        raise ValueError("o1 needs the neutral fermion")
    ops = _group_raising(group, config) + _algebra_raising(group, config)
    out: dict = {}
    for e2 in range(config.emax2 + 1):
        for kind, key in _sectors(group, config, e2):
            vecs = _kernel(ops, config, kind, key, e2)
            if vecs:
                weight = key if kind == "parity" else tuple(-c for c in key)
                out[(weight, e2)] = vecs
    return out


# -- decoding --------------------------------------------------------------------

def eigenvalue(op, v: FockVector) -> Fraction:
    """The scalar x with op v = x v, or NotHighestWeight."""
    if not v:
        raise NotHighestWeight("zero vector")
    w = op.apply(v)
    m0 = next(iter(v.terms))
    x = Fraction(w.coefficient(m0)) / Fraction(v.terms[m0])
    if w != x * v:
        raise NotHighestWeight(f"not an eigenvector of {op.name}")
    return x


def decode_group_weight(v: FockVector, config: FockConfig) -> tuple:
    return tuple(
        int(eigenvalue(op_horizontal("e_star", p, p, config), v)) for p in range(1, config.l + 1)
    )


def decode_weight_A(v: FockVector, config: FockConfig) -> WeightGlInf:
    """Read ^a h_i = lambda_i - lambda_{i+1} + delta_{i0} c from E_ii eigenvalues."""
    idx = list(index_window(config))
    lam = {i: eigenvalue(op_E(i, i, config), v) for i in idx}
    c = config.l
    h = {}
    for i in idx[:-1]:
        h[i] = lam[i] - lam[i + 1] + (c if i == 0 else 0)
    for i, x in h.items():
        if x.denominator != 1 or x < 0:
            raise NotHighestWeight(f"non-dominant label h_{i} = {x}")
    return WeightGlInf({i: int(x) for i, x in h.items()}, c)


def dinf_coroot(i: int, config: FockConfig):
    """Operator of ^d H_i (with 2C on ^d H_0)."""
    from .repops import identity

    if i == 0:
        return op_dinf(0, 0, config) + op_dinf(-1, -1, config) + identity(
            config, 2 * config.central_charge
        )
    return op_dinf(i, i, config) + op_dinf(-i, -i, config)


def decode_weight_D(v: FockVector, config: FockConfig) -> WeightDinf:
    h = {}
    for i in range(0, index_window(config).stop):
        x = eigenvalue(dinf_coroot(i, config), v)
        if x.denominator != 1 or x < 0:
            raise NotHighestWeight(f"non-dominant label h_{i} = {x}")
        h[i] = x
    w = WeightDinf(h, config.central_charge)
    if w.implied_c() != config.central_charge:
        raise NotHighestWeight(
            f"labels imply c = {w.implied_c()}, expected {config.central_charge}"
        )
    return w


def decode_labels(v: FockVector, side: str, N: int, config: FockConfig):
    """Delta_n = -Lambda(D^n) (side A) or Delta+_n = -Lambda((D+1/2)^n), n odd (Dplus)."""
    if side == "A":
        vals = []
        for n in range(N + 1):
            coeffs = basis_convert(DiffOp({0: P.monomial(n)}), "J")
            total = Fraction(0)
            for (m, k), c in coeffs.items():
                total += c * eigenvalue(op_J(m, k, config), v)
            vals.append(-total)
        return LabelsA(Fraction(config.l), tuple(vals))
    if side == "Dplus":
        vals = []
        idx = tuple(range(1, N + 1, 2))
        for n in idx:
            p = P.pshift(P.monomial(n), Fraction(1, 2))
            coeffs = basis_convert(DiffOp({0: p}), "W")
            total = Fraction(0)
            for (m, k), c in coeffs.items():
                total += c * eigenvalue(op_W(m, k, config), v)
            vals.append(-total)
        return LabelsDplus(config.central_charge, tuple(vals), idx)
    raise ValueError("side must be A or Dplus")


@dataclass
class SignConvention:
    epsilon: int
    evidence: list = field(default_factory=list)


def extremal_hwv(m: int, config: FockConfig) -> FockVector:
    """The charge-m vector psi^-_{-1/2} ... psi^-_{-(2m-1)/2}|0> (m > 0; psi^+ for m < 0)."""
    from .fock import monomial_vector, psi

    sign = "-" if m > 0 else "+"
    return monomial_vector([(psi(sign, 1), -(2 * r + 1)) for r in range(abs(m))], config)


def reconcile_signs(config: FockConfig | None = None, N: int = 6) -> SignConvention:
    """Find the global sign of the exponents from the l = 1 charge sectors."""
    if config is None:
        config = FockConfig(1, False, 8)
    if config.l != 1:
        config = FockConfig(1, False, max(config.emax2, 8))
    good = []
    evidence = []
    for eps in (1, -1):
        ok = True
        for m in (-2, -1, 1, 2):
            v = extremal_hwv(m, config)
            lam = PartitionA((-m,))
            got = decode_labels(v, "A", N, config)
            want = labels_from_exponents(exponent_set_A(lam), N, eps)
            same = got.delta == want.delta
            evidence.append({"epsilon": eps, "charge": m, "match": same})
            ok = ok and same
        if ok:
            good.append(eps)
    if len(good) != 1:
        raise ConventionError(f"expected exactly one consistent sign, found {good}")
    eps = good[0]
    # the det sector of O_2 is insensitive to the sign; record it as a cross-check
    det_vec = _det_vector(config)
    got = decode_labels(det_vec, "Dplus", N, config)
    want = labels_from_exponents(exponent_set_D(PartitionD((0,), det=True)), N, eps)
    evidence.append({"epsilon": eps, "sector": "det", "match": got == want})
    if got != want:
        raise ConventionError("the det sector does not reconcile")
    return SignConvention(eps, evidence)


def _det_vector(config):
    from .fock import monomial_vector, psi

    return monomial_vector([(psi("-", 1), -1), (psi("+", 1), -1)], config)


# -- reports -------------------------------------------------------------------------

def _frac(x) -> str:
    return str(Fraction(x))


@dataclass
class IsotypicReport:
    group: str
    l: int
    emax2: int
    sign_epsilon: int
    sectors: list = field(default_factory=list)
    completeness: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and all(s["match"] for s in self.sectors) and all(
            c["lhs"] == c["rhs"] for c in self.completeness
        )

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "group": self.group,
            "l": self.l,
            "emax2": self.emax2,
            "sign_epsilon": self.sign_epsilon,
            "sectors": self.sectors,
            "completeness": self.completeness,
            "failures": self.failures,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _exp_json(e: ExponentSet) -> dict:
    return {_frac(s): _frac(n) for s, n in e.exponents}


def _labels_json(lab) -> list:
    if isinstance(lab, LabelsA):
        return [_frac(x) for x in lab.delta]
    return [[n, _frac(x)] for n, x in zip(lab.indices, lab.delta_plus)]


def _tau_split(vecs: list[FockVector], config: FockConfig) -> dict:
    """Split a tau-stable space into its +1 and -1 eigenvectors."""
    pair = config.l
    out = {}
    for sign in (1, -1):
        cand = [v + sign * tau(v, pair, config) for v in vecs]
        cand = [v for v in cand if v]
        keys = sorted({m for v in cand for m in v.terms})
        pos = {m: i for i, m in enumerate(keys)}
        rows = _reduce({pos[m]: c for m, c in v.terms.items()} for v in cand)
        out[sign] = [FockVector({keys[i]: c for i, c in r.items()}) for _, r in sorted(rows.items())]
    return out


def _in_span(v: FockVector, vecs: list[FockVector]) -> bool:
    keys = sorted({m for w in vecs + [v] for m in w.terms})
    pos = {m: i for i, m in enumerate(keys)}
    sv = lambda w: SparseVec({pos[m]: c for m, c in w.terms.items()})
    base = [sv(w) for w in vecs]
    return span_rank(base + [sv(v)]) == span_rank(base)


def verify_duality(group: str, config: FockConfig, N: int = 6,
                   sign: SignConvention | None = None) -> IsotypicReport:
    """Joint hwv search plus every consistency check on the decomposition."""
    sign = sign or reconcile_signs()
    eps = sign.epsilon
    rep = IsotypicReport(group, config.l, config.emax2, eps)
    hw = find_joint_hwvs(group, config)
    counts: dict = {}  # lambda -> {energy2: mult}
    entries = []

    for (weight, e2), vecs in sorted(hw.items(), key=lambda kv: (kv[0][1], str(kv[0][0]))):
        if group == "gl":
            if any(a < b for a, b in zip(weight, weight[1:])):
                rep.failures.append({"check": "dominant", "weight": list(weight),
                                     "energy2": e2})
                continue
            entries.append((PartitionA(weight), e2, vecs, weight))
        elif group == "o2l":
            mu = weight
            if mu[-1] < 0:
                # tau-partner of a barred sector: check it and move on
                partner = tuple(mu[:-1]) + (-mu[-1],)
                if (partner, e2) not in hw:
                    rep.failures.append({"check": "tau_partner", "weight": list(mu),
                                         "energy2": e2})
                continue
            if mu[-1] > 0:
                entries.append((PartitionD(mu, bar=True), e2, vecs, mu))
            else:
                split = _tau_split(vecs, config)
                if len(split[1]) + len(split[-1]) != len(vecs):
                    rep.failures.append({"check": "tau_split", "weight": list(mu),
                                         "energy2": e2})
                for s in (1, -1):
                    if split[s]:
                        entries.append((PartitionD(mu, det=(s == -1)), e2, split[s], mu))
        else:
            lam = PartitionD((0,), det=(weight == 1))
            entries.append((lam, e2, vecs, weight))

    for lam, e2, vecs, weight in entries:
        counts.setdefault(lam, {})[e2] = len(vecs)
        sector = {
            "lambda": list(lam.parts),
            "bar": getattr(lam, "bar", False),
            "det": getattr(lam, "det", False),
            "energy2": e2,
            "mult": len(vecs),
            "group_weight": list(weight) if isinstance(weight, tuple) else weight,
            "hwv": vecs[0].dump(config).splitlines() if len(vecs) == 1 else [],
        }
        ok = len(vecs) == 1
        if not ok:
            rep.failures.append({"check": "multiplicity_free", "lambda": lam.label(),
                                 "energy2": e2, "dim": len(vecs)})
        v = vecs[0]
        try:
            if group == "gl":
                got_w = decode_weight_A(v, config)
                pred_w = weight_map_aa(lam)
                exps = exponent_set_A(lam)
                got_lab = decode_labels(v, "A", N, config)
                sector["algebra_weight"] = got_w.text()
                sector["predicted"] = pred_w.text()
                w_ok = got_w == pred_w and decode_group_weight(v, config) == weight
            else:
                got_w = decode_weight_D(v, config)
                if group == "o1":
                    c = config.central_charge
                    pred_w = WeightDinf({1: 1} if lam.det else {0: 1}, c)
                    exps = ExponentSet(c, {1: 1} if lam.det else {}, "Dplus")
                    alt = pred_w
                else:
                    pred_w = weight_map_dd(lam)
                    alt = weight_map_dd_alt(lam)
                    exps = exponent_set_D(lam)
                got_lab = decode_labels(v, "Dplus", N, config)
                sector["algebra_weight"] = got_w.text()
                sector["predicted"] = pred_w.text()
                sector["predicted_alt"] = alt.text()
                sector["alt_match"] = got_w == alt
                w_ok = got_w == pred_w
            want_lab = labels_from_exponents(exps, N, eps)
            lab_ok = got_lab == want_lab
            sector["exponent_set"] = _exp_json(exps)
            sector["labels"] = _labels_json(got_lab)
            sector["labels_predicted"] = _labels_json(want_lab)
            sector["weight_match"] = w_ok
            sector["labels_match"] = lab_ok
            ok = ok and w_ok and lab_ok
        except NotHighestWeight as exc:
            rep.failures.append({"check": "decode", "lambda": lam.label(), "energy2": e2,
                                 "error": str(exc)})
            ok = False
        sector["match"] = ok
        rep.sectors.append(sector)

    # each lambda at exactly one (lowest) energy
    for lam, per in sorted(counts.items(), key=lambda kv: kv[0].label()):
        if len(per) != 1:
            rep.failures.append({"check": "single_energy", "lambda": lam.label(),
                                 "energies": sorted(per)})

    # completeness: sum over lambda of dim V(lambda) * #group hwvs of lambda = dim F_e
    dim = {"gl": gl_dim, "o2l": o_dim, "o1": lambda lam: 1}[group]
    for e2 in range(config.emax2 + 1):
        lhs = sum(dim(_lam_from_key(k)) * n for k, n in _group_hwv_dims(group, config, e2).items())
        rep.completeness.append({"energy2": e2, "lhs": lhs, "rhs": graded_dim(config, None, e2)})

    if group == "o2l" and config.l == 1:
        _check_h_pm(rep, config, N)
    return rep


def _lam_key(lam):
    if isinstance(lam, PartitionA):
        return ("A", lam.parts)
    return ("D", lam.parts, lam.bar, lam.det)


def _lam_from_key(key):
    if key[0] == "A":
        return PartitionA(key[1])
    return PartitionD(key[1], bar=key[2], det=key[3])


_GROUP_HWV_CACHE: dict = {}


def _group_hwv_dims(group: str, config: FockConfig, e2: int) -> dict:
    """Counts of group-only highest weight vectors at energy e2, keyed by lambda."""
    key = (group, config, e2)
    hit = _GROUP_HWV_CACHE.get(key)
    if hit is not None:
        return hit
    ops = _group_raising(group, config)
    out: dict = {}
    for kind, k in _sectors(group, config, e2):
        if group == "o1":
            lam = PartitionD((0,), det=(k == 1))
            out[_lam_key(lam)] = graded_dim(config, None, e2, k)
            continue
        vecs = _kernel(ops, config, kind, k, e2)
        if not vecs:
            continue
        mu = tuple(-c for c in k)
        if group == "gl":
            if any(a < b for a, b in zip(mu, mu[1:])):
                continue
            out[_lam_key(PartitionA(mu))] = len(vecs)
        else:
            if mu[-1] < 0:
                continue
            if mu[-1] > 0:
                out[_lam_key(PartitionD(mu, bar=True))] = len(vecs)
            else:
                split = _tau_split(vecs, config)
                for s in (1, -1):
                    if split[s]:
                        lam = PartitionD(mu, det=(s == -1))
                        out[_lam_key(lam)] = len(split[s])
    _GROUP_HWV_CACHE[key] = out
    return out


def _check_h_pm(rep: IsotypicReport, config: FockConfig, N: int):
    """Charge +m and -m sectors carry equal D+ labels (l = 1)."""
    for m in (1, 2):
        if m * m > config.emax2:
            continue
        a = decode_labels(extremal_hwv(m, config), "Dplus", N, config)
        b = decode_labels(extremal_hwv(-m, config), "Dplus", N, config)
        rep.notes.append(f"H^{m} vs H^-{m}: labels equal = {a == b}")
        if a != b:
            rep.failures.append({"check": "h_pm_labels", "m": m})


def locate_hwv(group: str, lam, config: FockConfig):
    """The joint hwv of the sector ``lam`` inside the window, or None."""
    hw = find_joint_hwvs(group, config)
    for (weight, e2), vecs in sorted(hw.items(), key=lambda kv: kv[0][1]):
        if group == "gl":
            if weight == lam.parts:
                return vecs[0], e2
        elif group == "o1":
            if weight == (1 if lam.det else 0):
                return vecs[0], e2
        elif weight == lam.parts:
            if lam.bar:
                return vecs[0], e2
            split = _tau_split(vecs, config)[-1 if lam.det else 1]
            if split:
                return split[0], e2
    return None


# -- Virasoro content -------------------------------------------------------------

def tau_even_dim(config: FockConfig, e2: int) -> int:
    """Dimension of the tau-fixed part of the charge-0 space at energy e2."""
    mons = basis(config, (0,) * config.l, e2)
    pos = {m: i for i, m in enumerate(mons)}
    rows = []
    for i, m in enumerate(mons):
        s, mm = tau_raw(m, config.l)
        row = {i: -1}
        j = pos[mm]
        row[j] = row.get(j, 0) + s
        rows.append(row)
    return len(mons) - rank(SparseMat(rows, len(mons)))


def descendant_dims(config: FockConfig, start: FockVector, start_e2: int, max_e2: int) -> dict:
    """Rank of the span of W^1_{-k_1} ... W^1_{-k_r} start at each energy."""
    levels: dict[int, list[FockVector]] = {start_e2: [start]}
    for e2 in range(start_e2 + 1, max_e2 + 1):
        cand = []
        for k in range(1, (e2 - start_e2) // 2 + 1):
            for v in levels.get(e2 - 2 * k, []):
                w = op_W(1, -k, config).apply(v)
                if w:
                    cand.append(w)
        keys = sorted({m for v in cand for m in v.terms})
        pos = {m: i for i, m in enumerate(keys)}
        red = _reduce({pos[m]: c for m, c in v.terms.items()} for v in cand)
        levels[e2] = [FockVector({keys[i]: c for i, c in r.items()}) for _, r in sorted(red.items())]
    return {e2: len(v) for e2, v in levels.items()}


def virasoro_content_checks(config: FockConfig) -> RelationReport:
    rep = RelationReport("virasoro_content", {"l": config.l, "neutral": config.with_neutral,
                                              "emax2": config.emax2})
    if config.l == 1 and not config.with_neutral:
        ch = ch_v1plus(config.emax2)
        for e2 in range(0, config.emax2 + 1, 2):
            rep.instances += 1
            even = tau_even_dim(config, e2)
            total = graded_dim(config, (0,), e2)
            want_even = ch[e2]
            want_odd = partition_count(e2 // 2) - want_even
            if (even, total - even) != (want_even, want_odd):
                rep.record(f"energy2={e2}", "", f"even={even}, odd={total - even}",
                           f"even={want_even}, odd={want_odd}")
    elif config.with_neutral and config.l == 0:
        from .fock import monomial_vector, phi

        even = descendant_dims(config, vacuum(config), 0, config.emax2)
        odd = descendant_dims(config, monomial_vector([(phi(), -1)], config), 1, config.emax2)
        for e2 in range(config.emax2 + 1):
            rep.instances += 1
            par = e2 % 2  # even parity lives at even doubled energy
            got = (even if par == 0 else odd).get(e2, 0)
            want = graded_dim(config, None, e2, par)
            if got != want:
                rep.record(f"energy2={e2}", "", f"descendants={got}", f"subspace={want}")
    else:
        raise ValueError("virasoro_content_checks needs l = 1 or the bare neutral fermion")
    return rep
