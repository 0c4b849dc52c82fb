"""Differential operators on the circle with a central extension.

A ``DiffOp`` is a finite sum of ``t^k p_k(D)`` plus ``c C`` where D = t d/dt.
Products use (t^r f(D)) (t^s g(D)) = t^(r+s) f(D+s) g(D).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from . import poly as P
from .poly import Poly


class MembershipError(ValueError):
    """The element does not lie in the requested subalgebra or span."""


class DiffOp:
    __slots__ = ("terms", "central")

    def __init__(self, terms: Mapping[int, object] | None = None, central=0):
        clean = {}
        for k, p in (terms or {}).items():
            q = P.poly(p)
            if q:
                clean[int(k)] = q
        self.terms = dict(sorted(clean.items()))
        self.central = Fraction(central)

    @classmethod
    def zero(cls) -> "DiffOp":
        return cls()

    @classmethod
    def term(cls, k: int, p) -> "DiffOp":
        return cls({k: p})

    @classmethod
    def C(cls, c=1) -> "DiffOp":
        return cls({}, c)

    def __add__(self, other: "DiffOp") -> "DiffOp":
        out = dict(self.terms)
        for k, p in other.terms.items():
            out[k] = P.padd(out.get(k, P.ZERO), p)
        return DiffOp(out, self.central + other.central)

    def scale(self, c) -> "DiffOp":
        return DiffOp({k: P.pscale(p, c) for k, p in self.terms.items()}, self.central * Fraction(c))

    def __neg__(self) -> "DiffOp":
        return self.scale(-1)

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + (-other)

    def __rmul__(self, c) -> "DiffOp":
        return self.scale(c)

    def __mul__(self, other: "DiffOp") -> "DiffOp":
        return diffop_mul(self, other)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, DiffOp)
            and self.terms == other.terms
            and self.central == other.central
        )

    def __hash__(self):
        return hash((tuple(self.terms.items()), self.central))

    def __bool__(self) -> bool:
        return bool(self.terms) or bool(self.central)

    def degrees(self) -> list[int]:
        return list(self.terms)

    def max_poly_degree(self) -> int:
        return max((P.degree(p) for p in self.terms.values()), default=-1)

    def component(self, k: int) -> Poly:
        return self.terms.get(k, P.ZERO)

    def without_center(self) -> "DiffOp":
        return DiffOp(self.terms)

    def text(self) -> str:
        """Canonical form ``t^k * (c_d D^d + ... + c_0) [+ c*C]``."""
        parts = [f"t^{k} * ({P.format_poly(p)})" for k, p in self.terms.items()]
        if self.central:
            parts.append(f"{self.central}*C")
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"DiffOp({self.text()})"


def diffop_mul(a: DiffOp, b: DiffOp) -> DiffOp:
    """Associative product; central parts are dropped."""
    out: dict[int, Poly] = {}
    for r, f in a.terms.items():
        for s, g in b.terms.items():
            prod = P.pmul(P.pshift(f, s), g)
            out[r + s] = P.padd(out.get(r + s, P.ZERO), prod)
    return DiffOp(out)


def _psi_term(r: int, f: Poly, g: Poly) -> Fraction:
    # Psi(t^r f(D), t^-r g(D)) for r >= 0
    return sum((P.peval(f, j) * P.peval(g, j + r) for j in range(-r, 0)), Fraction(0))


def psi_cocycle(a: DiffOp, b: DiffOp) -> Fraction:
    """The central part of [a, b]: pairs of terms of opposite degree."""
    total = Fraction(0)
    for r, f in a.terms.items():
        g = b.terms.get(-r)
        if g is None:
            continue
        if r >= 0:
            total += _psi_term(r, f, g)
        else:
            total -= _psi_term(-r, g, f)
    return total


def diffop_bracket(a: DiffOp, b: DiffOp) -> DiffOp:
    comm = diffop_mul(a, b) - diffop_mul(b, a)
    return DiffOp(comm.terms, psi_cocycle(a, b))


# -- standard elements ------------------------------------------------------

def D_elem() -> DiffOp:
    return DiffOp({0: P.W})


def t_elem(k: int = 1) -> DiffOp:
    return DiffOp({k: P.ONE})


def J(n: int, k: int) -> DiffOp:
    """J^n_k = -t^k [D]_n."""
    return DiffOp({k: P.pscale(P.falling(n), -1)})


def L(n: int, k: int) -> DiffOp:
    """L^n_k = -t^k D^n."""
    return DiffOp({k: P.monomial(n, -1)})


def _w_poly(n: int, k: int) -> Poly:
    # -1/2 ([D]_n - [-D-k-1]_n)
    f = P.falling(n)
    return P.pscale(P.psub(f, P.paffine(f, -1, -k - 1)), Fraction(-1, 2))


def Wop(n: int, k: int) -> DiffOp:
    """W^n_k = -1/2 t^k ([D]_n - [-D-k-1]_n); a basis of D^+ for odd n."""
    return DiffOp({k: _w_poly(n, k)})


# -- anti-involutions and shifts --------------------------------------------

@dataclass(frozen=True)
class AntiInvolution:
    family: str = "plus"
    b: Fraction = Fraction(-1)

    def __post_init__(self):
        if self.family not in ("plus", "minus"):
            raise ValueError(f"family must be plus or minus, got {self.family!r}")
        object.__setattr__(self, "b", Fraction(self.b))


def apply_antiinvolution(sigma: AntiInvolution, a: DiffOp) -> DiffOp:
    """sigma(t^k p(D)) = (+-1)^k t^k p(-D-k+b) and sigma(C) = -C."""
    out = {}
    for k, p in a.terms.items():
        q = P.paffine(p, -1, sigma.b - k)
        if sigma.family == "minus" and k % 2:
            q = P.pscale(q, -1)
        out[k] = q
    return DiffOp(out, -a.central)


def theta(s, a: DiffOp) -> DiffOp:
    """t -> t, D -> D + s."""
    return DiffOp({k: P.pshift(p, s) for k, p in a.terms.items()}, a.central)


def in_subalgebra(a: DiffOp, family: str, b) -> bool:
    return apply_antiinvolution(AntiInvolution(family, Fraction(b)), a) == -a


def graded_element(b, j: int, g: Poly) -> DiffOp:
    """t^j g(D + (j - b)/2); see ``graded_parity`` for when it lies in D^{+-,b}."""
    return DiffOp({j: P.pshift(g, Fraction(j - Fraction(b), 2))})


def graded_parity(family: str, j: int) -> str:
    """Parity of g making t^j g(D+(j-b)/2) a member of D^{family,b}."""
    if family == "plus":
        return "odd"
    return "even" if j % 2 else "odd"


# -- basis conversion -------------------------------------------------------

def basis_convert(a: DiffOp, target: str) -> dict:
    """Coefficients of ``a`` in the J, L or W basis; the center sits under "C"."""
    out: dict = {}
    if target == "L":
        for k, p in a.terms.items():
            for n, c in enumerate(p):
                if c:
                    out[(n, k)] = -c
    elif target == "J":
        for k, p in a.terms.items():
            for n, c in P.to_falling_basis(p).items():
                out[(n, k)] = -c
    elif target == "W":
        if not in_subalgebra(a, "plus", -1):
            raise MembershipError("element is not in D^+ (sigma_{+,-1}(a) != -a)")
        for k, p in a.terms.items():
            rest = p
            while rest:
                n = P.degree(rest)
                if n % 2 == 0:
                    raise MembershipError(f"even top degree {n} at t^{k}")
                w = _w_poly(n, k)
                c = rest[-1] / w[-1]
                out[(n, k)] = c
                rest = P.psub(rest, P.pscale(w, c))
    else:
        raise ValueError(f"unknown basis {target!r}")
    if a.central:
        out["C"] = a.central
    return {key: out[key] for key in sorted(out, key=_key_order)}


def _key_order(key):
    return (1, 0, 0) if key == "C" else (0, key[1], key[0])


def from_basis(coeffs: Mapping, kind: str) -> DiffOp:
    build = {"J": J, "L": L, "W": Wop}[kind]
    out = DiffOp()
    for key, c in coeffs.items():
        if key == "C":
            out = out + DiffOp.C(c)
        else:
            n, k = key
            out = out + build(n, k).scale(c)
    return out
