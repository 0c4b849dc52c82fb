"""Dense univariate polynomials over the rationals.

A polynomial is a tuple of Fractions, lowest degree first, with no trailing
zeros.  The zero polynomial is the empty tuple.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

Poly = tuple


def poly(coeffs: Iterable) -> Poly:
    out = [Fraction(c) for c in coeffs]
    while out and not out[-1]:
        out.pop()
    return tuple(out)


ZERO: Poly = ()
ONE: Poly = (Fraction(1),)
W: Poly = (Fraction(0), Fraction(1))


def const(c) -> Poly:
    return poly([c])


def monomial(d: int, c=1) -> Poly:
    return poly([0] * d + [c])


def degree(p: Poly) -> int:
    return len(p) - 1


def padd(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return poly((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def pscale(p: Poly, c) -> Poly:
    c = Fraction(c)
    return poly(c * a for a in p) if c else ZERO


def psub(p: Poly, q: Poly) -> Poly:
    return padd(p, pscale(q, -1))


def pmul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ZERO
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return poly(out)


def peval(p: Poly, x) -> Fraction:
    acc = Fraction(0)
    for a in reversed(p):
        acc = acc * x + a
    return acc


def paffine(p: Poly, a, b) -> Poly:
    """p(a*w + b)."""
    a, b = Fraction(a), Fraction(b)
    out = ZERO
    power = ONE
    lin = poly([b, a])
    for c in p:
        out = padd(out, pscale(power, c))
        power = pmul(power, lin)
    return out


def pshift(p: Poly, s) -> Poly:
    """p(w + s)."""
    return paffine(p, 1, s)


def is_odd(p: Poly) -> bool:
    return all(not c for c in p[0::2])


def is_even(p: Poly) -> bool:
    return all(not c for c in p[1::2])


@lru_cache(maxsize=None)
def falling(n: int) -> Poly:
    """[w]_n = w (w-1) ... (w-n+1)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    out = ONE
    for i in range(n):
        out = pmul(out, poly([-i, 1]))
    return out


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def to_falling_basis(p: Poly) -> dict[int, Fraction]:
    """Coefficients b_i with p = sum b_i [w]_i (via w^m = sum S(m,i) [w]_i)."""
    out: dict[int, Fraction] = {}
    for m, c in enumerate(p):
        if c:
            for i in range(m + 1):
                s = stirling2(m, i)
                if s:
                    out[i] = out.get(i, 0) + c * s
    return {i: v for i, v in sorted(out.items()) if v}


def binomial_row(n: int) -> list[int]:
    return [comb(n, k) for k in range(n + 1)]


def format_poly(p: Poly, var: str = "D") -> str:
    if not p:
        return "0"
    words = []
    for d in range(len(p) - 1, -1, -1):
        c = p[d]
        if not c:
            continue
        mag = abs(c)
        mono = var if d == 1 else f"{var}^{d}"
        if d == 0:
            body = f"{mag}"
        else:
            body = mono if mag == 1 else f"{mag} {mono}"
        if not words:
            words.append(("-" if c < 0 else "") + body)
        else:
            words.append(("- " if c < 0 else "+ ") + body)
    return " ".join(words)
