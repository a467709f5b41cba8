"""Hilbert series of graded modules via their initial (monomial) modules.

For a submodule L of a graded free module F = sum S(-a_c) over a polynomial
ring in n variables, F/L and F/in(L) share a Hilbert function.  The series
is written ``numerator(t) / (1 - t)^n`` with a Laurent-polynomial numerator
over the integers (shifts may be negative, e.g. for duals).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .polynomial import mon_divides


def _minimalize(gens) -> tuple:
    gens = sorted(set(gens), key=lambda m: (sum(m), m))
    out = []
    for g in gens:
        if not any(mon_divides(h, g) for h in out):
            out.append(g)
    return tuple(out)


def _lpoly_add(a: dict, b: dict, sign: int = 1, shift: int = 0) -> dict:
    out = dict(a)
    for e, c in b.items():
        s = out.get(e + shift, 0) + sign * c
        if s:
            out[e + shift] = s
        else:
            out.pop(e + shift, None)
    return out


@lru_cache(maxsize=4096)
def monomial_numerator(gens: tuple) -> tuple:
    """Numerator K(t) of HS(S/I) = K(t)/(1-t)^n for a monomial ideal I.

    Returned as a sorted tuple of (exponent, coefficient).  Uses the
    recursion K(I) = K(I') - t^deg(m) K(I' : m) with I = I' + (m).
    """
    gens = _minimalize(gens)
    if not gens:
        return ((0, 1),)
    if any(sum(g) == 0 for g in gens):
        return ()
    # pairwise coprime generators give a product of (1 - t^deg)
    support = [frozenset(i for i, e in enumerate(g) if e) for g in gens]
    if all(not (support[a] & support[b]) for a in range(len(gens)) for b in range(a)):
        poly = {0: 1}
        for g in gens:
            poly = _lpoly_add(poly, poly, sign=-1, shift=sum(g))
        return tuple(sorted(poly.items()))
    # pivot on the last (largest) generator
    m = gens[-1]
    rest = gens[:-1]
    colon = tuple(tuple(max(x - y, 0) for x, y in zip(g, m)) for g in rest)
    a = dict(monomial_numerator(rest))
    b = dict(monomial_numerator(_minimalize(colon)))
    out = _lpoly_add(a, b, sign=-1, shift=sum(m))
    return tuple(sorted(out.items()))


@dataclass(frozen=True)
class HilbertSeries:
    """``numerator(t) / (1-t)^nvars`` with an integer Laurent numerator."""

    numerator: tuple  # sorted (exponent, coefficient) pairs, no zeros
    nvars: int

    @classmethod
    def from_initial_module(cls, lead_monomials: dict, shifts, nvars: int) -> "HilbertSeries":
        total: dict = {}
        for comp, shift in enumerate(shifts):
            num = monomial_numerator(_minimalize(lead_monomials.get(comp, ())))
            total = _lpoly_add(total, dict(num), shift=shift)
        return cls(tuple(sorted(total.items())), nvars)

    def __sub__(self, other: "HilbertSeries") -> "HilbertSeries":
        assert self.nvars == other.nvars
        out = _lpoly_add(dict(self.numerator), dict(other.numerator), sign=-1)
        return HilbertSeries(tuple(sorted(out.items())), self.nvars)

    def __add__(self, other: "HilbertSeries") -> "HilbertSeries":
        assert self.nvars == other.nvars
        out = _lpoly_add(dict(self.numerator), dict(other.numerator))
        return HilbertSeries(tuple(sorted(out.items())), self.nvars)

    def twist(self, k: int) -> "HilbertSeries":
        """Series of M(k), i.e. HF_{M(k)}(t) = HF_M(t + k)."""
        return HilbertSeries(tuple((e - k, c) for e, c in self.numerator), self.nvars)

    def is_zero(self) -> bool:
        return not self.numerator

    def reduced(self) -> tuple[dict, int]:
        """Cancel factors (1-t): returns (Q, k) with numerator = (1-t)^k Q, Q(1) != 0."""
        poly = dict(self.numerator)
        k = 0
        while poly and sum(poly.values()) == 0 and k < self.nvars:
            poly = _divide_one_minus_t(poly)
            k += 1
        return poly, k

    def dimension(self) -> int:
        """Krull dimension; -1 for the zero module."""
        if self.is_zero():
            return -1
        _, k = self.reduced()
        return self.nvars - k

    def length(self):
        """Length as an int, or None when infinite."""
        if self.is_zero():
            return 0
        q, k = self.reduced()
        if k < self.nvars:
            return None
        return sum(q.values())

    def value(self, d: int) -> int:
        n = self.nvars
        total = 0
        for e, c in self.numerator:
            j = d - e
            if j < 0:
                continue
            total += c * (comb(j + n - 1, n - 1) if n > 0 else (1 if j == 0 else 0))
        return total

    def values(self, lo: int, hi: int) -> dict[int, int]:
        return {d: self.value(d) for d in range(lo, hi + 1)}


def _divide_one_minus_t(poly: dict) -> dict:
    """Exact division of a Laurent polynomial with poly(1) == 0 by (1 - t)."""
    lo = min(poly)
    hi = max(poly)
    # poly = (1 - t) q  =>  q_e = sum_{j <= e} poly_j
    out = {}
    acc = 0
    for e in range(lo, hi):
        acc += poly.get(e, 0)
        if acc:
            out[e] = acc
    return out
