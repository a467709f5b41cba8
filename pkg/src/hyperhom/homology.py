"""Tor, Ext, lengths, dimension and depth of graded modules over R = S/(f).

Homology is returned as a :class:`Subquotient` inside the cover of the chain
module, which is enough for Hilbert series and lengths; ``.to_module()``
gives a minimal presentation when the module itself is wanted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .kernel.groebner import kernel_mod
from .resolution import detect_periodicity, resolve, default_bound, PeriodicityNotFound
from .rings import GradedModule, RingMismatch, Subquotient, _blocks

INFINITY = math.inf


@dataclass(frozen=True)
class LengthValue:
    finite: bool
    value: int | None = None

    def __str__(self):
        return str(self.value) if self.finite else "inf"

    def to_json(self):
        return self.value if self.finite else "inf"

    def __eq__(self, other):
        if isinstance(other, int):
            return self.finite and self.value == other
        if isinstance(other, LengthValue):
            return (self.finite, self.value) == (other.finite, other.value)
        return NotImplemented

    def __hash__(self):
        return hash((self.finite, self.value))


INFINITE_LENGTH = LengthValue(False)


@dataclass
class HilbertFunction:
    table: dict
    window: tuple


@dataclass
class GradedComplex:
    """Chain modules given as cokernels of free covers, with maps on covers.

    ``terms[i] = (shifts, denominators)``; ``maps[i]`` is the list of columns
    of the map out of term i (towards i-1 when homological, i+1 when
    cohomological).  Missing terms are zero.
    """

    ring: object
    terms: dict
    maps: dict
    orientation: str = "homological"

    def _next(self, i: int) -> int:
        return i - 1 if self.orientation == "homological" else i + 1

    def _prev(self, i: int) -> int:
        return i + 1 if self.orientation == "homological" else i - 1

    def homology(self, i: int) -> Subquotient:
        ring = self.ring
        if i not in self.terms:
            return Subquotient(ring, (), None, [])
        shifts, denoms = self.terms[i]
        out = self._next(i)
        if out in self.terms and self.terms[out][0] and i in self.maps:
            tshifts, tdenoms = self.terms[out]
            ker = kernel_mod(self.maps[i], list(shifts), list(tshifts), tdenoms, ring.p, ring.nvars)
            nums = [v for v, _ in ker]
        else:
            nums = None
        incoming = self.maps.get(self._prev(i), []) if self._prev(i) in self.terms else []
        return Subquotient(ring, shifts, nums, list(incoming) + list(denoms))


def _same_ring(M, N):
    if M.ring != N.ring:
        raise RingMismatch("modules live over different rings")


def _tensor_term(ring, Fshifts, N: GradedModule):
    rN = N.rank
    shifts = tuple(a + b for a in Fshifts for b in N.shifts)
    denoms = _blocks(len(Fshifts), N.relations, rN) + ring.f_relations(len(shifts))
    return shifts, denoms


def _tensor_map(cols, rN: int) -> list:
    """d (x) 1_N on covers: basis (a, l) -> sum over entries of column a."""
    out = []
    for col in cols:
        for l in range(rN):
            out.append({(b * rN + l, m): c for (b, m), c in col.items()})
    return out


def _hom_term(ring, Fshifts, N: GradedModule):
    rN = N.rank
    shifts = tuple(sn - a for a in Fshifts for sn in N.shifts)
    denoms = _blocks(len(Fshifts), N.relations, rN) + ring.f_relations(len(shifts))
    return shifts, denoms


def _hom_map(cols, nsrc: int, rN: int) -> list:
    """phi -> phi o d on covers: basis (b, l) of Hom(F_{i-1}, N) -> Hom(F_i, N)."""
    out = [dict() for _ in range(nsrc * rN)]
    for a, col in enumerate(cols):
        for (b, m), c in col.items():
            for l in range(rN):
                out[b * rN + l][(a * rN + l, m)] = c
    return out


def _resolution_through(M: GradedModule, top: int, over: str = "R"):
    bound = max(top, 1) if over == "S" else max(top, default_bound(M.ring))
    if over == "S":
        return resolve(M, "S")
    return resolve(M, "R", bound)


def tor_complex(M: GradedModule, N: GradedModule, lo: int, hi: int, over: str = "R") -> GradedComplex:
    """F ⊗ N for indices lo..hi (with the neighbours needed for homology)."""
    res = _resolution_through(M, hi + 1, over)
    ring = res.ring
    Nn = N if over == "R" else N.over_ambient()
    terms = {}
    maps = {}
    for i in range(max(lo - 1, 0), hi + 2):
        if not res.covers(i):
            break
        sh = res.shift(i)
        if not sh:
            continue
        terms[i] = _tensor_term(ring, sh, Nn)
        if i >= 1:
            maps[i] = _tensor_map(res.differential(i), Nn.rank)
    return GradedComplex(ring, terms, maps, "homological")


def tor_subquotient(M: GradedModule, N: GradedModule, i: int, over: str = "R") -> Subquotient:
    _same_ring(M, N)
    if i < 0:
        raise ValueError("Tor index must be >= 0")
    key = ("tor", over, N, i)
    if key not in M._cache:
        M._cache[key] = tor_complex(M, N, i, i, over).homology(i)
    return M._cache[key]


def tor(M: GradedModule, N: GradedModule, i: int) -> GradedModule:
    """Tor_i^R(M, N), minimally presented."""
    return tor_subquotient(M, N, i).to_module()[0]


def ext_complex(M: GradedModule, N: GradedModule, lo: int, hi: int) -> GradedComplex:
    res = _resolution_through(M, hi + 1)
    ring = res.ring
    rN = N.rank
    terms = {}
    maps = {}
    for i in range(max(lo - 1, 0), hi + 2):
        if not res.covers(i):
            break
        sh = res.shift(i)
        if not sh:
            continue
        terms[i] = _hom_term(ring, sh, N)
        if res.covers(i + 1) and res.shift(i + 1):
            maps[i] = _hom_map(res.differential(i + 1), len(sh), rN)
    return GradedComplex(ring, terms, maps, "cohomological")


def ext_subquotient(M: GradedModule, N: GradedModule, i: int) -> Subquotient:
    _same_ring(M, N)
    if i < 0:
        raise ValueError("Ext index must be >= 0")
    key = ("ext", N, i)
    if key not in M._cache:
        M._cache[key] = ext_complex(M, N, i, i).homology(i)
    return M._cache[key]


def ext(M: GradedModule, N: GradedModule, i: int) -> GradedModule:
    """Ext^i_R(M, N), minimally presented."""
    return ext_subquotient(M, N, i).to_module()[0]


def length(M) -> LengthValue:
    """Length of a module or subquotient; infinite iff its dimension is positive."""
    n = M.hilbert_series.length()
    return INFINITE_LENGTH if n is None else LengthValue(True, n)


def krull_dim(M) -> int:
    """Krull dimension read off the Hilbert series (-1 for the zero module)."""
    return M.hilbert_series.dimension()


def projective_dimension_over_ambient(M: GradedModule) -> int:
    return resolve(M, "S").length


def depth(M: GradedModule):
    """depth via Auslander-Buchsbaum over S; ``INFINITY`` for the zero module."""
    if M.is_zero():
        return INFINITY
    return M.ring.nvars - projective_dimension_over_ambient(M)


def hilbert_function(M, window: tuple[int, int]) -> HilbertFunction:
    lo, hi = window
    return HilbertFunction(M.hilbert_series.values(lo, hi), (lo, hi))


def tor_lengths(M: GradedModule, N: GradedModule, lo: int, hi: int, over: str = "R") -> dict[int, LengthValue]:
    return {i: length(tor_subquotient(M, N, i, over)) for i in range(lo, hi + 1)}


def f_index(M: GradedModule, N: GradedModule, bound: int | None = None):
    """Least i with l(Tor_j) finite for all j >= i, or None if not found by ``bound``.

    Indices past the periodicity onset are covered by periodicity once two
    consecutive of them have been checked.
    """
    _same_ring(M, N)
    if bound is None:
        bound = default_bound(M.ring)
    res = resolve(M, "R", bound)
    if M.ring.f is not None:
        try:
            cert = detect_periodicity(res)
        except PeriodicityNotFound:
            return None
        top = max(bound, cert.onset + 1)
    else:
        top = bound
    if res.finite:
        top = min(top, res.length)
    i = top + 1
    for j in range(top, -1, -1):
        if not length(tor_subquotient(M, N, j)).finite:
            break
        i = j
    return i if i <= top or res.finite else None
