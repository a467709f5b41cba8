"""Gröbner bases, normal forms and syzygies for graded free S-modules.

A vector of the free module ``S^r`` is a dict ``{(component, monomial): c}``.
Every free module carries integer degree shifts, one per basis element, and
all vectors handled here are homogeneous: ``sum(monomial) + shift[component]``
is the same for every term.

The module order is term-over-position built on grevlex: total degree first,
then the grevlex rank of the monomial, then the component (lower index is
larger).  For syzygies and lifting an elimination variant is used in which
every component below a boundary index dominates every component above it.

Buchberger's algorithm runs degree by degree with the normal selection
strategy (lowest degree first, then lowest pair index) and the chain
criterion.  Because inputs are homogeneous the computation can be truncated
at any degree, which is what :func:`minimal_generators` relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from heapq import heapify, heappop, heappush

from .polynomial import mon_div, mon_divides, mon_lcm


class InhomogeneousError(ValueError):
    pass


# -- vector helpers ----------------------------------------------------------

def vec_add(a: dict, b: dict, p: int) -> dict:
    out = dict(a)
    for t, c in b.items():
        s = (out.get(t, 0) + c) % p
        if s:
            out[t] = s
        else:
            out.pop(t, None)
    return out


def vec_axpy(out: dict, c: int, b: dict, p: int) -> None:
    """In place: out += c * b."""
    for t, v in b.items():
        s = (out.get(t, 0) + c * v) % p
        if s:
            out[t] = s
        else:
            out.pop(t, None)


def vec_scale(a: dict, c: int, p: int) -> dict:
    c %= p
    if not c:
        return {}
    return {t: v * c % p for t, v in a.items()}


def vec_mul_poly(a: dict, poly: dict, p: int) -> dict:
    """Multiply every component of ``a`` by the polynomial ``poly``."""
    out: dict = {}
    for (comp, m), v in a.items():
        for pm, pc in poly.items():
            t = (comp, tuple([x + y for x, y in zip(m, pm)]))
            s = (out.get(t, 0) + v * pc) % p
            if s:
                out[t] = s
            else:
                out.pop(t, None)
    return out


def vec_mul_mon(a: dict, mon: tuple, c: int, p: int) -> dict:
    return {(comp, tuple([x + y for x, y in zip(m, mon)])): v * c % p for (comp, m), v in a.items()}


def vec_degree(vec: dict, shifts) -> int | None:
    """Total degree of a homogeneous vector; None for zero."""
    degs = {sum(m) + shifts[comp] for comp, m in vec}
    if not degs:
        return None
    if len(degs) > 1:
        raise InhomogeneousError(f"inhomogeneous vector (degrees {sorted(degs)})")
    return degs.pop()


def vec_reindex(vec: dict, offset: int) -> dict:
    return {(comp + offset, m): c for (comp, m), c in vec.items()}


def component(vec: dict, i: int) -> dict:
    """The polynomial (dict) in component ``i``."""
    return {m: c for (comp, m), c in vec.items() if comp == i}


def from_components(polys, p: int | None = None) -> dict:
    out = {}
    for i, poly in enumerate(polys):
        for m, c in poly.items():
            out[(i, m)] = c
    return out


# -- orders -------------------------------------------------------------------

class ModuleOrder:
    """Graded term-over-position grevlex order on a free module.

    ``boundary`` turns on the elimination variant: components ``< boundary``
    form the upper block.  :meth:`rank` sorts ascending in descending order.
    """

    def __init__(self, shifts, boundary: int | None = None):
        self.shifts = tuple(shifts)
        self.boundary = boundary
        self._cache: dict = {}

    def rank(self, term):
        r = self._cache.get(term)
        if r is None:
            comp, mon = term
            d = sum(mon)
            block = 0 if self.boundary is None or comp < self.boundary else 1
            r = (block, -(d + self.shifts[comp]), -d, mon[::-1], comp)
            self._cache[term] = r
        return r

    def lead(self, vec: dict):
        return min(vec, key=self.rank)


# -- Buchberger ---------------------------------------------------------------

class GroebnerEngine:
    """Incremental homogeneous Buchberger algorithm.

    Inputs are queued with :meth:`add` and processed by :meth:`compute`,
    optionally only up to a degree.  After ``compute(d)`` the basis decides
    membership of any homogeneous vector of degree ``<= d``.
    """

    def __init__(self, order: ModuleOrder, p: int):
        self.order = order
        self.p = p
        self.elements: list[dict] = []
        self.leads: list[tuple] = []
        self.degrees: list[int] = []
        self._by_comp: dict[int, list[tuple[tuple, int]]] = {}
        self._pairs: list = []
        self._pairset: set = set()
        self._pending: list = []
        self._seq = 0

    def add(self, vec: dict, degree: int | None = None):
        if not vec:
            return
        if degree is None:
            degree = vec_degree(vec, self.order.shifts)
        heappush(self._pending, (degree, self._seq, vec))
        self._seq += 1

    def _next_degree(self):
        cands = []
        if self._pairs:
            cands.append(self._pairs[0][0])
        if self._pending:
            cands.append(self._pending[0][0])
        return min(cands) if cands else None

    def compute(self, up_to: int | None = None) -> "GroebnerEngine":
        while True:
            d = self._next_degree()
            if d is None or (up_to is not None and d > up_to):
                return self
            while self._pairs and self._pairs[0][0] == d:
                _, j, i = heappop(self._pairs)
                self._pairset.discard((i, j))
                if self._chain_criterion(i, j):
                    continue
                r = self.reduce(self._spoly(i, j))
                if r:
                    self._insert(r, d)
            while self._pending and self._pending[0][0] == d:
                _, _, v = heappop(self._pending)
                r = self.reduce(v)
                if r:
                    self._insert(r, d)

    def _insert(self, vec: dict, degree: int) -> int:
        p = self.p
        lt = self.order.lead(vec)
        inv = pow(vec[lt], -1, p)
        if inv != 1:
            vec = {t: c * inv % p for t, c in vec.items()}
        idx = len(self.elements)
        comp, mon = lt
        shift = self.order.shifts[comp]
        bucket = self._by_comp.setdefault(comp, [])
        for other_mon, k in bucket:
            lcm = mon_lcm(mon, other_mon)
            deg = sum(lcm) + shift
            heappush(self._pairs, (deg, idx, k))
            self._pairset.add((k, idx))
        bucket.append((mon, idx))
        self.elements.append(vec)
        self.leads.append(lt)
        self.degrees.append(degree)
        return idx

    def _chain_criterion(self, i: int, j: int) -> bool:
        comp, mi = self.leads[i]
        mj = self.leads[j][1]
        lcm = mon_lcm(mi, mj)
        pairset = self._pairset
        for mk, k in self._by_comp[comp]:
            if k == i or k == j or not mon_divides(mk, lcm):
                continue
            if (min(i, k), max(i, k)) not in pairset and (min(j, k), max(j, k)) not in pairset:
                return True
        return False

    def _spoly(self, i: int, j: int) -> dict:
        p = self.p
        mi = self.leads[i][1]
        mj = self.leads[j][1]
        lcm = mon_lcm(mi, mj)
        s = vec_mul_mon(self.elements[i], mon_div(lcm, mi), 1, p)
        vec_axpy(s, p - 1, vec_mul_mon(self.elements[j], mon_div(lcm, mj), 1, p), p)
        return s

    def find_divisor(self, term):
        comp, mon = term
        bucket = self._by_comp.get(comp)
        if bucket:
            for bm, k in bucket:
                if mon_divides(bm, mon):
                    return k
        return None

    def reduce(self, vec: dict, full: bool = True) -> dict:
        """Normal form of ``vec`` against the current basis."""
        if not vec:
            return {}
        p = self.p
        rank = self.order.rank
        v = dict(vec)
        heap = [(rank(t), t) for t in v]
        heapify(heap)
        rem: dict = {}
        elements, leads = self.elements, self.leads
        while heap:
            _, t = heappop(heap)
            c = v.get(t)
            if c is None:
                continue
            k = self.find_divisor(t)
            if k is None:
                if not full:
                    rem.update(v)
                    return rem
                rem[t] = c
                del v[t]
                continue
            q = mon_div(t[1], leads[k][1])
            factor = p - c
            for (comp, m), a in elements[k].items():
                key = (comp, tuple([x + y for x, y in zip(m, q)]))
                old = v.get(key)
                if old is None:
                    new = factor * a % p
                    if new:
                        v[key] = new
                        heappush(heap, (rank(key), key))
                else:
                    new = (old + factor * a) % p
                    if new:
                        v[key] = new
                    else:
                        del v[key]
        return rem

    def reduced_basis(self) -> list[dict]:
        """Minimal, tail-reduced, monic basis sorted by leading term."""
        keep = []
        for i, (comp, mon) in enumerate(self.leads):
            redundant = False
            for j, (c2, m2) in enumerate(self.leads):
                if j != i and c2 == comp and mon_divides(m2, mon) and (m2 != mon or j < i):
                    redundant = True
                    break
            if not redundant:
                keep.append(i)
        sub = GroebnerEngine(self.order, self.p)
        for i in keep:
            sub._register(self.elements[i], self.leads[i], self.degrees[i])
        out = []
        for n, i in enumerate(keep):
            vec = self.elements[i]
            lt = self.leads[i]
            tail = {t: c for t, c in vec.items() if t != lt}
            tail = sub.reduce(tail)
            tail[lt] = 1
            out.append(tail)
        out.sort(key=lambda v: self.order.rank(self.order.lead(v)))
        return out

    def _register(self, vec, lt, degree):
        idx = len(self.elements)
        self.elements.append(vec)
        self.leads.append(lt)
        self.degrees.append(degree)
        self._by_comp.setdefault(lt[0], []).append((lt[1], idx))

    def lead_monomials(self) -> dict[int, list[tuple]]:
        """Leading monomials grouped by component (the initial module)."""
        out: dict[int, list[tuple]] = {}
        for comp, mon in self.leads:
            out.setdefault(comp, []).append(mon)
        return out


# -- public operations ----------------------------------------------------------

@dataclass(frozen=True)
class GroebnerBasis:
    generators: tuple
    shifts: tuple
    p: int
    order: str = "grevlex/term-over-position"
    reduced: bool = True

    def engine(self) -> GroebnerEngine:
        eng = GroebnerEngine(ModuleOrder(self.shifts), self.p)
        mo = eng.order
        for g in self.generators:
            eng._register(g, mo.lead(g), vec_degree(g, self.shifts))
        return eng


def groebner_basis(gens, shifts, p: int) -> GroebnerBasis:
    """Reduced Gröbner basis of the submodule generated by ``gens``."""
    eng = GroebnerEngine(ModuleOrder(shifts), p)
    for g in gens:
        eng.add(g)
    eng.compute()
    return GroebnerBasis(tuple(eng.reduced_basis()), tuple(shifts), p)


def normal_form(vec: dict, gb: GroebnerBasis) -> dict:
    return gb.engine().reduce(vec)


def kernel_mod(cols, col_degrees, shifts, relations, p: int, nvars: int) -> list[tuple[dict, int]]:
    """Generators of ``{c in S^m : sum c_k cols_k in span(relations)}``.

    ``cols`` are m vectors of the free module with ``shifts``; the result
    lives in ``S^m`` with shifts ``col_degrees``.  Computed by elimination:
    a Gröbner basis of the vectors ``(cols_k, e_k)`` and ``(rel, 0)`` with the
    original components dominating; basis elements without original part are
    the kernel.  Returns (vector, degree) pairs forming a Gröbner basis of the
    kernel.
    """
    r = len(shifts)
    order = ModuleOrder(tuple(shifts) + tuple(col_degrees), boundary=r)
    eng = GroebnerEngine(order, p)
    one = (0,) * nvars
    for k, (col, deg) in enumerate(zip(cols, col_degrees)):
        v = dict(col)
        v[(r + k, one)] = 1
        eng.add(v, deg)
    for rel in relations:
        eng.add(rel)
    eng.compute()
    out = []
    for vec, lt, deg in zip(eng.elements, eng.leads, eng.degrees):
        if lt[0] >= r:
            out.append((vec_reindex(vec, -r), deg))
    return out


def minimal_generators(cands, cand_degrees, shifts, p: int, forced=()) -> list[int]:
    """Indices of a minimal generating subset of ``cands`` modulo ``forced``.

    Candidates are scanned by (degree, index); one is kept iff it does not
    lie in the span of the forced vectors plus the candidates kept so far.
    """
    eng = GroebnerEngine(ModuleOrder(shifts), p)
    for v in forced:
        eng.add(v)
    kept = []
    for k in sorted(range(len(cands)), key=lambda k: (cand_degrees[k], k)):
        v = cands[k]
        if not v:
            continue
        d = cand_degrees[k]
        eng.compute(up_to=d)
        r = eng.reduce(v)
        if r:
            eng._insert(r, d)
            kept.append(k)
    return kept


class Lifter:
    """Express vectors in terms of ``gens`` modulo ``relations``.

    ``lift(v)`` returns coefficients c with ``v - sum c_k gens_k`` in the span
    of ``relations``, or None if ``v`` is not in the span of both.
    """

    def __init__(self, gens, gen_degrees, shifts, relations, p: int, nvars: int):
        self.r = len(shifts)
        self.m = len(gens)
        self.p = p
        order = ModuleOrder(tuple(shifts) + tuple(gen_degrees), boundary=self.r)
        self.engine = GroebnerEngine(order, p)
        one = (0,) * nvars
        for k, (g, d) in enumerate(zip(gens, gen_degrees)):
            v = dict(g)
            v[(self.r + k, one)] = 1
            self.engine.add(v, d)
        for rel in relations:
            self.engine.add(rel)
        self.engine.compute()

    def lift(self, vec: dict):
        nf = self.engine.reduce(vec)
        if any(comp < self.r for comp, _ in nf):
            return None
        p = self.p
        return {(comp - self.r, m): (p - c) % p for (comp, m), c in nf.items()}


def syzygy_basis(rows) -> list[list]:
    """Minimal syzygies of a matrix of homogeneous polynomials over S.

    ``rows`` is a list of rows of :class:`Polynomial`; the result is a list
    of columns (lists of polynomials) c with ``rows * c = 0``.  The target
    module is graded with all generators in degree 0 and the source by the
    column degrees, so every column must be homogeneous.
    """
    if not rows or not rows[0]:
        return []
    ring = rows[0][0].ring
    p = ring.p
    nrows, ncols = len(rows), len(rows[0])
    cols, degs = [], []
    for j in range(ncols):
        vec = {}
        for i in range(nrows):
            e = rows[i][j]
            if e.ring != ring:
                raise ValueError("matrix entries from different rings")
            for m, c in e.terms.items():
                vec[(i, m)] = c
        d = vec_degree(vec, [0] * nrows)
        if d is None:
            d = 0
        if vec and any(sum(m) != d for (_, m) in vec):
            raise InhomogeneousError(f"column {j} is not homogeneous")
        cols.append(vec)
        degs.append(d)
    ker = kernel_mod(cols, degs, [0] * nrows, [], p, ring.nvars)
    vecs = [v for v, _ in ker]
    kdeg = [d for _, d in ker]
    keep = minimal_generators(vecs, kdeg, degs, p)
    out = []
    for k in keep:
        col = [dict() for _ in range(ncols)]
        for (j, m), c in vecs[k].items():
            col[j][m] = c
        syz = [type(rows[0][0])(ring, t) for t in col]
        # composition must vanish exactly
        for i in range(nrows):
            acc = ring.zero()
            for j in range(ncols):
                acc = acc + rows[i][j] * syz[j]
            assert acc.is_zero(), "syzygy does not compose to zero"
        out.append(syz)
    return out
