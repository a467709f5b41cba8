"""Hypersurface rings R = S/(f) and graded modules presented over them.

A module over R is stored as a presentation ``F1 -> F0 -> M -> 0`` whose
matrix entries are canonical lifts to S (normal forms modulo f).  Every
computation is carried out over S by adding the columns ``f * e_i`` to the
relations, so a single Gröbner engine serves both rings.  When ``f`` is
None the "hypersurface" is the polynomial ring S itself.

Vectors of free modules follow the encoding of :mod:`hyperhom.kernel.groebner`:
dicts ``{(component, monomial): coefficient}``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

from .kernel.groebner import (
    GroebnerEngine,
    InhomogeneousError,
    Lifter,
    ModuleOrder,
    kernel_mod,
    minimal_generators,
    vec_axpy,
    vec_degree,
    vec_mul_poly,
)
from .kernel.hilbert import HilbertSeries
from .kernel.polynomial import (
    PolyRing,
    Polynomial,
    grevlex_rank,
    is_prime,
    mon_div,
    mon_divides,
)


class RingMismatch(ValueError):
    pass


class HypersurfaceRing:
    """R = S/(f) for a homogeneous f of positive degree, or S when f is None."""

    def __init__(self, ambient: PolyRing, f: Polynomial | None):
        if f is not None:
            if f.ring != ambient:
                raise RingMismatch("relation lives in another ring")
            if f.is_zero():
                raise ValueError("the relation f must be nonzero")
            if not f.is_homogeneous():
                raise InhomogeneousError(f"relation {f} is not homogeneous")
            if f.degree < 1:
                raise ValueError("the relation f must have positive degree")
            lead = f.leading_monomial()
            f = f.scale(pow(f.terms[lead], -1, ambient.p))
        self.ambient = ambient
        self.f = f
        self._key = (ambient.variables, ambient.p, None if f is None else frozenset(f.terms.items()))

    def __eq__(self, other):
        return isinstance(other, HypersurfaceRing) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        vars_ = ",".join(self.ambient.variables)
        if self.f is None:
            return f"GF({self.p})[{vars_}]"
        return f"GF({self.p})[{vars_}]/({self.f})"

    @property
    def p(self) -> int:
        return self.ambient.p

    @property
    def nvars(self) -> int:
        return self.ambient.nvars

    @property
    def dim(self) -> int:
        return self.nvars - (0 if self.f is None else 1)

    @property
    def is_regular(self) -> bool:
        return self.f is None

    @property
    def f_degree(self) -> int:
        return 0 if self.f is None else self.f.degree

    @property
    def one(self) -> tuple:
        return self.ambient.one_mon

    def parse(self, text: str) -> Polynomial:
        return self.ambient.parse(text)

    def ambient_ring(self) -> "HypersurfaceRing":
        return HypersurfaceRing(self.ambient, None)

    @cached_property
    def _f_lead(self):
        return self.f.leading_monomial()

    # -- reduction modulo f ------------------------------------------------
    def reduce_poly(self, terms: dict) -> dict:
        """Normal form of a polynomial (dict) modulo f; the canonical lift."""
        if self.f is None or not terms:
            return terms
        return self._divide(terms)[1]

    def divide_exact(self, terms: dict) -> dict:
        """The quotient terms/f; raises if f does not divide."""
        q, r = self._divide(terms)
        if r:
            raise ArithmeticError("polynomial is not divisible by f")
        return q

    def _divide(self, terms: dict):
        p = self.p
        lead = self._f_lead
        ft = self.f.terms
        v = dict(terms)
        q: dict = {}
        r: dict = {}
        while v:
            m = min(v, key=grevlex_rank)
            c = v.pop(m)
            if mon_divides(lead, m):
                s = mon_div(m, lead)
                q[s] = (q.get(s, 0) + c) % p
                for fm, fc in ft.items():
                    if fm == lead:
                        continue
                    key = tuple(x + y for x, y in zip(fm, s))
                    new = (v.get(key, 0) - c * fc) % p
                    if new:
                        v[key] = new
                    else:
                        v.pop(key, None)
            else:
                r[m] = c
        return {m: c for m, c in q.items() if c}, r

    def reduce_vec(self, vec: dict) -> dict:
        if self.f is None or not vec:
            return vec
        by_comp: dict = {}
        for (comp, m), c in vec.items():
            by_comp.setdefault(comp, {})[m] = c
        out = {}
        for comp, poly in by_comp.items():
            for m, c in self.reduce_poly(poly).items():
                out[(comp, m)] = c
        return out

    def f_relations(self, rank: int) -> list[dict]:
        """The columns f * e_i of S^rank (empty over S)."""
        if self.f is None:
            return []
        return [{(i, m): c for m, c in self.f.terms.items()} for i in range(rank)]

    def polys_to_vec(self, polys) -> dict:
        out = {}
        for i, poly in enumerate(polys):
            if isinstance(poly, str):
                poly = self.parse(poly)
            for m, c in poly.terms.items():
                out[(i, m)] = c
        return out


def define_hypersurface(p: int, variables, f: str | Polynomial | None) -> HypersurfaceRing:
    """Ring handle for S/(f) with S = GF(p)[variables]."""
    if not is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    ambient = PolyRing(tuple(variables), p)
    if f is None:
        return HypersurfaceRing(ambient, None)
    if isinstance(f, str):
        f = ambient.parse(f)
    return HypersurfaceRing(ambient, f)


def polynomial_ring(p: int, variables) -> HypersurfaceRing:
    return HypersurfaceRing(PolyRing(tuple(variables), p), None)


def check_isolated_singularity(ring: HypersurfaceRing) -> bool:
    """Jacobian criterion: S/(f, df/dx_i) has Krull dimension <= 0."""
    if ring.f is None:
        return True
    f = ring.f
    if any(e % ring.p == 0 for m in f.terms for e in m if e):
        warnings.warn(
            f"characteristic {ring.p} divides an exponent of f; the Jacobian test may be unreliable",
            stacklevel=2,
        )
    gens = [f] + [f.derivative(i) for i in range(ring.nvars)]
    eng = GroebnerEngine(ModuleOrder([0]), ring.p)
    for g in gens:
        if not g.is_zero():
            eng.add({(0, m): c for m, c in g.terms.items()})
    eng.compute()
    hs = HilbertSeries.from_initial_module(eng.lead_monomials(), [0], ring.nvars)
    return hs.dimension() <= 0


# -- modules -----------------------------------------------------------------

class GradedModule:
    """coker(F1 -> F0) over a hypersurface ring.

    ``shifts[i]`` is the degree of the i-th generator (F0 = sum R(-shifts[i]));
    ``relations`` are homogeneous columns of F0 with degrees ``rel_degrees``.
    """

    def __init__(self, ring: HypersurfaceRing, shifts, relations=(), rel_degrees=None, minimal=False):
        self.ring = ring
        self.shifts = tuple(shifts)
        rels = []
        degs = []
        given = list(rel_degrees) if rel_degrees is not None else None
        for k, col in enumerate(relations):
            col = ring.reduce_vec(col)
            if not col:
                continue
            d = vec_degree(col, self.shifts)
            if given is not None and given[k] != d:
                raise InhomogeneousError("relation degree does not match its entries")
            rels.append(col)
            degs.append(d)
        self.relations = tuple(rels)
        self.rel_degrees = tuple(degs)
        self.minimal = minimal

    def __repr__(self):
        return f"GradedModule(rank={self.rank}, relations={len(self.relations)}, over {self.ring!r})"

    @property
    def rank(self) -> int:
        return len(self.shifts)

    @property
    def p(self) -> int:
        return self.ring.p

    def s_relations(self) -> list[dict]:
        """Relations of M viewed as an S-module (adds f * e_i)."""
        return list(self.relations) + self.ring.f_relations(self.rank)

    @cached_property
    def hilbert_series(self) -> HilbertSeries:
        eng = GroebnerEngine(ModuleOrder(self.shifts), self.p)
        for r in self.s_relations():
            eng.add(r)
        eng.compute()
        return HilbertSeries.from_initial_module(eng.lead_monomials(), self.shifts, self.ring.nvars)

    def is_zero(self) -> bool:
        return self.rank == 0 or self.hilbert_series.is_zero()

    def presentation(self) -> list[list[Polynomial]]:
        """The relation matrix as rows of polynomials."""
        amb = self.ring.ambient
        rows = [[amb.zero() for _ in self.relations] for _ in self.shifts]
        for j, col in enumerate(self.relations):
            buckets: dict = {}
            for (i, m), c in col.items():
                buckets.setdefault(i, {})[m] = c
            for i, terms in buckets.items():
                rows[i][j] = Polynomial(amb, terms)
        return rows

    def over_ambient(self) -> "GradedModule":
        """The same module regarded as an S-module."""
        return GradedModule(self.ring.ambient_ring(), self.shifts, self.s_relations())

    def twist(self, k: int) -> "GradedModule":
        """M(k): every generator degree drops by k."""
        return GradedModule(self.ring, [s - k for s in self.shifts], self.relations,
                            [d - k for d in self.rel_degrees], self.minimal)

    @cached_property
    def _cache(self) -> dict:
        return {}


def free_module(ring: HypersurfaceRing, shifts) -> GradedModule:
    return GradedModule(ring, shifts, (), minimal=True)


def cokernel(ring: HypersurfaceRing, rows, shifts=None) -> GradedModule:
    """Module presented by a matrix given as rows of polynomials or strings."""
    rows = [[ring.parse(e) if isinstance(e, str) else e for e in row] for row in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    if shifts is None:
        shifts = [0] * nrows
    cols = []
    for j in range(ncols):
        cols.append(ring.polys_to_vec([rows[i][j] for i in range(nrows)]))
    return GradedModule(ring, shifts, cols)


def quotient_module(ring: HypersurfaceRing, gens) -> GradedModule:
    """R/I for the ideal generated by ``gens``."""
    return cokernel(ring, [list(gens)], [0])


def residue_field(ring: HypersurfaceRing) -> GradedModule:
    return quotient_module(ring, ring.ambient.gens())


def direct_sum(*modules: GradedModule) -> GradedModule:
    ring = modules[0].ring
    shifts = []
    rels = []
    degs = []
    offset = 0
    for M in modules:
        if M.ring != ring:
            raise RingMismatch("direct sum of modules over different rings")
        shifts.extend(M.shifts)
        for col, d in zip(M.relations, M.rel_degrees):
            rels.append({(c + offset, m): v for (c, m), v in col.items()})
            degs.append(d)
        offset += M.rank
    return GradedModule(ring, shifts, rels, degs)


def syzygy_over_R(ring: HypersurfaceRing, cols, col_degrees, shifts) -> list[tuple[dict, int]]:
    """Minimal generators of the kernel of the R-linear map given by ``cols``.

    The matrix is lifted to S, augmented by ``f * e_i`` and its S-syzygies are
    projected back; generators are pruned modulo ``f * S^m``.
    """
    p = ring.p
    m = len(cols)
    ker = kernel_mod(cols, col_degrees, shifts, ring.f_relations(len(shifts)), p, ring.nvars)
    vecs = [ring.reduce_vec(v) for v, _ in ker]
    degs = [d for _, d in ker]
    forced = ring.f_relations(m)
    keep = minimal_generators(vecs, degs, col_degrees, p, forced=forced)
    out = [(vecs[k], degs[k]) for k in keep]
    out.sort(key=lambda vd: (vd[1], _vec_sort_key(vd[0], col_degrees)))
    return out


def _vec_sort_key(vec, shifts):
    order = ModuleOrder(shifts)
    return sorted(order.rank(t) for t in vec)


def ideal_module(ring: HypersurfaceRing, gens) -> GradedModule:
    """The ideal generated by ``gens`` as a module, presented by its syzygies."""
    polys = [ring.parse(g) if isinstance(g, str) else g for g in gens]
    degs = []
    cols = []
    for g in polys:
        if not g.is_homogeneous():
            raise InhomogeneousError(f"generator {g} is not homogeneous")
        red = ring.reduce_poly(g.terms)
        if not red:
            raise ValueError(f"generator {g} is zero in the ring")
        degs.append(g.degree)
        cols.append({(0, m): c for m, c in red.items()})
    syz = syzygy_over_R(ring, cols, degs, [0])
    M = GradedModule(ring, degs, [v for v, _ in syz], [d for _, d in syz])
    return minimal_presentation(M)


def minimal_presentation(M: GradedModule) -> GradedModule:
    """Prune unit entries and redundant relations."""
    ring = M.ring
    p = ring.p
    one = ring.one
    shifts = list(M.shifts)
    cols = [dict(c) for c in M.relations]
    while True:
        pivot = None
        for i in range(len(shifts)):
            for j, col in enumerate(cols):
                if (i, one) in col:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        i, j = pivot
        pc = cols[j]
        inv = pow(pc[(i, one)], -1, p)
        for l, col in enumerate(cols):
            if l == j:
                continue
            a = {m: c for (comp, m), c in col.items() if comp == i}
            if a:
                vec_axpy(col, p - 1, vec_mul_poly(pc, {m: c * inv % p for m, c in a.items()}, p), p)
        del cols[j]
        del shifts[i]
        new_cols = []
        for col in cols:
            nc = {}
            for (comp, m), c in col.items():
                if comp == i:
                    raise AssertionError("unit elimination left a stray entry")
                nc[(comp - 1 if comp > i else comp, m)] = c
            nc = ring.reduce_vec(nc)
            if nc:
                new_cols.append(nc)
        cols = new_cols
    degs = [vec_degree(c, shifts) for c in cols]
    keep = minimal_generators(cols, degs, shifts, p, forced=ring.f_relations(len(shifts)))
    return GradedModule(ring, shifts, [cols[k] for k in keep], [degs[k] for k in keep], minimal=True)


# -- subquotients --------------------------------------------------------------

class Subquotient:
    """(A + B) / B inside a graded free S-module with ``shifts``.

    ``numerators`` None means A is the whole free module.  ``denominators``
    must already contain ``f * e_i`` when the module is an R-module.
    """

    def __init__(self, ring: HypersurfaceRing, shifts, numerators, denominators):
        self.ring = ring
        self.shifts = tuple(shifts)
        self.numerators = None if numerators is None else [v for v in numerators if v]
        self.denominators = [v for v in denominators if v]

    def _series(self, vecs) -> HilbertSeries:
        eng = GroebnerEngine(ModuleOrder(self.shifts), self.ring.p)
        for v in vecs:
            eng.add(v)
        eng.compute()
        return HilbertSeries.from_initial_module(eng.lead_monomials(), self.shifts, self.ring.nvars)

    @cached_property
    def hilbert_series(self) -> HilbertSeries:
        whole = self._series(self.denominators)
        if self.numerators is None:
            return whole
        both = self._series(self.numerators + self.denominators)
        return whole - both

    def is_zero(self) -> bool:
        return self.hilbert_series.is_zero()

    def to_module(self) -> tuple[GradedModule, list[dict]]:
        """A minimal presentation plus the generator vectors it uses."""
        ring = self.ring
        p = ring.p
        if self.numerators is None:
            nums = [{(i, ring.one): 1} for i in range(len(self.shifts))]
        else:
            nums = self.numerators
        degs = [vec_degree(v, self.shifts) for v in nums]
        keep = minimal_generators(nums, degs, self.shifts, p, forced=self.denominators)
        gens = [nums[k] for k in keep]
        gdegs = [degs[k] for k in keep]
        ker = kernel_mod(gens, gdegs, self.shifts, self.denominators, p, ring.nvars)
        M = GradedModule(ring, gdegs, [v for v, _ in ker])
        Mmin = minimal_presentation(M)
        if Mmin.rank != len(gens):
            raise AssertionError("minimal generators admitted a unit relation")
        return Mmin, gens


# -- homomorphisms ----------------------------------------------------------------

@dataclass
class ModuleHomomorphism:
    """A degree-``degree`` map given on covers: column j is the image of source generator j."""

    source: GradedModule
    target: GradedModule
    matrix: list
    degree: int = 0

    def _target_series_engine(self, extra=()):
        eng = GroebnerEngine(ModuleOrder(self.target.shifts), self.target.p)
        for r in list(self.target.s_relations()) + list(extra):
            eng.add(r)
        eng.compute()
        return eng

    def is_well_defined(self) -> bool:
        """Every source relation maps into the target relations."""
        eng = self._target_series_engine()
        p = self.source.p
        for col in self.source.s_relations():
            img: dict = {}
            for (j, m), c in col.items():
                vec_axpy(img, 1, vec_mul_poly(self.matrix[j], {m: c}, p), p)
            if eng.reduce(img):
                return False
        return True

    def kernel(self) -> Subquotient:
        S, T = self.source, self.target
        degs = [s + self.degree for s in S.shifts]
        ker = kernel_mod(self.matrix, degs, T.shifts, T.s_relations(), S.p, S.ring.nvars)
        return Subquotient(S.ring, S.shifts, [v for v, _ in ker], S.s_relations())

    def image(self) -> Subquotient:
        T = self.target
        return Subquotient(T.ring, T.shifts, list(self.matrix), T.s_relations())

    def cokernel(self) -> GradedModule:
        T = self.target
        return GradedModule(T.ring, T.shifts, list(T.relations) + [c for c in self.matrix if c])

    def is_injective(self) -> bool:
        return self.kernel().is_zero()

    def is_surjective(self) -> bool:
        return self.cokernel().is_zero()

    def lift_through(self, vec: dict):
        """Coefficients c with vec = sum c_j matrix_j modulo target relations."""
        T = self.target
        degs = [s + self.degree for s in self.source.shifts]
        lifter = Lifter(self.matrix, degs, T.shifts, T.s_relations(), T.p, T.ring.nvars)
        return lifter.lift(vec)


def _blocks(nblocks: int, block_vecs, block_size: int) -> list[dict]:
    """Copies of ``block_vecs`` (vectors of S^block_size) placed in each block."""
    out = []
    for a in range(nblocks):
        off = a * block_size
        for v in block_vecs:
            out.append({(c + off, m): x for (c, m), x in v.items()})
    return out


def tensor_product(M: GradedModule, N: GradedModule) -> GradedModule:
    if M.ring != N.ring:
        raise RingMismatch("tensor product over different rings")
    rN = N.rank
    shifts = [a + b for a in M.shifts for b in N.shifts]
    rels = []
    for col in M.relations:
        for l in range(rN):
            rels.append({(a * rN + l, m): c for (a, m), c in col.items()})
    rels.extend(_blocks(M.rank, N.relations, rN))
    return minimal_presentation(GradedModule(M.ring, shifts, rels))


def hom_presentation(M: GradedModule, N: GradedModule):
    """Hom(M, N) as a subquotient of Hom(F0_M, F0_N)."""
    if M.ring != N.ring:
        raise RingMismatch("Hom between modules over different rings")
    ring = M.ring
    rN = N.rank
    shifts = [sn - sm for sm in M.shifts for sn in N.shifts]
    # phi -> phi o rho for each relation column rho of M
    tgt_shifts = [sn - d for d in M.rel_degrees for sn in N.shifts]
    cols = []
    for a in range(M.rank):
        for l in range(rN):
            img = {}
            for b, rho in enumerate(M.relations):
                for (comp, m), c in rho.items():
                    if comp == a:
                        img[(b * rN + l, m)] = c
            cols.append(img)
    tgt_rels = _blocks(len(M.relations), N.relations, rN) + ring.f_relations(len(tgt_shifts))
    ker = kernel_mod(cols, shifts, tgt_shifts, tgt_rels, ring.p, ring.nvars)
    denominators = _blocks(M.rank, N.relations, rN) + ring.f_relations(len(shifts))
    return Subquotient(ring, shifts, [v for v, _ in ker], denominators)


def hom_module(M: GradedModule, N: GradedModule) -> GradedModule:
    """Hom_R(M, N) with its natural grading."""
    return hom_presentation(M, N).to_module()[0]


def dual_module(M: GradedModule) -> GradedModule:
    return hom_module(M, free_module(M.ring, [0]))
