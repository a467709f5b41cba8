"""Brute-force graded linear algebra, independent of the package under test.

Polynomials are parsed and multiplied by sympy; graded pieces of modules are
finite-dimensional vector spaces over GF(p) handled by plain row reduction.
A module is (shifts, relation columns) where each column is a list of
polynomial strings, one per generator; f * e_i is added automatically.
"""

from itertools import combinations_with_replacement

import sympy

P = 32003


def rank_mod_p(rows, p=P):
    rows = [dict(r) for r in rows if r]
    rank = 0
    pivots = {}
    for r in rows:
        r = {k: v % p for k, v in r.items() if v % p}
        while r:
            col = min(r)
            if col not in pivots:
                inv = pow(r[col], -1, p)
                pivots[col] = {k: v * inv % p for k, v in r.items()}
                rank += 1
                break
            c = r[col]
            for k, v in pivots[col].items():
                nv = (r.get(k, 0) - c * v) % p
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    return rank


class Ring:
    def __init__(self, names, f=None, p=P):
        self.syms = sympy.symbols(names)
        if not isinstance(self.syms, tuple):
            self.syms = (self.syms,)
        self.n = len(self.syms)
        self.p = p
        self.f = self.poly(f) if f else None

    def poly(self, text):
        return sympy.Poly(sympy.sympify(text), *self.syms, modulus=self.p)

    def monomials(self, d):
        if d < 0:
            return []
        out = []
        for combo in combinations_with_replacement(range(self.n), d):
            e = [0] * self.n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
        return out

    def mono_poly(self, e):
        return sympy.Poly(sympy.Mul(*[s ** k for s, k in zip(self.syms, e)]), *self.syms, modulus=self.p)

    def degree(self, poly):
        return poly.total_degree() if not poly.is_zero else None


class Module:
    """coker of relation columns in a free module with given shifts."""

    def __init__(self, ring, shifts, columns=()):
        self.ring = ring
        self.shifts = list(shifts)
        self.columns = [[ring.poly(e) if isinstance(e, str) else e for e in col] for col in columns]
        if ring.f is not None:
            for i in range(len(shifts)):
                col = [ring.poly("0")] * len(shifts)
                col[i] = ring.f
                self.columns.append(col)

    def basis(self, d):
        return [(i, m) for i, s in enumerate(self.shifts) for m in self.ring.monomials(d - s)]

    def _vec(self, polys, index):
        row = {}
        for i, poly in enumerate(polys):
            for mon, c in poly.terms():
                if poly.is_zero:
                    continue
                row[index[(i, tuple(mon))]] = int(c) % self.ring.p
        return row

    def column_degree(self, col):
        for i, e in enumerate(col):
            if not e.is_zero:
                return e.total_degree() + self.shifts[i]
        return None

    def relation_rows(self, d):
        index = {b: k for k, b in enumerate(self.basis(d))}
        rows = []
        for col in self.columns:
            cd = self.column_degree(col)
            if cd is None or cd > d:
                continue
            for m in self.ring.monomials(d - cd):
                mp = self.ring.mono_poly(m)
                rows.append(self._vec([e * mp for e in col], index))
        return rows, index

    def dim(self, d):
        rows, index = self.relation_rows(d)
        return len(index) - rank_mod_p(rows, self.ring.p)


def image_rank(src, tgt, matrix, d):
    """rank of the induced map src_d -> tgt_d; matrix[i][j] = image of src gen j in tgt comp i."""
    ring = src.ring
    rel_rows, index = tgt.relation_rows(d)
    img = []
    for j, s in enumerate(src.shifts):
        for m in ring.monomials(d - s):
            mp = ring.mono_poly(m)
            img.append(tgt._vec([ring.poly(matrix[i][j]) * mp if isinstance(matrix[i][j], str)
                                 else matrix[i][j] * mp for i in range(len(tgt.shifts))], index))
    return rank_mod_p(rel_rows + img, ring.p) - rank_mod_p(rel_rows, ring.p)


def homology_dim(C_in, C_mid, C_out, d_in, d_out, d):
    """dim of ker(C_mid -> C_out) / im(C_in -> C_mid) in degree d; None for absent ends."""
    mid = C_mid.dim(d)
    rk_out = image_rank(C_mid, C_out, d_out, d) if C_out is not None else 0
    rk_in = image_rank(C_in, C_mid, d_in, d) if C_in is not None else 0
    return mid - rk_out - rk_in


def tensor_with(ring, F_shifts, N):
    """F ⊗ N for a free F: the module N^rank with shifted copies."""
    shifts = [a + b for a in F_shifts for b in N.shifts]
    cols = []
    r = len(N.shifts)
    zero = ring.poly("0")
    for a in range(len(F_shifts)):
        for col in N.columns[: len(N.columns) - (len(N.shifts) if ring.f is not None else 0)]:
            c = [zero] * (len(F_shifts) * r)
            for l, e in enumerate(col):
                c[a * r + l] = e
            cols.append(c)
    return Module(ring, shifts, cols)


def tensor_matrix(ring, A, rN):
    """A ⊗ 1 for a matrix given as rows of strings."""
    zero = ring.poly("0")
    rows, cols = len(A), len(A[0])
    out = [[zero] * (cols * rN) for _ in range(rows * rN)]
    for i in range(rows):
        for j in range(cols):
            for l in range(rN):
                out[i * rN + l][j * rN + l] = ring.poly(A[i][j])
    return out
