"""Minimal graded free resolutions, Betti tables and matrix factorizations.

Over S a resolution is finite (Hilbert syzygy theorem).  Over R = S/(f) it is
computed up to a bound by iterating :func:`syzygy_over_R`; past a point it
becomes 2-periodic and its consecutive lifted maps (A, B) satisfy
A*B = B*A = f*I.  That identity, checked exactly on lifts to S, is the only
periodicity certificate used here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .kernel.groebner import vec_axpy, vec_mul_mon
from .rings import GradedModule, HypersurfaceRing, minimal_presentation, syzygy_over_R


class PeriodicityNotFound(RuntimeError):
    pass


class MFExtractionError(RuntimeError):
    pass


def default_bound(ring: HypersurfaceRing) -> int:
    return 2 * ring.dim + 6


@dataclass
class FreeResolution:
    """F_bound -> ... -> F_1 -> F_0 (-> M).

    ``maps[i-1]`` is d_i as a list of columns (vectors of F_{i-1});
    ``shifts[i]`` are the generator degrees of F_i.  ``finite`` is True when
    the resolution provably stops (the next syzygy module is zero).
    """

    ring: HypersurfaceRing
    over: str
    maps: list
    shifts: list
    bound: int
    finite: bool
    minimal: bool = True

    @property
    def length(self) -> int:
        return len(self.maps)

    def rank(self, i: int) -> int:
        if i < 0:
            return 0
        if i < len(self.shifts):
            return len(self.shifts[i])
        if self.finite:
            return 0
        raise IndexError(f"resolution only computed through F_{len(self.shifts) - 1}")

    def differential(self, i: int) -> list:
        """d_i : F_i -> F_{i-1}; empty list of columns beyond a finite end."""
        if i <= 0:
            return []
        if i <= len(self.maps):
            return self.maps[i - 1]
        if self.finite:
            return []
        raise IndexError(f"resolution only computed through d_{len(self.maps)}")

    def shift(self, i: int) -> tuple:
        if i < 0:
            return ()
        if i < len(self.shifts):
            return self.shifts[i]
        if self.finite:
            return ()
        raise IndexError(f"resolution only computed through F_{len(self.shifts) - 1}")

    def covers(self, i: int) -> bool:
        """True if F_i and d_i are known."""
        return self.finite or i < len(self.shifts)

    def betti_numbers(self) -> list[int]:
        return [len(s) for s in self.shifts]

    def entries(self, i: int):
        """d_i as rows of polynomials."""
        rows_mod = GradedModule(self.ring if self.over == "R" else self.ring.ambient_ring(),
                                self.shift(i - 1), self.differential(i))
        return rows_mod.presentation()


def _base_ring(M: GradedModule, over: str) -> HypersurfaceRing:
    if over == "R":
        return M.ring
    if over == "S":
        return M.ring.ambient_ring()
    raise ValueError("over must be 'R' or 'S'")


def resolve(M: GradedModule, over: str = "R", bound: int | None = None) -> FreeResolution:
    """Minimal free resolution of M over R (truncated at ``bound``) or over S.

    Results are memoized on the module and extended on demand.
    """
    base = _base_ring(M, over)
    if bound is None:
        # one extra step lets the loop observe termination
        bound = base.nvars + 1 if over == "S" else default_bound(M.ring)
    if bound < 1:
        raise ValueError("bound must be >= 1")
    key = ("resolution", over)
    res = M._cache.get(key)
    if res is None:
        Mp = M if over == "R" else M.over_ambient()
        Mmin = minimal_presentation(Mp)
        shifts = [Mmin.shifts]
        maps = []
        finite = False
        if Mmin.relations:
            maps.append(list(Mmin.relations))
            shifts.append(Mmin.rel_degrees)
        else:
            finite = True
        res = FreeResolution(base, over, maps, shifts, bound, finite)
        M._cache[key] = res
    while not res.finite and len(res.maps) < bound:
        syz = syzygy_over_R(base, res.maps[-1], list(res.shifts[-1]), list(res.shifts[-2]))
        if not syz:
            res.finite = True
            break
        res.maps.append([v for v, _ in syz])
        res.shifts.append(tuple(d for _, d in syz))
    if over == "S" and not res.finite:
        raise AssertionError("resolution over S exceeded the number of variables")
    n = min(bound, len(res.maps))
    finite = res.finite and n == len(res.maps)
    return FreeResolution(base, over, res.maps[:n], res.shifts[: n + 1], bound, finite)


def betti_table(res: FreeResolution) -> dict[tuple[int, int], int]:
    """{(homological index, internal degree): rank}."""
    if not res.minimal:
        raise ValueError("Betti tables are read from minimal resolutions only")
    table: dict = {}
    for i, sh in enumerate(res.shifts):
        for d in sh:
            table[(i, d)] = table.get((i, d), 0) + 1
    return dict(sorted(table.items()))


def format_betti_table(table: dict) -> str:
    """Macaulay2-style display: rows are degree - index."""
    if not table:
        return "(zero module)"
    cols = sorted({i for i, _ in table})
    rows = sorted({d - i for i, d in table})
    width = max(len(str(v)) for v in table.values()) + 1
    lines = ["      " + "".join(f"{i:>{width + 1}}" for i in cols)]
    lines.append("total:" + "".join(f"{sum(v for (i2, _), v in table.items() if i2 == i):>{width + 1}}" for i in cols))
    for r in rows:
        cells = []
        for i in cols:
            v = table.get((i, r + i), 0)
            cells.append(f"{(v if v else '.'):>{width + 1}}")
        lines.append(f"{r:>5}:" + "".join(cells))
    return "\n".join(lines)


# -- matrix helpers (matrices are lists of columns) ---------------------------

def mat_mul(A: list, B: list, p: int) -> list:
    out = []
    for bcol in B:
        acc: dict = {}
        for (k, m), c in bcol.items():
            vec_axpy(acc, 1, vec_mul_mon(A[k], m, c, p), p)
        out.append(acc)
    return out


def scalar_identity(n: int, poly: dict) -> list:
    return [{(j, m): c for m, c in poly.items()} for j in range(n)]


def _divide_columns(ring: HypersurfaceRing, M: list) -> list:
    out = []
    for col in M:
        by_comp: dict = {}
        for (i, m), c in col.items():
            by_comp.setdefault(i, {})[m] = c
        q = {}
        for i, poly in by_comp.items():
            for m, c in ring.divide_exact(poly).items():
                q[(i, m)] = c
        out.append(q)
    return out


def graded_inverse(U: list, n: int, p: int, nvars: int):
    """Inverse of a square graded degree-0 polynomial matrix, or None.

    Gauss-Jordan elimination using constant pivots only; for a graded matrix
    this succeeds exactly when the matrix is invertible over S.
    """
    rows = [dict() for _ in range(n)]
    for j, col in enumerate(U):
        for (i, m), c in col.items():
            rows[i].setdefault(j, {})[m] = c
    one = (0,) * nvars
    inv_rows = [{i: {one: 1}} for i in range(n)]

    def row_axpy(dst, c_poly, src):
        # dst += c_poly * src  (rows are {col: poly})
        for j, poly in src.items():
            acc = dst.setdefault(j, {})
            for m1, c1 in poly.items():
                for m2, c2 in c_poly.items():
                    mm = tuple(a + b for a, b in zip(m1, m2))
                    s = (acc.get(mm, 0) + c1 * c2) % p
                    if s:
                        acc[mm] = s
                    else:
                        acc.pop(mm, None)
            if not acc:
                del dst[j]

    for col in range(n):
        piv = None
        for r in range(col, n):
            e = rows[r].get(col)
            if e and len(e) == 1 and one in e:
                piv = r
                break
        if piv is None:
            return None
        rows[col], rows[piv] = rows[piv], rows[col]
        inv_rows[col], inv_rows[piv] = inv_rows[piv], inv_rows[col]
        c = pow(rows[col][col][one], -1, p)
        rows[col] = {j: {m: v * c % p for m, v in poly.items()} for j, poly in rows[col].items()}
        inv_rows[col] = {j: {m: v * c % p for m, v in poly.items()} for j, poly in inv_rows[col].items()}
        for r in range(n):
            if r == col:
                continue
            e = rows[r].get(col)
            if e:
                neg = {m: (p - v) % p for m, v in e.items()}
                row_axpy(rows[r], neg, rows[col])
                row_axpy(inv_rows[r], neg, inv_rows[col])
    cols = [dict() for _ in range(n)]
    for i, r in enumerate(inv_rows):
        for j, poly in r.items():
            for m, c in poly.items():
                cols[j][(i, m)] = c
    return cols


@dataclass
class MatrixFactorization:
    """Square matrices A: F1 -> F0 and B: F0(-deg f) -> F1 with AB = BA = f*I."""

    ring: HypersurfaceRing
    A: list
    B: list
    row_shifts: tuple
    mid_shifts: tuple
    end_shifts: tuple
    index: int = 1

    @property
    def size(self) -> int:
        return len(self.row_shifts)

    def verify(self) -> bool:
        p = self.ring.p
        n = self.size
        if len(self.A) != n or len(self.B) != n:
            return False
        fI = scalar_identity(n, self.ring.f.terms)
        return mat_mul(self.A, self.B, p) == fI and mat_mul(self.B, self.A, p) == fI

    def cokernel(self) -> GradedModule:
        """coker(A) as an R-module."""
        return GradedModule(self.ring, self.row_shifts, self.A)

    def rows(self, which: str = "A"):
        mat = self.A if which == "A" else self.B
        shifts = self.row_shifts if which == "A" else self.mid_shifts
        return GradedModule(self.ring.ambient_ring(), shifts, mat).presentation()


def _normalized_pair(ring: HypersurfaceRing, dA: list, dB: list, n: int):
    """Return B' = dB * U^{-1} where dA*dB = f*U, or None if that fails."""
    p = ring.p
    prod = mat_mul(dA, dB, p)
    try:
        U = _divide_columns(ring, prod)
    except ArithmeticError:
        return None
    Uinv = graded_inverse(U, n, p, ring.nvars)
    if Uinv is None:
        return None
    return mat_mul(dB, Uinv, p)


def _try_extract(res: FreeResolution, at: int):
    ring = res.ring
    if ring.f is None or at < 1 or at + 1 > res.length:
        return None
    n = res.rank(at)
    if res.rank(at - 1) != n or res.rank(at + 1) != n or n == 0:
        return None
    dA = res.differential(at)
    dB = res.differential(at + 1)
    Bn = _normalized_pair(ring, dA, dB, n)
    if Bn is None:
        return None
    d = ring.f_degree
    mf = MatrixFactorization(ring, list(dA), Bn, tuple(res.shift(at - 1)), tuple(res.shift(at)),
                             tuple(s + d for s in res.shift(at - 1)), at)
    return mf if mf.verify() else None


def extract_mf(res: FreeResolution, at: int) -> MatrixFactorization:
    """Matrix factorization from the lifted maps d_at, d_{at+1}; retries at at+1."""
    for k in (at, at + 1):
        mf = _try_extract(res, k)
        if mf is not None:
            return mf
    raise MFExtractionError(f"no matrix factorization identity at index {at} or {at + 1}")


@dataclass(frozen=True)
class PeriodicityCertificate:
    onset: int
    period: int
    verified_through: int


def detect_periodicity(res: FreeResolution) -> PeriodicityCertificate:
    """Smallest onset past which every consecutive pair is a matrix factorization."""
    if res.over != "R" or res.ring.f is None:
        raise ValueError("periodicity is detected on resolutions over a hypersurface")
    if res.finite:
        L = res.length
        return PeriodicityCertificate(0 if L == 0 else L + 1, 1, res.bound)
    if res.length < res.ring.dim + 4:
        raise ValueError(f"bound {res.length} too small; need at least dim R + 4 = {res.ring.dim + 4}")
    last = res.length - 1
    onset = None
    mf_at = None
    for i in range(last, 0, -1):
        mf = _try_extract(res, i)
        if mf is None:
            break
        onset, mf_at = i, mf
    if onset is None:
        raise PeriodicityNotFound(f"no periodicity certified within bound {res.length}")
    period = 1 if (mf_at.A == mf_at.B and mf_at.mid_shifts == mf_at.end_shifts) else 2
    return PeriodicityCertificate(onset, period, res.length)
