"""Hochster's theta pairing, rigidity, pushforwards and the depth/dimension checks.

Every check returns a :class:`CheckReport` whose verdict is one of
``holds``, ``violated`` or ``not-applicable``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .homology import (
    depth, ext_subquotient, f_index, krull_dim, length, tor_subquotient,
)
from .kernel.groebner import GroebnerEngine, Lifter, ModuleOrder
from .resolution import PeriodicityNotFound, default_bound, detect_periodicity, mat_mul, resolve
from .rings import (
    GradedModule, ModuleHomomorphism, RingMismatch, Subquotient, free_module, hom_presentation,
    ideal_module, minimal_presentation, quotient_module, tensor_product,
)

HOLDS = "holds"
VIOLATED = "violated"
NOT_APPLICABLE = "not-applicable"


class ThetaUndefined(ValueError):
    pass


class PushforwardUndefined(ValueError):
    pass


@dataclass
class CheckReport:
    name: str
    verdict: str
    hypotheses: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict != VIOLATED


def _verdict(flag: bool) -> str:
    return HOLDS if flag else VIOLATED


# -- theta ----------------------------------------------------------------------

@dataclass
class ThetaReport:
    value: int
    e_used: int
    stability_pairs: list
    f_index: int


def theta(M: GradedModule, N: GradedModule, bound: int | None = None) -> ThetaReport:
    """l(Tor_{2e+2}) - l(Tor_{2e+1}), evaluated at e and e+1."""
    if M.ring != N.ring:
        raise RingMismatch("theta of modules over different rings")
    fi = f_index(M, N, bound)
    if fi is None:
        raise ThetaUndefined("Tor lengths are not eventually finite within the bound")
    e = math.ceil((M.ring.dim + 1) / 2)
    while 2 * e + 1 < fi:
        e += 1
    pairs = []
    for k in (e, e + 1):
        odd = length(tor_subquotient(M, N, 2 * k + 1))
        even = length(tor_subquotient(M, N, 2 * k + 2))
        if not (odd.finite and even.finite):
            raise ThetaUndefined(f"Tor at index {2 * k + 1} or {2 * k + 2} has infinite length")
        pairs.append((k, even.value, odd.value))
    values = {b - a for _, b, a in pairs}
    if len(values) != 1:
        raise AssertionError(f"theta is not stable across e: {pairs}")
    return ThetaReport(values.pop(), e, pairs, fi)


def chi_ambient(M: GradedModule, N: GradedModule) -> int:
    """sum (-1)^i l(Tor_i^S(M, N)) over the ambient polynomial ring."""
    if M.ring != N.ring:
        raise RingMismatch("chi of modules over different rings")
    if not length(tensor_product(M, N)).finite:
        raise ValueError("M ⊗ N does not have finite length")
    total = 0
    for i in range(M.ring.nvars + 1):
        lv = length(tor_subquotient(M, N, i, over="S"))
        if not lv.finite:
            raise AssertionError("Tor over S of a finite-length tensor product is infinite")
        total += (-1) ** i * lv.value
    return total


# -- rigidity ----------------------------------------------------------------

@dataclass
class RigidityReport:
    first_vanishing: int | None
    propagation: dict
    verdict: str
    bound: int
    counterexample: int | None = None
    vacuous: bool = False


def _periodic_bound(M: GradedModule, bound: int) -> tuple[int, bool]:
    """Index range to scan and whether periodicity covers everything beyond it."""
    res = resolve(M, "R", bound)
    if res.finite:
        return min(bound, res.length + 1), True
    if M.ring.f is None:
        return bound, False
    try:
        cert = detect_periodicity(res)
    except (PeriodicityNotFound, ValueError):
        return bound, False
    return max(bound, cert.onset + 1), True


def check_rigidity(M: GradedModule, N: GradedModule, bound: int | None = None) -> RigidityReport:
    if bound is None:
        bound = default_bound(M.ring)
    top, _ = _periodic_bound(M, bound)
    zero = {j: tor_subquotient(M, N, j).is_zero() for j in range(top + 1)}
    first = next((j for j in range(top + 1) if zero[j]), None)
    if first is None:
        # nothing vanishes, so there is nothing to propagate
        return RigidityReport(None, {}, "rigid-within-bound", top, vacuous=True)
    prop = {j: length(tor_subquotient(M, N, j)) for j in range(first, top + 1)}
    bad = next((j for j in range(first + 1, top + 1) if not zero[j]), None)
    if bad is not None:
        return RigidityReport(first, prop, f"counterexample({bad})", top, bad)
    return RigidityReport(first, prop, "rigid-within-bound", top)


def tor_vanishing(M: GradedModule, N: GradedModule, bound: int | None = None) -> tuple[bool, dict]:
    """Whether Tor_i(M, N) = 0 for every i >= 1, certified through periodicity."""
    if bound is None:
        bound = default_bound(M.ring)
    top, certified = _periodic_bound(M, bound)
    lengths = {i: length(tor_subquotient(M, N, i)) for i in range(1, top + 1)}
    return certified and all(v == 0 for v in lengths.values()), lengths


# -- short exact sequences and biadditivity -------------------------------------

def _maps_to_zero(phi: ModuleHomomorphism, cols) -> bool:
    eng = GroebnerEngine(ModuleOrder(phi.target.shifts), phi.target.p)
    for r in phi.target.s_relations():
        eng.add(r)
    eng.compute()
    return all(not eng.reduce(c) for c in cols)


@dataclass
class ShortExactSequence:
    """0 -> N1 -alpha-> N2 -beta-> N3 -> 0."""

    alpha: ModuleHomomorphism
    beta: ModuleHomomorphism

    @property
    def terms(self):
        return self.alpha.source, self.alpha.target, self.beta.target

    def certify(self) -> bool:
        """alpha injective, beta surjective, beta o alpha = 0 and Hilbert series add up."""
        a, b = self.alpha, self.beta
        if a.target is not b.source and a.target.shifts != b.source.shifts:
            return False
        if not (a.is_well_defined() and b.is_well_defined()):
            return False
        comp = mat_mul(b.matrix, a.matrix, a.source.p)
        if not _maps_to_zero(b, comp):
            return False
        if not (a.is_injective() and b.is_surjective()):
            return False
        n1, n2, n3 = self.terms
        return n2.hilbert_series == n1.hilbert_series + n3.hilbert_series


def split_sequence(N1: GradedModule, N3: GradedModule) -> ShortExactSequence:
    from .rings import direct_sum

    ring = N1.ring
    N2 = direct_sum(N1, N3)
    r1, r3 = N1.rank, N3.rank
    one = ring.one
    alpha = [{(i, one): 1} for i in range(r1)]
    beta = [{} for _ in range(r1)] + [{(i, one): 1} for i in range(r3)]
    return ShortExactSequence(ModuleHomomorphism(N1, N2, alpha), ModuleHomomorphism(N2, N3, beta))


def ideal_sequence(ring, gens) -> ShortExactSequence:
    """0 -> I -> R -> R/I -> 0 for the ideal generated by ``gens``."""
    polys = [ring.parse(g) if isinstance(g, str) else g for g in gens]
    I = ideal_module(ring, polys)
    if I.rank != len(polys):
        raise ValueError("generators of the ideal are not minimal")
    R = free_module(ring, [0])
    Q = quotient_module(ring, polys)
    alpha = [{(0, m): c for m, c in ring.reduce_poly(g.terms).items()} for g in polys]
    beta = [{(0, ring.one): 1}]
    return ShortExactSequence(ModuleHomomorphism(I, R, alpha), ModuleHomomorphism(R, Q, beta))


def maximal_ideal_sequence(ring) -> ShortExactSequence:
    """0 -> m -> R -> k -> 0."""
    return ideal_sequence(ring, ring.ambient.gens())


def theta_biadditivity_check(M: GradedModule, seq: ShortExactSequence, bound: int | None = None) -> bool:
    if not seq.certify():
        raise ValueError("the sequence is not certified exact")
    n1, n2, n3 = seq.terms
    t1, t2, t3 = (theta(M, N, bound).value for N in (n1, n2, n3))
    return t2 == t1 + t3


# -- duals, reflexivity, pushforward -------------------------------------------

@dataclass
class DualData:
    dual: GradedModule
    bidual: GradedModule
    bidual_map: ModuleHomomorphism
    reflexive: bool
    injective: bool
    lam_shifts: tuple
    evaluation: list


def _dual_data(M: GradedModule) -> DualData:
    if "dual_data" in M._cache:
        return M._cache["dual_data"]
    ring = M.ring
    R = free_module(ring, [0])
    Mstar, phis = hom_presentation(M, R).to_module()
    lam_shifts = tuple(-t for t in Mstar.shifts)
    # evaluation e_a -> (phi_k(e_a))_k inside R^lambda, which contains M**
    E = []
    for a in range(M.rank):
        col = {}
        for k, phi in enumerate(phis):
            for (comp, m), c in phi.items():
                if comp == a:
                    col[(k, m)] = c
        E.append(ring.reduce_vec(col))
    Flam = free_module(ring, lam_shifts)
    to_free = ModuleHomomorphism(M, Flam, E)
    injective = to_free.is_injective()
    hp2 = hom_presentation(Mstar, R)
    bidual, psis = hp2.to_module()
    image = Subquotient(ring, lam_shifts, E, ring.f_relations(len(lam_shifts)))
    onto = image.hilbert_series == hp2.hilbert_series
    lifter = Lifter(psis, list(bidual.shifts), list(hp2.shifts), hp2.denominators, ring.p, ring.nvars)
    cols = []
    for v in E:
        c = lifter.lift(v)
        if c is None:
            raise AssertionError("evaluation does not land in the bidual")
        cols.append(c)
    bmap = ModuleHomomorphism(M, bidual, cols)
    data = DualData(Mstar, bidual, bmap, injective and onto, injective, lam_shifts, E)
    M._cache["dual_data"] = data
    return data


def dual_and_reflexivity(M: GradedModule):
    """(M*, the natural map M -> M**, whether it is an isomorphism)."""
    d = _dual_data(M)
    return d.dual, d.bidual_map, d.reflexive


@dataclass
class PushforwardResult:
    M1: GradedModule
    lam: int
    embedding: ModuleHomomorphism
    exact: bool


def pushforward(M: GradedModule) -> PushforwardResult:
    """0 -> M -> R^lambda -> M1 -> 0, dual to a minimal cover of M*."""
    d = _dual_data(M)
    if not d.injective:
        raise PushforwardUndefined("M -> M** is not injective (M has torsion)")
    ring = M.ring
    Flam = free_module(ring, d.lam_shifts)
    emb = ModuleHomomorphism(M, Flam, d.evaluation)
    M1 = minimal_presentation(GradedModule(ring, d.lam_shifts, d.evaluation))
    exact = emb.is_injective() and Flam.hilbert_series == M.hilbert_series + M1.hilbert_series
    if not exact:
        raise AssertionError("pushforward sequence failed its exactness certificate")
    return PushforwardResult(M1, len(d.lam_shifts), emb, exact)


def is_free(M: GradedModule) -> bool:
    """Free (the zero module included) iff a minimal presentation has no relations."""
    return not minimal_presentation(M).relations


def is_mcm(M: GradedModule) -> bool:
    return not M.is_zero() and depth(M) == M.ring.dim


def verify_pushforward_properties(M: GradedModule) -> CheckReport:
    pf = pushforward(M)
    M1 = pf.M1
    dm, d1 = depth(M), depth(M1)
    free_eq = is_free(M) == is_free(M1)
    depth_ok = d1 >= dm - 1
    mcm_ok = (not is_mcm(M)) or M1.is_zero() or is_mcm(M1)
    details = {
        "lambda": pf.lam, "free(M)": is_free(M), "free(M1)": is_free(M1),
        "depth(M)": dm, "depth(M1)": d1, "mcm(M)": is_mcm(M),
        "mcm(M1)": M1.is_zero() or is_mcm(M1),
        "free_iff": _verdict(free_eq), "depth_drop": _verdict(depth_ok), "mcm_transfer": _verdict(mcm_ok),
    }
    return CheckReport("pushforward", _verdict(free_eq and depth_ok and mcm_ok), {"torsionless": True}, details)


# -- depth formula and dimension inequality --------------------------------------

def verify_depth_formula(M: GradedModule, N: GradedModule, bound: int | None = None) -> CheckReport:
    vanish, lengths = tor_vanishing(M, N, bound)
    hyp = {"Tor_i(M,N)=0 for i>=1": vanish}
    details = {"tor_lengths": lengths}
    if not vanish:
        return CheckReport("depth-formula", NOT_APPLICABLE, hyp, details)
    T = tensor_product(M, N)
    dm, dn, dr, dt = depth(M), depth(N), M.ring.dim, depth(T)
    details.update({"depth(M)": dm, "depth(N)": dn, "depth(R)": dr, "depth(M⊗N)": dt})
    return CheckReport("depth-formula", _verdict(dm + dn == dr + dt), hyp, details)


def verify_dimension_inequality(M: GradedModule, N: GradedModule) -> CheckReport:
    T = tensor_product(M, N)
    fin = length(T).finite
    hyp = {"l(M⊗N) finite": fin}
    if not fin:
        return CheckReport("dim-inequality", NOT_APPLICABLE, hyp)
    dm, dn, dr = krull_dim(M), krull_dim(N), M.ring.dim
    details = {"dim(M)": dm, "dim(N)": dn, "dim(R)": dr}
    return CheckReport("dim-inequality", _verdict(dm + dn <= dr), hyp, details)


# -- transposes, Ext criteria ------------------------------------------------------

def syzygy_module(M: GradedModule, k: int = 1) -> GradedModule:
    """k-th syzygy module of M over R (image of d_k)."""
    res = resolve(M, "R", max(k + 1, default_bound(M.ring)))
    return GradedModule(M.ring, res.shift(k), res.differential(k + 1))


def transpose_D(N: GradedModule, i: int) -> GradedModule:
    """coker(F_i^* -> F_{i+1}^*) for the minimal resolution F of N."""
    res = resolve(N, "R", max(i + 1, default_bound(N.ring)))
    src = res.shift(i)
    tgt = tuple(-s for s in res.shift(i + 1))
    d = res.differential(i + 1)
    cols = [dict() for _ in src]
    for b, col in enumerate(d):
        for (a, m), c in col.items():
            cols[a][(b, m)] = c
    return minimal_presentation(GradedModule(N.ring, tgt, cols))


def jothilingam_check(M: GradedModule, n: int, assume_g_hypothesis: bool = False,
                      bound: int | None = None) -> CheckReport:
    """Ext^n(M, M) = 0 versus pd M < n."""
    ring = M.ring
    ext_zero = ext_subquotient(M, M, n).is_zero()
    if bound is None:
        bound = max(default_bound(ring), n + 1)
    res = resolve(M, "R", bound)
    pd = res.length if res.finite else None
    pd_small = pd is not None and pd < n
    details = {"n": n, "Ext^n(M,M)=0": ext_zero, "pd": pd if pd is not None else "inf",
               "pd<n": pd_small, "bound": bound}
    if ring.is_regular:
        return CheckReport("jothilingam", _verdict(ext_zero == pd_small), {"regular ring": True}, details)
    hyp = {"regular ring": False, "[M]=0 in the reduced Grothendieck group (declared)": assume_g_hypothesis}
    if not assume_g_hypothesis:
        details["caveat"] = ("over a hypersurface the equivalence needs [M] = 0 in the rational reduced "
                             "Grothendieck group; not asserted")
        details["biconditional"] = ext_zero == pd_small
        return CheckReport("jothilingam", NOT_APPLICABLE, hyp, details)
    return CheckReport("jothilingam", _verdict(ext_zero == pd_small), hyp, details)


def random_linear_forms(ring, count: int, rng: random.Random) -> list:
    p = ring.p
    out = []
    for _ in range(count):
        terms = {}
        for i in range(ring.nvars):
            terms[ring.ambient.var_mon(i)] = rng.randrange(1, p)
        from .kernel.polynomial import Polynomial
        out.append(Polynomial(ring.ambient, terms))
    return out


def parameter_probe(ring, seed: int, M: GradedModule | None = None, retries: int = 5):
    """R/(l_1..l_d) for seeded random linear forms regular on R (and on M if given).

    Regularity is certified by depth dropping by one at each step.
    """
    rng = random.Random(seed)
    d = ring.dim
    for attempt in range(retries):
        forms = random_linear_forms(ring, d, rng)
        ok = True
        for j in range(1, d + 1):
            Q = quotient_module(ring, forms[:j])
            if depth(Q) != d - j:
                ok = False
                break
            if M is not None and depth(M) == d:
                MQ = tensor_product(M, Q)
                if depth(MQ) != d - j:
                    ok = False
                    break
        if ok:
            return quotient_module(ring, forms) if forms else free_module(ring, [0]), forms, attempt
    raise RuntimeError(f"no regular linear system of parameters found in {retries} attempts")


def mcm_criterion_check(M: GradedModule, seed: int = 0, bound: int | None = None) -> CheckReport:
    """MCM implies Tor_{>=1}(M, N) = 0 for a finite-length probe; otherwise Tor_1 != 0."""
    if M.is_zero():
        raise ValueError("module must be nonzero")
    ring = M.ring
    mcm = depth(M) == ring.dim
    N, forms, attempt = parameter_probe(ring, seed, M if mcm else None)
    details = {"seed": seed, "attempt": attempt, "probe": [str(f) for f in forms],
               "depth(M)": depth(M), "dim R": ring.dim}
    if mcm:
        vanish, lengths = tor_vanishing(M, N, bound)
        details["tor_lengths"] = lengths
        return CheckReport("mcm", _verdict(vanish), {"MCM": True}, details)
    tor1_zero = tor_subquotient(M, N, 1).is_zero()
    details["Tor_1(M,N)=0"] = tor1_zero
    return CheckReport("mcm", _verdict(not tor1_zero), {"MCM": False}, details)


def is_vector_bundle(M: GradedModule) -> bool:
    """Free on the punctured spectrum iff Ext^1(M, syz_1 M) has finite length."""
    res = resolve(M, "R")
    if res.rank(1) == 0:
        return True
    K = syzygy_module(M, 1)
    return length(ext_subquotient(M, K, 1)).finite


def local_cohomology_vanishes(X: GradedModule, r: int) -> bool:
    """H^r_m(X) = 0 via graded local duality: Ext^{d-r}_R(X, R) = 0."""
    d = X.ring.dim
    if r < 0 or r > d:
        return True
    return ext_subquotient(X, free_module(X.ring, [0]), d - r).is_zero()


def satisfies_serre(N: GradedModule, r: int) -> bool:
    """(S_r) checked at the irrelevant ideal only: depth N >= min(r, dim N)."""
    if N.is_zero():
        return True
    return depth(N) >= min(r, krull_dim(N))


def verify_section3(M: GradedModule, case: str, N: GradedModule | None = None, r: int = 1,
                    bound: int | None = None) -> CheckReport:
    """Mechanical check of the vanishing (P31), depth (T32) and freeness (P33) statements."""
    ring = M.ring
    case = case.upper()
    if case == "P33":
        Ms = _dual_data(M).dual
        T = tensor_product(M, Ms)
        vanish, lengths = tor_vanishing(M, Ms, bound)
        hyp = {"depth(M⊗M*)>=2": depth(T) >= 2, "Tor_i(M,M*)=0 for i>0": vanish}
        details = {"tor_lengths": lengths, "depth(M⊗M*)": depth(T)}
        if not all(hyp.values()):
            return CheckReport("section3:P33", NOT_APPLICABLE, hyp, details)
        return CheckReport("section3:P33", _verdict(is_free(M)), hyp, details)
    if N is None:
        raise ValueError(f"{case} needs a second module")
    T = tensor_product(M, N)
    th = None
    try:
        th = theta(M, N, bound).value
    except ThetaUndefined:
        pass
    if case == "P31":
        hyp = {"vector bundle": is_vector_bundle(M), "depth(M)>=1": depth(M) >= 1,
               "theta=0": th == 0, "depth(M⊗N)>=1": depth(T) >= 1}
        if not all(hyp.values()):
            return CheckReport("section3:P31", NOT_APPLICABLE, hyp, {"theta": th})
        vanish, lengths = tor_vanishing(M, N, bound)
        return CheckReport("section3:P31", _verdict(vanish), hyp, {"theta": th, "tor_lengths": lengths})
    if case == "T32":
        if not 0 <= r < ring.dim:
            raise ValueError("r must satisfy 0 <= r < dim R")
        hyp = {"vector bundle": is_vector_bundle(M), f"depth(M)>={r}": depth(M) >= r,
               f"N satisfies S_{r}": satisfies_serre(N, r), "theta=0": th == 0,
               f"H^{r}_m(M⊗N)=0": local_cohomology_vanishes(T, r)}
        if not all(hyp.values()):
            return CheckReport("section3:T32", NOT_APPLICABLE, hyp, {"theta": th})
        ok = depth(T) >= r + 1
        details = {"theta": th, "depth(M⊗N)": depth(T)}
        if r > 0:
            vanish, lengths = tor_vanishing(M, N, bound)
            details["tor_lengths"] = lengths
            ok = ok and vanish
        return CheckReport("section3:T32", _verdict(ok), hyp, details)
    raise ValueError(f"unknown case {case!r}; expected P31, T32 or P33")
