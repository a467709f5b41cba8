"""Built-in verification suites run by ``hyperhom verify examples``.

Each suite loads a corpus config and returns a list of expectation records
``{check, expected, observed, pass, verdict}``.  Randomized constructions
draw from ``random.Random(seed)`` only.
"""

from __future__ import annotations

import random
from importlib import resources

from .config import SessionConfig, parse_config_text
from .homology import depth, ext_subquotient, krull_dim, length, tor_subquotient
from .kernel.polynomial import Polynomial
from .resolution import MatrixFactorization, detect_periodicity, extract_mf, resolve
from .rings import GradedModule, quotient_module, residue_field, tensor_product
from .stable import verify_buchweitz_duality, verify_lemma42, verify_theorem41
from .theta import (
    HOLDS, NOT_APPLICABLE, VIOLATED, _dual_data, chi_ambient, check_rigidity, is_free,
    jothilingam_check, maximal_ideal_sequence, mcm_criterion_check, random_linear_forms,
    split_sequence, theta, theta_biadditivity_check, verify_depth_formula,
    verify_dimension_inequality, verify_pushforward_properties, verify_section3,
)

SUITE_NAMES = ("a1_quadric", "ex3_5", "ex5_5", "transversal_planes")


def corpus_text(name: str) -> str:
    return resources.files("hyperhom").joinpath("corpus", f"{name}.cfg").read_text(encoding="utf-8")


def load_corpus(name: str) -> SessionConfig:
    if name not in SUITE_NAMES:
        raise KeyError(f"no corpus entry named {name!r}")
    return parse_config_text(corpus_text(name), f"corpus/{name}.cfg")


def expect(check: str, expected, observed) -> dict:
    ok = expected == observed
    return {"check": check, "expected": expected, "observed": observed, "pass": ok,
            "verdict": HOLDS if ok else VIOLATED}


def _lengths(fn, M, N, indices):
    return [length(fn(M, N, i)).to_json() for i in indices]


# -- random constructions ----------------------------------------------------------

def _poly_of_degree(ring, deg: int, rng: random.Random) -> dict:
    """Random homogeneous form of the given degree (as a term dict)."""
    if deg == 0:
        return {ring.one: rng.randrange(1, ring.p)}
    terms: dict = {}
    n = ring.nvars
    for _ in range(2):
        mon = [0] * n
        for _ in range(deg):
            mon[rng.randrange(n)] += 1
        terms[tuple(mon)] = rng.randrange(1, ring.p)
    return terms


def random_conjugate(mf: MatrixFactorization, rng: random.Random, steps: int = 6) -> MatrixFactorization:
    """(P A Q, Q^-1 B P^-1) for random graded elementary P, Q."""
    ring = mf.ring
    p = ring.p
    A = [dict(c) for c in mf.A]
    B = [dict(c) for c in mf.B]
    n = mf.size
    rows, mids = mf.row_shifts, mf.mid_shifts
    if n < 2:
        c = rng.randrange(1, p)
        ci = pow(c, -1, p)
        A = [{k: v * c % p for k, v in col.items()} for col in A]
        B = [{k: v * ci % p for k, v in col.items()} for col in B]
        return MatrixFactorization(ring, A, B, rows, mids, mf.end_shifts, mf.index)

    def add_col(M, j, i, g, sign):
        # column_j += sign * g * column_i
        for (r, m), c in list(M[i].items()):
            for gm, gc in g.items():
                key = (r, tuple(a + b for a, b in zip(m, gm)))
                v = (M[j].get(key, 0) + sign * c * gc) % p
                if v:
                    M[j][key] = v
                else:
                    M[j].pop(key, None)

    def add_row(M, i, j, g, sign):
        # row_i += sign * g * row_j
        for col in M:
            for (r, m), c in list(col.items()):
                if r != j:
                    continue
                for gm, gc in g.items():
                    key = (i, tuple(a + b for a, b in zip(m, gm)))
                    v = (col.get(key, 0) + sign * c * gc) % p
                    if v:
                        col[key] = v
                    else:
                        col.pop(key, None)

    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        if rng.random() < 0.5:
            # column op on A (source F1): needs deg g = mids[j] - mids[i]
            dg = mids[j] - mids[i]
            if dg < 0:
                i, j, dg = j, i, -dg
            g = _poly_of_degree(ring, dg, rng)
            add_col(A, j, i, g, 1)
            add_row(B, i, j, g, -1)
        else:
            dg = rows[j] - rows[i]
            if dg < 0:
                i, j, dg = j, i, -dg
            g = _poly_of_degree(ring, dg, rng)
            add_row(A, i, j, g, 1)
            add_col(B, j, i, g, -1)
    return MatrixFactorization(ring, A, B, rows, mids, mf.end_shifts, mf.index)


def base_factorizations(rings: dict) -> list[MatrixFactorization]:
    """Hand-made factorizations of xy, xyz, xu - yv and xy - z^2."""

    def mf(ring, arows, brows, row_shifts):
        def cols(rows):
            return [ring.polys_to_vec([ring.parse(r[j]) for r in rows]) for j in range(len(rows[0]))]

        A, B = cols(arows), cols(brows)
        mids = tuple(GradedModule(ring.ambient_ring(), row_shifts, A).rel_degrees)
        d = ring.f_degree
        return MatrixFactorization(ring, A, B, tuple(row_shifts), mids, tuple(s + d for s in row_shifts))

    out = []
    R = rings["xy"]
    out.append(mf(R, [["x", "0"], ["0", "y"]], [["y", "0"], ["0", "x"]], [0, 0]))
    out.append(mf(R, [["x", "0", "0"], ["0", "x", "0"], ["0", "0", "y"]],
                  [["y", "0", "0"], ["0", "y", "0"], ["0", "0", "x"]], [0, 0, 0]))
    R = rings["xyz"]
    out.append(mf(R, [["x", "0", "0"], ["0", "y", "0"], ["0", "0", "z"]],
                  [["y*z", "0", "0"], ["0", "x*z", "0"], ["0", "0", "x*y"]], [0, 0, 0]))
    out.append(mf(R, [["x", "0"], ["0", "y*z"]], [["y*z", "0"], ["0", "x"]], [0, 0]))
    R = rings["xu-yv"]
    out.append(mf(R, [["x", "y"], ["v", "u"]], [["u", "-y"], ["-v", "x"]], [0, 0]))
    R = rings["a1"]
    out.append(mf(R, [["x", "z"], ["z", "y"]], [["y", "-z"], ["-z", "x"]], [0, 0]))
    return out


def mf_rings(p: int = 32003) -> dict:
    from .rings import define_hypersurface

    return {
        "xy": define_hypersurface(p, ["x", "y"], "x*y"),
        "xyz": define_hypersurface(p, ["x", "y", "z"], "x*y*z"),
        "xu-yv": define_hypersurface(p, ["x", "y", "u", "v"], "x*u - y*v"),
        "a1": define_hypersurface(p, ["x", "y", "z"], "x*y - z^2"),
    }


def mf_round_trip(mf: MatrixFactorization) -> dict:
    """Resolve coker(A), extract a factorization and compare Betti patterns."""
    M = mf.cokernel()
    res = resolve(M, "R")
    cert = detect_periodicity(res)
    got = extract_mf(res, max(cert.onset, 1))
    betti = res.betti_numbers()
    tail = betti[cert.onset:]
    return {
        "identity": got.verify(),
        "input_identity": mf.verify(),
        "onset": cert.onset,
        "period": cert.period,
        "betti": betti,
        "constant_tail": len(set(tail)) == 1,
        "size": got.size,
    }


def random_module(ring, rng: random.Random) -> GradedModule:
    """Seeded small module: k, R/(generic forms), or R/(some variables)."""
    kind = rng.randrange(4)
    if kind == 0:
        return residue_field(ring)
    if kind == 1:
        return quotient_module(ring, random_linear_forms(ring, ring.nvars - 1, rng))
    if kind == 2:
        forms = random_linear_forms(ring, ring.nvars - 2, rng)
        forms.append(Polynomial(ring.ambient, _poly_of_degree(ring, 2, rng)))
        return quotient_module(ring, forms)
    gens = ring.ambient.gens()
    return quotient_module(ring, sorted(rng.sample(gens, ring.nvars - 1), key=str))


def random_triples(ring, count: int, seed: int) -> list[tuple]:
    rng = random.Random(seed)
    pool = [quotient_module(ring, [ring.ambient.gens()[0]]), residue_field(ring)]
    out = []
    for _ in range(count):
        M = rng.choice(pool)
        out.append((M, random_module(ring, rng), random_module(ring, rng)))
    return out


# -- suites ------------------------------------------------------------------------

def suite_ex3_5(cfg: SessionConfig, seed: int) -> list[dict]:
    M, Ms, m, k = (cfg.module(n) for n in ("M", "Mstar", "m", "k"))
    ring = cfg.ring
    out = [
        expect("dim R", 3, ring.dim),
        expect("l(Tor_i(M,M*)), i=1..4", [1, 0, 1, 0], _lengths(tor_subquotient, M, Ms, range(1, 5))),
        expect("theta(M,M*)", -1, theta(M, Ms).value),
        expect("depth(M⊗M*)", 1, depth(tensor_product(M, Ms))),
        expect("M ⊗ M* has the Hilbert series of m", True,
               tensor_product(M, Ms).hilbert_series == m.hilbert_series),
        expect("M* has the Hilbert series of (x,v)(1)", True,
               Ms.hilbert_series == _ideal_series(ring, ["x", "v"]).twist(1)),
        expect("M reflexive", True, _dual_data(M).reflexive),
        expect("M free", False, is_free(M)),
        expect("rigidity(M,M*)", "counterexample(3)", check_rigidity(M, Ms).verdict),
        expect("depth formula (M,M*)", NOT_APPLICABLE, verify_depth_formula(M, Ms).verdict),
        expect("thm41 precondition", NOT_APPLICABLE, verify_theorem41(M).verdict),
        expect("P33 on M", NOT_APPLICABLE, verify_section3(M, "P33").verdict),
        expect("pushforward properties of M", HOLDS, verify_pushforward_properties(M).verdict),
        expect("MCM criterion on M", HOLDS, mcm_criterion_check(M, seed).verdict),
        expect("MCM probe on m (Tor_1 != 0)", HOLDS, mcm_criterion_check(m, seed).verdict),
        expect("biadditivity on 0->m->R->k->0", True, theta_biadditivity_check(M, maximal_ideal_sequence(ring))),
    ]
    return out


def _ideal_series(ring, gens):
    from .rings import ideal_module

    return ideal_module(ring, gens).hilbert_series


def suite_ex5_5(cfg: SessionConfig, seed: int) -> list[dict]:
    M, N, k = (cfg.module(n) for n in ("M", "N", "k"))
    res = resolve(M, "R", 10)
    j = jothilingam_check(M, 3)
    mf = extract_mf(res, 1)
    return [
        expect("Betti numbers 0..10", [1] * 11, res.betti_numbers()),
        expect("periodicity (onset, period)", [1, 2], [detect_periodicity(res).onset, detect_periodicity(res).period]),
        expect("MF identity", True, mf.verify()),
        expect("l(Ext^odd(M,M)), 1..9", [0] * 5, _lengths(ext_subquotient, M, M, range(1, 10, 2))),
        expect("l(Ext^even(M,M)), 2..10", [1] * 5, _lengths(ext_subquotient, M, M, range(2, 11, 2))),
        expect("jothilingam n=3 verdict", NOT_APPLICABLE, j.verdict),
        expect("jothilingam n=3 pair (Ext^3=0, pd<3)", [True, False], [j.details["Ext^n(M,M)=0"], j.details["pd<n"]]),
        expect("theta(R/(x),R/(y)) = chi", [1, 1], [theta(M, N).value, chi_ambient(M, N)]),
    ]


def suite_a1(cfg: SessionConfig, seed: int) -> list[dict]:
    M, Ms, L, P, Q, k = (cfg.module(n) for n in ("M", "Mstar", "L", "P", "Q", "k"))
    out = [
        expect("thm41", HOLDS, verify_theorem41(M).verdict),
        expect("theta(M,M*)", 0, theta(M, Ms).value),
        expect("lemma42 window -3..4", HOLDS, verify_lemma42(M, M, (-3, 4)).verdict),
        expect("buchweitz (1,0), (2,-1)", HOLDS, verify_buchweitz_duality(M, M, [(1, 0), (2, -1)]).verdict),
        expect("dim inequality (R/(x,z), R/(y,z))", HOLDS, verify_dimension_inequality(P, Q).verdict),
        expect("depth formula (M, R/(x+y))", HOLDS, verify_depth_formula(M, L).verdict),
        expect("pushforward properties of M", HOLDS, verify_pushforward_properties(M).verdict),
        expect("MCM criterion on M", HOLDS, mcm_criterion_check(M, seed).verdict),
    ]
    for a, b, name in ((P, Q, "R/(x,z), R/(y,z)"), (k, P, "k, R/(x,z)"), (L, P, "R/(x+y), R/(x,z)")):
        out.append(expect(f"theta = chi on ({name})", True, theta(a, b).value == chi_ambient(a, b)))
    for a, b, name in ((M, L, "M, R/(x+y)"), (M, Ms, "M, M*")):
        r = check_rigidity(a, b)
        if theta(a, b).value == 0 and r.first_vanishing is not None:
            out.append(expect(f"rigidity ({name})", "rigid-within-bound", r.verdict))
    rng_seed = seed
    for n, (A, N1, N2) in enumerate(random_triples(cfg.ring, 3, rng_seed)):
        out.append(expect(f"biadditivity random triple {n}", True,
                          theta_biadditivity_check(A, split_sequence(N1, N2))))
    return out


def suite_transversal(cfg: SessionConfig, seed: int) -> list[dict]:
    M, N = cfg.module("M"), cfg.module("N")
    dim = verify_dimension_inequality(M, N)
    return [
        expect("dim inequality verdict", VIOLATED, dim.verdict),
        expect("dim M + dim N", 4, krull_dim(M) + krull_dim(N)),
        expect("chi(M,N)", 1, chi_ambient(M, N)),
        expect("theta(M,N)", 1, theta(M, N).value),
    ]


SUITES = {
    "a1_quadric": suite_a1,
    "ex3_5": suite_ex3_5,
    "ex5_5": suite_ex5_5,
    "transversal_planes": suite_transversal,
}


def run_suite(name: str, seed: int | None = None) -> dict:
    cfg = load_corpus(name)
    s = cfg.seed if seed is None else seed
    checks = SUITES[name](cfg, s)
    ok = all(c["pass"] for c in checks)
    return {"suite": name, "title": f"suite {name}", "config_digest": cfg.digest, "seed": s,
            "checks": checks, "verdict": HOLDS if ok else VIOLATED,
            "text": [f"{'ok  ' if c['pass'] else 'FAIL'} {c['check']}: {c['observed']}" for c in checks]}
