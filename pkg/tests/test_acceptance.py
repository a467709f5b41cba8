"""The fourteen acceptance criteria, one test each.

Every test records a PASS/FAIL line that is printed in the terminal summary.
"""

import contextlib
import random
import time

import pytest

from conftest import ACCEPTANCE_LINES
from hyperhom.cli import main
from hyperhom.homology import depth, ext_subquotient, krull_dim, length, tor_subquotient
from hyperhom.resolution import resolve
from hyperhom.rings import (
    check_isolated_singularity, define_hypersurface, free_module, polynomial_ring, quotient_module,
    residue_field, tensor_product,
)
from hyperhom.stable import verify_buchweitz_duality, verify_lemma42, verify_theorem41
from hyperhom.suites import base_factorizations, load_corpus, mf_rings, mf_round_trip, random_conjugate, random_triples
from hyperhom.theta import (
    HOLDS, NOT_APPLICABLE, VIOLATED, _dual_data, check_rigidity, chi_ambient, is_free, jothilingam_check,
    maximal_ideal_sequence, mcm_criterion_check, random_linear_forms, split_sequence, theta,
    theta_biadditivity_check, verify_depth_formula, verify_dimension_inequality,
)

P = 32003


@contextlib.contextmanager
def criterion(n, summary):
    try:
        yield
    except BaseException:
        ACCEPTANCE_LINES[n] = f"criterion {n:2d}: FAIL - {summary}"
        raise
    ACCEPTANCE_LINES[n] = f"criterion {n:2d}: PASS - {summary}"


@pytest.fixture(scope="module")
def quad_ideal():
    return load_corpus("ex3_5")


@pytest.fixture(scope="module")
def a1():
    return load_corpus("a1_quadric")


def node():
    return define_hypersurface(P, ["x", "y"], "x*y")


def q(ring, *gens):
    return quotient_module(ring, [ring.parse(g) for g in gens])


def theta_chi_pairs():
    N = node()
    A = define_hypersurface(P, ["x", "y", "z"], "x*y - z^2")
    return [
        (q(N, "x"), q(N, "y")),
        (q(N, "x"), q(N, "x + y")),
        (q(N, "x + y"), q(N, "x - y")),
        (q(N, "y"), q(N, "x + 2*y")),
        (q(A, "x", "z"), q(A, "y", "z")),
        (q(A, "x", "z"), q(A, "x + y")),
        (q(A, "y", "z"), q(A, "x + y")),
        (residue_field(A), q(A, "x + y")),
    ]


def test_criterion_01_quadric_ideal(quad_ideal):
    with criterion(1, "(x, y) on xu - yv: Tor lengths 1,0,1, theta -1, depth(M (x) M*) 1, dim 3, reflexive, not free"):
        start = time.perf_counter()
        M, Ms = quad_ideal.module("M"), quad_ideal.module("Mstar")
        assert [length(tor_subquotient(M, Ms, i)).value for i in (1, 2, 3)] == [1, 0, 1]
        assert theta(M, Ms).value == -1
        assert depth(tensor_product(M, Ms)) == 1
        assert quad_ideal.ring.dim == 3 and krull_dim(free_module(quad_ideal.ring, [0])) == 3
        assert _dual_data(M).reflexive
        assert not is_free(M)
        assert time.perf_counter() - start < 60


def test_criterion_02_node_quotient():
    with criterion(2, "R/(x) on xy: Betti numbers 1 through index 10, odd Ext vanish, even Ext length 1"):
        cfg = load_corpus("ex5_5")
        M = cfg.module("M")
        res = resolve(M, bound=10)
        assert not res.finite
        assert res.betti_numbers()[:11] == [1] * 11
        for i in range(1, 11):
            lv = length(ext_subquotient(M, M, i))
            assert lv.value == (0 if i % 2 else 1)


def test_criterion_03_theta_equals_chi():
    pairs = theta_chi_pairs()
    with criterion(3, f"theta = chi on {len(pairs)} finite-length pairs over xy and xy - z^2"):
        assert len(pairs) >= 5
        for M, N in pairs:
            assert length(tensor_product(M, N)).finite
            assert theta(M, N).value == chi_ambient(M, N)


def test_criterion_04_biadditivity():
    A = define_hypersurface(P, ["x", "y", "z"], "x*y - z^2")
    triples = random_triples(A, 6, seed=11) + random_triples(node(), 6, seed=12)
    with criterion(4, f"theta biadditive on {len(triples)} seeded split triples and on 0 -> m -> R -> k -> 0"):
        assert len(triples) >= 10
        for M, N1, N2 in triples:
            assert theta_biadditivity_check(M, split_sequence(N1, N2))
        for ring in (A, node()):
            seq = maximal_ideal_sequence(ring)
            assert seq.certify()
            assert theta_biadditivity_check(q(ring, "x"), seq)


def test_criterion_05_matrix_factorizations():
    rng = random.Random(2024)
    base = base_factorizations(mf_rings(P))
    mfs = [random_conjugate(base[k % len(base)], rng) for k in range(12)]
    with criterion(5, f"{len(mfs)} seeded conjugated 2x2 and 3x3 factorizations round-trip with AB = BA = fI"):
        assert {mf.size for mf in mfs} == {2, 3}
        for mf in mfs:
            assert mf.verify()
            out = mf_round_trip(mf)
            assert out["identity"]
            assert out["constant_tail"]
            assert out["betti"][-1] == mf.size == out["size"]


def test_criterion_06_even_dimension_theta(a1, quad_ideal):
    with criterion(6, "A1 quadric: theta(M, M*) = 0; (x, y) on xu - yv contrast theta = -1 with odd dimension"):
        ring = a1.ring
        assert ring.dim == 2 and check_isolated_singularity(ring)
        rep = verify_theorem41(a1.module("M"))
        assert rep.verdict == HOLDS and rep.details["theta(M,M*)"] == 0
        contrast = verify_theorem41(quad_ideal.module("M"))
        assert contrast.verdict == NOT_APPLICABLE
        assert contrast.details["theta(M,M*)"] == -1
        assert contrast.hypotheses["dim R even"] is False


def test_criterion_07_stable_identities(a1):
    with criterion(7, "all six stable Tor/Ext identities on the A1 pair (M, M), indices -3..4"):
        M = a1.module("M")
        rep = verify_lemma42(M, M, (-3, 4))
        assert rep.verdict == HOLDS
        ids = rep.details["identities"]
        assert len(ids) == 6 and all(all(v.values()) for v in ids.values())
        idx = ids["tor_periodic"]
        assert min(idx) < 0 and max(idx) - min(idx) + 1 >= 6


def test_criterion_08_buchweitz(a1):
    with criterion(8, "stable Ext duality on the A1 pair for (1, 0) and (2, -1)"):
        M = a1.module("M")
        rep = verify_buchweitz_duality(M, M, [(1, 0), (2, -1)])
        assert rep.verdict == HOLDS
        assert rep.details["lengths"]["1,0"][0].value == 1


def test_criterion_09_depth_formula(a1, quad_ideal):
    R4 = quad_ideal.ring
    l = random_linear_forms(R4, 1, random.Random(5))[0]
    pairs = [
        (a1.module("M"), a1.module("L")),
        (free_module(a1.ring, [0]), a1.module("k")),
        (free_module(a1.ring, [0, 1]), a1.module("P")),
        (quad_ideal.module("M"), quotient_module(R4, [l])),
    ]
    with criterion(9, f"depth formula on {len(pairs)} Tor-independent pairs; (x, y), (x, y)* pair not applicable"):
        for M, N in pairs:
            rep = verify_depth_formula(M, N)
            assert rep.verdict == HOLDS, rep
        assert verify_depth_formula(quad_ideal.module("M"), quad_ideal.module("Mstar")).verdict == NOT_APPLICABLE


def test_criterion_10_dimension_inequality(a1, capsys):
    from importlib import resources

    with criterion(10, "dimension inequality holds on A1 lines; transversal planes violated with exit 1"):
        rep = verify_dimension_inequality(a1.module("P"), a1.module("Q"))
        assert rep.verdict == HOLDS
        path = str(resources.files("hyperhom") / "corpus" / "transversal_planes.cfg")
        code = main(["check", "dim-inequality", "--config", path, "--module", "M", "--module", "N", "--quiet"])
        assert code == 1
        planes = load_corpus("transversal_planes")
        assert verify_dimension_inequality(planes.module("M"), planes.module("N")).verdict == VIOLATED


def test_criterion_11_rigidity(a1, quad_ideal):
    zero_pairs = [(M, N) for M, N in theta_chi_pairs() if theta(M, N).value == 0]
    zero_pairs.append((a1.module("M"), a1.module("Mstar")))
    with criterion(11, f"counterexample(3) on (x, y), (x, y)*; rigid on all {len(zero_pairs)} theta = 0 pairs"):
        rep = check_rigidity(quad_ideal.module("M"), quad_ideal.module("Mstar"))
        assert rep.verdict == "counterexample(3)"
        assert rep.first_vanishing == 2
        assert len(zero_pairs) >= 3
        for M, N in zero_pairs:
            assert check_rigidity(M, N).verdict == "rigid-within-bound"


def test_criterion_12_mcm_criterion(a1, quad_ideal):
    with criterion(12, "MCM modules have vanishing Tor against the probe; m over xu - yv has Tor_1 != 0"):
        for M in (quad_ideal.module("M"), a1.module("M")):
            rep = mcm_criterion_check(M, seed=0)
            assert rep.verdict == HOLDS and rep.hypotheses["MCM"]
        rep = mcm_criterion_check(quad_ideal.module("m"), seed=0)
        assert rep.hypotheses["MCM"] is False
        assert rep.details["Tor_1(M,N)=0"] is False


def test_criterion_13_jothilingam():
    S2 = polynomial_ring(P, ["x", "y"])
    S3 = polynomial_ring(P, ["x", "y", "z"])
    corpus = [q(S2, "x"), q(S2, "x", "y"), q(S2, "x^2", "x*y"), q(S3, "x", "y", "z"), q(S3, "x*y", "z^2"),
              q(S3, "x", "y")]
    with criterion(13, f"Ext/pd biconditional on {len(corpus)} modules at n = 1, 2, 3; caveat for R/(x) on xy"):
        for M in corpus:
            for n in (1, 2, 3):
                assert jothilingam_check(M, n).verdict == HOLDS
        rep = jothilingam_check(load_corpus("ex5_5").module("M"), 3)
        assert rep.verdict == NOT_APPLICABLE and "caveat" in rep.details
        assert rep.details["biconditional"] is False


def test_criterion_14_determinism(tmp_path):
    with criterion(14, "verify examples twice with one seed gives byte-identical JSON"):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["verify", "examples", "--seed", "0", "--json", str(a), "--quiet"]) == 0
        assert main(["verify", "examples", "--seed", "0", "--json", str(b), "--quiet"]) == 0
        assert a.read_bytes() == b.read_bytes()
