import random

import pytest
from hypothesis import given, settings, strategies as st

from hyperhom.kernel.hilbert import HilbertSeries
from hyperhom.resolution import (
    betti_table, detect_periodicity, extract_mf, format_betti_table, graded_inverse, mat_mul, resolve,
    scalar_identity,
)
from hyperhom.rings import (
    cokernel, define_hypersurface, free_module, ideal_module, quotient_module, residue_field,
)
from hyperhom.suites import base_factorizations, mf_rings, mf_round_trip, random_conjugate, random_module

from oracle import Module, Ring, homology_dim

P = 32003


def quadric4():
    return define_hypersurface(P, ["x", "y", "u", "v"], "x*u - y*v")


def node():
    return define_hypersurface(P, ["x", "y"], "x*y")


def a1():
    return define_hypersurface(P, ["x", "y", "z"], "x*y - z^2")


def strs(rows):
    return [[str(e) for e in r] for r in rows]


def test_node_resolution_alternates():
    R = node()
    res = resolve(quotient_module(R, [R.parse("x")]), bound=6)
    assert res.betti_numbers()[:7] == [1] * 7
    maps = [strs(res.entries(i))[0][0] for i in range(1, 7)]
    assert maps == ["x", "y", "x", "y", "x", "y"]


def test_ideal_resolution_two_periodic():
    R = quadric4()
    res = resolve(ideal_module(R, [R.parse("x"), R.parse("y")]), bound=6)
    assert res.betti_numbers()[:7] == [2] * 7
    d1, d2 = strs(res.entries(1)), strs(res.entries(2))
    assert strs(res.entries(3)) == d1 and strs(res.entries(4)) == d2


def test_free_resolution_is_trivial():
    res = resolve(free_module(quadric4(), [0, 0]))
    assert res.finite and res.length == 0
    assert betti_table(res) == {(0, 0): 2}


def test_koszul_betti_table():
    S = define_hypersurface(P, ["x", "y"], None)
    res = resolve(residue_field(S))
    assert betti_table(res) == {(0, 0): 1, (1, 1): 2, (2, 2): 1}
    assert "total" in format_betti_table(betti_table(res)) or format_betti_table(betti_table(res))


def test_residue_field_of_quadric_grows():
    R = a1()
    res = resolve(residue_field(R), bound=7)
    assert res.betti_numbers()[:6] == [1, 3, 4, 4, 4, 4]


def _oracle_module(ring_names, f, shifts):
    return Module(Ring(ring_names, f), shifts)


def _to_oracle(rows):
    return [[str(e).replace("^", "**") for e in r] for r in rows]


@pytest.mark.parametrize("make, names, f, build", [
    (quadric4, "x y u v", "x*u - y*v", lambda R: ideal_module(R, [R.parse("x"), R.parse("y")])),
    (node, "x y", "x*y", lambda R: quotient_module(R, [R.parse("x")])),
    (a1, "x y z", "x*y - z**2", lambda R: residue_field(R)),
    (a1, "x y z", "x*y - z**2", lambda R: quotient_module(R, [R.parse("x"), R.parse("z")])),
])
def test_resolution_exact_by_oracle(make, names, f, build):
    R = make()
    M = build(R)
    res = resolve(M, bound=4)
    ring = Ring(names, f)
    F = [Module(ring, res.shift(i)) for i in range(5)]
    D = {i: _to_oracle(res.entries(i)) for i in range(1, 5)}
    for d in range(0, 5):
        # H_0 is M, higher homology vanishes
        h0 = F[0].dim(d) - _image(F[1], F[0], D[1], d)
        assert h0 == M.hilbert_series.value(d)
        for i in range(1, 4):
            assert homology_dim(F[i + 1], F[i], F[i - 1], D[i + 1], D[i], d) == 0


def _image(src, tgt, matrix, d):
    from oracle import image_rank
    return image_rank(src, tgt, matrix, d)


def test_ambient_resolution_euler_characteristic():
    R = quadric4()
    for M in (ideal_module(R, [R.parse("x"), R.parse("y")]), residue_field(R),
              quotient_module(R, [R.parse("x"), R.parse("u")])):
        res = resolve(M, over="S")
        assert res.finite
        num: dict = {}
        for i in range(res.length + 1):
            for s in res.shift(i):
                num[s] = num.get(s, 0) + (-1) ** i
        total = HilbertSeries(tuple(sorted((e, c) for e, c in num.items() if c)), R.nvars)
        assert total == M.hilbert_series


def test_periodicity_certificates():
    R = node()
    c = detect_periodicity(resolve(quotient_module(R, [R.parse("x")])))
    assert (c.onset, c.period) == (1, 2)
    Q = quadric4()
    c = detect_periodicity(resolve(ideal_module(Q, [Q.parse("x"), Q.parse("y")])))
    assert (c.onset, c.period) == (1, 2)
    c = detect_periodicity(resolve(free_module(Q, [0])))
    assert (c.onset, c.period) == (0, 1)


def test_extract_mf_node():
    R = node()
    mf = extract_mf(resolve(quotient_module(R, [R.parse("x")])), 1)
    assert {strs(mf.rows("A"))[0][0], strs(mf.rows("B"))[0][0]} == {"x", "y"}
    assert mf.verify()


def test_extract_mf_quadric_is_a_factorization():
    R = quadric4()
    mf = extract_mf(resolve(ideal_module(R, [R.parse("x"), R.parse("y")])), 1)
    assert mf.verify()
    A = strs(mf.rows("A"))
    # equal to [[y, u], [-x, -v]] up to the sign of a basis vector
    assert {tuple(e.lstrip("-") for e in r) for r in A} == {("y", "u"), ("x", "v")}


def test_extract_mf_a1_partner_is_adjugate():
    R = a1()
    M = cokernel(R, [["x", "z"], ["z", "y"]])
    mf = extract_mf(resolve(M), 1)
    assert mf.verify()
    Bs = {tuple(r) for r in strs(mf.rows("B"))} | {tuple(r) for r in strs(mf.rows("A"))}
    assert ("y", "-z") in Bs or ("-y", "z") in Bs


def test_graded_inverse_of_unimodular_constant():
    one = {(0, 0, 0, 0): 1}
    U = [{(0, (0, 0, 0, 0)): 2, (1, (0, 0, 0, 0)): 3}, {(1, (0, 0, 0, 0)): 1}]
    inv = graded_inverse(U, 2, P, 4)
    assert mat_mul(U, inv, P) == scalar_identity(2, one)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_conjugates_round_trip(seed):
    rng = random.Random(seed)
    base = base_factorizations(mf_rings(P))
    mf = random_conjugate(rng.choice(base), rng)
    assert mf.verify()
    out = mf_round_trip(mf)
    assert out["identity"] and out["constant_tail"]
    assert out["size"] <= mf.size


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_differentials_compose_to_zero_mod_f(seed):
    R = a1()
    M = random_module(R, random.Random(seed))
    res = resolve(M, bound=4)
    for i in range(1, min(res.length, 4)):
        prod = mat_mul(res.differential(i), res.differential(i + 1), P)
        assert all(not R.reduce_vec(col) for col in prod)
