import random

import pytest
from hypothesis import given, settings, strategies as st

from hyperhom.homology import (
    INFINITE_LENGTH, depth, ext, f_index, hilbert_function, krull_dim, length, projective_dimension_over_ambient,
    tor, tor_lengths,
)
from hyperhom.rings import (
    cokernel, define_hypersurface, direct_sum, free_module, ideal_module, quotient_module, residue_field,
    tensor_product,
)
from hyperhom.suites import random_module
from hyperhom.theta import _dual_data

from oracle import Module, Ring, homology_dim, tensor_matrix, tensor_with

P = 32003


@pytest.fixture(scope="module")
def quad_ideal():
    R = define_hypersurface(P, ["x", "y", "u", "v"], "x*u - y*v")
    M = ideal_module(R, [R.parse("x"), R.parse("y")])
    return R, M, _dual_data(M).dual


@pytest.fixture(scope="module")
def node_quotient():
    R = define_hypersurface(P, ["x", "y"], "x*y")
    return R, quotient_module(R, [R.parse("x")])


# -- oracle: hand-written periodic resolutions -----------------------------------

QUAD = Ring("x y u v", "x*u - y*v")
# resolution of (x, y): F_i = R(-(i+1))^2, maps alternating B' and its adjugate
D_ODD = [["y", "u"], ["-x", "-v"]]
D_EVEN = [["-v", "-u"], ["x", "y"]]
# the dual (x, v)(1) presented on two degree-0 generators
MSTAR = Module(QUAD, [0, 0], [["v", "-x"], ["u", "-y"]])


def oracle_tor_length(i, N=MSTAR, ring=QUAD):
    F = lambda j: [j + 1, j + 1]
    d = lambda j: D_ODD if j % 2 else D_EVEN
    C = {j: tensor_with(ring, F(j), N) for j in (i - 1, i, i + 1) if j >= 0}
    rN = len(N.shifts)
    total = 0
    for deg in range(-2, i + 8):
        mid = C[i]
        c_in = C[i + 1]
        din = tensor_matrix(ring, d(i + 1), rN)
        c_out = C.get(i - 1)
        dout = tensor_matrix(ring, d(i), rN) if c_out is not None else None
        total += homology_dim(c_in, mid, c_out, din, dout, deg)
    return total


def test_oracle_tor_values():
    assert [oracle_tor_length(i) for i in (1, 2, 3)] == [1, 0, 1]


def test_tor_matches_oracle(quad_ideal):
    _, M, Ms = quad_ideal
    for i in (1, 2, 3, 4):
        assert length(tor(M, Ms, i)).value == oracle_tor_length(i)


def test_dual_presentation_matches_hand_dual(quad_ideal):
    _, _, Ms = quad_ideal
    for d in range(5):
        assert Ms.hilbert_series.value(d) == MSTAR.dim(d)


def test_tor_lengths_are_periodic(quad_ideal):
    _, M, Ms = quad_ideal
    got = tor_lengths(M, Ms, 0, 6)
    assert got[0] == INFINITE_LENGTH
    assert [got[i].value for i in range(1, 7)] == [1, 0, 1, 0, 1, 0]
    assert f_index(M, Ms) == 1


def test_tor_against_free_vanishes(quad_ideal):
    R, M, _ = quad_ideal
    F = free_module(R, [0])
    assert all(length(tor(F, M, i)).value == 0 for i in (1, 2, 3))


def test_ext_alternates_on_node(node_quotient):
    _, M = node_quotient
    for i in range(1, 11):
        expected = 1 if i % 2 == 0 else 0
        assert length(ext(M, M, i)).value == expected


def oracle_ext_length(i):
    # Hom(R(-j), R/(x)) = (R/(x))(j); maps alternate x and y
    ring = Ring("x y", "x*y")
    H = lambda j: Module(ring, [-j], [["x"]])
    d = lambda j: [["x" if j % 2 else "y"]]
    total = 0
    for deg in range(-i - 3, 4):
        c_in = H(i - 1) if i >= 1 else None
        total += homology_dim(c_in, H(i), H(i + 1), d(i) if c_in else None, d(i + 1), deg)
    return total


def test_ext_matches_oracle(node_quotient):
    _, M = node_quotient
    for i in range(1, 7):
        assert length(ext(M, M, i)).value == oracle_ext_length(i)


def test_ext_from_free_vanishes(node_quotient):
    R, M = node_quotient
    assert all(length(ext(free_module(R, [0, 1]), M, i)).value == 0 for i in (1, 2))


def test_length_values(quad_ideal):
    R, M, Ms = quad_ideal
    assert length(residue_field(R)).value == 1
    assert length(free_module(R, [0])) == INFINITE_LENGTH
    assert length(tor(M, Ms, 1)).value == 1


def test_krull_dim(quad_ideal):
    R, _, _ = quad_ideal
    assert krull_dim(free_module(R, [0])) == 3
    assert krull_dim(quotient_module(R, [R.parse("x"), R.parse("y")])) == 2
    assert krull_dim(residue_field(R)) == 0


def test_depth(quad_ideal):
    R, M, Ms = quad_ideal
    assert depth(tensor_product(M, Ms)) == 1
    assert depth(free_module(R, [0])) == 3
    assert depth(residue_field(R)) == 0
    assert projective_dimension_over_ambient(residue_field(R)) == 4


def test_hilbert_function_windows(quad_ideal):
    R, _, _ = quad_ideal
    assert hilbert_function(free_module(R, [0]), (0, 2)).table == {0: 1, 1: 4, 2: 9}
    assert hilbert_function(residue_field(R), (-1, 2)).table == {-1: 0, 0: 1, 1: 0, 2: 0}
    S = define_hypersurface(P, ["x"], None)
    assert hilbert_function(free_module(S, [1]), (0, 2)).table == {0: 0, 1: 1, 2: 1}


A1 = define_hypersurface(P, ["x", "y", "z"], "x*y - z^2")


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_tor_is_symmetric(seed):
    rng = random.Random(seed)
    M, N = random_module(A1, rng), random_module(A1, rng)
    for i in (1, 2):
        assert tor(M, N, i).hilbert_series == tor(N, M, i).hilbert_series


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_tor_is_additive(seed):
    rng = random.Random(seed)
    M, N1, N2 = (random_module(A1, rng) for _ in range(3))
    for i in (1, 2):
        whole = tor(M, direct_sum(N1, N2), i).hilbert_series
        assert whole == tor(M, N1, i).hilbert_series + tor(M, N2, i).hilbert_series


def test_tor_is_eventually_two_periodic():
    M = cokernel(A1, [["x", "z"], ["z", "y"]])
    N = quotient_module(A1, [A1.parse("x + y")])
    lens = tor_lengths(M, N, 1, 6)
    assert lens[1] == lens[3] == lens[5]
    assert lens[2] == lens[4] == lens[6]
