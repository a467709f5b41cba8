import pytest

from hyperhom.rings import cokernel, define_hypersurface, free_module, ideal_module, quotient_module
from hyperhom.stable import (
    NotMCM, complete_resolution, stable_ext, stable_table, stable_tor, verify_buchweitz_duality,
    verify_lemma42, verify_theorem41,
)
from hyperhom.homology import length
from hyperhom.theta import HOLDS, NOT_APPLICABLE, _dual_data

from oracle import Module, Ring, homology_dim, tensor_matrix, tensor_with

P = 32003
A1 = define_hypersurface(P, ["x", "y", "z"], "x*y - z^2")
QUAD = define_hypersurface(P, ["x", "y", "u", "v"], "x*u - y*v")

ORING = Ring("x y z", "x*y - z**2")
A = [["x", "z"], ["z", "y"]]
B = [["y", "-z"], ["-z", "x"]]
OM = Module(ORING, [0, 0], [["x", "z"], ["z", "y"]])


def oracle_stable_tor(i):
    """H_i of T (x) M for the complete resolution T_j = R(-j)^2, d_j = A (j odd) or B (j even)."""
    d = lambda j: A if j % 2 else B
    C = lambda j: tensor_with(ORING, [j, j], OM)
    total = 0
    for deg in range(i - 4, i + 6):
        total += homology_dim(C(i + 1), C(i), C(i - 1), tensor_matrix(ORING, d(i + 1), 2),
                              tensor_matrix(ORING, d(i), 2), deg)
    return total


@pytest.fixture(scope="module")
def m_a1():
    return cokernel(A1, [["x", "z"], ["z", "y"]])


def test_complete_resolution_is_periodic(m_a1):
    T = complete_resolution(m_a1)
    d = A1.f_degree
    for j in range(-4, 5):
        assert T.shift(j + 2) == tuple(s + d for s in T.shift(j))
        assert T.differential(j + 2) == T.differential(j)
    assert T.is_exact_on(-5, 5)


def test_stable_tor_matches_oracle(m_a1):
    table = stable_table(m_a1, m_a1, "tor", (-3, 4))
    for i, lv in table.entries.items():
        assert lv.value == oracle_stable_tor(i)


def test_stable_tables_have_length_one(m_a1):
    for kind in ("tor", "ext"):
        t = stable_table(m_a1, m_a1, kind, (-2, 3))
        assert all(lv.value == 1 for lv in t.entries.values())


def test_stable_agrees_with_ordinary_in_high_degree(m_a1):
    from hyperhom.homology import ext, tor
    for i in (1, 2, 3):
        assert stable_tor(m_a1, m_a1, i).hilbert_series == tor(m_a1, m_a1, i).hilbert_series
        assert stable_ext(m_a1, m_a1, i).hilbert_series == ext(m_a1, m_a1, i).hilbert_series


def test_stable_identities_on_a1(m_a1):
    rep = verify_lemma42(m_a1, m_a1, (-3, 4))
    assert rep.verdict == HOLDS
    assert len(rep.details["identities"]) == 6
    assert rep.details["window"] == [-3, 4]


def test_buchweitz_duality(m_a1):
    rep = verify_buchweitz_duality(m_a1, m_a1, [(1, 0), (2, -1), (3, 0)])
    assert rep.verdict == HOLDS
    with pytest.raises(ValueError):
        verify_buchweitz_duality(m_a1, m_a1, [(1, 1)])


def test_buchweitz_needs_even_dimension():
    M = ideal_module(QUAD, [QUAD.parse("x"), QUAD.parse("y")])
    assert verify_buchweitz_duality(M, M, [(1, 0)]).verdict == NOT_APPLICABLE


def test_theta_of_dual_pair_on_even_quadric(m_a1):
    rep = verify_theorem41(m_a1)
    assert rep.verdict == HOLDS
    assert rep.details["theta(M,M*)"] == 0
    contrast = verify_theorem41(ideal_module(QUAD, [QUAD.parse("x"), QUAD.parse("y")]))
    assert contrast.verdict == NOT_APPLICABLE
    assert contrast.details["theta(M,M*)"] == -1
    assert contrast.hypotheses["dim R even"] is False


def test_not_mcm_rejected():
    with pytest.raises(NotMCM):
        complete_resolution(quotient_module(A1, [A1.parse("x"), A1.parse("z")]))
    with pytest.raises(NotMCM):
        complete_resolution(free_module(A1, [0]))


def test_dual_of_a1_module_is_mcm(m_a1):
    Ms = _dual_data(m_a1).dual
    assert length(stable_ext(Ms, Ms, 0)).value == 1
