from fractions import Fraction

import pytest
from conftest import algebra
from expb2 import PHI_C_S0, PHI_C_S1, PHI_T_S0, PHI_T_S1, TABLE1
from hypothesis import given
from hypothesis import strategies as st

from klcells import jring
from klcells.grpring import GroupRingElement as GRE
from klcells.grpring import RationalFraction
from klcells.typeb import TypeBError


def names(alg, row):
    return {alg.W.label(z): v for z, v in row.items()}


@given(st.lists(st.lists(st.integers(-6, 6), min_size=4, max_size=4), min_size=4, max_size=4))
def test_bareiss_inverse(M):
    if jring.rank_over_q(M) < 4:
        with pytest.raises(jring.JRingError):
            jring.bareiss_inverse(M)
        return
    inv = jring.rational_inverse(M)
    for i in range(4):
        for j in range(4):
            assert sum(Fraction(M[i][k]) * inv[k][j] for k in range(4)) == (i == j)


def test_table1(b2):
    assert jring.table1(b2) == TABLE1


def test_table1_needs_b2(b3):
    with pytest.raises(jring.JRingError):
        jring.table1(b3)


def test_phi_generators(b2):
    M = jring.phi_matrix(b2, lusztig=False)
    W = b2.W
    assert names(b2, M[W.from_word("s0")]) == PHI_C_S0
    assert names(b2, M[W.from_word("s1")]) == PHI_C_S1


def test_lusztig_n_hat_signs(b2):
    W = b2.W
    nh = jring.n_hat(b2)
    assert [W.label(w) for w in range(8) if nh[w] == -1] == ["s0s1s0"]
    assert jring.n_hat(b2, lusztig=False) == [1] * 8


@pytest.mark.parametrize("gen,want", [("s0", PHI_T_S0), ("s1", PHI_T_S1)])
def test_canonical_phi_on_generators(b2, gen, want):
    P = jring.canonical_phi(b2)
    got = P.on_T(b2.W.from_word(gen))
    zero = RationalFraction(b2.zero)
    for u in range(8):
        assert got[u] == want.get(b2.W.label(u), zero), b2.W.label(u)


@pytest.mark.parametrize("weights", ["generic", (1, 3)])
def test_b2_full_suite(weights):
    alg = algebra("B", 2, weights)
    reps = jring.run_all(alg, exhaustive=True) + [jring.check_cd_transport(alg)]
    assert [(r.property, r.counterexamples) for r in reps if not r.ok] == []


def test_b2_schur_values(b2):
    sd = jring.schur_elements(b2)
    assert sorted(sd.c[l].theta1() for l in sd.lambdas) == [4, 8, 8, 8, 8]
    # the one-dimensional cells {1} and {w0} give the Poincare polynomials sum_w q_w^{-2} and sum_w q_w^2
    W = b2.W
    poin = b2.zero
    for w in range(8):
        e = [0, 0]
        for s in W.reduced_word_idx(w):
            e = [a + 2 * b for a, b in zip(e, b2.L.values[s])]
        poin = poin + GRE.mono(tuple(-x for x in e))
    labels = {tuple(sd.reps[l]): l for l in sd.lambdas}
    assert sd.c[labels[(0,)]] == poin
    assert sd.c[labels[(W.w0,)]] == poin.bar()


def test_b2_jring_counts(b2):
    J = jring.j_ring(b2)
    assert len(J.gamma_hat) == 12
    assert set(J.gamma_hat.values()) <= {1, -1}


def test_b3_selected(b3):
    for rep in jring.check_schur(b3, matrix_units=False) + jring.check_jring(b3, associativity=False):
        assert rep.ok, (rep.property, rep.counterexamples)
    for rep in (jring.check_weak_p15(b3), jring.check_beta(b3), jring.check_phi_action_defect(b3), jring.check_cd_transport(b3)):
        assert rep.ok, (rep.property, rep.counterexamples)
    assert all(r.ok for r in jring.check_phi_hom(b3))


def test_b3_canonical_phi_specializes_to_identity(b3):
    P = jring.canonical_phi(b3)
    for w in range(48):
        for z in range(48):
            f = P.phi_c[w][z]
            assert f.theta1() == (w == z)
            assert f == f.bar()


def test_json_exports(b2):
    js = jring.phi_json(b2)
    assert len(js["rows"]) == 8
    cj = jring.canphi_json(b2)
    assert cj["basis"] == "c" and len(cj["matrix"]) == 8
    gj = jring.canphi_json(b2, "group")
    assert gj["matrix"][0][0] == [{"exp": [0, 0], "coef": "1"}]


def test_needs_asymptotic():
    with pytest.raises(TypeBError):
        jring.j_ring(algebra("B", 3, (1, 1)))
