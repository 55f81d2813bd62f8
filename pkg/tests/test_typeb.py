from itertools import permutations
from math import factorial, prod

import pytest
from conftest import algebra
from hypothesis import given
from hypothesis import strategies as st

from klcells import typeb
from klcells.cells import left_cells, two_sided_preorder

B_CASES = [("B", 2, "generic"), ("B", 2, (1, 3)), ("B", 3, "generic"), ("B", 3, (1, 3))]


def hook_count(shape):
    n = sum(shape)
    conj = [sum(1 for r in shape if r > j) for j in range(shape[0])] if shape else []
    hooks = prod(shape[i] - j + conj[j] - i - 1 for i in range(len(shape)) for j in range(shape[i]))
    return factorial(n) // hooks


@given(st.permutations(range(1, 7)))
def test_rs_shapes_and_standardness(w):
    P, Q = typeb.rs_classical(w)
    assert typeb.shape(P) == typeb.shape(Q)
    for T in (P, Q):
        assert all(list(r) == sorted(r) for r in T)
        assert all(T[i][j] < T[i + 1][j] for i in range(len(T) - 1) for j in range(len(T[i + 1])))
    # RS of the inverse swaps P and Q
    inv = [0] * len(w)
    for i, v in enumerate(w, start=1):
        inv[v - 1] = i
    assert typeb.rs_classical(inv) == (Q, P)


def test_rs_is_a_bijection():
    pairs = {typeb.rs_classical(w) for w in permutations(range(1, 6))}
    assert len(pairs) == 120


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_standard_tableaux_hook_formula(n):
    for lam in typeb.partitions(n):
        assert len(typeb.standard_tableaux(lam, tuple(range(1, n + 1)))) == hook_count(lam)
    assert sum(hook_count(l) ** 2 for l in typeb.partitions(n)) == factorial(n)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_bitableaux_count(n):
    total = sum(len(typeb.standard_bitableaux(lam, n)) ** 2 for lam in typeb.bipartitions(n))
    assert total == 2**n * factorial(n)
    assert len(typeb.bipartitions(n)) == {1: 2, 2: 5, 3: 10}[n]


@pytest.mark.parametrize("case", [("A", 2, "equal"), ("A", 3, "equal"), ("A", 4, "equal")] + B_CASES)
def test_invariant_matches_left_cells(case):
    assert typeb.invariant_matches_cells(algebra(*case)).ok


@pytest.mark.parametrize("case", B_CASES)
def test_decomposition_and_labels(case):
    alg = algebra(*case)
    W = alg.W
    assert typeb.check_decomposition(W).ok
    for w in range(W.size):
        d = typeb.bi_decompose(W, w)
        assert typeb.recompose(W, d) == w
        lam = typeb.bipartition_label(alg, w)
        assert sum(lam[1]) == typeb.t_length(W, w) == W.t_length(w)
        assert typeb.left_bitableau(alg, w) == typeb.right_bitableau(alg, W.inv[w])


def test_b2_labels(b2):
    W = b2.W
    assert typeb.bipartition_label(b2, 0) == ((2,), ())
    assert typeb.bipartition_label(b2, W.w0) == ((), (1, 1))


@pytest.mark.parametrize("case", B_CASES)
def test_e_basis_identities(case):
    alg = algebra(*case)
    reps = typeb.check_e_basis(alg)
    reps += [typeb.check_young_factorization(alg), typeb.check_t_step(alg), typeb.check_e_support(alg)]
    reps += [typeb.check_t_length_monotone(alg), typeb.check_right_translation(alg), typeb.check_cell_bijections(alg)]
    reps += typeb.check_cell_structure(alg)
    assert [(r.property, r.counterexamples) for r in reps if not r.ok] == []


@pytest.mark.parametrize("n", [2, 3])
def test_theta_compatibility(n):
    assert typeb.theta_compatibility(algebra("B", n), algebra("B", n, (1, 3))).ok


@pytest.mark.parametrize("case", B_CASES)
def test_cell_datum(case):
    alg = algebra(*case)
    datum = typeb.build_cell_datum(alg)
    reps = typeb.check_cell_datum(datum, all_elements=alg.W.size <= 8)
    assert all(r.ok for r in reps), [(r.property, r.counterexamples) for r in reps]
    js = datum.to_json()
    assert len(js["basis"]) == alg.W.size
    # two-sided cells are the label classes
    LR = two_sided_preorder(alg)
    for w in range(alg.W.size):
        for y in range(alg.W.size):
            same = typeb.bipartition_label(alg, w) == typeb.bipartition_label(alg, y)
            assert LR.equiv(w, y) == same


def test_non_asymptotic_rejected():
    alg = algebra("B", 3, (1, 1))
    with pytest.raises(typeb.TypeBError):
        typeb.require_asymptotic(alg)
    with pytest.raises(typeb.TypeBError):
        typeb.bipartition_label(alg, 0)


def test_sigma_subsets():
    W = algebra("B", 3).W
    assert typeb.sigma_subset(W, 0) == typeb.sn_subset(W)
    assert typeb.sigma_subset(W, 1) == frozenset({2})
    assert typeb.t_length(W, typeb.a_l_element(W, 2)) == 2
    assert len(left_cells(algebra("B", 3)).cells) == sum(len(typeb.standard_bitableaux(l, 3)) for l in typeb.bipartitions(3))
