from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracle import WindowGroup

from klcells.coxeter import CoxeterError, ResourceLimitError, coxeter_system, symmetric_group, type_b

CASES = [("A", 2), ("A", 3), ("B", 2), ("B", 3)]
SYSTEMS = {c: coxeter_system(*c) for c in CASES}


def window_group(W):
    return WindowGroup(W.family, W.rank + (1 if W.family == "A" else 0))


@pytest.mark.parametrize("case,order", [(("A", 2), 6), (("A", 3), 24), (("B", 2), 8), (("B", 3), 48)])
def test_orders(case, order):
    assert SYSTEMS[case].size == order


@pytest.mark.parametrize("case", CASES)
def test_lengths_and_products_match_bfs(case):
    W = SYSTEMS[case]
    G = window_group(W)
    assert set(G.length) == set(W.elements)
    for i, w in enumerate(W.elements):
        assert W.lengths[i] == G.length[w]
        assert len(W.reduced_word_idx(i)) == W.lengths[i]
        for s, g in enumerate(W.gens):
            assert W.elements[W.rmul[s][i]] == G.rmul(w, g)
    # composition (xy)(i) = x(y(i)) on windows
    for i, j in product(range(W.size), repeat=2):
        x, y = W.elements[i], W.elements[j]
        want = tuple(x[v - 1] if v > 0 else -x[-v - 1] for v in y)
        assert W.elements[W.mul_idx(i, j)] == want


@pytest.mark.parametrize("case", CASES)
def test_w0_and_inverse(case):
    W = SYSTEMS[case]
    assert W.lengths[W.w0] == max(W.lengths)
    for i in range(W.size):
        assert W.mul_idx(i, W.inv[i]) == 0
        assert W.lengths[W.mul_idx(i, W.w0)] == W.lengths[W.w0] - W.lengths[i]


@pytest.mark.parametrize("case", CASES)
def test_bruhat_by_subwords(case):
    W = SYSTEMS[case]
    for w in range(W.size):
        word = W.reduced_word_idx(w)
        below = set()
        for mask in range(1 << len(word)):
            x = 0
            for k, s in enumerate(word):
                if mask >> k & 1:
                    x = W.rmul[s][x]
            below.add(x)
        assert below == set(W.bruhat_below(w))


@given(st.sampled_from(CASES), st.data())
def test_coset_decompositions(case, data):
    W = SYSTEMS[case]
    w = data.draw(st.integers(0, W.size - 1))
    I = data.draw(st.sets(st.integers(0, len(W.gens) - 1)))
    WI = set(W.parabolic_elements(I))
    x, u = W.coset_decompose(w, I, "left")
    assert W.mul_idx(x, u) == w and u in WI and x in W.coset_reps(I, "left")
    assert W.lengths[w] == W.lengths[x] + W.lengths[u]
    y, v = W.coset_decompose(w, I, "right")
    assert W.mul_idx(v, y) == w and v in WI and y in W.coset_reps(I, "right")
    assert len(W.coset_reps(I)) * len(WI) == W.size


@given(st.lists(st.integers(0, 2), max_size=12))
def test_from_word_and_t_length(word):
    W = SYSTEMS[("B", 3)]
    w = W.from_word(word)
    x = 0
    for s in word:
        x = W.rmul[s][x]
    assert w == x
    assert W.t_length(w) == sum(1 for s in W.reduced_word_idx(w) if s == 0)


def test_dihedral():
    W = coxeter_system("I2", 2, m=5)
    assert W.size == 10
    assert W.lengths[W.w0] == 5
    assert W.from_word("s1s2s1s2s1") == W.from_word("s2s1s2s1s2")


def test_helpers_and_labels():
    assert symmetric_group(4).size == 24 and symmetric_group(4).rank == 3
    W = type_b(2)
    assert [W.label(i) for i in range(W.size)][:3] == ["1", "s0", "s1"]
    assert W.from_word("t") == W.from_word("s0")
    assert W.from_json(W.to_json(5)) == 5


def test_errors():
    with pytest.raises(CoxeterError):
        coxeter_system("D", 3)
    with pytest.raises(CoxeterError):
        coxeter_system("B", 0)
    with pytest.raises(ResourceLimitError):
        coxeter_system("B", 5)
    assert coxeter_system("B", 5, limit=5).size == 3840
    with pytest.raises(CoxeterError):
        coxeter_system("I2", 2)
    with pytest.raises(CoxeterError):
        SYSTEMS[("B", 2)].subset([7])
