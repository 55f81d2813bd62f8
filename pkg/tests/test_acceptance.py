"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import io
import time

import pytest
from conftest import algebra
from expb2 import LEFT_CELLS, PHI_C_S0, PHI_C_S1, PHI_T_S0, PHI_T_S1, TABLE1
from oracle import oracle_for, to_windows

from klcells import cli, jring, typeb
from klcells.cells import afunction_data, approx_check, cell_partition, check_properties, left_cells, right_cell_bijection
from klcells.grpring import RationalFraction, specialize
from klcells.parabolic import check_indep, induce_cell

B_ASYM = [("B", 2, "generic"), ("B", 2, (1, 3)), ("B", 3, "generic"), ("B", 3, (1, 3))]


@pytest.fixture
def verdict(capsys):
    def report(num, title, ok, detail=""):
        with capsys.disabled():
            print(f"\nACCEPTANCE {num:2d} {title}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
        assert ok, detail

    return report


def _failures(reports):
    return [(r.property, r.counterexamples[:3]) for r in reports if not r.ok]


def test_01_table1(verdict):
    t = time.perf_counter()
    buf = io.StringIO()
    code = cli.run(cli.JobConfig("table1"), stdout=buf)
    elapsed = time.perf_counter() - t
    got = [[int(x) for x in line.split(",")] for line in buf.getvalue().split()]
    ok = code == 0 and got == TABLE1 and elapsed < 5
    verdict(1, "B2 phi table reproduction", ok, f"64 entries, {elapsed:.2f}s")


def test_02_b2_golden_formulas(verdict):
    alg = algebra("B", 2)
    W = alg.W
    M = jring.phi_matrix(alg, lusztig=False)
    ok = {W.label(z): v for z, v in M[W.from_word("s0")].items()} == PHI_C_S0
    ok &= {W.label(z): v for z, v in M[W.from_word("s1")].items()} == PHI_C_S1
    P = jring.canonical_phi(alg)
    zero = RationalFraction(alg.zero)
    for gen, want in (("s0", PHI_T_S0), ("s1", PHI_T_S1)):
        got = P.on_T(W.from_word(gen))
        ok &= all(got[u] == want.get(W.label(u), zero) for u in range(W.size))
    verdict(2, "B2 golden phi and Phi formulas", ok)


def test_03_b2_left_cells(verdict):
    ok = True
    want = sorted(sorted(c) for c in LEFT_CELLS)
    for weights in ("generic", (1, 3)):
        alg = algebra("B", 2, weights)
        W = alg.W
        cells = left_cells(alg).cells
        ok &= sorted(sorted(W.label(w) for w in c) for c in cells) == want
        D = afunction_data(alg).D
        ok &= sorted(D) == [w for w in range(W.size) if W.inv[w] == w]
        ok &= all(sum(1 for d in D if d in c) == 1 for c in cells)
    verdict(3, "B2 left cells and D = involutions", ok)


def test_04_spadesuit(verdict):
    bad, t3 = [], 0.0
    for case in B_ASYM:
        t = time.perf_counter()
        rep = check_properties(algebra(*case), ["spadesuit"])[0]
        if case[1] == 3:
            t3 = max(t3, time.perf_counter() - t)
        if not rep.ok:
            bad.append((case, rep.counterexamples[:3]))
    verdict(4, "spadesuit on B2, B3", not bad and t3 < 120, f"B3 scan {t3:.2f}s {bad or ''}")


def test_05_relative_spadesuit(verdict):
    bad, n = [], 0
    for case in [("A", 2, "equal"), ("A", 3, "equal")] + B_ASYM:
        reps = check_properties(algebra(*case), ["relative_spadesuit"])
        n += len(reps)
        bad += [(case, f) for f in _failures(reps)]
    verdict(5, "relative spadesuit for every parabolic subset", not bad, f"{n} (group, I) pairs {bad or ''}")


def test_06_kl_basis(verdict):
    ok = True
    for case in B_ASYM + [("A", 3, "equal")]:
        alg = algebra(*case)
        O, win = oracle_for(alg)
        W = alg.W
        for w in range(W.size):
            C = to_windows(alg.P[w], win)
            ok &= O.bar(C) == C and alg.P[w][w] == alg.one
            ok &= all(p.in_region("<0") and W.bruhat_leq_idx(y, w) for y, p in alg.P[w].items() if y != w)
    g, s = algebra("B", 3), algebra("B", 3, (1, 3))
    for x in range(48):
        for y in range(48):
            ok &= {z: specialize(h, 1, 3) for z, h in g.h_table[x][y].items()} == s.h_table[x][y]
    ok &= typeb.theta_compatibility(g, s).ok
    verdict(6, "KL basis bar-invariance, triangularity, theta agreement", ok)


def test_07_cellular_axioms(verdict):
    bad = []
    for case in B_ASYM:
        alg = algebra(*case)
        datum = typeb.build_cell_datum(alg)
        reps = typeb.check_cell_datum(datum)
        if alg.W.size <= 8:
            reps += typeb.check_cell_datum(datum, all_elements=True)
        bad += [(case, f) for f in _failures(reps)]
        # every generator against every lambda is covered
        bad += [] if len(datum.lambdas) == len(typeb.bipartitions(alg.W.rank)) else [(case, "lambdas")]
    verdict(7, "cellular axioms C1 C2 C3", not bad, str(bad or ""))


def test_08_cell_invariants(verdict):
    bad = []
    for case in [("A", 2, "equal"), ("A", 3, "equal"), ("A", 4, "equal")] + B_ASYM:
        if not typeb.invariant_matches_cells(algebra(*case)).ok:
            bad.append(case)
    verdict(8, "combinatorial invariant classes = left cells", not bad, str(bad or ""))


def test_09_j_ring(verdict):
    alg = algebra("B", 2)
    reps = jring.check_jring(alg, associativity=True)
    reps.append(jring.check_weak_p15(alg))
    reps += jring.check_embedding(alg)
    names = {r.property for r in reps}
    needed = {"unit T_1 = sum n_hat_z t_z", "gamma_hat = gamma", "weak P15", "J_lambda = M_d(Z)", "associativity"}
    ok = needed <= names and not _failures(reps)
    verdict(9, "J_2 suite", ok, str(_failures(reps) or ""))


def test_10_phi_specialization(verdict):
    alg = algebra("B", 2)
    P = jring.canonical_phi(alg)
    pairs = [(w, z) for w in range(8) for z in range(8)]
    ok = all(P.phi_c[w][z].theta1() == (w == z) for w, z in pairs)
    ok &= all(P.phi_c[w][z] == P.phi_c[w][z].bar() for w, z in pairs)
    ok &= all(P.phi_g[w][z] == P.phi_g[w][z].bar() for w, z in pairs)
    verdict(10, "theta_1(Phi) = delta and bar-invariance", ok, f"{len(pairs)} pairs")


def test_11_lusztig_properties(verdict):
    bad = []
    for case in B_ASYM:
        reps = check_properties(algebra(*case), ["P1", "P2", "P3", "P4", "P5", "P6", "P7", "P8", "P11"])
        bad += [(case, f) for f in _failures(reps)]
    verdict(11, "P1-P8 and P11 on B2, B3", not bad, str(bad or ""))


def test_12_induction(verdict):
    bad, induced, pairs = [], 0, 0
    for case in [("B", 3, "generic"), ("B", 3, (1, 3))]:
        alg = algebra(*case)
        for I in alg.W.all_subsets():
            cells = cell_partition(alg, "L", I, within="WI").cells
            for c in cells:
                ind = induce_cell(alg, I, c)
                induced += 1
                if not ind.ok:
                    bad.append((case, sorted(I), c))
            for c in cells:
                for c1 in cells:
                    if c is c1 or len(c) != len(c1):
                        continue
                    bij = right_cell_bijection(alg, c, c1, I)
                    if bij is None or not approx_check(alg, c, c1, bij, I).passed:
                        continue
                    pairs += 1
                    if not check_indep(alg, I, c, c1, bij).ok:
                        bad.append((case, sorted(I), c, c1))
    verdict(12, "induction of cells on B3", not bad and pairs > 0, f"{induced} induced cells, {pairs} related pairs {bad or ''}")
