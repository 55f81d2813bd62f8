"""Schur elements, the ring J_n, Lusztig's homomorphism phi and the canonical map Phi.

Everything is kept inside A = Z[Gamma]: whenever a formula divides by Schur
elements we multiply through by their product first.  Only the inverse of
the specialized matrix theta_1(h_{w,d_z,z}) needs rationals, and that is
computed by fraction-free elimination over Z.

Conventions.  d_z is the involution in the left cell of z.  In J_n,
``gamma_hat[(x, y, z)]`` is the coefficient of t_z in t_x t_y, which is
gamma_hat_{x,y,z^{-1}} in the usual notation.  Phi is returned in the basis
{c_z} of the group algebra (c_z the image of C_z under theta_1), where its
coefficients are bar-invariant and specialize to the Kronecker delta; the
expansion in group elements is available separately.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .cells import (
    PropertyReport,
    _Collector,
    afunction_data,
    left_cells,
    left_preorder,
    right_preorder,
    two_sided_preorder,
)
from .grpring import GroupRingElement as GRE
from .grpring import RationalFraction
from .hecke import HeckeAlgebra, Vec, vadd
from .typeb import bipartition_label, require_asymptotic

Matrix = list[list[GRE]]


class JRingError(ArithmeticError):
    pass


# exact linear algebra over Z and Q
def bareiss_inverse(M: Sequence[Sequence[int]]) -> tuple[int, list[list[int]]]:
    """Fraction-free Gauss-Jordan on [M | I]; returns (d, N) with M^{-1} = N / d."""
    n = len(M)
    A = [[int(v) for v in row] + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(M)]
    prev = 1
    for k in range(n):
        p = next((i for i in range(k, n) if A[i][k]), None)
        if p is None:
            raise JRingError("singular matrix")
        A[k], A[p] = A[p], A[k]
        piv = A[k][k]
        for i in range(n):
            if i == k:
                continue
            f = A[i][k]
            row = A[i]
            for j in range(2 * n):
                q, r = divmod(piv * row[j] - f * A[k][j], prev)
                if r:
                    raise JRingError("inexact division in fraction-free elimination")
                row[j] = q
        prev = piv
    # every diagonal entry now equals the last pivot d, and the right block is d * M^{-1}
    d = prev
    if any(A[i][i] != d for i in range(n)):
        raise JRingError("elimination did not reach a scalar diagonal")
    return d, [row[n:] for row in A]


def rational_inverse(M: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    d, N = bareiss_inverse(M)
    return [[Fraction(v, d) for v in row] for row in N]


def rank_over_q(M: Sequence[Sequence[int | Fraction]]) -> int:
    A = [[Fraction(v) for v in row] for row in M]
    r = 0
    cols = len(A[0]) if A else 0
    for c in range(cols):
        p = next((i for i in range(r, len(A)) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c] / A[r][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        r += 1
    return r


# cell data shared by everything below
@dataclass
class CellData:
    alg: HeckeAlgebra
    labels: list  # bipartition per element
    lambdas: list  # in order of first appearance
    reps: dict  # lambda -> sorted representative left cell
    d_of: list[int]  # d_z
    D: list[int]  # involutions
    L: object
    R: object
    LR: object

    def lam_index(self, w: int) -> int:
        return self.lambdas.index(self.labels[w])


def cell_data(alg: HeckeAlgebra) -> CellData:
    if "jcells" in alg.cache:
        return alg.cache["jcells"]
    require_asymptotic(alg)
    W = alg.W
    L, R, LR = left_preorder(alg), right_preorder(alg), two_sided_preorder(alg)
    labels = [bipartition_label(alg, w) for w in range(W.size)]
    lambdas: list = []
    reps: dict = {}
    for c in left_cells(alg).cells:
        lam = labels[c[0]]
        if lam not in reps:
            lambdas.append(lam)
            reps[lam] = sorted(c)
    D = [z for z in range(W.size) if W.inv[z] == z]
    d_of = []
    for z in range(W.size):
        ds = [d for d in D if L.equiv(d, z)]
        if len(ds) != 1:
            raise JRingError(f"left cell of {W.label(z)} holds {len(ds)} involutions")
        d_of.append(ds[0])
    data = CellData(alg, labels, lambdas, reps, d_of, D, L, R, LR)
    alg.cache["jcells"] = data
    return data


# left cell representations and Schur elements
def cell_rep(alg: HeckeAlgebra, cell: Sequence[int], cvec: Vec) -> Matrix:
    """X(h)_{ij} = sum_w c_w h_{w, x_j, x_i} for h = sum_w c_w C_w."""
    H = alg.h_table
    d = len(cell)
    out = [[alg.zero] * d for _ in range(d)]
    for w, c in cvec.items():
        for j, xj in enumerate(cell):
            col = H[w][xj]
            for i, xi in enumerate(cell):
                h = col.get(xi)
                if h is not None:
                    out[i][j] = out[i][j] + c * h
    return out


def _trace(m: Matrix, zero: GRE) -> GRE:
    acc = zero
    for i in range(len(m)):
        acc = acc + m[i][i]
    return acc


def cd_product(alg: HeckeAlgebra, x: int, y: int) -> Vec:
    """C_x D_{y^{-1}} in the T-basis."""
    return alg.t_mul(alg.P[x], alg.D(y))


@dataclass
class SchurData:
    lambdas: list
    reps: dict
    dims: dict
    c: dict  # lambda -> Schur element in A

    def product(self, skip=None) -> GRE:
        acc = None
        for lam in self.lambdas:
            if lam == skip:
                continue
            acc = self.c[lam] if acc is None else acc * self.c[lam]
        return acc


def schur_elements(alg: HeckeAlgebra) -> SchurData:
    if "schur" in alg.cache:
        return alg.cache["schur"]
    cd = cell_data(alg)
    c = {}
    for lam in cd.lambdas:
        x1 = cd.reps[lam][0]
        m = cell_rep(alg, cd.reps[lam], alg.to_C(cd_product(alg, x1, x1)))
        val = _trace(m, alg.zero)
        if val.is_zero():
            raise JRingError(f"Schur element of {lam} vanishes")
        c[lam] = val
    data = SchurData(list(cd.lambdas), cd.reps, {l: len(cd.reps[l]) for l in cd.lambdas}, c)
    alg.cache["schur"] = data
    return data


def check_schur(alg: HeckeAlgebra, matrix_units: bool = True) -> list[PropertyReport]:
    """theta_1(c_lambda) = |W|/d_lambda, tau = sum chi/c on every T_w, and the matrix units."""
    sd = schur_elements(alg)
    W = alg.W
    th = _Collector("theta1(c_lambda) = |W|/d_lambda")
    for lam in sd.lambdas:
        th.check(sd.c[lam].theta1() * sd.dims[lam] == W.size, (lam, str(sd.c[lam])))
    tr = _Collector("tau = sum chi_lambda / c_lambda")
    full = sd.product()
    others = {lam: sd.product(skip=lam) for lam in sd.lambdas}
    for w in range(W.size):
        cw = alg.to_C(alg.T(w))
        acc = alg.zero
        for lam in sd.lambdas:
            acc = acc + _trace(cell_rep(alg, sd.reps[lam], cw), alg.zero) * others[lam]
        tr.check(acc == (full if w == 0 else alg.zero), W.label(w))
    out = [th.report(), tr.report()]
    if matrix_units:
        mu_col = _Collector("matrix units C_xi D_xj^-1")
        for lam in sd.lambdas:
            cell = sd.reps[lam]
            for i, xi in enumerate(cell):
                for j, xj in enumerate(cell):
                    cv = alg.to_C(cd_product(alg, xi, xj))
                    for mu in sd.lambdas:
                        m = cell_rep(alg, sd.reps[mu], cv)
                        ok = all(
                            m[a][b] == (sd.c[lam] if (mu == lam and a == i and b == j) else alg.zero)
                            for a in range(len(m))
                            for b in range(len(m))
                        )
                        mu_col.check(ok, (W.label(xi), W.label(xj), mu))
        out.append(mu_col.report())
    return out


def check_cd_transport(alg: HeckeAlgebra) -> PropertyReport:
    """C_x D_{y^-1} = C_x1 D_{y1^-1} for left cells in one R_lambda, x1 ~_R x."""
    cd = cell_data(alg)
    W = alg.W
    col = _Collector("C_x D_y^-1 transport along right cells")
    by_lam: dict = {}
    for c in left_cells(alg).cells:
        by_lam.setdefault(cd.labels[c[0]], []).append(sorted(c))
    for lam, cs in by_lam.items():
        base = cs[0]
        for c1 in cs[1:]:
            bij = {x: next(y for y in c1 if cd.R.equiv(x, y)) for x in base}
            for x in base:
                for y in base:
                    col.check(cd_product(alg, x, y) == cd_product(alg, bij[x], bij[y]), (W.label(x), W.label(y)))
    return col.report()


# the ring J_n
def n_hat(alg: HeckeAlgebra, lusztig: bool = True) -> list[int]:
    """n_hat_w = n_d with d the involution in the left cell of w^{-1}; all 1 if not lusztig."""
    W = alg.W
    if not lusztig:
        return [1] * W.size
    cd = cell_data(alg)
    n = afunction_data(alg).n
    return [n[cd.d_of[W.inv[w]]] for w in range(W.size)]


@dataclass
class JRing:
    """Abstract J_n on symbols t_w; gamma_hat[(x, y, z)] is the coefficient of t_z in t_x t_y."""

    size: int
    n_hat: list[int]
    gamma_hat: dict[tuple[int, int, int], int]
    unit: dict[int, int] = field(default_factory=dict)
    _rows: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        for (x, y, z), c in self.gamma_hat.items():
            self._rows.setdefault((x, y), []).append((z, c))

    def mul_basis(self, x: int, y: int) -> list[tuple[int, int]]:
        return self._rows.get((x, y), [])

    def mul(self, a: dict, b: dict, zero=0) -> dict:
        out: dict = {}
        for x, cx in a.items():
            for y, cy in b.items():
                for z, g in self._rows.get((x, y), ()):
                    out[z] = out.get(z, zero) + cx * cy * g
        return {z: c for z, c in out.items() if c}


def j_ring(alg: HeckeAlgebra, lusztig: bool = True) -> JRing:
    key = ("jring", lusztig)
    if key in alg.cache:
        return alg.cache[key]
    cd = cell_data(alg)
    W = alg.W
    nh = n_hat(alg, lusztig)
    L, R = cd.L, cd.R
    gh = {}
    for x in range(W.size):
        for y in range(W.size):
            if not L.equiv(x, W.inv[y]):
                continue
            zs = [z for z in range(W.size) if R.equiv(x, z) and L.equiv(z, y)]
            if len(zs) != 1:
                raise JRingError(f"{len(zs)} elements in the right cell of x and left cell of y")
            gh[(x, y, zs[0])] = nh[y]
    unit = {z: nh[z] for z in cd.D}
    ring = JRing(W.size, nh, gh, unit)
    alg.cache[key] = ring
    return ring


def gamma_table(alg: HeckeAlgebra) -> dict[tuple[int, int, int], int]:
    """gamma_{x,y,z^{-1}} keyed as (x, y, z), from the a-function data."""
    W = alg.W
    return {(x, y, W.inv[zi]): c for (x, y, zi), c in afunction_data(alg).gamma.items()}


def check_jring(alg: HeckeAlgebra, associativity: bool = True) -> list[PropertyReport]:
    cd = cell_data(alg)
    W = alg.W
    J = j_ring(alg)
    out = []
    col = _Collector("gamma_hat values and support")
    for (x, y, z), c in J.gamma_hat.items():
        ok = c in (1, -1) and cd.L.equiv(x, W.inv[y]) and cd.L.equiv(y, z) and cd.R.equiv(z, x)
        col.check(ok, (W.label(x), W.label(y), W.label(z)))
    dims = {lam: len(cd.reps[lam]) for lam in cd.lambdas}
    col.check(len(J.gamma_hat) == sum(d**3 for d in dims.values()), ("count", len(J.gamma_hat)))
    out.append(col.report())
    fin = _Collector("gamma_hat = gamma")
    g = gamma_table(alg)
    for key in set(g) | set(J.gamma_hat):
        fin.check(g.get(key, 0) == J.gamma_hat.get(key, 0), tuple(W.label(v) for v in key))
    out.append(fin.report())
    un = _Collector("unit of J")
    for w in range(W.size):
        tw = {w: 1}
        un.check(J.mul(J.unit, tw) == tw and J.mul(tw, J.unit) == tw, W.label(w))
    out.append(un.report())
    if associativity:
        asc = _Collector("associativity")
        for x in range(W.size):
            for y in range(W.size):
                xy = J.mul({x: 1}, {y: 1})
                for z in range(W.size):
                    asc.check(J.mul(xy, {z: 1}) == J.mul({x: 1}, J.mul({y: 1}, {z: 1})), (x, y, z))
        out.append(asc.report())
    out.append(check_matrix_rings(alg))
    return out


def check_matrix_rings(alg: HeckeAlgebra) -> PropertyReport:
    """J_lambda ≅ M_d(Z): t_hat_w -> E_{right cell of w, left cell of w} is multiplicative."""
    cd = cell_data(alg)
    W = alg.W
    J = j_ring(alg, lusztig=False)
    col = _Collector("J_lambda = M_d(Z)")
    for lam in cd.lambdas:
        elems = [w for w in range(W.size) if cd.labels[w] == lam]
        lcells, rcells = [], []
        for w in elems:
            if not any(cd.L.equiv(w, c[0]) for c in lcells):
                lcells.append([v for v in elems if cd.L.equiv(v, w)])
        li = {w: next(i for i, c in enumerate(lcells) if w in c) for w in elems}
        # right cell i is the inverse of left cell i
        for c in lcells:
            rcells.append(sorted(W.inv[v] for v in c))
        ri = {w: next(i for i, c in enumerate(rcells) if w in c) for w in elems}
        d = len(lcells)
        pos = {w: (ri[w], li[w]) for w in elems}
        col.check(d * d == len(elems) and len(set(pos.values())) == len(elems), ("rank", lam))
        for x in elems:
            for y in elems:
                prod = J.mul({x: 1}, {y: 1})
                (i, j), (k, l) = pos[x], pos[y]
                if j == k:
                    z = next(v for v in elems if pos[v] == (i, l))
                    col.check(prod == {z: 1}, (W.label(x), W.label(y)))
                else:
                    col.check(prod == {}, (W.label(x), W.label(y)))
    return col.report()


def check_weak_p15(alg: HeckeAlgebra, sample: int | None = None) -> PropertyReport:
    """sum_z h_{w,z,y} gh_{x,x',z^-1} = sum_z h_{w,x,z} gh_{z,x',y^-1} when y ~_L x' ~_R x^-1."""
    cd = cell_data(alg)
    W = alg.W
    J = j_ring(alg)
    H = alg.h_table
    col = _Collector("weak P15")
    triples = [
        (x, xp, y)
        for x in range(W.size)
        for xp in range(W.size)
        if cd.R.equiv(xp, W.inv[x])
        for y in range(W.size)
        if cd.L.equiv(y, xp)
    ]
    if sample is not None:
        triples = triples[:: max(1, len(triples) // sample)]
    for x, xp, y in triples:
        left_terms = [(z, c) for z, c in J.mul_basis(x, xp)]
        right_z = [(z, c) for z in range(W.size) for zz, c in J.mul_basis(z, xp) if zz == y]
        for w in range(W.size):
            lhs = alg.zero
            for z, c in left_terms:
                h = H[w][z].get(y)
                if h is not None:
                    lhs = lhs + h * c
            rhs = alg.zero
            for z, c in right_z:
                h = H[w][x].get(z)
                if h is not None:
                    rhs = rhs + h * c
            col.check(lhs == rhs, (W.label(w), W.label(x), W.label(xp), W.label(y)))
    return col.report()


# the embedding J_n -> H_K, checked with cleared denominators
def check_embedding(alg: HeckeAlgebra, sample: int | None = None) -> list[PropertyReport]:
    """Expansion identity, product rule, unit identity and phi o delta = id on t_hat."""
    cd = cell_data(alg)
    sd = schur_elements(alg)
    W = alg.W
    H = alg.h_table
    J = j_ring(alg)
    nh = J.n_hat
    full = sd.product()
    cof = {lam: sd.product(skip=lam) for lam in sd.lambdas}
    CD = {z: cd_product(alg, z, cd.d_of[z]) for z in range(W.size)}
    ws = list(range(W.size))
    if sample is not None:
        ws = ws[:: max(1, W.size // sample)]

    exp_col = _Collector("expansion C_w = sum h_{w,d_z,z} C_z D_dz / c")
    for w in ws:
        lhs = {y: c * full for y, c in alg.P[w].items()}
        rhs: Vec = {}
        for z in range(W.size):
            h = H[w][cd.d_of[z]].get(z)
            if h is not None:
                vadd(rhs, CD[z], h * cof[cd.labels[z]])
        exp_col.check(_clean(lhs) == _clean(rhs), W.label(w))

    prod_col = _Collector("product rule")
    for z in ws:
        for w in range(W.size):
            got = alg.t_mul(CD[z], CD[w])
            if cd.R.equiv(w, W.inv[z]):
                u = next(v for v in range(W.size) if cd.R.equiv(z, v) and cd.L.equiv(v, w))
                want = {y: c * sd.c[cd.labels[z]] for y, c in CD[u].items()}
            else:
                want = {}
            prod_col.check(_clean(got) == _clean(want), (W.label(z), W.label(w)))

    unit_col = _Collector("unit T_1 = sum n_hat_z t_z")
    acc: Vec = {}
    for z in cd.D:
        # n_hat_z t_z = n_hat_z^2 t_hat_z = t_hat_z
        vadd(acc, CD[z], cof[cd.labels[z]] * (nh[z] * nh[z]))
    unit_col.check(_clean(acc) == {0: full}, "T_1")

    phd = _Collector("phi(t_hat_w^delta) = t_hat_w")
    M = phi_matrix(alg)
    for w in ws:
        # c t_hat_w = C_w D_dw = sum_y a_y C_y, so phi((C_w D_dw)^delta) = sum_y a_y phi(C_y^delta)
        coords = alg.to_C(CD[w])
        got: dict = {}
        for y, a in coords.items():
            for z, m in M[y].items():
                got[z] = got.get(z, alg.zero) + a * m
        got = {z: c for z, c in got.items() if c}
        want = {w: sd.c[cd.labels[w]] * nh[w]}
        phd.check(got == want, W.label(w))
    return [exp_col.report(), prod_col.report(), unit_col.report(), phd.report()]


def _clean(v: Vec) -> Vec:
    return {k: c for k, c in v.items() if c}


# phi and Phi
def phi_matrix(alg: HeckeAlgebra, lusztig: bool = True) -> list[dict[int, GRE]]:
    """Row w holds phi(C_w^delta) = sum_z h_{w,d_z,z} n_hat_z t_z."""
    key = ("phi", lusztig)
    if key in alg.cache:
        return alg.cache[key]
    cd = cell_data(alg)
    nh = n_hat(alg, lusztig)
    H = alg.h_table
    W = alg.W
    rows = []
    for w in range(W.size):
        row = {}
        for z in range(W.size):
            h = H[w][cd.d_of[z]].get(z)
            if h is not None:
                row[z] = h * nh[z]
        rows.append(row)
    alg.cache[key] = rows
    return rows


def theta_table(alg: HeckeAlgebra, order: Sequence[int] | None = None) -> list[list[int]]:
    """theta_1(h_{w,d_z,z}) with rows and columns in the given element order."""
    W = alg.W
    order = list(range(W.size)) if order is None else list(order)
    M = phi_matrix(alg, lusztig=False)
    return [[M[w].get(z, alg.zero).theta1() for z in order] for w in order]


TABLE1_ORDER = ["1", "s1", "s0", "s1s0", "s1s0s1", "s0s1", "s0s1s0", "s1s0s1s0"]


def table1(alg: HeckeAlgebra) -> list[list[int]]:
    W = alg.W
    if W.family != "B" or W.rank != 2:
        raise JRingError("the phi table is defined for B2 only")
    return theta_table(alg, [W.from_word(x) for x in TABLE1_ORDER])


def check_phi_hom(alg: HeckeAlgebra, lusztig: bool = True) -> list[PropertyReport]:
    """phi(C_x^d C_y^d) = phi(C_x^d) phi(C_y^d), phi(T_1) = unit, and agreement with the equal a-value reduction."""
    W = alg.W
    H = alg.h_table
    M = phi_matrix(alg, lusztig)
    J = j_ring(alg, lusztig)
    hom = _Collector("phi multiplicative")
    for x in range(W.size):
        for y in range(W.size):
            lhs: dict = {}
            for z, h in H[x][y].items():
                for u, m in M[z].items():
                    lhs[u] = lhs.get(u, alg.zero) + h * m
            lhs = {u: c for u, c in lhs.items() if c}
            rhs = J.mul(M[x], M[y], alg.zero)
            hom.check(lhs == rhs, (W.label(x), W.label(y)))
    un = _Collector("phi(T_1) is the unit")
    un.check(M[0] == {z: alg.one * c for z, c in J.unit.items()}, "T_1")
    lu = _Collector("phi through equal a-values")
    a = afunction_data(alg).a
    cd = cell_data(alg)
    nh = J.n_hat
    for w in range(W.size):
        row = {}
        for z in range(W.size):
            acc = alg.zero
            for d in cd.D:
                if a[z] == a[d]:
                    h = H[w][d].get(z)
                    if h is not None:
                        acc = acc + h
            if acc:
                row[z] = acc * nh[z]
        lu.check(row == M[w], W.label(w))
    return [hom.report(), un.report(), lu.report()]


def check_beta(alg: HeckeAlgebra) -> PropertyReport:
    """beta(c_x) beta(c_y) = sum_z theta_1(h_{x,y,z}) beta(c_z) and theta table invertible."""
    W = alg.W
    H = alg.h_table
    M1 = [{z: m.theta1() for z, m in row.items() if m.theta1()} for row in phi_matrix(alg, lusztig=False)]
    J = j_ring(alg, lusztig=False)
    col = _Collector("beta multiplicative")
    col.check(rank_over_q(theta_table(alg)) == W.size, "invertible")
    for x in range(W.size):
        for y in range(W.size):
            lhs: dict = {}
            for z, h in H[x][y].items():
                t = h.theta1()
                for u, m in M1[z].items():
                    lhs[u] = lhs.get(u, 0) + t * m
            lhs = {u: c for u, c in lhs.items() if c}
            col.check(lhs == J.mul(M1[x], M1[y]), (W.label(x), W.label(y)))
    return col.report()


def check_phi_action_defect(alg: HeckeAlgebra) -> PropertyReport:
    """C_w.eps_x - phi(C_w^delta) * eps_x lies in the span of eps_y with y <_LR x."""
    cd = cell_data(alg)
    W = alg.W
    H = alg.h_table
    J = j_ring(alg)
    nh = J.n_hat
    M = phi_matrix(alg)
    col = _Collector("phi action defect")
    for w in range(W.size):
        for x in range(W.size):
            diff = dict(H[w][x])
            for z, m in M[w].items():
                for y, g in J.mul_basis(z, x):
                    diff[y] = diff.get(y, alg.zero) - m * (g * nh[x] * nh[y])
            for y, c in diff.items():
                if c:
                    col.check(cd.LR.leq(y, x) and not cd.LR.equiv(y, x), (W.label(w), W.label(x), W.label(y)))
    return col.report()


@dataclass
class PhiData:
    """Phi(C_w) = sum_z phi_c[w][z] c_z = sum_u phi_g[w][u] u."""

    alg: HeckeAlgebra
    theta: list[list[int]]
    det: int
    phi_c: list[list[RationalFraction]]
    phi_g: list[list[RationalFraction]]

    def on_T(self, w: int) -> list[RationalFraction]:
        """Phi(T_w) in group elements, through T_w = sum_y ptilde_{y,w} C_y."""
        alg = self.alg
        out = [RationalFraction(alg.zero) for _ in range(alg.W.size)]
        for y, c in alg.ptilde(w).items():
            for u in range(alg.W.size):
                out[u] = out[u] + self.phi_g[y][u] * RationalFraction(c)
        return out


def canonical_phi(alg: HeckeAlgebra) -> PhiData:
    if "Phi" in alg.cache:
        return alg.cache["Phi"]
    W = alg.W
    N = W.size
    M = phi_matrix(alg, lusztig=False)
    M1 = theta_table(alg)
    try:
        det, adj = bareiss_inverse(M1)
    except JRingError as e:
        raise JRingError(f"specialized matrix is singular: {e}") from None
    dconst = GRE.const(det, alg.k)
    phi_c = []
    for w in range(N):
        row = []
        for z in range(N):
            acc = alg.zero
            for y, m in M[w].items():
                if adj[y][z]:
                    acc = acc + m * adj[y][z]
            row.append(_reduce(RationalFraction(acc, dconst)))
        phi_c.append(row)
    P1 = [[alg.pstar(u, y).theta1() for u in range(N)] for y in range(N)]
    phi_g = []
    for w in range(N):
        row = []
        for u in range(N):
            acc = RationalFraction(alg.zero)
            for y in range(N):
                if P1[y][u]:
                    acc = acc + phi_c[w][y] * P1[y][u]
            row.append(_reduce(acc))
        phi_g.append(row)
    data = PhiData(alg, M1, det, phi_c, phi_g)
    alg.cache["Phi"] = data
    return data


def _reduce(rf: RationalFraction) -> RationalFraction:
    """Normalize num/den with constant den to lowest terms and positive den."""
    if not rf.den.is_constant():
        return rf
    d = rf.den.constant_term()
    g = d
    for _, c in rf.num:
        g = gcd(g, c)
    if d < 0:
        g = -abs(g)
    else:
        g = abs(g)
    if g in (0, 1):
        return rf
    return RationalFraction(GRE._raw({e: c // g for e, c in rf.num}, rf.num.k), GRE.const(d // g, rf.num.k))


def rf_terms(rf: RationalFraction) -> dict[tuple[int, ...], Fraction]:
    """Exponent -> rational coefficient, for a fraction with constant denominator."""
    if not rf.den.is_constant():
        raise JRingError("non-constant denominator")
    d = rf.den.constant_term()
    return {e: Fraction(c, d) for e, c in rf.num}


def check_phi(alg: HeckeAlgebra) -> list[PropertyReport]:
    """theta_1(Phi_{w,z}) = delta_{wz} and bar-invariance, in the c-basis; group-basis bar-invariance."""
    P = canonical_phi(alg)
    W = alg.W
    th = _Collector("theta1(Phi_wz) = delta_wz")
    br = _Collector("Phi_wz bar-invariant")
    for w in range(W.size):
        for z in range(W.size):
            f = P.phi_c[w][z]
            th.check(f.theta1() == (1 if w == z else 0), (W.label(w), W.label(z)))
            br.check(f == f.bar() and P.phi_g[w][z] == P.phi_g[w][z].bar(), (W.label(w), W.label(z)))
    hom = _Collector("Phi multiplicative")
    H = alg.h_table
    pairs = [(x, y) for x in W.gen_index for y in range(W.size)]
    for x, y in pairs:
        lhs = _group_mul(W, P.phi_g[x], P.phi_g[y])
        rhs = [RationalFraction(alg.zero) for _ in range(W.size)]
        for z, h in H[x][y].items():
            for u in range(W.size):
                rhs[u] = rhs[u] + P.phi_g[z][u] * RationalFraction(h)
        hom.check(all(a == b for a, b in zip(lhs, rhs)), (W.label(x), W.label(y)))
    return [th.report(), br.report(), hom.report()]


def _group_mul(W, a: list[RationalFraction], b: list[RationalFraction]) -> list[RationalFraction]:
    out = [RationalFraction(GRE.zero(a[0].k)) for _ in range(W.size)]
    for u, cu in enumerate(a):
        if cu.is_zero():
            continue
        for v, cv in enumerate(b):
            if cv.is_zero():
                continue
            g = W.mul_idx(u, v)
            out[g] = out[g] + cu * cv
    return [_reduce(x) for x in out]


def check_phi_defect(alg: HeckeAlgebra) -> PropertyReport:
    """h.eps_x - Phi(h) <> eps_x only involves y <_LR x, for h = C_w."""
    cd = cell_data(alg)
    P = canonical_phi(alg)
    W = alg.W
    H = alg.h_table
    col = _Collector("Phi defect")
    th = [[{z: h.theta1() for z, h in H[y][x].items()} for x in range(W.size)] for y in range(W.size)]
    for w in range(W.size):
        for x in range(W.size):
            diff = {y: RationalFraction(h) for y, h in H[w][x].items()}
            for y in range(W.size):
                c = P.phi_c[w][y]
                if c.is_zero():
                    continue
                for z, t in th[y][x].items():
                    if t:
                        diff[z] = diff.get(z, RationalFraction(alg.zero)) - c * t
            for y, c in diff.items():
                if not c.is_zero():
                    col.check(cd.LR.leq(y, x) and not cd.LR.equiv(y, x), (W.label(w), W.label(x), W.label(y)))
    return col.report()


def phi_json(alg: HeckeAlgebra, lusztig: bool = False) -> dict:
    W = alg.W
    M = phi_matrix(alg, lusztig)
    return {
        "rows": [W.label(w) for w in range(W.size)],
        "entries": [
            {"w": W.label(w), "z": W.label(z), "value": h.to_json()} for w in range(W.size) for z, h in sorted(M[w].items())
        ],
    }


def _rf_json(rf: RationalFraction) -> list:
    return [{"exp": list(e), "coef": str(c)} for e, c in sorted(rf_terms(rf).items(), reverse=True)]


def canphi_json(alg: HeckeAlgebra, basis: str = "c") -> dict:
    W = alg.W
    P = canonical_phi(alg)
    rows = P.phi_c if basis == "c" else P.phi_g
    return {
        "basis": basis,
        "elements": [W.label(w) for w in range(W.size)],
        "matrix": [[_rf_json(rows[w][z]) for z in range(W.size)] for w in range(W.size)],
    }


def run_all(alg: HeckeAlgebra, exhaustive: bool = True) -> list[PropertyReport]:
    """Every check of this module; sampled where exhaustive scans are slow."""
    sample = None if exhaustive else 8
    out: list[PropertyReport] = []
    out += check_schur(alg, matrix_units=exhaustive)
    out += check_jring(alg, associativity=exhaustive)
    out.append(check_weak_p15(alg, sample=None if exhaustive else 2000))
    out += check_embedding(alg, sample=sample)
    out += check_phi_hom(alg)
    out.append(check_beta(alg))
    out.append(check_phi_action_defect(alg))
    out += check_phi(alg)
    out.append(check_phi_defect(alg))
    return out


__all__ = [
    "CellData",
    "JRing",
    "JRingError",
    "PhiData",
    "SchurData",
    "TABLE1_ORDER",
    "bareiss_inverse",
    "canonical_phi",
    "check_beta",
    "check_embedding",
    "check_jring",
    "check_phi_action_defect",
    "check_matrix_rings",
    "check_cd_transport",
    "check_phi",
    "check_phi_defect",
    "check_phi_hom",
    "check_schur",
    "check_weak_p15",
    "j_ring",
    "n_hat",
    "phi_matrix",
    "rank_over_q",
    "rational_inverse",
    "rf_terms",
    "run_all",
    "schur_elements",
    "table1",
    "theta_table",
]
