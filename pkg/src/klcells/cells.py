"""Kazhdan-Lusztig preorders, cells, cell modules and the a-function.

The left preorder is generated by x <-_L y whenever C_x occurs in C_s C_y
for a generator s (restricted to s in I for the relative version), so only
the generator rows of the structure constants are needed.  Closures are kept
as integer bitsets: ``below[y]`` has bit x set iff x <= y.

The a-function and its companions (Delta, n_z, gamma, the set D) need the
full h-table.  Property checks return :class:`PropertyReport` records with at
most 20 counterexamples each.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Sequence

from .grpring import Exponent, GroupRingElement as GRE
from .hecke import HeckeAlgebra, HeckeError

MAX_COUNTEREXAMPLES = 20


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _closure(down: Sequence[Iterable[int]]) -> list[int]:
    """Reflexive-transitive closure; down[y] lists the x with a direct edge x <- y."""
    N = len(down)
    below = [0] * N
    for y in range(N):
        seen = 1 << y
        stack = [y]
        while stack:
            v = stack.pop()
            for x in down[v]:
                if not seen >> x & 1:
                    seen |= 1 << x
                    stack.append(x)
        below[y] = seen
    return below


@dataclass
class Preorder:
    """A preorder on element indices, stored as down-closures."""

    side: str
    I: frozenset[int]
    below: list[int]

    def leq(self, x: int, y: int) -> bool:
        return bool(self.below[y] >> x & 1)

    def equiv(self, x: int, y: int) -> bool:
        return self.leq(x, y) and self.leq(y, x)


@dataclass
class CellPartition:
    side: str
    I: list[str]
    cells: list[list[int]]
    cell_of: dict[int, int]
    order: list[tuple[int, int]] = field(default_factory=list)

    def cell(self, w: int) -> list[int]:
        return self.cells[self.cell_of[w]]

    def same(self, x: int, y: int) -> bool:
        return self.cell_of[x] == self.cell_of[y]

    def to_json(self, W) -> dict:
        return {
            "side": self.side,
            "I": self.I,
            "cells": [[W.to_json(w) for w in c] for c in self.cells],
            "order": [list(p) for p in self.order],
        }


@dataclass
class PropertyReport:
    property: str
    status: str
    counterexamples: list = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return self.status == "PASS"

    def to_json(self) -> dict:
        return {"property": self.property, "status": self.status, "counterexamples": self.counterexamples}


class _Collector:
    def __init__(self, name: str):
        self.name = name
        self.bad: list = []
        self.nbad = 0
        self.checked = 0

    def check(self, cond: bool, witness) -> None:
        self.checked += 1
        if not cond:
            self.nbad += 1
            if len(self.bad) < MAX_COUNTEREXAMPLES:
                self.bad.append(witness)

    def report(self) -> PropertyReport:
        return PropertyReport(self.name, "PASS" if not self.nbad else "FAIL", self.bad, self.checked)


def _norm_I(alg: HeckeAlgebra, I) -> frozenset[int]:
    if I is None:
        return frozenset(range(len(alg.W.gens)))
    return alg.W.subset(I)


# preorders
def left_preorder(alg: HeckeAlgebra, I=None) -> Preorder:
    I = _norm_I(alg, I)
    key = ("pre", "L", I)
    if key not in alg.cache:
        N = alg.W.size
        rows = alg.gen_rows
        down = [set() for _ in range(N)]
        for s in I:
            for y in range(N):
                down[y].update(rows[s][y])
        alg.cache[key] = Preorder("L", I, _closure(down))
    return alg.cache[key]


def right_preorder(alg: HeckeAlgebra, I=None) -> Preorder:
    I = _norm_I(alg, I)
    key = ("pre", "R", I)
    if key not in alg.cache:
        W = alg.W
        L = left_preorder(alg, I)
        inv = W.inv
        below = [0] * W.size
        for y in range(W.size):
            m = 0
            for x in _bits(L.below[inv[y]]):
                m |= 1 << inv[x]
            below[y] = m
        alg.cache[key] = Preorder("R", I, below)
    return alg.cache[key]


def two_sided_preorder(alg: HeckeAlgebra, I=None) -> Preorder:
    I = _norm_I(alg, I)
    key = ("pre", "LR", I)
    if key not in alg.cache:
        W = alg.W
        rows = alg.gen_rows
        N = W.size
        down = [set() for _ in range(N)]
        inv = W.inv
        for s in I:
            for y in range(N):
                down[y].update(rows[s][y])
                # right edges: x <-_R y iff x^{-1} <-_L y^{-1}
                down[y].update(inv[x] for x in rows[s][inv[y]])
        alg.cache[key] = Preorder("LR", I, _closure(down))
    return alg.cache[key]


def preorder(alg: HeckeAlgebra, side: str = "L", I=None) -> Preorder:
    side = side.upper()
    if side == "L":
        return left_preorder(alg, I)
    if side == "R":
        return right_preorder(alg, I)
    if side == "LR":
        return two_sided_preorder(alg, I)
    raise HeckeError(f"unknown side {side!r}")


def _partition(pre: Preorder, elements: Sequence[int], W, I_names: list[str]) -> CellPartition:
    elems = sorted(elements)
    eset = set(elems)
    cells: list[list[int]] = []
    cell_of: dict[int, int] = {}
    for w in elems:
        if w in cell_of:
            continue
        c = [x for x in elems if x not in cell_of and pre.equiv(x, w)]
        for x in c:
            cell_of[x] = len(cells)
        cells.append(c)
    order = []
    for i, ci in enumerate(cells):
        for j, cj in enumerate(cells):
            if i != j and pre.leq(ci[0], cj[0]):
                order.append((i, j))
    assert all(x in eset for c in cells for x in c)
    return CellPartition(pre.side, I_names, cells, cell_of, order)


def cell_partition(alg: HeckeAlgebra, side: str = "L", I=None, within: str = "W") -> CellPartition:
    """Cells of W for the (relative) preorder; within='WI' restricts to the parabolic subgroup."""
    In = _norm_I(alg, I)
    key = ("cells", side.upper(), In, within)
    if key not in alg.cache:
        W = alg.W
        pre = preorder(alg, side, In)
        elems = range(W.size) if within == "W" else W.parabolic_elements(In)
        names = [W.gens[s] for s in sorted(In)]
        alg.cache[key] = _partition(pre, elems, W, names)
    return alg.cache[key]


def left_cells(alg: HeckeAlgebra, I=None) -> CellPartition:
    return cell_partition(alg, "L", I)


# cell modules
@dataclass
class CellModule:
    alg: HeckeAlgebra
    elements: list[int]
    delta_twist: bool = False

    @property
    def dim(self) -> int:
        return len(self.elements)

    def C(self, w: int) -> list[list[GRE]]:
        """Matrix of C_w: entry (i, j) is h_{w, x_j, x_i} (with delta applied for the twist)."""
        if self.delta_twist:
            return self.of(self.alg.delta(self.alg.P[w]))
        return self._plain_C(w)

    def _plain_C(self, w: int) -> list[list[GRE]]:
        alg, xs = self.alg, self.elements
        gens = alg.W.gen_index
        if w in gens:
            row = alg.gen_rows[gens.index(w)]
            return [[row[xj].get(xi, alg.zero) for xj in xs] for xi in xs]
        return [[alg.h_table[w][xj].get(xi, alg.zero) for xj in xs] for xi in xs]

    def of(self, vec) -> list[list[GRE]]:
        """Matrix of a T-basis element (without twist; twist handled by C())."""
        alg = self.alg
        c = alg.to_C(vec)
        d = self.dim
        M = [[alg.zero] * d for _ in range(d)]
        for w, a in c.items():
            X = self._plain_C(w)
            for i in range(d):
                for j in range(d):
                    if X[i][j]:
                        M[i][j] = M[i][j] + a * X[i][j]
        return M

    def T(self, w: int) -> list[list[GRE]]:
        vec = {w: self.alg.one}
        if self.delta_twist:
            vec = self.alg.delta(vec)
        return self.of(vec)

    def gen_T(self, s: int) -> list[list[GRE]]:
        """Matrix of T_s for generator position s."""
        alg = self.alg
        X = self._plain_C(alg.W.gen_index[s])
        d = self.dim
        if self.delta_twist:
            return [[(alg.q[s] if i == j else alg.zero) - X[i][j] for j in range(d)] for i in range(d)]
        return [[X[i][j] - (alg.qinv[s] if i == j else alg.zero) for j in range(d)] for i in range(d)]


def cell_module(alg: HeckeAlgebra, cell: Sequence[int], delta_twist: bool = False) -> CellModule:
    cell = sorted(cell)
    lc = left_cells(alg)
    ids = {lc.cell_of[x] for x in cell}
    if sum(len(lc.cells[i]) for i in ids) != len(cell):
        raise HeckeError("cell module needs a union of left cells")
    return CellModule(alg, cell, delta_twist)


def mat_mul(A: list[list[GRE]], B: list[list[GRE]], zero: GRE) -> list[list[GRE]]:
    n, m, p = len(A), len(B), len(B[0]) if B else 0
    out = [[zero] * p for _ in range(n)]
    for i in range(n):
        for k in range(m):
            a = A[i][k]
            if not a:
                continue
            for j in range(p):
                if B[k][j]:
                    out[i][j] = out[i][j] + a * B[k][j]
    return out


# the relation ≈
@dataclass
class ApproxReport:
    passed: bool
    failures: list = field(default_factory=list)
    right_cell_ok: bool | None = None


def approx_check(alg: HeckeAlgebra, c: Sequence[int], c1: Sequence[int], bij: dict[int, int], I=None) -> ApproxReport:
    """Check h_{s,x,y} = h_{s,x1,y1} for all generators s (in I) and x, y in the cell."""
    c, c1 = list(c), list(c1)
    if set(bij) != set(c) or sorted(bij.values()) != sorted(c1) or len(set(bij.values())) != len(c):
        raise HeckeError("approx_check needs a bijection between the two cells")
    In = _norm_I(alg, I)
    rows = alg.gen_rows
    fails = []
    for s in sorted(In):
        for x in c:
            for y in c:
                if rows[s][x].get(y, alg.zero) != rows[s][bij[x]].get(bij[y], alg.zero):
                    fails.append((alg.W.gens[s], x, y))
                    if len(fails) >= MAX_COUNTEREXAMPLES:
                        break
    passed = not fails
    rc = None
    if passed:
        R = right_preorder(alg, In)
        rc = all(R.equiv(x, bij[x]) for x in c)
    return ApproxReport(passed, fails, rc)


def right_cell_bijection(alg: HeckeAlgebra, c: Sequence[int], c1: Sequence[int], I=None) -> dict[int, int] | None:
    """The map x -> unique x1 in c1 with x ~_R x1, if it is a bijection."""
    R = right_preorder(alg, I)
    bij = {}
    for x in c:
        m = [y for y in c1 if R.equiv(x, y)]
        if len(m) != 1:
            return None
        bij[x] = m[0]
    if len(set(bij.values())) != len(c1):
        return None
    return bij


def passing_bijections(alg: HeckeAlgebra, c: Sequence[int], c1: Sequence[int], I=None, limit: int = 8) -> list[dict[int, int]]:
    """All bijections c -> c1 satisfying the ≈ condition (exhaustive, small cells only)."""
    c, c1 = sorted(c), sorted(c1)
    if len(c) != len(c1):
        return []
    if len(c) > limit:
        raise HeckeError(f"exhaustive search limited to cells of size {limit}")
    out = []
    for perm in permutations(c1):
        bij = dict(zip(c, perm))
        if approx_check(alg, c, c1, bij, I).passed:
            out.append(bij)
    return out


# a-function and companions
@dataclass
class AFunctionData:
    a: dict[int, Exponent]
    Delta: dict[int, Exponent] = field(default_factory=dict)
    n: dict[int, int] = field(default_factory=dict)
    gamma: dict[tuple[int, int, int], int] = field(default_factory=dict)
    D: list[int] = field(default_factory=list)


def a_function(alg: HeckeAlgebra, I=None) -> dict[int, Exponent]:
    """a(z) = max over x, y of the top exponent of h_{x,y,z}, clipped below at 0.

    With I given, x, y, z range over W_I (the relative a_I).
    """
    In = _norm_I(alg, I)
    key = ("a", In)
    if key in alg.cache:
        return alg.cache[key]
    W = alg.W
    elems = range(W.size) if len(In) == len(W.gens) else W.parabolic_elements(In)
    zero = (0,) * alg.k
    a = {z: zero for z in elems}
    H = alg.h_table
    for x in elems:
        for y in elems:
            for z, h in H[x][y].items():
                if z in a:
                    d = h.degree()
                    if d > a[z]:
                        a[z] = d
    alg.cache[key] = a
    return a


def afunction_data(alg: HeckeAlgebra) -> AFunctionData:
    if "adata" in alg.cache:
        return alg.cache["adata"]
    W = alg.W
    a = a_function(alg)
    zero = (0,) * alg.k
    Delta, n = {}, {}
    for z in range(W.size):
        if z == 0:
            Delta[z], n[z] = zero, 1
            continue
        p = alg.pstar(0, z)
        if not p:
            raise ArithmeticError(f"p*_(1,{W.label(z)}) vanishes")
        e, c = p.leading()
        Delta[z], n[z] = tuple(-x for x in e), c
    gamma = {}
    H = alg.h_table
    for x in range(W.size):
        for y in range(W.size):
            for z, h in H[x][y].items():
                c = h.coeff(tuple(-v for v in a[z]))
                if c:
                    gamma[(x, y, W.inv[z])] = c
    D = [z for z in range(W.size) if a[z] == Delta[z]]
    data = AFunctionData(a, Delta, n, gamma, D)
    alg.cache["adata"] = data
    return data


def gamma(alg: HeckeAlgebra, x: int, y: int, z: int) -> int:
    """gamma_{x,y,z}: the constant term of e^{a(z^{-1})} h_{x,y,z^{-1}}."""
    return afunction_data(alg).gamma.get((x, y, z), 0)


# property checks
def check_properties(alg: HeckeAlgebra, which: Iterable[str] | None = None) -> list[PropertyReport]:
    names = list(which) if which is not None else ["P1", "P2", "P3", "P4", "P5", "P6", "P7", "P8", "P9", "P10", "P11", "spadesuit"]
    out = []
    for name in names:
        fn = _CHECKS.get(name)
        if fn is None:
            if name.startswith("relative_spadesuit"):
                out.extend(relative_spadesuit(alg, I) for I in alg.W.all_subsets())
                continue
            raise HeckeError(f"unknown property {name!r}")
        out.append(fn(alg))
    return out


def _p1(alg):
    d = afunction_data(alg)
    col = _Collector("P1")
    for z in range(alg.W.size):
        col.check(d.a[z] <= d.Delta[z], alg.W.label(z))
    return col.report()


def _p2(alg):
    d, W = afunction_data(alg), alg.W
    Dset = set(d.D)
    col = _Collector("P2")
    for (x, y, z), g in d.gamma.items():
        if z in Dset:
            col.check(x == W.inv[y], (W.label(x), W.label(y), W.label(z)))
    return col.report()


def _p3(alg):
    d, W = afunction_data(alg), alg.W
    col = _Collector("P3")
    for y in range(W.size):
        ds = [z for z in d.D if d.gamma.get((W.inv[y], y, z), 0)]
        col.check(len(ds) == 1, (W.label(y), [W.label(z) for z in ds]))
    return col.report()


def _p4(alg):
    d, W = afunction_data(alg), alg.W
    LR = two_sided_preorder(alg)
    col = _Collector("P4")
    for z in range(W.size):
        for zp in _bits(LR.below[z]):
            col.check(d.a[zp] >= d.a[z], (W.label(zp), W.label(z)))
    return col.report()


def _p5(alg):
    d, W = afunction_data(alg), alg.W
    col = _Collector("P5")
    for dd in d.D:
        col.check(d.n[dd] in (1, -1), ("n", W.label(dd), d.n[dd]))
        for y in range(W.size):
            g = d.gamma.get((W.inv[y], y, dd), 0)
            if g:
                col.check(g == d.n[dd], (W.label(y), W.label(dd), g, d.n[dd]))
    return col.report()


def _p6(alg):
    d, W = afunction_data(alg), alg.W
    col = _Collector("P6")
    for dd in d.D:
        col.check(W.mul_idx(dd, dd) == 0, W.label(dd))
    return col.report()


def _p7(alg):
    d, W = afunction_data(alg), alg.W
    col = _Collector("P7")
    for (x, y, z), g in d.gamma.items():
        col.check(d.gamma.get((y, z, x), 0) == g, (W.label(x), W.label(y), W.label(z)))
    return col.report()


def _p8(alg):
    d, W = afunction_data(alg), alg.W
    L = left_preorder(alg)
    inv = W.inv
    col = _Collector("P8")
    for (x, y, z) in d.gamma:
        ok = L.equiv(x, inv[y]) and L.equiv(y, inv[z]) and L.equiv(z, inv[x])
        col.check(ok, (W.label(x), W.label(y), W.label(z)))
    return col.report()


def _same_a_implies(alg, name: str, pre: Preorder):
    d, W = afunction_data(alg), alg.W
    col = _Collector(name)
    for y in range(W.size):
        for x in _bits(pre.below[y]):
            if d.a[x] == d.a[y]:
                col.check(pre.leq(y, x), (W.label(x), W.label(y)))
    return col.report()


def _p9(alg):
    return _same_a_implies(alg, "P9", left_preorder(alg))


def _p10(alg):
    return _same_a_implies(alg, "P10", right_preorder(alg))


def _p11(alg):
    return _same_a_implies(alg, "P11", two_sided_preorder(alg))


def spadesuit(alg: HeckeAlgebra) -> PropertyReport:
    """x <=_L y and x ~_LR y imply x ~_L y."""
    W = alg.W
    L, LR = left_preorder(alg), two_sided_preorder(alg)
    col = _Collector("spadesuit")
    for y in range(W.size):
        for x in _bits(L.below[y]):
            if LR.equiv(x, y):
                col.check(L.leq(y, x), (W.label(x), W.label(y)))
    return col.report()


def relative_spadesuit(alg: HeckeAlgebra, I) -> PropertyReport:
    """For u, v in W_I and x, y in Y_I: ux <=_{L,I} vy and u ~_{LR,I} v imply u ~_{L,I} v and x = y."""
    W = alg.W
    In = _norm_I(alg, I)
    L = left_preorder(alg, In)
    LRI = cell_partition(alg, "LR", In, within="WI")
    LI = cell_partition(alg, "L", In, within="WI")
    dec = [W.coset_decompose(w, In, side="right") for w in range(W.size)]  # w = u x
    col = _Collector(f"relative_spadesuit[{','.join(W.gens[s] for s in sorted(In))}]")
    for w2 in range(W.size):
        y, v = dec[w2]
        for w1 in _bits(L.below[w2]):
            x, u = dec[w1]
            if LRI.same(u, v):
                col.check(LI.same(u, v) and x == y, (W.label(w1), W.label(w2)))
    return col.report()


_CHECKS = {
    "P1": _p1, "P2": _p2, "P3": _p3, "P4": _p4, "P5": _p5, "P6": _p6, "P7": _p7, "P8": _p8,
    "P9": _p9, "P10": _p10, "P11": _p11, "spadesuit": spadesuit,
}


def involution_in_left_cell(alg: HeckeAlgebra, w: int) -> int:
    """d_w: the unique element of D in the left cell of w."""
    d = afunction_data(alg)
    lc = left_cells(alg)
    hits = [z for z in d.D if lc.same(z, w)]
    if len(hits) != 1:
        raise ArithmeticError(f"left cell of {alg.W.label(w)} contains {len(hits)} elements of D")
    return hits[0]
