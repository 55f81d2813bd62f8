"""Iwahori-Hecke algebra over A = Z[Gamma] and its Kazhdan-Lusztig basis.

Vectors are plain dicts ``{element index: GroupRingElement}`` in the T-basis
unless stated otherwise.  :class:`HeckeAlgebra` doubles as the computation
context for one (system, weight function) pair and caches every table it
builds: bar(T_w), the R*-polynomials, the p*-table of the C-basis, the
generator rows of the structure constants and, on demand, the full h-table.

KL polynomials are obtained from bar(T_w) = sum_y conj(R*_{y,w}) T_y by solving
conj(p*_{y,w}) - p*_{y,w} = sum_{y<z<=w} R*_{y,z} p*_{z,w} downward in length.
The full h-table is built in the C-basis from the generator rows using
C_x = C_s C_{sx} - sum_z h_{s,sx,z} C_z, one column y at a time.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Mapping

from .coxeter import CoxeterSystem, CoxeterError
from .grpring import GroupRingElement as GRE, WeightFunction

Vec = dict[int, GRE]


class HeckeError(ValueError):
    """Usage error inside the Hecke algebra layer."""


def vadd(acc: Vec, vec: Mapping[int, GRE], c: GRE | int | None = None) -> Vec:
    """acc += c * vec, in place; returns acc."""
    for w, a in vec.items():
        t = a if c is None else a * c
        if w in acc:
            s = acc[w] + t
            if s:
                acc[w] = s
            else:
                del acc[w]
        elif t:
            acc[w] = t
    return acc


def vscale(vec: Mapping[int, GRE], c: GRE | int) -> Vec:
    out = {}
    for w, a in vec.items():
        t = a * c
        if t:
            out[w] = t
    return out


class HeckeAlgebra:
    """Hecke algebra H(W, L) with lazily built KL data."""

    def __init__(self, system: CoxeterSystem, weights: WeightFunction):
        if weights.system is not system:
            raise HeckeError("weight function belongs to a different system")
        self.W = system
        self.L = weights
        self.k = weights.k
        self.zero = GRE.zero(self.k)
        self.one = GRE.one(self.k)
        self.q = [GRE.mono(v) for v in weights.values]
        self.qinv = [GRE.mono(tuple(-x for x in v)) for v in weights.values]
        self.qdiff = [a - b for a, b in zip(self.q, self.qinv)]
        self.qsum = [a + b for a, b in zip(self.q, self.qinv)]
        self._bar_T: list[Vec] | None = None
        self._rstar: list[dict[int, GRE]] | None = None
        self._P: list[dict[int, GRE]] | None = None
        self._gen_rows: list[list[dict[int, GRE]]] | None = None
        self._h: list[list[dict[int, GRE]]] | None = None
        self._ptilde: dict[int, Vec] = {}
        self._D: dict[int, Vec] = {}
        self.cache: dict = {}

    # T-basis arithmetic
    def lmul_gen(self, s: int, vec: Mapping[int, GRE]) -> Vec:
        """T_s * vec."""
        W = self.W
        out: Vec = {}
        lm, ln = W.lmul[s], W.lengths
        for w, c in vec.items():
            sw = lm[w]
            vadd(out, {sw: c})
            if ln[sw] < ln[w]:
                vadd(out, {w: c * self.qdiff[s]})
        return out

    def rmul_gen(self, vec: Mapping[int, GRE], s: int) -> Vec:
        """vec * T_s."""
        W = self.W
        out: Vec = {}
        rm, ln = W.rmul[s], W.lengths
        for w, c in vec.items():
            ws = rm[w]
            vadd(out, {ws: c})
            if ln[ws] < ln[w]:
                vadd(out, {w: c * self.qdiff[s]})
        return out

    def t_mul(self, a: Mapping[int, GRE], b: Mapping[int, GRE]) -> Vec:
        out: Vec = {}
        for x, c in a.items():
            v: Vec = dict(b)
            for s in reversed(self.W.reduced_word_idx(x)):
                v = self.lmul_gen(s, v)
            vadd(out, v, c)
        return out

    def T(self, w: int) -> Vec:
        return {w: self.one}

    # involutions
    @property
    def bar_T(self) -> list[Vec]:
        """bar(T_w) = T_{w^{-1}}^{-1} in the T-basis, for every w."""
        if self._bar_T is None:
            W = self.W
            out: list[Vec] = [dict() for _ in range(W.size)]
            out[0] = {0: self.one}
            for w in range(1, W.size):
                s = W.reduced_word_idx(w)[0]
                prev = out[W.lmul[s][w]]
                v = self.lmul_gen(s, prev)
                vadd(v, prev, -self.qdiff[s])
                out[w] = v
            self._bar_T = out
        return self._bar_T

    def bar(self, vec: Mapping[int, GRE]) -> Vec:
        out: Vec = {}
        for w, c in vec.items():
            vadd(out, self.bar_T[w], c.bar())
        return out

    def delta(self, vec: Mapping[int, GRE]) -> Vec:
        """The A-linear automorphism T_s -> -T_s^{-1}."""
        out: Vec = {}
        for w, c in vec.items():
            vadd(out, self.bar_T[w], c if self.W.lengths[w] % 2 == 0 else -c)
        return out

    def j(self, vec: Mapping[int, GRE]) -> Vec:
        """Semilinear involution e^g -> e^{-g}, T_w -> (-1)^{l(w)} T_w."""
        return {w: (c.bar() if self.W.lengths[w] % 2 == 0 else -c.bar()) for w, c in vec.items()}

    def flat(self, vec: Mapping[int, GRE]) -> Vec:
        """A-linear antiautomorphism T_w -> T_{w^{-1}}."""
        return {self.W.inv[w]: c for w, c in vec.items()}

    def tau(self, vec: Mapping[int, GRE]) -> GRE:
        return vec.get(0, self.zero)

    # KL basis
    @property
    def rstar(self) -> list[dict[int, GRE]]:
        """rstar[w][y] = R*_{y,w}, defined by bar(T_w) = sum_y conj(R*_{y,w}) T_y."""
        if self._rstar is None:
            self._rstar = [{y: c.bar() for y, c in v.items()} for v in self.bar_T]
        return self._rstar

    @property
    def P(self) -> list[dict[int, GRE]]:
        """P[w][y] = p*_{y,w}; C_w = sum_y P[w][y] T_y."""
        if self._P is None:
            self._P = self._solve_kl()
        return self._P

    def _solve_kl(self) -> list[dict[int, GRE]]:
        W = self.W
        R = self.rstar
        out: list[dict[int, GRE]] = []
        for w in range(W.size):
            col = {w: self.one}
            below = sorted(W.bruhat_below(w), key=lambda y: -W.lengths[y])
            for y in below:
                if y == w:
                    continue
                f = self.zero
                for z, p in col.items():
                    r = R[z].get(y)
                    if r is not None:
                        f = f + r * p
                if f.constant_term():
                    raise ArithmeticError(f"KL system inconsistent at ({y},{w})")
                p = -f.part("<0")
                if p:
                    col[y] = p
            out.append(dict(sorted(col.items())))
        return out

    def C(self, w: int) -> Vec:
        return dict(self.P[w])

    def pstar(self, y: int, w: int) -> GRE:
        return self.P[w].get(y, self.zero)

    def to_C(self, vec: Mapping[int, GRE]) -> Vec:
        """Coordinates of a T-basis vector in the C-basis."""
        return self._triangular(vec, self.P)

    def from_C(self, vec: Mapping[int, GRE]) -> Vec:
        out: Vec = {}
        for w, c in vec.items():
            vadd(out, self.P[w], c)
        return out

    def _triangular(self, vec: Mapping[int, GRE], basis) -> Vec:
        # basis[w] = T_w + terms of strictly smaller length
        ln = self.W.lengths
        rem: Vec = dict(vec)
        out: Vec = {}
        while rem:
            top = max(ln[w] for w in rem)
            layer = [w for w in rem if ln[w] == top]
            for w in layer:
                c = rem.get(w)
                if c is None:
                    continue
                out[w] = c
                vadd(rem, basis[w], -c)
                if w in rem:
                    raise ArithmeticError("basis is not unitriangular")
        return out

    def ptilde(self, w: int) -> Vec:
        """T_w = sum_{w'} ptilde_{w',w} C_{w'}."""
        if w not in self._ptilde:
            self._ptilde[w] = self.to_C({w: self.one})
        return self._ptilde[w]

    # structure constants
    @property
    def gen_rows(self) -> list[list[dict[int, GRE]]]:
        """gen_rows[s][y] = {z: h_{s,y,z}} for generator position s."""
        if self._gen_rows is None:
            W = self.W
            rows = []
            for s in range(len(W.gens)):
                g = W.gen_index[s]
                row = []
                for y in range(W.size):
                    if W.lengths[W.lmul[s][y]] < W.lengths[y]:
                        row.append({y: self.qsum[s]})
                        continue
                    v = self.lmul_gen(s, self.P[y])
                    vadd(v, self.P[y], self.qinv[s])
                    row.append(self.to_C(v))
                rows.append(row)
                assert row[0] == {g: self.one}
            self._gen_rows = rows
        return self._gen_rows

    def mu(self, s: int, z: int, y: int) -> GRE:
        """M^s_{z,y} for sz < z < y < sy (s a generator position)."""
        W = self.W
        ln = W.lengths
        sz, sy = W.lmul[s][z], W.lmul[s][y]
        if not (ln[sz] < ln[z] and ln[sy] > ln[y] and W.bruhat_leq_idx(z, y) and z != y):
            raise HeckeError("mu requires sz < z < y < sy")
        return self.gen_rows[s][y].get(z, self.zero)

    def apply_Cs(self, s: int, vec: Mapping[int, GRE]) -> Vec:
        """C_s * vec with vec in the C-basis, result in the C-basis."""
        out: Vec = {}
        rows = self.gen_rows[s]
        for z, c in vec.items():
            vadd(out, rows[z], c)
        return out

    def h_column(self, y: int) -> list[dict[int, GRE]]:
        """[C_x C_y in the C-basis for every x]."""
        W = self.W
        col: list[dict[int, GRE]] = [dict() for _ in range(W.size)]
        col[0] = {y: self.one}
        rows = self.gen_rows
        for x in range(1, W.size):
            s = W.reduced_word_idx(x)[0]
            xp = W.lmul[s][x]
            v = self.apply_Cs(s, col[xp])
            for z, m in rows[s][xp].items():
                if z != x:
                    vadd(v, col[z], -m)
            col[x] = v
        return col

    def build_h_table(self, jobs: int = 1) -> None:
        if self._h is not None:
            return
        N = self.W.size
        _ = self.gen_rows
        if jobs > 1 and N > 8:
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                cols = list(ex.map(_h_column_worker, [(self, y) for y in range(N)], chunksize=max(1, N // (4 * jobs))))
        else:
            cols = [self.h_column(y) for y in range(N)]
        self._h = [[cols[y][x] for y in range(N)] for x in range(N)]

    @property
    def h_table(self) -> list[list[dict[int, GRE]]]:
        """h_table[x][y] = {z: h_{x,y,z}}."""
        if self._h is None:
            self.build_h_table()
        return self._h  # type: ignore[return-value]

    def h(self, x: int, y: int, z: int) -> GRE:
        if self._h is None and x in self.W.gen_index:
            return self.gen_rows[self.W.gen_index.index(x)][y].get(z, self.zero)
        return self.h_table[x][y].get(z, self.zero)

    def h_direct(self, x: int, y: int) -> Vec:
        """C_x C_y expanded through the T-basis; independent of the h-table recursion."""
        return self.to_C(self.t_mul(self.P[x], self.P[y]))

    # dual basis and trace form
    def D(self, z: int) -> Vec:
        """The dual basis element D_{z^{-1}}, characterized by tau(C_w D_{z^{-1}}) = [w = z].

        Built as (-1)^{l(z)+l(w0)} delta(C_{z^{-1} w0}) T_{w0}; with the inverse
        placed this way the duality holds for non-involutions as well.
        """
        if z not in self._D:
            W = self.W
            zw0 = W.mul_idx(W.inv[z], W.w0)
            v = self.t_mul(self.delta(self.P[zw0]), {W.w0: self.one})
            if (W.lengths[z] + W.lengths[W.w0]) % 2:
                v = vscale(v, -1)
            self._D[z] = v
        return self._D[z]

    def trace_pair(self, a: Mapping[int, GRE], b: Mapping[int, GRE]) -> GRE:
        """tau(a b) = sum_w a_w b_{w^{-1}}, using tau(T_x T_y) = delta_{xy^{-1}}."""
        acc = self.zero
        for w, c in a.items():
            d = b.get(self.W.inv[w])
            if d is not None:
                acc = acc + c * d
        return acc

    # cache hooks
    def export_state(self) -> dict:
        return {"P": self._P, "gen_rows": self._gen_rows, "h": self._h}

    def import_state(self, state: dict) -> None:
        self._P = state.get("P") or self._P
        self._gen_rows = state.get("gen_rows") or self._gen_rows
        self._h = state.get("h") or self._h


def _h_column_worker(args):
    alg, y = args
    return alg.h_column(y)


class HeckeElement:
    """A basis-tagged element of a Hecke algebra (bases T, C, D)."""

    __slots__ = ("alg", "basis", "terms")

    def __init__(self, alg: HeckeAlgebra, terms: Mapping[int, GRE], basis: str = "T"):
        if basis not in ("T", "C", "D"):
            raise HeckeError(f"unknown basis {basis!r}")
        self.alg = alg
        self.basis = basis
        self.terms = {w: c for w, c in terms.items() if c}

    @classmethod
    def T(cls, alg: HeckeAlgebra, w) -> "HeckeElement":
        return cls(alg, {alg.W.idx(w): alg.one})

    @classmethod
    def C(cls, alg: HeckeAlgebra, w) -> "HeckeElement":
        return cls(alg, {alg.W.idx(w): alg.one}, "C")

    def to_T(self) -> Vec:
        if self.basis == "T":
            return dict(self.terms)
        if self.basis == "C":
            return self.alg.from_C(self.terms)
        out: Vec = {}
        for z, c in self.terms.items():
            # D-basis symbols are indexed by z with D_{z^{-1}}
            vadd(out, self.alg.D(z), c)
        return out

    def to_basis(self, basis: str) -> "HeckeElement":
        t = self.to_T()
        if basis == "T":
            return HeckeElement(self.alg, t)
        if basis == "C":
            return HeckeElement(self.alg, self.alg.to_C(t), "C")
        if basis == "D":
            # tau(C_w D_{z^{-1}}) = delta_{wz}, so the D-coordinate at z is tau(C_z h)
            return HeckeElement(
                self.alg, {z: self.alg.trace_pair(self.alg.P[z], t) for z in range(self.alg.W.size)}, "D"
            )
        raise HeckeError(f"unknown basis {basis!r}")

    def _same(self, other: "HeckeElement") -> None:
        if not isinstance(other, HeckeElement) or other.alg is not self.alg:
            raise HeckeError("elements from different algebras")

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        self._same(other)
        if other.basis == self.basis:
            return HeckeElement(self.alg, vadd(dict(self.terms), other.terms), self.basis)
        return HeckeElement(self.alg, vadd(self.to_T(), other.to_T()))

    def __neg__(self) -> "HeckeElement":
        return HeckeElement(self.alg, vscale(self.terms, -1), self.basis)

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        return self + (-other)

    def __mul__(self, other) -> "HeckeElement":
        if isinstance(other, (int, GRE)):
            return HeckeElement(self.alg, vscale(self.terms, other), self.basis)
        self._same(other)
        return HeckeElement(self.alg, self.alg.t_mul(self.to_T(), other.to_T()))

    def __rmul__(self, other) -> "HeckeElement":
        if isinstance(other, (int, GRE)):
            return HeckeElement(self.alg, vscale(self.terms, other), self.basis)
        return NotImplemented

    def bar(self) -> "HeckeElement":
        return HeckeElement(self.alg, self.alg.bar(self.to_T()))

    def involution(self, which: str) -> "HeckeElement":
        f = {"delta": self.alg.delta, "j": self.alg.j, "flat": self.alg.flat, "bar": self.alg.bar}.get(which)
        if f is None:
            raise HeckeError(f"unknown involution {which!r}")
        return HeckeElement(self.alg, f(self.to_T()))

    def tau(self) -> GRE:
        return self.alg.tau(self.to_T())

    def __eq__(self, other) -> bool:
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return self.alg is other.alg and self.to_T() == other.to_T()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        W = self.alg.W
        body = " + ".join(f"({c}){self.basis}[{W.label(w)}]" for w, c in sorted(self.terms.items()))
        return f"HeckeElement({body or '0'})"


def algebra(system: CoxeterSystem, weights: WeightFunction | None = None) -> HeckeAlgebra:
    if weights is None:
        weights = WeightFunction.equal(system)
    return HeckeAlgebra(system, weights)


__all__ = ["HeckeAlgebra", "HeckeElement", "HeckeError", "algebra", "vadd", "vscale", "CoxeterError"]
