"""Finite Coxeter systems of types A, B and I2(m).

Elements of types A and B are signed permutations in window notation: the
tuple ``w`` has ``w[i-1] = w(i)``, composition is ``(xy)(i) = x(y(i))`` and
``w(-i) = -w(i)``.  Left multiplication by a generator acts on values, right
multiplication on positions.  Type B uses ``s0 = t`` (sign change of 1) and
``s_i = (i, i+1)``.  Dihedral elements are reduced words over ``s1, s2``;
the longest element is written starting with ``s1``.

All heavy algorithms work on integer indices into :attr:`CoxeterSystem.elements`,
which is ordered by length and then lexicographically on canonical form.
Tables for left/right multiplication by generators, inverses and Bruhat
intervals are precomputed at construction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Sequence

Element = Hashable  # tuple window (A/B) or word string (dihedral)

DEFAULT_LIMITS = {"A": 7, "B": 4, "I2": 24}


class CoxeterError(ValueError):
    """Usage error: bad type, bad generator, element from another system."""


class ResourceLimitError(RuntimeError):
    """Requested instance exceeds the configured size limit."""


def _compose(x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
    return tuple(x[v - 1] if v > 0 else -x[-v - 1] for v in y)


def _inverse(x: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(x)
    for i, v in enumerate(x, start=1):
        if v > 0:
            out[v - 1] = i
        else:
            out[-v - 1] = -i
    return tuple(out)


def _length_b(w: Sequence[int]) -> int:
    n = len(w)
    inv = sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])
    nsp = sum(1 for i in range(n) for j in range(i + 1, n) if w[i] + w[j] < 0)
    neg = sum(1 for v in w if v < 0)
    return inv + nsp + neg


@dataclass
class CoxeterSystem:
    """A finite Coxeter system with precomputed index tables.

    ``family`` is 'A', 'B' or 'I2'.  ``rank`` is the Coxeter rank |S|, so
    type A of rank r is the symmetric group on r+1 letters.  For 'I2' the
    order m of s1*s2 is given by ``m``.
    """

    family: str
    rank: int
    m: int | None = None
    limit: int | None = None
    gens: list[str] = field(init=False)
    coxeter_matrix: list[list[int]] = field(init=False)

    def __post_init__(self) -> None:
        fam = self.family.upper()
        if fam in ("I", "DIHEDRAL"):
            fam = "I2"
        if fam not in ("A", "B", "I2"):
            raise CoxeterError(f"unsupported type {self.family!r}")
        self.family = fam
        limit = self.limit if self.limit is not None else DEFAULT_LIMITS[fam]
        if fam == "I2":
            if self.m is None or self.m < 2:
                raise CoxeterError("dihedral type needs m >= 2")
            if self.rank != 2:
                raise CoxeterError("dihedral type has rank 2")
            if self.m > limit:
                raise ResourceLimitError(f"I2({self.m}) exceeds limit m <= {limit}")
        else:
            if self.rank < 1:
                raise CoxeterError("rank must be positive")
            if self.rank > limit:
                raise ResourceLimitError(f"type {fam} rank {self.rank} exceeds limit {limit}")
        self._build()

    # construction
    def _build(self) -> None:
        fam, r = self.family, self.rank
        if fam == "A":
            n = r + 1
            self.degree = n
            self.gens = [f"s{i}" for i in range(1, n)]
            gen_elems = [tuple(i + 2 if j == i else i + 1 if j == i + 1 else j + 1 for j in range(n)) for i in range(n - 1)]
        elif fam == "B":
            n = r
            self.degree = n
            self.gens = [f"s{i}" for i in range(0, n)]
            t = tuple(-1 if j == 0 else j + 1 for j in range(n))
            gen_elems = [t] + [
                tuple(i + 2 if j == i else i + 1 if j == i + 1 else j + 1 for j in range(n)) for i in range(n - 1)
            ]
        else:
            self.degree = 2
            self.gens = ["s1", "s2"]
            gen_elems = ["s1", "s2"]
        k = len(self.gens)
        self.coxeter_matrix = [[1 if i == j else 2 for j in range(k)] for i in range(k)]
        for i in range(k):
            for j in range(k):
                if i == j:
                    continue
                if fam == "I2":
                    self.coxeter_matrix[i][j] = self.m  # type: ignore[assignment]
                elif abs(i - j) == 1:
                    self.coxeter_matrix[i][j] = 4 if fam == "B" and 0 in (i, j) else 3

        if fam == "I2":
            elems = self._dihedral_elements()
            lengths = {w: len(w) // 2 for w in elems}
        else:
            elems = self._signed_perm_elements(gen_elems)
            lengths = {w: self._perm_length(w) for w in elems}
        elems.sort(key=lambda w: (lengths[w], w))
        self.elements: list[Element] = elems
        self.index: dict[Element, int] = {w: i for i, w in enumerate(elems)}
        self.lengths: list[int] = [lengths[w] for w in elems]
        self.gen_index: list[int] = [self.index[g] for g in gen_elems]
        N = len(elems)
        self.lmul = [[self.index[self._mul(g, w)] for w in elems] for g in gen_elems]
        self.rmul = [[self.index[self._mul(w, g)] for w in elems] for g in gen_elems]
        self.inv = [self.index[self._inv(w)] for w in elems]
        self.identity = 0
        self.w0 = max(range(N), key=lambda i: self.lengths[i])
        self._words: dict[int, tuple[int, ...]] = {0: ()}
        for i in range(1, N):
            s = min(self.left_descents_idx(i))
            self._words[i] = (s,) + self._words[self.lmul[s][i]]
        self._bruhat: list[int] = [0] * N
        self._bruhat[0] = 1
        for i in range(1, N):
            s = self._words[i][0]
            sw = self.lmul[s][i]
            below = self._bruhat[sw]
            mask = below
            b = below
            while b:
                low = b & -b
                x = low.bit_length() - 1
                mask |= 1 << self.lmul[s][x]
                b ^= low
            self._bruhat[i] = mask

    def _perm_length(self, w: tuple[int, ...]) -> int:
        if self.family == "A":
            n = len(w)
            return sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])
        return _length_b(w)

    def _signed_perm_elements(self, gens: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
        seen = {tuple(range(1, self.degree + 1))}
        frontier = list(seen)
        while frontier:
            nxt = []
            for w in frontier:
                for g in gens:
                    u = _compose(w, g)
                    if u not in seen:
                        seen.add(u)
                        nxt.append(u)
            frontier = nxt
        return list(seen)

    def _dihedral_elements(self) -> list[str]:
        m = self.m
        out = [""]
        for ln in range(1, m + 1):
            starts = ("s1",) if ln == m else ("s1", "s2")
            for a in starts:
                b = "s2" if a == "s1" else "s1"
                out.append("".join(a if i % 2 == 0 else b for i in range(ln)))
        return out

    # raw arithmetic on canonical forms
    def _dihedral_pair(self, w: str) -> tuple[int, int]:
        # rho = s1 s2, element rho^k sigma^f with sigma = s1
        k, f = 0, 0
        for g in re.findall(r"s[12]", w):
            gk, gf = (0, 1) if g == "s1" else ((-1) % self.m, 1)
            k, f = (k + (gk if f == 0 else -gk)) % self.m, f ^ gf
        return k, f

    def _mul(self, x: Element, y: Element) -> Element:
        if self.family == "I2":
            return self._dihedral_normal(x + y)  # type: ignore[operator]
        return _compose(x, y)  # type: ignore[arg-type]

    def _inv(self, x: Element) -> Element:
        if self.family == "I2":
            gens = re.findall(r"s[12]", x)  # type: ignore[arg-type]
            return self._dihedral_normal("".join(reversed(gens)))
        return _inverse(x)  # type: ignore[arg-type]

    def _dihedral_normal(self, word: str) -> str:
        if not hasattr(self, "_dihedral_lookup"):
            self._dihedral_lookup = {self._dihedral_pair(w): w for w in self._dihedral_elements()}
        return self._dihedral_lookup[self._dihedral_pair(word)]

    # public element API (canonical forms)
    @property
    def size(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def idx(self, w: Element | int) -> int:
        if isinstance(w, int) and not isinstance(w, bool):
            if not 0 <= w < len(self.elements):
                raise CoxeterError(f"index {w} out of range")
            return w
        if isinstance(w, list):
            w = tuple(w)
        try:
            return self.index[w]
        except KeyError:
            raise CoxeterError(f"{w!r} is not an element of {self.name}") from None

    def multiply(self, x: Element, y: Element) -> Element:
        return self.elements[self.mul_idx(self.idx(x), self.idx(y))]

    def invert(self, x: Element) -> Element:
        return self.elements[self.inv[self.idx(x)]]

    def length(self, x: Element) -> int:
        return self.lengths[self.idx(x)]

    def mul_idx(self, i: int, j: int) -> int:
        for s in reversed(self._words[i]):
            j = self.lmul[s][j]
        return j

    def gen(self, name: str | int) -> int:
        """Index of a generator given by name ('s0', 's1', ...) or position."""
        if isinstance(name, int):
            return self.gen_index[name]
        if name == "t" and self.family == "B":
            name = "s0"
        try:
            return self.gen_index[self.gens.index(name)]
        except ValueError:
            raise CoxeterError(f"unknown generator {name!r}") from None

    def gen_pos(self, name: str) -> int:
        if name == "t" and self.family == "B":
            name = "s0"
        try:
            return self.gens.index(name)
        except ValueError:
            raise CoxeterError(f"unknown generator {name!r}") from None

    def from_word(self, word: str | Sequence[str] | Sequence[int]) -> int:
        """Index of the product of a word, e.g. 's1s0s1' or ['s1','s0'] or '1'."""
        if isinstance(word, str):
            if word.strip() in ("", "1", "e"):
                return 0
            letters = re.findall(r"s\d+|t", word)
            if "".join(letters) != word.replace(" ", "").replace("*", "").replace("·", ""):
                raise CoxeterError(f"cannot parse word {word!r}")
            seq = [self.gen_pos(g) for g in letters]
        else:
            seq = [g if isinstance(g, int) else self.gen_pos(g) for g in word]
        w = 0
        for s in seq:
            if not 0 <= s < len(self.gens):
                raise CoxeterError(f"generator position {s} out of range")
            w = self.rmul[s][w]
        return w

    def reduced_word_idx(self, i: int) -> tuple[int, ...]:
        """Lexicographically smallest reduced word, as generator positions."""
        return self._words[i]

    def reduced_word(self, x: Element | int) -> list[str]:
        return [self.gens[s] for s in self._words[self.idx(x)]]

    def label(self, i: int) -> str:
        word = self._words[i]
        return "".join(self.gens[s] for s in word) if word else "1"

    def to_json(self, i: int):
        w = self.elements[i]
        return list(w) if isinstance(w, tuple) else w

    def from_json(self, data) -> int:
        return self.idx(tuple(data) if isinstance(data, list) else data)

    def left_descents_idx(self, i: int) -> list[int]:
        return [s for s in range(len(self.gens)) if self.lengths[self.lmul[s][i]] < self.lengths[i]]

    def right_descents_idx(self, i: int) -> list[int]:
        return [s for s in range(len(self.gens)) if self.lengths[self.rmul[s][i]] < self.lengths[i]]

    def descents(self, x: Element | int, side: str = "left") -> set[str]:
        i = self.idx(x)
        ds = self.left_descents_idx(i) if side in ("left", "L") else self.right_descents_idx(i)
        return {self.gens[s] for s in ds}

    def bruhat_leq_idx(self, i: int, j: int) -> bool:
        return bool(self._bruhat[j] >> i & 1)

    def bruhat_leq(self, x: Element | int, y: Element | int) -> bool:
        return self.bruhat_leq_idx(self.idx(x), self.idx(y))

    def bruhat_below(self, j: int) -> list[int]:
        b, out = self._bruhat[j], []
        while b:
            low = b & -b
            out.append(low.bit_length() - 1)
            b ^= low
        return out

    def enumerate(self) -> list[Element]:
        return list(self.elements)

    @property
    def name(self) -> str:
        if self.family == "I2":
            return f"I2({self.m})"
        return f"{self.family}{self.rank}"

    # parabolic subgroups and cosets
    def subset(self, I: Iterable[str | int]) -> frozenset[int]:
        """Normalize a parabolic subset to a frozenset of generator positions."""
        out = set()
        for g in I:
            if isinstance(g, int):
                if not 0 <= g < len(self.gens):
                    raise CoxeterError(f"generator position {g} out of range")
                out.add(g)
            else:
                out.add(self.gen_pos(g))
        return frozenset(out)

    def all_subsets(self) -> list[frozenset[int]]:
        k = len(self.gens)
        return [frozenset(c) for r in range(k + 1) for c in combinations(range(k), r)]

    def parabolic_elements(self, I: Iterable[str | int]) -> list[int]:
        I = self.subset(I)
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for w in frontier:
                for s in I:
                    u = self.rmul[s][w]
                    if u not in seen:
                        seen.add(u)
                        nxt.append(u)
            frontier = nxt
        return sorted(seen)

    def coset_reps(self, I: Iterable[str | int], side: str = "left") -> list[int]:
        """X_I (minimal in wW_I) for side='left', Y_I = X_I^{-1} for side='right'."""
        I = self.subset(I)
        if side in ("left", "L"):
            return [w for w in range(self.size) if not (set(self.right_descents_idx(w)) & I)]
        return [w for w in range(self.size) if not (set(self.left_descents_idx(w)) & I)]

    def coset_decompose(self, w: Element | int, I: Iterable[str | int], side: str = "left") -> tuple[int, int]:
        """Return (x, u) with w = x*u (side='left', x in X_I) or w = u*x (side='right', x in Y_I)."""
        I = self.subset(I)
        x = self.idx(w)
        u = 0
        left = side in ("left", "L")
        while True:
            for s in I:
                if left and self.lengths[self.rmul[s][x]] < self.lengths[x]:
                    x, u = self.rmul[s][x], self.lmul[s][u]
                    break
                if not left and self.lengths[self.lmul[s][x]] < self.lengths[x]:
                    x, u = self.lmul[s][x], self.rmul[s][u]
                    break
            else:
                return x, u

    def longest_element(self, I: Iterable[str | int] | None = None) -> int:
        if I is None:
            return self.w0
        els = self.parabolic_elements(I)
        return max(els, key=lambda i: self.lengths[i])

    def conj_by_w0(self, w: Element | int) -> int:
        i = self.idx(w)
        return self.mul_idx(self.mul_idx(self.w0, i), self.w0)

    def conjugate_generators(self) -> list[list[int]]:
        """Classes of generator positions under conjugacy (odd bonds)."""
        k = len(self.gens)
        parent = list(range(k))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i in range(k):
            for j in range(i + 1, k):
                if self.coxeter_matrix[i][j] % 2 == 1:
                    parent[find(i)] = find(j)
        classes: dict[int, list[int]] = {}
        for i in range(k):
            classes.setdefault(find(i), []).append(i)
        return sorted(classes.values())

    def t_length(self, i: int) -> int:
        """Number of occurrences of s0 in a reduced word (type B)."""
        if self.family != "B":
            raise CoxeterError("t-length is defined for type B only")
        return sum(1 for v in self.elements[i] if v < 0)  # type: ignore[union-attr]


def symmetric_group(n: int, limit: int | None = None) -> CoxeterSystem:
    """The symmetric group on n letters (type A_{n-1})."""
    return CoxeterSystem("A", n - 1, limit=limit)


def type_b(n: int, limit: int | None = None) -> CoxeterSystem:
    return CoxeterSystem("B", n, limit=limit)


def dihedral(m: int, limit: int | None = None) -> CoxeterSystem:
    return CoxeterSystem("I2", 2, m=m, limit=limit)


def coxeter_system(family: str, rank: int, m: int | None = None, limit: int | None = None) -> CoxeterSystem:
    return CoxeterSystem(family, rank, m=m, limit=limit)
