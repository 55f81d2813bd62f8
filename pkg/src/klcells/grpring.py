"""Group ring A = Z[Gamma] of a totally ordered free abelian group Gamma = Z^k.

Elements are sparse maps from exponent tuples to integers.  Gamma is ordered
lexicographically, which is exactly Python's tuple comparison, so the
positive/negative parts and leading terms fall out of plain tuple ordering.

A second type, :class:`RationalFraction`, is an unreduced quotient of two
group ring elements.  It is only used for verification-side arithmetic in the
fraction field (Schur elements, the rational change of basis of the
canonical isomorphism) and compares by cross-multiplication.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping

Exponent = tuple[int, ...]


class GroupRingError(ValueError):
    """Raised on arity mismatch or malformed input."""


class GroupRingElement:
    """An element sum_g c_g e^g of Z[Z^k], stored with exponents sorted descending."""

    __slots__ = ("_terms", "k", "_hash")

    def __init__(self, terms: Mapping[Exponent, int] | Iterable[tuple[Exponent, int]] = (), k: int = 1):
        if k < 1:
            raise GroupRingError("arity must be positive")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, int] = {}
        for e, c in items:
            e = tuple(int(x) for x in e)
            if len(e) != k:
                raise GroupRingError(f"exponent {e} does not have arity {k}")
            if c:
                acc[e] = acc.get(e, 0) + int(c)
        self._terms = {e: acc[e] for e in sorted(acc, reverse=True) if acc[e]}
        self.k = k
        self._hash: int | None = None

    @classmethod
    def _raw(cls, terms: dict[Exponent, int], k: int) -> "GroupRingElement":
        # trusted constructor: terms already has correct arity and no zeros
        obj = cls.__new__(cls)
        obj._terms = {e: terms[e] for e in sorted(terms, reverse=True)}
        obj.k = k
        obj._hash = None
        return obj

    # constructors
    @classmethod
    def zero(cls, k: int = 1) -> "GroupRingElement":
        return cls._raw({}, k)

    @classmethod
    def one(cls, k: int = 1) -> "GroupRingElement":
        return cls._raw({(0,) * k: 1}, k)

    @classmethod
    def const(cls, c: int, k: int = 1) -> "GroupRingElement":
        return cls._raw({(0,) * k: c} if c else {}, k)

    @classmethod
    def mono(cls, exp: Iterable[int], coef: int = 1) -> "GroupRingElement":
        exp = tuple(int(x) for x in exp)
        return cls._raw({exp: coef} if coef else {}, len(exp))

    # access
    def terms(self) -> list[tuple[Exponent, int]]:
        return list(self._terms.items())

    def __iter__(self) -> Iterator[tuple[Exponent, int]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def coeff(self, exp: Iterable[int]) -> int:
        return self._terms.get(tuple(exp), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def degree(self) -> Exponent | None:
        """Largest exponent, or None for zero."""
        return next(iter(self._terms), None)

    def low_degree(self) -> Exponent | None:
        if not self._terms:
            return None
        return next(reversed(self._terms))

    def leading(self) -> tuple[Exponent, int] | None:
        return next(iter(self._terms.items()), None)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> int:
        return self._terms.get((0,) * self.k, 0)

    # arithmetic
    def _check(self, other: "GroupRingElement") -> None:
        if self.k != other.k:
            raise GroupRingError(f"arity mismatch: {self.k} vs {other.k}")

    def _coerce(self, other) -> "GroupRingElement":
        if isinstance(other, GroupRingElement):
            self._check(other)
            return other
        if isinstance(other, int):
            return GroupRingElement.const(other, self.k)
        return NotImplemented

    def __add__(self, other) -> "GroupRingElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        for e, c in other._terms.items():
            v = acc.get(e, 0) + c
            if v:
                acc[e] = v
            else:
                acc.pop(e, None)
        return GroupRingElement._raw(acc, self.k)

    __radd__ = __add__

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement._raw({e: -c for e, c in self._terms.items()}, self.k)

    def __sub__(self, other) -> "GroupRingElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "GroupRingElement":
        return (-self) + other

    def __mul__(self, other) -> "GroupRingElement":
        if isinstance(other, int):
            if not other:
                return GroupRingElement.zero(self.k)
            return GroupRingElement._raw({e: c * other for e, c in self._terms.items()}, self.k)
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        self._check(other)
        acc: dict[Exponent, int] = {}
        if self.k == 1:
            for (e1,), c1 in self._terms.items():
                for (e2,), c2 in other._terms.items():
                    e = (e1 + e2,)
                    acc[e] = acc.get(e, 0) + c1 * c2
        else:
            for e1, c1 in self._terms.items():
                for e2, c2 in other._terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    acc[e] = acc.get(e, 0) + c1 * c2
        return GroupRingElement._raw({e: c for e, c in acc.items() if c}, self.k)

    __rmul__ = __mul__

    def shift(self, exp: Iterable[int]) -> "GroupRingElement":
        """Multiply by the monomial e^exp."""
        exp = tuple(exp)
        if len(exp) != self.k:
            raise GroupRingError("arity mismatch in shift")
        return GroupRingElement._raw(
            {tuple(a + b for a, b in zip(e, exp)): c for e, c in self._terms.items()}, self.k
        )

    def bar(self) -> "GroupRingElement":
        """The ring involution e^g -> e^{-g}."""
        return GroupRingElement._raw({tuple(-x for x in e): c for e, c in self._terms.items()}, self.k)

    def is_bar_invariant(self) -> bool:
        return self == self.bar()

    def part(self, region: str) -> "GroupRingElement":
        """Restriction to exponents in region '<0', '<=0', '>=0' or '>0'."""
        z = (0,) * self.k
        tests = {
            "<0": lambda e: e < z,
            "<=0": lambda e: e <= z,
            ">=0": lambda e: e >= z,
            ">0": lambda e: e > z,
        }
        if region not in tests:
            raise GroupRingError(f"unknown region {region!r}")
        t = tests[region]
        return GroupRingElement._raw({e: c for e, c in self._terms.items() if t(e)}, self.k)

    def in_region(self, region: str) -> bool:
        return self.part(region) == self

    # specializations
    def specialize(self, weights: Iterable[int]) -> "GroupRingElement":
        """Map e^g to e^{<g, weights>}, landing in Z[Z]."""
        w = tuple(weights)
        if len(w) != self.k:
            raise GroupRingError("specialization weights must match arity")
        acc: dict[Exponent, int] = {}
        for e, c in self._terms.items():
            d = (sum(a * b for a, b in zip(e, w)),)
            acc[d] = acc.get(d, 0) + c
        return GroupRingElement._raw({e: c for e, c in acc.items() if c}, 1)

    def theta1(self) -> int:
        """The augmentation e^g -> 1."""
        return sum(self._terms.values())

    # comparison, hashing
    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self == GroupRingElement.const(other, self.k)
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.k == other.k and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.k, tuple(self._terms.items())))
        return self._hash

    # serialization
    def to_json(self) -> list[dict]:
        return [{"exp": list(e), "coef": str(c)} for e, c in self._terms.items()]

    @classmethod
    def from_json(cls, data: list[dict], k: int) -> "GroupRingElement":
        try:
            return cls(((tuple(t["exp"]), int(t["coef"])) for t in data), k)
        except (KeyError, TypeError) as exc:
            raise GroupRingError(f"malformed group ring element: {exc}") from exc

    def __repr__(self) -> str:
        return f"GroupRingElement({self})"

    def __str__(self) -> str:
        return format_element(self)


def format_element(f: GroupRingElement, names: tuple[str, ...] | None = None) -> str:
    """Human readable rendering, e.g. 'V*v^-1 + 2' for k=2."""
    if not f:
        return "0"
    if names is None:
        names = ("v",) if f.k == 1 else ("V", "v") if f.k == 2 else tuple(f"x{i}" for i in range(f.k))
    parts = []
    for e, c in f:
        mono = "*".join(n if x == 1 else f"{n}^{x}" for n, x in zip(names, e) if x)
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


class RationalFraction:
    """Unreduced quotient num/den of group ring elements, den nonzero."""

    __slots__ = ("num", "den")

    def __init__(self, num: GroupRingElement, den: GroupRingElement | None = None):
        if den is None:
            den = GroupRingElement.one(num.k)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        num._check(den)
        self.num = num
        self.den = den

    @property
    def k(self) -> int:
        return self.num.k

    @classmethod
    def of(cls, x, k: int) -> "RationalFraction":
        if isinstance(x, RationalFraction):
            return x
        if isinstance(x, GroupRingElement):
            return cls(x)
        if isinstance(x, Fraction):
            return cls(GroupRingElement.const(x.numerator, k), GroupRingElement.const(x.denominator, k))
        if isinstance(x, int):
            return cls(GroupRingElement.const(x, k))
        raise TypeError(f"cannot coerce {type(x).__name__} to RationalFraction")

    def _co(self, other) -> "RationalFraction":
        return RationalFraction.of(other, self.k)

    def __add__(self, other) -> "RationalFraction":
        o = self._co(other)
        if self.den == o.den:
            return RationalFraction(self.num + o.num, self.den)
        return RationalFraction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFraction":
        return RationalFraction(-self.num, self.den)

    def __sub__(self, other) -> "RationalFraction":
        return self + (-self._co(other))

    def __rsub__(self, other) -> "RationalFraction":
        return (-self) + other

    def __mul__(self, other) -> "RationalFraction":
        o = self._co(other)
        return RationalFraction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFraction":
        o = self._co(other)
        return RationalFraction(self.num * o.den, self.den * o.num)

    def bar(self) -> "RationalFraction":
        return RationalFraction(self.num.bar(), self.den.bar())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def theta1(self) -> Fraction:
        d = self.den.theta1()
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at theta1")
        return Fraction(self.num.theta1(), d)

    def as_element(self) -> GroupRingElement | None:
        """Exact quotient when the denominator is a unit monomial or divides evenly by a constant."""
        lead = self.den.leading()
        if len(self.den) == 1 and lead is not None and lead[1] in (1, -1):
            e, c = lead
            return self.num.shift(tuple(-x for x in e)) * c
        if self.den.is_constant():
            c = self.den.constant_term()
            if all(v % c == 0 for _, v in self.num):
                return GroupRingElement._raw({e: v // c for e, v in self.num}, self.k)
        return None

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, GroupRingElement, Fraction, RationalFraction)):
            o = self._co(other)
            return self.num * o.den == o.num * self.den
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"RationalFraction(({self.num}) / ({self.den}))"


class WeightFunction:
    """Per-generator weights L(s) in Gamma = Z^k, checked positive and conjugation invariant.

    ``values[i]`` is the weight of generator position ``i`` of ``system``.
    """

    def __init__(self, system, values):
        vals = [tuple(int(x) for x in (v if isinstance(v, (tuple, list)) else (v,))) for v in values]
        if len(vals) != len(system.gens):
            raise GroupRingError(f"need {len(system.gens)} weights, got {len(vals)}")
        k = len(vals[0])
        if any(len(v) != k for v in vals):
            raise GroupRingError("weights must share one arity")
        zero = (0,) * k
        for g, v in zip(system.gens, vals):
            if not v > zero:
                raise GroupRingError(f"weight of {g} must be positive, got {v}")
        for cls in system.conjugate_generators():
            if len({vals[i] for i in cls}) > 1:
                names = [system.gens[i] for i in cls]
                raise GroupRingError(f"conjugate generators {names} must have equal weights")
        self.system = system
        self.values = vals
        self.k = k

    @classmethod
    def equal(cls, system, c: int = 1) -> "WeightFunction":
        return cls(system, [(c,)] * len(system.gens))

    @classmethod
    def asymptotic(cls, system, a: int, b: int) -> "WeightFunction":
        """Type B over Z: L(s0) = b, L(s_i) = a."""
        if a <= 0 or b <= 0:
            raise GroupRingError("a and b must be positive")
        if system.family != "B":
            raise GroupRingError("(a, b) weights are for type B")
        return cls(system, [(b,)] + [(a,)] * (len(system.gens) - 1))

    @classmethod
    def generic(cls, system) -> "WeightFunction":
        """Type B over Z^2 with lex order: L(s0) = (1,0) = b, L(s_i) = (0,1) = a."""
        if system.family == "B":
            return cls(system, [(1, 0)] + [(0, 1)] * (len(system.gens) - 1))
        if system.family == "I2" and system.m % 2 == 0:
            return cls(system, [(1, 0), (0, 1)])
        raise GroupRingError(f"no generic two-parameter weight for {system.name}")

    def __getitem__(self, s: int) -> Exponent:
        return self.values[s]

    def is_asymptotic(self) -> bool:
        """b > (n-1)a in type B (always true for the generic lex weight)."""
        if self.system.family != "B":
            return False
        b, a = self.values[0], (self.values[1] if len(self.values) > 1 else (0,) * self.k)
        n = len(self.values)
        return b > tuple((n - 1) * x for x in a)

    def describe(self) -> str:
        return ",".join(f"{g}={list(v)}" for g, v in zip(self.system.gens, self.values))


def specialize(x: GroupRingElement, a: int, b: int) -> GroupRingElement:
    """theta: V^i v^j -> e^{ib + ja} from Z^2 to Z."""
    if a <= 0 or b <= 0:
        raise GroupRingError("specialization parameters must be positive")
    if x.k != 2:
        raise GroupRingError("specialize expects arity 2")
    return x.specialize((b, a))


def sign_part(x: GroupRingElement, region: str) -> tuple[GroupRingElement, bool]:
    p = x.part(region)
    return p, p == x
