"""Golden B2 data: the 8x8 phi table and the phi / Phi formulas, in V = Q, v = q."""

from pathlib import Path

from klcells.grpring import GroupRingElement as GRE
from klcells.grpring import RationalFraction

TABLE1 = [[int(x) for x in line.split(",")] for line in (Path(__file__).parent / "golden" / "table1.csv").read_text().split()]


def poly(*terms):
    return GRE({e: c for e, c in terms}, k=2)


Qs = poly(((1, 0), 1), ((-1, 0), 1))  # Q + Q^-1
qs = poly(((0, 1), 1), ((0, -1), 1))  # q + q^-1

PHI_C_S0 = {"s0": Qs, "s0s1": poly(((1, -1), 1), ((-1, 1), 1)), "s0s1s0": Qs, "s0s1s0s1": Qs}
PHI_C_S1 = {"s1": qs, "s1s0": GRE.one(2), "s1s0s1": qs, "s0s1s0s1": qs}


def _frac(den, *terms):
    return RationalFraction(poly(*terms), GRE.const(den, 2))


def _spread(c, signs):
    return {w: c * RationalFraction.of(s, 2) for w, s in signs.items()}


PHI_T_S0 = {
    "1": _frac(2, ((1, 0), 1), ((-1, 0), -1)),
    "s0": _frac(2, ((1, 0), 1), ((-1, 0), 1)),
    **_spread(_frac(4, ((1, 0), 1), ((1, -1), -1), ((-1, 1), -1), ((-1, 0), 1)), {"s1": -1, "s1s0": 1, "s0s1": -1, "s0s1s0": 1}),
}
PHI_T_S1 = {
    "1": _frac(2, ((0, 1), 1), ((0, -1), -1)),
    "s1": _frac(2, ((0, 1), 1), ((0, -1), 1)),
    **_spread(_frac(4, ((0, 1), 1), ((0, 0), -2), ((0, -1), 1)), {"s0": -1, "s1s0": -1, "s0s1": 1, "s1s0s1": 1}),
}

LEFT_CELLS = [["1"], ["s1"], ["s0", "s1s0"], ["s1s0s1", "s0s1"], ["s0s1s0"], ["s0s1s0s1"]]
