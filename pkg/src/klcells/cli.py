"""kl-cells: command line front end with an on-disk table cache.

Exit codes: 0 success, 1 a requested check failed, 2 invalid configuration,
3 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .cells import cell_partition, check_properties
from .coxeter import CoxeterError, CoxeterSystem, ResourceLimitError
from .grpring import GroupRingElement as GRE
from .grpring import GroupRingError, WeightFunction
from .hecke import HeckeAlgebra, HeckeError
from .jring import JRingError
from .typeb import TypeBError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_LIMIT = 0, 1, 2, 3

COMMANDS = ("cells", "kl", "h-table", "pstar", "induce", "rs", "celldatum", "jring", "phi", "canphi", "table1", "check")
TABLE_KINDS = ("P", "gen_rows", "h")
CACHE_FORMAT = "klcells-table"
CACHE_VERSION = 1

DEFAULT_PROPS = "P1-P8,P11,spadesuit"
EXTRA_SUITES = ("invariant", "cellular", "jring", "phi", "relative_spadesuit")


class ConfigError(ValueError):
    pass


@dataclass
class JobConfig:
    command: str
    family: str = "B"
    rank: int = 2
    m: int | None = None
    weights: str = "generic"
    parabolic: list[str] | None = None
    side: str = "L"
    fmt: str | None = None
    cache: str | None = None
    jobs: int = 1
    max_rank: int | None = None
    props: str = DEFAULT_PROPS
    nhat: str = "one"
    basis: str = "group"
    output: str | None = None
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        self.family = self.family.upper()
        if self.family not in ("A", "B", "I2"):
            raise ConfigError(f"unsupported type {self.family!r}")
        if self.family == "I2":
            if self.m is None:
                raise ConfigError("type I2 needs --m")
            self.rank = 2
        if self.side not in ("L", "R", "LR"):
            raise ConfigError(f"side must be L, R or LR, got {self.side!r}")
        if self.fmt not in (None, "json", "csv", "text"):
            raise ConfigError(f"unknown format {self.fmt!r}")
        if self.jobs < 1:
            raise ConfigError("--jobs must be positive")
        w = self.weights.strip().lower()
        if w not in ("generic", "equal"):
            ab = parse_ab(w)
            if self.family == "A":
                raise ConfigError("type A takes equal parameters only")
            if self.family == "I2" and self.m % 2 and ab[0] != ab[1]:
                raise ConfigError("odd dihedral types need equal parameters")
        elif w == "generic" and (self.family == "A" or (self.family == "I2" and self.m % 2)):
            # no two-parameter weight exists here
            self.weights = "equal"
        if self.command in ("jring", "phi", "canphi", "table1", "celldatum") and self.family != "B":
            raise ConfigError(f"{self.command} is defined for type B only")
        if self.command == "table1" and self.rank != 2:
            raise ConfigError("table1 is the B2 table")
        if self.command in ("jring", "phi", "canphi", "celldatum", "table1") and not self.is_asymptotic():
            raise ConfigError("weights are not asymptotic: need b > (n-1)a")

    def is_asymptotic(self) -> bool:
        if self.family != "B":
            return False
        if self.weights.lower() == "generic":
            return True
        if self.weights.lower() == "equal":
            return self.rank == 1
        a, b = parse_ab(self.weights)
        return b > (self.rank - 1) * a

    def system(self) -> CoxeterSystem:
        return CoxeterSystem(self.family, self.rank, m=self.m, limit=self.max_rank)

    def weight_function(self, W: CoxeterSystem) -> WeightFunction:
        w = self.weights.lower()
        if w == "generic":
            return WeightFunction.generic(W)
        if w == "equal":
            return WeightFunction.equal(W)
        a, b = parse_ab(w)
        if self.family == "B":
            return WeightFunction.asymptotic(W, a, b)
        return WeightFunction(W, [(a,), (b,)])

    def key_data(self, W: CoxeterSystem, L: WeightFunction) -> dict:
        return {"type": W.family, "rank": W.rank, "m": W.m, "weights": [list(v) for v in L.values]}


def parse_ab(text: str) -> tuple[int, int]:
    parts = text.split(",")
    try:
        a, b = (int(p) for p in parts)
    except ValueError:
        raise ConfigError(f"weights must be 'generic', 'equal' or 'a,b', got {text!r}") from None
    if a <= 0 or b <= 0:
        raise ConfigError("specialized weights need a, b > 0")
    return a, b


def expand_props(spec: str) -> list[str]:
    """'P1-P8,P11,spadesuit' -> ['P1', ..., 'P8', 'P11', 'spadesuit']."""
    out: list[str] = []
    for item in (p.strip() for p in spec.split(",")):
        if not item:
            continue
        if "-" in item and item.startswith("P"):
            lo, hi = item.split("-")
            try:
                a, b = int(lo[1:]), int(hi.lstrip("P"))
            except ValueError:
                raise ConfigError(f"bad property range {item!r}") from None
            out.extend(f"P{i}" for i in range(a, b + 1))
        else:
            out.append(item)
    return out


# disk cache
def _encode_table(kind: str, table) -> Any:
    def vec(v):
        return [[k, [[list(e), c] for e, c in g.terms()]] for k, g in v.items()]

    if kind == "P":
        return [vec(v) for v in table]
    return [[vec(v) for v in row] for row in table]


def _decode_table(kind: str, data, k: int):
    def vec(v):
        return {int(i): GRE._raw({tuple(e): int(c) for e, c in terms}, k) for i, terms in v}

    if kind == "P":
        return [vec(v) for v in data]
    return [[vec(v) for v in row] for row in data]


class TableCache:
    """One file per (context, table kind): a JSON header line, then the JSON payload line."""

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self.events: list[str] = []

    def path(self, key: dict, kind: str) -> Path:
        digest = hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()[:24]
        return self.root / f"{key['type']}{key['rank']}-{digest}.{kind}.json"

    def load(self, key: dict, kind: str, k: int):
        p = self.path(key, kind)
        if not p.exists():
            self.events.append(f"miss {kind}")
            return None
        try:
            head, body = p.read_bytes().split(b"\n", 1)
            header = json.loads(head)
            body = body.rstrip(b"\n")
            ok = (
                header.get("format") == CACHE_FORMAT
                and header.get("version") == CACHE_VERSION
                and header.get("kind") == kind
                and header.get("context") == key
                and header.get("sha256") == hashlib.sha256(body).hexdigest()
            )
            if not ok:
                raise ValueError("header or checksum mismatch")
            table = _decode_table(kind, json.loads(body), k)
        except (ValueError, KeyError, TypeError, GroupRingError) as exc:
            self.events.append(f"corrupt {kind}")
            print(f"kl-cells: ignoring cache file {p.name}: {exc}", file=sys.stderr)
            return None
        self.events.append(f"hit {kind}")
        return table

    def store(self, key: dict, kind: str, table) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        body = json.dumps(_encode_table(kind, table), separators=(",", ":")).encode()
        header = {
            "format": CACHE_FORMAT,
            "version": CACHE_VERSION,
            "kind": kind,
            "context": key,
            "sha256": hashlib.sha256(body).hexdigest(),
        }
        p = self.path(key, kind)
        tmp = p.with_suffix(".tmp")
        tmp.write_bytes(json.dumps(header, sort_keys=True).encode() + b"\n" + body + b"\n")
        tmp.replace(p)


def build_algebra(cfg: JobConfig, cache: TableCache | None = None, need_h: bool = False) -> HeckeAlgebra:
    W = cfg.system()
    L = cfg.weight_function(W)
    alg = HeckeAlgebra(W, L)
    key = cfg.key_data(W, L)
    kinds = TABLE_KINDS if need_h else TABLE_KINDS[:2]
    if cache is not None:
        state = {kind: cache.load(key, kind, alg.k) for kind in kinds}
        alg.import_state({k: v for k, v in state.items() if v is not None})
    if need_h:
        alg.build_h_table(cfg.jobs)
    _ = alg.P, alg.gen_rows
    if cache is not None:
        current = alg.export_state()
        for kind in kinds:
            if f"hit {kind}" not in cache.events:
                cache.store(key, kind, current[kind])
    return alg


# command bodies; each returns (json payload, csv header, csv rows, ok)
@dataclass
class Result:
    payload: Any
    header: list[str]
    rows: list[list]
    ok: bool = True
    default_fmt: str = "json"


def _gre_text(g: GRE) -> str:
    return str(g)


def _subset(cfg: JobConfig, W: CoxeterSystem):
    if cfg.parabolic is None:
        return None
    return W.subset(cfg.parabolic)


def cmd_cells(cfg: JobConfig, alg: HeckeAlgebra) -> Result:
    W = alg.W
    part = cell_partition(alg, cfg.side, _subset(cfg, W))
    rows = [[i, W.label(w)] for i, c in enumerate(part.cells) for w in c]
    return Result(part.to_json(W), ["cell", "element"], rows)


def cmd_kl(cfg: JobConfig, alg: HeckeAlgebra) -> Result:
    W = alg.W
    entries, rows = [], []
    for w in range(W.size):
        for y, p in sorted(alg.P[w].items()):
            entries.append({"y": W.label(y), "w": W.label(w), "pstar": p.to_json()})
            rows.append([W.label(y), W.label(w), _gre_text(p)])
    return Result({"system": W.name, "weights": alg.L.describe(), "pstar": entries}, ["y", "w", "pstar"], rows)


def cmd_h_table(cfg: JobConfig, alg: HeckeAlgebra) -> Result:
    W = alg.W
    entries, rows = [], []
    for x in range(W.size):
        for y in range(W.size):
            for z, h in sorted(alg.h_table[x][y].items()):
                entries.append({"x": W.label(x), "y": W.label(y), "z": W.label(z), "h": h.to_json()})
                rows.append([W.label(x), W.label(y), W.label(z), _gre_text(h)])
    return Result({"system": W.name, "weights": alg.L.describe(), "h": entries}, ["x", "y", "z", "h"], rows)


def cmd_pstar(cfg: JobConfig, alg: HeckeAlgebra) -> Result:
    from .parabolic import relative_kl

    W = alg.W
    rel = relative_kl(alg, cfg.parabolic or [])
    entries, rows = [], []
    for w2 in range(W.size):
        for w1, p in sorted(rel.p[w2].items()):
            entries.append({"w1": W.label(w1), "w2": W.label(w2), "pstar": p.to_json()})
            rows.append([W.label(w1), W.label(w2), _gre_text(p)])
    return Result({"I": rel.I_names, "pstar": entries}, ["w1", "w2", "pstar"], rows)


def cmd_induce(cfg: JobConfig, alg: HeckeAlgebra) -> Result:
    from .parabolic import induce_cell

    W = alg.W
    I = W.subset(cfg.parabolic or [])
    cellsI = cell_partition(alg, "L", I, within="WI").cells
    out, rows, ok = [], [], True
    for c in cellsI:
        ind = induce_cell(alg, I, c)
        ok &= ind.ok
        out.append(
            {
                "cell": [W.label(w) for w in ind.cell],
                "induced": [W.label(w) for w in ind.elements],
                "union_of_left_cells": ind.union_of_left_cells,
                "left_cells": [[W.label(w) for w in lc] for lc in ind.left_cells],
                "intertwines": ind.intertwines,
                "intertwines_delta": ind.intertwines_delta,
            }
        )
        rows.append([" ".join(W.label(w) for w in ind.cell), len(ind.elements), ind.union_of_left_cells, ind.ok])
    return Result({"I": [W.gens[s] for s in sorted(I)], "induced": out}, ["cell", "size", "union", "ok"], rows, ok)


def cmd_rs(cfg: JobConfig, alg: HeckeAlgebra) -> Result:
    from . import typeb

    W = alg.W
    entries, rows = [], []
    for w in range(W.size):
        if W.family == "A":
            P, Q = typeb.rs_classical(list(W.elements[w]))
            entries.append({"w": W.to_json(w), "label": W.label(w), "P": [list(r) for r in P], "Q": [list(r) for r in Q]})
            rows.append([W.label(w), json.dumps([list(r) for r in Q])])
        elif W.family == "B":
            lam = typeb.bipartition_label(alg, w)
            B = typeb.right_bitableau(alg, w)
            entries.append(
                {
                    "w": W.to_json(w),
                    "label": W.label(w),
                    "bipartition": typeb.bipartition_json(lam),
                    "right": typeb.bitableau_json(B),
                    "left": typeb.bitableau_json(typeb.left_bitableau(alg, w)),
                }
            )
            rows.append([W.label(w), json.dumps(typeb.bipartition_json(lam)), json.dumps(typeb.bitableau_json(B))])
        else:
            raise ConfigError("rs is defined for types A and B")
    return Result({"system": W.name, "elements": entries}, ["w", "shape", "tableau"], rows)


def cmd_celldatum(cfg: JobConfig, alg: HeckeAlgebra) -> Result:
    from .typeb import build_cell_datum

    d = build_cell_datum(alg)
    js = d.to_json()
    rows = [[json.dumps(b["lambda"]), json.dumps(b["S"]), json.dumps(b["T"]), alg.W.label(alg.W.from_json(b["w"]))] for b in js["basis"]]
    return Result(js, ["lambda", "S", "T", "w"], rows)


def cmd_jring(cfg: JobConfig, alg: HeckeAlgebra) -> Result:
    from . import jring

    W = alg.W
    J = jring.j_ring(alg, lusztig=cfg.nhat == "lusztig")
    sd = jring.schur_elements(alg)
    gh = [
        {"x": W.label(x), "y": W.label(y), "z": W.label(z), "value": c}
        for (x, y, z), c in sorted(J.gamma_hat.items())
    ]
    payload = {
        "n_hat": {W.label(w): v for w, v in enumerate(J.n_hat)},
        "gamma_hat": gh,
        "schur": [{"lambda": [list(p) for p in lam], "c": sd.c[lam].to_json()} for lam in sd.lambdas],
    }
    rows = [[g["x"], g["y"], g["z"], g["value"]] for g in gh]
    return Result(payload, ["x", "y", "t_z", "coefficient"], rows)


def cmd_phi(cfg: JobConfig, alg: HeckeAlgebra) -> Result:
    from .jring import phi_json

    js = phi_json(alg, lusztig=cfg.nhat == "lusztig")
    js["n_hat"] = cfg.nhat
    M = js["entries"]
    rows = [[e["w"], e["z"], str(GRE.from_json(e["value"], alg.k))] for e in M]
    return Result(js, ["w", "z", "value"], rows)


def cmd_canphi(cfg: JobConfig, alg: HeckeAlgebra) -> Result:
    from .jring import canphi_json

    js = canphi_json(alg, "c" if cfg.basis == "c" else "group")
    rows = []
    for i, w in enumerate(js["elements"]):
        for j, z in enumerate(js["elements"]):
            if js["matrix"][i][j]:
                rows.append([w, z, json.dumps(js["matrix"][i][j])])
    return Result(js, ["w", "z", "value"], rows)


def cmd_table1(cfg: JobConfig, alg: HeckeAlgebra) -> Result:
    from .jring import TABLE1_ORDER, table1

    M = table1(alg)
    return Result({"order": TABLE1_ORDER, "matrix": M}, [], M, default_fmt="csv")


def cmd_check(cfg: JobConfig, alg: HeckeAlgebra) -> Result:
    names = expand_props(cfg.props)
    reports = []
    core = [n for n in names if n not in EXTRA_SUITES]
    try:
        reports += check_properties(alg, core)
    except HeckeError as exc:
        raise ConfigError(str(exc)) from None
    for name in names:
        if name == "relative_spadesuit":
            reports += check_properties(alg, ["relative_spadesuit"])
        elif name == "invariant":
            from .typeb import invariant_matches_cells

            reports.append(invariant_matches_cells(alg))
        elif name in ("cellular", "jring", "phi"):
            if not cfg.is_asymptotic():
                raise ConfigError(f"{name} needs asymptotic type B weights")
            if name == "cellular":
                from .typeb import build_cell_datum, check_cell_datum

                reports += check_cell_datum(build_cell_datum(alg))
            elif name == "jring":
                from .jring import run_all

                reports += run_all(alg, exhaustive=alg.W.size <= 8)
            else:
                from .jring import check_phi

                reports += check_phi(alg)
    js = [r.to_json() for r in reports]
    rows = [[r.property, r.status, r.checked, len(r.counterexamples)] for r in reports]
    return Result(js, ["property", "status", "checked", "counterexamples"], rows, all(r.ok for r in reports), "text")


HANDLERS = {
    "cells": cmd_cells,
    "kl": cmd_kl,
    "h-table": cmd_h_table,
    "pstar": cmd_pstar,
    "induce": cmd_induce,
    "rs": cmd_rs,
    "celldatum": cmd_celldatum,
    "jring": cmd_jring,
    "phi": cmd_phi,
    "canphi": cmd_canphi,
    "table1": cmd_table1,
    "check": cmd_check,
}
NEEDS_H = {"h-table", "jring", "phi", "canphi", "table1", "check", "celldatum"}


def render(res: Result, fmt: str | None) -> str:
    fmt = fmt or res.default_fmt
    if fmt == "json":
        return json.dumps(res.payload, indent=1, sort_keys=True, default=str) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        if res.header:
            wr.writerow(res.header)
        wr.writerows(res.rows)
        return buf.getvalue()
    lines = ["\t".join(str(v) for v in row) for row in res.rows]
    if res.header:
        lines.insert(0, "\t".join(res.header))
    return "\n".join(lines) + "\n"


def run(cfg: JobConfig, stdout=None) -> int:
    """Execute one job; writes the artifact to cfg.output or stdout and returns an exit code."""
    stdout = stdout or sys.stdout
    try:
        cfg.validate()
        cache = TableCache(cfg.cache) if cfg.cache else None
        alg = build_algebra(cfg, cache, need_h=cfg.command in NEEDS_H)
        res = HANDLERS[cfg.command](cfg, alg)
    except ResourceLimitError as exc:
        print(f"kl-cells: resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (ConfigError, CoxeterError, GroupRingError, HeckeError, TypeBError, JRingError) as exc:
        print(f"kl-cells: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = render(res, cfg.fmt)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        stdout.write(text)
    return EXIT_OK if res.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", dest="family", default="B", help="A, B or I2 (default B)")
    common.add_argument("--rank", type=int, default=2, help="Coxeter rank; A_r acts on r+1 letters")
    common.add_argument("--m", type=int, default=None, help="order of s1 s2 for type I2")
    common.add_argument("--weights", default="generic", help="'generic' (Z^2 lex), 'equal', or 'a,b' with L(s_i)=a, L(s0)=b")
    common.add_argument("--parabolic", default=None, help="comma separated generators of I, e.g. s0,s1")
    common.add_argument("--side", default="L", choices=["L", "R", "LR"])
    common.add_argument("--format", dest="fmt", default=None, choices=["json", "csv", "text"])
    common.add_argument("--cache", default=os.environ.get("KLCELLS_CACHE"), help="table cache directory (env KLCELLS_CACHE)")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--max-rank", type=int, default=None, help="override the default rank ceiling")
    common.add_argument("-o", "--output", default=None, help="write the artifact to this file")

    ap = argparse.ArgumentParser(prog="kl-cells", description="Exact multi-parameter Kazhdan-Lusztig cells and type B asymptotic structures.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "check":
            p.add_argument("--props", default=DEFAULT_PROPS, help=f"comma list; ranges like P1-P8; extra suites {', '.join(EXTRA_SUITES)}")
        if name in ("phi", "jring"):
            p.add_argument("--nhat", choices=["one", "lusztig"], default="one" if name == "phi" else "lusztig")
        if name == "canphi":
            p.add_argument("--basis", choices=["group", "c"], default="group")
    return ap


def config_from_args(ns: argparse.Namespace) -> JobConfig:
    par = None
    if ns.parabolic is not None:
        par = [g.strip() for g in ns.parabolic.split(",") if g.strip()]
    return JobConfig(
        command=ns.command,
        family=ns.family,
        rank=ns.rank,
        m=ns.m,
        weights=ns.weights,
        parabolic=par,
        side=ns.side,
        fmt=ns.fmt,
        cache=ns.cache,
        jobs=ns.jobs,
        max_rank=ns.max_rank,
        props=getattr(ns, "props", DEFAULT_PROPS),
        nhat=getattr(ns, "nhat", "one"),
        basis=getattr(ns, "basis", "group"),
        output=ns.output,
    )


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_CONFIG
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
