import json
import subprocess
import sys
from pathlib import Path

import pytest

from klcells import cli

GOLDEN = Path(__file__).parent / "golden" / "table1.csv"


def run(capsys, *args):
    code = cli.main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_table1_matches_golden_bytes(capsys, monkeypatch):
    monkeypatch.delenv("KLCELLS_CACHE", raising=False)
    code, out, _ = run(capsys, "table1")
    assert code == 0
    assert out == GOLDEN.read_text()


def test_cells_b2(capsys):
    code, out, _ = run(capsys, "cells", "--type", "B", "--rank", "2", "--weights", "1,3", "--side", "L")
    js = json.loads(out)
    assert code == 0 and js["side"] == "L" and js["I"] == ["s0", "s1"]
    assert sorted(len(c) for c in js["cells"]) == [1, 1, 1, 1, 2, 2]
    assert all(len(p) == 2 for p in js["order"])


def test_check_b3(capsys):
    code, out, _ = run(capsys, "check", "--props", "P1-P8,spadesuit", "--type", "B", "--rank", "3", "--weights", "1,3")
    assert code == 0
    lines = out.strip().splitlines()[1:]
    assert len(lines) == 9 and all("\tPASS\t" in l for l in lines)


def test_cache_idempotent_and_corruption(capsys, tmp_path):
    args = ["h-table", "--type", "B", "--rank", "2", "--cache", str(tmp_path), "--format", "csv"]
    _, first, _ = run(capsys, *args)
    files = sorted(tmp_path.iterdir())
    assert [f.name.split(".")[1] for f in files] == ["P", "gen_rows", "h"]
    header = json.loads(files[2].read_text().splitlines()[0])
    assert header["context"]["type"] == "B" and header["kind"] == "h" and len(header["sha256"]) == 64
    _, second, _ = run(capsys, *args)
    assert first == second
    # flip one payload byte: detected, recomputed, and the file is rewritten
    h = files[2]
    data = bytearray(h.read_bytes())
    pos = data.index(b'"coef"') if b'"coef"' in data else len(data) - 5
    data[pos] = ord("X") if data[pos] != ord("X") else ord("Y")
    h.write_bytes(bytes(data))
    code, third, err = run(capsys, *args)
    assert code == 0 and third == first and "ignoring cache file" in err
    _, fourth, err = run(capsys, *args)
    assert fourth == first and err == ""


def test_cache_load_events(tmp_path):
    cfg = cli.JobConfig("kl", cache=str(tmp_path))
    cfg.validate()
    c1 = cli.TableCache(tmp_path)
    a = cli.build_algebra(cfg, c1, need_h=True)
    assert c1.events == ["miss P", "miss gen_rows", "miss h"]
    c2 = cli.TableCache(tmp_path)
    b = cli.build_algebra(cfg, c2, need_h=True)
    assert c2.events == ["hit P", "hit gen_rows", "hit h"]
    assert a.P == b.P and a.h_table == b.h_table


@pytest.mark.parametrize(
    "args,code",
    [
        (["cells", "--type", "B", "--rank", "9"], cli.EXIT_LIMIT),
        (["cells", "--weights", "0,1"], cli.EXIT_CONFIG),
        (["cells", "--weights", "x"], cli.EXIT_CONFIG),
        (["cells", "--type", "D"], cli.EXIT_CONFIG),
        (["cells", "--type", "I2"], cli.EXIT_CONFIG),
        (["jring", "--type", "B", "--rank", "3", "--weights", "1,1"], cli.EXIT_CONFIG),
        (["table1", "--rank", "3"], cli.EXIT_CONFIG),
        (["phi", "--type", "A"], cli.EXIT_CONFIG),
        (["check", "--props", "P99"], cli.EXIT_CONFIG),
        (["nope"], cli.EXIT_CONFIG),
    ],
)
def test_exit_codes(capsys, args, code):
    assert run(capsys, *args)[0] == code


def test_rank_ceiling_flag(capsys):
    assert run(capsys, "cells", "--type", "A", "--rank", "3", "--max-rank", "2")[0] == cli.EXIT_LIMIT
    assert run(capsys, "cells", "--type", "A", "--rank", "4", "--format", "csv")[0] == 0


@pytest.mark.parametrize("cmd", cli.COMMANDS)
def test_every_command_json(capsys, cmd):
    extra = ["--parabolic", "s1"] if cmd in ("pstar", "induce") else []
    code, out, _ = run(capsys, cmd, "--format", "json", *extra)
    assert code == 0
    json.loads(out)


@pytest.mark.parametrize("fmt", ["csv", "text"])
def test_formats(capsys, fmt):
    code, out, _ = run(capsys, "rs", "--type", "A", "--rank", "2", "--format", fmt)
    assert code == 0 and len(out.strip().splitlines()) == 7


def test_expand_props():
    assert cli.expand_props("P1-P3,P11,spadesuit") == ["P1", "P2", "P3", "P11", "spadesuit"]
    with pytest.raises(cli.ConfigError):
        cli.expand_props("Pa-P3")


def test_output_file(tmp_path, capsys):
    out = tmp_path / "t.csv"
    assert cli.main(["table1", "-o", str(out)]) == 0
    assert out.read_text() == GOLDEN.read_text()


def test_failed_check_exit_code(capsys, monkeypatch):
    from klcells.cells import PropertyReport

    monkeypatch.setitem(cli.HANDLERS, "check", lambda cfg, alg: cli.Result([], [], [], ok=False))
    assert run(capsys, "check")[0] == cli.EXIT_FAIL
    assert not PropertyReport("x", "FAIL").ok


def test_non_asymptotic_suite_is_a_config_error(capsys):
    code, _, err = run(capsys, "check", "--type", "B", "--rank", "3", "--weights", "1,1", "--props", "invariant")
    assert code == cli.EXIT_CONFIG and "asymptotic" in err


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "klcells.cli", "table1"], capture_output=True, text=True, timeout=120)
    assert r.returncode == 0 and r.stdout == GOLDEN.read_text()
