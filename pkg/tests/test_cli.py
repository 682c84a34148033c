"""CLI behavior: the grammars round-trip through the printers, the
documented invocations print exactly what they promise, and exit codes
separate usage errors (2) from failed checks (1)."""

from __future__ import annotations

import json
from fractions import Fraction

import pytest

from comprelie.characters import TruncatedSeries
from comprelie.cli import (
    CliError,
    emit_report,
    main,
    parse_endo_spec,
    parse_expression,
    run_verify,
)
from comprelie.endo import Endo, fliess_channel, save_endo
from comprelie.enveloping import SymTensor
from comprelie.trees import TreeTensor
from comprelie.words import Tensor


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# every production: empty word, compact and dotted words, shifted
# letters, rational and negative coefficients, the empty monomial "1",
# multi-factor monomials, nested trees, blocks, zero
CORPUS = [
    "0",
    "e",
    "ab",
    "x1 + x0.x1",
    "-2*e + 3/2*ab",
    "1:d + 2:d.0:d",
    "x1 * x2",
    "2*x1 + x2 * x1.x2",
    "3*1 - x1 * x1 * x2",
    "e * ab",
    "a[b]",
    "2*a[b,{c,d}] + d[d]",
    "a[b] + -2*b[a]",
    "{a,b[c]}",
]


def test_print_parse_round_trip():
    for src in CORPUS:
        assert str(parse_expression(src)) == src


def test_parse_expression_types():
    assert isinstance(parse_expression("x1 + e"), Tensor)
    assert isinstance(parse_expression("x1 * x2"), SymTensor)
    assert isinstance(parse_expression("a[b,c]"), TreeTensor)
    series = parse_expression("x1 + x0.x0.x0", trunc=2)
    assert isinstance(series, TruncatedSeries)
    assert str(series) == "x1"  # the long word fell off


def test_parse_expression_errors():
    with pytest.raises(CliError, match="empty"):
        parse_expression("   ")
    with pytest.raises(CliError, match="position 1"):
        parse_expression("a[b[c]")
    with pytest.raises(CliError, match="position 4"):
        parse_expression("a[b]}")
    with pytest.raises(CliError, match="bad expression"):
        parse_expression("x1 ? x2")


def test_prelie_example(capsys):
    code, out, _ = run(capsys, "prelie", "x1.x2", "x1")
    assert code == 0
    assert out == "x0.x1.x2 + x0.x2.x1\n"


def test_prelie_closed_route_agrees(capsys):
    _, direct, _ = run(capsys, "prelie", "x1.x1 - 2*x2", "x1.x2")
    _, closed, _ = run(capsys, "prelie", "x1.x1 - 2*x2", "x1.x2", "--closed")
    assert direct == closed


def test_series_dims(capsys):
    code, out, _ = run(capsys, "series", "--fliess", "2", "--max", "5")
    assert code == 0
    assert out == "0,1,2,5,12,29\n"


def test_dyck_count(capsys):
    code, out, _ = run(capsys, "dyck", "--count", "5")
    assert code == 0
    assert out.splitlines()[0] == "admissible: 14"
    assert out.splitlines()[1] == "sigma-admissible: 42"


def test_dyck_list_and_path(capsys):
    _, out, _ = run(capsys, "dyck", "--list", "3")
    first = out.splitlines()[0]
    assert first == "admissible: 200 110"
    code, out, _ = run(capsys, "dyck", "--path", "2100")
    assert code == 0
    assert out == "RRURUU\n"
    code, _, err = run(capsys, "dyck", "--path", "30")
    assert code == 2
    assert "not an admissible" in err


def test_bracket_diagonal(capsys):
    code, out, _ = run(
        capsys, "bracket", "x1", "x2", "--endo", "diag(x1=2,x2=3)"
    )
    assert code == 0
    assert out == "2*x1.x2 - 3*x2.x1\n"


def test_star_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "star", "x1 * x2", "x1")
    assert code == 0
    assert json.loads(out) == {"result": "x2 * x0.x1 + x1 * x1 * x2"}


def test_coproduct_lines(capsys):
    code, out, _ = run(capsys, "coproduct", "x1.x2")
    assert code == 0
    assert out.splitlines() == [
        "x0 (x) x2 : 1",
        "x0.x2 (x) e : 1",
        "x1.x2 (x) 1 : 1",
    ]


def test_compose_diamond_is_tilde_plus_right(capsys):
    _, tilde, _ = run(capsys, "compose", "x1", "x2", "--trunc", "3", "--tilde")
    _, full, _ = run(capsys, "compose", "x1", "x2", "--trunc", "3")
    assert tilde == "x1 + x0.x2\n"
    assert full == "x1 + x2 + x0.x2\n"


def test_tree_map_modes_agree(capsys):
    expr = "a[b,{c,d}] + 2*{a,b}"
    _, direct, _ = run(capsys, "tree-map", expr)
    _, recursive, _ = run(capsys, "tree-map", expr, "--mode", "recursive")
    assert direct == recursive
    _, single, _ = run(capsys, "tree-map", "a")
    assert single == "0:a\n"


def test_fdb_verbs(capsys):
    code, out, _ = run(capsys, "fdb", "t-word", "abc", "--weights", "a=2,b=3,c=5")
    assert code == 0
    assert out == "4*a[b,c] + 6*a[b[c]]\n"
    code, out, _ = run(capsys, "fdb", "delta", "ab", "--weights", "a=2,b=3")
    assert out == "a (x) b : 2\n"
    _, projected, _ = run(
        capsys, "fdb", "delta", "aab", "--weights", "a=2,b=3", "--mode", "projected"
    )
    _, closed, _ = run(capsys, "fdb", "delta", "aab", "--weights", "a=2,b=3")
    assert projected == closed
    code, out, _ = run(capsys, "fdb", "bracket", "1", "2")
    assert code == 0
    assert out.splitlines() == ["[y1, y2] = (-1)*y3", "-24*xxx"]


def test_endo_specs(tmp_path):
    assert parse_endo_spec("fliess(2,1)") == fliess_channel(2, 1)
    diag = parse_endo_spec("diag(a=2,b=1/2)")
    assert diag == Endo.diagonal({"a": 2, "b": Fraction(1, 2)})
    assert parse_endo_spec("biletter-shift") == Endo.biletter_shift()
    path = tmp_path / "f.json"
    save_endo(fliess_channel(3, 2), str(path))
    assert parse_endo_spec(f"@{path}") == fliess_channel(3, 2)
    assert parse_endo_spec(str(path)) == fliess_channel(3, 2)
    with pytest.raises(CliError, match="unknown endomorphism"):
        parse_endo_spec("bogus(1)")
    with pytest.raises(CliError, match="name=value"):
        parse_endo_spec("diag(a)")


def test_usage_exit_codes(capsys):
    code, _, err = run(capsys, "prelie", "x1.[", "x1")
    assert code == 2 and err.startswith("error:")
    code, _, err = run(capsys, "prelie", "a", "b", "--endo", "nope")
    assert code == 2
    # a diagonal map is not nilpotent, so the dual coproduct must refuse
    code, _, err = run(capsys, "coproduct", "a", "--endo", "diag(a=2)")
    assert code == 2 and "nilpotent" in err
    with pytest.raises(SystemExit) as exc:
        main(["not-a-verb"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_format_env_default(capsys, monkeypatch):
    monkeypatch.setenv("COMPRELIE_FORMAT", "json")
    code, out, _ = run(capsys, "series", "--fliess", "1", "--max", "4")
    assert code == 0
    assert json.loads(out) == {"dims": [0, 1, 1, 2, 3]}
    monkeypatch.setenv("COMPRELIE_FORMAT", "garbage")
    code, _, err = run(capsys, "series", "--fliess", "1", "--max", "4")
    assert code == 2 and "format" in err


def test_verify_passes_and_is_deterministic(capsys):
    code, first, _ = run(capsys, "verify", "--seed", "11")
    assert code == 0
    assert all(line.startswith("pass") for line in first.splitlines())
    _, second, _ = run(capsys, "verify", "--seed", "11")
    assert first == second
    code, out, _ = run(capsys, "--format", "json", "verify", "--seed", "11")
    report = json.loads(out)
    assert isinstance(report, list) and len(report) == len(run_verify(11))
    assert all(entry["status"] == "pass" for entry in report)
    assert {entry["check"] for entry in report} == {
        e["check"] for e in run_verify(11)
    }


def test_emit_report_failure_exits_one(capsys):
    results = [
        {"check": "good", "status": "pass"},
        {"check": "bad", "status": "fail", "witness": "broke at a.b"},
    ]
    assert emit_report(results, "text") == 1
    out = capsys.readouterr().out
    assert "FAIL  bad  broke at a.b" in out
    assert emit_report(results, "json") == 1
    assert json.loads(capsys.readouterr().out)[1]["witness"] == "broke at a.b"
    assert emit_report([{"check": "good", "status": "pass"}], "text") == 0
    capsys.readouterr()
