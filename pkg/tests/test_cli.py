from pathlib import Path

import pytest

from weld.cli import main

GOLDEN = Path(__file__).resolve().parents[1] / "table1.golden"


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_init_gen_override_run_flow(tmp_path, capsys):
    ws = tmp_path / "ws"
    code, out, _ = _run(capsys, "init", "--mechanism", "generation-gap",
                        "--out", str(ws))
    assert code == 0
    code, out, _ = _run(capsys, "gen", "--workspace", str(ws))
    assert code == 0 and "gen/NotePad.moo" in out

    (ws / "hand" / "NotePadImpl.moo").write_text(
        "class NotePadImpl extends NotePadBaseImpl {\n"
        "    method getTitle(): String {\n"
        '        return "custom";\n    }\n}\n')
    code, out, _ = _run(capsys, "run", "--workspace", str(ws),
                        "--entry", "new NotePadFactory().create().getTitle()")
    assert code == 0
    assert out.strip() == '"custom"'


def test_run_without_gen_is_domain_error(tmp_path, capsys):
    ws = tmp_path / "ws"
    _run(capsys, "init", "--mechanism", "generation-gap", "--out", str(ws))
    code, _, err = _run(capsys, "run", "--workspace", str(ws),
                        "--entry", "new NotePadFactory().create()")
    assert code == 1
    assert "MISSING_GENERATED" in err


def test_unknown_flag_exits_2(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gen", "--bogus"])
    assert exc.value.code == 2


def test_step_budget_env_var(tmp_path, capsys, monkeypatch):
    ws = tmp_path / "ws"
    _run(capsys, "init", "--mechanism", "protected-regions", "--out", str(ws))
    _run(capsys, "gen", "--workspace", str(ws))
    monkeypatch.setenv("WELD_STEP_BUDGET", "3")
    code, _, err = _run(capsys, "run", "--workspace", str(ws),
                        "--entry", "new NotePadFactory().create().getTitle()")
    assert code == 1 and "STEP_BUDGET" in err
    monkeypatch.setenv("WELD_STEP_BUDGET", "not-a-number")
    code, _, err = _run(capsys, "run", "--workspace", str(ws),
                        "--entry", "new NotePadFactory().create()")
    assert code == 1 and "BAD_BUDGET" in err


def test_link_writes_out_tree(tmp_path, capsys):
    ws = tmp_path / "ws"
    _run(capsys, "init", "--mechanism", "aop", "--out", str(ws))
    _run(capsys, "gen", "--workspace", str(ws))
    code, out, _ = _run(capsys, "link", "--workspace", str(ws))
    assert code == 0
    assert (ws / "out" / "NotePadImpl.moo").exists()


def test_evaluate_single_mechanism_against_golden(tmp_path, capsys):
    report = tmp_path / "r.txt"
    code, out, _ = _run(capsys, "evaluate", "--mechanism", "delegation",
                        "--report", str(report), "--expect", str(GOLDEN))
    assert code == 0
    assert "matches golden table" in out
    assert report.read_text().splitlines()[0] == "delegation,C1,+"


def test_evaluate_golden_mismatch_exits_3(tmp_path, capsys):
    bad_golden = tmp_path / "bad.golden"
    lines = GOLDEN.read_text().splitlines()
    lines[0] = "generation-gap,C1,-"
    bad_golden.write_text("\n".join(lines) + "\n")
    code, _, err = _run(capsys, "evaluate", "--mechanism", "generation-gap",
                        "--expect", str(bad_golden))
    assert code == 3
    assert "generation-gap,C1: expected -, got +" in err


def test_evaluate_renders_figure(tmp_path, capsys):
    figure = tmp_path / "matrix.png"
    code, _, _ = _run(capsys, "evaluate", "--mechanism", "protected-regions",
                      "--figure", str(figure))
    assert code == 0
    assert figure.stat().st_size > 0


def test_transform_subcommands(tmp_path, capsys):
    # resolve-includes
    (tmp_path / "c.moo").write_text('class C { include "extra.inc"; }\n')
    (tmp_path / "extra.inc").write_text("field x: Int;\n")
    code, out, _ = _run(capsys, "resolve-includes", str(tmp_path / "c.moo"),
                        "--root", str(tmp_path))
    assert code == 0 and "field x: Int;" in out

    # merge-partial
    (tmp_path / "g.moo").write_text(
        'partial class P { method m(): Int { return 1; } }\n')
    (tmp_path / "h.moo").write_text(
        "partial class P { method extra(): void { } }\n")
    code, out, _ = _run(capsys, "merge-partial",
                        "--generated", str(tmp_path / "g.moo"),
                        "--handwritten", str(tmp_path / "h.moo"))
    assert code == 0 and "extra" in out and "partial" not in out

    # weave
    (tmp_path / "w.moo").write_text(
        'class W { method m(): String { return "base"; } }\n')
    (tmp_path / "a.asp").write_text(
        'aspect A { around W.m() { return "woven"; } }\n')
    code, out, _ = _run(capsys, "weave", str(tmp_path / "w.moo"),
                        "--aspects", str(tmp_path / "a.asp"))
    assert code == 0 and '"woven"' in out

    # part-merge
    (tmp_path / "gen.manifest").write_text("a = 1\nb = 2\n")
    (tmp_path / "hand.manifest").write_text("b = 9\n")
    code, out, _ = _run(capsys, "part-merge", str(tmp_path / "gen.manifest"),
                        str(tmp_path / "hand.manifest"))
    assert code == 0 and "b = 9" in out


def test_regions_subcommands(tmp_path, capsys):
    prev = tmp_path / "prev.moo"
    prev.write_text("// PR-BEGIN R\nkept\n// PR-END R\n"
                    "// PR-BEGIN Gone\nlost content\n// PR-END Gone\n")
    fresh = tmp_path / "fresh.moo"
    fresh.write_text("// PR-BEGIN R\ndefault\n// PR-END R\n")

    code, out, _ = _run(capsys, "regions", "extract", str(prev))
    assert code == 0 and '"R"' in out

    out_file = tmp_path / "merged.moo"
    code, _, err = _run(capsys, "regions", "inject", str(fresh),
                        "--saved", str(prev), "--out", str(out_file))
    assert code == 0
    assert "kept" in out_file.read_text()
    assert "Gone" in err
    assert "lost content" in (tmp_path / "merged.moo.lost").read_text()


def test_domain_error_exit_code(tmp_path, capsys):
    code, _, err = _run(capsys, "regions", "extract",
                        str(tmp_path / "missing.moo"))
    assert code == 1 and "NO_FILE" in err


def test_atomic_writes_leave_no_temp_files(tmp_path, capsys):
    ws = tmp_path / "ws"
    _run(capsys, "init", "--mechanism", "part-merger", "--out", str(ws))
    _run(capsys, "gen", "--workspace", str(ws))
    _run(capsys, "link", "--workspace", str(ws))
    leftovers = [p for p in ws.rglob("*.tmp")]
    assert leftovers == []
