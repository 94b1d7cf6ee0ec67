"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v` (add -s to see the lines).
"""

import itertools
import time
from pathlib import Path

import pytest

from astgen import random_partial_pair, random_unit
from weld import evalharness as eh
from weld.errors import EvalError, TransformError
from weld.interp import StringV, eval_entry
from weld.mechanisms import (
    Mechanism,
    Workspace,
    apply_scaffold,
    generate,
    link,
    regenerate,
    scaffold_baseline,
    scaffold_override,
)
from weld.minioop import LanguageProfile, parse_unit, print_unit
from weld.transforms import (
    extract_regions,
    inject_regions,
    merge_manifests,
    merge_partials,
    weave_aspects,
)

GOLDEN_PATH = Path(__file__).resolve().parents[1] / "table1.golden"
ENTRY = "new NotePadFactory().create().getTitle()"


def _report(number: int, title: str, ok: bool) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}")
    assert ok, f"criterion {number}: {title}"


def test_criterion_1_table_reproduction():
    start = time.monotonic()
    matrix = eh.evaluate_all()
    lines = eh.report_lines(matrix)
    diffs = eh.diff_reports(lines, GOLDEN_PATH.read_text())
    elapsed = time.monotonic() - start
    ok = diffs == [] and elapsed < 30.0
    if diffs:
        print("\n".join(diffs))
    _report(1, "criteria matrix equals the golden 8x5 table "
               f"({elapsed:.1f}s)", ok)


def test_criterion_2_override_behavior(tmp_path):
    with_c2 = (Mechanism.GENERATION_GAP, Mechanism.EXTENDED_GENERATION_GAP,
               Mechanism.PARTIAL_CLASSES, Mechanism.AOP, Mechanism.PART_MERGER)
    ok = True
    for m in with_c2:
        ws = Workspace.create(tmp_path / m.value, m)
        model = ws.read_model()
        generate(model, ws)
        for f in scaffold_baseline(ws, m):
            ws.write(f.rel_path, f.text)
        untouched = eval_entry(link(ws), ENTRY)
        apply_scaffold(ws, scaffold_override(ws, m, "NotePad", "getTitle",
                                             'return "custom";'))
        regenerate(model, ws)
        overridden = eval_entry(link(ws), ENTRY)
        if untouched != StringV("base") or overridden != StringV("custom"):
            ok = False
            print(f"  {m.value}: untouched={untouched} overridden={overridden}")
    _report(2, 'override evaluates to "custom", untouched workspace to "base"',
            ok)


def test_criterion_3_regeneration_preservation(tmp_path):
    ws = Workspace.create(tmp_path / "pr", Mechanism.PROTECTED_REGIONS)
    model = ws.read_model()
    generate(model, ws, banner="template v1")

    edit = '        return "custom";'
    text = ws.read("gen/NotePadImpl.moo")
    new_text, lost = inject_regions(text, {"NotePad.getTitle.body": [edit]})
    assert lost == []
    ws.write("gen/NotePadImpl.moo", new_text)

    regenerate(model, ws, banner="template v2")
    after = ws.read("gen/NotePadImpl.moo")
    survived = (extract_regions(after)["NotePad.getTitle.body"] == [edit]
                and "// template v2" in after)

    # renaming the model method must surface the edit as lost, never drop it
    ws.write("model/NotePad.cdm", """\
class NotePad {
    field title: String;
    method fetchTitle(): String;
    method setTitle(t: String): void;
}
""")
    result = regenerate(ws.read_model(), ws)
    lost_ids = result.lost_regions.get("NotePadImpl.moo", [])
    sidecar = ws.read("gen/NotePadImpl.moo.lost") or ""
    reported = "NotePad.getTitle.body" in lost_ids and edit.strip() in sidecar
    _report(3, "region edit survives regeneration byte-for-byte; renamed "
               "method reports lost ids and writes the sidecar",
            survived and reported)


def test_criterion_4_generation_time_independence(tmp_path):
    plus = (Mechanism.GENERATION_GAP, Mechanism.DELEGATION, Mechanism.INCLUDE,
            Mechanism.PARTIAL_CLASSES, Mechanism.AOP, Mechanism.PART_MERGER)
    ok = True
    for m in Mechanism:
        ws_with = Workspace.create(tmp_path / f"{m.value}-with", m)
        model = ws_with.read_model()
        generate(model, ws_with)
        apply_scaffold(ws_with, eh._population(ws_with, m, 'return "custom";'))
        regenerate(model, ws_with)

        ws_without = Workspace.create(tmp_path / f"{m.value}-without", m)
        generate(model, ws_without)
        regenerate(model, ws_without)

        tree_with = ws_with.tree("gen", (".moo", ".manifest"))
        tree_without = ws_without.tree("gen", (".moo", ".manifest"))
        identical = tree_with == tree_without
        if m in plus:
            if not identical:
                ok = False
                print(f"  {m.value}: expected byte-identical gen/ trees")
        elif m is Mechanism.EXTENDED_GENERATION_GAP:
            witness = "extends NotePadBase" in tree_with["NotePad.moo"]
            if identical or not witness:
                ok = False
                print(f"  {m.value}: expected 'extends NotePadBase' to appear")
        else:  # protected regions: preserved handwritten content appears
            witness = 'return "custom";' in tree_with["NotePadImpl.moo"]
            if identical or not witness:
                ok = False
                print(f"  {m.value}: expected preserved region content")
    _report(4, "gen/ trees byte-identical for the six independent mechanisms "
               "and different with the stated witnesses for the other two", ok)


def test_criterion_5_property_suites():
    # 5a: parse/print round trip on 1000 random units
    round_trips = 0
    for seed in range(1000):
        unit = random_unit(seed)
        reparsed = parse_unit(print_unit(unit), unit.path, unit.origin,
                              allow_reserved=True)
        if reparsed.decls == unit.decls:
            round_trips += 1
    ok_round_trip = round_trips == 1000

    # 5b: 500 partial merges against an independent set-union oracle
    profile = LanguageProfile(partial_classes=True, partial_interfaces=True,
                              partial_method_override=True)
    merges = 0
    for seed in range(500):
        gen, hand, name = random_partial_pair(seed)
        merged = merge_partials([gen, hand], profile)
        decl = next(d for u in merged for d in u.decls if d.name == name)
        oracle = ({m.name for m in gen.decls[0].members}
                  | {m.name for m in hand.decls[0].members})
        if {m.name for m in decl.members} == oracle:
            merges += 1
    ok_merge = merges == 500

    # 5c: manifest merge equals right-priority map union, exhaustively
    keys = ("a", "b", "c")

    def docs(tag):
        for bits in itertools.product((False, True), repeat=3):
            yield [(k, f"{tag}{k}") for k, keep in zip(keys, bits) if keep]

    ok_manifest = all(
        dict(merge_manifests(list(g), list(h))) == {**dict(g), **dict(h)}
        for g in docs("g") for h in docs("h"))

    # 5d: dispatch over all eight override subsets of a three-level chain
    ok_dispatch = True
    for r in range(4):
        for subset in itertools.combinations("ABC", r):
            sources = []
            for cls, parent in (("A", None), ("B", "A"), ("C", "B")):
                ext = f" extends {parent}" if parent else ""
                body = (f'    method m(): String {{ return "{cls.lower()}"; }}\n'
                        if cls in subset else "")
                sources.append(f"class {cls}{ext} {{\n{body}}}")
            units = [parse_unit(s, "chain.moo") for s in sources]
            expected = next((c.lower() for c in "CBA" if c in subset), None)
            try:
                value = eval_entry(units, "new C().m()")
                ok_dispatch &= value == StringV(expected)
            except EvalError as e:
                ok_dispatch &= expected is None and e.code == "NO_SUCH_METHOD"

    # 5e: before/after weaving order on the traced scenario
    program = parse_unit("""
        class C {
            field log: String;
            method m(): void {
                this.log = this.log + "base";
            }
            method getLog(): String { return this.log; }
        }
        class Driver {
            method drive(): String {
                let c: C = new C();
                c.m();
                return c.getLog();
            }
        }
    """, "c.moo")
    aspects = [d for d in parse_unit("""
        aspect L {
            before C.m() { this.log = this.log + "b:"; }
            after C.m() { this.log = this.log + ":a"; }
        }
    """, "l.asp").decls]
    woven = weave_aspects([program], aspects)
    ok_weave = eval_entry(woven, "new Driver().drive()") == StringV("b:base:a")

    ok = (ok_round_trip and ok_merge and ok_manifest and ok_dispatch
          and ok_weave)
    _report(5, "property suites: 1000 round trips, 500 set-union merges, "
               "exhaustive manifest union, 8-subset dispatch table, "
               'weave trace "b:base:a"', ok)


def test_criterion_6_fragile_pointcut(tmp_path):
    ws = Workspace.create(tmp_path / "aop", Mechanism.AOP)
    model = ws.read_model()
    generate(model, ws)
    apply_scaffold(ws, scaffold_override(ws, Mechanism.AOP, "NotePad",
                                         "getTitle", 'return "custom";'))
    assert eval_entry(link(ws), ENTRY) == StringV("custom")

    # rename the advised method in the model and regenerate
    ws.write("model/NotePad.cdm", """\
class NotePad {
    field title: String;
    method fetchTitle(): String;
    method setTitle(t: String): void;
}
""")
    regenerate(ws.read_model(), ws)
    with pytest.raises(Exception) as exc:
        link(ws)
    cause = exc.value
    code = getattr(cause, "code", None)
    ok = code == "POINTCUT_UNMATCHED" or (
        isinstance(cause.__cause__, TransformError)
        and cause.__cause__.code == "POINTCUT_UNMATCHED")
    _report(6, "weaving against a renamed target fails loudly with "
               "POINTCUT_UNMATCHED", ok)
