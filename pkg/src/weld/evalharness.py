"""Probe every integration mechanism against the five criteria.

Probe protocol, per criterion:

* C1 (separate files): apply the mechanism's handwritten population carrying
  a sentinel string, regenerate and link; fulfilled iff no file written by
  the generator contains the sentinel.
* C2 (override generated parts): the untouched workspace must evaluate the
  probe entry to "base"; after the override scaffold, regenerate+link+eval
  must give "custom" and keep giving it after another regeneration.
  Conditional mechanisms must also fail under a restrictive profile.
  Refusals are cross-checked with a naive attempt where one is expressible.
* C3 (extend generated interfaces): the extension scaffold adds
  customTitle(): String returning "extra"; a client class whose field is
  statically typed by the generated interface must resolve and evaluate.
  Conditional via profile toggling; refusals cross-checked with a naive
  attempt that must leave the client call unresolved.
* C4 (generation-time independence): generate twice, with and without the
  handwritten population; fulfilled iff the gen/ trees are byte-identical
  and the generator read neither the handwritten tree nor its previous
  output.
* C5 (core constructs only): the populated workspace must link under the
  all-flags-off profile; a profile violation means the mechanism leans on
  an extra language construct.

A probe that crashes outside its expected failure modes raises
HarnessError: a crash is never evidence.
"""

from __future__ import annotations

import tempfile
from dataclasses import dataclass
from pathlib import Path

from .errors import LinkError, WeldError
from .interp import StringV, Value, eval_entry
from .mechanisms import (
    DISPLAY_NAMES,
    MECHANISM_ORDER,
    Mechanism,
    RegionEdit,
    Scaffold,
    ScaffoldFile,
    Workspace,
    apply_scaffold,
    default_profile,
    generate,
    link,
    regenerate,
    scaffold_api_extension,
    scaffold_baseline,
    scaffold_override,
)
from .minioop.parser import parse_unit
from .minioop.profile import CORE_PROFILE, LanguageProfile
from .minioop.resolver import resolve_program

CRITERIA = ("C1", "C2", "C3", "C4", "C5")

FULFILLED = "fulfilled"
CONDITIONAL = "conditionally_fulfilled"
UNFULFILLED = "unfulfilled"

CELL_TEXT = {FULFILLED: "+", CONDITIONAL: "(+)", UNFULFILLED: "-"}

CRITERION_LABELS = {
    "C1": "C1 separate gen/hand files",
    "C2": "C2 override generated parts",
    "C3": "C3 extend generated interfaces",
    "C4": "C4 generation-time independence",
    "C5": "C5 core constructs only",
}

SENTINEL = "HW-SENTINEL-42"
ENTRY = "new NotePadFactory().create().getTitle()"
CLIENT_ENTRY = "new Client().use()"
CLIENT_SRC = """\
class Client {
    field pad: NotePad = new NotePadFactory().create();
    method use(): String {
        return this.pad.customTitle();
    }
}
"""

_C2_CONDITIONAL = {Mechanism.PARTIAL_CLASSES}
_C3_CONDITIONAL = {Mechanism.INCLUDE, Mechanism.PARTIAL_CLASSES}

_RESTRICTED_C2 = {
    Mechanism.PARTIAL_CLASSES: LanguageProfile(
        partial_classes=True, partial_interfaces=True,
        partial_method_override=False),
}
_RESTRICTED_C3 = {
    Mechanism.INCLUDE: LanguageProfile(includes=True,
                                       include_in_interface=False),
    Mechanism.PARTIAL_CLASSES: LanguageProfile(
        partial_classes=True, partial_interfaces=False,
        partial_method_override=True),
}


class HarnessError(WeldError):
    """A probe could not run; distinct from an unfulfilled verdict."""


@dataclass(frozen=True)
class ProbeRecord:
    """One observation: `passed` states whether the handwritten integration
    worked in this probe (so negative verdicts carry failed records)."""

    name: str
    profile: str
    observed: str
    passed: bool


@dataclass(frozen=True)
class CriterionVerdict:
    criterion: str
    verdict: str
    evidence: tuple[ProbeRecord, ...]


@dataclass
class CriteriaMatrix:
    cells: dict[tuple[Mechanism, str], CriterionVerdict]

    def complete(self, mechanisms: tuple[Mechanism, ...] = MECHANISM_ORDER) -> bool:
        return all((m, c) in self.cells for m in mechanisms for c in CRITERIA)


# --- workspace plumbing -----------------------------------------------------

def _fresh_ws(scratch: Path, m: Mechanism, tag: str) -> Workspace:
    return Workspace.create(scratch / f"{m.value}-{tag}", m)


def _gen(ws: Workspace):
    return generate(ws.read_model(), ws)


def _regen(ws: Workspace):
    return regenerate(ws.read_model(), ws)


def _population(ws: Workspace, m: Mechanism, body_src: str) -> Scaffold:
    """The canonical way handwritten content reaches each mechanism; used by
    the C1/C4/C5 probes."""
    if m in (Mechanism.GENERATION_GAP, Mechanism.PARTIAL_CLASSES,
             Mechanism.AOP, Mechanism.PART_MERGER):
        return scaffold_override(ws, m, "NotePad", "getTitle", body_src)
    if m in (Mechanism.EXTENDED_GENERATION_GAP, Mechanism.INCLUDE,
             Mechanism.PROTECTED_REGIONS):
        return scaffold_api_extension(ws, m, "NotePad", "customTitle",
                                      "String", body_src)
    if m is Mechanism.DELEGATION:
        return Scaffold.of(*scaffold_baseline(ws, m, {"getTitle": body_src}))
    raise HarnessError("PROBE_FAILURE", f"no population for {m}")


def _eval_value(units, entry: str) -> Value:
    return eval_entry(units, entry)


def _expect_string(value: Value, expected: str) -> bool:
    return isinstance(value, StringV) and value.value == expected


def _precondition(ok: bool, message: str) -> None:
    if not ok:
        raise HarnessError("PROBE_FAILURE", message)


# --- criterion probes ---------------------------------------------------------

def _probe_c1(m: Mechanism, scratch: Path) -> CriterionVerdict:
    ws = _fresh_ws(scratch, m, "c1")
    _gen(ws)
    apply_scaffold(ws, _population(ws, m, f'return "{SENTINEL}";'))
    result = _regen(ws)
    try:
        link(ws)
    except WeldError as e:
        raise HarnessError("PROBE_FAILURE",
                           f"C1 workspace for {m.value} does not link: {e}") from e
    offenders = [rel for rel in result.evidence.files_written
                 if SENTINEL in (ws.read(rel) or "")]
    record = ProbeRecord(
        "sentinel-outside-generator-files", "default",
        ("no generator-written file contains the sentinel" if not offenders
         else "sentinel found in " + ", ".join(offenders)),
        passed=not offenders)
    return CriterionVerdict("C1",
                            FULFILLED if not offenders else UNFULFILLED,
                            (record,))


def _probe_c2(m: Mechanism, scratch: Path) -> CriterionVerdict:
    ws = _fresh_ws(scratch, m, "c2")
    _gen(ws)
    for f in scaffold_baseline(ws, m):
        ws.write(f.rel_path, f.text)
    records: list[ProbeRecord] = []

    # precondition: the untouched workspace answers "base"
    try:
        value = _eval_value(link(ws), ENTRY)
    except WeldError as e:
        raise HarnessError("PROBE_FAILURE",
                           f"untouched {m.value} workspace does not run: {e}") from e
    _precondition(_expect_string(value, "base"),
                  f"untouched {m.value} workspace did not evaluate to 'base'")
    records.append(ProbeRecord("untouched-baseline", "default",
                               'entry evaluates to "base"', True))

    scaffold = scaffold_override(ws, m, "NotePad", "getTitle", 'return "custom";')
    if not scaffold.supported:
        records.append(ProbeRecord("override-scaffold", "default",
                                   f"unsupported: {scaffold.reason}", False))
        records.append(_c2_naive_probe(m, ws))
        return CriterionVerdict("C2", UNFULFILLED, tuple(records))

    apply_scaffold(ws, scaffold)
    _regen(ws)
    ok_first = _try_eval_custom(ws, records, "override-eval", "default")
    _regen(ws)
    ok_survive = _try_eval_custom(ws, records, "override-survives-regeneration",
                                  "default")

    if m in _C2_CONDITIONAL:
        restricted = _RESTRICTED_C2[m]
        rec = _expect_link_failure(ws, restricted, "DUPLICATE_MEMBER",
                                   "override-under-restrictive-profile")
        records.append(rec)
        if ok_first and ok_survive and not rec.passed:
            return CriterionVerdict("C2", CONDITIONAL, tuple(records))
        return CriterionVerdict("C2", UNFULFILLED, tuple(records))

    verdict = FULFILLED if (ok_first and ok_survive) else UNFULFILLED
    return CriterionVerdict("C2", verdict, tuple(records))


def _try_eval_custom(ws: Workspace, records: list[ProbeRecord], name: str,
                     profile_label: str) -> bool:
    try:
        value = _eval_value(link(ws), ENTRY)
        ok = _expect_string(value, "custom")
        observed = 'entry evaluates to "custom"' if ok else f"evaluated to {value}"
    except WeldError as e:
        ok = False
        observed = f"failed: {e.code}"
    records.append(ProbeRecord(name, profile_label, observed, ok))
    return ok


def _expect_link_failure(ws: Workspace, profile: LanguageProfile,
                         expected_code: str, name: str) -> ProbeRecord:
    try:
        link(ws, profile=profile)
    except LinkError as e:
        if e.has_code(expected_code):
            return ProbeRecord(name, "restrictive",
                               f"link fails with {expected_code}", False)
        return ProbeRecord(name, "restrictive",
                           f"link fails with unexpected {e.code}", False)
    except WeldError as e:
        return ProbeRecord(name, "restrictive", f"link fails with {e.code}",
                           False)
    return ProbeRecord(name, "restrictive",
                       "link unexpectedly succeeded", True)


def _c2_naive_probe(m: Mechanism, ws: Workspace) -> ProbeRecord:
    """Cross-check a refusal with the closest expressible naive attempt."""
    if m is Mechanism.INCLUDE:
        ws.write("hand/NotePad_extra.inc",
                 'method getTitle(): String {\n    return "custom";\n}\n')
        try:
            link(ws)
            return ProbeRecord("naive-duplicate-include", "default",
                               "duplicate member linked anyway", True)
        except LinkError as e:
            code = "DUPLICATE_MEMBER" if e.has_code("DUPLICATE_MEMBER") else e.code
            return ProbeRecord("naive-duplicate-include", "default",
                               f"link fails with {code}", False)
    if m is Mechanism.DELEGATION:
        ws.write("hand/NotePadDelegator.moo",
                 "class NotePadDelegator implements NotePad {\n"
                 "    method getTitle(): String {\n"
                 '        return "custom";\n'
                 "    }\n"
                 "}\n")
        try:
            link(ws)
            return ProbeRecord("naive-replace-delegator", "default",
                               "duplicate delegator linked anyway", True)
        except LinkError as e:
            code = "DUPLICATE_DECL" if e.has_code("DUPLICATE_DECL") else e.code
            return ProbeRecord("naive-replace-delegator", "default",
                               f"link fails with {code}", False)
    if m is Mechanism.PROTECTED_REGIONS:
        rel = "gen/NotePadFactory.moo"
        marker = "// HW-EDIT-OUTSIDE-REGION"
        ws.write(rel, (ws.read(rel) or "") + marker + "\n")
        _regen(ws)
        survived = marker in (ws.read(rel) or "")
        return ProbeRecord("naive-edit-outside-region", "default",
                           ("edit outside a region survives regeneration"
                            if survived else
                            "edit outside a region is gone after regeneration"),
                           survived)
    raise HarnessError("PROBE_FAILURE", f"no naive C2 probe for {m.value}")


def _probe_c3(m: Mechanism, scratch: Path) -> CriterionVerdict:
    ws = _fresh_ws(scratch, m, "c3")
    _gen(ws)
    records: list[ProbeRecord] = []

    scaffold = scaffold_api_extension(ws, m, "NotePad", "customTitle",
                                      "String", 'return "extra";')
    if not scaffold.supported:
        records.append(ProbeRecord("extension-scaffold", "default",
                                   f"unsupported: {scaffold.reason}", False))
        records.append(_c3_naive_probe(m, ws))
        return CriterionVerdict("C3", UNFULFILLED, tuple(records))

    apply_scaffold(ws, scaffold)
    _regen(ws)
    ok = _client_calls_extension(ws, None, records,
                                 "client-calls-extension", "default")

    if m in _C3_CONDITIONAL:
        rec = _expect_link_failure(ws, _RESTRICTED_C3[m], "PROFILE_VIOLATION",
                                   "extension-under-restrictive-profile")
        records.append(rec)
        if ok and not rec.passed:
            return CriterionVerdict("C3", CONDITIONAL, tuple(records))
        return CriterionVerdict("C3", UNFULFILLED, tuple(records))

    return CriterionVerdict("C3", FULFILLED if ok else UNFULFILLED,
                            tuple(records))


def _client_calls_extension(ws: Workspace, profile: LanguageProfile | None,
                            records: list[ProbeRecord], name: str,
                            profile_label: str) -> bool:
    try:
        units = link(ws, profile=profile)
        program = units + [parse_unit(CLIENT_SRC, "probe/Client.moo")]
        diags = resolve_program(program, profile or ws.profile)
        if diags:
            codes = ",".join(sorted({d.code for d in diags}))
            records.append(ProbeRecord(name, profile_label,
                                       f"client does not resolve: {codes}",
                                       False))
            return False
        value = _eval_value(program, CLIENT_ENTRY)
        ok = _expect_string(value, "extra")
        observed = ('client call evaluates to "extra"' if ok
                    else f"client call evaluated to {value}")
        records.append(ProbeRecord(name, profile_label, observed, ok))
        return ok
    except WeldError as e:
        records.append(ProbeRecord(name, profile_label, f"failed: {e.code}",
                                   False))
        return False


def _c3_naive_probe(m: Mechanism, ws: Workspace) -> ProbeRecord:
    """The closest naive extension attempt must leave the client's call
    statically unresolved."""
    if m is Mechanism.GENERATION_GAP:
        ws.write("hand/NotePadImpl.moo",
                 "class NotePadImpl extends NotePadBaseImpl {\n"
                 "    method customTitle(): String {\n"
                 '        return "extra";\n'
                 "    }\n"
                 "}\n")
    elif m is Mechanism.DELEGATION:
        ws.write("hand/NotePadDelegateImpl.moo",
                 "class NotePadDelegateImpl implements NotePadDelegate {\n"
                 "    method getTitle(): String {\n"
                 '        return "base";\n'
                 "    }\n"
                 "    method setTitle(t: String): void {\n"
                 "    }\n"
                 "    method customTitle(): String {\n"
                 '        return "extra";\n'
                 "    }\n"
                 "}\n")
    else:
        raise HarnessError("PROBE_FAILURE", f"no naive C3 probe for {m.value}")
    try:
        units = link(ws)
    except WeldError as e:
        raise HarnessError("PROBE_FAILURE",
                           f"naive C3 workspace for {m.value} does not link: "
                           f"{e}") from e
    program = units + [parse_unit(CLIENT_SRC, "probe/Client.moo")]
    diags = resolve_program(program, ws.profile)
    unresolved = any(d.code == "UNRESOLVED_CALL" for d in diags)
    return ProbeRecord(
        "naive-extension-client", "default",
        ("client call is statically unresolved (UNRESOLVED_CALL)"
         if unresolved else "client call resolved unexpectedly"),
        passed=not unresolved)


def _probe_c4(m: Mechanism, scratch: Path) -> CriterionVerdict:
    ws_with = _fresh_ws(scratch, m, "c4-with")
    _gen(ws_with)
    apply_scaffold(ws_with, _population(ws_with, m, 'return "custom";'))
    result_with = _regen(ws_with)

    ws_without = _fresh_ws(scratch, m, "c4-without")
    _gen(ws_without)
    _regen(ws_without)

    tree_with = ws_with.tree("gen", (".moo", ".manifest"))
    tree_without = ws_without.tree("gen", (".moo", ".manifest"))
    identical = tree_with == tree_without
    if identical:
        observed = "gen/ trees byte-identical with and without handwritten code"
    else:
        diffs = sorted(set(tree_with) ^ set(tree_without)
                       | {k for k in set(tree_with) & set(tree_without)
                          if tree_with[k] != tree_without[k]})
        observed = "gen/ trees differ at " + ", ".join(diffs)
    records = [ProbeRecord("gen-tree-byte-compare", "default", observed,
                           identical)]

    read_flags = (result_with.evidence.read_hand_tree
                  or result_with.evidence.read_prev_gen)
    flag_text = (f"read_hand_tree={result_with.evidence.read_hand_tree}, "
                 f"read_prev_gen={result_with.evidence.read_prev_gen}")
    records.append(ProbeRecord("generator-read-evidence", "default", flag_text,
                               passed=not read_flags))
    verdict = FULFILLED if identical and not read_flags else UNFULFILLED
    return CriterionVerdict("C4", verdict, tuple(records))


def _probe_c5(m: Mechanism, scratch: Path) -> CriterionVerdict:
    ws = _fresh_ws(scratch, m, "c5")
    _gen(ws)
    apply_scaffold(ws, _population(ws, m, 'return "custom";'))
    _regen(ws)
    try:
        link(ws, profile=CORE_PROFILE)
        record = ProbeRecord("link-under-core-profile", "core",
                             "links and resolves with every flag off", True)
        return CriterionVerdict("C5", FULFILLED, (record,))
    except LinkError as e:
        if e.has_code("PROFILE_VIOLATION"):
            record = ProbeRecord("link-under-core-profile", "core",
                                 "PROFILE_VIOLATION: needs an extra language "
                                 "construct", False)
            return CriterionVerdict("C5", UNFULFILLED, (record,))
        raise HarnessError("PROBE_FAILURE",
                           f"C5 link for {m.value} failed unexpectedly: {e}") from e


_PROBES = {
    "C1": _probe_c1,
    "C2": _probe_c2,
    "C3": _probe_c3,
    "C4": _probe_c4,
    "C5": _probe_c5,
}


def check_criterion(m: Mechanism, criterion: str,
                    scratch: Path | None = None) -> CriterionVerdict:
    """Run one probe on a fresh scratch workspace seeded with the canonical
    model."""
    if criterion not in _PROBES:
        raise WeldError("UNKNOWN_CRITERION", f"unknown criterion {criterion!r}")
    if scratch is None:
        with tempfile.TemporaryDirectory(prefix="weld-probe-") as tmp:
            return _PROBES[criterion](m, Path(tmp))
    return _PROBES[criterion](m, scratch)


def evaluate_all(mechanisms: tuple[Mechanism, ...] = MECHANISM_ORDER,
                 scratch: Path | None = None) -> CriteriaMatrix:
    """Compute all verdicts on isolated scratch workspaces. Deterministic."""
    cells: dict[tuple[Mechanism, str], CriterionVerdict] = {}
    if scratch is None:
        with tempfile.TemporaryDirectory(prefix="weld-eval-") as tmp:
            for m in mechanisms:
                for c in CRITERIA:
                    cells[(m, c)] = check_criterion(m, c, Path(tmp))
    else:
        for m in mechanisms:
            for c in CRITERIA:
                cells[(m, c)] = check_criterion(m, c, scratch)
    return CriteriaMatrix(cells)


# --- rendering ------------------------------------------------------------------

def render_table(matrix: CriteriaMatrix,
                 mechanisms: tuple[Mechanism, ...] = MECHANISM_ORDER) -> str:
    """Plain-text grid, mechanisms as columns, `+` / `(+)` / `-` cells."""
    if not matrix.complete(mechanisms):
        raise WeldError("INCOMPLETE", "matrix is missing cells")
    label_width = max(len(v) for v in CRITERION_LABELS.values())
    headers = [DISPLAY_NAMES[m] for m in mechanisms]
    widths = [max(len(h), 3) for h in headers]
    lines = [" " * label_width + "  " +
             "  ".join(h.center(w) for h, w in zip(headers, widths))]
    for c in CRITERIA:
        cells = [CELL_TEXT[matrix.cells[(m, c)].verdict] for m in mechanisms]
        lines.append(CRITERION_LABELS[c].ljust(label_width) + "  " +
                     "  ".join(cell.center(w) for cell, w in zip(cells, widths)))
    return "\n".join(lines) + "\n"


def report_lines(matrix: CriteriaMatrix,
                 mechanisms: tuple[Mechanism, ...] = MECHANISM_ORDER) -> list[str]:
    """Machine-readable report: `<mechanism>,<criterion>,<cell>` per cell,
    mechanism order then criterion order."""
    if not matrix.complete(mechanisms):
        raise WeldError("INCOMPLETE", "matrix is missing cells")
    return [f"{m.value},{c},{CELL_TEXT[matrix.cells[(m, c)].verdict]}"
            for m in mechanisms for c in CRITERIA]


def parse_report(text: str) -> dict[tuple[str, str], str]:
    cells: dict[tuple[str, str], str] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise WeldError("BAD_REPORT", f"bad report line: {line!r}")
        cells[(parts[0], parts[1])] = parts[2]
    return cells


def diff_reports(actual: list[str], expected_text: str) -> list[str]:
    """Cell-level differences between a generated report and a golden one."""
    actual_cells = parse_report("\n".join(actual))
    expected_cells = parse_report(expected_text)
    diffs: list[str] = []
    for key in sorted(set(actual_cells) | set(expected_cells)):
        mech, crit = key
        a = actual_cells.get(key)
        e = expected_cells.get(key)
        if a is None:
            diffs.append(f"{mech},{crit}: missing (expected {e})")
        elif e is None:
            diffs.append(f"{mech},{crit}: unexpected cell {a}")
        elif a != e:
            diffs.append(f"{mech},{crit}: expected {e}, got {a}")
    return diffs
