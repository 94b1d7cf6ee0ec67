"""Artifact-level transformations composed by the integration strategies.

Five tools operate here: include resolution (splice referenced member lists
into units), partial merging (fuse same-named partial declarations), aspect
weaving (apply advice and introductions), part merging (union paired
generated/handwritten artifacts with handwritten priority), and the
protected-region engine (extract and reinject comment-delimited spans of
raw text). All of them are pure; file effects stay with the callers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from .errors import TransformError
from .minioop import ast
from .minioop.parser import parse_unit
from .minioop.printer import print_unit
from .minioop.profile import LanguageProfile

# --- artifacts ----------------------------------------------------------

KIND_UNIT = "unit"
KIND_MANIFEST = "manifest"


@dataclass(frozen=True)
class Artifact:
    """One file in a workspace tree: a relative path plus raw text."""

    path: str
    text: str
    origin: str = ast.ORIGIN_HANDWRITTEN

    @property
    def kind(self) -> str:
        if self.path.endswith(".manifest"):
            return KIND_MANIFEST
        return KIND_UNIT


# --- include resolution -------------------------------------------------

IncludeResolver = Callable[[str], "tuple[ast.Member, ...] | None"]


def resolve_includes(unit: ast.Unit, resolver: IncludeResolver,
                     profile: LanguageProfile,
                     on_warning: Callable[[str], None] | None = None) -> ast.Unit:
    """Splice every include directive's member list in at the directive's
    position. A missing file resolves to the empty list with a warning;
    cycles are errors. The result contains no include directives."""
    if not profile.includes:
        raise TransformError("PROFILE_VIOLATION",
                             "include resolution requires the includes flag")
    warn = on_warning or (lambda _msg: None)

    def splice(members: tuple[ast.Member, ...], in_interface: bool,
               stack: tuple[str, ...]) -> tuple[ast.Member, ...]:
        out: list[ast.Member] = []
        for m in members:
            if not isinstance(m, ast.IncludeDirective):
                out.append(m)
                continue
            if in_interface and not profile.include_in_interface:
                raise TransformError(
                    "PROFILE_VIOLATION",
                    "include inside an interface requires the "
                    "include_in_interface flag",
                    unit.path, m.line, m.col)
            if m.path in stack:
                chain = " -> ".join(stack + (m.path,))
                raise TransformError("CYCLE", f"include cycle: {chain}",
                                     unit.path, m.line, m.col)
            included = resolver(m.path)
            if included is None:
                warn(f"{unit.path}: include file {m.path!r} not found; "
                     "splicing nothing")
                continue
            out.extend(splice(included, in_interface, stack + (m.path,)))
        return tuple(out)

    decls: list[ast.Decl] = []
    for d in unit.decls:
        if isinstance(d, ast.ClassDecl):
            members = splice(d.members, False, (unit.path,))
            decls.append(ast.ClassDecl(d.name, members, d.is_abstract,
                                       d.is_partial, d.extends, d.implements,
                                       line=d.line, col=d.col))
        elif isinstance(d, ast.InterfaceDecl):
            members = splice(d.members, True, (unit.path,))
            decls.append(ast.InterfaceDecl(d.name, members, d.is_partial,
                                           d.extends, line=d.line, col=d.col))
        else:
            decls.append(d)
    return ast.Unit(unit.path, tuple(decls), unit.origin)


def file_include_resolver(read_text: Callable[[str], str | None]) -> IncludeResolver:
    """Adapt a path->text reader into a member-list resolver. Parse failures
    of included files surface as errors."""

    def resolve(path: str) -> tuple[ast.Member, ...] | None:
        text = read_text(path)
        if text is None:
            return None
        from .minioop.parser import parse_members
        return parse_members(text, path)

    return resolve


# --- partial merging ------------------------------------------------------

def merge_partials(units: list[ast.Unit],
                   profile: LanguageProfile) -> list[ast.Unit]:
    """Fuse declarations that share a name and carry the partial flag into one
    non-partial declaration: members concatenated generated-first, supertypes
    unioned. Duplicate methods are errors unless partial_method_override is
    set, in which case the handwritten body wins. Duplicate fields always
    error."""
    partial_names: dict[str, list[tuple[int, ast.Unit, ast.Decl]]] = {}
    plain_names: set[str] = set()
    for idx, u in enumerate(units):
        for d in u.decls:
            name = getattr(d, "name", None)
            if name is None:
                continue
            if getattr(d, "is_partial", False):
                partial_names.setdefault(name, []).append((idx, u, d))
            else:
                plain_names.add(name)

    merged: dict[str, ast.Decl] = {}
    consumed: dict[str, list[tuple[int, ast.Decl]]] = {}
    for name, parts in partial_names.items():
        if name in plain_names:
            raise TransformError(
                "PARTIAL_CONFLICT",
                f"partial and non-partial declarations share the name {name!r}")
        merged[name] = _merge_parts(name, parts, profile)
        consumed[name] = [(idx, d) for idx, _u, d in parts]

    out: list[ast.Unit] = []
    emitted: set[str] = set()
    for idx, u in enumerate(units):
        decls: list[ast.Decl] = []
        for d in u.decls:
            name = getattr(d, "name", None)
            if name in merged:
                first_idx = min(i for i, _d in consumed[name])
                if idx == first_idx and name not in emitted:
                    decls.append(merged[name])
                    emitted.add(name)
                # later parts are dropped
            else:
                decls.append(d)
        if decls:
            out.append(ast.Unit(u.path, tuple(decls), u.origin))
    return out


def _merge_parts(name: str, parts: list[tuple[int, ast.Unit, ast.Decl]],
                 profile: LanguageProfile) -> ast.Decl:
    kinds = {type(d) for _i, _u, d in parts}
    if len(kinds) > 1:
        raise TransformError("KIND_MISMATCH",
                             f"partial declarations of {name!r} mix classes "
                             "and interfaces")
    kind = kinds.pop()
    if kind is ast.InterfaceDecl and not profile.partial_interfaces:
        raise TransformError("PROFILE_VIOLATION",
                             f"partial interface {name!r} requires the "
                             "partial_interfaces flag")
    if not profile.partial_classes:
        raise TransformError("PROFILE_VIOLATION",
                             f"partial declaration {name!r} requires the "
                             "partial_classes flag")

    # generated-origin parts first, then handwritten; stable within each
    ordered = sorted(parts, key=lambda t: (t[1].origin != ast.ORIGIN_GENERATED, t[0]))

    members: list[ast.Member] = []
    by_name: dict[str, tuple[int, ast.Member, str]] = {}  # name -> (slot, member, origin)
    for _idx, unit, d in ordered:
        for m in d.members:
            mname = getattr(m, "name", None)
            if mname is None:  # include directives concatenate freely
                members.append(m)
                continue
            if mname not in by_name:
                by_name[mname] = (len(members), m, unit.origin)
                members.append(m)
                continue
            slot, existing, existing_origin = by_name[mname]
            both_methods = isinstance(m, ast.MethodDecl) and isinstance(
                existing, ast.MethodDecl)
            if isinstance(m, ast.FieldDecl) or isinstance(existing, ast.FieldDecl):
                raise TransformError("FIELD_COLLISION",
                                     f"duplicate member {name}.{mname} "
                                     "involving a field")
            if not both_methods:
                raise TransformError("DUPLICATE_MEMBER",
                                     f"duplicate member {name}.{mname}")
            if not profile.partial_method_override:
                raise TransformError(
                    "DUPLICATE_MEMBER",
                    f"method {name}.{mname} defined in multiple parts and "
                    "partial_method_override is off")
            incoming_hand = unit.origin != ast.ORIGIN_GENERATED
            existing_hand = existing_origin != ast.ORIGIN_GENERATED
            if incoming_hand and existing_hand:
                raise TransformError(
                    "DUPLICATE_MEMBER",
                    f"method {name}.{mname} defined in two handwritten parts")
            if incoming_hand:  # handwritten body wins, in the original slot
                members[slot] = m
                by_name[mname] = (slot, m, unit.origin)

    if kind is ast.ClassDecl:
        class_parts = [d for _i, _u, d in ordered]
        extends = {d.extends for d in class_parts if d.extends is not None}
        if len(extends) > 1:
            raise TransformError("SUPERTYPE_CONFLICT",
                                 f"partial class {name!r} declares multiple "
                                 f"superclasses: {sorted(extends)}")
        implements: list[str] = []
        for d in class_parts:
            for i in d.implements:
                if i not in implements:
                    implements.append(i)
        return ast.ClassDecl(
            name, tuple(members),
            is_abstract=any(d.is_abstract for d in class_parts),
            is_partial=False,
            extends=next(iter(extends), None),
            implements=tuple(implements))
    extends_list: list[str] = []
    for _i, _u, d in ordered:
        for e in d.extends:
            if e not in extends_list:
                extends_list.append(e)
    return ast.InterfaceDecl(name, tuple(members), is_partial=False,
                             extends=tuple(extends_list))


# --- aspect weaving -------------------------------------------------------

_WRAP_RESULT = "r$"  # cannot collide: user identifiers never contain '$'


def weave_aspects(units: list[ast.Unit],
                  aspects: list[ast.AspectDecl]) -> list[ast.Unit]:
    """Apply advice and introductions to the program.

    around-advice replaces the target body. before/after advice rename the
    original to `<name>$orig` and wrap it so advice runs in order around the
    original call. Introductions append members. The output contains no
    aspect declarations (aspects found inside units are woven too)."""
    pool: list[ast.AspectDecl] = list(aspects)
    stripped: list[ast.Unit] = []
    for u in units:
        decls = []
        for d in u.decls:
            if isinstance(d, ast.AspectDecl):
                pool.append(d)
            else:
                decls.append(d)
        stripped.append(ast.Unit(u.path, tuple(decls), u.origin))

    advices: list[ast.Advice] = [a for asp in pool for a in asp.advices]
    introductions: list[ast.Introduction] = [
        i for asp in pool for i in asp.introductions]

    by_target: dict[tuple[str, str], list[ast.Advice]] = {}
    for a in advices:
        by_target.setdefault((a.target_class, a.target_method), []).append(a)

    for (cls, meth), group in by_target.items():
        target = _find_concrete_method(stripped, cls, meth)
        if target is None:
            a = group[0]
            raise TransformError(
                "POINTCUT_UNMATCHED",
                f"no concrete method matches pointcut {cls}.{meth}",
                line=a.line, col=a.col)
        arounds = [a for a in group if a.kind == "around"]
        if len(arounds) > 1:
            raise TransformError("DUPLICATE_AROUND",
                                 f"multiple around-advice on {cls}.{meth}")

    out: list[ast.Unit] = []
    for u in stripped:
        decls = []
        for d in u.decls:
            if isinstance(d, ast.ClassDecl):
                d = _weave_class(d, by_target)
            d = _apply_introductions(d, introductions)
            decls.append(d)
        out.append(ast.Unit(u.path, tuple(decls), u.origin))

    applied_targets = {t for u in stripped for d in u.decls
                       for t in _decl_targets(d)}
    for intro in introductions:
        if intro.target_type not in applied_targets:
            raise TransformError(
                "POINTCUT_UNMATCHED",
                f"no type matches introduction target {intro.target_type!r}",
                line=intro.line, col=intro.col)
    return out


def _decl_targets(d: ast.Decl) -> tuple[str, ...]:
    if isinstance(d, (ast.ClassDecl, ast.InterfaceDecl)):
        return (d.name,)
    return ()


def _find_concrete_method(units: list[ast.Unit], cls: str,
                          meth: str) -> ast.MethodDecl | None:
    for u in units:
        for d in u.decls:
            if isinstance(d, ast.ClassDecl) and d.name == cls:
                for m in d.members:
                    if (isinstance(m, ast.MethodDecl) and m.name == meth
                            and m.body is not None):
                        return m
    return None


def _weave_class(d: ast.ClassDecl,
                 by_target: dict[tuple[str, str], list[ast.Advice]]) -> ast.ClassDecl:
    members: list[ast.Member] = []
    for m in d.members:
        if not isinstance(m, ast.MethodDecl) or m.body is None:
            members.append(m)
            continue
        group = by_target.get((d.name, m.name))
        if not group:
            members.append(m)
            continue
        body = m.body
        for a in group:
            if a.kind == "around":
                body = a.body
        befores = [a for a in group if a.kind == "before"]
        afters = [a for a in group if a.kind == "after"]
        if not befores and not afters:
            members.append(ast.MethodDecl(m.name, m.params, m.return_type, body))
            continue
        orig_name = m.name + ast.RESERVED_SUFFIX
        orig = ast.MethodDecl(orig_name, m.params, m.return_type, body)
        call = ast.MethodCall(ast.ThisExpr(), orig_name,
                              tuple(ast.VarRef(p.name) for p in m.params))
        wrapper_body: list[ast.Stmt] = []
        for a in befores:
            wrapper_body.extend(a.body)
        if m.return_type == "void":
            wrapper_body.append(ast.ExprStmt(call))
        else:
            wrapper_body.append(ast.LetStmt(_WRAP_RESULT, m.return_type, call))
        for a in afters:
            wrapper_body.extend(a.body)
        if m.return_type != "void":
            wrapper_body.append(ast.ReturnStmt(ast.VarRef(_WRAP_RESULT)))
        members.append(ast.MethodDecl(m.name, m.params, m.return_type,
                                      tuple(wrapper_body)))
        members.append(orig)
    return ast.ClassDecl(d.name, tuple(members), d.is_abstract, d.is_partial,
                         d.extends, d.implements, line=d.line, col=d.col)


def _apply_introductions(d: ast.Decl,
                         introductions: list[ast.Introduction]) -> ast.Decl:
    if not isinstance(d, (ast.ClassDecl, ast.InterfaceDecl)):
        return d
    additions: list[ast.Member] = []
    existing = {getattr(m, "name", None) for m in d.members}
    for intro in introductions:
        if intro.target_type != d.name:
            continue
        for m in intro.added_members:
            assert isinstance(m, ast.MethodDecl)
            if isinstance(d, ast.InterfaceDecl) and m.body is not None:
                raise TransformError(
                    "BODY_IN_INTERFACE",
                    f"introduction of {m.name!r} into interface {d.name!r} "
                    "must be a bare signature",
                    line=m.line, col=m.col)
            if isinstance(d, ast.ClassDecl) and m.body is None and not d.is_abstract:
                raise TransformError(
                    "ABSTRACT_MEMBER",
                    f"introduction of {m.name!r} into class {d.name!r} "
                    "needs a body",
                    line=m.line, col=m.col)
            if m.name in existing:
                raise TransformError(
                    "INTRODUCTION_COLLISION",
                    f"introduced member {m.name!r} collides with an existing "
                    f"member of {d.name!r}",
                    line=m.line, col=m.col)
            existing.add(m.name)
            additions.append(m)
    if not additions:
        return d
    if isinstance(d, ast.ClassDecl):
        return ast.ClassDecl(d.name, d.members + tuple(additions),
                             d.is_abstract, d.is_partial, d.extends,
                             d.implements, line=d.line, col=d.col)
    return ast.InterfaceDecl(d.name, d.members + tuple(additions),
                             d.is_partial, d.extends, line=d.line, col=d.col)


# --- part merging ---------------------------------------------------------

def part_merge(generated: Artifact, handwritten: Artifact) -> Artifact:
    """Merge a generated artifact with its handwritten counterpart, the
    handwritten side winning conflicts. Works on MiniOOP units (declaration
    and member union) and on manifests (right-priority key union). This is a
    tool pass: it needs no language support."""
    if generated.kind != handwritten.kind:
        raise TransformError("TYPE_MISMATCH",
                             f"cannot merge {generated.path!r} with "
                             f"{handwritten.path!r}: different artifact types")
    if generated.kind == KIND_MANIFEST:
        gen_doc = parse_manifest(generated.text, generated.path)
        hand_doc = parse_manifest(handwritten.text, handwritten.path)
        return Artifact(generated.path,
                        print_manifest(merge_manifests(gen_doc, hand_doc)),
                        ast.ORIGIN_LINKED)
    gen_unit = parse_unit(generated.text, generated.path, ast.ORIGIN_GENERATED)
    hand_unit = parse_unit(handwritten.text, handwritten.path,
                           ast.ORIGIN_HANDWRITTEN)
    merged = _merge_units(gen_unit, hand_unit)
    return Artifact(generated.path, print_unit(merged), ast.ORIGIN_LINKED)


def _merge_units(gen: ast.Unit, hand: ast.Unit) -> ast.Unit:
    hand_by_name = {d.name: d for d in hand.decls}  # type: ignore[attr-defined]
    decls: list[ast.Decl] = []
    for g in gen.decls:
        h = hand_by_name.pop(g.name, None)  # type: ignore[attr-defined]
        decls.append(g if h is None else _merge_decl_pair(g, h))
    decls.extend(hand_by_name.values())
    return ast.Unit(gen.path, tuple(decls), ast.ORIGIN_LINKED)


def _merge_decl_pair(g: ast.Decl, h: ast.Decl) -> ast.Decl:
    if type(g) is not type(h):
        raise TransformError("KIND_MISMATCH",
                             f"declaration {g.name!r} is a different kind in "
                             "the handwritten artifact")  # type: ignore[attr-defined]
    members: list[ast.Member] = []
    slots: dict[str, int] = {}
    for m in g.members:  # type: ignore[attr-defined]
        name = getattr(m, "name", None)
        if name is not None:
            slots[name] = len(members)
        members.append(m)
    for m in h.members:  # type: ignore[attr-defined]
        name = getattr(m, "name", None)
        if name is None:
            members.append(m)
            continue
        if name not in slots:
            slots[name] = len(members)
            members.append(m)
            continue
        existing = members[slots[name]]
        if isinstance(m, ast.FieldDecl) and isinstance(existing, ast.FieldDecl):
            if m.type != existing.type:
                raise TransformError(
                    "FIELD_COLLISION",
                    f"field {name!r} has conflicting types "
                    f"{existing.type!r} and {m.type!r}")
            members[slots[name]] = m  # handwritten initializer wins
        elif isinstance(m, ast.MethodDecl) and isinstance(existing, ast.MethodDecl):
            members[slots[name]] = m  # handwritten body wins
        else:
            raise TransformError("DUPLICATE_MEMBER",
                                 f"member {name!r} is a different kind in the "
                                 "handwritten artifact")
    if isinstance(g, ast.ClassDecl):
        assert isinstance(h, ast.ClassDecl)
        if g.extends and h.extends and g.extends != h.extends:
            raise TransformError("SUPERTYPE_CONFLICT",
                                 f"class {g.name!r} declares conflicting "
                                 "superclasses")
        implements = list(g.implements)
        for i in h.implements:
            if i not in implements:
                implements.append(i)
        return ast.ClassDecl(g.name, tuple(members),
                             g.is_abstract or h.is_abstract,
                             g.is_partial or h.is_partial,
                             g.extends or h.extends, tuple(implements))
    assert isinstance(g, ast.InterfaceDecl) and isinstance(h, ast.InterfaceDecl)
    extends = list(g.extends)
    for e in h.extends:
        if e not in extends:
            extends.append(e)
    return ast.InterfaceDecl(g.name, tuple(members),
                             g.is_partial or h.is_partial, tuple(extends))


# --- manifests ------------------------------------------------------------

ManifestDoc = list[tuple[str, str]]


def parse_manifest(text: str, path: str = "<manifest>") -> ManifestDoc:
    """`key = value` lines; `#` comments; keys unique per document."""
    doc: ManifestDoc = []
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise TransformError("SYNTAX", f"expected 'key = value': {line!r}",
                                 path, lineno, 1)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise TransformError("SYNTAX", "empty manifest key", path, lineno, 1)
        if key in seen:
            raise TransformError("DUPLICATE_KEY",
                                 f"duplicate manifest key {key!r}",
                                 path, lineno, 1)
        seen.add(key)
        doc.append((key, value))
    return doc


def print_manifest(doc: ManifestDoc) -> str:
    return "".join(f"{k} = {v}\n" for k, v in doc)


def merge_manifests(gen: ManifestDoc, hand: ManifestDoc) -> ManifestDoc:
    """Key union; handwritten value wins on conflicts; generated order first,
    then new handwritten keys in their order."""
    hand_map = dict(hand)
    out: ManifestDoc = []
    for k, v in gen:
        out.append((k, hand_map.pop(k, v)))
    for k, v in hand:
        if k in hand_map:
            out.append((k, v))
    return out


# --- protected regions ------------------------------------------------------

PR_BEGIN = "// PR-BEGIN"
PR_END = "// PR-END"

_MARKER_RE = re.compile(r"^\s*//\s*PR-(BEGIN|END)\s+(\S+)\s*$")

RegionMap = dict[str, list[str]]


def extract_regions(text: str, path: str = "<text>") -> RegionMap:
    """Collect every `// PR-BEGIN <id>` ... `// PR-END <id>` span, in file
    order. Content excludes the marker lines. Regions must be unique, closed,
    and unnested."""
    regions: RegionMap = {}
    open_id: str | None = None
    content: list[str] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        m = _MARKER_RE.match(line)
        if m is None:
            if open_id is not None:
                content.append(line)
            continue
        kind, rid = m.group(1), m.group(2)
        if kind == "BEGIN":
            if open_id is not None:
                raise TransformError("NESTED_REGION",
                                     f"region {rid!r} opened inside {open_id!r}",
                                     path, lineno, 1)
            if rid in regions:
                raise TransformError("DUPLICATE_ID",
                                     f"duplicate region id {rid!r}",
                                     path, lineno, 1)
            open_id = rid
            content = []
        else:
            if open_id is None or open_id != rid:
                raise TransformError("UNMATCHED_MARKER",
                                     f"PR-END {rid!r} without matching PR-BEGIN",
                                     path, lineno, 1)
            regions[rid] = content
            open_id = None
    if open_id is not None:
        raise TransformError("UNMATCHED_MARKER",
                             f"region {open_id!r} is never closed", path)
    return regions


def inject_regions(fresh: str, saved: RegionMap,
                   path: str = "<text>") -> tuple[str, list[str]]:
    """Replace the default content of each region in `fresh` with the saved
    content sharing its id. Ids saved but absent from `fresh` come back as
    lost ids; the caller must not drop them silently."""
    fresh_ids = extract_regions(fresh, path)  # validates markers
    out: list[str] = []
    skipping = False
    for line in fresh.splitlines():
        m = _MARKER_RE.match(line)
        if m is None:
            if not skipping:
                out.append(line)
            continue
        kind, rid = m.group(1), m.group(2)
        if kind == "BEGIN":
            out.append(line)
            if rid in saved:
                out.extend(saved[rid])
                skipping = True
        else:
            skipping = False
            out.append(line)
    lost = [rid for rid in saved if rid not in fresh_ids]
    text = "\n".join(out)
    if fresh.endswith("\n"):
        text += "\n"
    return text, lost


def format_lost_regions(saved: RegionMap, lost: list[str]) -> str:
    """Sidecar body for lost regions: reinjectable marker-wrapped spans."""
    lines: list[str] = []
    for rid in lost:
        lines.append(f"{PR_BEGIN} {rid}")
        lines.extend(saved.get(rid, []))
        lines.append(f"{PR_END} {rid}")
    return "\n".join(lines) + ("\n" if lines else "")
