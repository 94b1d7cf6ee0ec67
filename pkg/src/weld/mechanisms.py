"""The eight integration strategies.

Each strategy maps a class model plus a workspace to generated artifacts,
defines a link step that assembles the runnable program from the generated
and handwritten trees, regenerates deterministically, and exposes scaffolds
that realize (or refuse) handwritten overrides and interface extensions.

Workspace layout: `model/` holds `.cdm` inputs, `gen/` is owned by the
generator, `hand/` and `aspects/` hold developer files, `out/` receives the
linked program. The one deliberate exception: under the protected-regions
strategy handwritten edits live inside `gen/` region markers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

from .errors import GenerateError, LinkError, ParseError, TransformError, WeldError
from .ioutil import atomic_write, read_text
from .minioop import ast
from .minioop.parser import parse_unit
from .minioop.printer import format_sig, format_stmt, print_unit
from .minioop.profile import CORE_PROFILE, PROFILE_FLAGS, LanguageProfile
from .minioop.resolver import resolve_program
from .model import ClassModel, ClassSpec, MethodSig, parse_model
from .transforms import (
    Artifact,
    extract_regions,
    file_include_resolver,
    format_lost_regions,
    inject_regions,
    merge_partials,
    parse_manifest,
    part_merge,
    print_manifest,
    PR_BEGIN,
    PR_END,
    resolve_includes,
    weave_aspects,
)


class Mechanism(enum.Enum):
    GENERATION_GAP = "generation-gap"
    EXTENDED_GENERATION_GAP = "extended-generation-gap"
    DELEGATION = "delegation"
    INCLUDE = "include"
    PARTIAL_CLASSES = "partial-classes"
    AOP = "aop"
    PART_MERGER = "part-merger"
    PROTECTED_REGIONS = "protected-regions"


MECHANISM_ORDER: tuple[Mechanism, ...] = (
    Mechanism.GENERATION_GAP,
    Mechanism.EXTENDED_GENERATION_GAP,
    Mechanism.DELEGATION,
    Mechanism.INCLUDE,
    Mechanism.PARTIAL_CLASSES,
    Mechanism.AOP,
    Mechanism.PART_MERGER,
    Mechanism.PROTECTED_REGIONS,
)

DISPLAY_NAMES: dict[Mechanism, str] = {
    Mechanism.GENERATION_GAP: "Generation Gap",
    Mechanism.EXTENDED_GENERATION_GAP: "Extended Gen. Gap",
    Mechanism.DELEGATION: "Delegation",
    Mechanism.INCLUDE: "Include Mechanism",
    Mechanism.PARTIAL_CLASSES: "Partial Classes",
    Mechanism.AOP: "AOP",
    Mechanism.PART_MERGER: "PartMerger",
    Mechanism.PROTECTED_REGIONS: "Protected Regions",
}


def mechanism_from_name(name: str) -> Mechanism:
    for m in Mechanism:
        if m.value == name:
            return m
    raise WeldError("UNKNOWN_MECHANISM", f"unknown mechanism {name!r}")


def default_profile(m: Mechanism) -> LanguageProfile:
    """The language profile a mechanism needs to link its own output."""
    if m is Mechanism.INCLUDE:
        return LanguageProfile(includes=True, include_in_interface=True)
    if m is Mechanism.PARTIAL_CLASSES:
        return LanguageProfile(partial_classes=True, partial_interfaces=True,
                               partial_method_override=True)
    if m is Mechanism.AOP:
        return LanguageProfile(aspects=True)
    return CORE_PROFILE


# --- workspace ------------------------------------------------------------

MANIFEST_NAME = "weld.toml"

DEFAULT_MODEL_SOURCE = """\
class NotePad {
    field title: String;
    method getTitle(): String;
    method setTitle(t: String): void;
}
"""


@dataclass
class Workspace:
    root: Path
    mechanism: Mechanism
    profile: LanguageProfile
    pairs: tuple[tuple[str, str], ...] = ()

    SUBDIRS = ("model", "hand", "gen", "aspects", "out")

    # -- lifecycle -------------------------------------------------------

    @classmethod
    def create(cls, root: Path, mechanism: Mechanism,
               profile: LanguageProfile | None = None,
               pairs: tuple[tuple[str, str], ...] = (),
               seed_model: bool = True) -> "Workspace":
        ws = cls(Path(root), mechanism,
                 profile if profile is not None else default_profile(mechanism),
                 tuple(pairs))
        for sub in cls.SUBDIRS:
            (ws.root / sub).mkdir(parents=True, exist_ok=True)
        ws.save_manifest()
        if seed_model:
            atomic_write(ws.root / "model" / "NotePad.cdm", DEFAULT_MODEL_SOURCE)
        return ws

    @classmethod
    def load(cls, root: Path) -> "Workspace":
        root = Path(root)
        text = read_text(root / MANIFEST_NAME)
        if text is None:
            raise WeldError("NO_WORKSPACE",
                            f"no {MANIFEST_NAME} found in {root}")
        mechanism: Mechanism | None = None
        flags: dict[str, bool] = {}
        pairs: list[tuple[str, str]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = (part.strip() for part in line.partition("="))
            if not sep:
                raise WeldError("BAD_MANIFEST",
                                f"{MANIFEST_NAME}:{lineno}: expected key = value")
            if key == "mechanism":
                mechanism = mechanism_from_name(value)
            elif key.startswith("profile."):
                flag = key[len("profile."):]
                if flag not in PROFILE_FLAGS or value not in ("true", "false"):
                    raise WeldError("BAD_MANIFEST",
                                    f"{MANIFEST_NAME}:{lineno}: bad profile entry")
                flags[flag] = value == "true"
            elif key == "pair":
                gen_path, colon, hand_path = (p.strip()
                                              for p in value.partition(":"))
                if not colon or not gen_path or not hand_path:
                    raise WeldError("BAD_MANIFEST",
                                    f"{MANIFEST_NAME}:{lineno}: expected "
                                    "'pair = <gen-path> : <hand-path>'")
                pairs.append((gen_path, hand_path))
            else:
                raise WeldError("BAD_MANIFEST",
                                f"{MANIFEST_NAME}:{lineno}: unknown key {key!r}")
        if mechanism is None:
            raise WeldError("BAD_MANIFEST",
                            f"{MANIFEST_NAME} does not name a mechanism")
        return cls(root, mechanism, LanguageProfile(**flags), tuple(pairs))

    def save_manifest(self) -> None:
        lines = [f"mechanism = {self.mechanism.value}"]
        for flag in PROFILE_FLAGS:
            value = "true" if getattr(self.profile, flag) else "false"
            lines.append(f"profile.{flag} = {value}")
        for gen_path, hand_path in self.pairs:
            lines.append(f"pair = {gen_path} : {hand_path}")
        atomic_write(self.root / MANIFEST_NAME, "\n".join(lines) + "\n")

    # -- file access -------------------------------------------------------

    def read(self, rel: str) -> str | None:
        return read_text(self.root / rel)

    def write(self, rel: str, text: str) -> None:
        atomic_write(self.root / rel, text)

    def tree(self, sub: str, suffixes: tuple[str, ...]) -> dict[str, str]:
        """Files under one subtree, keyed by path relative to the subtree,
        lexicographically sorted for determinism."""
        base = self.root / sub
        if not base.is_dir():
            return {}
        out: dict[str, str] = {}
        for p in sorted(base.rglob("*")):
            if p.is_file() and p.suffix in suffixes:
                out[p.relative_to(base).as_posix()] = p.read_text(encoding="utf-8")
        return out

    def clear_tree(self, sub: str, suffixes: tuple[str, ...]) -> None:
        base = self.root / sub
        if not base.is_dir():
            return
        for p in sorted(base.rglob("*")):
            if p.is_file() and p.suffix in suffixes:
                p.unlink()

    def read_model(self) -> ClassModel:
        sources = self.tree("model", (".cdm",))
        if not sources:
            raise WeldError("NO_MODEL", "no .cdm files under model/")
        classes: list[ClassSpec] = []
        seen: set[str] = set()
        for rel, text in sources.items():
            parsed = parse_model(text, f"model/{rel}")
            for c in parsed.classes:
                if c.name in seen:
                    raise WeldError("DUPLICATE_CLASS",
                                    f"class {c.name!r} declared in more than "
                                    "one model file")
                seen.add(c.name)
                classes.append(c)
        return ClassModel(tuple(classes))


# --- evidence ---------------------------------------------------------------

@dataclass
class MechanismEvidence:
    """What the generator touched: written files plus which trees it read."""

    files_written: tuple[str, ...]
    read_hand_tree: bool = False
    read_prev_gen: bool = False


@dataclass
class GenerateResult:
    artifacts: tuple[Artifact, ...]
    evidence: MechanismEvidence
    lost_regions: dict[str, list[str]] = field(default_factory=dict)


# --- shared AST builders ------------------------------------------------------

def _params(sig: MethodSig) -> tuple[ast.Param, ...]:
    return tuple(ast.Param(p.name, p.type) for p in sig.params)


def _default_body(return_type: str) -> tuple[ast.Stmt, ...]:
    if return_type == "String":
        return (ast.ReturnStmt(ast.StringLit("base")),)
    if return_type == "Int":
        return (ast.ReturnStmt(ast.IntLit(0)),)
    if return_type == "Bool":
        return (ast.ReturnStmt(ast.BoolLit(False)),)
    if return_type == "void":
        return ()
    return (ast.ReturnStmt(ast.NullLit()),)


def _interface_decl(c: ClassSpec, name: str | None = None,
                    extends: tuple[str, ...] = (),
                    partial: bool = False) -> ast.InterfaceDecl:
    members = tuple(ast.MethodDecl(m.name, _params(m), m.return_type, None)
                    for m in c.methods)
    return ast.InterfaceDecl(name or c.name, members, partial, extends)


def _impl_members(c: ClassSpec) -> list[ast.Member]:
    members: list[ast.Member] = [ast.FieldDecl(f.name, f.type, None)
                                 for f in c.fields]
    members.extend(ast.MethodDecl(m.name, _params(m), m.return_type,
                                  _default_body(m.return_type))
                   for m in c.methods)
    return members


def _factory_decl(c: ClassSpec, target: str) -> ast.ClassDecl:
    body = (ast.ReturnStmt(ast.NewObject(target)),)
    create = ast.MethodDecl("create", (), c.name, body)
    return ast.ClassDecl(f"{c.name}Factory", (create,))


def _unit_text(decl: ast.Decl, banner: str | None) -> str:
    text = print_unit(ast.Unit("", (decl,), ast.ORIGIN_GENERATED))
    if banner:
        text = f"// {banner}\n" + text
    return text


DEMO_MANIFEST = """\
# generated application manifest
name = app
version = 1
vendor = generator
"""


# --- generation ---------------------------------------------------------------

def generate(model: ClassModel, ws: Workspace,
             mechanism: Mechanism | None = None,
             banner: str | None = None) -> GenerateResult:
    """Run the strategy's generator over the model, rewriting gen/.

    A pure function of the model, the mechanism, the handwritten tree
    snapshot (extended generation gap only) and the previous gen/ snapshot
    (protected regions only)."""
    m = mechanism or ws.mechanism
    lost_regions: dict[str, list[str]] = {}
    read_hand = False
    read_prev = False

    if m is Mechanism.EXTENDED_GENERATION_GAP:
        read_hand = True
        hand_decls = _scan_hand_decls(ws)
        files = _gen_extended_generation_gap(model, hand_decls, banner)
    elif m is Mechanism.PROTECTED_REGIONS:
        read_prev = True
        files, lost_regions = _gen_protected_regions(model, ws, banner)
    elif m is Mechanism.GENERATION_GAP:
        files = _gen_generation_gap(model, banner)
    elif m is Mechanism.DELEGATION:
        files = _gen_delegation(model, banner)
    elif m is Mechanism.INCLUDE:
        files = _gen_include(model, banner)
    elif m is Mechanism.PARTIAL_CLASSES:
        files = _gen_partial_classes(model, banner)
    elif m is Mechanism.AOP:
        files = _gen_plain(model, banner)
    elif m is Mechanism.PART_MERGER:
        files = _gen_plain(model, banner)
        files.append(("app.manifest", DEMO_MANIFEST))
    else:  # pragma: no cover
        raise WeldError("UNKNOWN_MECHANISM", f"no generator for {m}")

    ws.clear_tree("gen", (".moo", ".manifest"))
    artifacts = []
    for rel, text in files:
        ws.write(f"gen/{rel}", text)
        artifacts.append(Artifact(f"gen/{rel}", text, ast.ORIGIN_GENERATED))
    evidence = MechanismEvidence(
        files_written=tuple(f"gen/{rel}" for rel, _ in files),
        read_hand_tree=read_hand,
        read_prev_gen=read_prev,
    )
    return GenerateResult(tuple(artifacts), evidence, lost_regions)


def _gen_generation_gap(model: ClassModel,
                        banner: str | None) -> list[tuple[str, str]]:
    files: list[tuple[str, str]] = []
    for c in model.classes:
        base = ast.ClassDecl(f"{c.name}BaseImpl", tuple(_impl_members(c)),
                             implements=(c.name,))
        files.append((f"{c.name}.moo", _unit_text(_interface_decl(c), banner)))
        files.append((f"{c.name}BaseImpl.moo", _unit_text(base, banner)))
        files.append((f"{c.name}Factory.moo",
                      _unit_text(_factory_decl(c, f"{c.name}Impl"), banner)))
    return files


def _scan_hand_decls(ws: Workspace) -> dict[str, ast.Decl]:
    decls: dict[str, ast.Decl] = {}
    for rel, text in ws.tree("hand", (".moo",)).items():
        try:
            unit = parse_unit(text, f"hand/{rel}")
        except ParseError as e:
            raise GenerateError("HAND_PARSE",
                                f"handwritten file failed to parse: {e}",
                                f"hand/{rel}") from e
        for d in unit.decls:
            decls[getattr(d, "name", "")] = d
    return decls


def _gen_extended_generation_gap(model: ClassModel,
                                 hand_decls: dict[str, ast.Decl],
                                 banner: str | None) -> list[tuple[str, str]]:
    files: list[tuple[str, str]] = []
    for c in model.classes:
        has_base = isinstance(hand_decls.get(f"{c.name}Base"), ast.InterfaceDecl)
        has_impl = isinstance(hand_decls.get(f"{c.name}Impl"), ast.ClassDecl)
        if has_base and not has_impl:
            raise GenerateError(
                "MISSING_HAND_IMPL",
                f"hand/ declares interface {c.name}Base but no class "
                f"{c.name}Impl to implement it")
        iface = _interface_decl(
            c, extends=(f"{c.name}Base",) if has_base else ())
        base = ast.ClassDecl(f"{c.name}BaseImpl", tuple(_impl_members(c)),
                             is_abstract=has_impl, implements=(c.name,))
        target = f"{c.name}Impl" if has_impl else f"{c.name}BaseImpl"
        files.append((f"{c.name}.moo", _unit_text(iface, banner)))
        files.append((f"{c.name}BaseImpl.moo", _unit_text(base, banner)))
        files.append((f"{c.name}Factory.moo",
                      _unit_text(_factory_decl(c, target), banner)))
    return files


def _gen_delegation(model: ClassModel,
                    banner: str | None) -> list[tuple[str, str]]:
    files: list[tuple[str, str]] = []
    for c in model.classes:
        delegate_iface = _interface_decl(c, name=f"{c.name}Delegate")
        members: list[ast.Member] = [
            ast.FieldDecl("delegate", f"{c.name}Delegate",
                          ast.NewObject(f"{c.name}DelegateImpl"))]
        for sig in c.methods:
            call = ast.MethodCall(
                ast.FieldAccess(ast.ThisExpr(), "delegate"), sig.name,
                tuple(ast.VarRef(p.name) for p in sig.params))
            body: tuple[ast.Stmt, ...]
            if sig.return_type == "void":
                body = (ast.ExprStmt(call),)
            else:
                body = (ast.ReturnStmt(call),)
            members.append(ast.MethodDecl(sig.name, _params(sig),
                                          sig.return_type, body))
        delegator = ast.ClassDecl(f"{c.name}Delegator", tuple(members),
                                  implements=(c.name,))
        files.append((f"{c.name}.moo", _unit_text(_interface_decl(c), banner)))
        files.append((f"{c.name}Delegate.moo", _unit_text(delegate_iface, banner)))
        files.append((f"{c.name}Delegator.moo", _unit_text(delegator, banner)))
        files.append((f"{c.name}Factory.moo",
                      _unit_text(_factory_decl(c, f"{c.name}Delegator"), banner)))
    return files


def _gen_include(model: ClassModel,
                 banner: str | None) -> list[tuple[str, str]]:
    files: list[tuple[str, str]] = []
    for c in model.classes:
        iface = _interface_decl(c)
        iface = ast.InterfaceDecl(
            iface.name,
            iface.members + (ast.IncludeDirective(f"hand/{c.name}_api.inc"),),
            iface.is_partial, iface.extends)
        members = _impl_members(c)
        members.append(ast.IncludeDirective(f"hand/{c.name}_extra.inc"))
        impl = ast.ClassDecl(f"{c.name}Impl", tuple(members),
                             implements=(c.name,))
        files.append((f"{c.name}.moo", _unit_text(iface, banner)))
        files.append((f"{c.name}Impl.moo", _unit_text(impl, banner)))
        files.append((f"{c.name}Factory.moo",
                      _unit_text(_factory_decl(c, f"{c.name}Impl"), banner)))
    return files


def _gen_partial_classes(model: ClassModel,
                         banner: str | None) -> list[tuple[str, str]]:
    files: list[tuple[str, str]] = []
    for c in model.classes:
        iface = _interface_decl(c, partial=True)
        impl = ast.ClassDecl(f"{c.name}Impl", tuple(_impl_members(c)),
                             is_partial=True, implements=(c.name,))
        files.append((f"{c.name}.moo", _unit_text(iface, banner)))
        files.append((f"{c.name}Impl.moo", _unit_text(impl, banner)))
        files.append((f"{c.name}Factory.moo",
                      _unit_text(_factory_decl(c, f"{c.name}Impl"), banner)))
    return files


def _gen_plain(model: ClassModel, banner: str | None) -> list[tuple[str, str]]:
    """Interface + concrete default impl + factory, no extension hooks."""
    files: list[tuple[str, str]] = []
    for c in model.classes:
        impl = ast.ClassDecl(f"{c.name}Impl", tuple(_impl_members(c)),
                             implements=(c.name,))
        files.append((f"{c.name}.moo", _unit_text(_interface_decl(c), banner)))
        files.append((f"{c.name}Impl.moo", _unit_text(impl, banner)))
        files.append((f"{c.name}Factory.moo",
                      _unit_text(_factory_decl(c, f"{c.name}Impl"), banner)))
    return files


def interface_members_region_id(class_name: str) -> str:
    return f"{class_name}.members"


def impl_members_region_id(class_name: str) -> str:
    return f"{class_name}.impl.members"


def method_body_region_id(class_name: str, method_name: str) -> str:
    return f"{class_name}.{method_name}.body"


def _pr_interface_text(c: ClassSpec, banner: str | None) -> str:
    lines: list[str] = []
    if banner:
        lines.append(f"// {banner}")
    lines.append(f"interface {c.name} {{")
    for sig in c.methods:
        decl = ast.MethodDecl(sig.name, _params(sig), sig.return_type, None)
        lines.append(f"    {format_sig(decl)};")
    rid = interface_members_region_id(c.name)
    lines.append(f"    {PR_BEGIN} {rid}")
    lines.append(f"    {PR_END} {rid}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _pr_impl_text(c: ClassSpec, banner: str | None) -> str:
    lines: list[str] = []
    if banner:
        lines.append(f"// {banner}")
    lines.append(f"class {c.name}Impl implements {c.name} {{")
    for f in c.fields:
        lines.append(f"    field {f.name}: {f.type};")
    for sig in c.methods:
        decl = ast.MethodDecl(sig.name, _params(sig), sig.return_type, None)
        rid = method_body_region_id(c.name, sig.name)
        lines.append(f"    {format_sig(decl)} {{")
        lines.append(f"        {PR_BEGIN} {rid}")
        for stmt in _default_body(sig.return_type):
            lines.extend(format_stmt(stmt, 2))
        lines.append(f"        {PR_END} {rid}")
        lines.append("    }")
    rid = impl_members_region_id(c.name)
    lines.append(f"    {PR_BEGIN} {rid}")
    lines.append(f"    {PR_END} {rid}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _gen_protected_regions(model: ClassModel, ws: Workspace,
                           banner: str | None
                           ) -> tuple[list[tuple[str, str]], dict[str, list[str]]]:
    previous = ws.tree("gen", (".moo",))
    saved_by_path: dict[str, dict[str, list[str]]] = {}
    for rel, text in previous.items():
        try:
            saved_by_path[rel] = extract_regions(text, f"gen/{rel}")
        except TransformError as e:
            raise GenerateError("REGION_CORRUPT",
                                f"previous output has corrupt region markers: "
                                f"{e}", f"gen/{rel}") from e

    fresh: list[tuple[str, str]] = []
    for c in model.classes:
        fresh.append((f"{c.name}.moo", _pr_interface_text(c, banner)))
        fresh.append((f"{c.name}Impl.moo", _pr_impl_text(c, banner)))
        fresh.append((f"{c.name}Factory.moo",
                      _unit_text(_factory_decl(c, f"{c.name}Impl"), banner)))

    lost_regions: dict[str, list[str]] = {}
    files: list[tuple[str, str]] = []
    sidecars: dict[str, str] = {}
    for rel, text in fresh:
        saved = saved_by_path.pop(rel, None)
        if saved:
            text, lost = inject_regions(text, saved, f"gen/{rel}")
            if lost:
                lost_regions[rel] = lost
                sidecars[f"{rel}.lost"] = format_lost_regions(saved, lost)
        files.append((rel, text))
    # previous files without a fresh counterpart lose all their regions
    for rel, saved in saved_by_path.items():
        if saved:
            lost_regions[rel] = list(saved)
            sidecars[f"{rel}.lost"] = format_lost_regions(saved, list(saved))
    files.extend(sorted(sidecars.items()))
    return files, lost_regions


def regenerate(model: ClassModel, ws: Workspace,
               mechanism: Mechanism | None = None,
               banner: str | None = None) -> GenerateResult:
    """Re-run generation. Identical to generate; protected regions preserve
    saved region content and report lost ids, every other mechanism
    overwrites gen/ unconditionally."""
    if not ws.tree("gen", (".moo", ".manifest")):
        raise GenerateError("MISSING_GENERATED",
                            "nothing under gen/; run generate first")
    return generate(model, ws, mechanism, banner)


# --- linking ------------------------------------------------------------------

def link(ws: Workspace, mechanism: Mechanism | None = None,
         profile: LanguageProfile | None = None,
         on_warning: Callable[[str], None] | None = None) -> list[ast.Unit]:
    """Assemble the runnable program from gen/, hand/ and aspects/, apply the
    mechanism's transform, require a clean static resolution, and write the
    result to out/.

    Transforms run only when the profile licenses them; unlicensed constructs
    flow through to the resolver, which reports PROFILE_VIOLATION.
    """
    m = mechanism or ws.mechanism
    profile = profile if profile is not None else ws.profile

    gen_files = ws.tree("gen", (".moo",))
    if not gen_files:
        raise LinkError("MISSING_GENERATED",
                        "nothing under gen/; run generate first")
    gen_units = [_parse_tree_unit(ws, "gen", rel, text, ast.ORIGIN_GENERATED)
                 for rel, text in gen_files.items()]
    hand_units = [_parse_tree_unit(ws, "hand", rel, text, ast.ORIGIN_HANDWRITTEN)
                  for rel, text in ws.tree("hand", (".moo",)).items()]

    manifests: list[tuple[str, str]] = []
    try:
        if m in (Mechanism.GENERATION_GAP, Mechanism.EXTENDED_GENERATION_GAP,
                 Mechanism.DELEGATION):
            units = gen_units + hand_units
            if m is Mechanism.GENERATION_GAP:
                _require_hand_impls(ws, hand_units)
        elif m is Mechanism.INCLUDE:
            if profile.includes:
                resolver = file_include_resolver(ws.read)
                gen_units = [resolve_includes(u, resolver, profile, on_warning)
                             for u in gen_units]
            units = gen_units + hand_units
        elif m is Mechanism.PARTIAL_CLASSES:
            units = gen_units + hand_units
            if profile.partial_classes:
                units = merge_partials(units, profile)
        elif m is Mechanism.AOP:
            aspect_decls = _load_aspects(ws)
            if profile.aspects:
                units = weave_aspects(gen_units, aspect_decls) + hand_units
            else:
                aspect_unit = ast.Unit("aspects/", tuple(aspect_decls),
                                       ast.ORIGIN_HANDWRITTEN)
                units = gen_units + hand_units + (
                    [aspect_unit] if aspect_decls else [])
        elif m is Mechanism.PART_MERGER:
            units, manifests = _link_part_merger(ws)
        elif m is Mechanism.PROTECTED_REGIONS:
            units = gen_units
        else:  # pragma: no cover
            raise WeldError("UNKNOWN_MECHANISM", f"no link step for {m}")
    except TransformError as e:
        raise LinkError(e.code, f"{m.value}: {e.message}") from e

    diagnostics = resolve_program(units, profile)
    if diagnostics:
        raise LinkError("RESOLVE_FAILED",
                        f"{m.value}: program does not resolve",
                        tuple(diagnostics))

    _write_out(ws, units, manifests)
    return units


def _parse_tree_unit(ws: Workspace, sub: str, rel: str, text: str,
                     origin: str) -> ast.Unit:
    try:
        return parse_unit(text, f"{sub}/{rel}", origin)
    except ParseError as e:
        raise LinkError("PARSE_FAILED",
                        f"{sub}/{rel} failed to parse: {e}") from e


def _require_hand_impls(ws: Workspace, hand_units: list[ast.Unit]) -> None:
    """The basic generation gap demands a handwritten impl class per model
    class, whether or not it overrides anything."""
    hand_classes = {d.name for u in hand_units for d in u.decls
                    if isinstance(d, ast.ClassDecl)}
    for c in ws.read_model().classes:
        if f"{c.name}Impl" not in hand_classes:
            raise LinkError(
                "MISSING_IMPL",
                f"generation gap requires a handwritten class {c.name}Impl "
                "under hand/")


def _load_aspects(ws: Workspace) -> list[ast.AspectDecl]:
    decls: list[ast.AspectDecl] = []
    for rel, text in ws.tree("aspects", (".asp",)).items():
        unit = _parse_tree_unit(ws, "aspects", rel, text, ast.ORIGIN_HANDWRITTEN)
        for d in unit.decls:
            if not isinstance(d, ast.AspectDecl):
                raise LinkError("ASPECT_FILE",
                                f"aspects/{rel} may contain only aspects")
            decls.append(d)
    return decls


def _link_part_merger(ws: Workspace) -> tuple[list[ast.Unit], list[tuple[str, str]]]:
    gen_tree = ws.tree("gen", (".moo", ".manifest"))
    hand_tree = ws.tree("hand", (".moo", ".manifest"))
    pairing = {rel: rel for rel in gen_tree if rel in hand_tree}
    for gen_path, hand_path in ws.pairs:
        g = gen_path.removeprefix("gen/")
        h = hand_path.removeprefix("hand/")
        if g in gen_tree and h in hand_tree:
            pairing[g] = h

    merged: list[Artifact] = []
    consumed_hand: set[str] = set()
    for rel, text in gen_tree.items():
        if rel in pairing:
            hand_rel = pairing[rel]
            consumed_hand.add(hand_rel)
            merged.append(part_merge(
                Artifact(rel, text, ast.ORIGIN_GENERATED),
                Artifact(hand_rel, hand_tree[hand_rel], ast.ORIGIN_HANDWRITTEN)))
        else:
            merged.append(Artifact(rel, text, ast.ORIGIN_GENERATED))
    for rel, text in hand_tree.items():
        if rel not in consumed_hand:
            merged.append(Artifact(rel, text, ast.ORIGIN_HANDWRITTEN))

    units: list[ast.Unit] = []
    manifests: list[tuple[str, str]] = []
    for art in merged:
        if art.path.endswith(".manifest"):
            parse_manifest(art.text, art.path)  # validate
            manifests.append((art.path, art.text))
        else:
            units.append(parse_unit(art.text, art.path, ast.ORIGIN_LINKED,
                                    allow_reserved=True))
    return units, manifests


def _write_out(ws: Workspace, units: list[ast.Unit],
               manifests: list[tuple[str, str]]) -> None:
    ws.clear_tree("out", (".moo", ".manifest"))
    seen: dict[str, str] = {}
    for u in units:
        name = Path(u.path).name
        if name in seen:
            raise LinkError("OUTPUT_COLLISION",
                            f"{u.path} and {seen[name]} both map to out/{name}")
        seen[name] = u.path
        ws.write(f"out/{name}", print_unit(replace(u, origin=ast.ORIGIN_LINKED)))
    for rel, text in manifests:
        ws.write(f"out/{Path(rel).name}", text)


# --- scaffolds ------------------------------------------------------------------

@dataclass(frozen=True)
class ScaffoldFile:
    rel_path: str  # workspace-relative, under hand/ or aspects/
    text: str


@dataclass(frozen=True)
class RegionEdit:
    rel_path: str  # workspace-relative, under gen/
    region_id: str
    lines: tuple[str, ...]


@dataclass(frozen=True)
class Scaffold:
    """A recipe for placing handwritten content, or a refusal with a reason."""

    supported: bool
    reason: str | None = None
    files: tuple[ScaffoldFile, ...] = ()
    region_edits: tuple[RegionEdit, ...] = ()

    @classmethod
    def unsupported(cls, reason: str) -> "Scaffold":
        return cls(False, reason)

    @classmethod
    def of(cls, *files: ScaffoldFile,
           region_edits: tuple[RegionEdit, ...] = ()) -> "Scaffold":
        return cls(True, None, tuple(files), region_edits)


def apply_scaffold(ws: Workspace, scaffold: Scaffold) -> None:
    if not scaffold.supported:
        raise WeldError("UNSUPPORTED_SCAFFOLD",
                        scaffold.reason or "scaffold is unsupported")
    for f in scaffold.files:
        ws.write(f.rel_path, f.text)
    for edit in scaffold.region_edits:
        current = ws.read(edit.rel_path)
        if current is None:
            raise WeldError("MISSING_GENERATED",
                            f"{edit.rel_path} does not exist; generate first")
        new_text, lost = inject_regions(current, {edit.region_id: list(edit.lines)},
                                        edit.rel_path)
        if lost:
            raise WeldError("UNKNOWN_REGION",
                            f"{edit.rel_path} has no region {edit.region_id!r}")
        ws.write(edit.rel_path, new_text)


def _model_method(ws: Workspace, class_name: str,
                  method_name: str) -> tuple[ClassSpec, MethodSig]:
    model = ws.read_model()
    c = model.class_named(class_name)
    if c is None:
        raise WeldError("UNKNOWN_CLASS", f"model has no class {class_name!r}")
    for m in c.methods:
        if m.name == method_name:
            return c, m
    raise WeldError("UNKNOWN_METHOD",
                    f"model class {class_name!r} has no method {method_name!r}")


def _sig_text(name: str, params: tuple[tuple[str, str], ...],
              return_type: str) -> str:
    inner = ", ".join(f"{n}: {t}" for n, t in params)
    return f"method {name}({inner}): {return_type}"


def _method_lines(sig: str, body_src: str, depth: int = 1) -> list[str]:
    pad = "    " * depth
    lines = [f"{pad}{sig} {{"]
    for raw in body_src.strip().splitlines():
        lines.append(f"{pad}    {raw.strip()}")
    lines.append(f"{pad}}}")
    return lines


def _checked_file(rel_path: str, lines: list[str]) -> ScaffoldFile:
    text = "\n".join(lines) + "\n"
    if rel_path.endswith(".moo"):
        parse_unit(text, rel_path)  # surface body typos now, not at link
    return ScaffoldFile(rel_path, text)


def scaffold_override(ws: Workspace, m: Mechanism, class_name: str,
                      method_name: str, body_src: str) -> Scaffold:
    """Handwritten artifacts that replace the generated default of one
    method, for mechanisms that can express that; a reasoned refusal
    otherwise."""
    c, sig = _model_method(ws, class_name, method_name)
    sig_text = _sig_text(sig.name, tuple((p.name, p.type) for p in sig.params),
                         sig.return_type)
    n = c.name
    if m in (Mechanism.GENERATION_GAP, Mechanism.EXTENDED_GENERATION_GAP):
        lines = [f"class {n}Impl extends {n}BaseImpl {{"]
        lines.extend(_method_lines(sig_text, body_src))
        lines.append("}")
        return Scaffold.of(_checked_file(f"hand/{n}Impl.moo", lines))
    if m is Mechanism.PARTIAL_CLASSES:
        lines = [f"partial class {n}Impl {{"]
        lines.extend(_method_lines(sig_text, body_src))
        lines.append("}")
        return Scaffold.of(_checked_file(f"hand/{n}Impl_override.moo", lines))
    if m is Mechanism.AOP:
        aspect = f"Override_{n}_{method_name}"
        lines = [f"aspect {aspect} {{",
                 f"    around {n}Impl.{method_name}() {{"]
        for raw in body_src.strip().splitlines():
            lines.append(f"        {raw.strip()}")
        lines.append("    }")
        lines.append("}")
        return Scaffold.of(ScaffoldFile(f"aspects/{aspect}.asp",
                                        "\n".join(lines) + "\n"))
    if m is Mechanism.PART_MERGER:
        lines = [f"class {n}Impl implements {n} {{"]
        lines.extend(_method_lines(sig_text, body_src))
        lines.append("}")
        return Scaffold.of(_checked_file(f"hand/{n}Impl.moo", lines))
    if m is Mechanism.PROTECTED_REGIONS:
        return Scaffold.unsupported(
            "only designated regions accept edits; a region is an insertion "
            "slot, not a replacement for generated code outside it")
    if m is Mechanism.INCLUDE:
        return Scaffold.unsupported(
            "included members can only add; a member sharing a generated "
            "name is a duplicate-member error")
    if m is Mechanism.DELEGATION:
        return Scaffold.unsupported(
            "only the designated delegate slot accepts handwritten code; "
            "generated plumbing cannot be replaced")
    raise WeldError("UNKNOWN_MECHANISM", f"no override scaffold for {m}")


def scaffold_api_extension(ws: Workspace, m: Mechanism, class_name: str,
                           method_name: str, return_type: str, body_src: str,
                           params: tuple[tuple[str, str], ...] = ()) -> Scaffold:
    """Handwritten artifacts that add a new method to the generated interface
    and an implementation behind it, for mechanisms that can express that."""
    model = ws.read_model()
    c = model.class_named(class_name)
    if c is None:
        raise WeldError("UNKNOWN_CLASS", f"model has no class {class_name!r}")
    taken = {ms.name for ms in c.methods} | {f.name for f in c.fields}
    if method_name in taken:
        raise WeldError("SIGNATURE_COLLISION",
                        f"{class_name}.{method_name} already exists in the model")
    n = c.name
    sig_text = _sig_text(method_name, params, return_type)

    if m is Mechanism.EXTENDED_GENERATION_GAP:
        iface = [f"interface {n}Base {{", f"    {sig_text};", "}"]
        impl = [f"class {n}Impl extends {n}BaseImpl {{"]
        impl.extend(_method_lines(sig_text, body_src))
        impl.append("}")
        return Scaffold.of(_checked_file(f"hand/{n}Base.moo", iface),
                           _checked_file(f"hand/{n}Impl.moo", impl))
    if m is Mechanism.INCLUDE:
        api = [f"{sig_text};"]
        extra = _method_lines(sig_text, body_src, depth=0)
        return Scaffold.of(ScaffoldFile(f"hand/{n}_api.inc",
                                        "\n".join(api) + "\n"),
                           ScaffoldFile(f"hand/{n}_extra.inc",
                                        "\n".join(extra) + "\n"))
    if m is Mechanism.PARTIAL_CLASSES:
        iface = [f"partial interface {n} {{", f"    {sig_text};", "}"]
        impl = [f"partial class {n}Impl {{"]
        impl.extend(_method_lines(sig_text, body_src))
        impl.append("}")
        return Scaffold.of(_checked_file(f"hand/{n}_api.moo", iface),
                           _checked_file(f"hand/{n}Impl_extension.moo", impl))
    if m is Mechanism.AOP:
        aspect = f"Extend_{n}_{method_name}"
        lines = [f"aspect {aspect} {{",
                 f"    introduce {n} {{",
                 f"        {sig_text};",
                 "    }",
                 f"    introduce {n}Impl {{"]
        lines.extend(_method_lines(sig_text, body_src, depth=2))
        lines.append("    }")
        lines.append("}")
        return Scaffold.of(ScaffoldFile(f"aspects/{aspect}.asp",
                                        "\n".join(lines) + "\n"))
    if m is Mechanism.PART_MERGER:
        iface = [f"interface {n} {{", f"    {sig_text};", "}"]
        impl = [f"class {n}Impl implements {n} {{"]
        impl.extend(_method_lines(sig_text, body_src))
        impl.append("}")
        return Scaffold.of(_checked_file(f"hand/{n}.moo", iface),
                           _checked_file(f"hand/{n}Impl.moo", impl))
    if m is Mechanism.PROTECTED_REGIONS:
        method_lines = tuple(_method_lines(sig_text, body_src))
        return Scaffold(True, None, (), (
            RegionEdit(f"gen/{n}.moo", interface_members_region_id(n),
                       (f"    {sig_text};",)),
            RegionEdit(f"gen/{n}Impl.moo", impl_members_region_id(n),
                       method_lines),
        ))
    if m is Mechanism.GENERATION_GAP:
        return Scaffold.unsupported(
            "the generated interface does not pick up handwritten additions; "
            "clients typed by it cannot call them")
    if m is Mechanism.DELEGATION:
        return Scaffold.unsupported(
            "the generated delegator forwards only the modeled signatures; "
            "extensions on the delegate stay invisible through the generated "
            "interface")
    raise WeldError("UNKNOWN_MECHANISM", f"no extension scaffold for {m}")


def scaffold_baseline(ws: Workspace, m: Mechanism | None = None,
                      body_overrides: dict[str, str] | None = None
                      ) -> tuple[ScaffoldFile, ...]:
    """The handwritten artifacts a mechanism needs before it links at all:
    the mandatory impl subclass for the generation gap, the delegate impl
    for delegation. Empty for every other mechanism.

    `body_overrides` maps method names to replacement body source in the
    delegate impl."""
    m = m or ws.mechanism
    model = ws.read_model()
    overrides = body_overrides or {}
    files: list[ScaffoldFile] = []
    if m is Mechanism.GENERATION_GAP:
        for c in model.classes:
            lines = [f"class {c.name}Impl extends {c.name}BaseImpl {{", "}"]
            files.append(_checked_file(f"hand/{c.name}Impl.moo", lines))
    elif m is Mechanism.DELEGATION:
        for c in model.classes:
            lines = [f"class {c.name}DelegateImpl implements {c.name}Delegate {{"]
            for sig in c.methods:
                sig_text = _sig_text(
                    sig.name, tuple((p.name, p.type) for p in sig.params),
                    sig.return_type)
                body = overrides.get(sig.name)
                if body is None:
                    stmts = _default_body(sig.return_type)
                    body = "\n".join(
                        ln.strip() for s in stmts for ln in format_stmt(s, 0))
                if body:
                    lines.extend(_method_lines(sig_text, body))
                else:
                    lines.append(f"    {sig_text} {{")
                    lines.append("    }")
            lines.append("}")
            files.append(_checked_file(f"hand/{c.name}DelegateImpl.moo", lines))
    return tuple(files)
