"""Static resolver for linked MiniOOP programs.

Checks, in order: top-level name uniqueness, profile licensing of non-core
constructs, supertype existence and kind, inheritance cycles, member-name
uniqueness, bodiless methods in concrete classes, declared type names, and
method-call resolution for receivers with a statically known type (`this`,
parameters, let bindings, typed fields, `new`, and chained call results).
Checking is receiver-type-local; there is no flow analysis.
"""

from __future__ import annotations

from ..errors import Diagnostic
from . import ast
from .profile import LanguageProfile


def resolve_program(units: list[ast.Unit],
                    profile: LanguageProfile) -> list[Diagnostic]:
    return _Resolver(units, profile).run()


class _Resolver:
    def __init__(self, units: list[ast.Unit], profile: LanguageProfile):
        self.units = units
        self.profile = profile
        self.diags: list[Diagnostic] = []
        self.decls: dict[str, ast.Decl] = {}
        self.decl_paths: dict[str, str] = {}

    def diag(self, code: str, message: str, path: str, node: ast.Node) -> None:
        self.diags.append(Diagnostic(code, message, path, node.line, node.col))

    def run(self) -> list[Diagnostic]:
        self.collect_decls()
        for unit in self.units:
            for d in unit.decls:
                self.check_decl(unit.path, d)
        return self.diags

    # -- tables ----------------------------------------------------------

    def collect_decls(self) -> None:
        for unit in self.units:
            for d in unit.decls:
                name = d.name  # type: ignore[attr-defined]
                if name in self.decls:
                    self.diag("DUPLICATE_DECL",
                              f"top-level declaration {name!r} already defined "
                              f"in {self.decl_paths[name]}",
                              unit.path, d)
                else:
                    self.decls[name] = d
                    self.decl_paths[name] = unit.path

    def class_chain(self, name: str) -> list[ast.ClassDecl]:
        """Class and its ancestors, nearest first. Stops at cycles or gaps."""
        chain: list[ast.ClassDecl] = []
        seen: set[str] = set()
        cur: str | None = name
        while cur is not None and cur not in seen:
            seen.add(cur)
            d = self.decls.get(cur)
            if not isinstance(d, ast.ClassDecl):
                break
            chain.append(d)
            cur = d.extends
        return chain

    def iface_closure(self, name: str) -> list[ast.InterfaceDecl]:
        out: list[ast.InterfaceDecl] = []
        seen: set[str] = set()
        stack = [name]
        while stack:
            cur = stack.pop(0)
            if cur in seen:
                continue
            seen.add(cur)
            d = self.decls.get(cur)
            if isinstance(d, ast.InterfaceDecl):
                out.append(d)
                stack.extend(d.extends)
        return out

    def lookup_method(self, type_name: str, method: str) -> ast.MethodDecl | None:
        d = self.decls.get(type_name)
        if isinstance(d, ast.ClassDecl):
            for cls in self.class_chain(type_name):
                for m in cls.members:
                    if isinstance(m, ast.MethodDecl) and m.name == method:
                        return m
            return None
        if isinstance(d, ast.InterfaceDecl):
            for iface in self.iface_closure(type_name):
                for m in iface.members:
                    if isinstance(m, ast.MethodDecl) and m.name == method:
                        return m
        return None

    def lookup_field(self, type_name: str, field: str) -> ast.FieldDecl | None:
        for cls in self.class_chain(type_name):
            for m in cls.members:
                if isinstance(m, ast.FieldDecl) and m.name == field:
                    return m
        return None

    def type_known(self, name: str) -> bool:
        return name in ast.BUILTIN_TYPES or name in self.decls

    # -- declaration checks ------------------------------------------------

    def check_decl(self, path: str, d: ast.Decl) -> None:
        if isinstance(d, ast.AspectDecl):
            if not self.profile.aspects:
                self.diag("PROFILE_VIOLATION",
                          f"aspect {d.name!r} requires the aspects flag", path, d)
            return
        if isinstance(d, ast.ClassDecl):
            if d.is_partial and not self.profile.partial_classes:
                self.diag("PROFILE_VIOLATION",
                          f"partial class {d.name!r} requires the partial_classes flag",
                          path, d)
            self.check_supertypes(path, d)
            self.check_members(path, d, in_interface=False)
            self.check_bodies(path, d)
        elif isinstance(d, ast.InterfaceDecl):
            if d.is_partial and not self.profile.partial_interfaces:
                self.diag("PROFILE_VIOLATION",
                          f"partial interface {d.name!r} requires the "
                          "partial_interfaces flag", path, d)
            self.check_supertypes(path, d)
            self.check_members(path, d, in_interface=True)

    def check_supertypes(self, path: str, d: ast.Decl) -> None:
        if isinstance(d, ast.ClassDecl):
            if d.extends is not None:
                sup = self.decls.get(d.extends)
                if not isinstance(sup, ast.ClassDecl):
                    self.diag("UNKNOWN_TYPE",
                              f"{d.extends!r} is not a known class", path, d)
                else:
                    self.check_class_cycle(path, d)
            for iname in d.implements:
                if not isinstance(self.decls.get(iname), ast.InterfaceDecl):
                    self.diag("UNKNOWN_TYPE",
                              f"{iname!r} is not a known interface", path, d)
        elif isinstance(d, ast.InterfaceDecl):
            for iname in d.extends:
                if not isinstance(self.decls.get(iname), ast.InterfaceDecl):
                    self.diag("UNKNOWN_TYPE",
                              f"{iname!r} is not a known interface", path, d)
            self.check_iface_cycle(path, d)

    def check_class_cycle(self, path: str, d: ast.ClassDecl) -> None:
        seen = {d.name}
        cur = d.extends
        trail = [d.name]
        while cur is not None:
            trail.append(cur)
            if cur in seen:
                self.diag("CYCLE",
                          "inheritance cycle: " + " -> ".join(trail), path, d)
                return
            seen.add(cur)
            nxt = self.decls.get(cur)
            cur = nxt.extends if isinstance(nxt, ast.ClassDecl) else None

    def check_iface_cycle(self, path: str, d: ast.InterfaceDecl) -> None:
        # DFS from d looking for a path back to d
        stack = list(d.extends)
        seen: set[str] = set()
        while stack:
            cur = stack.pop()
            if cur == d.name:
                self.diag("CYCLE",
                          f"interface extension cycle through {d.name!r}", path, d)
                return
            if cur in seen:
                continue
            seen.add(cur)
            nxt = self.decls.get(cur)
            if isinstance(nxt, ast.InterfaceDecl):
                stack.extend(nxt.extends)

    def check_members(self, path: str, d, in_interface: bool) -> None:
        seen: dict[str, ast.Member] = {}
        for m in d.members:
            if isinstance(m, ast.IncludeDirective):
                if not self.profile.includes:
                    self.diag("PROFILE_VIOLATION",
                              "include directive requires the includes flag",
                              path, m)
                elif in_interface and not self.profile.include_in_interface:
                    self.diag("PROFILE_VIOLATION",
                              "include directive inside an interface requires "
                              "the include_in_interface flag", path, m)
                continue
            name = m.name  # type: ignore[attr-defined]
            if name in seen:
                self.diag("DUPLICATE_MEMBER",
                          f"member {name!r} already declared in {d.name!r}",
                          path, m)
            else:
                seen[name] = m
            if isinstance(m, ast.FieldDecl):
                if not self.type_known(m.type):
                    self.diag("UNKNOWN_TYPE", f"unknown type {m.type!r}", path, m)
            elif isinstance(m, ast.MethodDecl):
                pseen: set[str] = set()
                for p in m.params:
                    if p.name in pseen:
                        self.diag("DUPLICATE_MEMBER",
                                  f"duplicate parameter {p.name!r}", path, p)
                    pseen.add(p.name)
                    if not self.type_known(p.type):
                        self.diag("UNKNOWN_TYPE", f"unknown type {p.type!r}",
                                  path, p)
                if not self.type_known(m.return_type):
                    self.diag("UNKNOWN_TYPE",
                              f"unknown type {m.return_type!r}", path, m)

    def check_bodies(self, path: str, d: ast.ClassDecl) -> None:
        for m in d.members:
            if isinstance(m, ast.MethodDecl):
                if m.body is None:
                    if not d.is_abstract:
                        self.diag("ABSTRACT_MEMBER",
                                  f"bodiless method {m.name!r} in concrete "
                                  f"class {d.name!r}", path, m)
                else:
                    env = {p.name: p.type for p in m.params}
                    for s in m.body:
                        self.check_stmt(path, d.name, s, env)
            elif isinstance(m, ast.FieldDecl) and m.init is not None:
                self.infer(path, d.name, m.init)

    # -- statement / expression checks ------------------------------------

    def check_stmt(self, path: str, cls: str, s: ast.Stmt,
                   env: dict[str, str]) -> None:
        if isinstance(s, ast.LetStmt):
            if not self.type_known(s.type):
                self.diag("UNKNOWN_TYPE", f"unknown type {s.type!r}", path, s)
            self._infer(path, cls, s.init, env)
            env[s.name] = s.type
        elif isinstance(s, ast.AssignStmt):
            self._infer(path, cls, s.value, env)
        elif isinstance(s, ast.FieldAssignStmt):
            self._infer(path, cls, s.obj, env)
            self._infer(path, cls, s.value, env)
        elif isinstance(s, ast.ReturnStmt):
            if s.value is not None:
                self._infer(path, cls, s.value, env)
        elif isinstance(s, ast.ExprStmt):
            self._infer(path, cls, s.expr, env)

    def infer(self, path: str, cls: str, e: ast.Expr,
              env: dict[str, str] | None = None) -> str | None:
        """Best-effort static type of `e`; None when unknown (e.g. null)."""
        return self._infer(path, cls, e, env if env is not None else {})

    def _infer(self, path: str, cls: str, e: ast.Expr,
               env: dict[str, str]) -> str | None:
        if isinstance(e, ast.StringLit):
            return "String"
        if isinstance(e, ast.IntLit):
            return "Int"
        if isinstance(e, ast.BoolLit):
            return "Bool"
        if isinstance(e, ast.NullLit):
            return None
        if isinstance(e, ast.ThisExpr):
            return cls
        if isinstance(e, ast.VarRef):
            return env.get(e.name)
        if isinstance(e, ast.NewObject):
            d = self.decls.get(e.class_name)
            if d is None:
                self.diag("UNKNOWN_TYPE",
                          f"unknown class {e.class_name!r}", path, e)
                return None
            if not isinstance(d, ast.ClassDecl) or d.is_abstract:
                self.diag("ABSTRACT_NEW",
                          f"{e.class_name!r} is not a concrete class", path, e)
                return None
            return e.class_name
        if isinstance(e, ast.Add):
            lt = self._infer(path, cls, e.left, env)
            rt = self._infer(path, cls, e.right, env)
            if lt == rt and lt in ("String", "Int"):
                return lt
            return None
        if isinstance(e, ast.FieldAccess):
            rt = self._infer(path, cls, e.obj, env)
            if rt is None or rt in ast.BUILTIN_TYPES or rt not in self.decls:
                return None
            f = self.lookup_field(rt, e.field_name)
            return f.type if f is not None else None
        if isinstance(e, ast.MethodCall):
            rt = self._infer(path, cls, e.receiver, env)
            for a in e.args:
                self._infer(path, cls, a, env)
            if rt is None:
                return None
            if rt in ast.BUILTIN_TYPES:
                self.diag("UNRESOLVED_CALL",
                          f"no method {e.method!r} on builtin type {rt!r}",
                          path, e)
                return None
            if rt not in self.decls:
                return None  # receiver type already diagnosed where declared
            m = self.lookup_method(rt, e.method)
            if m is None:
                self.diag("UNRESOLVED_CALL",
                          f"method {e.method!r} is not a member of {rt!r}",
                          path, e)
                return None
            return m.return_type
        raise TypeError(f"unknown expression node {e!r}")
