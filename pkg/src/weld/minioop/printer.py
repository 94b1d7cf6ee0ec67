"""Canonical MiniOOP printer: fixed indentation, one member per line.

`parse_unit(print_unit(u))` reconstructs `u`, and printing is a fixed point
after one round trip.
"""

from __future__ import annotations

from . import ast

INDENT = "    "

_PREC_ADD = 1
_PREC_POSTFIX = 2


def _escape(s: str) -> str:
    out = s.replace("\\", "\\\\").replace('"', '\\"')
    return out.replace("\n", "\\n").replace("\t", "\\t")


def format_expr(e: ast.Expr, min_prec: int = 0) -> str:
    if isinstance(e, ast.StringLit):
        return f'"{_escape(e.value)}"'
    if isinstance(e, ast.IntLit):
        return str(e.value)
    if isinstance(e, ast.BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, ast.NullLit):
        return "null"
    if isinstance(e, ast.ThisExpr):
        return "this"
    if isinstance(e, ast.VarRef):
        return e.name
    if isinstance(e, ast.NewObject):
        return f"new {e.class_name}()"
    if isinstance(e, ast.FieldAccess):
        return f"{format_expr(e.obj, _PREC_POSTFIX)}.{e.field_name}"
    if isinstance(e, ast.MethodCall):
        args = ", ".join(format_expr(a) for a in e.args)
        return f"{format_expr(e.receiver, _PREC_POSTFIX)}.{e.method}({args})"
    if isinstance(e, ast.Add):
        # left-associative: the right operand needs parens when it is an Add
        text = f"{format_expr(e.left, _PREC_ADD)} + {format_expr(e.right, _PREC_ADD + 1)}"
        return f"({text})" if min_prec > _PREC_ADD else text
    raise TypeError(f"unknown expression node {e!r}")


def format_stmt(s: ast.Stmt, depth: int) -> list[str]:
    pad = INDENT * depth
    if isinstance(s, ast.LetStmt):
        return [f"{pad}let {s.name}: {s.type} = {format_expr(s.init)};"]
    if isinstance(s, ast.AssignStmt):
        return [f"{pad}{s.name} = {format_expr(s.value)};"]
    if isinstance(s, ast.FieldAssignStmt):
        target = f"{format_expr(s.obj, _PREC_POSTFIX)}.{s.field_name}"
        return [f"{pad}{target} = {format_expr(s.value)};"]
    if isinstance(s, ast.ReturnStmt):
        if s.value is None:
            return [f"{pad}return;"]
        return [f"{pad}return {format_expr(s.value)};"]
    if isinstance(s, ast.ExprStmt):
        return [f"{pad}{format_expr(s.expr)};"]
    raise TypeError(f"unknown statement node {s!r}")


def format_sig(m: ast.MethodDecl) -> str:
    params = ", ".join(f"{p.name}: {p.type}" for p in m.params)
    return f"method {m.name}({params}): {m.return_type}"


def format_member(m: ast.Member, depth: int) -> list[str]:
    pad = INDENT * depth
    if isinstance(m, ast.FieldDecl):
        if m.init is None:
            return [f"{pad}field {m.name}: {m.type};"]
        return [f"{pad}field {m.name}: {m.type} = {format_expr(m.init)};"]
    if isinstance(m, ast.MethodDecl):
        if m.body is None:
            return [f"{pad}{format_sig(m)};"]
        lines = [f"{pad}{format_sig(m)} {{"]
        for s in m.body:
            lines.extend(format_stmt(s, depth + 1))
        lines.append(f"{pad}}}")
        return lines
    if isinstance(m, ast.IncludeDirective):
        return [f'{pad}include "{_escape(m.path)}";']
    raise TypeError(f"unknown member node {m!r}")


def _class_header(d: ast.ClassDecl) -> str:
    parts = []
    if d.is_abstract:
        parts.append("abstract")
    if d.is_partial:
        parts.append("partial")
    parts.append(f"class {d.name}")
    if d.extends:
        parts.append(f"extends {d.extends}")
    if d.implements:
        parts.append("implements " + ", ".join(d.implements))
    return " ".join(parts)


def _interface_header(d: ast.InterfaceDecl) -> str:
    parts = []
    if d.is_partial:
        parts.append("partial")
    parts.append(f"interface {d.name}")
    if d.extends:
        parts.append("extends " + ", ".join(d.extends))
    return " ".join(parts)


def format_decl(d: ast.Decl) -> list[str]:
    if isinstance(d, ast.ClassDecl):
        lines = [f"{_class_header(d)} {{"]
        for m in d.members:
            lines.extend(format_member(m, 1))
        lines.append("}")
        return lines
    if isinstance(d, ast.InterfaceDecl):
        lines = [f"{_interface_header(d)} {{"]
        for m in d.members:
            lines.extend(format_member(m, 1))
        lines.append("}")
        return lines
    if isinstance(d, ast.AspectDecl):
        lines = [f"aspect {d.name} {{"]
        for adv in d.advices:
            lines.append(f"{INDENT}{adv.kind} {adv.target_class}.{adv.target_method}() {{")
            for s in adv.body:
                lines.extend(format_stmt(s, 2))
            lines.append(f"{INDENT}}}")
        for intro in d.introductions:
            lines.append(f"{INDENT}introduce {intro.target_type} {{")
            for m in intro.added_members:
                lines.extend(format_member(m, 2))
            lines.append(f"{INDENT}}}")
        lines.append("}")
        return lines
    raise TypeError(f"unknown declaration node {d!r}")


def print_unit(unit: ast.Unit) -> str:
    if not unit.decls:
        return ""
    blocks = ["\n".join(format_decl(d)) for d in unit.decls]
    return "\n\n".join(blocks) + "\n"
