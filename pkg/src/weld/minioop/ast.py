"""MiniOOP abstract syntax.

All nodes are frozen dataclasses. Source positions are carried for
diagnostics but excluded from equality, so a printed-and-reparsed tree
compares equal to the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field

ORIGIN_GENERATED = "generated"
ORIGIN_HANDWRITTEN = "handwritten"
ORIGIN_LINKED = "linked"

BUILTIN_TYPES = frozenset({"String", "Int", "Bool", "void"})

RESERVED_SUFFIX = "$orig"


@dataclass(frozen=True)
class Node:
    line: int = field(default=0, compare=False, repr=False, kw_only=True)
    col: int = field(default=0, compare=False, repr=False, kw_only=True)


# --- expressions -------------------------------------------------------


@dataclass(frozen=True)
class Expr(Node):
    pass


@dataclass(frozen=True)
class StringLit(Expr):
    value: str


@dataclass(frozen=True)
class IntLit(Expr):
    value: int


@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool


@dataclass(frozen=True)
class NullLit(Expr):
    pass


@dataclass(frozen=True)
class ThisExpr(Expr):
    pass


@dataclass(frozen=True)
class VarRef(Expr):
    name: str


@dataclass(frozen=True)
class FieldAccess(Expr):
    obj: Expr
    field_name: str


@dataclass(frozen=True)
class NewObject(Expr):
    class_name: str


@dataclass(frozen=True)
class MethodCall(Expr):
    receiver: Expr
    method: str
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class Add(Expr):
    """`+` on two Strings (concatenation) or two Ints (addition)."""

    left: Expr
    right: Expr


# --- statements --------------------------------------------------------


@dataclass(frozen=True)
class Stmt(Node):
    pass


@dataclass(frozen=True)
class LetStmt(Stmt):
    name: str
    type: str
    init: Expr


@dataclass(frozen=True)
class AssignStmt(Stmt):
    name: str
    value: Expr


@dataclass(frozen=True)
class FieldAssignStmt(Stmt):
    obj: Expr
    field_name: str
    value: Expr


@dataclass(frozen=True)
class ReturnStmt(Stmt):
    value: Expr | None


@dataclass(frozen=True)
class ExprStmt(Stmt):
    expr: Expr


Block = tuple[Stmt, ...]


# --- members -----------------------------------------------------------


@dataclass(frozen=True)
class Member(Node):
    pass


@dataclass(frozen=True)
class Param(Node):
    name: str
    type: str


@dataclass(frozen=True)
class FieldDecl(Member):
    name: str
    type: str
    init: Expr | None = None


@dataclass(frozen=True)
class MethodDecl(Member):
    """A method. ``body is None`` means a bodiless signature, legal only in
    interfaces and abstract classes."""

    name: str
    params: tuple[Param, ...]
    return_type: str
    body: Block | None = None


@dataclass(frozen=True)
class IncludeDirective(Member):
    path: str  # workspace-relative


# --- declarations ------------------------------------------------------


@dataclass(frozen=True)
class Decl(Node):
    pass


@dataclass(frozen=True)
class ClassDecl(Decl):
    name: str
    members: tuple[Member, ...] = ()
    is_abstract: bool = False
    is_partial: bool = False
    extends: str | None = None
    implements: tuple[str, ...] = ()


@dataclass(frozen=True)
class InterfaceDecl(Decl):
    """Interfaces carry method signatures and include directives only."""

    name: str
    members: tuple[Member, ...] = ()
    is_partial: bool = False
    extends: tuple[str, ...] = ()


@dataclass(frozen=True)
class Advice(Node):
    kind: str  # before | after | around — determines weaving position
    target_class: str
    target_method: str
    body: Block


@dataclass(frozen=True)
class Introduction(Node):
    """Members grafted onto a named type: signatures for interfaces, full
    methods for classes."""

    target_type: str
    added_members: tuple[Member, ...]


@dataclass(frozen=True)
class AspectDecl(Decl):
    name: str
    advices: tuple[Advice, ...] = ()
    introductions: tuple[Introduction, ...] = ()


@dataclass(frozen=True)
class Unit:
    """One compilation unit: the parsed contents of a single file."""

    path: str  # workspace-relative
    decls: tuple[Decl, ...]
    origin: str = ORIGIN_HANDWRITTEN
