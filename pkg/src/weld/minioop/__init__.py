"""MiniOOP: the small object language every generation strategy targets.

Grammar, AST, parser, canonical printer, language profiles, and a static
resolver. Files use the `.moo` extension.
"""

from .ast import (
    Add,
    Advice,
    AspectDecl,
    AssignStmt,
    Block,
    BoolLit,
    BUILTIN_TYPES,
    ClassDecl,
    Decl,
    ExprStmt,
    Expr,
    FieldAccess,
    FieldAssignStmt,
    FieldDecl,
    IncludeDirective,
    IntLit,
    InterfaceDecl,
    Introduction,
    LetStmt,
    Member,
    MethodCall,
    MethodDecl,
    NewObject,
    NullLit,
    ORIGIN_GENERATED,
    ORIGIN_HANDWRITTEN,
    ORIGIN_LINKED,
    Param,
    RESERVED_SUFFIX,
    ReturnStmt,
    Stmt,
    StringLit,
    ThisExpr,
    Unit,
    VarRef,
)
from .parser import parse_expr, parse_members, parse_unit
from .printer import format_decl, format_expr, format_member, format_sig, format_stmt, print_unit
from .profile import CORE_PROFILE, PROFILE_FLAGS, LanguageProfile
from .resolver import resolve_program

__all__ = [
    "Add", "Advice", "AspectDecl", "AssignStmt", "Block", "BoolLit",
    "BUILTIN_TYPES", "ClassDecl", "CORE_PROFILE", "Decl", "Expr", "ExprStmt",
    "FieldAccess", "FieldAssignStmt", "FieldDecl", "IncludeDirective",
    "IntLit", "InterfaceDecl", "Introduction", "LanguageProfile", "LetStmt",
    "Member", "MethodCall", "MethodDecl", "NewObject", "NullLit",
    "ORIGIN_GENERATED", "ORIGIN_HANDWRITTEN", "ORIGIN_LINKED", "Param",
    "PROFILE_FLAGS", "RESERVED_SUFFIX", "ReturnStmt", "Stmt", "StringLit",
    "ThisExpr", "Unit", "VarRef",
    "format_decl", "format_expr", "format_member", "format_sig",
    "format_stmt", "parse_expr", "parse_members", "parse_unit", "print_unit",
    "resolve_program",
]
