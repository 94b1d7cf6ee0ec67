"""Seeded random generators for round-trip and merge-oracle tests.

Everything is driven by an explicit random.Random so test loops are
deterministic and reproducible from a single integer seed.
"""

from __future__ import annotations

import random

from weld.minioop import ast

TYPE_POOL = ("String", "Int", "Bool", "void", "Widget", "Gadget", "Holder")
STRING_CHARS = 'abc xyz0"\\\n\t!.'
PATH_CHARS = "abcdefg0123"


class Namer:
    def __init__(self) -> None:
        self.counter = 0

    def fresh(self, prefix: str) -> str:
        self.counter += 1
        return f"{prefix}{self.counter}"


def string_value(rng: random.Random) -> str:
    return "".join(rng.choice(STRING_CHARS) for _ in range(rng.randint(0, 6)))


def random_expr(rng: random.Random, namer: Namer, depth: int = 2) -> ast.Expr:
    leaves = ("string", "int", "bool", "null", "this", "var")
    inner = ("field", "call", "add", "new")
    kind = rng.choice(leaves if depth <= 0 else leaves + inner)
    if kind == "string":
        return ast.StringLit(string_value(rng))
    if kind == "int":
        return ast.IntLit(rng.randint(0, 999))
    if kind == "bool":
        return ast.BoolLit(rng.random() < 0.5)
    if kind == "null":
        return ast.NullLit()
    if kind == "this":
        return ast.ThisExpr()
    if kind == "var":
        return ast.VarRef(namer.fresh("v"))
    if kind == "field":
        return ast.FieldAccess(random_expr(rng, namer, depth - 1),
                               namer.fresh("f"))
    if kind == "call":
        args = tuple(random_expr(rng, namer, depth - 1)
                     for _ in range(rng.randint(0, 2)))
        return ast.MethodCall(random_expr(rng, namer, depth - 1),
                              namer.fresh("m"), args)
    if kind == "add":
        return ast.Add(random_expr(rng, namer, depth - 1),
                       random_expr(rng, namer, depth - 1))
    return ast.NewObject(namer.fresh("Cls"))


def random_stmt(rng: random.Random, namer: Namer) -> ast.Stmt:
    kind = rng.choice(("let", "assign", "fieldassign", "return", "expr"))
    if kind == "let":
        return ast.LetStmt(namer.fresh("v"), rng.choice(TYPE_POOL),
                           random_expr(rng, namer))
    if kind == "assign":
        return ast.AssignStmt(namer.fresh("v"), random_expr(rng, namer))
    if kind == "fieldassign":
        return ast.FieldAssignStmt(random_expr(rng, namer, 1),
                                   namer.fresh("f"), random_expr(rng, namer))
    if kind == "return":
        if rng.random() < 0.3:
            return ast.ReturnStmt(None)
        return ast.ReturnStmt(random_expr(rng, namer))
    return ast.ExprStmt(random_expr(rng, namer))


def random_block(rng: random.Random, namer: Namer) -> ast.Block:
    return tuple(random_stmt(rng, namer) for _ in range(rng.randint(0, 3)))


def random_params(rng: random.Random, namer: Namer) -> tuple[ast.Param, ...]:
    return tuple(ast.Param(namer.fresh("p"), rng.choice(TYPE_POOL))
                 for _ in range(rng.randint(0, 3)))


def random_method(rng: random.Random, namer: Namer,
                  bodiless: bool = False) -> ast.MethodDecl:
    body = None if (bodiless or rng.random() < 0.3) else random_block(rng, namer)
    return ast.MethodDecl(namer.fresh("m"), random_params(rng, namer),
                          rng.choice(TYPE_POOL), body)


def random_field(rng: random.Random, namer: Namer) -> ast.FieldDecl:
    init = random_expr(rng, namer) if rng.random() < 0.5 else None
    return ast.FieldDecl(namer.fresh("f"), rng.choice(TYPE_POOL), init)


def random_include(rng: random.Random) -> ast.IncludeDirective:
    segments = ["".join(rng.choice(PATH_CHARS) for _ in range(rng.randint(1, 5)))
                for _ in range(rng.randint(1, 2))]
    return ast.IncludeDirective("/".join(segments) + ".inc")


def random_class(rng: random.Random, namer: Namer) -> ast.ClassDecl:
    members: list[ast.Member] = []
    for _ in range(rng.randint(0,  4)):
        roll = rng.random()
        if roll < 0.4:
            members.append(random_field(rng, namer))
        elif roll < 0.9:
            members.append(random_method(rng, namer))
        else:
            members.append(random_include(rng))
    extends = namer.fresh("Cls") if rng.random() < 0.4 else None
    implements = tuple(namer.fresh("If") for _ in range(rng.randint(0, 2)))
    return ast.ClassDecl(namer.fresh("Cls"), tuple(members),
                         is_abstract=rng.random() < 0.3,
                         is_partial=rng.random() < 0.3,
                         extends=extends, implements=implements)


def random_interface(rng: random.Random, namer: Namer) -> ast.InterfaceDecl:
    members: list[ast.Member] = []
    for _ in range(rng.randint(0, 4)):
        if rng.random() < 0.8:
            members.append(random_method(rng, namer, bodiless=True))
        else:
            members.append(random_include(rng))
    extends = tuple(namer.fresh("If") for _ in range(rng.randint(0, 2)))
    return ast.InterfaceDecl(namer.fresh("If"), tuple(members),
                             is_partial=rng.random() < 0.3, extends=extends)


def random_aspect(rng: random.Random, namer: Namer) -> ast.AspectDecl:
    advices = tuple(
        ast.Advice(rng.choice(("before", "after", "around")),
                   namer.fresh("Cls"), namer.fresh("m"),
                   random_block(rng, namer))
        for _ in range(rng.randint(0, 2)))
    intros = tuple(
        ast.Introduction(namer.fresh("Cls"),
                         tuple(random_method(rng, namer)
                               for _ in range(rng.randint(1, 2))))
        for _ in range(rng.randint(0, 2)))
    return ast.AspectDecl(namer.fresh("Asp"), advices, intros)


def random_unit(seed: int) -> ast.Unit:
    rng = random.Random(seed)
    namer = Namer()
    decls: list[ast.Decl] = []
    for _ in range(rng.randint(0, 4)):
        roll = rng.random()
        if roll < 0.5:
            decls.append(random_class(rng, namer))
        elif roll < 0.85:
            decls.append(random_interface(rng, namer))
        else:
            decls.append(random_aspect(rng, namer))
    return ast.Unit(f"random/u{seed}.moo", tuple(decls), ast.ORIGIN_HANDWRITTEN)


def random_partial_pair(seed: int) -> tuple[ast.Unit, ast.Unit, str]:
    """Two partial parts of one class with disjoint member names: a generated
    part and a handwritten part. Returns (gen_unit, hand_unit, class_name)."""
    rng = random.Random(seed)
    name = f"Part{seed}"

    def members(prefix: str) -> tuple[ast.Member, ...]:
        out: list[ast.Member] = []
        for i in range(rng.randint(0, 4)):
            if rng.random() < 0.4:
                out.append(ast.FieldDecl(f"{prefix}f{i}", "Int", None))
            else:
                out.append(ast.MethodDecl(f"{prefix}m{i}", (), "Int",
                                          (ast.ReturnStmt(ast.IntLit(i)),)))
        return tuple(out)

    gen_decl = ast.ClassDecl(name, members("g"), is_partial=True,
                             implements=("IfaceA",))
    hand_decl = ast.ClassDecl(name, members("h"), is_partial=True,
                              implements=("IfaceB",))
    gen = ast.Unit(f"gen/{name}.moo", (gen_decl,), ast.ORIGIN_GENERATED)
    hand = ast.Unit(f"hand/{name}.moo", (hand_decl,), ast.ORIGIN_HANDWRITTEN)
    return gen, hand, name
