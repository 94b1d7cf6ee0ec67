"""Recursive-descent parser for MiniOOP units, member lists and expressions."""

from __future__ import annotations

from ..errors import ParseError
from . import ast
from .lexer import Token, tokenize


class _Parser:
    def __init__(self, tokens: list[Token], path: str, allow_reserved: bool):
        self.toks = tokens
        self.pos = 0
        self.path = path
        self.allow_reserved = allow_reserved

    # -- token plumbing --------------------------------------------------

    def peek(self) -> Token:
        return self.toks[self.pos]

    def next(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.peek()
        return t.kind == kind and (text is None or t.text == text)

    def at_kw(self, *words: str) -> bool:
        t = self.peek()
        return t.kind == "kw" and t.text in words

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        if self.at(kind, text):
            return self.next()
        return None

    def expect(self, kind: str, text: str | None = None, what: str = "") -> Token:
        t = self.peek()
        if not self.at(kind, text):
            wanted = what or (text if text is not None else kind)
            got = t.text if t.kind != "eof" else "end of input"
            raise ParseError("SYNTAX", f"expected {wanted!r}, got {got!r}",
                             self.path, t.line, t.col)
        return self.next()

    def expect_id(self, what: str = "identifier") -> Token:
        t = self.peek()
        if t.kind != "id":
            got = t.text if t.kind != "eof" else "end of input"
            raise ParseError("SYNTAX", f"expected {what}, got {got!r}",
                             self.path, t.line, t.col)
        return self.next()

    def declared_name(self, what: str = "identifier") -> Token:
        t = self.expect_id(what)
        if t.text.endswith(ast.RESERVED_SUFFIX) and not self.allow_reserved:
            raise ParseError("RESERVED_NAME",
                             f"identifier {t.text!r} uses the reserved suffix "
                             f"{ast.RESERVED_SUFFIX!r}",
                             self.path, t.line, t.col)
        return t

    def error(self, code: str, message: str, tok: Token | None = None) -> ParseError:
        t = tok or self.peek()
        return ParseError(code, message, self.path, t.line, t.col)

    # -- declarations ----------------------------------------------------

    def parse_unit_decls(self) -> tuple[ast.Decl, ...]:
        decls = []
        while not self.at("eof"):
            decls.append(self.parse_decl())
        return tuple(decls)

    def parse_decl(self) -> ast.Decl:
        t = self.peek()
        if self.at_kw("abstract", "partial", "class"):
            return self.parse_class_or_interface()
        if self.at_kw("interface"):
            return self.parse_class_or_interface()
        if self.at_kw("aspect"):
            return self.parse_aspect()
        got = t.text if t.kind != "eof" else "end of input"
        raise self.error("SYNTAX", f"expected a declaration, got {got!r}")

    def parse_class_or_interface(self) -> ast.Decl:
        start = self.peek()
        is_abstract = self.accept("kw", "abstract") is not None
        is_partial = self.accept("kw", "partial") is not None
        if self.accept("kw", "interface"):
            if is_abstract:
                raise self.error("SYNTAX", "interfaces cannot be abstract", start)
            return self.parse_interface_rest(is_partial, start)
        self.expect("kw", "class")
        return self.parse_class_rest(is_abstract, is_partial, start)

    def parse_class_rest(self, is_abstract: bool, is_partial: bool,
                         start: Token) -> ast.ClassDecl:
        name = self.declared_name("class name")
        extends = None
        if self.accept("kw", "extends"):
            extends = self.expect_id("superclass name").text
        implements: list[str] = []
        if self.accept("kw", "implements"):
            implements.append(self.expect_id("interface name").text)
            while self.accept("punct", ","):
                implements.append(self.expect_id("interface name").text)
        self.expect("punct", "{")
        members = []
        while not self.at("punct", "}"):
            members.append(self.parse_member(in_interface=False))
        self.expect("punct", "}")
        return ast.ClassDecl(name.text, tuple(members), is_abstract, is_partial,
                             extends, tuple(implements),
                             line=start.line, col=start.col)

    def parse_interface_rest(self, is_partial: bool, start: Token) -> ast.InterfaceDecl:
        name = self.declared_name("interface name")
        extends: list[str] = []
        if self.accept("kw", "extends"):
            extends.append(self.expect_id("interface name").text)
            while self.accept("punct", ","):
                extends.append(self.expect_id("interface name").text)
        self.expect("punct", "{")
        members = []
        while not self.at("punct", "}"):
            members.append(self.parse_member(in_interface=True))
        self.expect("punct", "}")
        return ast.InterfaceDecl(name.text, tuple(members), is_partial,
                                 tuple(extends), line=start.line, col=start.col)

    # -- members ---------------------------------------------------------

    def parse_member(self, in_interface: bool) -> ast.Member:
        t = self.peek()
        if self.at_kw("field"):
            if in_interface:
                raise self.error("FIELD_IN_INTERFACE", "field in interface", t)
            return self.parse_field()
        if self.at_kw("method"):
            return self.parse_method(in_interface)
        if self.at_kw("include"):
            return self.parse_include()
        got = t.text if t.kind != "eof" else "end of input"
        raise self.error("SYNTAX", f"expected a member, got {got!r}")

    def parse_field(self) -> ast.FieldDecl:
        start = self.expect("kw", "field")
        name = self.declared_name("field name")
        self.expect("punct", ":")
        ftype = self.expect_id("type name").text
        init = None
        if self.accept("punct", "="):
            init = self.parse_expr()
        self.expect("punct", ";")
        return ast.FieldDecl(name.text, ftype, init, line=start.line, col=start.col)

    def parse_method(self, in_interface: bool) -> ast.MethodDecl:
        start = self.expect("kw", "method")
        name = self.declared_name("method name")
        self.expect("punct", "(")
        params: list[ast.Param] = []
        if not self.at("punct", ")"):
            params.append(self.parse_param())
            while self.accept("punct", ","):
                params.append(self.parse_param())
        self.expect("punct", ")")
        self.expect("punct", ":")
        ret = self.expect_id("return type").text
        body: ast.Block | None = None
        if self.at("punct", "{"):
            if in_interface:
                raise self.error("BODY_IN_INTERFACE", "method body in interface")
            body = self.parse_block()
        else:
            self.expect("punct", ";")
        return ast.MethodDecl(name.text, tuple(params), ret, body,
                              line=start.line, col=start.col)

    def parse_param(self) -> ast.Param:
        name = self.declared_name("parameter name")
        self.expect("punct", ":")
        ptype = self.expect_id("type name").text
        return ast.Param(name.text, ptype, line=name.line, col=name.col)

    def parse_include(self) -> ast.IncludeDirective:
        start = self.expect("kw", "include")
        t = self.peek()
        if t.kind != "string":
            raise self.error("SYNTAX", "expected a quoted path after 'include'")
        self.next()
        self.expect("punct", ";")
        return ast.IncludeDirective(t.text, line=start.line, col=start.col)

    # -- aspects ---------------------------------------------------------

    def parse_aspect(self) -> ast.AspectDecl:
        start = self.expect("kw", "aspect")
        name = self.declared_name("aspect name")
        self.expect("punct", "{")
        advices: list[ast.Advice] = []
        introductions: list[ast.Introduction] = []
        while not self.at("punct", "}"):
            if self.at_kw("before", "after", "around"):
                advices.append(self.parse_advice())
            elif self.at_kw("introduce"):
                introductions.append(self.parse_introduction())
            else:
                raise self.error("SYNTAX", "expected advice or 'introduce'")
        self.expect("punct", "}")
        return ast.AspectDecl(name.text, tuple(advices), tuple(introductions),
                              line=start.line, col=start.col)

    def parse_advice(self) -> ast.Advice:
        kind = self.next()  # before | after | around
        cls = self.expect_id("class name")
        self.expect("punct", ".")
        meth = self.expect_id("method name")
        self.expect("punct", "(")
        self.expect("punct", ")")
        body = self.parse_block()
        return ast.Advice(kind.text, cls.text, meth.text, body,
                          line=kind.line, col=kind.col)

    def parse_introduction(self) -> ast.Introduction:
        start = self.expect("kw", "introduce")
        target = self.expect_id("type name")
        self.expect("punct", "{")
        members: list[ast.Member] = []
        while not self.at("punct", "}"):
            if not self.at_kw("method"):
                raise self.error("SYNTAX", "introductions may contain only methods")
            members.append(self.parse_method(in_interface=False))
        self.expect("punct", "}")
        return ast.Introduction(target.text, tuple(members),
                                line=start.line, col=start.col)

    # -- statements ------------------------------------------------------

    def parse_block(self) -> ast.Block:
        self.expect("punct", "{")
        stmts = []
        while not self.at("punct", "}"):
            stmts.append(self.parse_stmt())
        self.expect("punct", "}")
        return tuple(stmts)

    def parse_stmt(self) -> ast.Stmt:
        t = self.peek()
        if self.at_kw("let"):
            self.next()
            name = self.declared_name("variable name")
            self.expect("punct", ":")
            vtype = self.expect_id("type name").text
            self.expect("punct", "=")
            init = self.parse_expr()
            self.expect("punct", ";")
            return ast.LetStmt(name.text, vtype, init, line=t.line, col=t.col)
        if self.at_kw("return"):
            self.next()
            if self.accept("punct", ";"):
                return ast.ReturnStmt(None, line=t.line, col=t.col)
            value = self.parse_expr()
            self.expect("punct", ";")
            return ast.ReturnStmt(value, line=t.line, col=t.col)
        expr = self.parse_expr()
        if self.accept("punct", "="):
            value = self.parse_expr()
            self.expect("punct", ";")
            if isinstance(expr, ast.VarRef):
                return ast.AssignStmt(expr.name, value, line=t.line, col=t.col)
            if isinstance(expr, ast.FieldAccess):
                return ast.FieldAssignStmt(expr.obj, expr.field_name, value,
                                           line=t.line, col=t.col)
            raise self.error("SYNTAX", "invalid assignment target", t)
        self.expect("punct", ";")
        return ast.ExprStmt(expr, line=t.line, col=t.col)

    # -- expressions -----------------------------------------------------

    def parse_expr(self) -> ast.Expr:
        left = self.parse_postfix()
        while self.at("punct", "+"):
            op = self.next()
            right = self.parse_postfix()
            left = ast.Add(left, right, line=op.line, col=op.col)
        return left

    def parse_postfix(self) -> ast.Expr:
        expr = self.parse_primary()
        while self.at("punct", "."):
            self.next()
            name = self.expect_id("member name")
            if self.accept("punct", "("):
                args: list[ast.Expr] = []
                if not self.at("punct", ")"):
                    args.append(self.parse_expr())
                    while self.accept("punct", ","):
                        args.append(self.parse_expr())
                self.expect("punct", ")")
                expr = ast.MethodCall(expr, name.text, tuple(args),
                                      line=name.line, col=name.col)
            else:
                expr = ast.FieldAccess(expr, name.text, line=name.line, col=name.col)
        return expr

    def parse_primary(self) -> ast.Expr:
        t = self.peek()
        if t.kind == "string":
            self.next()
            return ast.StringLit(t.text, line=t.line, col=t.col)
        if t.kind == "int":
            self.next()
            return ast.IntLit(int(t.text), line=t.line, col=t.col)
        if self.at_kw("true") or self.at_kw("false"):
            self.next()
            return ast.BoolLit(t.text == "true", line=t.line, col=t.col)
        if self.at_kw("null"):
            self.next()
            return ast.NullLit(line=t.line, col=t.col)
        if self.at_kw("this"):
            self.next()
            return ast.ThisExpr(line=t.line, col=t.col)
        if self.at_kw("new"):
            self.next()
            name = self.expect_id("class name")
            self.expect("punct", "(")
            self.expect("punct", ")")
            return ast.NewObject(name.text, line=t.line, col=t.col)
        if t.kind == "id":
            self.next()
            return ast.VarRef(t.text, line=t.line, col=t.col)
        if self.at("punct", "("):
            self.next()
            inner = self.parse_expr()
            self.expect("punct", ")")
            return inner
        got = t.text if t.kind != "eof" else "end of input"
        raise self.error("SYNTAX", f"expected an expression, got {got!r}")


def parse_unit(text: str, path: str, origin: str = ast.ORIGIN_HANDWRITTEN,
               allow_reserved: bool = False) -> ast.Unit:
    """Parse one MiniOOP file into a Unit. Comments are discarded."""
    p = _Parser(tokenize(text, path), path, allow_reserved)
    return ast.Unit(path, p.parse_unit_decls(), origin)


def parse_members(text: str, path: str,
                  allow_reserved: bool = False) -> tuple[ast.Member, ...]:
    """Parse a bare member list (the `.inc` file grammar)."""
    p = _Parser(tokenize(text, path), path, allow_reserved)
    members = []
    while not p.at("eof"):
        members.append(p.parse_member(in_interface=False))
    return tuple(members)


def parse_expr(text: str, path: str = "<entry>") -> ast.Expr:
    """Parse a standalone expression, e.g. a program entry."""
    p = _Parser(tokenize(text, path), path, allow_reserved=True)
    expr = p.parse_expr()
    if not p.at("eof"):
        t = p.peek()
        raise ParseError("SYNTAX", f"trailing input after expression: {t.text!r}",
                         path, t.line, t.col)
    return expr
