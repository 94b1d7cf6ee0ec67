"""Class-model input language (`.cdm`): parsing, validation, canonical printing.

A model declares classes with typed fields and method signatures — structure
and signatures only, no behavior. Builtin types are String, Int, Bool and
void; every other type name must be a declared class.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ModelError, ParseError
from .minioop.lexer import Token, tokenize

BUILTIN_TYPES = ("String", "Int", "Bool", "void")

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class FieldSpec:
    name: str
    type: str


@dataclass(frozen=True)
class Param:
    name: str
    type: str


@dataclass(frozen=True)
class MethodSig:
    name: str
    params: tuple[Param, ...]
    return_type: str


@dataclass(frozen=True)
class ClassSpec:
    name: str
    fields: tuple[FieldSpec, ...]
    methods: tuple[MethodSig, ...]


@dataclass(frozen=True)
class ClassModel:
    classes: tuple[ClassSpec, ...]

    def class_named(self, name: str) -> ClassSpec | None:
        for c in self.classes:
            if c.name == name:
                return c
        return None


class _ModelParser:
    def __init__(self, tokens: list[Token], path: str):
        self.toks = tokens
        self.pos = 0
        self.path = path

    def peek(self) -> Token:
        return self.toks[self.pos]

    def next(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.peek()
        return t.kind == kind and (text is None or t.text == text)

    def expect(self, kind: str, text: str | None = None, what: str = "") -> Token:
        t = self.peek()
        if not self.at(kind, text):
            wanted = what or (text if text is not None else kind)
            got = t.text if t.kind != "eof" else "end of input"
            raise ParseError("SYNTAX", f"expected {wanted!r}, got {got!r}",
                             self.path, t.line, t.col)
        return self.next()

    def name(self, what: str) -> Token:
        t = self.peek()
        if t.kind != "id" or not _NAME_RE.match(t.text):
            got = t.text if t.kind != "eof" else "end of input"
            raise ParseError("SYNTAX", f"expected {what}, got {got!r}",
                             self.path, t.line, t.col)
        return self.next()

    def type_name(self) -> Token:
        return self.name("type name")

    def parse(self) -> ClassModel:
        classes: list[ClassSpec] = []
        class_pos: dict[str, Token] = {}
        while not self.at("eof"):
            tok = self.expect("kw", "class")
            cname = self.name("class name")
            if cname.text in class_pos:
                raise ModelError("DUPLICATE_CLASS",
                                 f"class {cname.text!r} already declared",
                                 self.path, cname.line, cname.col)
            class_pos[cname.text] = tok
            self.expect("punct", "{")
            fields: list[FieldSpec] = []
            methods: list[MethodSig] = []
            member_names: set[str] = set()
            while not self.at("punct", "}"):
                if self.at("kw", "field"):
                    self.next()
                    fname = self.name("field name")
                    self.expect("punct", ":")
                    ftype = self.type_name()
                    self.expect("punct", ";")
                    if fname.text in member_names:
                        raise ModelError("DUPLICATE_FIELD",
                                         f"field {fname.text!r} already declared "
                                         f"in class {cname.text!r}",
                                         self.path, fname.line, fname.col)
                    if ftype.text == "void":
                        raise ModelError("VOID_FIELD",
                                         "void is not a legal field type",
                                         self.path, ftype.line, ftype.col)
                    member_names.add(fname.text)
                    fields.append(FieldSpec(fname.text, ftype.text))
                elif self.at("kw", "method"):
                    self.next()
                    mname = self.name("method name")
                    if mname.text in member_names:
                        raise ModelError("DUPLICATE_METHOD",
                                         f"method {mname.text!r} already declared "
                                         f"in class {cname.text!r} (no overloading)",
                                         self.path, mname.line, mname.col)
                    member_names.add(mname.text)
                    self.expect("punct", "(")
                    params: list[Param] = []
                    pnames: set[str] = set()
                    if not self.at("punct", ")"):
                        while True:
                            pname = self.name("parameter name")
                            self.expect("punct", ":")
                            ptype = self.type_name()
                            if pname.text in pnames:
                                raise ModelError("DUPLICATE_PARAM",
                                                 f"parameter {pname.text!r} already "
                                                 f"declared in {mname.text!r}",
                                                 self.path, pname.line, pname.col)
                            pnames.add(pname.text)
                            params.append(Param(pname.text, ptype.text))
                            if not self.at("punct", ","):
                                break
                            self.next()
                    self.expect("punct", ")")
                    self.expect("punct", ":")
                    rtype = self.type_name()
                    self.expect("punct", ";")
                    methods.append(MethodSig(mname.text, tuple(params), rtype.text))
                else:
                    t = self.peek()
                    got = t.text if t.kind != "eof" else "end of input"
                    raise ParseError("SYNTAX",
                                     f"expected 'field' or 'method', got {got!r}",
                                     self.path, t.line, t.col)
            self.expect("punct", "}")
            classes.append(ClassSpec(cname.text, tuple(fields), tuple(methods)))
        return ClassModel(tuple(classes))


def parse_model(text: str, path: str = "<model>") -> ClassModel:
    """Parse and validate a class model. Deterministic; declaration order
    matches source order."""
    model = _ModelParser(tokenize(text, path), path).parse()
    known = set(BUILTIN_TYPES) | {c.name for c in model.classes}

    def check(type_name: str, context: str) -> None:
        if type_name not in known:
            raise ModelError("UNKNOWN_TYPE",
                             f"unknown type {type_name} ({context})", path)

    for c in model.classes:
        for f in c.fields:
            check(f.type, f"field {c.name}.{f.name}")
        for m in c.methods:
            for p in m.params:
                check(p.type, f"parameter {p.name} of {c.name}.{m.name}")
            check(m.return_type, f"return type of {c.name}.{m.name}")
    return model


def print_model(model: ClassModel) -> str:
    """Canonical form: parse_model(print_model(m)) == m."""
    lines: list[str] = []
    for c in model.classes:
        lines.append(f"class {c.name} {{")
        for f in c.fields:
            lines.append(f"    field {f.name}: {f.type};")
        for m in c.methods:
            params = ", ".join(f"{p.name}: {p.type}" for p in m.params)
            lines.append(f"    method {m.name}({params}): {m.return_type};")
        lines.append("}")
    return "\n".join(lines) + ("\n" if lines else "")
