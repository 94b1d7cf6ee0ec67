"""Evaluator for linked MiniOOP programs.

Dynamic dispatch starts at the runtime class and walks the extends chain.
Field initializers run at object creation in declaration order, superclass
first; fields without an initializer get the zero value of their declared
type ("" / 0 / false, null for class types). A body that finishes without
executing a return yields void.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EvalError
from .minioop import ast
from .minioop.parser import parse_expr

DEFAULT_STEP_BUDGET = 100000


@dataclass(frozen=True)
class StringV:
    value: str


@dataclass(frozen=True)
class IntV:
    value: int


@dataclass(frozen=True)
class BoolV:
    value: bool


@dataclass(frozen=True)
class NullV:
    pass


@dataclass(frozen=True)
class VoidV:
    pass


@dataclass
class ObjectV:
    class_name: str
    fields: dict[str, "Value"] = field(default_factory=dict)


Value = StringV | IntV | BoolV | NullV | VoidV | ObjectV


def format_value(v: Value) -> str:
    """Canonical printed form: `"custom"`, `42`, `true`, `null`, `void`."""
    if isinstance(v, StringV):
        escaped = v.value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(v, IntV):
        return str(v.value)
    if isinstance(v, BoolV):
        return "true" if v.value else "false"
    if isinstance(v, NullV):
        return "null"
    if isinstance(v, VoidV):
        return "void"
    if isinstance(v, ObjectV):
        inner = ", ".join(f"{k}: {format_value(val)}" for k, val in v.fields.items())
        return f"{v.class_name} {{{inner}}}"
    raise TypeError(f"unknown value {v!r}")


class _Return(Exception):
    def __init__(self, value: Value):
        self.value = value


class _Machine:
    def __init__(self, units: list[ast.Unit], step_budget: int):
        self.step_budget = step_budget
        self.steps = 0
        self.classes: dict[str, ast.ClassDecl] = {}
        for u in units:
            for d in u.decls:
                if isinstance(d, ast.ClassDecl):
                    self.classes[d.name] = d

    def tick(self) -> None:
        self.steps += 1
        if self.steps > self.step_budget:
            raise EvalError("STEP_BUDGET",
                            f"step budget of {self.step_budget} exceeded "
                            "(runaway recursion?)")

    def chain(self, name: str) -> list[ast.ClassDecl]:
        out: list[ast.ClassDecl] = []
        seen: set[str] = set()
        cur: str | None = name
        while cur is not None and cur not in seen:
            seen.add(cur)
            d = self.classes.get(cur)
            if d is None:
                break
            out.append(d)
            cur = d.extends
        return out

    def find_method(self, class_name: str, method: str) -> ast.MethodDecl | None:
        for cls in self.chain(class_name):
            for m in cls.members:
                if isinstance(m, ast.MethodDecl) and m.name == method:
                    return m
        return None

    def instantiate(self, class_name: str, node: ast.Node) -> ObjectV:
        decl = self.classes.get(class_name)
        if decl is None:
            raise EvalError("UNKNOWN_TYPE", f"unknown class {class_name!r}",
                            line=node.line, col=node.col)
        if decl.is_abstract:
            raise EvalError("ABSTRACT_NEW",
                            f"cannot instantiate abstract class {class_name!r}",
                            line=node.line, col=node.col)
        obj = ObjectV(class_name)
        for cls in reversed(self.chain(class_name)):  # superclass first
            for m in cls.members:
                if isinstance(m, ast.FieldDecl):
                    if m.init is not None:
                        obj.fields[m.name] = self.eval_expr(m.init, obj, {})
                    else:
                        obj.fields[m.name] = _zero_value(m.type)
        return obj

    def call(self, obj: ObjectV, method: str, args: list[Value],
             node: ast.Node) -> Value:
        decl = self.find_method(obj.class_name, method)
        if decl is None or decl.body is None:
            raise EvalError("NO_SUCH_METHOD",
                            f"no method {method!r} on {obj.class_name!r}",
                            line=node.line, col=node.col)
        if len(args) != len(decl.params):
            raise EvalError("ARITY",
                            f"{obj.class_name}.{method} expects "
                            f"{len(decl.params)} argument(s), got {len(args)}",
                            line=node.line, col=node.col)
        env = {p.name: a for p, a in zip(decl.params, args)}
        try:
            for s in decl.body:
                self.exec_stmt(s, obj, env)
        except _Return as r:
            return r.value
        if decl.return_type != "void":
            raise EvalError("MISSING_RETURN",
                            f"{obj.class_name}.{method} fell off the end "
                            f"without returning a {decl.return_type}",
                            line=node.line, col=node.col)
        return VoidV()

    def exec_stmt(self, s: ast.Stmt, this: ObjectV | None,
                  env: dict[str, Value]) -> None:
        self.tick()
        if isinstance(s, ast.LetStmt):
            env[s.name] = self.eval_expr(s.init, this, env)
        elif isinstance(s, ast.AssignStmt):
            if s.name not in env:
                raise EvalError("UNBOUND_VAR", f"unbound variable {s.name!r}",
                                line=s.line, col=s.col)
            env[s.name] = self.eval_expr(s.value, this, env)
        elif isinstance(s, ast.FieldAssignStmt):
            target = self.eval_expr(s.obj, this, env)
            value = self.eval_expr(s.value, this, env)
            if isinstance(target, NullV):
                raise EvalError("CALL_ON_NULL",
                                f"field assignment {s.field_name!r} on null",
                                line=s.line, col=s.col)
            if not isinstance(target, ObjectV):
                raise EvalError("TYPE_ERROR",
                                f"field assignment on non-object value",
                                line=s.line, col=s.col)
            if s.field_name not in target.fields:
                raise EvalError("NO_SUCH_FIELD",
                                f"no field {s.field_name!r} on "
                                f"{target.class_name!r}",
                                line=s.line, col=s.col)
            target.fields[s.field_name] = value
        elif isinstance(s, ast.ReturnStmt):
            value = (self.eval_expr(s.value, this, env)
                     if s.value is not None else VoidV())
            raise _Return(value)
        elif isinstance(s, ast.ExprStmt):
            self.eval_expr(s.expr, this, env)
        else:
            raise TypeError(f"unknown statement node {s!r}")

    def eval_expr(self, e: ast.Expr, this: ObjectV | None,
                  env: dict[str, Value]) -> Value:
        self.tick()
        if isinstance(e, ast.StringLit):
            return StringV(e.value)
        if isinstance(e, ast.IntLit):
            return IntV(e.value)
        if isinstance(e, ast.BoolLit):
            return BoolV(e.value)
        if isinstance(e, ast.NullLit):
            return NullV()
        if isinstance(e, ast.ThisExpr):
            if this is None:
                raise EvalError("UNBOUND_VAR", "'this' outside a method",
                                line=e.line, col=e.col)
            return this
        if isinstance(e, ast.VarRef):
            if e.name not in env:
                raise EvalError("UNBOUND_VAR", f"unbound variable {e.name!r}",
                                line=e.line, col=e.col)
            return env[e.name]
        if isinstance(e, ast.NewObject):
            return self.instantiate(e.class_name, e)
        if isinstance(e, ast.FieldAccess):
            obj = self.eval_expr(e.obj, this, env)
            if isinstance(obj, NullV):
                raise EvalError("CALL_ON_NULL",
                                f"field access {e.field_name!r} on null",
                                line=e.line, col=e.col)
            if not isinstance(obj, ObjectV):
                raise EvalError("TYPE_ERROR", "field access on non-object value",
                                line=e.line, col=e.col)
            if e.field_name not in obj.fields:
                raise EvalError("NO_SUCH_FIELD",
                                f"no field {e.field_name!r} on {obj.class_name!r}",
                                line=e.line, col=e.col)
            return obj.fields[e.field_name]
        if isinstance(e, ast.MethodCall):
            receiver = self.eval_expr(e.receiver, this, env)
            args = [self.eval_expr(a, this, env) for a in e.args]
            if isinstance(receiver, NullV):
                raise EvalError("CALL_ON_NULL",
                                f"method call {e.method!r} on null",
                                line=e.line, col=e.col)
            if not isinstance(receiver, ObjectV):
                raise EvalError("NO_SUCH_METHOD",
                                f"no method {e.method!r} on a non-object value",
                                line=e.line, col=e.col)
            return self.call(receiver, e.method, args, e)
        if isinstance(e, ast.Add):
            left = self.eval_expr(e.left, this, env)
            right = self.eval_expr(e.right, this, env)
            if isinstance(left, StringV) and isinstance(right, StringV):
                return StringV(left.value + right.value)
            if isinstance(left, IntV) and isinstance(right, IntV):
                return IntV(left.value + right.value)
            raise EvalError("TYPE_ERROR",
                            "'+' needs two Strings or two Ints",
                            line=e.line, col=e.col)
        raise TypeError(f"unknown expression node {e!r}")


def _zero_value(type_name: str) -> Value:
    if type_name == "String":
        return StringV("")
    if type_name == "Int":
        return IntV(0)
    if type_name == "Bool":
        return BoolV(False)
    return NullV()  # class-typed fields start null


def eval_entry(units: list[ast.Unit], entry: str,
               step_budget: int = DEFAULT_STEP_BUDGET) -> Value:
    """Evaluate an entry expression against a linked program.

    The program is expected to have passed static resolution; the entry
    itself is not statically checked.
    """
    expr = entry if isinstance(entry, ast.Expr) else parse_expr(entry)
    machine = _Machine(units, step_budget)
    try:
        return machine.eval_expr(expr, None, {})
    except RecursionError:
        # Deep MiniOOP recursion exhausts the host stack long before a large
        # step budget; report it the same way.
        raise EvalError("STEP_BUDGET",
                        "call depth exhausted (runaway recursion?)") from None
