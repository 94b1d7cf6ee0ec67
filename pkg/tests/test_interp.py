import itertools

import pytest

from weld.errors import EvalError
from weld.interp import (
    BoolV,
    IntV,
    NullV,
    StringV,
    VoidV,
    eval_entry,
    format_value,
)
from weld.minioop import parse_unit


def _program(*sources):
    return [parse_unit(src, f"u{i}.moo", allow_reserved=True)
            for i, src in enumerate(sources)]


def test_override_dispatch():
    units = _program(
        'class A { method m(): String { return "a"; } }',
        'class B extends A { method m(): String { return "b"; } }')
    assert eval_entry(units, "new B().m()") == StringV("b")


def test_field_initializer_and_mutation():
    units = _program("""
        class C {
            field n: Int = 1;
            method inc(): Int {
                this.n = this.n + 1;
                return this.n;
            }
        }
    """)
    # hand-evaluated: n starts 1, becomes 2, returned
    assert eval_entry(units, "new C().inc()") == IntV(2)


def test_zero_defaults_per_type():
    units = _program("""
        class C {
            field s: String;
            field i: Int;
            field b: Bool;
            field o: C;
            method gs(): String { return this.s; }
            method gi(): Int { return this.i; }
            method gb(): Bool { return this.b; }
            method go(): C { return this.o; }
        }
    """)
    assert eval_entry(units, "new C().gs()") == StringV("")
    assert eval_entry(units, "new C().gi()") == IntV(0)
    assert eval_entry(units, "new C().gb()") == BoolV(False)
    assert eval_entry(units, "new C().go()") == NullV()


def test_initializers_run_superclass_first_in_declaration_order():
    units = _program("""
        class A {
            field log: String = "a";
        }
        class B extends A {
            field x: String = this.log + "b";
            method out(): String { return this.x; }
        }
    """)
    assert eval_entry(units, "new B().out()") == StringV("ab")


def test_void_method_yields_void():
    units = _program("class C { method m(): void { } }")
    assert eval_entry(units, "new C().m()") == VoidV()


def test_missing_return_on_nonvoid_is_error():
    units = _program("class C { method m(): Int { } }")
    with pytest.raises(EvalError) as exc:
        eval_entry(units, "new C().m()")
    assert exc.value.code == "MISSING_RETURN"


def test_call_on_null():
    units = _program("""
        class C {
            field other: C;
            method poke(): Int { return this.other.poke(); }
        }
    """)
    with pytest.raises(EvalError) as exc:
        eval_entry(units, "new C().poke()")
    assert exc.value.code == "CALL_ON_NULL"


def test_no_such_method_only_dynamically():
    units = _program("class C { }")
    with pytest.raises(EvalError) as exc:
        eval_entry(units, "new C().gone()")
    assert exc.value.code == "NO_SUCH_METHOD"


def test_abstract_new_at_runtime():
    units = _program("abstract class A { }")
    with pytest.raises(EvalError) as exc:
        eval_entry(units, "new A()")
    assert exc.value.code == "ABSTRACT_NEW"


def test_step_budget():
    units = _program("class C { method loop(): Int { return this.loop(); } }")
    with pytest.raises(EvalError) as exc:
        eval_entry(units, "new C().loop()")
    assert exc.value.code == "STEP_BUDGET"
    with pytest.raises(EvalError) as exc:
        eval_entry(units, "new C().loop()", step_budget=10)
    assert exc.value.code == "STEP_BUDGET"


def test_determinism():
    units = _program("""
        class C {
            field n: Int = 40;
            method m(): Int { return this.n + 2; }
        }
    """)
    results = {eval_entry(units, "new C().m()") for _ in range(5)}
    assert results == {IntV(42)}


def test_string_concat_and_int_add():
    units = _program("""
        class C {
            method s(): String { return "a" + "b" + "c"; }
            method i(): Int { return 1 + 2 + 3; }
        }
    """)
    assert eval_entry(units, "new C().s()") == StringV("abc")
    assert eval_entry(units, "new C().i()") == IntV(6)
    with pytest.raises(EvalError) as exc:
        eval_entry(units, 'new C().s() + 1')
    assert exc.value.code == "TYPE_ERROR"


def test_format_value():
    assert format_value(StringV("custom")) == '"custom"'
    assert format_value(IntV(42)) == "42"
    assert format_value(BoolV(True)) == "true"
    assert format_value(NullV()) == "null"
    assert format_value(VoidV()) == "void"


# --- dispatch soundness: exhaustive over a three-level chain -----------------


def _chain_program(subset: set[str]) -> list:
    sources = []
    for cls, parent in (("A", None), ("B", "A"), ("C", "B")):
        ext = f" extends {parent}" if parent else ""
        body = (f'    method m(): String {{ return "{cls.lower()}"; }}\n'
                if cls in subset else "")
        sources.append(f"class {cls}{ext} {{\n{body}}}")
    return _program(*sources)


def _oracle(subset: set[str]) -> str | None:
    # closest ancestor of the runtime class C that defines m
    for cls in ("C", "B", "A"):
        if cls in subset:
            return cls.lower()
    return None


@pytest.mark.parametrize("subset", [
    set(combo) for r in range(4) for combo in itertools.combinations("ABC", r)
])
def test_dispatch_matches_closest_ancestor_table(subset):
    units = _chain_program(subset)
    expected = _oracle(subset)
    if expected is None:
        with pytest.raises(EvalError) as exc:
            eval_entry(units, "new C().m()")
        assert exc.value.code == "NO_SUCH_METHOD"
    else:
        assert eval_entry(units, "new C().m()") == StringV(expected)
