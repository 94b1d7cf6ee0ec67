import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weld.errors import ModelError, ParseError
from weld.model import ClassModel, parse_model, print_model

NOTEPAD = """\
class NotePad {
    field title: String;
    method getTitle(): String;
    method setTitle(t: String): void;
}
"""


def test_parse_notepad():
    model = parse_model(NOTEPAD)
    assert len(model.classes) == 1
    c = model.classes[0]
    assert c.name == "NotePad"
    assert len(c.fields) == 1 and c.fields[0].type == "String"
    assert [m.name for m in c.methods] == ["getTitle", "setTitle"]
    assert c.methods[1].params[0].name == "t"
    assert c.methods[1].return_type == "void"


def test_empty_model():
    assert parse_model("") == ClassModel(())


def test_unknown_type_rejected():
    with pytest.raises(ModelError) as exc:
        parse_model("class A { method m(): Foo; }")
    assert exc.value.code == "UNKNOWN_TYPE"
    assert "Foo" in exc.value.message


def test_forward_reference_is_fine():
    model = parse_model("class A { field b: B; }\nclass B { }")
    assert [c.name for c in model.classes] == ["A", "B"]


def test_duplicate_class():
    with pytest.raises(ModelError) as exc:
        parse_model("class A { }\nclass A { }")
    assert exc.value.code == "DUPLICATE_CLASS"


def test_duplicate_field_and_method():
    with pytest.raises(ModelError) as exc:
        parse_model("class A { field x: Int; field x: Int; }")
    assert exc.value.code == "DUPLICATE_FIELD"
    with pytest.raises(ModelError) as exc:
        parse_model("class A { method m(): Int; method m(): Bool; }")
    assert exc.value.code == "DUPLICATE_METHOD"


def test_duplicate_param():
    with pytest.raises(ModelError) as exc:
        parse_model("class A { method m(x: Int, x: Int): void; }")
    assert exc.value.code == "DUPLICATE_PARAM"


def test_void_field_rejected():
    with pytest.raises(ModelError) as exc:
        parse_model("class A { field x: void; }")
    assert exc.value.code == "VOID_FIELD"


def test_syntax_error_carries_position():
    with pytest.raises(ParseError) as exc:
        parse_model("class A {\n  field x Int;\n}")
    assert exc.value.line == 2


def test_comments_ignored():
    model = parse_model("// heading\nclass A { // trailing\n}\n")
    assert model.classes[0].name == "A"


def test_determinism():
    assert parse_model(NOTEPAD) == parse_model(NOTEPAD)


# --- round trip property -----------------------------------------------------

_names = st.from_regex(r"[A-Z][a-z]{0,5}[0-9]{1,3}", fullmatch=True)
_lower = st.from_regex(r"[a-z]{1,6}[0-9]{1,3}", fullmatch=True)


@st.composite
def models(draw):
    class_names = draw(st.lists(_names, min_size=0, max_size=4, unique=True))
    field_types = ["String", "Int", "Bool"] + class_names
    all_types = field_types + ["void"]
    lines = []
    for cname in class_names:
        lines.append(f"class {cname} {{")
        member_names = draw(st.lists(_lower, min_size=0, max_size=5,
                                     unique=True))
        for name in member_names:
            if draw(st.booleans()):
                lines.append(f"    field {name}: "
                             f"{draw(st.sampled_from(field_types))};")
            else:
                pnames = draw(st.lists(_lower, min_size=0, max_size=3,
                                       unique=True))
                params = ", ".join(
                    f"{p}: {draw(st.sampled_from(field_types))}"
                    for p in pnames)
                ret = draw(st.sampled_from(all_types))
                lines.append(f"    method {name}({params}): {ret};")
        lines.append("}")
    return "\n".join(lines)


@settings(max_examples=150, deadline=None)
@given(models())
def test_round_trip_through_canonical_printer(source):
    model = parse_model(source)
    assert parse_model(print_model(model)) == model
