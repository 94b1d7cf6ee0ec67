import pytest

from weld import evalharness as eh
from weld.errors import WeldError
from weld.mechanisms import MECHANISM_ORDER, Mechanism


@pytest.fixture(scope="module")
def matrix():
    return eh.evaluate_all()


def test_matrix_is_complete(matrix):
    assert matrix.complete()
    assert len(matrix.cells) == 40


def test_c1_row(matrix):
    for m in MECHANISM_ORDER:
        expected = (eh.UNFULFILLED if m is Mechanism.PROTECTED_REGIONS
                    else eh.FULFILLED)
        assert matrix.cells[(m, "C1")].verdict == expected, m


def test_c5_row(matrix):
    negative = {Mechanism.INCLUDE, Mechanism.PARTIAL_CLASSES, Mechanism.AOP}
    for m in MECHANISM_ORDER:
        expected = eh.UNFULFILLED if m in negative else eh.FULFILLED
        assert matrix.cells[(m, "C5")].verdict == expected, m


def test_conditional_cells(matrix):
    assert matrix.cells[(Mechanism.PARTIAL_CLASSES, "C2")].verdict == \
        eh.CONDITIONAL
    assert matrix.cells[(Mechanism.INCLUDE, "C3")].verdict == eh.CONDITIONAL
    assert matrix.cells[(Mechanism.PARTIAL_CLASSES, "C3")].verdict == \
        eh.CONDITIONAL


def test_delegation_c4_fulfilled(matrix):
    assert matrix.cells[(Mechanism.DELEGATION, "C4")].verdict == eh.FULFILLED


def test_evidence_honesty(matrix):
    for (m, c), verdict in matrix.cells.items():
        assert verdict.evidence, (m, c)
        if verdict.verdict == eh.FULFILLED:
            assert all(r.passed for r in verdict.evidence), (m, c)
        elif verdict.verdict == eh.CONDITIONAL:
            assert any(r.passed and r.profile != "restrictive"
                       for r in verdict.evidence), (m, c)
            assert any(not r.passed and r.profile == "restrictive"
                       for r in verdict.evidence), (m, c)
        else:
            assert any(not r.passed for r in verdict.evidence), (m, c)


def test_render_table_grid(matrix):
    table = eh.render_table(matrix)
    lines = table.splitlines()
    assert len(lines) == 6  # header + five criteria
    assert "Generation Gap" in lines[0]
    assert "Protected Regions" in lines[0]
    assert lines[1].startswith("C1")
    # cells render as +, (+), -
    assert "(+)" in table


def test_render_table_incomplete_matrix_rejected():
    partial = eh.CriteriaMatrix({})
    with pytest.raises(WeldError) as exc:
        eh.render_table(partial)
    assert exc.value.code == "INCOMPLETE"
    with pytest.raises(WeldError):
        eh.report_lines(partial)


def test_report_lines_format_and_order(matrix):
    lines = eh.report_lines(matrix)
    assert len(lines) == 40
    assert lines[0] == "generation-gap,C1,+"
    assert lines[5] == "extended-generation-gap,C1,+"
    mechs = [line.split(",")[0] for line in lines]
    assert mechs == [m.value for m in MECHANISM_ORDER for _ in range(5)]


def test_conditional_renders_in_parentheses(matrix):
    lines = eh.report_lines(matrix)
    assert "partial-classes,C2,(+)" in lines


def test_diff_reports():
    actual = ["generation-gap,C1,+", "generation-gap,C2,-"]
    golden = "generation-gap,C1,+\ngeneration-gap,C2,+\n"
    diffs = eh.diff_reports(actual, golden)
    assert diffs == ["generation-gap,C2: expected +, got -"]
    assert eh.diff_reports(actual, "\n".join(actual)) == []


def test_single_mechanism_evaluation():
    matrix = eh.evaluate_all((Mechanism.DELEGATION,))
    assert matrix.complete((Mechanism.DELEGATION,))
    lines = eh.report_lines(matrix, (Mechanism.DELEGATION,))
    assert lines == ["delegation,C1,+", "delegation,C2,-", "delegation,C3,-",
                     "delegation,C4,+", "delegation,C5,+"]


def test_check_criterion_rejects_unknown():
    with pytest.raises(WeldError) as exc:
        eh.check_criterion(Mechanism.AOP, "C9")
    assert exc.value.code == "UNKNOWN_CRITERION"
