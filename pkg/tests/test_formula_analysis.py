from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sheetlens.formula import (
    DEFAULT_CATALOG,
    conditional_complexity,
    detect_udf,
    nesting_level,
    normalize_relative,
    parse_formula,
    skeleton,
)
from sheetlens.model import CellAddress, column_letters

NAMES = ["Sheet1", "Jan"]


def parse(text, anchor=CellAddress(0, 10, 5)):
    return parse_formula(text, anchor, NAMES)


@pytest.mark.parametrize("source,expected", [
    ("=A1+1", 0),
    ("=SUM(A1:A3)", 1),
    ("=IF(A1>0;SUM(B1:B2);0)", 2),  # hand count: IF over SUM
    ("=IF(A1>0;IF(A2>0;SUM(B1:B2);0);0)", 3),
    ("=SUM(A1:A2)+MIN(B1;B2)", 1),
])
def test_nesting_level(source, expected):
    assert nesting_level(parse(source)) == expected


@pytest.mark.parametrize("source,expected", [
    ("=A1+1", 0),
    ("=IF(A1>0;1;2)", 1),
    ("=IF(AND(A1>0;A2>0);1;2)", 2),  # 1 IF + (2-1) AND
    ("=OR(A1=1;A2=2;A3=3)", 2),     # arity 3 -> 2 decisions
    ("=NOT(A1>0)", 0),              # NOT forwards, adds nothing
    ("=IF(NOT(AND(A1>0;A2>0));1;0)", 2),
    ("=A1>0", 0),                   # bare comparison is a value, not a branch
    ("=IF(A1>0;IF(A2>0;1;2);3)", 2),
])
def test_conditional_complexity(source, expected):
    assert conditional_complexity(parse(source)) == expected


def test_normalize_relative_offsets():
    anchor = CellAddress(0, 2, 1)  # A2
    assert normalize_relative(parse("=A1*2", anchor), anchor) == "=R[-1]C[0]*2"


def test_normalize_absolute_survives():
    for anchor in [CellAddress(0, 1, 1), CellAddress(0, 99, 9)]:
        assert normalize_relative(parse("=$A$1", anchor), anchor) == "=R1C1"


def test_normalize_copy_equivalence():
    # hand check: both are one-up, same-column plus one
    b3 = CellAddress(0, 3, 2)
    c6 = CellAddress(0, 6, 3)
    left = normalize_relative(parse_formula("=B2+1", b3, NAMES), b3)
    right = normalize_relative(parse_formula("=C5+1", c6, NAMES), c6)
    assert left == right == "=R[-1]C[0]+1"


def test_normalize_mixed_absolute():
    anchor = CellAddress(0, 5, 5)
    assert normalize_relative(parse("=A$2", anchor), anchor) == "=R2C[-4]"


def test_normalize_sheet_prefix_fixed():
    anchor = CellAddress(0, 2, 2)
    assert normalize_relative(parse("=Jan!A1", anchor), anchor) == "=S1!R[-1]C[-1]"


def test_normalize_range():
    anchor = CellAddress(0, 13, 1)
    assert normalize_relative(parse("=SUM(A1:A12)", anchor), anchor) \
        == "=SUM(R[-12]C[0]:R[-1]C[0])"


@given(
    st.integers(min_value=11, max_value=30),
    st.integers(min_value=11, max_value=20),
    st.integers(min_value=-5, max_value=5),
    st.integers(min_value=-5, max_value=5),
    st.lists(
        st.tuples(st.integers(min_value=-5, max_value=5), st.integers(min_value=-5, max_value=5)),
        min_size=1, max_size=4,
    ),
)
def test_normalize_translation_invariance(row, col, d_row, d_col, offsets):
    """Shifting a formula's relative references and its anchor together
    leaves the normal form unchanged."""
    def formula_at(r, c):
        terms = [f"{column_letters(c + dc)}{r + dr}" for dr, dc in offsets]
        return "=" + "+".join(terms)

    anchor = CellAddress(0, row, col)
    shifted = CellAddress(0, row + d_row, col + d_col)
    base = normalize_relative(parse_formula(formula_at(row, col), anchor, NAMES), anchor)
    moved = normalize_relative(
        parse_formula(formula_at(row + d_row, col + d_col), shifted, NAMES), shifted
    )
    assert base == moved


def test_skeleton_logical_folds_constants():
    anchor = CellAddress(0, 2, 2)
    a = skeleton(parse("=A1+1", anchor), "logical", anchor)
    b = skeleton(parse("=A1+2", anchor), "logical", anchor)
    assert a == b


def test_skeleton_logical_folds_absolutes():
    anchor = CellAddress(0, 2, 2)
    a = skeleton(parse("=$A$1+1", anchor), "logical", anchor)
    b = skeleton(parse("=$B$9+2", anchor), "logical", anchor)
    assert a == b == "=RABSCABS+CONST"


def test_skeleton_structural_spine():
    anchor = CellAddress(0, 2, 2)
    assert skeleton(parse("=A1+1", anchor), "structural") == "ADD(ARG,ARG)"
    assert skeleton(parse("=A1+1", anchor), "structural") \
        == skeleton(parse("=B7+C9", anchor), "structural")
    assert skeleton(parse("=A1+1", anchor), "structural") \
        != skeleton(parse("=A1*1", anchor), "structural")
    assert skeleton(parse("=IF(A1>0;SUM(B1:B2);0)", anchor), "structural") \
        == "IF(GT(ARG,ARG),SUM(ARG),ARG)"


REFINEMENT_CORPUS = [
    ("=A1+1", CellAddress(0, 2, 1)),
    ("=A2+1", CellAddress(0, 3, 1)),       # copy of the first
    ("=A1+2", CellAddress(0, 2, 1)),       # logical twin, not a copy
    ("=$A$1+7", CellAddress(0, 2, 1)),     # structural twin only
    ("=B1*2", CellAddress(0, 2, 2)),
    ("=SUM(A1:A3)", CellAddress(0, 4, 1)),
    ("=SUM(B1:B3)", CellAddress(0, 4, 2)), # copy of the previous
    ("=IF(A1>0;1;0)", CellAddress(0, 1, 2)),
]


def test_refinement_chain_pairwise():
    """Equal normal forms imply equal logical skeletons imply equal
    structural skeletons."""
    entries = []
    for text, anchor in REFINEMENT_CORPUS:
        ast = parse_formula(text, anchor, NAMES)
        entries.append((
            normalize_relative(ast, anchor),
            skeleton(ast, "logical", anchor),
            skeleton(ast, "structural"),
        ))
    for norm_a, log_a, struct_a in entries:
        for norm_b, log_b, struct_b in entries:
            if norm_a == norm_b:
                assert log_a == log_b
            if log_a == log_b:
                assert struct_a == struct_b


def test_refinement_chain_random_corpus():
    import random

    from helpers import random_workbook

    rng = random.Random(404)
    entries = []
    for _ in range(8):
        wb = random_workbook(rng, max_cells=60)
        for cell in wb.iter_cells():
            if cell.is_formula:
                entries.append((
                    normalize_relative(cell.ast, cell.addr),
                    skeleton(cell.ast, "logical", cell.addr),
                    skeleton(cell.ast, "structural"),
                ))
    assert len(entries) > 20
    for norm_a, log_a, struct_a in entries:
        for norm_b, log_b, struct_b in entries:
            if norm_a == norm_b:
                assert log_a == log_b
            if log_a == log_b:
                assert struct_a == struct_b


def test_shape_metrics_agree_across_copies():
    """Copy-equivalent formulas share conditional complexity and nesting."""
    b3, c6 = CellAddress(0, 3, 2), CellAddress(0, 6, 3)
    one = parse_formula("=IF(B2>0;SUM(B1:B2);0)", b3, NAMES)
    two = parse_formula("=IF(C5>0;SUM(C4:C5);0)", c6, NAMES)
    assert normalize_relative(one, b3) == normalize_relative(two, c6)
    assert conditional_complexity(one) == conditional_complexity(two)
    assert nesting_level(one) == nesting_level(two)


@pytest.mark.parametrize("source,expected", [
    ("=SUM(A1:A2)", []),
    ("=MYRATE(A1)", ["MYRATE"]),
    ("=IF(MYRATE(A1)>0;1;0)", ["MYRATE"]),
    ("=ZED(A1)+MYRATE(A1)+MYRATE(A2)", ["MYRATE", "ZED"]),
])
def test_detect_udf(source, expected):
    assert detect_udf(parse(source), DEFAULT_CATALOG) == expected


def test_catalog_contents():
    required = ["SUM", "IF", "NOT", "AND", "OR", "MIN", "MAX", "COUNT",
                "AVERAGE", "LOOKUP", "INDIRECT", "OFFSET"]
    for name in required:
        assert name in DEFAULT_CATALOG
    assert DEFAULT_CATALOG.get("IF").is_conditional
    assert not DEFAULT_CATALOG.get("SUM").is_conditional
    for spec in DEFAULT_CATALOG.functions.values():
        assert 1 <= spec.min_arity <= spec.max_arity


def test_evaluator_builtins_are_catalogued():
    from sheetlens.evaluate import BUILTIN_DISPATCH

    for name in BUILTIN_DISPATCH:
        assert name in DEFAULT_CATALOG
