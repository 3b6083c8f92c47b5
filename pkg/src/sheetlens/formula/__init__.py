from sheetlens.formula.analyze import (
    GRID_BOUNDS,
    GridBounds,
    ReferenceSet,
    conditional_complexity,
    detect_udf,
    expand_range,
    extract_references,
    nesting_level,
)
from sheetlens.formula.catalog import DEFAULT_CATALOG, BuiltinCatalog, BuiltinSpec, default_catalog
from sheetlens.formula.nodes import (
    ArrayConst,
    Binary,
    BinOp,
    BoolLit,
    CellRef,
    ExternalRef,
    FormulaAst,
    FunctionCall,
    NumberLit,
    RangeRef,
    TextLit,
    Unary,
    UnOp,
)
from sheetlens.formula.parser import parse_formula, tokenize
from sheetlens.formula.render import normalize_relative, pretty_print, skeleton

__all__ = [
    "GRID_BOUNDS",
    "GridBounds",
    "ReferenceSet",
    "conditional_complexity",
    "detect_udf",
    "expand_range",
    "extract_references",
    "nesting_level",
    "DEFAULT_CATALOG",
    "BuiltinCatalog",
    "BuiltinSpec",
    "default_catalog",
    "ArrayConst",
    "Binary",
    "BinOp",
    "BoolLit",
    "CellRef",
    "ExternalRef",
    "FormulaAst",
    "FunctionCall",
    "NumberLit",
    "RangeRef",
    "TextLit",
    "Unary",
    "UnOp",
    "parse_formula",
    "tokenize",
    "normalize_relative",
    "pretty_print",
    "skeleton",
]
