"""Workbook recalculation over the builtin subset.

Exists chiefly so model-level invariants are executable: one topological
pass, empty cells as 0 in numeric context, spreadsheet-style error values
instead of exceptions. Cycle members and their transitive dependents get
the Cycle error.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from sheetlens.formula.catalog import DYNAMIC_REFERENCE_FUNCTIONS
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
from sheetlens.formula.analyze import expand_range
from sheetlens.graph import DependencyHypergraph
from sheetlens.model import (
    UNDEFINED,
    CellAddress,
    ErrorKind,
    Value,
    ValueKind,
    Workbook,
)

_CYCLE = Value.error(ErrorKind.CYCLE)
_NAME = Value.error(ErrorKind.NAME)
_TYPE = Value.error(ErrorKind.TYPE_MISMATCH)
_DIV0 = Value.error(ErrorKind.DIV0)
_REF = Value.error(ErrorKind.REF)


@dataclass
class EvalEnvironment:
    """Resolved values, the not-yet-evaluated set, the builtin dispatch
    table, and optional read instrumentation for consistency checks."""

    values: dict[CellAddress, Value] = field(default_factory=dict)
    pending: set[CellAddress] = field(default_factory=set)
    builtins: dict[str, Callable] = field(default_factory=lambda: dict(BUILTIN_DISPATCH))
    reads: Optional[set[CellAddress]] = None

    def lookup(self, addr: CellAddress) -> Value:
        if self.reads is not None:
            self.reads.add(addr)
        return self.values.get(addr, UNDEFINED)


def _to_number(v: Value):
    """Float, or an error Value when no numeric reading exists."""
    if v.kind == ValueKind.NUMBER:
        return v.payload
    if v.kind == ValueKind.BOOLEAN:
        return 1.0 if v.payload else 0.0
    if v.kind == ValueKind.UNDEFINED:
        return 0.0
    if v.kind == ValueKind.ERROR:
        return v
    return _TYPE


def _to_bool(v: Value):
    if v.kind == ValueKind.BOOLEAN:
        return bool(v.payload)
    if v.kind == ValueKind.NUMBER:
        return v.payload != 0
    if v.kind == ValueKind.UNDEFINED:
        return False
    if v.kind == ValueKind.ERROR:
        return v
    return _TYPE


def _to_text(v: Value):
    if v.kind == ValueKind.ERROR:
        return v
    return v.render()


def _number_result(x: float) -> Value:
    if isinstance(x, complex) or not math.isfinite(x):
        return _TYPE
    return Value.number(x)


def _arith(op: BinOp, a: float, b: float) -> Value:
    if op == BinOp.ADD:
        return _number_result(a + b)
    if op == BinOp.SUB:
        return _number_result(a - b)
    if op == BinOp.MUL:
        return _number_result(a * b)
    if op == BinOp.DIV:
        if b == 0:
            return _DIV0
        return _number_result(a / b)
    if op == BinOp.POW:
        try:
            return _number_result(a ** b)
        except (OverflowError, ValueError, ZeroDivisionError):
            return _TYPE
    raise AssertionError(op)


_NUMERIC_KINDS = (ValueKind.NUMBER, ValueKind.BOOLEAN, ValueKind.UNDEFINED)


def _compare(op: BinOp, lhs: Value, rhs: Value) -> Value:
    if op in (BinOp.EQ, BinOp.NEQ):
        if lhs.kind == ValueKind.UNDEFINED and rhs.kind != ValueKind.UNDEFINED:
            lhs = _coerce_undefined_like(rhs)
        if rhs.kind == ValueKind.UNDEFINED and lhs.kind != ValueKind.UNDEFINED:
            rhs = _coerce_undefined_like(lhs)
        equal = lhs == rhs
        return Value.boolean(equal if op == BinOp.EQ else not equal)
    if lhs.kind in _NUMERIC_KINDS and rhs.kind in _NUMERIC_KINDS:
        a, b = _to_number(lhs), _to_number(rhs)
    elif lhs.kind == ValueKind.TEXT and rhs.kind == ValueKind.TEXT:
        a, b = lhs.payload, rhs.payload  # case-sensitive lexicographic
    else:
        return _TYPE
    if op == BinOp.GT:
        return Value.boolean(a > b)
    if op == BinOp.LT:
        return Value.boolean(a < b)
    if op == BinOp.GTEQ:
        return Value.boolean(a >= b)
    if op == BinOp.LTEQ:
        return Value.boolean(a <= b)
    raise AssertionError(op)


def _coerce_undefined_like(other: Value) -> Value:
    if other.kind == ValueKind.TEXT:
        return Value.text("")
    if other.kind == ValueKind.BOOLEAN:
        return Value.boolean(False)
    return Value.number(0.0)


def _iter_argument_values(args, env: EvalEnvironment):
    """Yield (value, from_range) over scalar args and expanded ranges."""
    for arg in args:
        if isinstance(arg, RangeRef):
            for member in expand_range(arg):
                yield env.lookup(member), True
        else:
            yield evaluate_formula(arg, env), False


def _fold_numbers(args, env: EvalEnvironment):
    """Collect numeric operands under range-vs-scalar coercion rules.

    Text and booleans inside ranges are skipped (a range sweeps over cells
    that were never meant as operands); scalar text is a type error and a
    scalar boolean coerces. Empty cells are skipped, keeping SUM of an
    empty range 0. Returns a list of floats or an error Value.
    """
    numbers: list[float] = []
    for value, from_range in _iter_argument_values(args, env):
        if value.kind == ValueKind.ERROR:
            return value
        if value.kind == ValueKind.NUMBER:
            numbers.append(value.payload)
        elif value.kind == ValueKind.UNDEFINED:
            continue
        elif from_range:
            continue
        elif value.kind == ValueKind.BOOLEAN:
            numbers.append(1.0 if value.payload else 0.0)
        else:
            return _TYPE
    return numbers


def _builtin_sum(args, env):
    numbers = _fold_numbers(args, env)
    if isinstance(numbers, Value):
        return numbers
    return _number_result(math.fsum(numbers))


def _builtin_min(args, env):
    numbers = _fold_numbers(args, env)
    if isinstance(numbers, Value):
        return numbers
    return Value.number(min(numbers)) if numbers else Value.number(0.0)


def _builtin_max(args, env):
    numbers = _fold_numbers(args, env)
    if isinstance(numbers, Value):
        return numbers
    return Value.number(max(numbers)) if numbers else Value.number(0.0)


def _builtin_count(args, env):
    count = 0
    for value, _ in _iter_argument_values(args, env):
        if value.kind == ValueKind.ERROR:
            return value
        if value.kind == ValueKind.NUMBER:
            count += 1
    return Value.number(float(count))


def _builtin_average(args, env):
    numbers = _fold_numbers(args, env)
    if isinstance(numbers, Value):
        return numbers
    if not numbers:
        return _DIV0
    return _number_result(math.fsum(numbers) / len(numbers))


def _builtin_if(args, env):
    cond = _to_bool(evaluate_formula(args[0], env))
    if isinstance(cond, Value):
        return cond
    if cond:
        return evaluate_formula(args[1], env)
    if len(args) == 3:
        return evaluate_formula(args[2], env)
    return Value.boolean(False)


def _fold_booleans(args, env):
    flags: list[bool] = []
    for value, from_range in _iter_argument_values(args, env):
        if value.kind == ValueKind.ERROR:
            return value
        if from_range and value.kind in (ValueKind.TEXT, ValueKind.UNDEFINED):
            continue
        flag = _to_bool(value)
        if isinstance(flag, Value):
            return flag
        flags.append(flag)
    if not flags:
        return _TYPE
    return flags


def _builtin_and(args, env):
    flags = _fold_booleans(args, env)
    if isinstance(flags, Value):
        return flags
    return Value.boolean(all(flags))


def _builtin_or(args, env):
    flags = _fold_booleans(args, env)
    if isinstance(flags, Value):
        return flags
    return Value.boolean(any(flags))


def _builtin_not(args, env):
    flag = _to_bool(evaluate_formula(args[0], env))
    if isinstance(flag, Value):
        return flag
    return Value.boolean(not flag)


BUILTIN_DISPATCH: dict[str, Callable] = {
    "SUM": _builtin_sum,
    "MIN": _builtin_min,
    "MAX": _builtin_max,
    "COUNT": _builtin_count,
    "AVERAGE": _builtin_average,
    "IF": _builtin_if,
    "AND": _builtin_and,
    "OR": _builtin_or,
    "NOT": _builtin_not,
}


def evaluate_formula(ast: FormulaAst, env: EvalEnvironment) -> Value:
    """Evaluate one formula against already-resolved referenced cells.

    Strict except IF, which evaluates only the selected branch; every
    failure becomes an error Value, never an exception.
    """
    if isinstance(ast, NumberLit):
        return Value.number(ast.value)
    if isinstance(ast, TextLit):
        return Value.text(ast.value)
    if isinstance(ast, BoolLit):
        return Value.boolean(ast.value)
    if isinstance(ast, CellRef):
        return env.lookup(ast.target)
    if isinstance(ast, RangeRef):
        return _TYPE  # a bare range has no scalar value
    if isinstance(ast, ExternalRef):
        return _REF  # other workbooks are not loaded
    if isinstance(ast, ArrayConst):
        return _NAME  # array semantics deliberately unsupported
    if isinstance(ast, Unary):
        operand = _to_number(evaluate_formula(ast.operand, env))
        if isinstance(operand, Value):
            return operand
        return _number_result(-operand if ast.op == UnOp.NEG else operand)
    if isinstance(ast, Binary):
        lhs = evaluate_formula(ast.lhs, env)
        if lhs.is_error:
            return lhs
        rhs = evaluate_formula(ast.rhs, env)
        if rhs.is_error:
            return rhs
        if ast.op == BinOp.CONCAT:
            left, right = _to_text(lhs), _to_text(rhs)
            if isinstance(left, Value):
                return left
            if isinstance(right, Value):
                return right
            return Value.text(left + right)
        if ast.op in (BinOp.ADD, BinOp.SUB, BinOp.MUL, BinOp.DIV, BinOp.POW):
            a = _to_number(lhs)
            if isinstance(a, Value):
                return a
            b = _to_number(rhs)
            if isinstance(b, Value):
                return b
            return _arith(ast.op, a, b)
        return _compare(ast.op, lhs, rhs)
    if isinstance(ast, FunctionCall):
        if ast.name in DYNAMIC_REFERENCE_FUNCTIONS:
            return _NAME  # statically untraceable references
        handler = env.builtins.get(ast.name)
        if handler is None:
            return _NAME
        return handler(ast.args, env)
    raise TypeError(f"unknown AST node: {ast!r}")


def evaluate_workbook(
    workbook: Workbook,
    graph: DependencyHypergraph,
    trace: Optional[dict[CellAddress, set[CellAddress]]] = None,
) -> dict[CellAddress, Value]:
    """Evaluate every non-empty cell in topological order.

    Pass ``trace`` to record, per formula cell, the addresses its
    evaluation actually read.
    """
    cells = {c.addr: c for c in workbook.iter_cells()}
    env = EvalEnvironment(pending=set(graph.vertices))

    tainted: set[CellAddress] = set()
    for cycle in graph.detect_cycles():
        for member in cycle:
            if member not in tainted:
                tainted.add(member)
                tainted.update(graph._reach(member, forward=True))
    for addr in tainted:
        env.values[addr] = _CYCLE
        env.pending.discard(addr)

    # topological order of the untainted remainder (its references cannot
    # lead into the tainted set, or it would be tainted itself)
    arcs = {
        (e.source, t)
        for e in graph.edges
        for t in e.targets
        if e.source not in tainted and t not in tainted
    }
    followers: dict[CellAddress, list[CellAddress]] = {v: [] for v in env.pending}
    indegree = {v: 0 for v in env.pending}
    for src, tgt in arcs:
        followers[tgt].append(src)
        indegree[src] += 1
    ready = [v for v in env.pending if indegree[v] == 0]
    heapq.heapify(ready)
    while ready:
        addr = heapq.heappop(ready)
        cell = cells[addr]
        if cell.is_formula:
            if trace is not None:
                env.reads = set()
            env.values[addr] = evaluate_formula(cell.ast, env)
            if trace is not None:
                trace[addr] = env.reads
                env.reads = None
        else:
            env.values[addr] = cell.literal
        env.pending.discard(addr)
        for nxt in followers[addr]:
            indegree[nxt] -= 1
            if indegree[nxt] == 0:
                heapq.heappush(ready, nxt)
    return env.values
