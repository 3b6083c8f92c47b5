"""Formula text -> AST.

Hand-rolled tokenizer plus recursive descent. Precedence, tightest first:
unary sign, ``^``, ``*`` ``/``, ``+`` ``-``, ``&``, comparisons; all levels
left-associative; parentheses override. ``;`` is the canonical argument
separator, ``,`` is accepted on input.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from sheetlens.errors import FormulaSyntaxError, UnknownSheetError
from sheetlens.formula.catalog import DEFAULT_CATALOG, BuiltinCatalog
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
from sheetlens.model import MAX_COLS, MAX_ROWS, CellAddress, column_index, resolve_sheet


class Tok(Enum):
    NUMBER = "number"
    STRING = "string"
    IDENT = "identifier"
    REF = "cell reference"
    QUOTED = "quoted sheet name"
    EXTWB = "external workbook"
    PLUS = "+"
    MINUS = "-"
    STAR = "*"
    SLASH = "/"
    CARET = "^"
    AMP = "&"
    EQ = "="
    NEQ = "<>"
    LT = "<"
    GT = ">"
    LTEQ = "<="
    GTEQ = ">="
    LPAREN = "("
    RPAREN = ")"
    LBRACE = "{"
    RBRACE = "}"
    PIPE = "|"
    SEMI = ";"
    COMMA = ","
    COLON = ":"
    BANG = "!"
    END = "end of formula"


@dataclass(frozen=True)
class Token:
    type: Tok
    text: str
    offset: int


_NUMBER = re.compile(r"(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")
_REF = re.compile(r"(\$?)([A-Za-z]{1,3})(\$?)(\d+)")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*")

_TWO_CHAR = {"<>": Tok.NEQ, "<=": Tok.LTEQ, ">=": Tok.GTEQ}
_ONE_CHAR = {
    "+": Tok.PLUS, "-": Tok.MINUS, "*": Tok.STAR, "/": Tok.SLASH,
    "^": Tok.CARET, "&": Tok.AMP, "=": Tok.EQ, "<": Tok.LT, ">": Tok.GT,
    "(": Tok.LPAREN, ")": Tok.RPAREN, "{": Tok.LBRACE, "}": Tok.RBRACE,
    "|": Tok.PIPE, ";": Tok.SEMI, ",": Tok.COMMA, ":": Tok.COLON, "!": Tok.BANG,
}

_IDENT_CHARS = set("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_.")


def tokenize(text: str) -> list[Token]:
    """Lex formula body text (without the leading '=')."""
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        two = text[i:i + 2]
        if two in _TWO_CHAR:
            tokens.append(Token(_TWO_CHAR[two], two, i))
            i += 2
            continue
        if ch == '"':
            j = i + 1
            out = []
            while True:
                if j >= n:
                    raise FormulaSyntaxError("unterminated string literal", i)
                if text[j] == '"':
                    if j + 1 < n and text[j + 1] == '"':
                        out.append('"')
                        j += 2
                        continue
                    break
                out.append(text[j])
                j += 1
            tokens.append(Token(Tok.STRING, "".join(out), i))
            i = j + 1
            continue
        if ch == "'":
            j = i + 1
            out = []
            while True:
                if j >= n:
                    raise FormulaSyntaxError("unterminated quoted sheet name", i)
                if text[j] == "'":
                    if j + 1 < n and text[j + 1] == "'":
                        out.append("'")
                        j += 2
                        continue
                    break
                out.append(text[j])
                j += 1
            tokens.append(Token(Tok.QUOTED, "".join(out), i))
            i = j + 1
            continue
        if ch == "[":
            j = text.find("]", i + 1)
            if j < 0:
                raise FormulaSyntaxError("unterminated external workbook prefix", i)
            tokens.append(Token(Tok.EXTWB, text[i + 1:j], i))
            i = j + 1
            continue
        m = _NUMBER.match(text, i)
        if m and (ch.isdigit() or ch == "."):
            tokens.append(Token(Tok.NUMBER, m.group(0), i))
            i = m.end()
            continue
        if ch == "$" or ch.isalpha() or ch == "_":
            m = _REF.match(text, i)
            if m is not None:
                end = m.end()
                extends = end < n and text[end] in _IDENT_CHARS
                calls = end < n and text[end] == "("
                has_abs = bool(m.group(1) or m.group(3))
                in_grid = column_index(m.group(2)) <= MAX_COLS and int(m.group(4)) <= MAX_ROWS
                # A1-shaped text followed by "(" is a function name, not a ref.
                if not extends and in_grid and not (calls and not has_abs):
                    tokens.append(Token(Tok.REF, m.group(0), i))
                    i = end
                    continue
                if has_abs and (extends or not in_grid):
                    raise FormulaSyntaxError(f"reference {m.group(0)!r} outside grid", i)
            m = _IDENT.match(text, i)
            if m is None:
                raise FormulaSyntaxError(f"unexpected character {ch!r}", i)
            tokens.append(Token(Tok.IDENT, m.group(0), i))
            i = m.end()
            continue
        if ch in _ONE_CHAR:
            tokens.append(Token(_ONE_CHAR[ch], ch, i))
            i += 1
            continue
        raise FormulaSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(Token(Tok.END, "", n))
    return tokens


_CMP_OPS = {Tok.EQ: BinOp.EQ, Tok.NEQ: BinOp.NEQ, Tok.LT: BinOp.LT,
            Tok.GT: BinOp.GT, Tok.LTEQ: BinOp.LTEQ, Tok.GTEQ: BinOp.GTEQ}
_ADD_OPS = {Tok.PLUS: BinOp.ADD, Tok.MINUS: BinOp.SUB}
_MUL_OPS = {Tok.STAR: BinOp.MUL, Tok.SLASH: BinOp.DIV}


class _Parser:
    def __init__(self, text: str, anchor: CellAddress, sheet_names: list[str],
                 catalog: BuiltinCatalog, offset_base: int):
        self.tokens = tokenize(text)
        self.pos = 0
        self.anchor = anchor
        self.sheet_names = sheet_names
        self.catalog = catalog
        self.offset_base = offset_base

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def accept(self, ttype: Tok) -> Optional[Token]:
        if self.cur.type == ttype:
            return self.advance()
        return None

    def expect(self, ttype: Tok) -> Token:
        if self.cur.type == ttype:
            return self.advance()
        self.fail((ttype.value,))

    def fail(self, expected: tuple[str, ...]):
        got = self.cur.text or self.cur.type.value
        raise FormulaSyntaxError(
            f"unexpected {got!r}", self.offset_base + self.cur.offset, expected
        )

    # precedence ladder, loosest first
    def expression(self) -> FormulaAst:
        node = self.concat()
        while self.cur.type in _CMP_OPS:
            op = _CMP_OPS[self.advance().type]
            node = Binary(op, node, self.concat())
        return node

    def concat(self) -> FormulaAst:
        node = self.add_sub()
        while self.cur.type == Tok.AMP:
            self.advance()
            node = Binary(BinOp.CONCAT, node, self.add_sub())
        return node

    def add_sub(self) -> FormulaAst:
        node = self.mul_div()
        while self.cur.type in _ADD_OPS:
            op = _ADD_OPS[self.advance().type]
            node = Binary(op, node, self.mul_div())
        return node

    def mul_div(self) -> FormulaAst:
        node = self.power()
        while self.cur.type in _MUL_OPS:
            op = _MUL_OPS[self.advance().type]
            node = Binary(op, node, self.power())
        return node

    def power(self) -> FormulaAst:
        node = self.unary()
        while self.cur.type == Tok.CARET:
            self.advance()
            node = Binary(BinOp.POW, node, self.unary())
        return node

    def unary(self) -> FormulaAst:
        if self.cur.type == Tok.MINUS:
            self.advance()
            return Unary(UnOp.NEG, self.unary())
        if self.cur.type == Tok.PLUS:
            self.advance()
            return Unary(UnOp.PLUS, self.unary())
        return self.primary()

    def primary(self) -> FormulaAst:
        tok = self.cur
        if tok.type == Tok.NUMBER:
            self.advance()
            return NumberLit(float(tok.text))
        if tok.type == Tok.STRING:
            self.advance()
            return TextLit(tok.text)
        if tok.type == Tok.LPAREN:
            self.advance()
            node = self.expression()
            self.expect(Tok.RPAREN)
            return node
        if tok.type == Tok.LBRACE:
            return self.array_const()
        if tok.type == Tok.EXTWB:
            return self.external_ref()
        if tok.type == Tok.QUOTED:
            if tok.text.startswith("["):
                return self.external_ref_quoted()
            return self.sheet_qualified_ref()
        if tok.type == Tok.REF:
            if self.tokens[self.pos + 1].type == Tok.BANG:
                return self.sheet_qualified_ref()
            self.advance()
            ref = self.make_ref(tok, self.anchor.sheet, abs_sheet=False)
            return self.maybe_range(ref, abs_sheet=False, sheet=self.anchor.sheet)
        if tok.type == Tok.IDENT:
            if self.tokens[self.pos + 1].type == Tok.BANG:
                return self.sheet_qualified_ref()
            upper = tok.text.upper()
            if self.tokens[self.pos + 1].type == Tok.LPAREN:
                return self.function_call()
            if upper == "TRUE":
                self.advance()
                return BoolLit(True)
            if upper == "FALSE":
                self.advance()
                return BoolLit(False)
            self.fail(("function call", "TRUE", "FALSE"))
        self.fail(("number", "string", "cell reference", "function call", "("))

    def make_ref(self, tok: Token, sheet: int, abs_sheet: bool) -> CellRef:
        m = _REF.match(tok.text)
        col = column_index(m.group(2))
        row = int(m.group(4))
        return CellRef(
            target=CellAddress(sheet=sheet, row=row, col=col),
            abs_row=bool(m.group(3)),
            abs_col=bool(m.group(1)),
            abs_sheet=abs_sheet,
        )

    def maybe_range(self, start: CellRef, abs_sheet: bool, sheet: int) -> FormulaAst:
        if self.cur.type != Tok.COLON:
            return start
        self.advance()
        end_sheet = sheet
        end_abs_sheet = abs_sheet
        if self.cur.type in (Tok.QUOTED, Tok.IDENT) and self.tokens[self.pos + 1].type == Tok.BANG:
            name_tok = self.advance()
            self.advance()  # BANG
            end_sheet = self.lookup_sheet(name_tok)
            end_abs_sheet = True
        elif self.cur.type == Tok.REF and self.tokens[self.pos + 1].type == Tok.BANG:
            name_tok = self.advance()
            self.advance()
            end_sheet = self.lookup_sheet(name_tok)
            end_abs_sheet = True
        end_tok = self.expect(Tok.REF)
        end = self.make_ref(end_tok, end_sheet, end_abs_sheet)
        if end.target.sheet != start.target.sheet:
            raise FormulaSyntaxError(
                "range endpoints on different sheets",
                self.offset_base + end_tok.offset,
            )
        return normalize_range(start, end)

    def lookup_sheet(self, tok: Token) -> int:
        try:
            return resolve_sheet(tok.text, self.sheet_names)
        except UnknownSheetError:
            raise UnknownSheetError(
                f"unknown sheet {tok.text!r} at offset {self.offset_base + tok.offset}"
            ) from None

    def sheet_qualified_ref(self) -> FormulaAst:
        name_tok = self.advance()
        self.expect(Tok.BANG)
        sheet = self.lookup_sheet(name_tok)
        ref_tok = self.expect(Tok.REF)
        ref = self.make_ref(ref_tok, sheet, abs_sheet=True)
        return self.maybe_range(ref, abs_sheet=True, sheet=sheet)

    def external_ref(self) -> ExternalRef:
        wb_tok = self.advance()
        parts = [f"[{wb_tok.text}]"]
        name_tok = self.cur
        if name_tok.type not in (Tok.IDENT, Tok.REF, Tok.QUOTED):
            self.fail(("sheet name",))
        self.advance()
        if name_tok.type == Tok.QUOTED:
            parts.append("'" + name_tok.text.replace("'", "''") + "'")
        else:
            parts.append(name_tok.text)
        self.expect(Tok.BANG)
        parts.append("!")
        ref_tok = self.expect(Tok.REF)
        parts.append(ref_tok.text)
        if self.accept(Tok.COLON):
            end_tok = self.expect(Tok.REF)
            parts.append(f":{end_tok.text}")
        return ExternalRef(workbook=wb_tok.text, raw="".join(parts))

    def external_ref_quoted(self) -> ExternalRef:
        quoted = self.advance()
        m = re.match(r"^\[([^\]]+)\](.*)$", quoted.text)
        if not m:
            raise FormulaSyntaxError(
                "malformed external reference", self.offset_base + quoted.offset
            )
        self.expect(Tok.BANG)
        ref_tok = self.expect(Tok.REF)
        raw = "'" + quoted.text.replace("'", "''") + f"'!{ref_tok.text}"
        if self.accept(Tok.COLON):
            end_tok = self.expect(Tok.REF)
            raw += f":{end_tok.text}"
        return ExternalRef(workbook=m.group(1), raw=raw)

    def function_call(self) -> FunctionCall:
        name_tok = self.advance()
        name = name_tok.text.upper()
        self.expect(Tok.LPAREN)
        args: list[FormulaAst] = []
        if self.cur.type != Tok.RPAREN:
            args.append(self.expression())
            while self.cur.type in (Tok.SEMI, Tok.COMMA):
                self.advance()
                args.append(self.expression())
        self.expect(Tok.RPAREN)
        spec = self.catalog.get(name)
        if spec is not None and not (spec.min_arity <= len(args) <= spec.max_arity):
            raise FormulaSyntaxError(
                f"{name} takes {spec.min_arity}..{spec.max_arity} arguments, got {len(args)}",
                self.offset_base + name_tok.offset,
            )
        return FunctionCall(name=name, args=tuple(args))

    def array_const(self) -> ArrayConst:
        self.expect(Tok.LBRACE)
        rows: list[tuple[FormulaAst, ...]] = [self.array_row()]
        while self.accept(Tok.PIPE):
            rows.append(self.array_row())
        self.expect(Tok.RBRACE)
        return ArrayConst(rows=tuple(rows))

    def array_row(self) -> tuple[FormulaAst, ...]:
        items = [self.array_item()]
        while self.cur.type in (Tok.SEMI, Tok.COMMA):
            self.advance()
            items.append(self.array_item())
        return tuple(items)

    def array_item(self) -> FormulaAst:
        sign = 1.0
        while self.cur.type in (Tok.MINUS, Tok.PLUS):
            if self.advance().type == Tok.MINUS:
                sign = -sign
        tok = self.cur
        if tok.type == Tok.NUMBER:
            self.advance()
            return NumberLit(sign * float(tok.text))
        if sign == 1.0:
            if tok.type == Tok.STRING:
                self.advance()
                return TextLit(tok.text)
            if tok.type == Tok.IDENT and tok.text.upper() in ("TRUE", "FALSE"):
                self.advance()
                return BoolLit(tok.text.upper() == "TRUE")
        self.fail(("number", "string", "TRUE", "FALSE"))


def normalize_range(a: CellRef, b: CellRef) -> RangeRef:
    """Order endpoints so start.row <= end.row and start.col <= end.col,
    with absolute markers traveling with their coordinates."""
    (row1, abs_r1), (row2, abs_r2) = sorted([(a.target.row, a.abs_row), (b.target.row, b.abs_row)])
    (col1, abs_c1), (col2, abs_c2) = sorted([(a.target.col, a.abs_col), (b.target.col, b.abs_col)])
    sheet = a.target.sheet
    start = CellRef(CellAddress(sheet, row1, col1), abs_row=abs_r1, abs_col=abs_c1,
                    abs_sheet=a.abs_sheet)
    end = CellRef(CellAddress(sheet, row2, col2), abs_row=abs_r2, abs_col=abs_c2,
                  abs_sheet=b.abs_sheet)
    return RangeRef(start=start, end=end)


def parse_formula(
    text: str,
    anchor: CellAddress,
    sheet_names: list[str],
    catalog: BuiltinCatalog = DEFAULT_CATALOG,
) -> FormulaAst:
    """Parse formula source text (must start with '=') into an AST.

    References without a sheet prefix bind to ``anchor.sheet``. Character
    offsets in errors are 0-based into ``text``.
    """
    if not text.startswith("="):
        raise FormulaSyntaxError("formula must start with '='", 0, ("=",))
    parser = _Parser(text[1:], anchor, sheet_names, catalog, offset_base=1)
    node = parser.expression()
    if parser.cur.type != Tok.END:
        parser.fail(("end of formula",))
    return node
