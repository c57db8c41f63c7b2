"""
DSL Parser - 群表达式与自同态描述的递归下降解析器

提供:
- parse_expr: "ext(torus(2), abelian(1; t^2+3t+5))" -> GroupExpr
- parse_endo: "frobenius(5)" / "scalar 1" / "block(ab.* : charpoly t^2+3t+5), ..." -> EndomorphismAction
- parse_intpoly / format_intpoly: 整系数多项式 (首项在前的系数元组)
- pretty_print: GroupExpr -> DSL 文本 (parse_expr 的逆)

语法错误带行 / 列与期望的记号；语义检查 (rank 范围、charpoly 次数) 留给 core_model.validate。
"""

import fnmatch
import re
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .cohomology import CohomologyPresentation, Generator
from .core_model import (
    CLASSICAL_FAMILIES,
    AbelianVariety,
    DynkinType,
    Extension,
    GroupExpr,
    Isogenous,
    Product,
    SimplyConnectedSimple,
    Torus,
    Trivial,
    Unipotent,
    builtin,
)
from .dynamics import Block, EndomorphismAction, IntCharPoly, RationalMatrix, frobenius_action
from .errors import DslSyntaxError, ShapeMismatch, UnknownLabel

MAX_INPUT_BYTES = 64 * 1024
MAX_NESTING = 256

EXPR_KEYWORDS = ("trivial", "Ga", "torus", "abelian", "simple", "ext", "prod", "isog", "GL", "SL", "PGL")
TYPE_NAMES = ("A<n>", "B<n>", "C<n>", "D<n>", "E6", "E7", "E8", "F4", "G2")
ENDO_ITEMS = ("frobenius", "scalar", "block")

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NAT = re.compile(r"[0-9]+")
_ORDINAL = re.compile(r"\.g(\d+)$")


class _Scanner:
    """Character-level cursor with line / column bookkeeping."""

    def __init__(self, text: str):
        if len(text.encode("utf-8")) > MAX_INPUT_BYTES:
            raise DslSyntaxError(f"input exceeds {MAX_INPUT_BYTES // 1024} KiB", 1, 1)
        self.text = text
        self.pos = 0

    def location(self, pos: Optional[int] = None) -> Tuple[int, int]:
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        column = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, column

    def error(self, message: str, expected: Sequence[str] = (), pos: Optional[int] = None) -> DslSyntaxError:
        line, column = self.location(pos)
        return DslSyntaxError(message, line, column, expected)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def found(self) -> str:
        ch = self.peek()
        return repr(ch) if ch else "end of input"

    def accept(self, literal: str) -> bool:
        self.skip_ws()
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def expect(self, literal: str) -> None:
        if not self.accept(literal):
            raise self.error(f"unexpected {self.found()}", [repr(literal)])

    def match(self, pattern: "re.Pattern") -> Optional[str]:
        self.skip_ws()
        m = pattern.match(self.text, self.pos)
        if not m:
            return None
        self.pos = m.end()
        return m.group(0)

    def ident(self, expected: Sequence[str]) -> str:
        word = self.match(_IDENT)
        if word is None:
            raise self.error(f"unexpected {self.found()}", expected)
        return word

    def nat(self) -> int:
        digits = self.match(_NAT)
        if digits is None:
            raise self.error(f"unexpected {self.found()}", ["natural number"])
        return int(digits)

    def rational(self) -> Fraction:
        start = self.pos
        sign = -1 if self.accept("-") else 1
        if sign == 1:
            self.accept("+")
        numerator = self.nat()
        denominator = 1
        if self.accept("/"):
            denominator = self.nat()
            if denominator == 0:
                raise self.error("zero denominator", ["nonzero natural number"], pos=start)
        return sign * Fraction(numerator, denominator)

    def finish(self) -> None:
        if not self.at_end():
            raise self.error(f"trailing input {self.found()}", ["end of input"])


# Integer polynomials

def _parse_intpoly(scanner: _Scanner, stop: str) -> Tuple[int, ...]:
    """Sum of terms [sign][coef][t[^k]]; stops before `stop` or end of input."""
    terms: Dict[int, int] = {}
    scanner.skip_ws()
    poly_start = scanner.pos
    first = True
    while True:
        start = scanner.pos
        sign = 1
        if scanner.accept("-"):
            sign = -1
        elif not scanner.accept("+") and not first:
            break
        first = False
        coef = None
        digits = scanner.match(_NAT)
        if digits is not None:
            coef = int(digits)
            scanner.accept("*")
        power = 0
        if scanner.accept("t"):
            power = 1
            if scanner.accept("^"):
                power = scanner.nat()
        elif coef is None:
            raise scanner.error(f"unexpected {scanner.found()}", ["integer", "'t'"], pos=start)
        terms[power] = terms.get(power, 0) + sign * (1 if coef is None else coef)
        if scanner.peek() in (stop, ""):
            break
    nonzero = [k for k, c in terms.items() if c != 0]
    if not nonzero:
        raise scanner.error("polynomial cancels to 0", ["nonzero polynomial"], pos=poly_start)
    degree = max(nonzero)
    return tuple(terms.get(k, 0) for k in range(degree, -1, -1))


def parse_intpoly(text: str) -> Tuple[int, ...]:
    """"t^2+3t+5" -> (1, 3, 5)"""
    scanner = _Scanner(text)
    coeffs = _parse_intpoly(scanner, "")
    scanner.finish()
    return coeffs


def format_intpoly(coeffs: Sequence[int]) -> str:
    degree = len(coeffs) - 1
    parts: List[str] = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        power = degree - i
        sign = "-" if c < 0 else "+"
        magnitude = abs(c)
        if power == 0:
            body = str(magnitude)
        else:
            body = "" if magnitude == 1 else str(magnitude)
            body += "t" if power == 1 else f"t^{power}"
        parts.append(sign + body)
    if not parts:
        return "0"
    text = "".join(parts)
    return text[1:] if text.startswith("+") else text


# Group expressions

class _ExprParser:
    def __init__(self, text: str):
        self.scanner = _Scanner(text)
        self.depth = 0

    def parse(self) -> GroupExpr:
        expr = self.expr()
        self.scanner.finish()
        return expr

    def expr(self) -> GroupExpr:
        s = self.scanner
        s.skip_ws()
        start = s.pos
        self.depth += 1
        if self.depth > MAX_NESTING:
            raise s.error(f"nesting deeper than {MAX_NESTING}")
        try:
            keyword = s.ident(EXPR_KEYWORDS)
            if keyword == "trivial":
                return Trivial()
            if keyword not in EXPR_KEYWORDS:
                raise s.error(f"unknown constructor {keyword!r}", EXPR_KEYWORDS, pos=start)
            s.expect("(")
            node = self._arguments(keyword)
            s.expect(")")
            return node
        finally:
            self.depth -= 1

    def _arguments(self, keyword: str) -> GroupExpr:
        s = self.scanner
        if keyword == "Ga":
            return Unipotent(s.nat())
        if keyword == "torus":
            return Torus(s.nat())
        if keyword == "abelian":
            g = s.nat()
            charpoly = _parse_intpoly(s, ")") if s.accept(";") else None
            return AbelianVariety(g, charpoly)
        if keyword == "simple":
            s.skip_ws()
            type_pos = s.pos
            name = s.ident(TYPE_NAMES)
            if name in CLASSICAL_FAMILIES:
                name += str(s.nat())
            try:
                return SimplyConnectedSimple(DynkinType.of(name))
            except ValueError:
                raise s.error(f"unknown Dynkin type {name!r}", TYPE_NAMES, pos=type_pos) from None
        if keyword == "ext":
            normal = self.expr()
            s.expect(",")
            return Extension(normal, self.expr())
        if keyword == "prod":
            factors = [self.expr()]
            while s.accept(","):
                factors.append(self.expr())
            return Product(tuple(factors))
        if keyword == "isog":
            return Isogenous(self.expr())
        # GL / SL / PGL
        s.skip_ws()
        n_pos = s.pos
        n = s.nat()
        if n < 1:
            raise s.error(f"{keyword}(n) needs n >= 1", ["positive integer"], pos=n_pos)
        return builtin(keyword, n)


def parse_expr(text: str) -> GroupExpr:
    """
    解析群表达式

    Raises:
        DslSyntaxError: 带行 / 列与期望记号
    """
    return _ExprParser(text).parse()


def pretty_print(expr: GroupExpr) -> str:
    if isinstance(expr, Trivial):
        return "trivial"
    if isinstance(expr, Unipotent):
        return f"Ga({expr.dim})"
    if isinstance(expr, Torus):
        return f"torus({expr.rank})"
    if isinstance(expr, AbelianVariety):
        if expr.frobenius_charpoly is None:
            return f"abelian({expr.g})"
        return f"abelian({expr.g}; {format_intpoly(expr.frobenius_charpoly)})"
    if isinstance(expr, SimplyConnectedSimple):
        return f"simple({expr.type.name})"
    if isinstance(expr, Extension):
        return f"ext({pretty_print(expr.normal)}, {pretty_print(expr.quotient)})"
    if isinstance(expr, Product):
        return f"prod({', '.join(pretty_print(f) for f in expr.factors)})"
    if isinstance(expr, Isogenous):
        return f"isog({pretty_print(expr.inner)})"
    raise TypeError(f"not a group expression: {expr!r}")


# Endomorphism specs

def _label_order(generator: Generator) -> Tuple[int, str, int]:
    m = _ORDINAL.search(generator.label)
    ordinal = int(m.group(1)) if m else 0
    return generator.degree, _ORDINAL.sub("", generator.label), ordinal


def match_labels(pres: CohomologyPresentation, glob: str) -> List[str]:
    """Labels whose full text or any dot-suffix matches the glob, in natural generator order."""
    matched = []
    for g in sorted(pres.generators, key=_label_order):
        parts = g.label.split(".")
        suffixes = (".".join(parts[i:]) for i in range(len(parts)))
        if any(fnmatch.fnmatchcase(suffix, glob) for suffix in suffixes):
            matched.append(g.label)
    return matched


class _EndoParser:
    def __init__(self, text: str, pres: CohomologyPresentation):
        self.scanner = _Scanner(text)
        self.pres = pres

    def parse(self) -> EndomorphismAction:
        s = self.scanner
        base: Optional[Tuple[str, object]] = None
        overrides: List[Block] = []
        while True:
            s.skip_ws()
            start = s.pos
            item = s.ident(ENDO_ITEMS)
            if item == "block":
                overrides.extend(self._block())
            elif item in ("frobenius", "scalar"):
                if base is not None:
                    raise s.error("only one of frobenius(...) / scalar may set the base action", pos=start)
                base = (item, self._frobenius_q() if item == "frobenius" else s.rational())
            else:
                raise s.error(f"unknown endomorphism item {item!r}", ENDO_ITEMS, pos=start)
            if not s.accept(","):
                break
        s.finish()

        covered = {label for block in overrides for label in block.labels}
        if base is None:
            base_action = EndomorphismAction()
        elif base[0] == "frobenius":
            base_action = frobenius_action(self.pres, base[1], overridden=covered)
        else:
            base_action = EndomorphismAction.scalar(self.pres, base[1])
        kept = [b for b in base_action.blocks if not covered.intersection(b.labels)]
        return EndomorphismAction(tuple(kept) + tuple(overrides))

    def _frobenius_q(self) -> int:
        s = self.scanner
        s.expect("(")
        q = s.nat()
        s.expect(")")
        return q

    def _block(self) -> List[Block]:
        s = self.scanner
        s.expect("(")
        glob_start = s.pos
        end = s.text.find(":", s.pos)
        if end < 0:
            raise s.error("block needs '<label-glob> : <action>'", ["':'"])
        glob = s.text[s.pos:end].strip()
        if not glob:
            raise s.error("empty label glob", ["label glob"], pos=glob_start)
        s.pos = end + 1
        labels = match_labels(self.pres, glob)
        if not labels:
            raise UnknownLabel(f"glob {glob!r} matches no generator", hint=f"labels are {self.pres.labels}")

        kind = s.ident(("matrix", "charpoly", "scalar"))
        if kind == "scalar":
            value = s.rational()
            blocks = [Block((label,), RationalMatrix.scalar(value)) for label in labels]
        elif kind == "matrix":
            rows = self._matrix()
            if len(rows) != len(labels) or any(len(row) != len(labels) for row in rows):
                raise ShapeMismatch(f"glob {glob!r} matches {len(labels)} generators but the matrix is not {len(labels)}x{len(labels)}")
            blocks = [Block(tuple(labels), RationalMatrix.of(rows))]
        elif kind == "charpoly":
            coeffs = _parse_intpoly(s, ")")
            if len(coeffs) - 1 != len(labels):
                raise ShapeMismatch(f"glob {glob!r} matches {len(labels)} generators but the charpoly has degree {len(coeffs) - 1}")
            if coeffs[0] != 1:
                raise ShapeMismatch(f"charpoly {format_intpoly(coeffs)} is not monic")
            blocks = [Block(tuple(labels), IntCharPoly(coeffs))]
        else:
            raise s.error(f"unknown block action {kind!r}", ["matrix", "charpoly", "scalar"])
        s.expect(")")
        return blocks

    def _matrix(self) -> List[List[Fraction]]:
        s = self.scanner
        s.expect("[")
        rows = [self._row()]
        while s.accept(","):
            rows.append(self._row())
        s.expect("]")
        return rows

    def _row(self) -> List[Fraction]:
        s = self.scanner
        s.expect("[")
        row = [s.rational()]
        while s.accept(","):
            row.append(s.rational())
        s.expect("]")
        return row


def parse_endo(text: str, pres: CohomologyPresentation) -> EndomorphismAction:
    """
    解析自同态描述；block 覆盖 frobenius / scalar 基础动作中与之相交的块

    Raises:
        DslSyntaxError / UnknownLabel / ShapeMismatch
    """
    return _EndoParser(text, pres).parse()
