"""Textual front end: polynomials, equations, and representation files.

Grammar (LL(1), whitespace between tokens ignored):

    expression := [ '+' | '-' ] term { ('+' | '-') term }
    term       := factor { '*' factor }
    factor     := base [ '^' INT ]
    base       := INT | VAR | '(' expression ')'

INT is an unsigned decimal literal, VAR is `x` followed by a 1-based decimal
index.  Implicit multiplication is not allowed.  Exponents are capped at
2**31 - 1; anything larger would produce reductions of absurd size anyway.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FormatError, ParseError
from .poly import Polynomial

MAX_EXPONENT = 2**31 - 1

_OPS = frozenset("+-*^()=")


@dataclass(frozen=True)
class EquationSource:
    """A parsed equation `lhs = rhs` with its normalized form lhs - rhs."""

    lhs: Polynomial
    rhs: Polynomial
    normalized: Polynomial


@dataclass(frozen=True)
class FnRepresentation:
    """A polynomial W over r variables encoding x1 = f(x2).

    Variable roles: x1 is the output, x2 the argument, x3..xr existential.
    """

    w: Polynomial
    r: int


# --------------------------------------------------------------------------
# tokenizer

def _tokenize(text: str) -> list[tuple[str, object, int]]:
    """Return (kind, value, offset) triples; kinds: int, var, op, end."""
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        start = i
        if ch.isdigit():
            while i < n and text[i].isdigit():
                i += 1
            tokens.append(("int", int(text[start:i]), start))
        elif ch == "x":
            i += 1
            if i >= n or not text[i].isdigit():
                raise ParseError("expected variable index after 'x'", start)
            while i < n and text[i].isdigit():
                i += 1
            index = int(text[start + 1:i])
            if index < 1:
                raise ParseError(f"variable index must be >= 1, got x{index}", start)
            tokens.append(("var", index, start))
        elif ch in _OPS:
            tokens.append(("op", ch, start))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", start)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.max_var = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, value, offset = self.peek()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}", offset)
        return self.advance()

    # Nodes are tuples: ("int", v) ("var", i) ("neg", a)
    # ("add"/"sub"/"mul", a, b) ("pow", a, k)

    def expression(self):
        kind, value, _ = self.peek()
        negate = False
        if kind == "op" and value in "+-":
            negate = value == "-"
            self.advance()
        node = self.term()
        if negate:
            node = ("neg", node)
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                rhs = self.term()
                node = ("add" if value == "+" else "sub", node, rhs)
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.advance()
                node = ("mul", node, self.factor())
            else:
                return node

    def factor(self):
        node = self.base()
        kind, value, offset = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            kind, value, offset = self.peek()
            if kind != "int":
                raise ParseError("expected integer exponent after '^'", offset)
            if value > MAX_EXPONENT:
                raise ParseError(f"exponent {value} exceeds {MAX_EXPONENT}", offset)
            self.advance()
            node = ("pow", node, value)
        return node

    def base(self):
        kind, value, offset = self.advance()
        if kind == "int":
            return ("int", value)
        if kind == "var":
            self.max_var = max(self.max_var, value)
            return ("var", value)
        if kind == "op" and value == "(":
            node = self.expression()
            self.expect_op(")")
            return node
        raise ParseError("syntax error", offset)


def _build(node, arity: int) -> Polynomial:
    op = node[0]
    if op == "int":
        return Polynomial.constant(arity, node[1])
    if op == "var":
        return Polynomial.variable(arity, node[1])
    if op == "neg":
        return -_build(node[1], arity)
    if op == "pow":
        return _build(node[1], arity) ** node[2]
    a = _build(node[1], arity)
    b = _build(node[2], arity)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    return a * b


# --------------------------------------------------------------------------
# public API

def parse_polynomial(text: str, arity: int | None = None) -> Polynomial:
    """Parse a polynomial; `arity` defaults to the largest index mentioned."""
    parser = _Parser(text)
    if parser.peek()[0] == "end":
        raise ParseError("empty input", 0)
    node = parser.expression()
    kind, _, offset = parser.peek()
    if kind != "end":
        raise ParseError("trailing input", offset)
    if arity is None:
        arity = parser.max_var
    elif parser.max_var > arity:
        raise ParseError(
            f"variable x{parser.max_var} exceeds declared arity {arity}")
    return _build(node, arity)


def parse_equation(text: str, arity: int | None = None) -> EquationSource:
    """Parse `P = Q`; the normalized polynomial is P - Q."""
    parser = _Parser(text)
    if parser.peek()[0] == "end":
        raise ParseError("empty input", 0)
    lhs_node = parser.expression()
    kind, value, offset = parser.peek()
    if kind != "op" or value != "=":
        raise ParseError("missing equals sign", offset)
    parser.advance()
    rhs_node = parser.expression()
    kind, _, offset = parser.peek()
    if kind != "end":
        raise ParseError("trailing input", offset)
    if arity is None:
        arity = parser.max_var
    elif parser.max_var > arity:
        raise ParseError(
            f"variable x{parser.max_var} exceeds declared arity {arity}")
    lhs = _build(lhs_node, arity)
    rhs = _build(rhs_node, arity)
    return EquationSource(lhs=lhs, rhs=rhs, normalized=lhs - rhs)


def format_polynomial(poly: Polynomial) -> str:
    """Canonical graded-lex rendering; parse(format(P)) == P."""
    if poly.is_zero():
        return "0"
    pieces = []
    for position, (exps, coeff) in enumerate(poly.sorted_terms()):
        mono = "*".join(
            f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}"
            for i, e in enumerate(exps) if e)
        mag = abs(coeff)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if position == 0:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(pieces)


def format_equation(eq: EquationSource) -> str:
    return f"{format_polynomial(eq.lhs)} = {format_polynomial(eq.rhs)}"


# --------------------------------------------------------------------------
# representation files (.rep)

def parse_rep(text: str) -> FnRepresentation:
    """Parse a representation file: `REP r=<count>` then the polynomial."""
    lines = [ln for ln in text.splitlines()
             if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise FormatError("empty representation file")
    header = lines[0].strip()
    if not header.startswith("REP "):
        raise FormatError("representation file must start with 'REP r=<count>'")
    spec = header[4:].strip()
    if not spec.startswith("r="):
        raise FormatError("representation header must declare r=<count>")
    try:
        r = int(spec[2:])
    except ValueError as exc:
        raise FormatError(f"bad variable count {spec[2:]!r}") from exc
    if r < 2:
        raise FormatError("a representation needs at least x1 and x2 (r >= 2)")
    if len(lines) != 2:
        raise FormatError("expected exactly one polynomial line after the header")
    w = parse_polynomial(lines[1].strip(), arity=r)
    return FnRepresentation(w=w, r=r)


def format_rep(rep: FnRepresentation) -> str:
    return f"REP r={rep.r}\n{format_polynomial(rep.w)}\n"
