"""
Recursive-descent parser for ASCII polynomial expressions.

Grammar::

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' nat)?
    base   := ident | int | '(' expr ')'
    ident  := [a-zA-Z][a-zA-Z0-9_]*

The optional leading minus lets every canonical printing parse back.
Parsing builds a syntax tree first and resolves identifiers afterwards, so a
malformed input is always reported as a syntax error even when it also
contains unknown names.
"""

from __future__ import annotations

import re
from typing import List, NamedTuple

from .errors import ExprSyntaxError, UnknownIdentifierError
from .poly import ZZ, CoefficientDomain, Polynomial, VariableTable

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*^()]))")


class Token(NamedTuple):
    kind: str  # int | ident | op | end
    text: str
    pos: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = pos + len(text[pos:]) - len(text[pos:].lstrip())
            if rest >= len(text):
                break
            raise ExprSyntaxError(f"unexpected character {text[rest]!r}", text, rest)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append(Token(kind, m.group(kind), start))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, message, tok=None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ExprSyntaxError(f"{message}, found {found}", self.text, tok.pos)

    def take(self, text=None, kind=None):
        tok = self.tok
        if (text is not None and tok.text != text) or (kind is not None and tok.kind != kind):
            return None
        self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            self.error("expected operator")
        return node

    def expr(self):
        items = []
        lead = self.take("-")
        items.append((-1 if lead else 1, self.term()))
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            sign = 1 if self.take().text == "+" else -1
            items.append((sign, self.term()))
        return ("add", items)

    def term(self):
        factors = [self.factor()]
        while self.take("*"):
            factors.append(self.factor())
        return ("mul", factors)

    def factor(self):
        base = self.base()
        if self.take("^"):
            tok = self.take(kind="int")
            if tok is None:
                self.error("expected non-negative integer exponent after '^'")
            return ("pow", base, int(tok.text))
        return base

    def base(self):
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            return ("int", int(tok.text), tok.pos)
        if tok.kind == "ident":
            self.i += 1
            return ("var", tok.text, tok.pos)
        if self.take("("):
            node = self.expr()
            if not self.take(")"):
                self.error("expected ')'")
            return node
        self.error("expected identifier, integer or '('")


def parse_tree(text: str):
    """Syntax tree for ``text``; raises :class:`ExprSyntaxError`."""
    return _Parser(text).parse()


def _evaluate(node, table, domain, text):
    kind = node[0]
    if kind == "int":
        return Polynomial.constant(table, domain, node[1])
    if kind == "var":
        name = node[1]
        if name not in table:
            raise UnknownIdentifierError(f"unknown identifier {name!r}", text, node[2])
        return Polynomial.var(table, domain, name)
    if kind == "pow":
        return _evaluate(node[1], table, domain, text) ** node[2]
    if kind == "mul":
        acc = Polynomial.constant(table, domain, 1)
        for f in node[1]:
            acc = acc * _evaluate(f, table, domain, text)
        return acc
    acc = Polynomial.zero(table, domain)
    for sign, t in node[1]:
        val = _evaluate(t, table, domain, text)
        acc = acc + val if sign > 0 else acc - val
    return acc


def parse_expr(text: str, table: VariableTable, domain: CoefficientDomain = ZZ) -> Polynomial:
    """Parse ``text`` into a polynomial over ``table`` and ``domain``.

    >>> T = VariableTable(("s", "t"))
    >>> str(parse_expr("(s+t)^2", T))
    's^2 + 2*s*t + t^2'
    """
    tree = parse_tree(text)
    return _evaluate(tree, table, domain, text)
