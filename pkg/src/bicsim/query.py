"""Text syntax for bitmap queries.

Grammar (keywords case-insensitive, attributes numbered from 1)::

    or_expr   := and_expr ("OR" and_expr)*
    and_expr  := not_expr ("AND" not_expr)*
    not_expr  := "NOT" not_expr | "(" or_expr ")" | attribute
    attribute := "A" digits

so NOT binds tighter than AND, which binds tighter than OR.
"""

from __future__ import annotations

import re

from .errors import QuerySyntaxError, UnknownAttributeError
from .indexer import And, Leaf, Not, Or, QueryExpr

_TOKEN = re.compile(r"\s*(?:(?P<paren>[()])|(?P<word>[A-Za-z_][A-Za-z0-9_]*)|(?P<bad>\S))")
_ATTR = re.compile(r"[Aa]([0-9]+)")
_KEYWORDS = {"AND", "OR", "NOT"}


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group("bad"):
            raise QuerySyntaxError(f"unexpected character {m.group('bad')!r}", m.start("bad"))
        start = m.start("paren") if m.group("paren") else m.start("word")
        tokens.append((m.group("paren") or m.group("word"), start))
        pos = m.end()
    tokens.append(("", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, m: int):
        self.tokens = _tokenize(text)
        self.i = 0
        self.m = m

    @property
    def tok(self) -> tuple[str, int]:
        return self.tokens[self.i]

    def _is(self, keyword: str) -> bool:
        return self.tok[0].upper() == keyword

    def parse(self) -> QueryExpr:
        expr = self.or_expr()
        text, pos = self.tok
        if text:
            raise QuerySyntaxError(f"unexpected {text!r}", pos)
        return expr

    def or_expr(self) -> QueryExpr:
        terms = [self.and_expr()]
        while self._is("OR"):
            self.i += 1
            terms.append(self.and_expr())
        return terms[0] if len(terms) == 1 else Or(*terms)

    def and_expr(self) -> QueryExpr:
        terms = [self.not_expr()]
        while self._is("AND"):
            self.i += 1
            terms.append(self.not_expr())
        return terms[0] if len(terms) == 1 else And(*terms)

    def not_expr(self) -> QueryExpr:
        text, pos = self.tok
        if self._is("NOT"):
            self.i += 1
            return Not(self.not_expr())
        if text == "(":
            self.i += 1
            expr = self.or_expr()
            if self.tok[0] != ")":
                raise QuerySyntaxError("expected ')'", self.tok[1])
            self.i += 1
            return expr
        if not text:
            raise QuerySyntaxError("unexpected end of expression", pos)
        if text == ")" or text.upper() in _KEYWORDS:
            raise QuerySyntaxError(f"unexpected {text!r}", pos)
        m = _ATTR.fullmatch(text)
        if m is None or not 1 <= int(m.group(1)) <= self.m:
            raise UnknownAttributeError(text, pos, self.m)
        self.i += 1
        return Leaf(int(m.group(1)) - 1)


def parse_query(text: str, m: int) -> QueryExpr:
    """Parse ``text`` against an index with ``m`` attributes (A1..Am)."""
    return _Parser(text, m).parse()
