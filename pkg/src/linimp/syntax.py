"""Concrete syntax for terms.

    t ::= \\x y !z. t | t t | !t | <> | <t; l=u; ...> | t.l | #name | x | (t)

Application is left associative, `!` binds tighter than application and
selection `.l` tighter than `!`.  `λ` is accepted in place of the backslash.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .terms import App, Bang, BangLam, EmptyRecord, Lam, Param, RecordExt, Select, Term, Var


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<number>[0-9]+)
  | (?P<punct>-o|\|-|[\\λ!.()<>;=#,\[\]*|~])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            tokens.append(Token(kind, chunk, line, pos - line_start + 1))
        for i, ch in enumerate(chunk):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self, k: int = 0) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        self.i += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.text == text

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.kind != "punct" or tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok.line, tok.col)
        return tok

    def ident(self) -> str:
        tok = self.next()
        if tok.kind not in ("ident", "number"):
            raise ParseError(f"expected a name, found {tok.text or 'end of input'!r}", tok.line, tok.col)
        return tok.text

    def error(self, message: str) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.line, tok.col)


def _starts_atom(ts: TokenStream) -> bool:
    tok = ts.peek()
    if tok.kind in ("ident", "number"):
        return True
    return tok.kind == "punct" and tok.text in ("(", "<", "#", "!", "\\", "λ")


def _parse_term(ts: TokenStream) -> Term:
    if ts.at("\\") or ts.at("λ"):
        ts.next()
        binders: list[str] = []
        while not ts.at("."):
            if ts.at("!"):
                ts.next()
                binders.append("!" + ts.ident())
            else:
                binders.append(ts.ident())
        if not binders:
            raise ts.error("abstraction without binder")
        ts.expect(".")
        body = _parse_term(ts)
        for b in reversed(binders):
            body = BangLam(b[1:], body) if b.startswith("!") else Lam(b, body)
        return body
    head = _parse_prefix(ts)
    while _starts_atom(ts):
        if ts.at("\\") or ts.at("λ"):
            return App(head, _parse_term(ts))
        head = App(head, _parse_prefix(ts))
    return head


def _parse_prefix(ts: TokenStream) -> Term:
    if ts.at("!"):
        ts.next()
        return Bang(_parse_prefix(ts))
    return _parse_postfix(ts)


def _parse_postfix(ts: TokenStream) -> Term:
    t = _parse_atom(ts)
    while ts.at(".") and ts.peek(1).kind in ("ident", "number"):
        ts.next()
        t = Select(t, ts.ident())
    return t


def _parse_atom(ts: TokenStream) -> Term:
    tok = ts.peek()
    if tok.kind in ("ident", "number"):
        ts.next()
        return Var(tok.text)
    if ts.at("#"):
        ts.next()
        return Param(ts.ident())
    if ts.at("("):
        ts.next()
        t = _parse_term(ts)
        ts.expect(")")
        return t
    if ts.at("<"):
        ts.next()
        if ts.at(">"):
            ts.next()
            return EmptyRecord()
        t = _parse_term(ts)
        while ts.at(";"):
            ts.next()
            label = ts.ident()
            ts.expect("=")
            t = RecordExt(t, label, _parse_term(ts))
        ts.expect(">")
        return t
    raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.line, tok.col)


def parse_term(text: str) -> Term:
    ts = TokenStream(tokenize(text))
    t = _parse_term(ts)
    if ts.peek().kind != "eof":
        raise ts.error(f"trailing input {ts.peek().text!r}")
    return t
