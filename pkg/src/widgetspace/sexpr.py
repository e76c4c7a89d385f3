"""Tokenizer and reader for the package's s-expression surface syntaxes.

The datum dump grammar, the table file format, and the schema language
all share one token alphabet: parens, brackets, double-quoted strings
with ``\\"`` and ``\\\\`` escapes, integers, and bare atoms. Tokens carry
both a byte offset (datum diagnostics) and a line/column pair (schema
diagnostics). ``;`` starts a comment running to end of line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_INT_RE = re.compile(r"-?[0-9]+\Z")
_ATOM_END = set(' \t\r\n()[]";')
_SYMBOL_RE = re.compile(r"[a-z0-9][a-z0-9_-]*\Z")


class SexprError(Exception):
    """Lexical or structural fault in s-expression text."""

    def __init__(self, message: str, offset: int, line: int, col: int):
        super().__init__(message)
        self.offset = offset
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str  # one of ( ) [ ] string int atom
    value: object
    offset: int  # byte offset into the UTF-8 encoding of the source
    line: int
    col: int


@dataclass(frozen=True)
class ListNode:
    """A parenthesized form, for grammars read as whole trees."""

    items: tuple
    offset: int
    line: int
    col: int


def normalize_symbol(text: str) -> str:
    """Canonical spelling of a symbol: lowercase, optional leading ':' dropped."""
    text = text.lower()
    if text.startswith(":"):
        text = text[1:]
    return text


def is_valid_symbol(text: str) -> bool:
    # all-digit words lex as integers, so they cannot serve as symbols
    return bool(_SYMBOL_RE.match(text)) and not _INT_RE.match(text)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    n = len(text)
    offset = 0
    line = 1
    col = 1

    def step(ch: str):
        nonlocal offset, line, col
        offset += len(ch.encode("utf-8"))
        if ch == "\n":
            line += 1
            col = 1
        else:
            col += 1

    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            step(ch)
            i += 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                step(text[i])
                i += 1
            continue
        start = (offset, line, col)
        if ch in "()[]":
            tokens.append(Token(ch, ch, *start))
            step(ch)
            i += 1
            continue
        if ch == '"':
            step(ch)
            i += 1
            parts: list[str] = []
            closed = False
            while i < n:
                c = text[i]
                if c == '"':
                    step(c)
                    i += 1
                    closed = True
                    break
                if c == "\\":
                    if i + 1 >= n or text[i + 1] not in '"\\':
                        raise SexprError("invalid escape in string", offset, line, col)
                    parts.append(text[i + 1])
                    step(c)
                    step(text[i + 1])
                    i += 2
                    continue
                if c < " " or c == "\x7f":
                    raise SexprError("control character in string", offset, line, col)
                parts.append(c)
                step(c)
                i += 1
            if not closed:
                raise SexprError("unterminated string", *start)
            tokens.append(Token("string", "".join(parts), *start))
            continue
        # bare atom or integer
        j = i
        while j < n and text[j] not in _ATOM_END:
            j += 1
        word = text[i:j]
        if word in ("", "\\"):
            raise SexprError(f"unexpected character {ch!r}", *start)
        for c in word:
            step(c)
        i = j
        if _INT_RE.match(word):
            tokens.append(Token("int", int(word), *start))
        else:
            tokens.append(Token("atom", word, *start))
    return tokens


class TokenStream:
    def __init__(self, tokens: list[Token], *, end_offset: int = 0,
                 end_line: int = 1, end_col: int = 1):
        self._tokens = tokens
        self._pos = 0
        self._end = (end_offset, end_line, end_col)

    @classmethod
    def from_text(cls, text: str) -> "TokenStream":
        tokens = tokenize(text)
        raw = text.encode("utf-8")
        end_line = text.count("\n") + 1
        last_nl = text.rfind("\n")
        end_col = len(text) - last_nl if last_nl >= 0 else len(text) + 1
        return cls(tokens, end_offset=len(raw), end_line=end_line, end_col=end_col)

    def at_end(self) -> bool:
        return self._pos >= len(self._tokens)

    def peek(self) -> Token | None:
        if self.at_end():
            return None
        return self._tokens[self._pos]

    def next(self, expected: str = "a token") -> Token:
        if self.at_end():
            raise SexprError(f"unexpected end of input, expected {expected}", *self._end)
        tok = self._tokens[self._pos]
        self._pos += 1
        return tok

    def expect(self, kind: str, expected: str | None = None) -> Token:
        what = expected or f"'{kind}'"
        tok = self.next(what)
        if tok.kind != kind:
            raise SexprError(f"expected {what}, found {describe(tok)}",
                             tok.offset, tok.line, tok.col)
        return tok


def describe(tok: Token) -> str:
    if tok.kind == "string":
        return "a string"
    if tok.kind == "int":
        return f"integer {tok.value}"
    if tok.kind == "atom":
        return f"'{tok.value}'"
    return f"'{tok.kind}'"


def read_forms(text: str) -> list[ListNode]:
    """Read schema-style source as a list of parenthesized top-level forms."""
    ts = TokenStream.from_text(text)
    forms = []
    while not ts.at_end():
        node = _read_node(ts)
        if not isinstance(node, ListNode):
            raise SexprError("expected a parenthesized form at top level",
                             node.offset, node.line, node.col)
        forms.append(node)
    return forms


def _read_node(ts: TokenStream):
    tok = ts.next("a form")
    if tok.kind in (")", "]"):
        raise SexprError(f"unbalanced '{tok.kind}'", tok.offset, tok.line, tok.col)
    if tok.kind == "[":
        raise SexprError("brackets are not part of this grammar",
                         tok.offset, tok.line, tok.col)
    if tok.kind == "(":
        items = []
        while True:
            nxt = ts.peek()
            if nxt is None:
                raise SexprError("unclosed '('", tok.offset, tok.line, tok.col)
            if nxt.kind == ")":
                ts.next()
                return ListNode(tuple(items), tok.offset, tok.line, tok.col)
            items.append(_read_node(ts))
    return tok
