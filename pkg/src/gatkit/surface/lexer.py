"""Tokenizer for the ``.gat`` language.

Newlines end statements except inside brackets or after a token that cannot
end one (operators, ``⊣``, ``::``, ``==``, ``=>``, ``,``...).
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

from ..errors import GatSyntaxError

NAME, OP, PUNCT, STRING, NEWLINE, EOF = "NAME", "OP", "PUNCT", "STRING", "NEWLINE", "EOF"

_ASCII_FALLBACKS = {"->": "→", "|-": "⊣", "<=": "≤"}
_PUNCT2 = ("::", ":=", "==", "=>", "<:")
_PUNCT1 = "()[]{},;:="
_ASCII_OPS = set("+*-/<>^&|~%")
_TURNSTILE = "⊣"
_CONTINUATION = {"⊣", "::", ":=", "==", "=>", ",", "=", "(", "[", "{", "<:"}


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    col: int

    @property
    def span(self):
        return (self.line, self.col)

    def __repr__(self):
        return f"{self.kind}({self.value!r})@{self.line}:{self.col}"


def is_name_start(ch: str) -> bool:
    return ch.isidentifier()


def is_name_continue(ch: str) -> bool:
    return ("a" + ch).isidentifier() or unicodedata.category(ch) == "No" or ch in "′'"


def is_op_char(ch: str) -> bool:
    if ch in _ASCII_OPS:
        return True
    if ch == _TURNSTILE:
        return False
    return unicodedata.category(ch) in ("Sm", "So") or ch in "⋅·∗"


def is_name(text: str) -> bool:
    return bool(text) and is_name_start(text[0]) and all(is_name_continue(c) for c in text[1:])


def tokenize(src: str) -> list[Token]:
    toks: list[Token] = []
    depth = 0
    i, line, col = 0, 1, 1
    n = len(src)

    def emit(kind, value, l, c):
        toks.append(Token(kind, value, l, c))

    while i < n:
        ch = src[i]
        if ch == "\n":
            if depth == 0 and toks and toks[-1].kind != NEWLINE and not _continues(toks[-1]):
                emit(NEWLINE, "\n", line, col)
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and src[i] != "\n":
                i += 1
            continue
        start_col = col
        two = src[i:i + 2]
        if two in _ASCII_FALLBACKS:
            value = _ASCII_FALLBACKS[two]
            emit(PUNCT if value == _TURNSTILE else OP, value, line, start_col)
            i += 2
            col += 2
            continue
        if two in _PUNCT2:
            emit(PUNCT, two, line, start_col)
            i += 2
            col += 2
            continue
        if ch == _TURNSTILE:
            emit(PUNCT, ch, line, start_col)
            i += 1
            col += 1
            continue
        if ch in _PUNCT1:
            if ch in "([":
                depth += 1
            elif ch in ")]":
                depth = max(0, depth - 1)
            emit(PUNCT, ch, line, start_col)
            i += 1
            col += 1
            continue
        if ch == '"':
            j = i + 1
            buf = []
            while j < n and src[j] != '"':
                if src[j] == "\\" and j + 1 < n:
                    j += 1
                if src[j] == "\n":
                    raise GatSyntaxError("unterminated string", span=(line, start_col))
                buf.append(src[j])
                j += 1
            if j >= n:
                raise GatSyntaxError("unterminated string", span=(line, start_col))
            emit(STRING, "".join(buf), line, start_col)
            col += j + 1 - i
            i = j + 1
            continue
        if ch == "@" and i + 1 < n and is_name_start(src[i + 1]):
            j = i + 1
            while j < n and is_name_continue(src[j]):
                j += 1
            emit(NAME, src[i:j], line, start_col)
            col += j - i
            i = j
            continue
        if is_name_start(ch):
            j = i + 1
            while j < n and is_name_continue(src[j]):
                j += 1
            emit(NAME, src[i:j], line, start_col)
            col += j - i
            i = j
            continue
        if is_op_char(ch):
            emit(OP, ch, line, start_col)
            i += 1
            col += 1
            continue
        raise GatSyntaxError(f"unexpected character {ch!r}", span=(line, start_col))
    if toks and toks[-1].kind != NEWLINE:
        emit(NEWLINE, "\n", line, col)
    emit(EOF, "", line, col)
    return toks


def _continues(tok: Token) -> bool:
    return tok.kind == OP or (tok.kind == PUNCT and tok.value in _CONTINUATION)
