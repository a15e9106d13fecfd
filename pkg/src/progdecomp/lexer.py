"""Byte-level lexer for Java-like brace syntax.

Only as much lexing as structural parsing needs: string, char and text-block
literals and both comment forms are single opaque tokens, identifiers and
numbers are single tokens, and every other byte is its own punctuation token
(``...`` is the one multi-byte exception, needed for varargs detection).
"""

from __future__ import annotations

import re
from typing import NamedTuple

IDENT = "ident"
NUMBER = "number"
STRING = "string"
CHAR = "char"
PUNCT = "punct"
LINE_COMMENT = "line_comment"
BLOCK_COMMENT = "block_comment"

_TOKEN_RE = re.compile(
    rb"""
     (?P<ws>[\x20\t\r\n\f\v]+)
    |(?P<line_comment>//[^\n]*)
    |(?P<block_comment>/\*.*?(?:\*/|\Z))
    |(?P<text_block>\"\"\"(?:[^\\]|\\.)*?(?:\"\"\"|\Z))
    |(?P<string>"(?:[^"\\\n]|\\.)*(?:"|(?=\n)|\Z))
    |(?P<char>'(?:[^'\\\n]|\\.)*(?:'|(?=\n)|\Z))
    |(?P<ident>[A-Za-z_$\x80-\xff][A-Za-z0-9_$\x80-\xff]*)
    |(?P<number>[0-9][A-Za-z0-9_.]*)
    |(?P<ellipsis>\.\.\.)
    |(?P<punct>.)
    """,
    re.VERBOSE | re.DOTALL,
)


class Token(NamedTuple):
    kind: str
    start: int
    end: int
    text: bytes


def tokenize(content: bytes) -> tuple[list[Token], list[Token]]:
    """Split ``content`` into (significant tokens, comment tokens).

    Whitespace is dropped. Unterminated string/char literals end at the line
    break; an unterminated block comment runs to end of input.
    """
    tokens: list[Token] = []
    comments: list[Token] = []
    for m in _TOKEN_RE.finditer(content):
        kind = m.lastgroup
        if kind == "ws":
            continue
        if kind == "text_block":
            kind = STRING
        elif kind == "ellipsis":
            kind = PUNCT
        tok = Token(kind, m.start(), m.end(), m.group())
        if kind in (LINE_COMMENT, BLOCK_COMMENT):
            comments.append(tok)
        else:
            tokens.append(tok)
    return tokens, comments
