"""Tokenizer for behavior-definition files."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..behavior import NAME_PATTERN
from .source import Diagnostic, Span

KEYWORDS = frozenset(
    {
        "behavior", "extends", "refine", "trait",
        "add", "before", "after", "update", "delete", "map", "with", "assign", "apply",
        "null", "as",
    }
)

_TOKEN_RE = re.compile(
    rf"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<name>{NAME_PATTERN}(?:\.{NAME_PATTERN})*)
  | (?P<punct>[{{}}:])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "name", a keyword, "{", "}", ":", or "eof"
    text: str
    span: Span
    end_line: int
    end_column: int


def tokenize(source: str) -> tuple[list[Token], list[Diagnostic]]:
    tokens: list[Token] = []
    diagnostics: list[Diagnostic] = []
    pos = 0
    byte = 0
    line, col = 1, 1

    def advance(text: str) -> None:
        nonlocal pos, byte, line, col
        pos += len(text)
        byte += len(text.encode("utf-8"))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)

    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            ch = source[pos]
            diagnostics.append(
                Diagnostic(
                    "error", "Syntax", f"unexpected character {ch!r}",
                    Span(byte, byte + len(ch.encode("utf-8")), line, col),
                )
            )
            advance(ch)
            continue
        text = m.group()
        kind = m.lastgroup
        if kind in ("ws", "comment"):
            advance(text)
            continue
        start, sline, scol = byte, line, col
        advance(text)
        if kind == "name":
            kind = text if text in KEYWORDS else "name"
        else:
            kind = text
        tokens.append(Token(kind, text, Span(start, byte, sline, scol), line, col))
    tokens.append(Token("eof", "", Span.point(byte, line, col), line, col))
    return tokens, diagnostics
