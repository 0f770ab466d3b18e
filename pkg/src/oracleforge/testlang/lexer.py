"""Tokenizer for the test subset."""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError

_NUMBER_RE = re.compile(
    r"0[xX][0-9a-fA-F]+[lL]?"
    r"|\d+\.\d*(?:[eE][+-]?\d+)?[fFdD]?"
    r"|\.\d+(?:[eE][+-]?\d+)?[fFdD]?"
    r"|\d+(?:[eE][+-]?\d+)?[lLfFdD]?"
)
_IDENT_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*")
_PUNCT = set("{}();,.=<>[]@-")


@dataclass(frozen=True)
class Token:
    kind: str  # ident | number | string | char | punct | eof
    text: str
    start: int
    end: int


def lex(source: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    n = len(source)
    while i < n:
        c = source[i]
        if c.isspace():
            i += 1
            continue
        if source.startswith("//", i):
            nl = source.find("\n", i)
            i = n if nl < 0 else nl + 1
            continue
        if source.startswith("/*", i):
            close = source.find("*/", i + 2)
            if close < 0:
                raise ParseError(i, "closing */")
            i = close + 2
            continue
        if c == '"':
            j = i + 1
            while j < n and source[j] != '"':
                j += 2 if source[j] == "\\" else 1
            if j >= n:
                raise ParseError(i, 'closing "')
            tokens.append(Token("string", source[i : j + 1], i, j + 1))
            i = j + 1
            continue
        if c == "'":
            j = i + 1
            while j < n and source[j] != "'":
                j += 2 if source[j] == "\\" else 1
            if j >= n:
                raise ParseError(i, "closing '")
            tokens.append(Token("char", source[i : j + 1], i, j + 1))
            i = j + 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and source[i + 1].isdigit()):
            m = _NUMBER_RE.match(source, i)
            if m is None:
                raise ParseError(i, "numeric literal")
            tokens.append(Token("number", m.group(), i, m.end()))
            i = m.end()
            continue
        m = _IDENT_RE.match(source, i)
        if m is not None:
            tokens.append(Token("ident", m.group(), i, m.end()))
            i = m.end()
            continue
        if c in _PUNCT:
            tokens.append(Token("punct", c, i, i + 1))
            i += 1
            continue
        # Anything else (arithmetic, logic, ternary...) is outside the subset
        # but must still tokenize so statement-level fallback can consume it.
        tokens.append(Token("op", c, i, i + 1))
        i += 1
        continue
    tokens.append(Token("eof", "", n, n))
    return tokens


def literal_type_of(token: Token) -> str:
    """Literal category for a literal-bearing token (or true/false/null idents)."""
    text = token.text
    if token.kind == "string":
        return "string"
    if token.kind == "char":
        return "char"
    if token.kind == "ident":
        if text in ("true", "false"):
            return "boolean"
        if text == "null":
            return "null"
        raise ValueError(f"not a literal: {text}")
    body = text.lstrip("-")
    if body.lower().startswith("0x"):
        return "long" if body[-1] in "lL" else "int"
    if body[-1] in "fF":
        return "float"
    if body[-1] in "dD":
        return "double"
    if body[-1] in "lL":
        return "long"
    if "." in body or "e" in body or "E" in body:
        return "double"
    return "int"
