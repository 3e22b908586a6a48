"""Tokenizer shared by the query parser and the DDL parser."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator


class SuqlSyntaxError(Exception):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.message = message
        self.position = position


@dataclass(frozen=True)
class Token:
    type: str  # IDENT | QIDENT | STRING | INT | FLOAT | OP | EOF
    value: str
    position: int

    def is_kw(self, *keywords: str) -> bool:
        return self.type == "IDENT" and self.value.upper() in keywords


_OPERATORS = [
    "::", "@>", "<=", ">=", "!=", "<>",
    "(", ")", ",", ";", "*", "+", "-", "=", "<", ">", ".", "[", "]",
]

_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | set("0123456789$")


def tokenize(text: str) -> list[Token]:
    """Tokenize SUQL text. Raises SuqlSyntaxError with a position on bad input."""
    return list(_scan(text))


def _scan(text: str) -> Iterator[Token]:
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if ch == "-" and text.startswith("--", i):
            j = text.find("\n", i)
            i = n if j < 0 else j + 1
            continue
        if ch == "'":
            value, i = _scan_string(text, i)
            yield Token("STRING", value, i)
            continue
        if ch == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise SuqlSyntaxError("unterminated quoted identifier", i)
            yield Token("QIDENT", text[i + 1 : j], i)
            i = j + 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                if text[j] == ".":
                    # "1." followed by a non-digit is INT plus OP "."
                    if j + 1 >= n or not text[j + 1].isdigit():
                        break
                    seen_dot = True
                j += 1
            lexeme = text[i:j]
            yield Token("FLOAT" if "." in lexeme else "INT", lexeme, i)
            i = j
            continue
        if ch in _IDENT_START:
            j = i
            while j < n and text[j] in _IDENT_CONT:
                j += 1
            yield Token("IDENT", text[i:j], i)
            i = j
            continue
        for op in _OPERATORS:
            if text.startswith(op, i):
                yield Token("OP", op, i)
                i += len(op)
                break
        else:
            raise SuqlSyntaxError(f"illegal character {ch!r}", i)
    yield Token("EOF", "", n)


def _scan_string(text: str, start: int) -> tuple[str, int]:
    """Scan a single-quoted string with '' as the escape for a literal quote."""
    out = []
    i = start + 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "'":
            if i + 1 < n and text[i + 1] == "'":
                out.append("'")
                i += 2
                continue
            return "".join(out), i + 1
        out.append(ch)
        i += 1
    raise SuqlSyntaxError("unterminated string literal", start)
