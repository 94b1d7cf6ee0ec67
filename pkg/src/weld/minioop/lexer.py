"""Tokenizer shared by the MiniOOP and class-model grammars."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ParseError

KEYWORDS = frozenset({
    "abstract", "partial", "class", "interface", "extends", "implements",
    "field", "method", "include", "aspect", "before", "after", "around",
    "introduce", "let", "return", "new", "this", "null", "true", "false",
})

PUNCT = frozenset("{}():;,.=+")

_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}


@dataclass(frozen=True)
class Token:
    kind: str  # id | int | string | kw | punct | eof
    text: str
    line: int
    col: int


def tokenize(text: str, path: str = "<input>") -> list[Token]:
    """Split source text into tokens. `//` comments run to end of line."""
    toks: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if ch == '"':
            i += 1
            col += 1
            buf: list[str] = []
            while True:
                if i >= n or text[i] == "\n":
                    raise ParseError("SYNTAX", "unterminated string literal",
                                     path, start_line, start_col)
                c = text[i]
                if c == '"':
                    i += 1
                    col += 1
                    break
                if c == "\\":
                    if i + 1 >= n or text[i + 1] not in _ESCAPES:
                        raise ParseError("SYNTAX", "bad escape in string literal",
                                         path, line, col)
                    buf.append(_ESCAPES[text[i + 1]])
                    i += 2
                    col += 2
                    continue
                buf.append(c)
                i += 1
                col += 1
            toks.append(Token("string", "".join(buf), start_line, start_col))
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("int", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            # `$` is legal inside identifiers so tool-synthesized names survive
            # reparsing; it cannot start one.
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_$"):
                j += 1
            word = text[i:j]
            kind = "kw" if word in KEYWORDS else "id"
            toks.append(Token(kind, word, start_line, start_col))
            col += j - i
            i = j
            continue
        if ch in PUNCT:
            toks.append(Token("punct", ch, start_line, start_col))
            i += 1
            col += 1
            continue
        raise ParseError("SYNTAX", f"unexpected character {ch!r}", path, line, col)
    toks.append(Token("eof", "", line, col))
    return toks
