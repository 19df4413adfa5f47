"""Tokenizer for the Solidity subset grammar.

Comments and string-literal contents are blanked out before tokenization so
that trigger tokens inside them can never match; blanking preserves offsets
and newlines, so token spans always refer to the original text.
"""

from __future__ import annotations

from dataclasses import dataclass


def mask_comments(text: str) -> str:
    """Replace // and /* */ comments with spaces, keeping newlines and length."""
    return _mask(text, mask_strings=False)


def mask_comments_and_strings(text: str) -> str:
    """Like :func:`mask_comments`, and additionally blank string-literal contents.

    The surrounding quote characters are kept so strings still tokenize.
    """
    return _mask(text, mask_strings=True)


def _mask(text: str, mask_strings: bool) -> str:
    out = list(text)
    i = 0
    n = len(text)

    def blank(a: int, b: int) -> None:
        for j in range(a, b):
            if out[j] != "\n":
                out[j] = " "

    while i < n:
        ch = text[i]
        nxt = text[i + 1] if i + 1 < n else ""
        if ch == "/" and nxt == "/":
            end = text.find("\n", i)
            end = n if end == -1 else end
            blank(i, end)
            i = end
        elif ch == "/" and nxt == "*":
            end = text.find("*/", i + 2)
            end = n if end == -1 else end + 2  # unterminated comment runs to EOF
            blank(i, end)
            i = end
        elif ch in "\"'":
            quote = ch
            j = i + 1
            while j < n and text[j] != quote and text[j] != "\n":
                j += 2 if text[j] == "\\" else 1
            if mask_strings:
                blank(i + 1, min(j, n))
            i = min(j + 1, n)
        else:
            i += 1
    return "".join(out)


IDENT = "ident"
NUMBER = "number"
STRING = "string"
PUNCT = "punct"
EOF = "eof"

_MULTI_OPS = [
    ">>=", "<<=",
    "**", "++", "--", "&&", "||", "==", "!=", "<=", ">=", "<<", ">>",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "=>",
]
_SINGLE_OPS = set("+-*/%&|^~<>=!?:;,.(){}[]")


@dataclass(frozen=True)
class Token:
    type: str
    value: str
    offset: int
    line: int

    def __repr__(self) -> str:  # compact for parser debugging
        return f"Token({self.type}, {self.value!r}, line {self.line})"


def tokenize(text: str) -> list[Token]:
    """Tokenize masked source text; the final token is always EOF."""
    tokens: list[Token] = []
    i = 0
    n = len(text)
    line = 1
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
            continue
        if ch in " \t\r\f\v":
            i += 1
            continue
        if ch.isalpha() or ch == "_" or ch == "$":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] in "_$"):
                j += 1
            tokens.append(Token(IDENT, text[i:j], i, line))
            i = j
            continue
        if ch.isdigit():
            j = i + 1
            if ch == "0" and j < n and text[j] in "xX":
                j += 1
                while j < n and (text[j] in "0123456789abcdefABCDEF_"):
                    j += 1
            else:
                while j < n and (text[j].isdigit() or text[j] in "._eE"):
                    # stop '.' from eating a member access after a number: 1.call
                    if text[j] == "." and not (j + 1 < n and text[j + 1].isdigit()):
                        break
                    j += 1
                # unit suffixes (ether, days, ...) are read as separate idents
            tokens.append(Token(NUMBER, text[i:j], i, line))
            i = j
            continue
        if ch in "\"'":
            quote = ch
            j = i + 1
            while j < n and text[j] != quote and text[j] != "\n":
                j += 2 if text[j] == "\\" else 1
            j = min(j + 1, n)
            tokens.append(Token(STRING, text[i:j], i, line))
            i = j
            continue
        three = text[i : i + 3]
        if three in _MULTI_OPS:
            tokens.append(Token(PUNCT, three, i, line))
            i += 3
            continue
        two = text[i : i + 2]
        if two in _MULTI_OPS:
            tokens.append(Token(PUNCT, two, i, line))
            i += 2
            continue
        if ch in _SINGLE_OPS:
            tokens.append(Token(PUNCT, ch, i, line))
            i += 1
            continue
        # Unknown byte: emit as punct so the parser can consign it to Unparsed.
        tokens.append(Token(PUNCT, ch, i, line))
        i += 1
    tokens.append(Token(EOF, "", n, line))
    return tokens
