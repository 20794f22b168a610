"""Lossless tokenizer for the supported C++ subset.

Tokens carry 1-based line/column positions and the exact source text of the
lexeme. Whitespace, comments and preprocessor lines are kept as trivia pieces
attached to the following token (or to the stream tail), so concatenating
trivia and lexemes reproduces the input byte for byte.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

TOKEN_KINDS = (
    "identifier",
    "keyword",
    "integer-literal",
    "float-literal",
    "string-literal",
    "char-literal",
    "operator",
    "punctuation",
)

KEYWORDS = frozenset([
    "int", "long", "double", "bool", "char", "void", "string", "vector",
    "if", "else", "for", "while", "do", "break", "continue", "return",
    "true", "false", "typedef", "using", "namespace",
])

# longest first so that e.g. "<<" wins over "<"
OPERATORS = (
    "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "::",
    "+", "-", "*", "/", "%", "<", ">", "=", "!", "&", "|", "^", "~",
    "?", ":", ".",
)

PUNCTUATION = ("(", ")", "{", "}", "[", "]", ";", ",")


class FrontendError(Exception):
    """Base for every way a source text can be rejected before running."""


class LexError(FrontendError):
    """Raised on unterminated string/char literals and block comments."""

    def __init__(self, message: str, line: int, column: int, snippet: str = ""):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column
        self.snippet = snippet


@dataclass(frozen=True)
class Trivia:
    category: str  # "space" | "line-comment" | "block-comment" | "directive"
    text: str


@dataclass
class Token:
    kind: str
    text: str
    line: int
    column: int
    index: int = -1
    leading: tuple[Trivia, ...] = field(default_factory=tuple, repr=False)

    def __str__(self) -> str:
        return f"{self.kind}({self.text!r})@{self.line}:{self.column}"


class TokenStream:
    """Sequence of tokens plus the trivia trailing the last token."""

    def __init__(self, tokens: list[Token], trailing: tuple[Trivia, ...] = ()):
        self.tokens = tokens
        self.trailing = trailing

    def __len__(self) -> int:
        return len(self.tokens)

    def __getitem__(self, i):
        return self.tokens[i]

    def __iter__(self):
        return iter(self.tokens)

    def reconstruct(self) -> str:
        parts: list[str] = []
        for tok in self.tokens:
            for piece in tok.leading:
                parts.append(piece.text)
            parts.append(tok.text)
        for piece in self.trailing:
            parts.append(piece.text)
        return "".join(parts)


_WS_RE = re.compile(r"[ \t\r\n]+")
_LINE_COMMENT_RE = re.compile(r"//[^\n]*")
_IDENT_RE = re.compile(r"[A-Za-z_]\w*")
_FLOAT_RE = re.compile(r"(?:\d+\.\d*|\.\d+)(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+")
_INT_RE = re.compile(r"\d+(?:[lL][lL]|[lL])?")
_STRING_RE = re.compile(r'"(?:\\.|[^"\\\n])*"')
_CHAR_RE = re.compile(r"'(?:\\.|[^'\\\n])'")


def _advance(line: int, col: int, text: str) -> tuple[int, int]:
    n = text.count("\n")
    if n:
        return line + n, len(text) - text.rfind("\n")
    return line, col + len(text)


def tokenize(source: str) -> TokenStream:
    """Lex source into a TokenStream. Raises LexError on unterminated
    string/char literals and unterminated block comments; position points at
    the opening delimiter."""
    tokens: list[Token] = []
    pending: list[Trivia] = []
    pos = 0
    line, col = 1, 1
    n = len(source)
    at_line_start = True  # only whitespace seen on the current line so far

    def emit(kind: str, text: str) -> None:
        nonlocal line, col, pos, at_line_start
        tokens.append(Token(kind, text, line, col, len(tokens), tuple(pending)))
        pending.clear()
        line, col = _advance(line, col, text)
        pos += len(text)
        at_line_start = False

    def trivia(category: str, text: str) -> None:
        nonlocal line, col, pos
        pending.append(Trivia(category, text))
        line, col = _advance(line, col, text)
        pos += len(text)

    while pos < n:
        ch = source[pos]

        m = _WS_RE.match(source, pos)
        if m:
            if "\n" in m.group():
                at_line_start = True
            trivia("space", m.group())
            continue

        if ch == "#" and at_line_start:
            end = source.find("\n", pos)
            text = source[pos:] if end < 0 else source[pos:end]
            trivia("directive", text)
            at_line_start = False
            continue

        if source.startswith("//", pos):
            m = _LINE_COMMENT_RE.match(source, pos)
            trivia("line-comment", m.group())
            continue

        if source.startswith("/*", pos):
            end = source.find("*/", pos + 2)
            if end < 0:
                raise LexError("unterminated block comment", line, col,
                               source[pos:pos + 20])
            trivia("block-comment", source[pos:end + 2])
            continue

        if ch == '"':
            m = _STRING_RE.match(source, pos)
            if not m:
                raise LexError("unterminated string literal", line, col,
                               source[pos:pos + 20])
            emit("string-literal", m.group())
            continue

        if ch == "'":
            m = _CHAR_RE.match(source, pos)
            if not m:
                raise LexError("unterminated char literal", line, col,
                               source[pos:pos + 20])
            emit("char-literal", m.group())
            continue

        if ch.isdigit() or (ch == "." and pos + 1 < n and source[pos + 1].isdigit()):
            m = _FLOAT_RE.match(source, pos)
            if m:
                emit("float-literal", m.group())
                continue
            m = _INT_RE.match(source, pos)
            emit("integer-literal", m.group())
            continue

        if ch.isalpha() or ch == "_":
            m = _IDENT_RE.match(source, pos)
            word = m.group()
            emit("keyword" if word in KEYWORDS else "identifier", word)
            continue

        for op in OPERATORS:
            if source.startswith(op, pos):
                emit("operator", op)
                break
        else:
            if ch in PUNCTUATION:
                emit("punctuation", ch)
            else:
                raise LexError(f"unexpected character {ch!r}", line, col,
                               source[pos:pos + 20])

    return TokenStream(tokens, tuple(pending))


_DECODE = {"n": "\n", "t": "\t", "r": "\r", "0": "\0", "\\": "\\",
           '"': '"', "'": "'"}


def decode_text(lexeme_body: str) -> str:
    """Decode the escape sequences inside a string/char literal body."""
    out: list[str] = []
    i = 0
    while i < len(lexeme_body):
        ch = lexeme_body[i]
        if ch == "\\" and i + 1 < len(lexeme_body):
            out.append(_DECODE.get(lexeme_body[i + 1], lexeme_body[i + 1]))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


_ENCODE = {"\n": "\\n", "\t": "\\t", "\r": "\\r", "\0": "\\0",
           "\\": "\\\\", '"': '\\"'}


def encode_string(value: str) -> str:
    """Produce a canonical double-quoted literal for value."""
    return '"' + "".join(_ENCODE.get(ch, ch) for ch in value) + '"'


def encode_char(value: str) -> str:
    table = {"\n": "\\n", "\t": "\\t", "\r": "\\r", "\0": "\\0",
             "\\": "\\\\", "'": "\\'"}
    return "'" + table.get(value, value) + "'"
