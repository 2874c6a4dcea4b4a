"""Tokenizer for a Java-subset lexical grammar.

Both detectors consume token sequences, never syntax trees, so this module
only has to get the lexical layer right:

* keywords are the standard Java reserved words; ``true``/``false`` and
  ``null`` come out as literal tokens, not keywords,
* integer literals are decimal or hex (``0x``), with an optional ``l/L``
  suffix; float literals support fraction, exponent and ``f/F/d/D`` suffix,
* string and char literals honor backslash escapes, and their contents are
  never split by embedded separators,
* ``//`` and ``/* */`` comments are skipped entirely and never emitted,
* ``@`` is lexed as an operator followed by a plain identifier, so
  annotations need no parser-level support.

Identifiers accept letters (including non-ASCII letters), digits,
underscore and ``$``. Any other character outside literals and comments is
a hard error; deterministic failure beats silently dropping input.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class TokenKind(enum.Enum):
    KEYWORD = "KEYWORD"
    IDENTIFIER = "IDENTIFIER"
    INTEGER_LITERAL = "INTEGER_LITERAL"
    FLOAT_LITERAL = "FLOAT_LITERAL"
    STRING_LITERAL = "STRING_LITERAL"
    CHAR_LITERAL = "CHAR_LITERAL"
    BOOL_LITERAL = "BOOL_LITERAL"
    NULL_LITERAL = "NULL_LITERAL"
    OPERATOR = "OPERATOR"
    SEPARATOR = "SEPARATOR"


class Abstraction(enum.Enum):
    """Granularity at which downstream comparison treats tokens as equal.

    CATEGORY collapses identifier and literal lexemes to their kind, which
    makes the structural detector robust to identifier renaming. LEXEME
    keeps the spelled text for every token.
    """

    CATEGORY = "CATEGORY"
    LEXEME = "LEXEME"


class LexError(ValueError):
    """Illegal character outside literals and comments."""

    def __init__(self, message: str, line: int, column: int, source_id: str = "<string>"):
        super().__init__(f"{source_id}:{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column
        self.source_id = source_id


class UnterminatedLiteral(LexError):
    pass


class UnterminatedComment(LexError):
    pass


KEYWORDS = frozenset(
    """
    abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package
    private protected public return short static strictfp super switch
    synchronized this throw throws transient try void volatile while
    """.split()
)

BOOL_LITERALS = frozenset({"true", "false"})
NULL_LITERAL = "null"

# Longest match first; '@' and '::' are grouped with the operators, the
# structural separators stay in their own category.
OPERATORS = sorted(
    [
        ">>>=", "<<=", ">>=", ">>>", "<<", ">>", "->", "::",
        "==", ">=", "<=", "!=", "&&", "||", "++", "--",
        "+=", "-=", "*=", "/=", "&=", "|=", "^=", "%=",
        "=", ">", "<", "!", "~", "?", ":",
        "+", "-", "*", "/", "&", "|", "^", "%", "@",
    ],
    key=len,
    reverse=True,
)

SEPARATORS = frozenset("(){}[];,.")
VARARGS = "..."

_WHITESPACE = " \t\r\n\f"

# Kinds whose lexemes collapse to the bare kind under CATEGORY abstraction.
_COLLAPSED_KINDS = frozenset(
    {
        TokenKind.IDENTIFIER,
        TokenKind.INTEGER_LITERAL,
        TokenKind.FLOAT_LITERAL,
        TokenKind.STRING_LITERAL,
        TokenKind.CHAR_LITERAL,
        TokenKind.BOOL_LITERAL,
        TokenKind.NULL_LITERAL,
    }
)


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    line: int
    column: int


def token_key(token: Token, abstraction: Abstraction) -> tuple[str, str]:
    """Comparison key for one token at the given abstraction level."""
    if abstraction is Abstraction.CATEGORY and token.kind in _COLLAPSED_KINDS:
        return (token.kind.value, "")
    return (token.kind.value, token.lexeme)


@dataclass
class LexerConfig:
    abstraction: Abstraction = Abstraction.CATEGORY


@dataclass
class TokenSequence:
    """Ordered, comment-free token stream for one source file."""

    tokens: list[Token]
    source_id: str = "<string>"
    abstraction: Abstraction = Abstraction.CATEGORY
    _keys: list[tuple[str, str]] | None = field(default=None, repr=False, compare=False)

    def keys(self) -> list[tuple[str, str]]:
        """Comparison keys, memoized; this is what the detectors consume."""
        if self._keys is None:
            self._keys = [token_key(t, self.abstraction) for t in self.tokens]
        return self._keys

    def kinds(self) -> list[TokenKind]:
        return [t.kind for t in self.tokens]

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)


def _is_identifier_start(ch: str) -> bool:
    return ch.isalpha() or ch in "_$"


def _is_identifier_part(ch: str) -> bool:
    return ch.isalnum() or ch in "_$"


class _Scanner:
    def __init__(self, source: str, source_id: str):
        self.src = source
        self.n = len(source)
        self.pos = 0
        self.line = 1
        self.col = 1
        self.source_id = source_id

    def error(self, message: str, cls=LexError, line: int | None = None, col: int | None = None):
        raise cls(message, line if line is not None else self.line,
                  col if col is not None else self.col, self.source_id)

    def peek(self, offset: int = 0) -> str:
        # NUL sentinel at EOF keeps membership tests ('x' in "...") safe;
        # an empty string would be "in" everything.
        i = self.pos + offset
        return self.src[i] if i < self.n else "\0"

    def advance(self) -> str:
        ch = self.src[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return ch

    def skip_whitespace_and_comments(self) -> None:
        while self.pos < self.n:
            ch = self.peek()
            if ch in _WHITESPACE:
                self.advance()
            elif ch == "/" and self.peek(1) == "/":
                while self.pos < self.n and self.peek() != "\n":
                    self.advance()
            elif ch == "/" and self.peek(1) == "*":
                start_line, start_col = self.line, self.col
                self.advance()
                self.advance()
                while True:
                    if self.pos >= self.n:
                        self.error("unterminated block comment", UnterminatedComment,
                                   start_line, start_col)
                    if self.peek() == "*" and self.peek(1) == "/":
                        self.advance()
                        self.advance()
                        break
                    self.advance()
            else:
                break

    def scan_string(self) -> str:
        start_line, start_col = self.line, self.col
        lexeme = self.advance()  # opening quote
        while True:
            if self.pos >= self.n or self.peek() == "\n":
                self.error("unterminated string literal", UnterminatedLiteral,
                           start_line, start_col)
            ch = self.advance()
            lexeme += ch
            if ch == "\\":
                if self.pos >= self.n or self.peek() == "\n":
                    self.error("unterminated string literal", UnterminatedLiteral,
                               start_line, start_col)
                lexeme += self.advance()
            elif ch == '"':
                return lexeme

    def scan_char(self) -> str:
        start_line, start_col = self.line, self.col
        lexeme = self.advance()  # opening quote
        if self.pos >= self.n or self.peek() == "\n":
            self.error("unterminated char literal", UnterminatedLiteral, start_line, start_col)
        if self.peek() == "'":
            self.error("empty char literal", LexError, start_line, start_col)
        ch = self.advance()
        lexeme += ch
        if ch == "\\":
            if self.pos >= self.n or self.peek() == "\n":
                self.error("unterminated char literal", UnterminatedLiteral,
                           start_line, start_col)
            lexeme += self.advance()
        if self.pos >= self.n or self.peek() == "\n":
            self.error("unterminated char literal", UnterminatedLiteral, start_line, start_col)
        if self.peek() != "'":
            self.error(f"too many characters in char literal: {self.peek()!r}")
        lexeme += self.advance()
        return lexeme

    def scan_number(self) -> tuple[TokenKind, str]:
        lexeme = ""
        if self.peek() == "0" and self.peek(1) in "xX":
            lexeme += self.advance() + self.advance()
            if self.peek() not in "0123456789abcdefABCDEF":
                self.error("hex literal needs at least one digit")
            while self.peek() in "0123456789abcdefABCDEF":
                lexeme += self.advance()
            if self.peek() in "lL":
                lexeme += self.advance()
            return TokenKind.INTEGER_LITERAL, lexeme
        while self.peek().isdigit():
            lexeme += self.advance()
        is_float = False
        if self.peek() == "." and (self.peek(1).isdigit() or lexeme):
            # "1." and "1.5" are floats; a bare "." was dispatched elsewhere.
            is_float = True
            lexeme += self.advance()
            while self.peek().isdigit():
                lexeme += self.advance()
        if self.peek() in "eE":
            lookahead = 1
            if self.peek(1) in "+-":
                lookahead = 2
            if self.peek(lookahead).isdigit():
                is_float = True
                for _ in range(lookahead):
                    lexeme += self.advance()
                while self.peek().isdigit():
                    lexeme += self.advance()
        if self.peek() in "fFdD":
            lexeme += self.advance()
            return TokenKind.FLOAT_LITERAL, lexeme
        if is_float:
            return TokenKind.FLOAT_LITERAL, lexeme
        if self.peek() in "lL":
            lexeme += self.advance()
        return TokenKind.INTEGER_LITERAL, lexeme


def tokenize(source: str, config: LexerConfig | None = None, *,
             source_id: str = "<string>") -> TokenSequence:
    """Lex ``source`` into a comment-free token sequence.

    Raises LexError (or the UnterminatedLiteral / UnterminatedComment
    subclasses) with 1-based line/column positions on malformed input.
    """
    cfg = config or LexerConfig()
    sc = _Scanner(source, source_id)
    tokens: list[Token] = []

    while True:
        sc.skip_whitespace_and_comments()
        if sc.pos >= sc.n:
            break
        line, col = sc.line, sc.col
        ch = sc.peek()

        if ch == '"':
            tokens.append(Token(TokenKind.STRING_LITERAL, sc.scan_string(), line, col))
            continue
        if ch == "'":
            tokens.append(Token(TokenKind.CHAR_LITERAL, sc.scan_char(), line, col))
            continue
        if ch.isdigit():
            kind, lexeme = sc.scan_number()
            tokens.append(Token(kind, lexeme, line, col))
            continue
        if ch == "." and sc.peek(1).isdigit():
            kind, lexeme = sc.scan_number()
            tokens.append(Token(kind, lexeme, line, col))
            continue
        if _is_identifier_start(ch):
            word = ""
            while sc.pos < sc.n and _is_identifier_part(sc.peek()):
                word += sc.advance()
            if word in KEYWORDS:
                kind = TokenKind.KEYWORD
            elif word in BOOL_LITERALS:
                kind = TokenKind.BOOL_LITERAL
            elif word == NULL_LITERAL:
                kind = TokenKind.NULL_LITERAL
            else:
                kind = TokenKind.IDENTIFIER
            tokens.append(Token(kind, word, line, col))
            continue
        if ch == "." and sc.src.startswith(VARARGS, sc.pos):
            for _ in range(3):
                sc.advance()
            tokens.append(Token(TokenKind.SEPARATOR, VARARGS, line, col))
            continue
        if ch in SEPARATORS:
            tokens.append(Token(TokenKind.SEPARATOR, sc.advance(), line, col))
            continue
        for op in OPERATORS:
            if sc.src.startswith(op, sc.pos):
                for _ in range(len(op)):
                    sc.advance()
                tokens.append(Token(TokenKind.OPERATOR, op, line, col))
                break
        else:
            sc.error(f"illegal character {ch!r}")

    return TokenSequence(tokens, source_id=source_id, abstraction=cfg.abstraction)


def tokenize_file(path, config: LexerConfig | None = None) -> TokenSequence:
    with open(path, encoding="utf-8") as fh:
        return tokenize(fh.read(), config, source_id=str(path))


def dump_tokens(sequence: TokenSequence) -> str:
    """Debug dump, one record per line: ``line:column kind lexeme``."""
    return "\n".join(
        f"{t.line}:{t.column} {t.kind.value} {t.lexeme}" for t in sequence.tokens
    )
