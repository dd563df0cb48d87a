"""Hand-rolled Java lexer. Comments are dropped; every token keeps its line/column."""

from __future__ import annotations

from dataclasses import dataclass


class LexError(Exception):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.message = message


@dataclass(frozen=True)
class Token:
    type: str  # ident | keyword | int | float | string | char | op | eof
    text: str
    line: int
    column: int


KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while true false null""".split()
)

# Longest-match first.
OPERATORS = [
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::",
    "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "~", "&", "|", "^",
    "?", ":", ";", ",", ".", "(", ")", "{", "}", "[", "]", "@",
]

_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$")
_IDENT_PART = _IDENT_START | set("0123456789")
_DIGITS = set("0123456789")


def tokenize(text: str) -> list[Token]:
    """Lex ``text`` into tokens, ending with an ``eof`` token.

    Raises LexError on malformed literals or characters outside the language.
    """
    return _Lexer(text).run()


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.n = len(text)
        self.i = 0
        self.line = 1
        self.col = 1
        self.tokens: list[Token] = []

    def advance(self, k: int = 1) -> None:
        for _ in range(k):
            if self.i < self.n and self.text[self.i] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.i += 1

    def peek(self, offset: int = 0) -> str:
        j = self.i + offset
        return self.text[j] if j < self.n else ""

    def emit(self, ttype: str, start: int, line: int, col: int) -> None:
        self.tokens.append(Token(ttype, self.text[start : self.i], line, col))

    def run(self) -> list[Token]:
        while self.i < self.n:
            ch = self.peek()
            if ch in " \t\r\n\f":
                self.advance()
            elif ch == "/" and self.peek(1) == "/":
                while self.i < self.n and self.peek() != "\n":
                    self.advance()
            elif ch == "/" and self.peek(1) == "*":
                self._block_comment()
            elif ch in _IDENT_START:
                self._word()
            elif ch in _DIGITS or (ch == "." and self.peek(1) in _DIGITS):
                self._number()
            elif ch == '"':
                self._string()
            elif ch == "'":
                self._char()
            else:
                op = self._match_operator()
                if op is None:
                    raise LexError(self.line, self.col, f"unexpected character {ch!r}")
                self.tokens.append(Token("op", op, self.line, self.col))
                self.advance(len(op))
        self.tokens.append(Token("eof", "", self.line, self.col))
        return self.tokens

    def _match_operator(self) -> str | None:
        for op in OPERATORS:
            if self.text.startswith(op, self.i):
                return op
        return None

    def _block_comment(self) -> None:
        line, col = self.line, self.col
        self.advance(2)
        while self.i + 1 < self.n and not (self.peek() == "*" and self.peek(1) == "/"):
            self.advance()
        if self.i + 1 >= self.n:
            raise LexError(line, col, "unterminated block comment")
        self.advance(2)

    def _word(self) -> None:
        start, line, col = self.i, self.line, self.col
        while self.i < self.n and self.peek() in _IDENT_PART:
            self.advance()
        word = self.text[start : self.i]
        self.emit("keyword" if word in KEYWORDS else "ident", start, line, col)

    def _number(self) -> None:
        start, line, col = self.i, self.line, self.col
        if self.peek() == "0" and self.peek(1) in "xX":
            self.advance(2)
            while self.peek() in "0123456789abcdefABCDEF_":
                self.advance()
            if self.peek() in "lL":
                self.advance()
            self.emit("int", start, line, col)
            return
        if self.peek() == "0" and self.peek(1) in "bB":
            self.advance(2)
            while self.peek() in "01_":
                self.advance()
            if self.peek() in "lL":
                self.advance()
            self.emit("int", start, line, col)
            return
        is_float = False
        while self.peek() in _DIGITS or self.peek() == "_":
            self.advance()
        # a dot makes a float only when digits or a float suffix follow: `1.foo()` stays int
        if self.peek() == "." and (self.peek(1) in _DIGITS or self.peek(1) in "fFdD"):
            is_float = True
            self.advance()
            while self.peek() in _DIGITS or self.peek() == "_":
                self.advance()
        if self.peek() in "eE":
            j = 1
            if self.peek(1) in "+-":
                j = 2
            if self.peek(j) in _DIGITS:
                is_float = True
                self.advance(j)
                while self.peek() in _DIGITS:
                    self.advance()
        if self.peek() in "fFdD":
            is_float = True
            self.advance()
        elif self.peek() in "lL":
            self.advance()
        self.emit("float" if is_float else "int", start, line, col)

    def _string(self) -> None:
        start, line, col = self.i, self.line, self.col
        self.advance()
        while self.i < self.n:
            ch = self.peek()
            if ch == "\\":
                self.advance(2)
            elif ch == '"':
                self.advance()
                self.emit("string", start, line, col)
                return
            elif ch == "\n":
                break
            else:
                self.advance()
        raise LexError(line, col, "unterminated string literal")

    def _char(self) -> None:
        start, line, col = self.i, self.line, self.col
        self.advance()
        while self.i < self.n:
            ch = self.peek()
            if ch == "\\":
                self.advance(2)
            elif ch == "'":
                self.advance()
                self.emit("char", start, line, col)
                return
            elif ch == "\n":
                break
            else:
                self.advance()
        raise LexError(line, col, "unterminated char literal")
