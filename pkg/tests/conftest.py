from __future__ import annotations

from plagbench.lexer import Abstraction, Token, TokenKind, TokenSequence


def seq_from_symbols(symbols, source_id="<synthetic>"):
    """Synthetic token sequence whose comparison keys are the given symbols.

    Each symbol becomes an identifier token under LEXEME abstraction, so
    distinct symbols compare as distinct tokens and equal symbols as equal
    tokens. The detectors only look at comparison keys, which makes this a
    convenient way to drive them from plain strings in tests.
    """
    tokens = [
        Token(TokenKind.IDENTIFIER, str(sym), line=1, column=i + 1)
        for i, sym in enumerate(symbols)
    ]
    return TokenSequence(tokens, source_id=source_id, abstraction=Abstraction.LEXEME)
