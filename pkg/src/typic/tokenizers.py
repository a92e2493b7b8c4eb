"""Pluggable tokenizers, keyed by id so reports can record how they counted.

The default splits on Unicode word boundaries and additionally breaks word
runs at script changes (Latin/kana/kanji), which gives usable token counts
for both English and Japanese text without an external morphological
analyzer.
"""

from __future__ import annotations

import re
from typing import Callable, List

from .errors import UnknownTokenizer

Tokenizer = Callable[[str], List[str]]

_WORD_RUN = re.compile(r"\w+", re.UNICODE)

DEFAULT_TOKENIZER = "unicode-words"


def _script_class(ch: str) -> str:
    cp = ord(ch)
    if 0x3040 <= cp <= 0x309F:
        return "hiragana"
    if 0x30A0 <= cp <= 0x30FF or cp == 0x30FC:
        return "katakana"
    if 0x4E00 <= cp <= 0x9FFF or cp in (0x3005, 0x3007):
        return "han"
    return "latin"


def _split_scripts(run: str) -> List[str]:
    parts: List[str] = []
    start = 0
    current = _script_class(run[0])
    for i in range(1, len(run)):
        cls = _script_class(run[i])
        if cls != current:
            parts.append(run[start:i])
            start = i
            current = cls
    parts.append(run[start:])
    return parts


def unicode_words(text: str) -> List[str]:
    tokens: List[str] = []
    for run in _WORD_RUN.findall(text):
        tokens.extend(_split_scripts(run))
    return tokens


def whitespace(text: str) -> List[str]:
    return text.split()


TOKENIZERS: dict[str, Tokenizer] = {
    "unicode-words": unicode_words,
    "whitespace": whitespace,
}


def get_tokenizer(tokenizer_id: str) -> Tokenizer:
    try:
        return TOKENIZERS[tokenizer_id]
    except KeyError:
        raise UnknownTokenizer(tokenizer_id) from None


def normalized_tokens(text: str, tokenizer_id: str = DEFAULT_TOKENIZER) -> List[str]:
    """Case-folded tokens with punctuation stripped, for overlap metrics."""
    return [t.casefold() for t in get_tokenizer(tokenizer_id)(text)]
