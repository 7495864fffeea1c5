"""Deterministic text normalization shared by documents, queries and
enrichment phrases.

Pipeline: NFKD normalization -> lowercase -> strip combining marks ->
split into alphanumeric runs -> stopword removal (surface forms) ->
Porter stemming. Identical input always yields the identical token list,
so document text, query text and enrichment vocabulary stay comparable
at the stem level.
"""

import re
import unicodedata
from importlib import resources

from .porter import stem

# \w minus underscore: maximal alphanumeric runs; digits kept so tokens
# like "401k" survive
_TOKEN_RE = re.compile(r"[^\W_]+")

CANONICAL_SEPARATOR = " "


def _load_default_stopwords() -> frozenset[str]:
    text = (
        resources.files("lexbridge.data")
        .joinpath("stopwords_en.txt")
        .read_text(encoding="utf-8")
    )
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


DEFAULT_STOPWORDS = _load_default_stopwords()


def load_stopwords(path) -> frozenset[str]:
    """Read a stopword file: one lowercase surface form per line, UTF-8."""
    with open(path, encoding="utf-8") as fh:
        return frozenset(line.strip() for line in fh if line.strip())


def normalize(text: str) -> str:
    """NFKD + lowercase + combining-mark removal, no segmentation.

    Also used verbatim by answer-coverage matching, which must compare
    raw substrings under the same normalization as indexing.
    """
    decomposed = unicodedata.normalize("NFKD", text).lower()
    if decomposed.isascii():
        return decomposed
    return "".join(ch for ch in decomposed if unicodedata.category(ch) != "Mn")


def tokenize(text: str, stopwords: frozenset[str] | None = None) -> list[str]:
    """Tokenize raw text into stemmed terms.

    Degenerate input gives an empty list; stopwords are removed before
    stemming (the list is defined over surface forms). Stems that come
    out empty (e.g. the bare token "s") are dropped so every returned
    token is non-empty.
    """
    if stopwords is None:
        stopwords = DEFAULT_STOPWORDS
    out = []
    for token in _TOKEN_RE.findall(normalize(text)):
        if token in stopwords:
            continue
        stemmed = stem(token)
        if stemmed:
            out.append(stemmed)
    return out


def shingle(tokens: list[str], min_n: int, max_n: int) -> list[str]:
    """Contiguous n-gram windows joined by the canonical separator.

    Windows are emitted position-major, then by length, for every n in
    [min_n, max_n]. A stream shorter than min_n yields nothing.
    """
    if not 1 <= min_n <= max_n:
        raise ValueError(f"invalid n-gram range [{min_n}, {max_n}]")
    out = []
    for start in range(len(tokens)):
        for n in range(min_n, max_n + 1):
            end = start + n
            if end > len(tokens):
                break
            out.append(CANONICAL_SEPARATOR.join(tokens[start:end]))
    return out


def canonical_phrase(stems: list[str] | tuple[str, ...]) -> str:
    return CANONICAL_SEPARATOR.join(stems)
