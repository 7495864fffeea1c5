"""BM25 scoring (Lucene variant) and weighted two-query search.

The term formula is

    idf(df) * tf / (tf + k1 * (1 - b + b * doc_len / avgdl))

with idf(df) = ln(1 + (n_docs - df + 0.5) / (df + 0.5)), which is
non-negative for every 0 <= df <= n_docs. There is no (k1+1) numerator
factor. A search request carries two term bags — the raw query's stems
and the accepted expansion phrases — combined as

    score(d) = bm25(orig, d) + weight * bm25(expansion, d)

Single stems resolve through the exact unigram tier; 2..4-stem phrases
through the hashed tier, inheriting its DF over-estimation under slot
collisions.
"""

import math
from dataclasses import dataclass

from .index import InvertedIndex
from .tokenizer import tokenize

DEFAULT_K1 = 1.5
DEFAULT_B = 0.75
DEFAULT_DELTA = 0.5
DEFAULT_WEIGHT = 0.5
DEFAULT_DEPTH = 200  # candidate depth handed to the reranker

_MAX_PHRASE_STEMS = 4


class UnfrozenIndexError(Exception):
    def __init__(self):
        super().__init__("index must be frozen before scoring")


@dataclass(frozen=True)
class ScoringParams:
    k1: float = DEFAULT_K1
    b: float = DEFAULT_B
    delta: float = DEFAULT_DELTA  # stored for config surface; inert here
    variant: str = "lucene"

    def __post_init__(self):
        if self.k1 < 0:
            raise ValueError("k1 must be >= 0")
        if not 0.0 <= self.b <= 1.0:
            raise ValueError("b must lie in [0, 1]")
        if self.variant != "lucene":
            raise ValueError(f"unsupported scoring variant: {self.variant!r}")


@dataclass(frozen=True)
class WeightedQuery:
    orig_terms: tuple[str, ...]
    expansion_phrases: tuple[str, ...] = ()
    weight: float = DEFAULT_WEIGHT

    def __post_init__(self):
        object.__setattr__(self, "orig_terms", tuple(self.orig_terms))
        object.__setattr__(
            self, "expansion_phrases", tuple(self.expansion_phrases)
        )
        if self.weight < 0:
            raise ValueError("expansion weight must be >= 0")
        for phrase in self.expansion_phrases:
            n = len(phrase.split(" ")) if phrase else 0
            if not 1 <= n <= _MAX_PHRASE_STEMS:
                raise ValueError(
                    f"expansion phrase must hold 1..{_MAX_PHRASE_STEMS} stems: {phrase!r}"
                )

    @classmethod
    def from_text(
        cls,
        text: str,
        expansion_phrases=(),
        weight: float = DEFAULT_WEIGHT,
        stopwords=None,
    ) -> "WeightedQuery":
        return cls(tuple(tokenize(text, stopwords)), tuple(expansion_phrases), weight)


@dataclass(frozen=True)
class SearchResult:
    doc_id: str
    score: float
    orig_score: float
    exp_score: float


def idf(df: int, n_docs: int) -> float:
    if not 0 <= df <= n_docs:
        raise ValueError(f"df must lie in [0, n_docs]; got df={df}, n_docs={n_docs}")
    return math.log(1.0 + (n_docs - df + 0.5) / (df + 0.5))


def bm25_term(tf: int, doc_len: int, stats, params: ScoringParams, df: int) -> float:
    if tf < 0:
        raise ValueError("tf must be >= 0")
    if tf == 0:
        return 0.0
    if stats.avgdl == 0:
        raise ValueError("avgdl is zero for a nonempty corpus")
    norm = params.k1 * (1.0 - params.b + params.b * doc_len / stats.avgdl)
    return idf(df, stats.n_docs) * tf / (tf + norm)


def bm25(query_terms, index: InvertedIndex, params: ScoringParams | None = None):
    """Bag-of-terms scores over the union of the terms' posting lists.

    Returns doc_id -> score; documents matching no term are absent. A
    term repeated in the bag contributes once per repetition.
    """
    if not index.frozen:
        raise UnfrozenIndexError()
    params = params or ScoringParams()
    stats = index.stats
    scores: dict[str, float] = {}
    for term in query_terms:
        postings = index.postings(term)
        if not postings:
            continue
        term_idf = idf(len(postings), stats.n_docs)
        for doc_id, tf in postings.items():
            doc_len = index.get_document(doc_id).length
            norm = params.k1 * (1.0 - params.b + params.b * doc_len / stats.avgdl)
            scores[doc_id] = scores.get(doc_id, 0.0) + term_idf * tf / (tf + norm)
    return scores


def weighted_search(
    query: WeightedQuery,
    index: InvertedIndex,
    params: ScoringParams | None = None,
    top_k: int = DEFAULT_DEPTH,
) -> list[SearchResult]:
    """Rank by combined score, descending; ties break by ascending
    doc_id so repeated calls return byte-identical lists."""
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    params = params or ScoringParams()
    orig = bm25(query.orig_terms, index, params)
    exp = (
        bm25(query.expansion_phrases, index, params)
        if query.expansion_phrases
        else {}
    )
    results = [
        SearchResult(
            doc_id,
            orig.get(doc_id, 0.0) + query.weight * exp.get(doc_id, 0.0),
            orig.get(doc_id, 0.0),
            exp.get(doc_id, 0.0),
        )
        for doc_id in orig.keys() | exp.keys()
    ]
    # a zero combined score (w=0 with expansion-only matches) is
    # indistinguishable from every unmatched document — drop it, so
    # weight 0 degenerates exactly to plain BM25 over orig_terms
    results = [r for r in results if r.score > 0.0]
    results.sort(key=lambda r: (-r.score, r.doc_id))
    return results[:top_k]
