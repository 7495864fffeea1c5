"""Training-free sparse retrieval with controllable vocabulary enrichment.

The package is layered: :mod:`lexbridge.index` stores documents in a two-tier
(exact unigram + hashed n-gram) BM25 index, :mod:`lexbridge.scoring` runs
weighted two-sided queries against it, :mod:`lexbridge.enrichment` grows the
vocabulary of both sides with DF-guarded LLM proposals, and
:mod:`lexbridge.rerank` / :mod:`lexbridge.evaluation` cover optional pointwise
reranking and BEIR-style measurement.  Everything is reachable from the
``lexbridge`` command-line tool as well (see :mod:`lexbridge.cli`).
"""

from .config import ConfigError, load_config, parse_config_text
from .enrichment import (
    DEFAULT_TAU,
    FilterConfig,
    PhraseVerdict,
    QueryExpansion,
    SubjectReport,
    df_filter,
    enrich_corpus,
    expand_query,
)
from .evaluation import (
    EvalReport,
    answer_coverage,
    evaluate_run,
    load_answers,
    load_qrels,
    load_queries,
    load_run,
    ndcg_at_k,
    recall_at_k,
)
from .index import (
    DEFAULT_SLOT_COUNT,
    DfLookup,
    Document,
    DuplicateDocumentError,
    EmptyPhraseError,
    FrozenIndexError,
    IndexConfig,
    IndexFormatError,
    IndexStats,
    InvertedIndex,
    OversizePhraseError,
    UnknownDocumentError,
    read_corpus_jsonl,
)
from .providers import (
    DEFAULT_MAX_PHRASES,
    EndpointConfig,
    HttpProvider,
    Provider,
    ProviderError,
    ProviderParseError,
    ProviderRequestError,
    StubProvider,
    extract_string_array,
)
from .rerank import (
    DEFAULT_FINAL_K,
    RelevanceJudgement,
    RerankResult,
    parse_judgement,
    rerank,
)
from .scoring import (
    DEFAULT_B,
    DEFAULT_DEPTH,
    DEFAULT_K1,
    DEFAULT_WEIGHT,
    ScoringParams,
    SearchResult,
    UnfrozenIndexError,
    WeightedQuery,
    bm25,
    idf,
    weighted_search,
)
from .templating import TASKS, PromptConfig, UnknownTaskError, packaged_template
from .tokenizer import normalize, shingle, tokenize

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "load_config",
    "parse_config_text",
    "DEFAULT_TAU",
    "FilterConfig",
    "PhraseVerdict",
    "QueryExpansion",
    "SubjectReport",
    "df_filter",
    "enrich_corpus",
    "expand_query",
    "EvalReport",
    "answer_coverage",
    "evaluate_run",
    "load_answers",
    "load_qrels",
    "load_queries",
    "load_run",
    "ndcg_at_k",
    "recall_at_k",
    "DEFAULT_SLOT_COUNT",
    "DfLookup",
    "Document",
    "DuplicateDocumentError",
    "EmptyPhraseError",
    "FrozenIndexError",
    "IndexConfig",
    "IndexFormatError",
    "IndexStats",
    "InvertedIndex",
    "OversizePhraseError",
    "UnknownDocumentError",
    "read_corpus_jsonl",
    "DEFAULT_MAX_PHRASES",
    "EndpointConfig",
    "HttpProvider",
    "Provider",
    "ProviderError",
    "ProviderParseError",
    "ProviderRequestError",
    "StubProvider",
    "extract_string_array",
    "DEFAULT_FINAL_K",
    "RelevanceJudgement",
    "RerankResult",
    "parse_judgement",
    "rerank",
    "DEFAULT_B",
    "DEFAULT_DEPTH",
    "DEFAULT_K1",
    "DEFAULT_WEIGHT",
    "ScoringParams",
    "SearchResult",
    "UnfrozenIndexError",
    "WeightedQuery",
    "bm25",
    "idf",
    "weighted_search",
    "TASKS",
    "PromptConfig",
    "UnknownTaskError",
    "packaged_template",
    "normalize",
    "shingle",
    "tokenize",
    "__version__",
]
