"""Two-sided vocabulary enrichment: the DF guardrail, offline corpus
enrichment, and online query expansion.

Both sides share one filter: a proposed phrase is accepted only when its
measured document frequency stays within ``tau * n_docs``; the query
side additionally demands DF > 0, so expansions are always grounded in
vocabulary the (enriched) index can actually match.

Corpus-side verdicts are all measured against the index state BEFORE any
registration from the same run, so the outcome is independent of
document order. Accepted phrases of more than four stems cannot occupy
one slot; they are decomposed into sliding 4-stem windows, each
registered without re-stemming.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable

from .index import InvertedIndex
from .providers import (
    Provider,
    ProviderError,
    ProviderRequest,
    DEFAULT_MAX_PHRASES,
)
from .scoring import DEFAULT_WEIGHT, WeightedQuery
from .templating import PromptConfig
from .tokenizer import canonical_phrase, tokenize

DEFAULT_TAU = 0.5

# verdict rules
RULE_OK = "ok"
RULE_EMPTY = "empty_phrase"
RULE_ABOVE_BOUND = "df_above_bound"
RULE_ZERO = "df_zero"
RULE_OVERSIZE = "oversize"


@dataclass(frozen=True)
class FilterConfig:
    tau: float = DEFAULT_TAU
    require_nonzero: bool = False

    def __post_init__(self):
        if not 0.0 < self.tau <= 1.0:
            raise ValueError("tau must lie in (0, 1]")


@dataclass(frozen=True)
class EnrichmentProposal:
    target: str  # doc_id or query id
    phrases: tuple[str, ...]
    provenance: str


@dataclass(frozen=True)
class PhraseVerdict:
    phrase: str  # raw provider output
    canonical: str | None  # stems joined by spaces; None when nothing survives
    df: int
    rule: str

    @property
    def accepted(self) -> bool:
        return self.rule == RULE_OK


def df_filter(
    phrases: Iterable[str],
    index: InvertedIndex,
    config: FilterConfig,
) -> tuple[list[str], list[PhraseVerdict]]:
    """Verdict for every phrase; the accepted list preserves input order.

    DF routes through the index tiers: exact for single stems, hashed
    slot (possibly over-estimating) for 2-4 stems. Longer phrases have
    no measurable DF; they pass the corpus-side bound trivially and are
    rejected as oversize when DF > 0 is demanded.
    """
    n_docs = index.stats.n_docs
    bound = config.tau * n_docs
    accepted, verdicts = [], []
    for phrase in phrases:
        stems = tokenize(phrase, index.config.stopwords)
        if not stems:
            verdicts.append(PhraseVerdict(phrase, None, 0, RULE_EMPTY))
            continue
        canonical = canonical_phrase(stems)
        lookup = index.df_lookup(canonical)
        if not lookup.supported and config.require_nonzero:
            verdicts.append(PhraseVerdict(phrase, canonical, 0, RULE_OVERSIZE))
            continue
        if lookup.df > bound:
            verdicts.append(
                PhraseVerdict(phrase, canonical, lookup.df, RULE_ABOVE_BOUND)
            )
            continue
        if config.require_nonzero and lookup.df == 0:
            verdicts.append(PhraseVerdict(phrase, canonical, 0, RULE_ZERO))
            continue
        verdicts.append(PhraseVerdict(phrase, canonical, lookup.df, RULE_OK))
        accepted.append(phrase)
    return accepted, verdicts


@dataclass(frozen=True)
class SubjectReport:
    subject_id: str
    proposed: int
    accepted: int
    rejected: int
    registered_slots: int
    verdicts: tuple[PhraseVerdict, ...]
    provider_error: str | None = None


def _collect_proposals(subjects, provider, render, max_phrases, max_workers):
    """One provider call per subject; failures become per-subject records
    instead of aborting the batch. Result order matches subject order."""

    def call(subject):
        subject_id, text = subject
        request = ProviderRequest(subject_id, render(text), max_phrases)
        try:
            response = provider.propose(request)
        except ProviderError as exc:
            return EnrichmentProposal(subject_id, (), provider.name), str(exc)
        phrases = tuple(p for p in response.phrases if p.strip())
        return EnrichmentProposal(subject_id, phrases, provider.name), None

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(call, subjects))
    return [call(s) for s in subjects]


def enrich_corpus(
    index: InvertedIndex,
    provider: Provider,
    prompt_config: PromptConfig | None = None,
    filter_config: FilterConfig | None = None,
    max_phrases: int = DEFAULT_MAX_PHRASES,
    max_workers: int = 1,
) -> list[SubjectReport]:
    """Propose, filter, and register anticipated search vocabulary for
    every document. Returns one report per document in corpus order."""
    prompt_config = prompt_config or PromptConfig()
    filter_config = replace(
        filter_config or FilterConfig(), require_nonzero=False
    )
    subjects = [(doc.doc_id, doc.full_text) for doc in index.documents()]
    outcomes = _collect_proposals(
        subjects, provider, prompt_config.render_corpus, max_phrases, max_workers
    )

    # filter everything against the pre-registration snapshot first, so
    # one document's new slots cannot sway another document's verdicts
    filtered = []
    for proposal, error in outcomes:
        _, verdicts = df_filter(proposal.phrases, index, filter_config)
        filtered.append((proposal, verdicts, error))

    max_n = index.config.ngram_max
    reports = []
    for proposal, verdicts, error in filtered:
        slots = 0
        for verdict in verdicts:
            if not verdict.accepted:
                continue
            stems = verdict.canonical.split(" ")
            if len(stems) <= max_n:
                index.enrich(proposal.target, verdict.phrase)
                slots += 1
            else:
                # oversize: every sliding max_n-stem window, stems verbatim
                for start in range(len(stems) - max_n + 1):
                    index.register_stems(
                        proposal.target, stems[start : start + max_n]
                    )
                    slots += 1
        n_accepted = sum(v.accepted for v in verdicts)
        reports.append(
            SubjectReport(
                subject_id=proposal.target,
                proposed=len(verdicts),
                accepted=n_accepted,
                rejected=len(verdicts) - n_accepted,
                registered_slots=slots,
                verdicts=tuple(verdicts),
                provider_error=error,
            )
        )
    return reports


@dataclass(frozen=True)
class QueryExpansion:
    query: WeightedQuery
    verdicts: tuple[PhraseVerdict, ...]
    provider_error: str | None = None

    @property
    def degraded(self) -> bool:
        """True when the provider failed and the query fell back to its
        original terms only."""
        return self.provider_error is not None


def expand_query(
    query_text: str,
    index: InvertedIndex,
    provider: Provider,
    prompt_config: PromptConfig | None = None,
    filter_config: FilterConfig | None = None,
    weight: float = DEFAULT_WEIGHT,
    max_phrases: int = DEFAULT_MAX_PHRASES,
    query_id: str = "query",
) -> QueryExpansion:
    """Assemble the two-bag weighted query for one raw query string.

    The expansion bag holds the canonical forms of provider phrases that
    survive the grounded filter (DF > 0 is forced on this side). A
    provider failure degrades to the original terms alone and is flagged
    on the result rather than raised.
    """
    prompt_config = prompt_config or PromptConfig()
    filter_config = replace(
        filter_config or FilterConfig(), require_nonzero=True
    )
    orig_terms = tuple(tokenize(query_text, index.config.stopwords))

    request = ProviderRequest(
        query_id, prompt_config.render_query(query_text), max_phrases
    )
    try:
        response = provider.propose(request)
    except ProviderError as exc:
        return QueryExpansion(
            WeightedQuery(orig_terms, (), weight), (), str(exc)
        )

    phrases = [p for p in response.phrases if p.strip()]
    _, verdicts = df_filter(phrases, index, filter_config)
    expansion = tuple(v.canonical for v in verdicts if v.accepted)
    return QueryExpansion(
        WeightedQuery(orig_terms, expansion, weight), tuple(verdicts)
    )
