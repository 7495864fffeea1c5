"""Pointwise reranking of weighted-search candidates.

Each of the top ``depth`` candidates is judged independently on a 0-100
integer scale by a pluggable judge (same provider abstraction as
enrichment); candidates are re-sorted by judged score and the top
``final_k`` returned. The stage is a pure permutation of its input: a
failed or unparseable judgement demotes a candidate via the sentinel
score -1 instead of dropping it, so a dead judge degrades to the
original ranking.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .index import InvertedIndex
from .providers import (
    Provider,
    ProviderError,
    ProviderParseError,
    ProviderRequest,
    _iter_json_values,
)
from .scoring import DEFAULT_DEPTH, SearchResult
from .templating import PromptConfig

DEFAULT_FINAL_K = 10
SENTINEL = -1


@dataclass(frozen=True)
class RelevanceJudgement:
    doc_id: str
    score: int  # 0..100, or -1 when judging failed
    raw_reply: str | None

    @property
    def failed(self) -> bool:
        return self.score == SENTINEL


@dataclass(frozen=True)
class RerankedEntry:
    result: SearchResult
    judgement: RelevanceJudgement


@dataclass(frozen=True)
class RerankResult:
    entries: tuple[RerankedEntry, ...]  # final top-final_k ordering
    judgements: tuple[RelevanceJudgement, ...]  # audit, input order
    failures: int


def parse_judgement(reply: str) -> int:
    """First well-formed JSON object carrying an integer ``score``,
    clamped to [0, 100]. Booleans do not count as integers."""
    for value in _iter_json_values(reply, "{"):
        if isinstance(value, dict):
            score = value.get("score")
            if isinstance(score, int) and not isinstance(score, bool):
                return min(100, max(0, score))
    raise ProviderParseError(f"no integer score object in reply: {reply[:200]!r}")


def rerank(
    query_text: str,
    candidates: Sequence[SearchResult],
    judge: Provider,
    index: InvertedIndex,
    prompt_config: PromptConfig | None = None,
    depth: int = DEFAULT_DEPTH,
    final_k: int = DEFAULT_FINAL_K,
    query_id: str = "query",
    max_workers: int = 1,
) -> RerankResult:
    """Judge the top ``depth`` candidates and re-sort.

    Sort key: judged score desc, then original weighted score desc, then
    doc_id asc — so equal judgements preserve the incoming order, and
    sentinel candidates stay in their original relative order below all
    judged ones.
    """
    if depth < 1 or final_k < 1:
        raise ValueError("depth and final_k must be >= 1")
    prompt_config = prompt_config or PromptConfig()

    def judge_one(result: SearchResult) -> RelevanceJudgement:
        doc = index.get_document(result.doc_id)
        request = ProviderRequest(
            f"{query_id}::{result.doc_id}",
            prompt_config.render_judge(query_text, doc.full_text),
        )
        try:
            raw = judge.complete(request)
        except ProviderError:
            return RelevanceJudgement(result.doc_id, SENTINEL, None)
        try:
            return RelevanceJudgement(result.doc_id, parse_judgement(raw), raw)
        except ProviderParseError:
            return RelevanceJudgement(result.doc_id, SENTINEL, raw)

    head = list(candidates[:depth])
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            judgements = list(pool.map(judge_one, head))
    else:
        judgements = [judge_one(r) for r in head]

    # anything past the judging depth keeps the sentinel but is not a failure
    entries = [
        RerankedEntry(result, judgement)
        for result, judgement in zip(head, judgements)
    ]
    entries += [
        RerankedEntry(result, RelevanceJudgement(result.doc_id, SENTINEL, None))
        for result in candidates[depth:]
    ]
    entries.sort(
        key=lambda e: (-e.judgement.score, -e.result.score, e.result.doc_id)
    )
    return RerankResult(
        entries=tuple(entries[:final_k]),
        judgements=tuple(judgements),
        failures=sum(j.failed for j in judgements),
    )
