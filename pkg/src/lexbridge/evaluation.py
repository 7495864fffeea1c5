"""Retrieval evaluation: Recall@k, NDCG@k, answer coverage, and the
file formats of a standard qrels-based harness.

Queries without a single positively graded document are excluded from
every average and reported separately — scoring them would divide by
zero or reward arbitrary rankings.
"""

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .tokenizer import normalize


def recall_at_k(ranked_ids: Sequence[str], relevant: Iterable[str], k: int) -> float:
    """Fraction of the relevant documents present in the top k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    relevant = set(relevant)
    if not relevant:
        raise ValueError("relevant set is empty")
    return len(set(ranked_ids[:k]) & relevant) / len(relevant)


def ndcg_at_k(
    ranked_ids: Sequence[str],
    grades: Mapping[str, int],
    k: int,
    exponential: bool = False,
) -> float:
    """Discounted cumulative gain at k over the ideal ordering.

    Gain is the grade itself by default (the common qrels convention) or
    2^grade - 1 with ``exponential``; discount is 1/log2(rank+1).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    relevant = {d: g for d, g in grades.items() if g > 0}
    if not relevant:
        raise ValueError("relevant set is empty")
    gain = (lambda g: (1 << g) - 1) if exponential else (lambda g: g)
    dcg = sum(
        gain(relevant[d]) / math.log2(rank + 1)
        for rank, d in enumerate(ranked_ids[:k], start=1)
        if d in relevant
    )
    ideal = sorted((gain(g) for g in relevant.values()), reverse=True)[:k]
    idcg = sum(v / math.log2(rank + 1) for rank, v in enumerate(ideal, start=1))
    return dcg / idcg


def answer_coverage(
    doc_texts: Sequence[str], answers: Sequence[str], k: int
) -> int:
    """1 iff any gold answer occurs inside the concatenated top-k text.

    Matching is plain substring containment after the tokenizer's
    normalization (casefolding and accent folding, no stemming). Gold
    strings that normalize to nothing are ignored.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not answers:
        raise ValueError("at least one gold answer string required")
    hay = normalize(" ".join(doc_texts[:k]))
    for gold in answers:
        needle = normalize(gold)
        if needle and needle in hay:
            return 1
    return 0


# ----------------------------------------------------------------------
# file formats


def load_qrels(path) -> dict[str, dict[str, int]]:
    """Tab-separated ``query-id<TAB>doc-id<TAB>grade``; a header line is
    tolerated. Non-positive grades mark documents as non-relevant: the
    query stays known, the document is not recorded."""
    qrels: dict[str, dict[str, int]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(
                    f"{path}:{lineno}: expected 3 tab-separated fields, got {len(parts)}"
                )
            qid, did, raw_grade = (p.strip() for p in parts)
            try:
                grade = int(raw_grade)
            except ValueError:
                if lineno == 1:
                    continue  # header
                raise ValueError(
                    f"{path}:{lineno}: grade is not an integer: {raw_grade!r}"
                ) from None
            entry = qrels.setdefault(qid, {})
            if grade > 0:
                entry[did] = grade
    return qrels


def _load_jsonl(path, required: tuple[str, ...]):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
            if not isinstance(record, dict) or any(k not in record for k in required):
                raise ValueError(
                    f"{path}:{lineno}: expected an object with fields {required}"
                )
            yield record


def load_queries(path) -> dict[str, str]:
    """JSON-lines ``{_id, text}``."""
    return {
        str(r["_id"]): str(r["text"]) for r in _load_jsonl(path, ("_id", "text"))
    }


def load_answers(path) -> dict[str, list[str]]:
    """JSON-lines ``{_id, answers: [strings]}``."""
    out = {}
    for r in _load_jsonl(path, ("_id", "answers")):
        answers = r["answers"]
        if not isinstance(answers, list) or not all(
            isinstance(a, str) for a in answers
        ):
            raise ValueError(f"{path}: answers for {r['_id']!r} must be strings")
        out[str(r["_id"])] = answers
    return out


def load_run(path) -> dict[str, list[str]]:
    """Result lines ``{query_id, rank, doc_id, score}`` grouped per query
    and ordered by rank."""
    rows: dict[str, list[tuple[int, str]]] = {}
    for r in _load_jsonl(path, ("query_id", "rank", "doc_id")):
        rows.setdefault(str(r["query_id"]), []).append(
            (int(r["rank"]), str(r["doc_id"]))
        )
    return {
        qid: [doc_id for _, doc_id in sorted(pairs)] for qid, pairs in rows.items()
    }


# ----------------------------------------------------------------------
# report


@dataclass
class EvalReport:
    per_query: dict[str, dict[str, float]]
    averages: dict[str, float]
    evaluated: int
    excluded: list[str]  # known queries with no relevant documents
    missing_from_run: list[str]
    missing_from_qrels: list[str]
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "averages": self.averages,
            "per_query": self.per_query,
            "evaluated": self.evaluated,
            "excluded": self.excluded,
            "missing_from_run": self.missing_from_run,
            "missing_from_qrels": self.missing_from_qrels,
            "metadata": self.metadata,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def table(self) -> str:
        """Fixed-width text table, one row per query plus the mean."""
        columns = sorted(self.averages)
        width = max([12] + [len(q) for q in self.per_query])
        lines = [
            " ".join(["query".ljust(width)] + [c.rjust(12) for c in columns])
        ]
        for qid in sorted(self.per_query):
            metrics = self.per_query[qid]
            cells = [
                f"{metrics[c]:.4f}".rjust(12) if c in metrics else "-".rjust(12)
                for c in columns
            ]
            lines.append(" ".join([qid.ljust(width)] + cells))
        lines.append(
            " ".join(
                ["mean".ljust(width)]
                + [f"{self.averages[c]:.4f}".rjust(12) for c in columns]
            )
        )
        lines.append(
            f"evaluated {self.evaluated} queries"
            + (f", excluded {len(self.excluded)} without relevant docs"
               if self.excluded else "")
        )
        return "\n".join(lines)


def evaluate_run(
    run: Mapping[str, Sequence[str]],
    qrels: Mapping[str, Mapping[str, int]],
    k_values: Sequence[int] = (10,),
    answers: Mapping[str, Sequence[str]] | None = None,
    doc_text: Callable[[str], str] | None = None,
    exponential: bool = False,
    metadata: dict | None = None,
) -> EvalReport:
    """Score a run against qrels at each cutoff.

    Averages are arithmetic means over the queries carrying each metric;
    coverage metrics exist only for queries with gold answers (and need
    a ``doc_text`` lookup).
    """
    if not k_values:
        raise ValueError("at least one k required")
    eligible = {q for q, grades in qrels.items() if grades}
    per_query: dict[str, dict[str, float]] = {}
    for qid in sorted(q for q in run if q in eligible):
        ranked = list(run[qid])
        grades = qrels[qid]
        metrics: dict[str, float] = {}
        for k in k_values:
            metrics[f"recall@{k}"] = recall_at_k(ranked, grades, k)
            metrics[f"ndcg@{k}"] = ndcg_at_k(ranked, grades, k, exponential)
        if answers and qid in answers:
            if doc_text is None:
                raise ValueError("answer coverage needs a doc_text lookup")
            texts = [doc_text(d) for d in ranked[: max(k_values)]]
            for k in k_values:
                metrics[f"coverage@{k}"] = float(
                    answer_coverage(texts, answers[qid], k)
                )
        per_query[qid] = metrics

    averages: dict[str, float] = {}
    for metric in sorted({m for ms in per_query.values() for m in ms}):
        values = [ms[metric] for ms in per_query.values() if metric in ms]
        averages[metric] = sum(values) / len(values)

    return EvalReport(
        per_query=per_query,
        averages=averages,
        evaluated=len(per_query),
        excluded=sorted(q for q, grades in qrels.items() if not grades),
        missing_from_run=sorted(q for q in eligible if q not in run),
        missing_from_qrels=sorted(q for q in run if q not in eligible),
        metadata=metadata or {},
    )
