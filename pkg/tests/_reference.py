"""Independent brute-force oracles used by the test suites.

Everything here works directly on stem sequences with no inverted
index, no hashing, and no shared scoring code, so agreement with the
engine is meaningful.
"""

import math


def contiguous_count(stems, phrase):
    """Occurrences of `phrase` (list of stems) as a contiguous run."""
    n = len(phrase)
    if n == 0 or n > len(stems):
        return 0
    return sum(1 for i in range(len(stems) - n + 1) if stems[i : i + n] == phrase)


def bm25_direct(docs_stems, query_terms, k1=1.5, b=0.75):
    """Per-document BM25 evaluated straight from the formula.

    docs_stems: dict doc_id -> list of stems.
    query_terms: list of canonical strings (stems joined by spaces).
    Returns doc_id -> score for documents matching at least one term.
    """
    n_docs = len(docs_stems)
    avgdl = sum(len(s) for s in docs_stems.values()) / n_docs
    df = {}
    for term in query_terms:
        if term not in df:
            phrase = term.split(" ")
            df[term] = sum(
                1 for s in docs_stems.values() if contiguous_count(s, phrase) > 0
            )
    scores = {}
    for doc_id, stems in docs_stems.items():
        total = 0.0
        matched = False
        for term in query_terms:
            tf = contiguous_count(stems, term.split(" "))
            if tf == 0:
                continue
            matched = True
            idf = math.log(1.0 + (n_docs - df[term] + 0.5) / (df[term] + 0.5))
            norm = k1 * (1.0 - b + b * len(stems) / avgdl)
            total += idf * tf / (tf + norm)
        if matched:
            scores[doc_id] = total
    return scores


def weighted_direct(docs_stems, orig_terms, exp_terms, weight, k1=1.5, b=0.75):
    """Two-query weighted combination evaluated from the formula.

    A document whose combined score is zero (possible at weight 0) is
    indistinguishable from an unmatched one and is left out.
    """
    orig = bm25_direct(docs_stems, orig_terms, k1, b) if orig_terms else {}
    exp = bm25_direct(docs_stems, exp_terms, k1, b) if exp_terms else {}
    combined = {
        doc_id: orig.get(doc_id, 0.0) + weight * exp.get(doc_id, 0.0)
        for doc_id in set(orig) | set(exp)
    }
    return {doc_id: score for doc_id, score in combined.items() if score > 0.0}


def recall_oracle(ranked, relevant, k):
    hits = set()
    for d in ranked[:k]:
        if d in relevant:
            hits.add(d)
    return len(hits) / len(relevant)


def ndcg_oracle(ranked, grades, k, exponential=False):
    def gain(g):
        return 2**g - 1 if exponential else g

    dcg = 0.0
    for i in range(min(k, len(ranked))):
        g = grades.get(ranked[i], 0)
        if g > 0:
            dcg += gain(g) / math.log2(i + 2)
    best = sorted((gain(g) for g in grades.values() if g > 0), reverse=True)
    idcg = 0.0
    for i in range(min(k, len(best))):
        idcg += best[i] / math.log2(i + 2)
    return dcg / idcg
