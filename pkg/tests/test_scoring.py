import math
import random

import pytest

from lexbridge.hashing import phrase_slot
from lexbridge.index import IndexConfig, InvertedIndex
from lexbridge.scoring import (
    ScoringParams,
    SearchResult,
    UnfrozenIndexError,
    WeightedQuery,
    bm25,
    bm25_term,
    idf,
    weighted_search,
)
from lexbridge.tokenizer import tokenize

from _reference import bm25_direct, weighted_direct

VOCAB = ["zork", "blap", "quin", "marv", "tig", "foon", "wex", "plon", "dree", "vask"]


def build(texts, **cfg):
    corpus = [{"_id": f"d{i}", "title": "", "text": t} for i, t in enumerate(texts, 1)]
    return InvertedIndex.build(corpus, IndexConfig(**cfg) if cfg else None)


# ----------------------------------------------------------------------
# idf


def test_idf_frozen_value():
    assert idf(0, 1) == pytest.approx(math.log(4.0), abs=1e-12)
    assert idf(0, 1) == pytest.approx(1.3862943611198906, abs=1e-12)


def test_idf_positive_even_for_ubiquitous_terms():
    for n in (1, 2, 10, 1000):
        assert idf(n, n) > 0


def test_idf_monotone_decreasing():
    values = [idf(df, 50) for df in range(51)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_idf_domain():
    with pytest.raises(ValueError):
        idf(5, 4)
    with pytest.raises(ValueError):
        idf(-1, 4)


# ----------------------------------------------------------------------
# bm25_term


def test_bm25_term_zero_tf():
    index = build(["zork"]).freeze()
    assert bm25_term(0, 1, index.stats, ScoringParams(), 1) == 0.0


def test_bm25_term_frozen_value():
    # one doc, term once, doc_len == avgdl: log(4/3) * 1/(1 + k1)
    index = build(["zork blap"]).freeze()
    got = bm25_term(1, 2, index.stats, ScoringParams(), 1)
    assert got == pytest.approx(math.log(4.0 / 3.0) * 0.4, abs=1e-12)
    assert got == pytest.approx(0.115073, abs=1e-6)


def test_bm25_term_saturates_below_idf():
    index = build(["zork blap", "quin marv"]).freeze()
    params = ScoringParams()
    bound = idf(1, 2)
    prev = 0.0
    for tf in range(1, 60):
        val = bm25_term(tf, 2, index.stats, params, 1)
        assert prev < val < bound
        prev = val


def test_scoring_params_validation():
    with pytest.raises(ValueError):
        ScoringParams(k1=-0.1)
    with pytest.raises(ValueError):
        ScoringParams(b=1.5)
    with pytest.raises(ValueError):
        ScoringParams(variant="bm25plus")


# ----------------------------------------------------------------------
# bm25 over the index


def test_bm25_requires_frozen_index():
    index = build(["zork blap"])
    with pytest.raises(UnfrozenIndexError):
        bm25(["zork"], index)


def test_bm25_empty_query():
    index = build(["zork blap"]).freeze()
    assert bm25([], index) == {}


def test_bm25_unmatched_terms_contribute_nothing():
    index = build(["zork blap"]).freeze()
    assert bm25(["ghost"], index) == {}
    assert bm25(["zork", "ghost"], index) == bm25(["zork"], index)


def test_bm25_duplicate_term_counts_twice():
    index = build(["zork blap", "quin marv"]).freeze()
    single = bm25(["zork"], index)
    double = bm25(["zork", "zork"], index)
    assert set(single) == set(double)
    for doc_id in single:
        assert double[doc_id] == 2 * single[doc_id]


def unique_slot_grams(docs_stems, slot_count=2**23):
    """Observed 2-4-grams whose hash slot is shared with no other gram.

    Collision over-estimation is a separate documented property; the
    formula-equivalence trials only query collision-free phrases.
    """
    grams = set()
    for stems in docs_stems.values():
        for i in range(len(stems)):
            for n in (2, 3, 4):
                if i + n <= len(stems):
                    grams.add(" ".join(stems[i : i + n]))
    slots = {}
    for g in grams:
        slots.setdefault(phrase_slot(g, slot_count), []).append(g)
    return sorted(g for bucket in slots.values() if len(bucket) == 1 for g in bucket)


def random_fixture(rng):
    texts = [
        " ".join(rng.choice(VOCAB) for _ in range(rng.randint(1, 12)))
        for _ in range(rng.randint(1, 12))
    ]
    index = build(texts).freeze()
    docs_stems = {f"d{i}": tokenize(t) for i, t in enumerate(texts, 1)}
    return index, docs_stems


def test_bm25_matches_direct_formula():
    rng = random.Random(31)
    for _ in range(150):
        index, docs_stems = random_fixture(rng)
        terms = [rng.choice(VOCAB + ["ghost"]) for _ in range(rng.randint(1, 5))]
        phrases = unique_slot_grams(docs_stems)
        if phrases and rng.random() < 0.7:
            terms.append(rng.choice(phrases))
        got = bm25(terms, index)
        want = bm25_direct(docs_stems, terms)
        assert set(got) == set(want)
        for doc_id, score in want.items():
            assert got[doc_id] == pytest.approx(score, abs=1e-9)


def test_weighted_search_matches_direct_formula():
    rng = random.Random(97)
    for _ in range(150):
        index, docs_stems = random_fixture(rng)
        orig = tuple(rng.choice(VOCAB) for _ in range(rng.randint(1, 4)))
        phrases = unique_slot_grams(docs_stems)
        exp = tuple(
            rng.choice(phrases) for _ in range(rng.randint(0, min(3, len(phrases))))
        )
        weight = rng.choice([0.0, 0.25, 0.5, 1.3])
        query = WeightedQuery(orig, exp, weight)
        results = weighted_search(query, index)
        want = weighted_direct(docs_stems, list(orig), list(exp), weight)
        assert [r.doc_id for r in results] == sorted(
            want, key=lambda d: (-want[d], d)
        )
        for r in results:
            assert r.score == pytest.approx(want[r.doc_id], abs=1e-9)
            assert r.score == pytest.approx(
                r.orig_score + weight * r.exp_score, abs=1e-9
            )


# ----------------------------------------------------------------------
# weighted_search behavior


def test_weight_zero_matches_orig_only():
    index = build(["zork blap quin", "blap quin", "marv zork"]).freeze()
    plain = weighted_search(WeightedQuery(("zork", "quin"), (), 0.5), index)
    zeroed = weighted_search(
        WeightedQuery(("zork", "quin"), ("blap quin",), 0.0), index
    )
    assert [r.doc_id for r in plain] == [r.doc_id for r in zeroed]
    for a, b in zip(plain, zeroed):
        assert a.score == b.score == a.orig_score


def test_weight_zero_drops_expansion_only_matches():
    # d3 matches nothing but the expansion phrase
    index = build(["zork blap", "zork quin", "marv tig"]).freeze()
    at_zero = weighted_search(WeightedQuery(("zork",), ("marv tig",), 0.0), index)
    assert [r.doc_id for r in at_zero] == ["d1", "d2"]
    at_half = weighted_search(WeightedQuery(("zork",), ("marv tig",), 0.5), index)
    assert "d3" in [r.doc_id for r in at_half]


def test_tie_break_ascending_doc_id():
    corpus = [
        {"_id": "b", "title": "", "text": "zork blap"},
        {"_id": "a", "title": "", "text": "zork blap"},
    ]
    index = InvertedIndex.build(corpus).freeze()
    results = weighted_search(WeightedQuery(("zork",)), index)
    assert [r.doc_id for r in results] == ["a", "b"]


def test_top_k_truncation():
    index = build(["zork a", "zork b", "zork c"]).freeze()
    results = weighted_search(WeightedQuery(("zork",)), index, top_k=2)
    assert len(results) == 2
    with pytest.raises(ValueError):
        weighted_search(WeightedQuery(("zork",)), index, top_k=0)


def test_repeated_calls_identical():
    index = build(["zork blap quin", "blap quin marv", "quin marv tig"]).freeze()
    query = WeightedQuery(("quin", "zork"), ("blap quin",), 0.5)
    first = weighted_search(query, index)
    for _ in range(5):
        assert weighted_search(query, index) == first


def test_more_tf_never_scores_lower():
    # d1 swaps a filler token for a second copy of the query term;
    # lengths, df and every other document stay fixed
    base = build(["zork blap", "quin marv", "foon wex"]).freeze()
    bumped = build(["zork zork", "quin marv", "foon wex"]).freeze()
    assert bm25(["zork"], bumped)["d1"] > bm25(["zork"], base)["d1"]


def test_enriched_phrase_scores_through_its_slot():
    texts = ["cat sat", "dog sat", "cat ran"]
    plain = build(texts).freeze()
    enriched = build(texts)
    enriched.enrich("d3", "night vision")
    enriched.freeze()

    # full-phrase query reaches d3 through the atomic slot
    results = weighted_search(
        WeightedQuery((), ("night vision",), 0.5), enriched
    )
    assert [r.doc_id for r in results] == ["d3"]
    want = 0.5 * math.log(1.0 + 2.5 / 1.5) * (1.0 / (1.0 + 1.5))
    assert results[0].score == pytest.approx(want, abs=1e-12)

    # constituent unigrams see nothing: the slot is atomic
    assert bm25(["night"], enriched) == {}
    assert bm25(["vision"], enriched) == {}
    # and scores of the original text are untouched by enrichment
    for term in ("cat", "sat", "dog", "ran"):
        assert bm25([term], enriched) == bm25([term], plain)


# ----------------------------------------------------------------------
# WeightedQuery


def test_query_from_text():
    q = WeightedQuery.from_text("Diagnostic Accuracy")
    assert q.orig_terms == ("diagnost", "accuraci")
    assert q.expansion_phrases == ()
    assert q.weight == 0.5


def test_query_validation():
    with pytest.raises(ValueError):
        WeightedQuery(("zork",), weight=-0.1)
    with pytest.raises(ValueError):
        WeightedQuery(("zork",), ("a b c d e",))
    with pytest.raises(ValueError):
        WeightedQuery(("zork",), ("",))


def test_search_result_is_plain_record():
    r = SearchResult("d1", 1.5, 1.0, 1.0)
    assert r.doc_id == "d1"
    assert r.score == 1.5
