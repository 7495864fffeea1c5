#!/usr/bin/env python3
# A query and its best document can share no words at all. This walk-
# through closes that gap with scripted (offline) enrichment on both
# sides, which is exactly what an LLM provider would do live.

from lexbridge import (
    FilterConfig,
    InvertedIndex,
    StubProvider,
    WeightedQuery,
    enrich_corpus,
    expand_query,
    weighted_search,
)

corpus = [
    {"_id": "gold", "text": "renal lithiasis management chart"},
    {"_id": "acne", "text": "acne treatment cream"},
    {"_id": "burn", "text": "burn treatment guide"},
    {"_id": "soil", "text": "garden soil mix"},
]
query = "kidney stones treatment"

# baseline: the gold document scores zero - different vocabulary
base = InvertedIndex.build(corpus).freeze()
print("before:", [r.doc_id for r in weighted_search(WeightedQuery.from_text(query), base)])

index = InvertedIndex.build(corpus)

# document side: a provider anticipates how searchers would phrase it.
# The stub plays back a fixed script; swap in HttpProvider for a live model.
provider = StubProvider({"gold": ["kidney stones", "the"]})
reports = enrich_corpus(index, provider)
for r in reports:
    if r.proposed:
        # "the" dissolves into stopwords -> rejected as empty
        print(r.subject_id, [(v.phrase, v.rule) for v in r.verdicts])

index.freeze()

# query side: phrases must already exist somewhere in the corpus
# (DF > 0), so hallucinated vocabulary cannot enter the query
expansion = expand_query(
    query,
    index,
    StubProvider({"q": ["kidney stones", "renal lithiasis", "moon dust"]}),
    filter_config=FilterConfig(tau=0.5),
    query_id="q",
)
print("expansion bag:", expansion.query.expansion_phrases)
print("rejected:", [(v.phrase, v.rule) for v in expansion.verdicts if not v.accepted])

print("after: ", [r.doc_id for r in weighted_search(expansion.query, index)])
