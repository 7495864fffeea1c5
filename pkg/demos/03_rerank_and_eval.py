#!/usr/bin/env python3
# Rerank retrieval candidates with a scripted 0-100 judge, then measure
# the run with the evaluation helpers.

from lexbridge import (
    InvertedIndex,
    StubProvider,
    WeightedQuery,
    evaluate_run,
    ndcg_at_k,
    recall_at_k,
    rerank,
    weighted_search,
)

corpus = [
    {"_id": "d1", "text": "train schedule for the northern line"},
    {"_id": "d2", "text": "train maintenance depot schedule"},
    {"_id": "d3", "text": "how to train a puppy on a schedule"},
    {"_id": "d4", "text": "bus schedule downtown"},
]
index = InvertedIndex.build(corpus).freeze()

query = WeightedQuery.from_text("train schedule", stopwords=index.config.stopwords)
candidates = weighted_search(query, index)
print("lexical order:", [r.doc_id for r in candidates])

# the judge sees one (query, document) pair at a time and answers with
# a JSON object carrying an integer score; keys are "query_id::doc_id"
judge = StubProvider({
    "q1::d1": '{"score": 92}',
    "q1::d2": '{"score": 70}',
    "q1::d3": 'The request is off-topic for travel. {"score": 15}',
    "q1::d4": '{"score": 40}',
})
result = rerank("train schedule", candidates, judge, index, final_k=3, query_id="q1")
print("judged order: ", [e.result.doc_id for e in result.entries])
print("failures:", result.failures)  # unparseable/missing judgements sink, never crash

# metrics work on plain id lists ...
ranked = [e.result.doc_id for e in result.entries]
print("recall@3 =", recall_at_k(ranked, {"d1", "d2"}, 3))
print("ndcg@3   =", round(ndcg_at_k(ranked, {"d1": 2, "d2": 1}, 3), 4))

# ... or on a whole run at once
report = evaluate_run({"q1": ranked}, {"q1": {"d1": 2, "d2": 1}}, k_values=(1, 3))
print(report.table())
