#!/usr/bin/env python3
# Build an in-memory index over a handful of documents and poke at the
# two tiers, then run a weighted search.

from lexbridge import InvertedIndex, WeightedQuery, tokenize, weighted_search

corpus = [
    {"_id": "d1", "title": "Night photography", "text": "long exposure shots of the night sky"},
    {"_id": "d2", "title": "Camera care", "text": "clean the camera lens with a soft cloth"},
    {"_id": "d3", "title": "Stars", "text": "star trails appear when the sky rotates overhead"},
    {"_id": "d4", "title": "Soup", "text": "simmer the beans until soft"},
]

index = InvertedIndex.build(corpus)

# single stems live in the exact unigram tier
print(index.df_lookup("camera"))       # df=1, tier='unigram'
print(index.df_lookup("sky"))          # df=2

# 2-4 stem phrases are hashed into a bounded slot table
print(index.df_lookup("night sky"))    # tier='hashed'
print(index.df_lookup("bean soup"))    # df=0 - never seen in that order

index.freeze()  # no more writes; scoring requires this

# expansion phrases are matched by their canonical (stemmed) form, so
# "star trails" must become "star trail" before it can hit a slot
phrases = [" ".join(tokenize(p)) for p in ["star trails", "long exposure"]]
query = WeightedQuery.from_text(
    "night sky photos", phrases, stopwords=index.config.stopwords
)

for r in weighted_search(query, index, top_k=4):
    # score = orig + 0.5 * expansion; the parts are kept for inspection
    print(f"{r.doc_id}  {r.score:8.4f}  (orig {r.orig_score:.4f}, exp {r.exp_score:.4f})")
