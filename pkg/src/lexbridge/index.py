"""Two-tier inverted index with corpus statistics and enrichment slots.

Tier one is an exact unigram index (stem -> postings). Tier two is a
memory-bounded hashed index: every 2..4-gram shingle of a document maps
to ``murmur3_32(canonical) % slot_count``. Distinct n-grams may collide
into one slot, so a slot's posting count can only over-estimate an
n-gram's true document frequency, never under-estimate it; colliding
n-grams from the same document accumulate into a single posting's tf.

Enrichment registers an externally proposed phrase as one atomic slot
posting (tf=1) for a document without touching its stored length, so
BM25 scores of the original text are unchanged by enrichment.
"""

import json
import struct
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .hashing import phrase_slot
from .tokenizer import DEFAULT_STOPWORDS, canonical_phrase, tokenize

DEFAULT_SLOT_COUNT = 2**23

_MAGIC = b"LBIX"
_FORMAT_VERSION = 1


class IndexError_(Exception):
    """Base class for index contract violations."""


class DuplicateDocumentError(IndexError_):
    def __init__(self, doc_id: str):
        super().__init__(f"duplicate document id: {doc_id!r}")
        self.doc_id = doc_id


class UnknownDocumentError(IndexError_):
    def __init__(self, doc_id: str):
        super().__init__(f"unknown document id: {doc_id!r}")
        self.doc_id = doc_id


class EmptyPhraseError(IndexError_):
    def __init__(self, phrase: str):
        super().__init__(f"phrase tokenizes to no stems: {phrase!r}")
        self.phrase = phrase


class OversizePhraseError(IndexError_):
    def __init__(self, phrase: str, n_stems: int, max_n: int):
        super().__init__(
            f"phrase has {n_stems} stems, exceeding the {max_n}-gram tier: {phrase!r}"
        )
        self.phrase = phrase
        self.n_stems = n_stems


class FrozenIndexError(IndexError_):
    def __init__(self):
        super().__init__("index is frozen; enrichment is no longer permitted")


class IndexFormatError(IndexError_):
    """Raised when an index file fails to parse."""


@dataclass(frozen=True)
class Document:
    doc_id: str
    title: str
    text: str
    length: int  # token count at indexing time; never changed by enrichment

    @property
    def full_text(self) -> str:
        return f"{self.title} {self.text}" if self.title else self.text


@dataclass(frozen=True)
class IndexStats:
    n_docs: int
    avgdl: float


@dataclass(frozen=True)
class DfLookup:
    df: int
    tier: str | None  # "unigram", "hashed", or None when unsupported

    @property
    def supported(self) -> bool:
        return self.tier is not None


@dataclass(frozen=True)
class IndexConfig:
    slot_count: int = DEFAULT_SLOT_COUNT
    ngram_min: int = 2
    ngram_max: int = 4
    stopwords: frozenset[str] = field(default_factory=lambda: DEFAULT_STOPWORDS)

    def __post_init__(self):
        if self.slot_count < 1:
            raise ValueError("slot_count must be positive")
        if not 1 <= self.ngram_min <= self.ngram_max:
            raise ValueError("invalid n-gram range")


@dataclass(frozen=True)
class EnrichOutcome:
    doc_id: str
    phrase: str
    canonical: str | None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


class InvertedIndex:
    """Single-writer during build/enrichment; freeze() seals it for
    unlimited concurrent readers."""

    def __init__(self, config: IndexConfig | None = None):
        self.config = config or IndexConfig()
        self._docs: dict[str, Document] = {}
        self._unigram: dict[str, dict[str, int]] = {}
        self._hashed: dict[int, dict[str, int]] = {}
        self._total_length = 0
        self._frozen = False

    # ------------------------------------------------------------------
    # construction

    @classmethod
    def build(
        cls,
        corpus: Iterable[Mapping[str, str]],
        config: IndexConfig | None = None,
    ) -> "InvertedIndex":
        """Index a corpus of ``{"_id", "title", "text"}`` records.

        Title and body are concatenated with a single space for both the
        token stream and the stored length.
        """
        index = cls(config)
        for record in corpus:
            index._add_document(
                str(record["_id"]),
                str(record.get("title", "") or ""),
                str(record.get("text", "") or ""),
            )
        return index

    def _add_document(self, doc_id: str, title: str, text: str) -> None:
        if doc_id in self._docs:
            raise DuplicateDocumentError(doc_id)
        tokens = tokenize(
            f"{title} {text}" if title else text, self.config.stopwords
        )
        self._docs[doc_id] = Document(doc_id, title, text, len(tokens))
        self._total_length += len(tokens)

        for term, tf in Counter(tokens).items():
            self._unigram.setdefault(term, {})[doc_id] = tf

        if len(tokens) >= self.config.ngram_min:
            grams = Counter()
            for start in range(len(tokens)):
                for n in range(self.config.ngram_min, self.config.ngram_max + 1):
                    end = start + n
                    if end > len(tokens):
                        break
                    grams[canonical_phrase(tokens[start:end])] += 1
            for gram, tf in grams.items():
                slot = phrase_slot(gram, self.config.slot_count)
                postings = self._hashed.setdefault(slot, {})
                # colliding n-grams of one document share a posting
                postings[doc_id] = postings.get(doc_id, 0) + tf

    # ------------------------------------------------------------------
    # statistics and lookups

    @property
    def stats(self) -> IndexStats:
        n = len(self._docs)
        return IndexStats(n, self._total_length / n if n else 0.0)

    @property
    def frozen(self) -> bool:
        return self._frozen

    @property
    def unigram_term_count(self) -> int:
        return len(self._unigram)

    @property
    def occupied_slot_count(self) -> int:
        return len(self._hashed)

    def freeze(self) -> "InvertedIndex":
        self._frozen = True
        return self

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._docs

    def __len__(self) -> int:
        return len(self._docs)

    def documents(self) -> Iterator[Document]:
        return iter(self._docs.values())

    def get_document(self, doc_id: str) -> Document:
        try:
            return self._docs[doc_id]
        except KeyError:
            raise UnknownDocumentError(doc_id) from None

    def df_lookup(self, term_or_phrase: str) -> DfLookup:
        """Document frequency of a canonical term or phrase.

        Single stems are exact; 2..max-gram phrases report the slot's
        posting count, which may over-estimate under collisions. Longer
        phrases are unsupported and report df 0 with tier None.
        """
        n_tokens = len(term_or_phrase.split(" ")) if term_or_phrase else 0
        if n_tokens == 1:
            return DfLookup(len(self._unigram.get(term_or_phrase, {})), "unigram")
        if 2 <= n_tokens <= self.config.ngram_max:
            slot = phrase_slot(term_or_phrase, self.config.slot_count)
            return DfLookup(len(self._hashed.get(slot, {})), "hashed")
        return DfLookup(0, None)

    def df(self, term_or_phrase: str) -> int:
        return self.df_lookup(term_or_phrase).df

    def postings(self, term_or_phrase: str) -> Mapping[str, int]:
        """Posting map (doc_id -> tf) for a canonical term or phrase."""
        n_tokens = len(term_or_phrase.split(" ")) if term_or_phrase else 0
        if n_tokens == 1:
            return self._unigram.get(term_or_phrase, {})
        if 2 <= n_tokens <= self.config.ngram_max:
            slot = phrase_slot(term_or_phrase, self.config.slot_count)
            return self._hashed.get(slot, {})
        return {}

    # ------------------------------------------------------------------
    # enrichment

    def enrich(self, doc_id: str, phrase: str) -> str:
        """Register a phrase as one atomic slot posting for a document.

        The phrase is tokenized through the standard pipeline; its full
        stem sequence occupies a single hashed slot with tf=1 and no
        sub-windows are added. Re-registering the same phrase is a
        no-op, as is registering over an existing natural posting.
        Returns the canonical phrase.
        """
        if self._frozen:
            raise FrozenIndexError()
        if doc_id not in self._docs:
            raise UnknownDocumentError(doc_id)
        stems = tokenize(phrase, self.config.stopwords)
        if not stems:
            raise EmptyPhraseError(phrase)
        if len(stems) > self.config.ngram_max:
            raise OversizePhraseError(phrase, len(stems), self.config.ngram_max)
        return self.register_stems(doc_id, stems)

    def register_stems(self, doc_id: str, stems: list[str] | tuple[str, ...]) -> str:
        """Register an already-stemmed window without re-tokenizing.

        Used for sliding-window decomposition of oversize phrases, where
        stems must not pass through the stemmer a second time.
        """
        if self._frozen:
            raise FrozenIndexError()
        if doc_id not in self._docs:
            raise UnknownDocumentError(doc_id)
        if not stems or len(stems) > self.config.ngram_max:
            raise ValueError(f"window must hold 1..{self.config.ngram_max} stems")
        canonical = canonical_phrase(stems)
        slot = phrase_slot(canonical, self.config.slot_count)
        postings = self._hashed.setdefault(slot, {})
        if doc_id not in postings:
            postings[doc_id] = 1
        return canonical

    def enrich_batch(
        self, proposals: Iterable[tuple[str, str]]
    ) -> list[EnrichOutcome]:
        """Element-wise enrich; per-item failures never abort the batch
        and result order matches input order."""
        outcomes = []
        for doc_id, phrase in proposals:
            try:
                canonical = self.enrich(doc_id, phrase)
            except IndexError_ as exc:
                outcomes.append(EnrichOutcome(doc_id, phrase, None, str(exc)))
            else:
                outcomes.append(EnrichOutcome(doc_id, phrase, canonical))
        return outcomes

    # ------------------------------------------------------------------
    # persistence (layout documented in docs/index-format.md)

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<H", _FORMAT_VERSION))
            fh.write(
                struct.pack(
                    "<QIIQd",
                    self.config.slot_count,
                    self.config.ngram_min,
                    self.config.ngram_max,
                    len(self._docs),
                    self.stats.avgdl,
                )
            )
            _write_str_list(fh, sorted(self.config.stopwords))

            ordinals = {doc_id: i for i, doc_id in enumerate(self._docs)}
            for doc in self._docs.values():
                _write_str(fh, doc.doc_id)
                _write_str(fh, doc.title)
                _write_str(fh, doc.text)
                fh.write(struct.pack("<Q", doc.length))

            fh.write(struct.pack("<Q", len(self._unigram)))
            for term in sorted(self._unigram):
                _write_str(fh, term)
                _write_postings(fh, self._unigram[term], ordinals)

            fh.write(struct.pack("<Q", len(self._hashed)))
            for slot in sorted(self._hashed):
                fh.write(struct.pack("<Q", slot))
                _write_postings(fh, self._hashed[slot], ordinals)

    @classmethod
    def load(cls, path) -> "InvertedIndex":
        with open(path, "rb") as fh:
            magic = fh.read(4)
            if magic != _MAGIC:
                raise IndexFormatError(f"not an index file (bad magic {magic!r})")
            (version,) = struct.unpack("<H", _read_exact(fh, 2))
            if version != _FORMAT_VERSION:
                raise IndexFormatError(f"unsupported index format version {version}")
            slot_count, ngram_min, ngram_max, n_docs, _avgdl = struct.unpack(
                "<QIIQd", _read_exact(fh, 32)
            )
            stopwords = frozenset(_read_str_list(fh))
            index = cls(IndexConfig(slot_count, ngram_min, ngram_max, stopwords))

            doc_ids = []
            for _ in range(n_docs):
                doc_id = _read_str(fh)
                title = _read_str(fh)
                text = _read_str(fh)
                (length,) = struct.unpack("<Q", _read_exact(fh, 8))
                if doc_id in index._docs:
                    raise DuplicateDocumentError(doc_id)
                index._docs[doc_id] = Document(doc_id, title, text, length)
                index._total_length += length
                doc_ids.append(doc_id)

            (n_terms,) = struct.unpack("<Q", _read_exact(fh, 8))
            for _ in range(n_terms):
                term = _read_str(fh)
                index._unigram[term] = _read_postings(fh, doc_ids)

            (n_slots,) = struct.unpack("<Q", _read_exact(fh, 8))
            for _ in range(n_slots):
                (slot,) = struct.unpack("<Q", _read_exact(fh, 8))
                index._hashed[slot] = _read_postings(fh, doc_ids)
        return index


def _write_str(fh, s: str) -> None:
    raw = s.encode("utf-8")
    fh.write(struct.pack("<I", len(raw)))
    fh.write(raw)


def _read_exact(fh, n: int) -> bytes:
    raw = fh.read(n)
    if len(raw) != n:
        raise IndexFormatError("truncated index file")
    return raw


def _read_str(fh) -> str:
    (n,) = struct.unpack("<I", _read_exact(fh, 4))
    return _read_exact(fh, n).decode("utf-8")


def _write_str_list(fh, items: list[str]) -> None:
    fh.write(struct.pack("<Q", len(items)))
    for item in items:
        _write_str(fh, item)


def _read_str_list(fh) -> list[str]:
    (n,) = struct.unpack("<Q", _read_exact(fh, 8))
    return [_read_str(fh) for _ in range(n)]


def _write_postings(fh, postings: dict[str, int], ordinals: dict[str, int]) -> None:
    fh.write(struct.pack("<Q", len(postings)))
    for doc_id in sorted(postings, key=ordinals.__getitem__):
        fh.write(struct.pack("<II", ordinals[doc_id], postings[doc_id]))


def _read_postings(fh, doc_ids: list[str]) -> dict[str, int]:
    (n,) = struct.unpack("<Q", _read_exact(fh, 8))
    postings = {}
    for _ in range(n):
        ordinal, tf = struct.unpack("<II", _read_exact(fh, 8))
        try:
            postings[doc_ids[ordinal]] = tf
        except IndexError:
            raise IndexFormatError(f"posting references unknown ordinal {ordinal}")
    return postings


def read_corpus_jsonl(path) -> Iterator[dict]:
    """Stream corpus records from a JSON-lines file.

    Each line must be an object with ``_id`` and ``text``; ``title`` is
    optional. Parse errors carry the line number.
    """
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
            if not isinstance(record, dict) or "_id" not in record:
                raise ValueError(f"{path}:{lineno}: expected an object with an '_id' field")
            yield record
