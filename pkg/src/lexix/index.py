"""Positional inverted indexes over a corpus.

The index maps every queryable token property to a sorted posting list of
(text ordinal, sentence index, token index) positions, and keeps per-value
text sets for the document-level filters (mother tongue, level). It is a
pure pre-filter: query semantics are always re-checked by the pattern
automaton. Indexes are immutable after build and safe for concurrent
reads.

Postings are packed into single integers (21 bits per field) to keep
desk-scale corpora comfortably in memory.
"""

from __future__ import annotations

import json
import struct
import zlib
from typing import BinaryIO, NamedTuple

from .corpus import Corpus, ErrorSpan, LearnerText, MorphoToken, make_corpus

SNAPSHOT_MAGIC = b"LXIX"
SNAPSHOT_VERSION = 1

_FIELD_BITS = 21
_FIELD_MAX = (1 << _FIELD_BITS) - 1

#: Constraint kinds the index can answer directly.
INDEXED_KEYS = ("surface", "lemma", "pos", "trait", "error", "cat", "corr")


class Posting(NamedTuple):
    text_ordinal: int
    sentence_index: int
    token_index: int


def pack_posting(text_ordinal: int, sentence_index: int, token_index: int) -> int:
    return (text_ordinal << (2 * _FIELD_BITS)) | (sentence_index << _FIELD_BITS) | token_index


def unpack_posting(packed: int) -> Posting:
    return Posting(packed >> (2 * _FIELD_BITS),
                   (packed >> _FIELD_BITS) & _FIELD_MAX,
                   packed & _FIELD_MAX)


class SnapshotError(Exception):
    """Unreadable or version-incompatible snapshot file."""


class CorpusIndex:
    """Inverted index plus document-filter sets for one corpus.

    ``lookup`` answers (key, value) probes with sorted posting lists;
    unknown values yield an empty list. Surface and corrected forms are
    matched exactly; lemma, pos, trait and category values are
    case-insensitive, as are the l1/level document filters. Category
    posting lists exist for every segment prefix, so ``GRA`` retrieves
    all positions covered by any ``GRA-*`` span.
    """

    def __init__(self, corpus: Corpus,
                 postings: dict[str, dict[str, list[int]]],
                 error_postings: list[int],
                 texts_by_l1: dict[str, frozenset[int]],
                 texts_by_level: dict[str, frozenset[int]]):
        self.corpus = corpus
        self._postings = postings
        self._error = error_postings
        self._by_l1 = texts_by_l1
        self._by_level = texts_by_level

    # -- queries -----------------------------------------------------------

    def lookup(self, key: str, value: str) -> list[Posting]:
        return [unpack_posting(p) for p in self.lookup_packed(key, value)]

    def lookup_packed(self, key: str, value: str) -> list[int]:
        if key == "error":
            if value.casefold() == "yes":
                return self._error
            if value.casefold() == "no":
                # The complement is not stored; callers fall back to scans.
                covered = set(self._error)
                return [p for p in self._iter_all_packed() if p not in covered]
            raise ValueError(f"error status must be 'yes' or 'no', got {value!r}")
        if key in ("surface", "corr"):
            return self._postings[key].get(value, [])
        if key in ("lemma", "pos", "trait", "cat"):
            return self._postings[key].get(value.casefold(), [])
        raise ValueError(f"not an indexed key: {key!r}")

    def texts_for_filter(self, l1: frozenset[str] | None,
                         level: frozenset[str] | None) -> list[int]:
        """Ordinals of texts passing the document filters, ascending."""
        selected: set[int] | None = None
        if l1 is not None:
            selected = set()
            for tag in l1:
                selected |= self._by_l1.get(tag.casefold(), frozenset())
        if level is not None:
            by_level: set[int] = set()
            for tag in level:
                by_level |= self._by_level.get(tag.casefold(), frozenset())
            selected = by_level if selected is None else selected & by_level
        if selected is None:
            return list(range(len(self.corpus.texts)))
        return sorted(selected)

    def _iter_all_packed(self):
        for t_ord, text in enumerate(self.corpus.texts):
            for s_index, sentence in enumerate(text.sentences):
                for tok in sentence:
                    yield pack_posting(t_ord, s_index, tok.token_index)

    # -- serialization -----------------------------------------------------

    def serialize(self) -> bytes:
        """Deterministic snapshot bytes (two builds of one corpus agree)."""
        payload = {
            "corpus": _corpus_to_plain(self.corpus),
            "postings": self._postings,
            "error": self._error,
            "l1": {k: sorted(v) for k, v in self._by_l1.items()},
            "level": {k: sorted(v) for k, v in self._by_level.items()},
        }
        body = json.dumps(payload, ensure_ascii=False, sort_keys=True,
                          separators=(",", ":")).encode("utf-8")
        return (SNAPSHOT_MAGIC + struct.pack(">I", SNAPSHOT_VERSION)
                + zlib.compress(body, 6))


def build_index(corpus: Corpus) -> CorpusIndex:
    """Index every token of the corpus. Deterministic for a given corpus."""
    postings: dict[str, dict[str, list[int]]] = {
        k: {} for k in ("surface", "lemma", "pos", "trait", "cat", "corr")}
    error_postings: list[int] = []
    by_l1: dict[str, set[int]] = {}
    by_level: dict[str, set[int]] = {}

    def add(kind: str, value: str, packed: int) -> None:
        plist = postings[kind].setdefault(value, [])
        if not plist or plist[-1] != packed:
            plist.append(packed)

    for t_ord, text in enumerate(corpus.texts):
        by_l1.setdefault(text.mothertongue.casefold(), set()).add(t_ord)
        by_level.setdefault(text.level.casefold(), set()).add(t_ord)
        if t_ord > _FIELD_MAX:
            raise ValueError("corpus exceeds the indexable number of texts")
        for s_index, sentence in enumerate(text.sentences):
            if s_index > _FIELD_MAX or len(sentence) - 1 > _FIELD_MAX:
                raise ValueError("sentence coordinates exceed the indexable range")
            spans = text.spans_for(s_index)
            for tok in sentence:
                packed = pack_posting(t_ord, s_index, tok.token_index)
                add("surface", tok.surface, packed)
                add("lemma", tok.lemma.casefold(), packed)
                add("pos", tok.pos.casefold(), packed)
                for trait in tok.traits:
                    add("trait", trait.casefold(), packed)
                covering = [sp for sp in spans if sp.covers(tok.token_index)]
                if covering:
                    if not error_postings or error_postings[-1] != packed:
                        error_postings.append(packed)
                    for span in covering:
                        segments = span.segments
                        for depth in range(1, len(segments) + 1):
                            add("cat", "-".join(segments[:depth]).casefold(), packed)
                        if span.corrected_form:
                            add("corr", span.corrected_form, packed)

    # Trait sets iterate in hash order; restore sorted key order so that
    # serialized snapshots do not depend on the hash seed.
    for kind in postings:
        postings[kind] = dict(sorted(postings[kind].items()))
    return CorpusIndex(
        corpus, postings, error_postings,
        {k: frozenset(v) for k, v in sorted(by_l1.items())},
        {k: frozenset(v) for k, v in sorted(by_level.items())})


# --- snapshot files --------------------------------------------------------

def save_snapshot(index: CorpusIndex, target: str | BinaryIO) -> None:
    data = index.serialize()
    if isinstance(target, str):
        with open(target, "wb") as fh:
            fh.write(data)
    else:
        target.write(data)


def load_snapshot(source: str | bytes | BinaryIO) -> CorpusIndex:
    if isinstance(source, str):
        with open(source, "rb") as fh:
            data = fh.read()
    elif isinstance(source, bytes):
        data = source
    else:
        data = source.read()
    if len(data) < 8 or data[:4] != SNAPSHOT_MAGIC:
        raise SnapshotError("not an index snapshot (bad magic bytes)")
    version = struct.unpack(">I", data[4:8])[0]
    if version != SNAPSHOT_VERSION:
        raise SnapshotError(
            f"snapshot format version {version} is not supported "
            f"(expected {SNAPSHOT_VERSION})")
    try:
        payload = json.loads(zlib.decompress(data[8:]).decode("utf-8"))
    except (zlib.error, ValueError) as exc:
        raise SnapshotError(f"corrupt snapshot payload: {exc}") from exc
    corpus = _corpus_from_plain(payload["corpus"])
    return CorpusIndex(
        corpus,
        payload["postings"],
        payload["error"],
        {k: frozenset(v) for k, v in payload["l1"].items()},
        {k: frozenset(v) for k, v in payload["level"].items()})


def sniff_snapshot(path: str) -> bool:
    """True if the file starts with the snapshot magic bytes."""
    try:
        with open(path, "rb") as fh:
            return fh.read(4) == SNAPSHOT_MAGIC
    except OSError:
        return False


def _corpus_to_plain(corpus: Corpus) -> dict:
    return {
        "name": corpus.name,
        "texts": [{
            "id": text.id,
            "l1": text.mothertongue,
            "level": text.level,
            "sentences": [
                [[t.surface, t.lemma, t.pos, sorted(t.traits)] for t in sentence]
                for sentence in text.sentences],
            "errors": {
                str(s): [[sp.category, sp.first_token, sp.last_token, sp.corrected_form]
                         for sp in spans]
                for s, spans in sorted(text.errors.items())},
        } for text in corpus.texts],
    }


def _corpus_from_plain(plain: dict) -> Corpus:
    texts = []
    for t in plain["texts"]:
        sentences = [
            [MorphoToken(surface=tok[0], lemma=tok[1], pos=tok[2],
                         traits=frozenset(tok[3]), sentence_index=s, token_index=i)
             for i, tok in enumerate(sentence)]
            for s, sentence in enumerate(t["sentences"])]
        errors = {
            int(s): [ErrorSpan(category=sp[0], first_token=sp[1],
                               last_token=sp[2], corrected_form=sp[3])
                     for sp in spans]
            for s, spans in t["errors"].items()}
        texts.append(LearnerText(id=t["id"], mothertongue=t["l1"], level=t["level"],
                                 sentences=sentences, errors=errors))
    return make_corpus(plain["name"], texts)
