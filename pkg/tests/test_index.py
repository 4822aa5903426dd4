import io
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpusgen import random_corpus
from lexix.corpus import parse_corpus
from lexix.index import (SNAPSHOT_MAGIC, SnapshotError, build_index,
                         load_snapshot, save_snapshot, sniff_snapshot)


def scan_positions(corpus, key, value):
    """Reference lookup by full scan."""
    hits = []
    for t_ord, text in enumerate(corpus.texts):
        for s_index, sentence in enumerate(text.sentences):
            spans = text.spans_for(s_index)
            for tok in sentence:
                covering = [sp for sp in spans if sp.covers(tok.token_index)]
                if key == "surface":
                    ok = tok.surface == value
                elif key == "lemma":
                    ok = tok.lemma.casefold() == value.casefold()
                elif key == "pos":
                    ok = tok.pos.casefold() == value.casefold()
                elif key == "trait":
                    ok = value.casefold() in {t.casefold() for t in tok.traits}
                elif key == "error":
                    ok = bool(covering)
                elif key == "cat":
                    want = value.casefold().split("-")
                    ok = any(sp.category.casefold().split("-")[:len(want)] == want
                             for sp in covering)
                else:
                    ok = any(sp.corrected_form == value for sp in covering)
                if ok:
                    hits.append((t_ord, s_index, tok.token_index))
    return hits


def test_avoir_postings_match_scan(sample_corpus, sample_index):
    got = [tuple(p) for p in sample_index.lookup("lemma", "avoir")]
    assert got == scan_positions(sample_corpus, "lemma", "avoir")
    ordinal_2212 = next(i for i, t in enumerate(sample_corpus.texts)
                        if t.id == "2212")
    assert (ordinal_2212, 0, 2) in got  # the "a" of "L' imprimeur a reçu"


def test_empty_corpus_has_empty_postings():
    index = build_index(parse_corpus('<corpus name="empty"></corpus>'))
    assert index.lookup("lemma", "avoir") == []
    assert index.lookup("error", "yes") == []


def test_unknown_value_is_empty_not_error(sample_index):
    assert sample_index.lookup("lemma", "zzz-absent") == []
    assert sample_index.lookup("cat", "ZZZ") == []


def test_error_status_count_equals_covered_tokens(sample_corpus, sample_index):
    covered = scan_positions(sample_corpus, "error", "yes")
    got = [tuple(p) for p in sample_index.lookup("error", "yes")]
    assert got == covered


def test_category_prefix_lookup(sample_corpus, sample_index):
    for value in ("GRA", "GRA-PP", "GRA-PP-AGR", "gra-pp-agr"):
        got = [tuple(p) for p in sample_index.lookup("cat", value)]
        assert got == scan_positions(sample_corpus, "cat", value)


def test_lookup_rejects_unknown_kind(sample_index):
    with pytest.raises(ValueError):
        sample_index.lookup("colour", "blue")


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_lookup_equals_scan_random(seed):
    rng = random.Random(seed)
    corpus = random_corpus(rng, max_texts=6)
    index = build_index(corpus)
    probes = [("lemma", "avoir"), ("lemma", "chat"), ("pos", "verbe"),
              ("surface", "avoirs"), ("trait", "participe passé"),
              ("error", "yes"), ("cat", "GRA"), ("cat", "GRA-PP"),
              ("corr", "connu")]
    for key, value in probes:
        got = [tuple(p) for p in index.lookup(key, value)]
        assert got == scan_positions(corpus, key, value), (key, value)


@settings(max_examples=10, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_lookup_equals_scan_at_spec_bounds(seed):
    rng = random.Random(seed)
    corpus = random_corpus(rng, max_texts=50, max_sentences=2, max_tokens=40)
    index = build_index(corpus)
    for key, value in (("lemma", "avoir"), ("pos", "verbe"),
                       ("trait", "participe passé"), ("error", "yes"),
                       ("cat", "GRA-PP"), ("corr", "connu")):
        got = [tuple(p) for p in index.lookup(key, value)]
        assert got == scan_positions(corpus, key, value), (key, value)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_postings_sorted_strictly_increasing(seed):
    corpus = random_corpus(random.Random(seed), max_texts=6)
    index = build_index(corpus)
    for key in ("lemma", "pos", "trait"):
        for value in ("avoir", "verbe", "participe passé"):
            packed = index.lookup_packed(key, value)
            assert packed == sorted(set(packed))


def test_build_is_deterministic(sample_corpus):
    a = build_index(sample_corpus).serialize()
    b = build_index(sample_corpus).serialize()
    assert a == b


def test_snapshot_roundtrip(sample_corpus, sample_index, tmp_path):
    path = str(tmp_path / "sample.lxix")
    save_snapshot(sample_index, path)
    assert sniff_snapshot(path)
    with open(path, "rb") as fh:
        assert fh.read(4) == SNAPSHOT_MAGIC
    loaded = load_snapshot(path)
    assert loaded.corpus == sample_corpus
    for key, value in (("lemma", "avoir"), ("error", "yes"), ("cat", "GRA")):
        assert loaded.lookup(key, value) == sample_index.lookup(key, value)


def test_snapshot_version_check(sample_index):
    data = bytearray(sample_index.serialize())
    data[4:8] = (99).to_bytes(4, "big")
    with pytest.raises(SnapshotError, match="version"):
        load_snapshot(bytes(data))


def test_snapshot_bad_magic():
    with pytest.raises(SnapshotError, match="magic"):
        load_snapshot(b"NOPE" + b"\x00" * 10)


def test_snapshot_corrupt_payload(sample_index):
    data = sample_index.serialize()[:12]
    with pytest.raises(SnapshotError):
        load_snapshot(data)


def test_doc_filter_sets(sample_index, sample_corpus):
    dutch = sample_index.texts_for_filter(frozenset({"dutch"}), None)
    expected = [i for i, t in enumerate(sample_corpus.texts)
                if t.mothertongue == "dutch"]
    assert dutch == expected
    both = sample_index.texts_for_filter(frozenset({"Dutch"}),
                                         frozenset({"b2"}))
    expected = [i for i, t in enumerate(sample_corpus.texts)
                if t.mothertongue == "dutch" and t.level == "B2"]
    assert both == expected
    assert sample_index.texts_for_filter(None, None) == list(
        range(len(sample_corpus.texts)))
