import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpusgen import random_corpus
from lexix.corpus import (Catalog, CorpusParseError, CorpusValidationError,
                          ErrorSpan, LearnerText, MorphoToken, make_corpus,
                          parse_corpus, serialize_corpus, try_parse_corpus,
                          validate_corpus)

MINIMAL = """<corpus name="mini">
  <text id="1" l1="dutch" level="B2">
    <s>
      <tok surface="le" lemma="le" pos="det"/>
      <tok surface="chat" lemma="chat" pos="nom"/>
    </s>
  </text>
</corpus>"""


def test_parse_positions_and_metadata():
    corpus = parse_corpus(MINIMAL)
    assert corpus.name == "mini"
    text = corpus.texts[0]
    assert (text.id, text.mothertongue, text.level) == ("1", "dutch", "B2")
    token = text.sentences[0][1]
    assert (token.sentence_index, token.token_index) == (0, 1)
    assert token.traits == frozenset()


def test_parse_error_span_wraps_token(sample_corpus):
    text = sample_corpus.text_by_id("2212")
    fourth = text.sentences[0][3]
    assert fourth.surface == "reçu"
    assert fourth.lemma == "recevoir"
    assert "participe passé" in fourth.traits
    spans = text.spans_for(0)
    assert len(spans) == 1
    assert spans[0].covers(3)
    assert spans[0].corrected_form == "reçu"
    assert spans[0].category == "GRA-PP-AGR"


def test_parse_empty_corpus():
    corpus = parse_corpus('<corpus name="empty"></corpus>')
    assert corpus.texts == []
    assert corpus.catalog == Catalog(frozenset(), frozenset(), frozenset(),
                                     frozenset(), frozenset())


def test_parse_nested_error_spans(sample_corpus):
    text = sample_corpus.text_by_id("2245")
    spans = text.spans_for(0)
    cats = [s.category for s in spans]
    assert "GRA-NP-AGR" in cats and "GRA-ADJ-AGR" in cats
    outer = next(s for s in spans if s.category == "GRA-NP-AGR")
    inner = next(s for s in spans if s.category == "GRA-ADJ-AGR")
    assert outer.first_token <= inner.first_token
    assert inner.last_token <= outer.last_token


def test_malformed_xml_reports_line():
    bad = '<corpus name="x">\n<text id="1" l1="a" level="b">\n<s><tok</s>'
    with pytest.raises(CorpusParseError) as exc:
        parse_corpus(bad)
    assert exc.value.line == 3


def test_missing_attribute_names_text():
    bad = ('<corpus name="x"><text id="7" l1="dutch" level="B1">'
           '<s><tok surface="a" lemma="avoir"/></s></text></corpus>')
    with pytest.raises(CorpusValidationError) as exc:
        parse_corpus(bad)
    finding = exc.value.findings[0]
    assert finding.text_id == "7"
    assert "pos" in finding.message


def test_duplicate_text_id_rejected():
    bad = ('<corpus name="x">'
           '<text id="2230" l1="dutch" level="B2"><s>'
           '<tok surface="a" lemma="avoir" pos="verbe"/></s></text>'
           '<text id="2230" l1="dutch" level="B2"><s>'
           '<tok surface="a" lemma="avoir" pos="verbe"/></s></text>'
           '</corpus>')
    with pytest.raises(CorpusValidationError) as exc:
        parse_corpus(bad)
    assert any("duplicate" in f.message for f in exc.value.findings)
    _, findings = try_parse_corpus(bad)
    errors = [f for f in findings if f.severity == "error"]
    assert len(errors) == 1


def _token(s, t, surface="mot", lemma="mot", pos="nom"):
    return MorphoToken(surface=surface, lemma=lemma, pos=pos,
                       traits=frozenset(), sentence_index=s, token_index=t)


def test_validate_clean_fixture(sample_corpus):
    assert validate_corpus(sample_corpus) == []


def test_validate_empty_lemma_names_position():
    text = LearnerText(id="9", mothertongue="dutch", level="B2",
                       sentences=[[_token(0, 0), _token(0, 1, lemma="  ")]],
                       errors={})
    findings = validate_corpus(make_corpus("x", [text]))
    assert len(findings) == 1
    assert findings[0].severity == "error"
    assert findings[0].text_id == "9"
    assert findings[0].location == "sentence 0, token 1"


def test_validate_partial_overlap():
    spans = [ErrorSpan("GRA-A", 0, 2), ErrorSpan("GRA-B", 1, 3)]
    text = LearnerText(id="9", mothertongue="dutch", level="B2",
                       sentences=[[_token(0, i) for i in range(4)]],
                       errors={0: spans})
    findings = validate_corpus(make_corpus("x", [text]))
    assert any("overlap" in f.message and f.location == "sentence 0"
               for f in findings)


def test_validate_allows_nesting_and_equal_ranges():
    spans = [ErrorSpan("GRA-A", 0, 2), ErrorSpan("GRA-B", 1, 1),
             ErrorSpan("LEX-C", 1, 1)]
    text = LearnerText(id="9", mothertongue="dutch", level="B2",
                       sentences=[[_token(0, i) for i in range(3)]],
                       errors={0: spans})
    assert validate_corpus(make_corpus("x", [text])) == []


def test_validate_span_outside_sentence():
    text = LearnerText(id="9", mothertongue="dutch", level="B2",
                       sentences=[[_token(0, 0)]],
                       errors={0: [ErrorSpan("GRA-A", 0, 5)]})
    findings = validate_corpus(make_corpus("x", [text]))
    assert any("outside sentence" in f.message for f in findings)


def test_validate_catalog_mismatch():
    corpus = parse_corpus(MINIMAL)
    broken = type(corpus)(name=corpus.name, texts=corpus.texts,
                          catalog=Catalog(frozenset(["xxx"]), frozenset(),
                                          frozenset(), frozenset(), frozenset()))
    assert any("catalog" in f.message for f in validate_corpus(broken))


def test_roundtrip_sample(sample_corpus):
    again = parse_corpus(serialize_corpus(sample_corpus))
    assert again == sample_corpus


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_roundtrip_random(seed):
    corpus = random_corpus(random.Random(seed))
    again = parse_corpus(serialize_corpus(corpus))
    assert again == corpus


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_catalog_soundness_random(seed):
    corpus = random_corpus(random.Random(seed))
    assert corpus.catalog == Catalog.from_texts(corpus.texts)
    observed_pos = {t.pos for text in corpus.texts
                    for sent in text.sentences for t in sent}
    assert observed_pos == set(corpus.catalog.pos_labels)
    observed_cats = {s.category for text in corpus.texts
                     for spans in text.errors.values() for s in spans}
    assert observed_cats == set(corpus.catalog.error_categories)


def test_traits_parsed_as_set():
    xml = ('<corpus name="x"><text id="1" l1="a" level="b"><s>'
           '<tok surface="m" lemma="m" pos="verbe" traits="t1;t2; t1 "/>'
           '</s></text></corpus>')
    corpus = parse_corpus(xml)
    assert corpus.texts[0].sentences[0][0].traits == frozenset({"t1", "t2"})
