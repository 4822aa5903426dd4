"""Domain model for error-annotated, morphosyntactically tagged learner corpora.

A corpus is a list of learner texts; each text carries its author's mother
tongue and proficiency level and holds sentences of annotated tokens plus
error spans. Corpora are read from a dedicated XML format::

    <corpus name="...">
      <text id="2180" l1="dutch" level="B2">
        <s>
          <tok surface="..." lemma="..." pos="..." traits="t1;t2"/>
          <err cat="GRA-PP-AGR" corr="connu"> <tok .../> ... </err>
        </s>
      </text>
    </corpus>

``traits`` and ``corr`` are optional; ``<err>`` wraps one or more ``<tok>``
elements and may nest. Corpus values are immutable after construction and
safe to share between threads.
"""

from __future__ import annotations

import io
import xml.etree.ElementTree as ET
from dataclasses import dataclass


class CorpusError(Exception):
    """Base class for corpus ingestion failures."""


class CorpusParseError(CorpusError):
    """Malformed XML. ``line`` is the 1-based line of the underlying error."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class CorpusValidationError(CorpusError):
    """Structurally valid XML that violates the corpus schema.

    Carries the findings that caused the rejection.
    """

    def __init__(self, findings: list["ValidationFinding"]):
        super().__init__("; ".join(str(f) for f in findings[:5]))
        self.findings = findings


@dataclass(frozen=True, slots=True)
class MorphoToken:
    """One annotated token. ``traits`` holds extra morphosyntactic features."""

    surface: str
    lemma: str
    pos: str
    traits: frozenset[str]
    sentence_index: int
    token_index: int


@dataclass(frozen=True, slots=True)
class ErrorSpan:
    """An annotated error over ``[first_token, last_token]`` of one sentence.

    ``category`` is a hierarchical code whose segments are joined by "-"
    (e.g. ``GRA-PP-AGR``); queries match categories by segment prefix.
    ``corrected_form`` may be empty when no target form is annotated.
    """

    category: str
    first_token: int
    last_token: int
    corrected_form: str = ""

    def covers(self, token_index: int) -> bool:
        return self.first_token <= token_index <= self.last_token

    @property
    def segments(self) -> tuple[str, ...]:
        return tuple(self.category.split("-"))


@dataclass(slots=True)
class LearnerText:
    """A learner production with metadata and error-annotated sentences.

    ``errors`` maps a sentence index to the spans annotated in that
    sentence, in document order (outer spans before the spans they nest).
    """

    id: str
    mothertongue: str
    level: str
    sentences: list[list[MorphoToken]]
    errors: dict[int, list[ErrorSpan]]

    def spans_for(self, sentence_index: int) -> list[ErrorSpan]:
        return self.errors.get(sentence_index, [])

    def token_count(self) -> int:
        return sum(len(s) for s in self.sentences)


@dataclass(frozen=True, slots=True)
class Catalog:
    """The distinct queryable values observed in a corpus."""

    pos_labels: frozenset[str]
    trait_labels: frozenset[str]
    error_categories: frozenset[str]
    l1_tags: frozenset[str]
    level_tags: frozenset[str]

    @classmethod
    def from_texts(cls, texts: list[LearnerText]) -> "Catalog":
        pos: set[str] = set()
        traits: set[str] = set()
        cats: set[str] = set()
        l1s: set[str] = set()
        levels: set[str] = set()
        for text in texts:
            l1s.add(text.mothertongue)
            levels.add(text.level)
            for sentence in text.sentences:
                for tok in sentence:
                    pos.add(tok.pos)
                    traits.update(tok.traits)
            for spans in text.errors.values():
                for span in spans:
                    cats.add(span.category)
        return cls(frozenset(pos), frozenset(traits), frozenset(cats),
                   frozenset(l1s), frozenset(levels))


@dataclass(slots=True)
class Corpus:
    name: str
    texts: list[LearnerText]
    catalog: Catalog

    def token_count(self) -> int:
        return sum(t.token_count() for t in self.texts)

    def text_by_id(self, text_id: str) -> LearnerText | None:
        for text in self.texts:
            if text.id == text_id:
                return text
        return None


@dataclass(frozen=True, slots=True)
class ValidationFinding:
    """One invariant violation. ``severity`` is "error" or "warning"."""

    severity: str
    text_id: str
    location: str
    message: str

    def __str__(self) -> str:
        where = f"text {self.text_id}" if self.text_id else "corpus"
        if self.location:
            where += f", {self.location}"
        return f"[{self.severity}] {where}: {self.message}"


def make_corpus(name: str, texts: list[LearnerText]) -> Corpus:
    """Assemble a Corpus, computing its catalog from the texts."""
    return Corpus(name=name, texts=texts, catalog=Catalog.from_texts(texts))


# --- XML ingestion ---------------------------------------------------------

def _split_traits(raw: str) -> frozenset[str]:
    return frozenset(t.strip() for t in raw.split(";") if t.strip())


def parse_corpus(source: bytes | str | io.IOBase) -> Corpus:
    """Parse the XML corpus format and return a validated Corpus.

    Token positions are assigned in document order. Raises
    ``CorpusParseError`` for malformed XML (with the offending line) and
    ``CorpusValidationError`` for schema violations such as a missing
    attribute or a duplicate text id.
    """
    corpus, findings = try_parse_corpus(source)
    errors = [f for f in findings if f.severity == "error"]
    if errors:
        raise CorpusValidationError(errors)
    assert corpus is not None
    return corpus


def try_parse_corpus(source: bytes | str | io.IOBase
                     ) -> tuple[Corpus | None, list[ValidationFinding]]:
    """Like ``parse_corpus`` but reports schema findings instead of raising
    (malformed XML still raises, there is nothing to report on)."""
    if isinstance(source, str):
        source = source.encode("utf-8")
    if isinstance(source, bytes):
        source = io.BytesIO(source)
    try:
        root = ET.parse(source).getroot()
    except ET.ParseError as exc:
        line = exc.position[0] if exc.position else None
        raise CorpusParseError(str(exc), line) from exc

    findings: list[ValidationFinding] = []
    if root.tag != "corpus":
        return None, [ValidationFinding(
            "error", "", "", f"root element must be <corpus>, got <{root.tag}>")]
    name = root.get("name", "")

    texts: list[LearnerText] = []
    for text_el in root:
        if text_el.tag != "text":
            findings.append(ValidationFinding(
                "error", "", "", f"unexpected element <{text_el.tag}> under <corpus>"))
            continue
        text_id = text_el.get("id")
        if text_id is None:
            findings.append(ValidationFinding(
                "error", "", "", "<text> missing required attribute 'id'"))
            continue
        l1 = text_el.get("l1")
        level = text_el.get("level")
        if l1 is None:
            findings.append(ValidationFinding(
                "error", text_id, "", "<text> missing required attribute 'l1'"))
        if level is None:
            findings.append(ValidationFinding(
                "error", text_id, "", "<text> missing required attribute 'level'"))
        sentences: list[list[MorphoToken]] = []
        errors: dict[int, list[ErrorSpan]] = {}
        for s_el in text_el:
            if s_el.tag != "s":
                findings.append(ValidationFinding(
                    "error", text_id, "", f"unexpected element <{s_el.tag}> under <text>"))
                continue
            s_index = len(sentences)
            tokens: list[MorphoToken] = []
            spans: list[ErrorSpan] = []
            _parse_sentence_body(s_el, text_id, s_index, tokens, spans, findings)
            sentences.append(tokens)
            if spans:
                errors[s_index] = spans
        texts.append(LearnerText(
            id=text_id, mothertongue=l1 or "", level=level or "",
            sentences=sentences, errors=errors))

    corpus = make_corpus(name, texts)
    findings.extend(validate_corpus(corpus))
    return corpus, findings


def _parse_sentence_body(element: ET.Element, text_id: str, s_index: int,
                         tokens: list[MorphoToken], spans: list[ErrorSpan],
                         findings: list[ValidationFinding]) -> None:
    """Walk a <s> (or nested <err>) element, appending tokens and spans."""
    for child in element:
        if child.tag == "tok":
            loc = f"sentence {s_index}, token {len(tokens)}"
            attrs = {}
            for attr in ("surface", "lemma", "pos"):
                value = child.get(attr)
                if value is None:
                    findings.append(ValidationFinding(
                        "error", text_id, loc,
                        f"<tok> missing required attribute '{attr}'"))
                    value = ""
                attrs[attr] = value.strip()
            tokens.append(MorphoToken(
                surface=attrs["surface"], lemma=attrs["lemma"], pos=attrs["pos"],
                traits=_split_traits(child.get("traits", "")),
                sentence_index=s_index, token_index=len(tokens)))
        elif child.tag == "err":
            first = len(tokens)
            category = child.get("cat")
            if category is None:
                findings.append(ValidationFinding(
                    "error", text_id, f"sentence {s_index}",
                    "<err> missing required attribute 'cat'"))
                category = ""
            # Reserve the span slot now so outer spans precede nested ones.
            placeholder = len(spans)
            spans.append(None)  # type: ignore[arg-type]
            _parse_sentence_body(child, text_id, s_index, tokens, spans, findings)
            last = len(tokens) - 1
            if last < first:
                findings.append(ValidationFinding(
                    "error", text_id, f"sentence {s_index}",
                    "<err> contains no tokens"))
                spans.pop(placeholder)
                continue
            spans[placeholder] = ErrorSpan(
                category=category, first_token=first, last_token=last,
                corrected_form=child.get("corr", ""))
        else:
            findings.append(ValidationFinding(
                "error", text_id, f"sentence {s_index}",
                f"unexpected element <{child.tag}> under <{element.tag}>"))


# --- validation ------------------------------------------------------------

def validate_corpus(corpus: Corpus) -> list[ValidationFinding]:
    """Check every corpus invariant by exhaustive scan.

    Returns an empty list iff all invariants hold. Works on any Corpus
    value, including ones built programmatically.
    """
    findings: list[ValidationFinding] = []
    seen_ids: set[str] = set()
    for text in corpus.texts:
        if text.id in seen_ids:
            findings.append(ValidationFinding(
                "error", text.id, "", f"duplicate text id {text.id!r}"))
        seen_ids.add(text.id)
        if not text.id.strip():
            findings.append(ValidationFinding(
                "error", text.id, "", "text id is empty"))
        if not text.sentences:
            findings.append(ValidationFinding(
                "warning", text.id, "", "text has no sentences"))
        for s_index, sentence in enumerate(text.sentences):
            if not sentence:
                findings.append(ValidationFinding(
                    "warning", text.id, f"sentence {s_index}", "sentence is empty"))
            for t_index, tok in enumerate(sentence):
                loc = f"sentence {s_index}, token {t_index}"
                if not tok.surface.strip():
                    findings.append(ValidationFinding(
                        "error", text.id, loc, "token surface is empty"))
                if not tok.lemma.strip():
                    findings.append(ValidationFinding(
                        "error", text.id, loc, "token lemma is empty"))
                if (tok.sentence_index, tok.token_index) != (s_index, t_index):
                    findings.append(ValidationFinding(
                        "error", text.id, loc,
                        f"token position ({tok.sentence_index}, {tok.token_index}) "
                        f"does not match its slot ({s_index}, {t_index})"))
        for s_index, spans in sorted(text.errors.items()):
            loc = f"sentence {s_index}"
            if s_index < 0 or s_index >= len(text.sentences):
                findings.append(ValidationFinding(
                    "error", text.id, loc, "error span references a missing sentence"))
                continue
            n_tokens = len(text.sentences[s_index])
            for span in spans:
                findings.extend(_check_span(span, text.id, loc, n_tokens))
            for i, a in enumerate(spans):
                for b in spans[i + 1:]:
                    if _partially_overlap(a, b):
                        findings.append(ValidationFinding(
                            "error", text.id, loc,
                            f"spans {a.category} [{a.first_token},{a.last_token}] and "
                            f"{b.category} [{b.first_token},{b.last_token}] partially overlap"))
    findings.extend(_check_catalog(corpus))
    return findings


def _check_span(span: ErrorSpan, text_id: str, loc: str,
                n_tokens: int) -> list[ValidationFinding]:
    findings = []
    if span.first_token > span.last_token:
        findings.append(ValidationFinding(
            "error", text_id, loc,
            f"span {span.category} has first_token > last_token"))
    if span.first_token < 0 or span.last_token >= n_tokens:
        findings.append(ValidationFinding(
            "error", text_id, loc,
            f"span {span.category} [{span.first_token},{span.last_token}] "
            f"outside sentence of {n_tokens} tokens"))
    if not span.category or any(not seg for seg in span.category.split("-")):
        findings.append(ValidationFinding(
            "error", text_id, loc,
            f"span category {span.category!r} has an empty segment"))
    return findings


def _partially_overlap(a: ErrorSpan, b: ErrorSpan) -> bool:
    # Spans must nest (containment, equality included: XML double annotation
    # of one range is legal) or be disjoint; anything else is invalid.
    if a.last_token < b.first_token or b.last_token < a.first_token:
        return False
    a_in_b = b.first_token <= a.first_token and a.last_token <= b.last_token
    b_in_a = a.first_token <= b.first_token and b.last_token <= a.last_token
    return not (a_in_b or b_in_a)


def _check_catalog(corpus: Corpus) -> list[ValidationFinding]:
    expected = Catalog.from_texts(corpus.texts)
    if expected == corpus.catalog:
        return []
    return [ValidationFinding(
        "error", "", "", "catalog does not match the values observed in texts")]


# --- serialization ---------------------------------------------------------

def serialize_corpus(corpus: Corpus) -> bytes:
    """Emit the corpus back to its XML format (UTF-8).

    Parsing the result yields a structurally equal Corpus.
    """
    root = ET.Element("corpus", {"name": corpus.name})
    for text in corpus.texts:
        text_el = ET.SubElement(root, "text", {
            "id": text.id, "l1": text.mothertongue, "level": text.level})
        for s_index, sentence in enumerate(text.sentences):
            s_el = ET.SubElement(text_el, "s")
            _emit_sentence(s_el, sentence, text.spans_for(s_index))
    buf = io.BytesIO()
    ET.ElementTree(root).write(buf, encoding="utf-8", xml_declaration=True)
    return buf.getvalue()


def _emit_sentence(s_el: ET.Element, sentence: list[MorphoToken],
                   spans: list[ErrorSpan]) -> None:
    # Rebuild the nesting forest: outer spans first, document order preserved
    # for equal ranges.
    ordered = sorted(range(len(spans)),
                     key=lambda i: (spans[i].first_token, -spans[i].last_token, i))

    def emit(parent: ET.Element, start: int, end: int, span_ids: list[int]) -> None:
        pos = start
        remaining = list(span_ids)
        while pos <= end:
            child_id = None
            for sid in remaining:
                if spans[sid].first_token == pos:
                    child_id = sid
                    break
            if child_id is not None:
                span = spans[child_id]
                attrs = {"cat": span.category}
                if span.corrected_form:
                    attrs["corr"] = span.corrected_form
                err_el = ET.SubElement(parent, "err", attrs)
                remaining.remove(child_id)
                inner = [sid for sid in remaining
                         if spans[sid].first_token >= span.first_token
                         and spans[sid].last_token <= span.last_token]
                for sid in inner:
                    remaining.remove(sid)
                emit(err_el, span.first_token, span.last_token, inner)
                pos = span.last_token + 1
            else:
                tok = sentence[pos]
                attrs = {"surface": tok.surface, "lemma": tok.lemma, "pos": tok.pos}
                if tok.traits:
                    attrs["traits"] = ";".join(sorted(tok.traits))
                ET.SubElement(parent, "tok", attrs)
                pos += 1

    if sentence:
        emit(s_el, 0, len(sentence) - 1, ordered)
