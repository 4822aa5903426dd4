"""Query execution and keyword-in-context rendering.

``run_query`` drives a pattern query over an indexed corpus and returns a
page of concordance lines: one row per distinct keyword occurrence, each
with the full sentence split into left context, keyword and right context.
The index is only a candidate pre-filter; every reported line is verified
by the compiled automaton, and ``use_index=False`` runs the same semantics
as a whole-corpus scan (the test oracle mode).
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Corpus
from .index import CorpusIndex, unpack_posting
from .pattern import (Match, PatternQuery, TokenAutomaton, compile_query,
                      match_sentence)


@dataclass(frozen=True, slots=True)
class Occurrence:
    """One distinct keyword hit, carrying its widest-deduped match span."""

    text_ordinal: int
    text_id: str
    sentence_index: int
    keyword_token: int
    match_start: int
    match_end: int


@dataclass(frozen=True, slots=True)
class ConcordanceLine:
    row_number: int
    text_id: str
    left_context: str
    keyword: str
    right_context: str
    sentence_index: int
    token_index: int
    match_start: int
    match_end: int


@dataclass(frozen=True, slots=True)
class ResultPage:
    lines: tuple[ConcordanceLine, ...]
    total_matches: int
    offset: int
    limit: int


def text_id_sort_key(text_id: str) -> tuple:
    """Numeric comparison for all-digit ids, lexicographic otherwise."""
    if text_id.isdigit():
        return (0, int(text_id), "")
    return (1, 0, text_id)


def collect_occurrences(index: CorpusIndex, query: PatternQuery,
                        use_index: bool = True) -> list[Occurrence]:
    """All distinct keyword occurrences of the query, in result order:
    ascending (text id, sentence, keyword position)."""
    corpus = index.corpus
    automaton = compile_query(query)
    if use_index:
        text_ordinals = index.texts_for_filter(query.doc_filters.l1,
                                               query.doc_filters.level)
    else:
        text_ordinals = [i for i, t in enumerate(corpus.texts)
                         if query.doc_filters.admits(t.mothertongue, t.level)]

    anchor = _pick_anchor(index, query) if use_index else None
    occurrences: list[Occurrence] = []
    if anchor is None:
        for t_ord in text_ordinals:
            text = corpus.texts[t_ord]
            for s_index in range(len(text.sentences)):
                occurrences.extend(
                    _match_one(automaton, corpus, t_ord, s_index, None))
    else:
        admitted = set(text_ordinals)
        prefix_min, prefix_max, postings = anchor
        by_sentence: dict[tuple[int, int], list[int]] = {}
        for packed in postings:
            t_ord, s_index, t_index = unpack_posting(packed)
            if t_ord in admitted:
                by_sentence.setdefault((t_ord, s_index), []).append(t_index)
        for (t_ord, s_index), anchors in by_sentence.items():
            starts: set[int] = set()
            for p in anchors:
                lo = 0 if prefix_max is None else max(0, p - prefix_max)
                hi = p - prefix_min
                starts.update(range(lo, hi + 1))
            occurrences.extend(
                _match_one(automaton, corpus, t_ord, s_index, starts))

    occurrences.sort(key=lambda o: (text_id_sort_key(o.text_id),
                                    o.sentence_index, o.keyword_token))
    return occurrences


def _match_one(automaton: TokenAutomaton, corpus: Corpus, t_ord: int,
               s_index: int, starts: set[int] | None) -> list[Occurrence]:
    text = corpus.texts[t_ord]
    sentence = text.sentences[s_index]
    matches = match_sentence(automaton, sentence, text.spans_for(s_index), starts)
    best: dict[int, Match] = {}
    for m in matches:  # leftmost then shortest match represents a keyword hit
        if m.keyword_token not in best:
            best[m.keyword_token] = m
    return [Occurrence(t_ord, text.id, s_index, kw, m.start_token, m.end_token)
            for kw, m in sorted(best.items())]


def _pick_anchor(index: CorpusIndex, query: PatternQuery):
    """Most selective indexable constraint from a mandatory slot, with the
    token-count bounds of the slots preceding it (restricts match starts)."""
    best = None
    prefix_min = 0
    prefix_max: int | None = 0
    for slot in query.slots:
        if slot.quantifier.min >= 1:
            for constraint in slot.constraints:
                if constraint.op != "eq":
                    continue
                if constraint.key == "error" and constraint.value.casefold() != "yes":
                    continue
                postings = index.lookup_packed(constraint.key, constraint.value)
                if best is None or len(postings) < len(best[2]):
                    best = (prefix_min, prefix_max, postings)
        prefix_min += slot.quantifier.min
        if prefix_max is not None:
            prefix_max = (None if slot.quantifier.max is None
                          else prefix_max + slot.quantifier.max)
    return best


def run_query(index: CorpusIndex, query: PatternQuery, offset: int = 0,
              limit: int = 50, use_index: bool = True,
              window: int | None = None) -> ResultPage:
    """Execute a query and return one page of concordance lines.

    ``total_matches`` counts every distinct keyword occurrence regardless
    of pagination. ``window`` caps the number of context tokens rendered
    on each side (default: the full sentence).
    """
    if limit < 1:
        raise ValueError("limit must be at least 1")
    if offset < 0:
        raise ValueError("offset must not be negative")
    occurrences = collect_occurrences(index, query, use_index=use_index)
    lines = tuple(
        render_line(index.corpus, occ, offset + i + 1, window=window)
        for i, occ in enumerate(occurrences[offset:offset + limit]))
    return ResultPage(lines=lines, total_matches=len(occurrences),
                      offset=offset, limit=limit)


def render_line(corpus: Corpus, occ: Occurrence, row_number: int,
                window: int | None = None) -> ConcordanceLine:
    """Render one occurrence as a KWIC row.

    Contexts are single-space joins of the surrounding tokens (no clitic
    reattachment), so left + keyword + right rebuilds the sentence.
    """
    sentence = corpus.texts[occ.text_ordinal].sentences[occ.sentence_index]
    kw = occ.keyword_token
    left = sentence[:kw]
    right = sentence[kw + 1:]
    if window is not None:
        left = left[len(left) - window:] if window else []
        right = right[:window]
    return ConcordanceLine(
        row_number=row_number,
        text_id=occ.text_id,
        left_context=" ".join(t.surface for t in left),
        keyword=sentence[kw].surface,
        right_context=" ".join(t.surface for t in right),
        sentence_index=occ.sentence_index,
        token_index=kw,
        match_start=occ.match_start,
        match_end=occ.match_end)


def format_text_table(page: ResultPage) -> str:
    """Aligned plain-text export: No | Texte | left | KEYWORD | right."""
    headers = ("No", "Texte", "Contexte gauche", "Mot", "Contexte droit")
    rows = [(str(l.row_number), l.text_id, l.left_context, l.keyword,
             l.right_context) for l in page.lines]
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
              for i, h in enumerate(headers)]
    out = []
    for row in [headers, *rows]:
        cells = [row[0].rjust(widths[0]), row[1].ljust(widths[1]),
                 row[2].rjust(widths[2]), row[3].ljust(widths[3]),
                 row[4].ljust(widths[4])]
        out.append(" | ".join(cells).rstrip())
    return "\n".join(out)
