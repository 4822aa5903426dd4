"""Gap-fill exercise generation from query matches.

Items are sampled on the fly from the keyword occurrences of a pattern
query, so every run against a living corpus can present fresh sentences.
Sampling is uniform without replacement over occurrences and driven by a
seeded Mersenne Twister (partial Fisher-Yates draw), which makes a
generated set a pure, reproducible function of
(corpus, query, seed, parameters).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .concordance import collect_occurrences
from .corpus import Corpus, LearnerText, MorphoToken
from .index import CorpusIndex
from .pattern import PatternQuery, spans_covering

GENERATOR_NAME = "mt19937"
BLANK = "____"

ANSWER_MODES = ("as-written", "corrected")
DISTRACTOR_POLICIES = ("none", "same-lemma", "attested-errors")


@dataclass(frozen=True, slots=True)
class GapFillItem:
    """One cloze item. ``source`` is (text id, sentence index, token index)
    of the blanked keyword occurrence."""

    stem: str
    answer: str
    distractors: tuple[str, ...]
    source: tuple[str, int, int]
    answer_mode: str


@dataclass(frozen=True, slots=True)
class ExerciseSet:
    items: tuple[GapFillItem, ...]
    seed: int
    query: PatternQuery
    answer_mode: str
    distractor_policy: str
    distractor_count: int
    generator: str = GENERATOR_NAME
    no_examples: bool = False


def generate_items(index: CorpusIndex, query: PatternQuery, count: int,
                   seed: int, answer_mode: str = "as-written",
                   distractor_policy: str = "none",
                   distractor_count: int = 3) -> ExerciseSet:
    """Sample min(count, matches) distinct keyword occurrences and turn each
    into a gap-fill item.

    With ``answer_mode="corrected"`` the expected answer is the covering
    span's corrected form when one is annotated (the learner's original
    error then makes a natural distractor); otherwise the keyword surface
    as written. Zero matches yield an empty set flagged ``no_examples``.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    if answer_mode not in ANSWER_MODES:
        raise ValueError(f"unknown answer mode {answer_mode!r}")
    if distractor_policy not in DISTRACTOR_POLICIES:
        raise ValueError(f"unknown distractor policy {distractor_policy!r}")
    occurrences = collect_occurrences(index, query)
    if not occurrences:
        return ExerciseSet(items=(), seed=seed, query=query,
                           answer_mode=answer_mode,
                           distractor_policy=distractor_policy,
                           distractor_count=distractor_count,
                           no_examples=True)
    rng = random.Random(seed)
    chosen = _draw(list(range(len(occurrences))), min(count, len(occurrences)), rng)
    corpus = index.corpus
    items = []
    for occ_index in chosen:
        occ = occurrences[occ_index]
        text = corpus.texts[occ.text_ordinal]
        item = make_item(text, occ.sentence_index, occ.keyword_token, answer_mode)
        if distractor_policy != "none" and distractor_count > 0:
            distractors = _draw_distractors(corpus, item, distractor_policy,
                                            distractor_count, rng)
            item = GapFillItem(item.stem, item.answer, tuple(distractors),
                               item.source, item.answer_mode)
        items.append(item)
    return ExerciseSet(items=tuple(items), seed=seed, query=query,
                       answer_mode=answer_mode,
                       distractor_policy=distractor_policy,
                       distractor_count=distractor_count)


def make_item(text: LearnerText, sentence_index: int, token_index: int,
              answer_mode: str) -> GapFillItem:
    """Blank one token of a sentence. Single-token blanking only."""
    sentence = text.sentences[sentence_index]
    token = sentence[token_index]
    answer = token.surface
    if answer_mode == "corrected":
        # Innermost covering span with an annotated target form wins.
        covering = spans_covering(sentence, text.spans_for(sentence_index))[token_index]
        for span in covering:
            if span.corrected_form:
                answer = span.corrected_form
                break
    stem = " ".join(BLANK if t.token_index == token_index else t.surface
                    for t in sentence)
    return GapFillItem(stem=stem, answer=answer, distractors=(),
                       source=(text.id, sentence_index, token_index),
                       answer_mode=answer_mode)


def build_distractors(corpus: Corpus, item: GapFillItem, policy: str,
                      k: int, seed: int = 0) -> list[str]:
    """Up to k distinct wrong options for an item; never the answer itself.

    ``same-lemma`` draws other surface forms of the blanked token's lemma
    found elsewhere in the corpus; ``attested-errors`` draws erroneous
    forms whose annotated correction equals the answer.
    """
    if k < 0:
        raise ValueError("k must not be negative")
    if policy not in DISTRACTOR_POLICIES:
        raise ValueError(f"unknown distractor policy {policy!r}")
    return _draw_distractors(corpus, item, policy, k, random.Random(seed))


def _draw_distractors(corpus: Corpus, item: GapFillItem, policy: str,
                      k: int, rng: random.Random) -> list[str]:
    if policy == "none" or k == 0:
        return []
    if policy == "same-lemma":
        candidates = _same_lemma_forms(corpus, item)
    else:
        candidates = _attested_error_forms(corpus, item.answer)
    candidates.discard(item.answer)
    ordered = sorted(candidates)
    return _draw(ordered, min(k, len(ordered)), rng)


def _same_lemma_forms(corpus: Corpus, item: GapFillItem) -> set[str]:
    source_token = _resolve_source(corpus, item)
    if source_token is None:
        return set()
    wanted = source_token.lemma.casefold()
    forms: set[str] = set()
    for text in corpus.texts:
        for s_index, sentence in enumerate(text.sentences):
            for tok in sentence:
                if (text.id, s_index, tok.token_index) == item.source:
                    continue
                if tok.lemma.casefold() == wanted:
                    forms.add(tok.surface)
    return forms


def _attested_error_forms(corpus: Corpus, answer: str) -> set[str]:
    forms: set[str] = set()
    for text in corpus.texts:
        for s_index, spans in text.errors.items():
            sentence = text.sentences[s_index]
            for span in spans:
                if span.corrected_form != answer:
                    continue
                written = " ".join(
                    t.surface for t in sentence[span.first_token:span.last_token + 1])
                if written != answer:
                    forms.add(written)
    return forms


def _resolve_source(corpus: Corpus, item: GapFillItem) -> MorphoToken | None:
    text_id, s_index, t_index = item.source
    text = corpus.text_by_id(text_id)
    if text is None or s_index >= len(text.sentences):
        return None
    sentence = text.sentences[s_index]
    return sentence[t_index] if t_index < len(sentence) else None


def same_lemma_remedial(corpus: Corpus, item: GapFillItem) -> GapFillItem:
    """A remedial item drilling the same lemma in a different sentence.

    Falls back to the failed item itself when the corpus offers no other
    occurrence. Deterministic: picks the first occurrence in corpus order.
    """
    source_token = _resolve_source(corpus, item)
    if source_token is not None:
        wanted = source_token.lemma.casefold()
        for text in corpus.texts:
            for s_index, sentence in enumerate(text.sentences):
                for tok in sentence:
                    if (text.id, s_index, tok.token_index) == item.source:
                        continue
                    if tok.lemma.casefold() == wanted:
                        return make_item(text, s_index, tok.token_index,
                                         item.answer_mode)
    return item


def _draw(pool: list, k: int, rng: random.Random) -> list:
    """Partial Fisher-Yates shuffle: the first k elements of a seeded
    permutation, i.e. a uniform draw without replacement in draw order."""
    items = list(pool)
    n = len(items)
    for i in range(k):
        j = rng.randrange(i, n)
        items[i], items[j] = items[j], items[i]
    return items[:k]
