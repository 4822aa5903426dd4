"""Error-frequency profiles and detection benchmarking.

Profiles count annotated error spans by truncated category code, mother
tongue and proficiency level; they quantify which errors occur frequently
for which learners. Detection benchmarking scores a set of predicted
error positions against the annotation, token-wise.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .corpus import Corpus


@dataclass(frozen=True, slots=True)
class ErrorProfile:
    """Span counts keyed by (category prefix, l1, level) at one depth."""

    depth: int
    counts: dict[tuple[str, str, str], int]
    total_spans: int
    total_tokens: int


def build_profile(corpus: Corpus, depth: int) -> ErrorProfile:
    """Count every error span once under its category truncated to ``depth``
    segments, keyed by the owning text's (l1, level)."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    counts: dict[tuple[str, str, str], int] = {}
    total_spans = 0
    for text in corpus.texts:
        for spans in text.errors.values():
            for span in spans:
                prefix = "-".join(span.segments[:depth])
                key = (prefix, text.mothertongue, text.level)
                counts[key] = counts.get(key, 0) + 1
                total_spans += 1
    return ErrorProfile(depth=depth, counts=counts, total_spans=total_spans,
                        total_tokens=corpus.token_count())


def frequent_errors(profile: ErrorProfile, l1: str | None = None,
                    level: str | None = None,
                    min_count: int = 1) -> list[tuple[str, int, float]]:
    """Ranked (category, count, relative frequency) rows under a filter.

    Descending by count, ties broken lexicographically by category;
    relative frequency is against the total span count under the same
    filter. Filters compare case-insensitively.
    """
    if min_count < 1:
        raise ValueError("min_count must be at least 1")
    by_cat: dict[str, int] = {}
    for (category, span_l1, span_level), count in profile.counts.items():
        if l1 is not None and span_l1.casefold() != l1.casefold():
            continue
        if level is not None and span_level.casefold() != level.casefold():
            continue
        by_cat[category] = by_cat.get(category, 0) + count
    total = sum(by_cat.values())
    ranked = sorted(((cat, count) for cat, count in by_cat.items()
                     if count >= min_count),
                    key=lambda row: (-row[1], row[0]))
    return [(cat, count, count / total) for cat, count in ranked]


def benchmark_detection(corpus: Corpus,
                        predicted: set[tuple[str, int, int]]
                        ) -> tuple[float, float, float]:
    """Precision, recall and F1 of predicted error token positions.

    Positions are (text id, sentence index, token index). Gold is the set
    of tokens covered by any span. Empty sets score 1.0 on their own
    metric (0/0 convention), and F1 is 0 when precision + recall is 0.
    """
    valid: set[tuple[str, int, int]] = set()
    gold: set[tuple[str, int, int]] = set()
    for text in corpus.texts:
        for s_index, sentence in enumerate(text.sentences):
            for tok in sentence:
                valid.add((text.id, s_index, tok.token_index))
        for s_index, spans in text.errors.items():
            for span in spans:
                for t_index in range(span.first_token, span.last_token + 1):
                    gold.add((text.id, s_index, t_index))
    bad = predicted - valid
    if bad:
        raise ValueError(f"predicted position does not reference a token: "
                         f"{sorted(bad)[0]}")
    true_positives = len(predicted & gold)
    precision = true_positives / len(predicted) if predicted else 1.0
    recall = true_positives / len(gold) if gold else 1.0
    f1 = (0.0 if precision + recall == 0
          else 2 * precision * recall / (precision + recall))
    return precision, recall, f1


def profile_to_csv(profile: ErrorProfile) -> str:
    """Tabular export, one `category,l1,level,count` row per counter."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["category", "l1", "level", "count"])
    for (category, l1, level), count in sorted(profile.counts.items()):
        writer.writerow([category, l1, level, count])
    return buf.getvalue()
