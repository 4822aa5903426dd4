"""lexix: learner-corpus concordancing, exercises and session sequencing.

The pipeline: parse an annotated XML corpus, index it, run token-pattern
queries as keyword-in-context concordances, turn matches into gap-fill
exercises, and sequence those through linear or branched practice
sessions. Error-frequency profiles summarize which errors which learners
make. A CLI (``lexix``) and an HTTP service expose the same operations.
"""

from importlib import resources

from .concordance import (ConcordanceLine, Occurrence, ResultPage,
                          collect_occurrences, format_text_table, render_line,
                          run_query)
from .corpus import (Catalog, Corpus, CorpusError, CorpusParseError,
                     CorpusValidationError, ErrorSpan, LearnerText,
                     MorphoToken, ValidationFinding, make_corpus, parse_corpus,
                     serialize_corpus, try_parse_corpus, validate_corpus)
from .exercise import (ExerciseSet, GapFillItem, build_distractors,
                       generate_items, make_item, same_lemma_remedial)
from .index import (CorpusIndex, Posting, SnapshotError, build_index,
                    load_snapshot, save_snapshot, sniff_snapshot)
from .pattern import (Constraint, DocFilters, Match, PatternQuery,
                      QueryParseError, QuerySemanticsError, Quantifier, Slot,
                      TokenAutomaton, compile_query, match_sentence,
                      parse_query, query_from_plain, query_to_plain, to_dsl)
from .session import (AnswerRecord, Feedback, Session, SessionConfig,
                      SessionReport, SessionStateError, start_session)
from .stats import (ErrorProfile, benchmark_detection, build_profile,
                    frequent_errors, profile_to_csv)

__version__ = "0.1.0"


def sample_corpus_path() -> str:
    """Filesystem path of the bundled sample corpus."""
    return str(resources.files(__name__).joinpath("data/sample_corpus.xml"))


def load_sample_corpus() -> Corpus:
    with open(sample_corpus_path(), "rb") as fh:
        return parse_corpus(fh.read())
