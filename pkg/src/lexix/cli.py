"""Command-line front door: validate, index, query, gen, stats, serve.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 runtime
error. Data goes to stdout, diagnostics to stderr. ``--format json``
prints exactly the body the HTTP service would return for the equivalent
endpoint.
"""

from __future__ import annotations

import argparse
import os
import sys

from .concordance import format_text_table, run_query
from .corpus import CorpusError, CorpusParseError, parse_corpus, try_parse_corpus
from .exercise import generate_items
from .index import (CorpusIndex, SnapshotError, build_index, load_snapshot,
                    save_snapshot, sniff_snapshot)
from .pattern import QueryParseError, parse_query
from .serialize import (canonical_json, exercise_set_payload, page_payload,
                        stats_payload)
from .stats import build_profile, frequent_errors, profile_to_csv

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_RUNTIME = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexix",
        description="Learner-corpus concordancing and exercise generation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a corpus file")
    p_validate.add_argument("corpus", help="path to a corpus XML file")

    p_index = sub.add_parser("index", help="build and save an index snapshot")
    p_index.add_argument("corpus", help="path to a corpus XML file")
    p_index.add_argument("-o", "--output", required=True,
                         help="snapshot file to write")

    p_query = sub.add_parser("query", help="run a concordance query")
    p_query.add_argument("corpus", help="corpus XML file or index snapshot")
    p_query.add_argument("-q", "--query", required=True, dest="dsl",
                         help="pattern query in the DSL")
    p_query.add_argument("--offset", type=int, default=0)
    p_query.add_argument("--limit", type=int, default=50)
    p_query.add_argument("--format", choices=("text", "json"), default="text")

    p_gen = sub.add_parser("gen", help="generate gap-fill exercises")
    p_gen.add_argument("corpus", help="corpus XML file or index snapshot")
    p_gen.add_argument("-q", "--query", required=True, dest="dsl")
    p_gen.add_argument("--count", type=int, default=10)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--answer-mode", choices=("as-written", "corrected"),
                       default="as-written")
    p_gen.add_argument("--distractors",
                       choices=("none", "same-lemma", "attested-errors"),
                       default="none")
    p_gen.add_argument("--k", type=int, default=3,
                       help="distractors per item")
    p_gen.add_argument("--format", choices=("text", "json"), default="text")

    p_stats = sub.add_parser("stats", help="error-frequency table")
    p_stats.add_argument("corpus", help="corpus XML file or index snapshot")
    p_stats.add_argument("--depth", type=int, default=1,
                         help="category prefix depth")
    p_stats.add_argument("--l1", default=None, help="filter by mother tongue")
    p_stats.add_argument("--level", default=None, help="filter by level")
    p_stats.add_argument("--min", type=int, default=1, dest="min_count",
                         help="minimum span count")
    p_stats.add_argument("--format", choices=("text", "json", "csv"),
                         default="text")

    env = os.environ
    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--listen", default=env.get("LEXIX_LISTEN",
                                                     "127.0.0.1:8000"),
                         help="host:port to bind (env LEXIX_LISTEN)")
    p_serve.add_argument("--data", default=env.get("LEXIX_DATA"),
                         help="directory of corpus XML files to preload "
                              "(env LEXIX_DATA)")
    p_serve.add_argument("--session-store",
                         default=env.get("LEXIX_SESSION_STORE"),
                         help="file path for persistent session state "
                              "(env LEXIX_SESSION_STORE)")
    p_serve.add_argument("--max-upload", type=int,
                         default=int(env.get("LEXIX_MAX_UPLOAD",
                                             32 * 1024 * 1024)),
                         help="maximum corpus upload size in bytes "
                              "(env LEXIX_MAX_UPLOAD)")
    return parser


def _load_index(path: str) -> CorpusIndex:
    if sniff_snapshot(path):
        return load_snapshot(path)
    with open(path, "rb") as fh:
        corpus = parse_corpus(fh.read())
    return build_index(corpus)


def cmd_validate(args) -> int:
    with open(args.corpus, "rb") as fh:
        try:
            _, findings = try_parse_corpus(fh.read())
        except CorpusParseError as exc:
            print(str(exc), file=sys.stderr)
            return EXIT_VALIDATION
    for finding in findings:
        print(str(finding))
    if any(f.severity == "error" for f in findings):
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_index(args) -> int:
    with open(args.corpus, "rb") as fh:
        corpus = parse_corpus(fh.read())
    index = build_index(corpus)
    save_snapshot(index, args.output)
    print(f"indexed {len(corpus.texts)} texts, {corpus.token_count()} tokens "
          f"-> {args.output}", file=sys.stderr)
    return EXIT_OK


def cmd_query(args) -> int:
    index = _load_index(args.corpus)
    query = parse_query(args.dsl)
    page = run_query(index, query, offset=args.offset, limit=args.limit)
    if args.format == "json":
        print(canonical_json(page_payload(page, query)))
    else:
        print(format_text_table(page))
        print(f"{page.total_matches} match(es)", file=sys.stderr)
    return EXIT_OK


def cmd_gen(args) -> int:
    index = _load_index(args.corpus)
    query = parse_query(args.dsl)
    exercise_set = generate_items(
        index, query, count=args.count, seed=args.seed,
        answer_mode=args.answer_mode, distractor_policy=args.distractors,
        distractor_count=args.k)
    if args.format == "json":
        print(canonical_json(exercise_set_payload(exercise_set)))
        return EXIT_OK
    if exercise_set.no_examples:
        print("no examples matched the query", file=sys.stderr)
        return EXIT_OK
    for i, item in enumerate(exercise_set.items, start=1):
        print(f"{i}. {item.stem}")
        line = f"   -> {item.answer}"
        if item.distractors:
            line += "   (distractors: " + ", ".join(item.distractors) + ")"
        print(line)
    return EXIT_OK


def cmd_stats(args) -> int:
    index = _load_index(args.corpus)
    profile = build_profile(index.corpus, args.depth)
    if args.format == "csv":
        sys.stdout.write(profile_to_csv(profile))
        return EXIT_OK
    if args.format == "json":
        print(canonical_json(stats_payload(profile, args.l1, args.level,
                                           args.min_count)))
        return EXIT_OK
    rows = frequent_errors(profile, l1=args.l1, level=args.level,
                           min_count=args.min_count)
    if not rows:
        print("no error spans under this filter", file=sys.stderr)
        return EXIT_OK
    width = max(len(r[0]) for r in rows)
    for category, count, rel in rows:
        print(f"{category.ljust(width)}  {count:6d}  {rel:8.4f}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    host, _, port = args.listen.rpartition(":")
    app = create_app(ServiceConfig(
        data_dir=args.data,
        session_store_path=args.session_store,
        max_upload_bytes=args.max_upload))
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "validate": cmd_validate,
        "index": cmd_index,
        "query": cmd_query,
        "gen": cmd_gen,
        "stats": cmd_stats,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except (CorpusError, QueryParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (OSError, SnapshotError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
