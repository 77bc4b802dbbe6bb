"""``issuelens`` command line: ingest, lint, evolve, discuss, links.

Each command writes ``<command>-report.json`` plus flat TSV tables into the
output directory. Exit codes: 0 success, 1 internal error, 2 configuration
error, 3 input error.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path
from typing import Callable, Sequence

from . import discussions, links, lints, sentiment
from .annotate import HypernymLexicon, SidecarError, SidecarTagger
from .annotate import default_lexicon as default_hypernyms
from .config import ConfigError, RunConfig, load_config, with_rules
from .corpus import (
    Corpus,
    CorpusError,
    UnknownTrackerError,
    corpus_statistics,
    load_corpus,
    sample_and_clean,
    select_user_stories,
)
from .report import build_report, input_digest, write_json, write_tsv

log = logging.getLogger("issuelens")

EXIT_OK, EXIT_INTERNAL, EXIT_CONFIG, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


# ---------------------------------------------------------------- helpers

def _load(config: RunConfig) -> Corpus:
    if not config.input:
        raise ConfigError("no input given (use --input or set `input` in the config file)")
    try:
        corpus = load_corpus(config.input, strict=config.strict)
    except CorpusError as exc:
        raise InputError(str(exc)) from None
    if config.tracker is not None:
        if config.tracker not in corpus.trackers:
            raise InputError(f"tracker {config.tracker!r} not in input "
                             f"(found: {', '.join(corpus.trackers) or 'none'})")
        corpus = Corpus(tuple(corpus.by_tracker(config.tracker)), corpus.warnings)
    return corpus


def _finish(config: RunConfig, command: str, summary: dict, payload) -> Path:
    out = Path(config.out)
    report = build_report(command, config.echo(), input_digest(config.input), summary, payload)
    path = out / f"{command}-report.json"
    write_json(path, report)
    return path


def _echo(msg: str) -> None:
    print(msg, flush=True)


# ---------------------------------------------------------------- commands

def cmd_ingest(config: RunConfig) -> int:
    corpus = _load(config)
    stats = corpus_statistics(corpus)
    rows = [(t, s["issues"], s["comments"], s["change_events"], s["links"])
            for t, s in stats["trackers"].items()]
    write_tsv(Path(config.out) / "ingest-trackers.tsv",
              ("tracker", "issues", "comments", "change_events", "links"), rows)
    _finish(config, "ingest", stats, {"warnings": list(corpus.warnings)})
    for t, n, *_ in rows:
        _echo(f"{t}\t{n} issues")
    _echo(f"total\t{len(corpus)} issues, {len(corpus.warnings)} schema warnings")
    return EXIT_OK


def _lint_targets(corpus: Corpus, config: RunConfig) -> list[str]:
    if config.lint.all_issues:
        return sorted(i.key for i in corpus)
    keys = []
    for tracker in corpus.trackers:
        keys += [key for key, _ in select_user_stories(corpus, tracker)]
    return sorted(keys)


def cmd_lint(config: RunConfig) -> int:
    corpus = _load(config)
    settings = config.lint
    try:
        lexicon = (HypernymLexicon.from_tsv(settings.hypernym_lexicon)
                   if settings.hypernym_lexicon else default_hypernyms())
        tagger = SidecarTagger.from_file(settings.tag_sidecar) if settings.tag_sidecar else None
    except (OSError, SidecarError, ValueError) as exc:
        raise InputError(f"cannot load lint resources: {exc}") from None
    findings = []
    targets = _lint_targets(corpus, config)
    for key in targets:
        findings += lints.lint_issue(corpus[key], settings.rules, lexicon=lexicon, tagger=tagger)
    counts = lints.rule_counts(findings)
    out = Path(config.out)
    write_tsv(out / "lint-findings.tsv", lints.FINDINGS_HEADER, lints.findings_rows(findings))
    write_tsv(out / "lint-rule-counts.tsv", ("rule", "count"), sorted(counts.items()))
    summary = {"issues_linted": len(targets), "findings": len(findings), "per_rule": counts}
    _finish(config, "lint", summary,
            [dict(zip(lints.FINDINGS_HEADER, row)) for row in lints.findings_rows(findings)])
    _echo(f"{len(targets)} issues linted, {len(findings)} findings")
    for rule, n in sorted(counts.items()):
        _echo(f"  {rule}\t{n}")
    return EXIT_OK


def _sentiment_lexicon(path: str | None) -> sentiment.SentimentLexicon:
    if path is None:
        return sentiment.default_lexicon()
    try:
        if path.lower().endswith(".xml"):
            return sentiment.load_lexicon_xml(path)
        return sentiment.load_lexicon_tsv(path)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot load sentiment lexicon {path}: {exc}") from None


def cmd_evolve(config: RunConfig) -> int:
    corpus = _load(config)
    settings = config.evolve
    lexicon = _sentiment_lexicon(settings.sentiment_lexicon)
    if settings.sample_size is not None and settings.sample_size < 1:
        raise ConfigError("sample_size must be >= 1")
    largest = max((len(corpus.by_tracker(t)) for t in corpus.trackers), default=0)
    n = settings.sample_size or max(largest, 1)
    sampled = sample_and_clean(corpus, n, seed=config.seed)
    report = sentiment.trend_report(sampled, lexicon, settings.overlong_limit)
    out = Path(config.out)
    write_tsv(out / "evolve-trends.tsv", sentiment.TREND_HEADER,
              sentiment.trend_rows(report.records))
    write_tsv(out / "evolve-skipped.tsv", ("key", "reason"), report.skipped)
    stats = dataclasses.asdict(report.statistics) if report.statistics else None
    summary = {"sampled": len(sampled), "removed": sampled.removed(),
               "trends": len(report.records), "skipped": len(report.skipped),
               "statistics": stats}
    payload = [dict(zip(sentiment.TREND_HEADER, row))
               for row in sentiment.trend_rows(report.records)]
    _finish(config, "evolve", summary, payload)
    _echo(f"{len(sampled)} issues kept after sampling and cleaning, "
          f"{len(report.records)} description trends, {len(report.skipped)} skipped")
    if stats:
        _echo(f"mean trend {stats['mean_trend']:+.4f}, median {stats['median_trend']:+.4f}, "
              f"toward neutral {stats['fraction_toward_neutral']:.1%}")
    return EXIT_OK


def cmd_discuss(config: RunConfig) -> int:
    corpus = _load(config)
    dictionary = discussions.build_state_dictionary(corpus)
    candidates = discussions.mine_mentions(corpus, dictionary, config.discuss)
    out = Path(config.out)
    discussions.export_review_sheet(candidates, out / "discuss-review.tsv")
    discussions.export_dictionary(dictionary, out / "discuss-dictionary.json")
    breakdown = discussions.field_breakdown(candidates)
    write_tsv(out / "discuss-fields.tsv", ("field", "candidates"), sorted(breakdown.items()))
    summary = {"distinct_fields": dictionary.field_count(), "candidates": len(candidates),
               "per_field": breakdown}
    payload = [{"tracker": c.tracker, "key": c.issue_key, "source": c.source,
                "source_id": c.source_id, "field": c.field,
                "states": sorted(c.states_matched), "spans": [list(s) for s in c.spans]}
               for c in candidates]
    _finish(config, "discuss", summary, payload)
    _echo(f"{dictionary.field_count()} distinct fields, {len(candidates)} candidates")
    for f, n in breakdown.items():
        _echo(f"  {f}\t{n}")
    return EXIT_OK


def cmd_links(config: RunConfig) -> int:
    settings = config.links
    if settings.year is None:
        raise ConfigError("links needs a selection year (--year or [links] year)")
    if settings.provider == "external" and not settings.embeddings:
        raise ConfigError("--provider external needs --embeddings")
    if settings.embeddings and not Path(settings.embeddings).is_file():
        raise InputError(f"embeddings file not found: {settings.embeddings}")
    corpus = _load(config)
    try:
        result = links.analyze_links(corpus, settings.year, settings.provider,
                                     settings.embeddings, settings.fit_scope, settings.stop_words)
    except links.EmbeddingError as exc:
        raise InputError(str(exc)) from None
    out = Path(config.out)
    tag = settings.provider
    write_tsv(out / f"links-{tag}-pairs.tsv", links.RECORD_HEADER, links.record_rows(result.records))
    write_tsv(out / f"links-{tag}-distributions.tsv", links.DISTRIBUTION_HEADER,
              links.distribution_rows(result.distributions))
    summary = {"pairs": len(result.records), "missing_vector": result.missing_vector,
               "dangling_links": result.dangling, "mirror_duplicates": result.duplicates,
               "unmatched_embedding_keys": list(result.unmatched_keys)}
    if settings.embeddings:
        summary["embeddings_digest"] = input_digest(settings.embeddings)
    payload = [dict(zip(links.DISTRIBUTION_HEADER, row))
               for row in links.distribution_rows(result.distributions)]
    _finish(config, f"links-{tag}", summary, payload)
    _echo(f"{len(result.records)} linked pairs ({tag}), {result.missing_vector} without vectors")
    for d in result.distributions:
        _echo(f"  {d.link_type}\tn={d.count}\tmedian={d.median:.3f}\tmean={d.mean:.3f}")
    return EXIT_OK


COMMANDS: dict[str, Callable[[RunConfig], int]] = {
    "ingest": cmd_ingest, "lint": cmd_lint, "evolve": cmd_evolve,
    "discuss": cmd_discuss, "links": cmd_links,
}


# ---------------------------------------------------------------- argument handling

def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a flag given before the subcommand from being reset by
    # the subparser's own default
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--input", help="JSONL file or directory of JSONL files")
    common.add_argument("--out", help="output directory (default: out)")
    common.add_argument("--seed", type=int, help="random seed (default: 42)")
    common.add_argument("--tracker", help="only analyse this tracker")
    common.add_argument("--strict", action="store_true", help="fail on the first invalid record")
    common.add_argument("--config", help="TOML configuration file")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="issuelens", description=__doc__.splitlines()[0],
                                     parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("ingest", parents=[common], help="validate input and print counts")
    p = sub.add_parser("lint", parents=[common], help="requirements-quality findings")
    p.add_argument("--all-issues", action="store_true", default=None,
                   help="lint every issue, not only user stories")
    p.add_argument("--rules", help="comma-separated subset of: " + ", ".join(lints.RULES))
    p.add_argument("--include-comments", action="store_true", default=None)
    p = sub.add_parser("evolve", parents=[common], help="description sentiment trends")
    p.add_argument("--sample-size", type=int, help="issues sampled per tracker")
    p.add_argument("--lexicon", help="sentiment lexicon (TSV or XML)")
    sub.add_parser("discuss", parents=[common], help="comments that name a field and a state")
    p = sub.add_parser("links", parents=[common], help="text similarity per link type")
    p.add_argument("--provider", choices=links.PROVIDERS)
    p.add_argument("--embeddings", help="sidecar file of key<TAB>vector lines")
    p.add_argument("--year", type=int, help="creation year of the link source issues")
    p.add_argument("--fit-scope", choices=links.FIT_SCOPES)
    return parser


def _apply_flags(config: RunConfig, args: argparse.Namespace) -> RunConfig:
    top = {k: getattr(args, k) for k in ("input", "out", "seed", "tracker", "strict")
           if getattr(args, k, None) is not None}
    config = dataclasses.replace(config, **top)
    if args.command == "lint":
        lint = config.lint
        if args.all_issues:
            lint = dataclasses.replace(lint, all_issues=True)
        if args.include_comments:
            rules = dataclasses.replace(lint.rules, include_comments=True)
            lint = dataclasses.replace(lint, rules=rules)
        config = dataclasses.replace(config, lint=lint)
        if args.rules is not None:
            names = [r.strip() for r in args.rules.split(",") if r.strip()]
            config = with_rules(config, names)
    elif args.command == "evolve":
        changes = {}
        if args.sample_size is not None:
            changes["sample_size"] = args.sample_size
        if args.lexicon is not None:
            changes["sentiment_lexicon"] = args.lexicon
        config = dataclasses.replace(config, evolve=dataclasses.replace(config.evolve, **changes))
    elif args.command == "links":
        changes = {k: getattr(args, k) for k in ("provider", "embeddings", "year", "fit_scope")
                   if getattr(args, k) is not None}
        config = dataclasses.replace(config, links=dataclasses.replace(config.links, **changes))
    return config


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = _apply_flags(load_config(getattr(args, "config", None)), args)
        return COMMANDS[args.command](config)
    except ConfigError as exc:
        print(f"issuelens: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InputError, UnknownTrackerError) as exc:
        print(f"issuelens: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - last-resort handler for the exit code
        log.debug("internal error", exc_info=True)
        print(f"issuelens: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
