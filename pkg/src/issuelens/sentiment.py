"""Lexicon-based polarity scoring and first-vs-last description trends.

Scoring: each token found in the lexicon is a hit. A negation word within
the three preceding tokens multiplies the hit by -0.5; an intensifier
multiplies the next hit by its factor (and is not a hit itself). Hits are
clamped to [-1, 1], averaged, and the mean is clamped again. No hits means
0.0.
"""

from __future__ import annotations

import importlib.util
import os
import statistics
import xml.etree.ElementTree as ET
from collections import defaultdict
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .corpus import Corpus, Issue, reconstruct_field_history, select_evolved_descriptions
from .textprep import DEFAULT_OVERLONG_LIMIT, flag_overlong, strip_markup, tokenize

NEGATION_FACTOR = -0.5
NEGATION_WINDOW = 3
DEFAULT_NEGATIONS = frozenset({"not", "n't", "never", "cannot"})
ANY_POS = "*"
REFERENCE_LEXICON_ENV = "ISSUELENS_REFERENCE_LEXICON"


@dataclass(frozen=True)
class SentimentLexicon:
    """Polarity entries keyed by (lowercase form, POS or ``*``)."""

    entries: Mapping[tuple[str, str], float]
    negations: frozenset[str] = DEFAULT_NEGATIONS
    intensifiers: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for key, value in self.entries.items():
            if not -1.0 <= value <= 1.0:
                raise ValueError(f"polarity of {key[0]!r} outside [-1, 1]: {value}")
        for word, factor in self.intensifiers.items():
            if factor <= 0:
                raise ValueError(f"intensifier {word!r} needs a positive factor")

    @property
    def pos_qualified(self) -> bool:
        return any(pos != ANY_POS for _, pos in self.entries)

    def polarity(self, word: str, pos: str | None = None) -> float | None:
        w = word.lower()
        if pos is not None and (w, pos) in self.entries:
            return self.entries[(w, pos)]
        return self.entries.get((w, ANY_POS))


def load_lexicon_tsv(path: str | Path) -> SentimentLexicon:
    """Read ``form<TAB>pos<TAB>value`` rows.

    ``pos`` is a Penn tag or ``*``; the special values ``NEG`` (negation word,
    value ignored) and ``INT`` (intensifier, value = factor) configure the
    modifiers. Lines starting with ``#`` are comments.
    """
    entries: dict[tuple[str, str], float] = {}
    negations: set[str] = set()
    intensifiers: dict[str, float] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 3:
                raise ValueError(f"{path}:{lineno}: expected form<TAB>pos<TAB>value")
            form, pos, value = cols[0].strip().lower(), cols[1].strip(), cols[2].strip()
            if pos == "NEG":
                negations.add(form)
            elif pos == "INT":
                intensifiers[form] = float(value)
            else:
                entries[(form, pos)] = float(value)
    return SentimentLexicon(entries, frozenset(negations) or DEFAULT_NEGATIONS, intensifiers)


def load_lexicon_xml(path: str | Path) -> SentimentLexicon:
    """Read the ``<word form= pos= polarity= intensity=/>`` XML lexicon format.

    Each form's polarity is the mean over its senses. Adverbs whose mean
    intensity differs from 1 become intensifiers.
    """
    senses: dict[str, list[tuple[str, float, float]]] = defaultdict(list)
    for el in ET.parse(path).getroot().iter("word"):
        form = (el.get("form") or "").lower()
        if not form or " " in form:
            continue
        senses[form].append((el.get("pos") or "", float(el.get("polarity", 0)),
                             float(el.get("intensity", 1))))
    entries: dict[tuple[str, str], float] = {}
    intensifiers: dict[str, float] = {}
    for form, rows in senses.items():
        intensity = statistics.fmean(r[2] for r in rows)
        if any(r[0] == "RB" for r in rows) and intensity != 1.0:
            intensifiers[form] = intensity
            continue
        entries[(form, ANY_POS)] = statistics.fmean(r[1] for r in rows)
    return SentimentLexicon(entries, DEFAULT_NEGATIONS, intensifiers)


def write_lexicon_tsv(lexicon: SentimentLexicon, path: str | Path, header: str = "") -> None:
    lines = [f"# {h}" for h in header.splitlines()]
    lines += [f"{w}\tNEG\t1" for w in sorted(lexicon.negations)]
    lines += [f"{w}\tINT\t{f!r}" for w, f in sorted(lexicon.intensifiers.items())]
    lines += [f"{w}\t{pos}\t{round(p, 6)!r}" for (w, pos), p in sorted(lexicon.entries.items())]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


_DEFAULT: SentimentLexicon | None = None


def default_lexicon() -> SentimentLexicon:
    global _DEFAULT
    if _DEFAULT is None:
        ref = resources.files("issuelens").joinpath("data/sentiment-lexicon.tsv")
        with resources.as_file(ref) as path:
            _DEFAULT = load_lexicon_tsv(path)
    return _DEFAULT


def reference_lexicon_path() -> Path | None:
    """Locate the third-party XML lexicon, if one is available.

    ``$ISSUELENS_REFERENCE_LEXICON`` wins; otherwise the copy shipped inside
    an installed ``textblob`` package is used (found without importing it).
    """
    env = os.environ.get(REFERENCE_LEXICON_ENV)
    if env:
        return Path(env) if Path(env).is_file() else None
    spec = importlib.util.find_spec("textblob")
    if spec is None or not spec.submodule_search_locations:
        return None
    for base in spec.submodule_search_locations:
        candidate = Path(base) / "en" / "en-sentiment.xml"
        if candidate.is_file():
            return candidate
    return None


def _clamp(x: float) -> float:
    return max(-1.0, min(1.0, x))


def score_tokens(tokens: Iterable[str], lexicon: SentimentLexicon, tags=None) -> float:
    words = [t.lower() for t in tokens]
    hits = []
    pending = 1.0
    for i, w in enumerate(words):
        if w in lexicon.intensifiers:
            pending *= lexicon.intensifiers[w]
            continue
        p = lexicon.polarity(w, tags[i] if tags is not None else None)
        if p is None:
            continue
        p = _clamp(p * pending)
        pending = 1.0
        if any(prev in lexicon.negations for prev in words[max(0, i - NEGATION_WINDOW):i]):
            p *= NEGATION_FACTOR
        hits.append(p)
    if not hits:
        return 0.0
    return _clamp(sum(hits) / len(hits))


def score_polarity(text: str, lexicon: SentimentLexicon | None = None, tagger=None) -> float:
    """Polarity in [-1, 1]. Markup (URLs, code blocks ...) is removed first."""
    lexicon = lexicon or default_lexicon()
    tokens = tokenize(strip_markup(text).text)
    if not tokens:
        return 0.0
    tags = None
    if lexicon.pos_qualified:
        from .annotate import default_tagger
        tags = (tagger or default_tagger()).tag(tokens)
    return score_tokens(tokens, lexicon, tags)


@dataclass(frozen=True)
class TrendRecord:
    issue_key: str
    first_score: float
    last_score: float
    trend: float
    first_text: str
    last_text: str


class TrendSkipped(Exception):
    def __init__(self, issue_key: str, reason: str) -> None:
        super().__init__(f"{issue_key}: {reason}")
        self.issue_key = issue_key
        self.reason = reason


def trend_between(key: str, first: str, last: str, lexicon: SentimentLexicon) -> TrendRecord:
    a, b = score_polarity(first, lexicon), score_polarity(last, lexicon)
    return TrendRecord(key, a, b, b - a, first, last)


def description_trend(issue: Issue, lexicon: SentimentLexicon | None = None,
                      limit: int = DEFAULT_OVERLONG_LIMIT) -> TrendRecord:
    """Compare the creation-time description with the current one."""
    lexicon = lexicon or default_lexicon()
    if issue.created is None:
        raise TrendSkipped(issue.key, "missing created")
    history = reconstruct_field_history(issue, "description")
    if len(history) < 2:
        raise TrendSkipped(issue.key, "no description evolution")
    first, last = history[0][1] or "", issue.description or ""
    for text in (first, last):
        if flag_overlong(strip_markup(text), limit):
            raise TrendSkipped(issue.key, "overlong text")
    return trend_between(issue.key, first, last, lexicon)


@dataclass(frozen=True)
class TrendStatistics:
    count: int
    mean_trend: float
    median_trend: float
    fraction_toward_neutral: float


@dataclass(frozen=True)
class TrendReport:
    records: tuple[TrendRecord, ...]
    skipped: tuple[tuple[str, str], ...]
    statistics: TrendStatistics | None


def trend_statistics(records: Iterable[TrendRecord]) -> TrendStatistics | None:
    records = list(records)
    if not records:
        return None
    trends = [r.trend for r in records]
    toward = sum(abs(r.last_score) < abs(r.first_score) for r in records)
    return TrendStatistics(len(records), statistics.fmean(trends), statistics.median(trends),
                           toward / len(records))


def trend_report(corpus: Corpus, lexicon: SentimentLexicon | None = None,
                 limit: int = DEFAULT_OVERLONG_LIMIT) -> TrendReport:
    lexicon = lexicon or default_lexicon()
    keys = sorted({row.key for row in select_evolved_descriptions(corpus)})
    records, skipped = [], []
    for key in keys:
        try:
            records.append(description_trend(corpus[key], lexicon, limit))
        except TrendSkipped as exc:
            skipped.append((exc.issue_key, exc.reason))
    return TrendReport(tuple(records), tuple(skipped), trend_statistics(records))


TREND_HEADER = ("key", "first_score", "last_score", "trend")


def trend_rows(records: Iterable[TrendRecord]) -> list[tuple]:
    return [(r.issue_key, r.first_score, r.last_score, r.trend) for r in records]
