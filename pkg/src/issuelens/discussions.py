"""Field/state dictionaries and mining of texts that mention a field with one of its states."""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .corpus import SET_FIELDS, Corpus, Issue, canonical_field, reconstruct_field_history
from .report import atomic_write_text, tsv_text
from .textprep import split_sentences, tokenize_spans


@dataclass(frozen=True)
class FieldStateDictionary:
    """tracker -> field name -> every state that field has held in that tracker."""

    trackers: Mapping[str, Mapping[str, frozenset[str]]]

    def fields(self, tracker: str) -> list[str]:
        return sorted(self.trackers.get(tracker, {}))

    def states(self, tracker: str, field_name: str) -> frozenset[str]:
        return self.trackers.get(tracker, {}).get(field_name, frozenset())

    def field_count(self) -> int:
        """Distinct field names over all trackers."""
        return len({f for fields in self.trackers.values() for f in fields})

    def to_json(self) -> str:
        data = {t: {f: sorted(s) for f, s in sorted(fields.items())}
                for t, fields in sorted(self.trackers.items())}
        return json.dumps(data, indent=2, ensure_ascii=False, sort_keys=True) + "\n"


def _states_of_change(field_name: str, value: str | None) -> list[str]:
    if value is None:
        return []
    if canonical_field(field_name) == "labels":
        # a labels change lists the whole label set, space separated
        return value.split()
    return [value.strip()]


def _current_states(issue: Issue, field_name: str) -> list[str]:
    attr = canonical_field(field_name)
    if attr is None or not hasattr(issue, attr):
        return []
    value = getattr(issue, attr)
    if value is None:
        return []
    if attr in SET_FIELDS:
        return [v.strip() for v in value]
    if isinstance(value, str):
        return [value.strip()]
    return []


def build_state_dictionary(corpus: Corpus | Iterable[Issue]) -> FieldStateDictionary:
    """Field names come from change items; states from both sides of every
    change plus the current stored value, collected per tracker."""
    states: dict[str, dict[str, set[str]]] = defaultdict(lambda: defaultdict(set))
    issues = list(corpus)
    for issue in issues:
        for event in issue.changelog:
            for item in event.items:
                bucket = states[issue.tracker][item.field]
                for v in (item.from_value, item.to_value):
                    bucket.update(s for s in _states_of_change(item.field, v) if s)
    for issue in issues:
        for field_name, bucket in states.get(issue.tracker, {}).items():
            bucket.update(s for s in _current_states(issue, field_name) if s)
    return FieldStateDictionary(
        {t: {f: frozenset(s) for f, s in fields.items()} for t, fields in states.items()})


@dataclass(frozen=True)
class MiningConfig:
    min_state_length: int = 3
    exclude_numeric_states: bool = True
    max_state_tokens: int = 6  # whole descriptions also end up as "states"
    same_sentence: bool = False
    context_chars: int = 60


def state_is_matchable(state: str, config: MiningConfig) -> bool:
    s = state.strip()
    if len(s) < config.min_state_length:
        return False
    if config.exclude_numeric_states and s.replace(".", "").replace(",", "").isdigit():
        return False
    return 0 < len(tokenize_spans(s)) <= config.max_state_tokens


@dataclass(frozen=True)
class MentionCandidate:
    issue_key: str
    tracker: str
    source: str  # "comment" | "description_evolution"
    source_id: str
    field: str
    states_matched: frozenset[str]
    excerpt: str
    spans: tuple[tuple[str, int, int], ...]  # ("field" | "state", start, end) in the source text


def _seq(text: str) -> tuple[str, ...]:
    return tuple(t.text.casefold() for t in tokenize_spans(text))


class _TrackerMatcher:
    """Per-tracker lookup tables. Field names that differ only in case
    ("Priority", "priority") are one field; the first spelling names it."""

    def __init__(self, dictionary: FieldStateDictionary, tracker: str, config: MiningConfig):
        merged: dict[tuple[str, ...], tuple[str, set[str]]] = {}
        for f in dictionary.fields(tracker):
            seq = _seq(f)
            if seq:
                name, states = merged.setdefault(seq, (f, set()))
                states.update(dictionary.states(tracker, f))
        self.fields: dict[str, tuple[str, ...]] = {}
        self.states: dict[str, dict[str, list[tuple[tuple[str, ...], str]]]] = {}
        for seq, (name, states) in merged.items():
            index: dict[str, list] = defaultdict(list)
            for s in sorted(states):
                if state_is_matchable(s, config):
                    sseq = _seq(s)
                    index[sseq[0]].append((sseq, s))
            if index:
                self.fields[name] = seq
                self.states[name] = index


def _find(words: list[str], seq: tuple[str, ...]) -> list[int]:
    n = len(seq)
    return [i for i in range(len(words) - n + 1) if tuple(words[i:i + n]) == seq]


def mentions_in_text(text: str, matcher: _TrackerMatcher, config: MiningConfig):
    """Yield (field, [(state, start, end)], [(start, end) of field names]) per matching field."""
    if not text:
        return
    if config.same_sentence:
        windows = [list(s.tokens) for s in split_sentences(text)]
    else:
        windows = [tokenize_spans(text)]
    for f, fseq in matcher.fields.items():
        field_spans, state_hits = [], {}
        for toks in windows:
            words = [t.text.casefold() for t in toks]
            fpos = _find(words, fseq)
            if not fpos:
                continue
            local = []
            index = matcher.states[f]
            for i, w in enumerate(words):
                for sseq, state in index.get(w, ()):
                    if tuple(words[i:i + len(sseq)]) == sseq:
                        local.append((state, toks[i].start, toks[i + len(sseq) - 1].end))
            if not local:
                continue
            field_spans += [(toks[i].start, toks[i + len(fseq) - 1].end) for i in fpos]
            for hit in local:
                state_hits.setdefault(hit, None)
        if state_hits:
            yield f, list(state_hits), field_spans


def _excerpt(text: str, field_spans, state_hits, context: int) -> str:
    # the closest field/state pair keeps the window short
    best = min(((fs, fe, ss, se) for fs, fe in field_spans for _, ss, se in state_hits),
               key=lambda t: max(t[1], t[3]) - min(t[0], t[2]))
    lo = max(0, min(best[0], best[2]) - context)
    hi = min(len(text), max(best[1], best[3]) + context)
    # widen to whole words
    while lo > 0 and not text[lo - 1].isspace():
        lo -= 1
    while hi < len(text) and not text[hi].isspace():
        hi += 1
    return text[lo:hi]


def _texts(issue: Issue):
    for order, c in enumerate(issue.comments):
        yield "comment", f"{order:06d}:{c.id}", c.body or ""
    if issue.created is None:
        versions = [issue.description or ""]
    else:
        versions = [v or "" for _, v in reconstruct_field_history(issue, "description")]
    for n, text in enumerate(versions):
        yield "description_evolution", f"v{n}", text


def mine_mentions(corpus: Corpus | Iterable[Issue], dictionary: FieldStateDictionary,
                  config: MiningConfig = MiningConfig()) -> list[MentionCandidate]:
    """Every comment and description version that names a field and one of its states."""
    matchers: dict[str, _TrackerMatcher] = {}
    out = []
    for issue in corpus:
        if issue.tracker not in matchers:
            matchers[issue.tracker] = _TrackerMatcher(dictionary, issue.tracker, config)
        matcher = matchers[issue.tracker]
        if not matcher.fields:
            continue
        for source, source_id, text in _texts(issue):
            for f, state_hits, field_spans in mentions_in_text(text, matcher, config):
                spans = sorted([("field", s, e) for s, e in field_spans]
                               + [("state", s, e) for _, s, e in state_hits],
                               key=lambda t: (t[1], t[2], t[0]))
                out.append(MentionCandidate(
                    issue.key, issue.tracker, source, source_id, f,
                    frozenset(s for s, _, _ in state_hits),
                    _excerpt(text, field_spans, state_hits, config.context_chars),
                    tuple(spans)))
    return sorted(out, key=_candidate_order)


def _candidate_order(c: MentionCandidate):
    return (c.tracker, c.issue_key, c.source, c.source_id, c.field)


REVIEW_HEADER = ("tracker", "key", "source", "source_id", "field", "states", "excerpt", "label")


def review_sheet_text(candidates: Iterable[MentionCandidate]) -> str:
    rows = [(c.tracker, c.issue_key, c.source, c.source_id, c.field,
             " | ".join(sorted(c.states_matched)), " ".join(c.excerpt.split()), "")
            for c in sorted(candidates, key=_candidate_order)]
    return tsv_text(REVIEW_HEADER, rows)


def export_review_sheet(candidates: Iterable[MentionCandidate], path: str | Path) -> Path:
    """Write the manual-review TSV (blank ``label`` column for the reviewer)."""
    atomic_write_text(path, review_sheet_text(candidates))
    return Path(path)


def export_dictionary(dictionary: FieldStateDictionary, path: str | Path) -> Path:
    atomic_write_text(path, dictionary.to_json())
    return Path(path)


def field_breakdown(candidates: Iterable[MentionCandidate]) -> dict[str, int]:
    counts: dict[str, int] = defaultdict(int)
    for c in candidates:
        counts[c.field] += 1
    return dict(sorted(counts.items()))
