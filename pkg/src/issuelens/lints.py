"""Requirements-quality lint rules over issue text.

Six rules: lexical lookups for dangerous plurals and inside-behaviour words,
a regular expression for unclear inclusion ("up to N"), a POS-stream regular
expression for passive voice, and suffix/hypernym and VBG-role checks for
derived and gerundive nominals.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .annotate import (
    ACTION_LABELS,
    HypernymLexicon,
    LexiconNotLoadedError,
    TaggedToken,
    VbgRole,
    classify_vbg_role,
    parse_tagged_stream,
    pos_tag,
    render_tagged_stream,
    sanitize_word,
)
from .textprep import DEFAULT_ABBREVIATIONS, CleanText, Sentence, split_sentences, strip_markup

RULES = (
    "dangerous_plural",
    "inside_behaviour",
    "unclear_inclusion",
    "passive_voice",
    "derived_nominal",
    "gerundive_nominal",
)
FIELDS = ("summary", "description", "comment")

DEFAULT_DANGEROUS_PLURALS = frozenset(
    {"few", "little", "many", "much", "every", "all", "some", "most", "several"})
DEFAULT_INSIDE_BEHAVIOUR = frozenset({"until", "during", "after", "before", "while"})
DEFAULT_DERIVED_SUFFIXES = ("tion", "sion", "ment", "ism", "ty", "ance", "ence")

# As published the lookahead reads (?!.*including|excluding): alternation
# binds loosest, so a distant "excluding" does not block a match.
UNCLEAR_INCLUSION_VERBATIM = r"up\sto\s(?!.*including|excluding)"
UNCLEAR_INCLUSION_GROUPED = r"up\sto\s(?!.*(?:including|excluding))"

# The passive-voice pattern over the word°TAG°lemma stream: a "be" token,
# any number of tokens whose tag is not VB*, then a VBN token. The three
# parts are concatenated without the display spaces.
PASSIVE_PATTERN = (r"\b\w+?°V[^°]*°be"
                   r"(\W[^°]+?°(?!VB.)[^°]*°[^ ]+?)*"
                   r"\W\w+?°VBN°\w+")
_PASSIVE_RE = re.compile(PASSIVE_PATTERN, re.IGNORECASE)
_WORD_CHAR = re.compile(r"\w")


@dataclass(frozen=True)
class Finding:
    rule_id: str
    issue_key: str
    field: str
    start: int
    end: int
    matched_text: str
    message: str
    source_id: str = ""
    confidence: float = 1.0  # reserved; every rule reports 1.0 today


@dataclass(frozen=True)
class RuleConfig:
    dangerous_plural_words: frozenset[str] = DEFAULT_DANGEROUS_PLURALS
    inside_behaviour_words: frozenset[str] = DEFAULT_INSIDE_BEHAVIOUR
    derived_suffixes: tuple[str, ...] = DEFAULT_DERIVED_SUFFIXES
    action_labels: tuple[str, ...] = ACTION_LABELS
    case_insensitive: bool = True
    enabled_rules: frozenset[str] = frozenset(RULES)
    include_comments: bool = False
    inclusion_pattern: str = "grouped"  # or "verbatim"
    abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS

    def __post_init__(self) -> None:
        for name in ("dangerous_plural_words", "inside_behaviour_words"):
            words = frozenset(w.strip().lower() for w in getattr(self, name))
            if not words or "" in words:
                raise ValueError(f"{name} must hold at least one non-empty word")
            object.__setattr__(self, name, words)
        suffixes = tuple(s.strip().lstrip("-").lower() for s in self.derived_suffixes)
        if not suffixes or "" in suffixes:
            raise ValueError("derived_suffixes must hold at least one suffix")
        object.__setattr__(self, "derived_suffixes", suffixes)
        unknown = set(self.enabled_rules) - set(RULES)
        if unknown:
            raise ValueError(f"unknown rules: {sorted(unknown)}")
        object.__setattr__(self, "enabled_rules", frozenset(self.enabled_rules))
        if self.inclusion_pattern not in ("grouped", "verbatim"):
            raise ValueError("inclusion_pattern must be 'grouped' or 'verbatim'")


DEFAULT_CONFIG = RuleConfig()


@dataclass
class TaggedSentence:
    """A sentence plus its tags; offsets refer to the text it was split from."""

    sentence: Sentence
    tagged: list[TaggedToken] = field(default_factory=list)

    @property
    def tokens(self):
        return self.sentence.tokens


def tag_sentences(sentences: Iterable[Sentence], tagger=None) -> list[TaggedSentence]:
    out = []
    for s in sentences:
        words = [sanitize_word(t.text) for t in s.tokens]
        out.append(TaggedSentence(s, pos_tag(words, tagger) if words else []))
    return out


def _as_sentences(text_or_sentences, config: RuleConfig) -> list[Sentence]:
    if isinstance(text_or_sentences, (str, CleanText)):
        return split_sentences(text_or_sentences, config.abbreviations)
    return [s.sentence if isinstance(s, TaggedSentence) else s for s in text_or_sentences]


def _finding(rule: str, start: int, end: int, text: str, message: str) -> Finding:
    return Finding(rule, "", "description", start, end, text, message)


# --- lexical rules ---------------------------------------------------------

def _word_lookup(sentences, words: frozenset[str], rule: str, message: str,
                 config: RuleConfig) -> list[Finding]:
    out = []
    for s in _as_sentences(sentences, config):
        for tok in s.tokens:
            probe = tok.text.lower() if config.case_insensitive else tok.text
            if probe in words:
                out.append(_finding(rule, tok.start, tok.end, tok.text, message.format(tok.text)))
    return out


def lint_dangerous_plurals(sentences, config: RuleConfig = DEFAULT_CONFIG) -> list[Finding]:
    return _word_lookup(sentences, config.dangerous_plural_words, "dangerous_plural",
                        "'{}' quantifies without a boundary condition", config)


def lint_inside_behaviour(sentences, config: RuleConfig = DEFAULT_CONFIG) -> list[Finding]:
    return _word_lookup(sentences, config.inside_behaviour_words, "inside_behaviour",
                        "'{}' leaves the behaviour outside this interval unspecified", config)


_QUANTITY_HEAD = ("CD",)
_QUANTITY_TAIL = ("CD", "JJ", "JJR", "JJS", "VBN", "VBG", "NN", "NNS", "NNP", "NNPS")


def lint_unclear_inclusion(sentences, config: RuleConfig = DEFAULT_CONFIG,
                           tagged: Sequence[TaggedSentence] | None = None) -> list[Finding]:
    """Apply the "up to" pattern to each sentence separately.

    The finding starts at "up to". When tags are available and a number
    follows, it extends over the quantity phrase ("up to 10 fired events").
    """
    pattern = UNCLEAR_INCLUSION_GROUPED if config.inclusion_pattern == "grouped" \
        else UNCLEAR_INCLUSION_VERBATIM
    rx = re.compile(pattern, re.IGNORECASE if config.case_insensitive else 0)
    sents = _as_sentences(sentences, config)
    tags_by_start = {t.sentence.start: t for t in tagged or ()}
    out = []
    for s in sents:
        for m in rx.finditer(s.text):
            start = s.start + m.start()
            end = start + len(m.group().rstrip())
            ts = tags_by_start.get(s.start)
            if ts is not None and ts.tagged:
                end = _extend_quantity(ts, end)
            out.append(_finding("unclear_inclusion", start, end, s.text[start - s.start:end - s.start],
                                "'up to' bound without saying whether it is included"))
    return out


def _extend_quantity(ts: TaggedSentence, end: int) -> int:
    toks = ts.sentence.tokens
    i = next((k for k, t in enumerate(toks) if t.start >= end), len(toks))
    if i >= len(toks) or ts.tagged[i].pos not in _QUANTITY_HEAD:
        return end
    end = toks[i].end
    i += 1
    while i < len(toks) and ts.tagged[i].pos in _QUANTITY_TAIL:
        end = toks[i].end
        i += 1
    return end


# --- passive voice ---------------------------------------------------------

def passive_spans_regex(rendered: str) -> list[tuple[int, int]]:
    """(be-token index, VBN-token index) pairs found by the stream regex."""
    if not rendered:
        return []
    starts = [0]
    for m in re.finditer(" ", rendered):
        starts.append(m.end())
    out = []
    for m in _PASSIVE_RE.finditer(rendered):
        first = bisect.bisect_right(starts, m.start()) - 1
        last = bisect.bisect_right(starts, m.end() - 1) - 1
        out.append((first, last))
    return out


def _is_word_char(ch: str) -> bool:
    return bool(_WORD_CHAR.match(ch))


def _be_token(tok: TaggedToken) -> bool:
    lemma = tok.lemma
    return (_is_word_char(tok.word[-1]) and tok.pos[:1].upper() == "V"
            and lemma[:2].lower() == "be" and (len(lemma) == 2 or not _is_word_char(lemma[2])))


def _vbn_token(tok: TaggedToken) -> bool:
    return (tok.pos.upper() == "VBN" and all(_is_word_char(c) for c in tok.word)
            and _is_word_char(tok.lemma[0]))


def passive_spans_structured(tagged: Sequence[TaggedToken]) -> list[tuple[int, int]]:
    """Token-level version of the stream regex.

    A "be" token (lemma "be", a V* tag) is followed by any run of tokens
    whose tag does not start with VB, closed by a VBN token. The scan stops
    at the first VB* token after the "be" token: it matches only if that
    token is a VBN. Matching resumes after the VBN. Equivalent to the regex
    for tags drawn from the Penn set (no tag begins with "be").
    """
    out = []
    n = len(tagged)
    i = 0
    while i < n:
        tok = tagged[i]
        if not _be_token(tok):
            i += 1
            continue
        # a lemma like "be-x" needs at least one intermediate token
        min_gap = 0 if len(tok.lemma) == 2 else 1
        j = i + 1
        while j < n and not tagged[j].pos.upper().startswith("VB"):
            j += 1
        if j < n and j - i - 1 >= min_gap and _vbn_token(tagged[j]):
            out.append((i, j))
            i = j + 1
        else:
            i += 1
    return out


def lint_passive_voice(tagged_sentences: Sequence[TaggedSentence] | str,
                       matcher: str = "regex") -> list[Finding]:
    """Findings span from the "be" token through the participle.

    ``tagged_sentences`` may also be a rendered stream, in which case the
    offsets are token indices into it. ``matcher`` picks the regex or the
    structured implementation.
    """
    if isinstance(tagged_sentences, str):
        tokens = parse_tagged_stream(tagged_sentences)
        spans = passive_spans_regex(tagged_sentences) if matcher == "regex" \
            else passive_spans_structured(tokens)
        return [_finding("passive_voice", a, f + 1,
                         " ".join(t.word for t in tokens[a:f + 1]), _PASSIVE_MSG)
                for a, f in spans]
    out = []
    for ts in tagged_sentences:
        if not ts.tagged:
            continue
        if matcher == "regex":
            spans = passive_spans_regex(render_tagged_stream(ts.tagged))
        elif matcher == "structured":
            spans = passive_spans_structured(ts.tagged)
        else:
            raise ValueError(f"unknown matcher {matcher!r}")
        toks = ts.sentence.tokens
        base = ts.sentence.start
        for a, f in spans:
            start, end = toks[a].start, toks[f].end
            out.append(_finding("passive_voice", start, end,
                                ts.sentence.text[start - base:end - base], _PASSIVE_MSG))
    return out


_PASSIVE_MSG = "passive construction hides who performs the action"


# --- nominalisations -------------------------------------------------------

def lint_derived_nominals(tagged_sentences: Sequence[TaggedSentence],
                          lexicon: HypernymLexicon | None,
                          config: RuleConfig = DEFAULT_CONFIG) -> list[Finding]:
    if lexicon is None:
        raise LexiconNotLoadedError("derived-nominal rule needs a hypernym lexicon")
    out = []
    for ts in tagged_sentences:
        for tok, tt in zip(ts.sentence.tokens, ts.tagged):
            if tt.pos not in ("NN", "NNS"):
                continue
            lemma = tt.lemma.lower()
            if not lemma.endswith(config.derived_suffixes):
                continue
            if lexicon.is_action_like(lemma, config.action_labels):
                out.append(_finding("derived_nominal", tok.start, tok.end, tok.text,
                                    f"'{tok.text}' packs an action into a noun"))
    return out


def lint_gerundive_nominals(tagged_sentences: Sequence[TaggedSentence]) -> list[Finding]:
    out = []
    for ts in tagged_sentences:
        for i, (tok, tt) in enumerate(zip(ts.sentence.tokens, ts.tagged)):
            if tt.pos == "VBG" and classify_vbg_role(ts.tagged, i) is VbgRole.NOMINAL:
                out.append(_finding("gerundive_nominal", tok.start, tok.end, tok.text,
                                    f"'{tok.text}' is an -ing form used as a noun"))
    return out


# --- composition -----------------------------------------------------------

_TAG_RULES = {"unclear_inclusion", "passive_voice", "derived_nominal", "gerundive_nominal"}


def lint_text(raw: str, config: RuleConfig = DEFAULT_CONFIG, *,
              lexicon: HypernymLexicon | None = None, tagger=None, issue_key: str = "",
              field_name: str = "description", source_id: str = "") -> list[Finding]:
    """Run the enabled rules on raw text; spans refer to ``raw``."""
    if not raw or not raw.strip():
        return []
    rules = config.enabled_rules
    clean = strip_markup(raw)
    sentences = split_sentences(clean, config.abbreviations)
    tagged = tag_sentences(sentences, tagger) if rules & _TAG_RULES else []
    found: list[Finding] = []
    if "dangerous_plural" in rules:
        found += lint_dangerous_plurals(sentences, config)
    if "inside_behaviour" in rules:
        found += lint_inside_behaviour(sentences, config)
    if "unclear_inclusion" in rules:
        found += lint_unclear_inclusion(sentences, config, tagged)
    if "passive_voice" in rules:
        found += lint_passive_voice(tagged)
    if "derived_nominal" in rules:
        if lexicon is None:
            from .annotate import default_lexicon
            lexicon = default_lexicon()
        found += lint_derived_nominals(tagged, lexicon, config)
    if "gerundive_nominal" in rules:
        found += lint_gerundive_nominals(tagged)
    out = []
    for f in found:
        start, end = clean.original_span(f.start, f.end)
        out.append(replace(f, issue_key=issue_key, field=field_name, source_id=source_id,
                           start=start, end=end, matched_text=raw[start:end]))
    return sorted(out, key=_sort_key)


def _sort_key(f: Finding):
    return (FIELDS.index(f.field), f.source_id, f.start, f.end, RULES.index(f.rule_id))


def lint_issue(issue, config: RuleConfig = DEFAULT_CONFIG, *,
               lexicon: HypernymLexicon | None = None, tagger=None) -> list[Finding]:
    """Lint summary and description (and comments if configured)."""
    if not config.enabled_rules:
        return []
    out = lint_text(issue.summary or "", config, lexicon=lexicon, tagger=tagger,
                    issue_key=issue.key, field_name="summary")
    out += lint_text(issue.description or "", config, lexicon=lexicon, tagger=tagger,
                     issue_key=issue.key, field_name="description")
    if config.include_comments:
        # comments keep their chronological order, then span order
        for order, c in enumerate(issue.comments):
            sid = f"{order:06d}:{c.id}"
            out += lint_text(c.body, config, lexicon=lexicon, tagger=tagger,
                             issue_key=issue.key, field_name="comment", source_id=sid)
    return sorted(out, key=_sort_key)


FINDINGS_HEADER = ("key", "rule", "field", "source_id", "start", "end", "matched_text")


def findings_rows(findings: Iterable[Finding]) -> list[tuple]:
    return [(f.issue_key, f.rule_id, f.field, f.source_id, f.start, f.end, f.matched_text)
            for f in findings]


def rule_counts(findings: Iterable[Finding]) -> dict[str, int]:
    counts = {r: 0 for r in RULES}
    for f in findings:
        counts[f.rule_id] += 1
    return counts


__all__ = [
    "DEFAULT_CONFIG", "FINDINGS_HEADER", "Finding", "PASSIVE_PATTERN", "RULES",
    "RuleConfig", "TaggedSentence", "UNCLEAR_INCLUSION_GROUPED", "UNCLEAR_INCLUSION_VERBATIM",
    "findings_rows", "lint_dangerous_plurals", "lint_derived_nominals",
    "lint_gerundive_nominals", "lint_inside_behaviour", "lint_issue", "lint_passive_voice",
    "lint_text", "lint_unclear_inclusion", "passive_spans_regex", "passive_spans_structured",
    "rule_counts", "tag_sentences",
]
