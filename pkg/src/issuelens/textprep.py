"""Markup stripping, sentence splitting and tokenisation for issue text."""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass, field

DEFAULT_OVERLONG_LIMIT = 10_000

# A period never ends a sentence when the whitespace-delimited chunk that
# ends with it (lowercased, leading brackets/quotes dropped) is listed here.
DEFAULT_ABBREVIATIONS = frozenset({
    "e.g.", "i.e.", "etc.", "vs.", "cf.", "approx.", "incl.", "fig.", "no.",
    "nr.", "mr.", "mrs.", "ms.", "dr.", "prof.", "st.", "jr.", "sr.", "inc.",
    "ltd.", "co.", "jan.", "feb.", "mar.", "apr.", "jun.", "jul.", "aug.",
    "sep.", "sept.", "oct.", "nov.", "dec.", "ver.", "approx.", "min.", "max.",
})

REGION_KINDS = ("code_block", "noformat_block", "url", "image_ref",
                "header_markup", "table_markup")

_PATTERNS = [
    ("code_block", re.compile(r"\{code(?::[^}\n]*)?\}.*?\{code\}", re.S)),
    ("code_block", re.compile(r"```.*?```", re.S)),
    ("noformat_block", re.compile(r"\{noformat(?::[^}\n]*)?\}.*?\{noformat\}", re.S)),
    ("image_ref", re.compile(
        r"![^!\s|][^!\n|]*\.(?:png|jpe?g|gif|bmp|svg|webp)(?:\|[^!\n]*)?!", re.I)),
    ("image_ref", re.compile(r"\[\^[^\]\n]+\]")),
    ("url", re.compile(r"(?:https?|ftp)://[^\s\]|]*[^\s\]|.,;:!?)'\"]|www\.[^\s\]|]*[^\s\]|.,;:!?)'\"]",
                       re.I)),
    ("header_markup", re.compile(r"^[ \t]*h[1-6]\.[ \t]?", re.M)),
]

_TABLE_ROW = re.compile(r"^[ \t]*\|", re.M)


@dataclass(frozen=True)
class Region:
    kind: str
    start: int
    end: int


@dataclass(frozen=True)
class CleanText:
    """Text with markup removed.

    ``removed_regions`` hold spans into the original text. ``source_index``
    maps each character of ``text`` to its offset in the original.
    """

    text: str
    removed_regions: tuple[Region, ...] = ()
    original: str = ""
    source_index: tuple[int, ...] = field(default=(), repr=False)

    def to_original(self, offset: int) -> int:
        """Map a clean-text offset (0..len(text)) back to the original text."""
        if not self.source_index:
            return offset
        if offset >= len(self.text):
            if not self.text:
                return len(self.original)
            return self.source_index[-1] + 1
        return self.source_index[offset]

    def original_span(self, start: int, end: int) -> tuple[int, int]:
        if end <= start:
            o = self.to_original(start)
            return o, o
        return self.to_original(start), self.to_original(end - 1) + 1


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int


@dataclass(frozen=True)
class Sentence:
    text: str
    start: int
    end: int
    tokens: tuple[Token, ...]


def _table_sigils(text: str) -> list[tuple[int, int]]:
    spans = []
    for line_match in re.finditer(r"[^\n]+", text):
        line = line_match.group()
        if not _TABLE_ROW.match(line):
            continue
        base = line_match.start()
        for m in re.finditer(r"\|\|?", line):
            spans.append((base + m.start(), base + m.end()))
    return spans


def _find_regions(text: str) -> list[tuple[str, int, int]]:
    found = []
    for kind, pattern in _PATTERNS:
        for m in pattern.finditer(text):
            if m.end() > m.start():
                found.append((kind, m.start(), m.end()))
    found.extend(("table_markup", s, e) for s, e in _table_sigils(text))
    # earliest start wins, then the longest
    found.sort(key=lambda r: (r[1], -r[2]))
    chosen = []
    last_end = -1
    for kind, start, end in found:
        if start >= last_end:
            chosen.append((kind, start, end))
            last_end = end
    return chosen


def strip_markup(raw: str) -> CleanText:
    """Remove Jira wiki / Markdown markup and URLs from ``raw``.

    Removed spans are deleted outright except table cell sigils, which are
    replaced by one space so neighbouring cells do not fuse into one word.
    Passes repeat until no markup is left, so the result is a fixpoint.
    """
    text = raw
    index = list(range(len(raw)))
    regions: list[Region] = []
    while True:
        found = _find_regions(text)
        if not found:
            break
        pieces = []
        new_index: list[int] = []
        pos = 0
        for kind, start, end in found:
            pieces.append(text[pos:start])
            new_index.extend(index[pos:start])
            if kind == "table_markup":
                pieces.append(" ")
                new_index.append(index[start])
            pos = end
            ostart = index[start]
            oend = index[end - 1] + 1
            # absorb regions from earlier passes that this one encloses
            regions = [r for r in regions if r.end <= ostart or r.start >= oend]
            regions.append(Region(kind, ostart, oend))
        pieces.append(text[pos:])
        new_index.extend(index[pos:])
        text = "".join(pieces)
        index = new_index
    regions.sort(key=lambda r: r.start)
    return CleanText(text, tuple(regions), raw, tuple(index))


_TOKEN = re.compile(
    r"\w+?(?=n't\b)"           # "do" in "don't"
    r"|n't\b"
    r"|'(?:s|re|ve|ll|d|m)\b"  # clitics
    r"|\w+(?:[-./]\w+)*"       # words, versions, dotted names
    r"|[^\w\s]",
    re.I,
)


def tokenize_spans(text: str, offset: int = 0) -> list[Token]:
    return [Token(m.group(), m.start() + offset, m.end() + offset)
            for m in _TOKEN.finditer(text)]


def tokenize(text: str) -> list[str]:
    """Split on whitespace and punctuation; punctuation marks are tokens."""
    return [m.group() for m in _TOKEN.finditer(text)]


_TERMINAL = {".", "!", "?"}


def _chunk_before(text: str, end: int) -> str:
    start = end
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    return text[start:end].lstrip("([{\"'").lower()
_CLOSERS = {'"', "'", ")", "]", "}"}


def split_sentences(clean: CleanText | str,
                    abbreviations: frozenset[str] | set[str] = DEFAULT_ABBREVIATIONS) -> list[Sentence]:
    """Rule-based sentence splitter.

    A sentence ends at ``.``/``!``/``?`` (plus trailing closers) when the
    next character is whitespace or the end of text, unless the period
    closes a guarded chunk such as ``e.g.``. Periods inside a token
    (``v2.1``) never split. Blank lines always end a sentence.
    """
    text = clean.text if isinstance(clean, CleanText) else clean
    tokens = tokenize_spans(text)
    if not tokens:
        return []
    paragraph_breaks = [m.start() for m in re.finditer(r"\n[ \t]*\n", text)]

    def crosses_break(a: Token, b: Token) -> bool:
        i = bisect.bisect_left(paragraph_breaks, a.end)
        return i < len(paragraph_breaks) and paragraph_breaks[i] < b.start

    sentences = []
    current: list[Token] = []
    n = len(tokens)
    i = 0
    while i < n:
        tok = tokens[i]
        current.append(tok)
        boundary = False
        if tok.text in _TERMINAL:
            j = i
            while j + 1 < n and tokens[j + 1].start == tokens[j].end and (
                    tokens[j + 1].text in _TERMINAL or tokens[j + 1].text in _CLOSERS):
                j += 1
                current.append(tokens[j])
            end = tokens[j].end
            followed_by_space = end == len(text) or text[end].isspace()
            guarded = tok.text == "." and _chunk_before(text, tok.end) in abbreviations
            boundary = followed_by_space and not guarded
            i = j
        if not boundary and i + 1 < n and crosses_break(tokens[i], tokens[i + 1]):
            boundary = True
        if boundary or i == n - 1:
            start, end = current[0].start, current[-1].end
            sentences.append(Sentence(text[start:end], start, end, tuple(current)))
            current = []
        i += 1
    return sentences


def flag_overlong(clean: CleanText | str, limit: int = DEFAULT_OVERLONG_LIMIT) -> bool:
    """True when the text is strictly longer than ``limit`` characters."""
    if limit <= 0:
        raise ValueError("limit must be positive")
    text = clean.text if isinstance(clean, CleanText) else clean
    return len(text) > limit
