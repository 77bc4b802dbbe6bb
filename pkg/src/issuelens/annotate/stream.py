"""Tagged tokens and their ``word°TAG°lemma`` stream encoding."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .lemma import lemmatize
from .tagger import PerceptronTagger, default_tagger

DELIM = "°"

PENN_TAGS = frozenset("""
CC CD DT EX FW IN JJ JJR JJS LS MD NN NNS NNP NNPS PDT POS PRP PRP$ RB RBR RBS RP
SYM TO UH VB VBD VBG VBN VBP VBZ WDT WP WP$ WRB
. , : `` '' ( ) # $ -LRB- -RRB- HYPH NFP
""".split())


class StreamError(ValueError):
    """Raised for tokens that cannot be encoded or streams that cannot be decoded."""


@dataclass(frozen=True)
class TaggedToken:
    word: str
    pos: str
    lemma: str


def pos_tag(tokens: Sequence[str], tagger: PerceptronTagger | None = None) -> list[TaggedToken]:
    """Tag and lemmatise a token list with the bundled (or a given) tagger."""
    if not tokens:
        raise ValueError("pos_tag needs at least one token")
    tagger = tagger or default_tagger()
    tags = tagger.tag(list(tokens))
    return [TaggedToken(w, t, lemmatize(w, t) or w) for w, t in zip(tokens, tags)]


def _check_part(value: str, what: str) -> None:
    if not value:
        raise StreamError(f"empty {what}")
    if DELIM in value or any(ch.isspace() for ch in value):
        raise StreamError(f"{what} {value!r} contains the delimiter or whitespace")


def render_tagged_stream(tagged: Sequence[TaggedToken]) -> str:
    """Encode tokens as ``word°TAG°lemma`` joined by single spaces."""
    parts = []
    for tok in tagged:
        _check_part(tok.word, "word")
        _check_part(tok.pos, "tag")
        _check_part(tok.lemma, "lemma")
        parts.append(f"{tok.word}{DELIM}{tok.pos}{DELIM}{tok.lemma}")
    return " ".join(parts)


def parse_tagged_stream(rendered: str) -> list[TaggedToken]:
    if not rendered:
        return []
    out = []
    for i, item in enumerate(rendered.split(" ")):
        fields = item.split(DELIM)
        if len(fields) != 3 or not all(fields):
            raise StreamError(f"token {i} ({item!r}) is not word{DELIM}TAG{DELIM}lemma")
        out.append(TaggedToken(*fields))
    return out


def sanitize_word(word: str) -> str:
    """Replace characters the stream cannot carry."""
    cleaned = "".join("_" if ch == DELIM or ch.isspace() else ch for ch in word)
    return cleaned or "_"
