"""Grammatical role of ``-ing`` (VBG) tokens from local POS context.

No dependency parser is involved; a short rule cascade stands in for the
dependency labels a parser would assign. The first rule that fires wins:

1. auxiliary: "being"/"having" directly followed (adverbs skipped) by a
   VBN or VBG, as in "is being tested".
2. root_verb: preceded (adverbs skipped) by a form of "be" or a modal,
   as in "the service is running".
3. compound: preceded by a determiner, possessive, adjective or number and
   followed by a noun, as in "the running water".
4. clausal_modifier_of_noun: directly preceded by a noun, as in
   "the process running on port 80".
5. adverbial_modifier: preceded by a comma or a subordinating word
   (while, when, by, after, ...), or opening a sentence-initial phrase that a
   comma closes before any finite verb.
6. nominal: anything else ("Powering down the radio shall ...").
"""

from __future__ import annotations

from enum import Enum
from typing import Sequence

from .stream import TaggedToken


class VbgRole(str, Enum):
    ROOT_VERB = "root_verb"
    AUXILIARY = "auxiliary"
    ADVERBIAL_MODIFIER = "adverbial_modifier"
    COMPOUND = "compound"
    CLAUSAL_MODIFIER_OF_NOUN = "clausal_modifier_of_noun"
    NOMINAL = "nominal"


ADVERBIAL_MARKERS = frozenset(
    "while when whilst by after before without since upon until once whenever".split())
_SKIP = ("RB", "RBR", "RBS")
_NOUN_TAGS = ("NN", "NNS", "NNP", "NNPS")
_PREMODIFIER_TAGS = ("DT", "PRP$", "POS", "JJ", "JJR", "JJS", "CD", "PDT", "WP$")
_FINITE_TAGS = ("VBZ", "VBD", "VBP", "MD")


def _is_be(tok: TaggedToken) -> bool:
    return tok.pos.startswith("VB") and tok.lemma.lower() == "be"


def _prev_content(tagged: Sequence[TaggedToken], index: int) -> int:
    """Index of the closest earlier token that is not an adverb (or -1)."""
    j = index - 1
    while j >= 0 and (tagged[j].pos in _SKIP or tagged[j].word.lower() in ("not", "n't")):
        j -= 1
    return j


def _next_content(tagged: Sequence[TaggedToken], index: int) -> int:
    j = index + 1
    while j < len(tagged) and tagged[j].pos in _SKIP:
        j += 1
    return j


def classify_vbg_role(tagged: Sequence[TaggedToken], index: int) -> VbgRole:
    if not 0 <= index < len(tagged):
        raise IndexError(f"token index {index} out of range for {len(tagged)} tokens")
    tok = tagged[index]
    if tok.pos != "VBG":
        raise ValueError(f"token {index} ({tok.word!r}) is tagged {tok.pos}, not VBG")

    word = tok.word.lower()
    nxt = _next_content(tagged, index)
    if word in ("being", "having") and nxt < len(tagged) and tagged[nxt].pos in ("VBN", "VBG"):
        return VbgRole.AUXILIARY

    prev = _prev_content(tagged, index)
    if prev >= 0 and (_is_be(tagged[prev]) or tagged[prev].pos == "MD"):
        return VbgRole.ROOT_VERB

    before = tagged[index - 1] if index > 0 else None
    after = tagged[index + 1] if index + 1 < len(tagged) else None
    if (before is not None and before.pos in _PREMODIFIER_TAGS
            and after is not None and after.pos in _NOUN_TAGS):
        return VbgRole.COMPOUND

    if before is not None and before.pos in _NOUN_TAGS:
        return VbgRole.CLAUSAL_MODIFIER_OF_NOUN

    if before is not None and (before.word == "," or before.word.lower() in ADVERBIAL_MARKERS):
        return VbgRole.ADVERBIAL_MODIFIER
    if index == 0 or (before is not None and before.pos in ("``", "(", "-LRB-", ":")):
        for later in tagged[index + 1:]:
            if later.pos in _FINITE_TAGS:
                break
            if later.word == ",":
                return VbgRole.ADVERBIAL_MODIFIER

    return VbgRole.NOMINAL


def vbg_roles(tagged: Sequence[TaggedToken]) -> dict[int, VbgRole]:
    """Role of every VBG token, keyed by token index."""
    return {i: classify_vbg_role(tagged, i) for i, tok in enumerate(tagged) if tok.pos == "VBG"}
