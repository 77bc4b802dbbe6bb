"""Lemmatiser: WordNet-style detachment rules checked against a lemma index.

Irregular forms come from exception lists; words missing from the index
fall back to suffix heuristics. The index (``data/morph.tsv.gz``) is built
from WordNet 3.0 by ``scripts/build_morph_data.py``.
"""

from __future__ import annotations

import gzip
import re
from functools import lru_cache
from importlib import resources

_BE = {"am", "is", "are", "was", "were", "be", "been", "being", "'s", "'re", "'m", "ai"}

_IRREGULAR_VERBS = {
    "has": "have", "had": "have", "having": "have", "'ve": "have", "'d": "have",
    "does": "do", "did": "do", "done": "do", "doing": "do",
    "went": "go", "gone": "go", "goes": "go",
    "made": "make", "got": "get", "gotten": "get", "gave": "give", "given": "give",
    "took": "take", "taken": "take", "saw": "see", "seen": "see", "came": "come",
    "knew": "know", "known": "know", "found": "find", "told": "tell", "said": "say",
    "thought": "think", "brought": "bring", "bought": "buy", "built": "build",
    "sent": "send", "spent": "spend", "left": "leave", "kept": "keep", "held": "hold",
    "ran": "run", "began": "begin", "begun": "begin", "wrote": "write", "written": "write",
    "broke": "break", "broken": "break", "chose": "choose", "chosen": "choose",
    "drove": "drive", "driven": "drive", "fell": "fall", "fallen": "fall",
    "forgot": "forget", "forgotten": "forget", "froze": "freeze", "frozen": "freeze",
    "hid": "hide", "hidden": "hide", "led": "lead", "lost": "lose", "meant": "mean",
    "met": "meet", "paid": "pay", "read": "read", "rode": "ride", "rose": "rise",
    "risen": "rise", "sold": "sell", "shown": "show", "shook": "shake", "shot": "shoot",
    "stood": "stand", "stole": "steal", "stolen": "steal", "struck": "strike",
    "taught": "teach", "thrown": "throw", "threw": "throw", "understood": "understand",
    "won": "win", "wore": "wear", "worn": "wear", "woke": "wake", "woken": "wake",
    "fed": "feed", "felt": "feel", "fought": "fight", "fled": "flee", "flew": "fly",
    "flown": "fly", "grew": "grow", "grown": "grow", "heard": "hear", "hung": "hang",
    "laid": "lay", "lay": "lie", "lain": "lie", "lit": "light", "slept": "sleep",
    "spoke": "speak", "spoken": "speak", "swam": "swim", "swum": "swim",
    "bound": "bind", "bent": "bend", "dealt": "deal", "dug": "dig", "drew": "draw",
    "drawn": "draw", "drank": "drink", "drunk": "drink", "ate": "eat", "eaten": "eat",
    "forbade": "forbid", "forbidden": "forbid", "sought": "seek", "sank": "sink",
    "sunk": "sink", "spun": "spin", "split": "split", "spread": "spread", "stuck": "stick",
    "undid": "undo", "undone": "undo", "upheld": "uphold", "withdrew": "withdraw",
    "withdrawn": "withdraw", "rebuilt": "rebuild", "rewritten": "rewrite", "rewrote": "rewrite",
    "overridden": "override", "overrode": "override", "mistaken": "mistake", "mistook": "mistake",
    "shut": "shut", "set": "set", "put": "put", "cut": "cut", "hit": "hit", "let": "let",
    "quit": "quit", "reset": "reset", "cast": "cast", "broadcast": "broadcast",
    "could": "can", "would": "will", "should": "shall", "might": "may", "wo": "will",
    "ca": "can", "n't": "not",
}

_IRREGULAR_NOUNS = {
    "children": "child", "people": "person", "men": "man", "women": "woman",
    "mice": "mouse", "feet": "foot", "teeth": "tooth", "geese": "goose",
    "data": "data", "criteria": "criterion", "indices": "index", "matrices": "matrix",
    "vertices": "vertex", "analyses": "analysis", "theses": "thesis", "bases": "basis",
    "series": "series", "species": "species", "news": "news", "status": "status",
    "statuses": "status", "aliases": "alias", "buses": "bus", "lives": "life",
    "knives": "knife", "leaves": "leaf", "halves": "half", "selves": "self",
}

_VOWELS = set("aeiou")
# stems that need an "e" back after "-ed"/"-ing" removal: creat(e), us(e) ...
_E_ENDINGS = ("at", "iz", "is", "ur", "bl", "pl", "tl", "dl", "gl", "kl", "c", "v", "u",
              "rg", "ng", "dg", "ys", "as", "os", "rs", "ns", "ps", "ud", "id", "od", "ok",
              "ab", "ib", "ob", "ub", "ar", "ir", "or", "ad", "ed", "ag", "ov", "ip", "ap",
              "op", "it", "ot", "ut", "im", "om", "um", "in", "on", "un")
_NO_E = ("ing",)


def _restore_e(stem: str) -> str:
    if len(stem) < 2:
        return stem
    if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] not in "lsz" and stem[-1] not in _VOWELS:
        return stem[:-1]  # stopp -> stop
    if stem.endswith(("ss", "ll", "er", "en", "on", "ow", "ew", "aw", "ay", "ey", "oy", "nd",
                      "st", "ct", "ft", "pt", "lt", "nt", "rt", "sh", "ch", "th", "ck", "wn",
                      "rm", "lm", "rn", "rl", "sk", "sm", "mp", "lp", "rd", "ld", "rk", "lk",
                      "nk", "eat", "oat", "ain", "ead", "oad", "eed", "ood", "eel", "ail",
                      "oil", "uit", "eck", "rb", "mb", "cl", "it", "et", "ord", "ard", "ert", "ess")):
        return stem
    if stem.endswith(_E_ENDINGS):
        return stem + "e"
    return stem


_RULES = {
    "n": (("s", ""), ("ses", "s"), ("xes", "x"), ("zes", "z"), ("ches", "ch"),
          ("shes", "sh"), ("men", "man"), ("ies", "y")),
    "VBZ": (("s", ""), ("ies", "y"), ("es", "e"), ("es", "")),
    "VBD": (("ed", "e"), ("ed", "")),
    "VBN": (("ed", "e"), ("ed", "")),
    "VBG": (("ing", "e"), ("ing", "")),
}


_CVC = re.compile(r"^[^aeiou]*[aeiou][^aeiouwxy]$")


@lru_cache(maxsize=1)
def _morph_data() -> tuple[dict[str, frozenset[str]], dict[str, dict[str, str]]]:
    index: dict[str, set[str]] = {"n": set(), "v": set()}
    exc: dict[str, dict[str, str]] = {"n": {}, "v": {}}
    ref = resources.files("issuelens").joinpath("data/morph.tsv.gz")
    with resources.as_file(ref) as path, gzip.open(path, "rt", encoding="utf-8") as fh:
        for line in fh:
            parts = line.rstrip("\n").split("\t")
            if len(parts) == 2:
                index[parts[0]].add(parts[1])
            elif len(parts) == 3:
                exc[parts[0]].setdefault(parts[1], parts[2])
    return {k: frozenset(v) for k, v in index.items()}, exc


def _morphy(w: str, kind: str, rules) -> str | None:
    index, exc = _morph_data()
    if w in exc[kind]:
        return exc[kind][w]
    found = [w[: len(w) - len(old)] + new for old, new in rules
             if w.endswith(old) and len(w) > len(old)]
    found = [c for c in found if c in index[kind]]
    if len(found) > 1 and w.endswith(("ed", "ing")):
        # a one-syllable consonant-vowel-consonant base doubles its final
        # consonant ("hopping"), so "hoping" points to "hope", not "hop"
        found = [c for c in found if not _CVC.match(c)] or found
    # otherwise take the shortest valid base ("singing" -> "sing"), as NLTK does
    return min(found, key=lambda c: (len(c), c)) if found else None


def _verb_lemma(w: str, pos: str) -> str:
    if w in _IRREGULAR_VERBS:
        return _IRREGULAR_VERBS[w]
    if pos in _RULES:
        found = _morphy(w, "v", _RULES[pos])
        if found:
            return found
    if pos in ("VBD", "VBN"):
        if w.endswith("ied") and len(w) > 4:
            return w[:-3] + "y"
        if w.endswith("ed") and len(w) > 3:
            stem = w[:-2]
            if stem.endswith("e"):
                return stem + "d" if len(stem) < 3 else stem
            return _restore_e(stem)
    elif pos == "VBG":
        if w.endswith("ing") and len(w) > 4:
            stem = w[:-3]
            if stem.endswith("y") or stem.endswith(_NO_E):
                return stem
            return _restore_e(stem)
    elif pos == "VBZ":
        if w.endswith("ies") and len(w) > 4:
            return w[:-3] + "y"
        if w.endswith(("sses", "shes", "ches", "xes", "zes", "oes")):
            return w[:-2]
        if w.endswith("s") and not w.endswith(("ss", "us", "is")) and len(w) > 2:
            return w[:-1]
    return w


def _noun_lemma(w: str) -> str:
    if w in _IRREGULAR_NOUNS:
        return _IRREGULAR_NOUNS[w]
    found = _morphy(w, "n", _RULES["n"])
    if found:
        return found
    if w.endswith("ies") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith(("sses", "shes", "ches", "xes", "zes")):
        return w[:-2]
    if w.endswith("s") and not w.endswith(("ss", "us", "is")) and len(w) > 2:
        return w[:-1]
    return w


def lemmatize(word: str, pos: str) -> str:
    """Lowercase base form of ``word`` given its Penn tag."""
    w = word.lower()
    if not w:
        return word
    if w in _BE and pos.startswith(("VB", "MD")):
        return "be"
    if pos == "NNS" or pos == "NNPS":
        return _noun_lemma(w)
    if pos.startswith("VB") or pos == "MD":
        return _verb_lemma(w, pos)
    if pos in ("JJR", "JJS", "RBR", "RBS"):
        if w in ("better", "best"):
            return "good"
        if w in ("worse", "worst"):
            return "bad"
    return w
