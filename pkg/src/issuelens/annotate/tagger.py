"""Averaged-perceptron part-of-speech tagger (Penn Treebank tag set).

The model is a greedy left-to-right tagger in the style popularised by
Collins (2002) and Honnibal's "A good POS tagger in about 200 lines".
Weights ship with the package as ``data/tagger-weights.json.gz`` and are
produced by ``scripts/train_tagger.py``.
"""

from __future__ import annotations

import gzip
import json
import random
from collections import defaultdict
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

WEIGHTS_FORMAT = "issuelens-perceptron"
WEIGHTS_VERSION = 1

START = ("-START-", "-START2-")
END = ("-END-", "-END2-")


class AveragedPerceptron:
    def __init__(self) -> None:
        self.weights: dict[str, dict[str, float]] = {}
        self.classes: set[str] = set()
        self._totals: dict[tuple[str, str], float] = defaultdict(float)
        self._tstamps: dict[tuple[str, str], int] = defaultdict(int)
        self.i = 0

    def predict(self, features: dict[str, int]) -> str:
        scores: dict[str, float] = defaultdict(float)
        for feat, value in features.items():
            if value == 0 or feat not in self.weights:
                continue
            for label, weight in self.weights[feat].items():
                scores[label] += value * weight
        # ties broken by label so results never depend on set order
        return max(self.classes, key=lambda label: (scores[label], label))

    def update(self, truth: str, guess: str, features: Iterable[str]) -> None:
        self.i += 1
        if truth == guess:
            return
        for f in features:
            weights = self.weights.setdefault(f, {})
            self._update_feat(truth, f, weights.get(truth, 0.0), 1.0)
            self._update_feat(guess, f, weights.get(guess, 0.0), -1.0)

    def _update_feat(self, c: str, f: str, w: float, v: float) -> None:
        param = (f, c)
        self._totals[param] += (self.i - self._tstamps[param]) * w
        self._tstamps[param] = self.i
        self.weights[f][c] = w + v

    def average_weights(self) -> None:
        for feat, weights in self.weights.items():
            averaged = {}
            for clas, weight in weights.items():
                param = (feat, clas)
                total = self._totals[param] + (self.i - self._tstamps[param]) * weight
                value = round(total / self.i, 3)
                if value:
                    averaged[clas] = value
            self.weights[feat] = averaged


def _normalize(word: str) -> str:
    if "-" in word and word[0] != "-":
        return "!HYPHEN"
    if word.isdigit() and len(word) == 4:
        return "!YEAR"
    if word and word[0].isdigit():
        return "!DIGITS"
    return word.lower()


def _shape(word: str) -> str:
    if word.isupper() and len(word) > 1:
        return "UPPER"
    if word[:1].isupper():
        return "Title"
    if any(ch.isdigit() for ch in word):
        return "digit"
    return "lower"


class PerceptronTagger:
    """Greedy averaged-perceptron tagger.

    ``tagdict`` maps frequent, unambiguous words straight to their tag and
    bypasses the model for them. ``lexicon`` (word -> most likely tag, e.g.
    a Brill lexicon) only contributes features.
    """

    def __init__(self, model: AveragedPerceptron | None = None,
                 tagdict: dict[str, str] | None = None,
                 lexicon: dict[str, str] | None = None) -> None:
        self.model = model or AveragedPerceptron()
        self.tagdict = tagdict or {}
        self.lexicon = lexicon or {}

    def _lex(self, word: str) -> str:
        if word in ("-START-", "-START2-", "-END-", "-END2-"):
            return word
        tag = self.lexicon.get(word) or self.lexicon.get(word.lower())
        return tag or "?"

    def tag(self, tokens: Sequence[str]) -> list[str]:
        prev, prev2 = START
        tags = []
        context = START + tuple(_normalize(w) for w in tokens) + END
        lex = START + tuple(self._lex(w) for w in tokens) + END
        for i, word in enumerate(tokens):
            tag = self.tagdict.get(word)
            if tag is None:
                features = self._features(i, word, context, lex, prev, prev2, i == 0)
                tag = self.model.predict(features)
            tags.append(tag)
            prev2, prev = prev, tag
        return tags

    def _features(self, i: int, word: str, context: tuple[str, ...], lex: tuple[str, ...],
                  prev: str, prev2: str, first: bool) -> dict[str, int]:
        i += len(START)
        feats: dict[str, int] = defaultdict(int)

        def add(name: str, *args: str) -> None:
            feats[" ".join((name,) + args)] += 1

        w = context[i]
        add("bias")
        add("i suffix", w[-3:])
        add("i suffix2", w[-2:])
        add("i pref1", w[:1])
        add("i shape", _shape(word) + ("^" if first else ""))
        add("i-1 tag", prev)
        add("i-2 tag", prev2)
        add("i tag+i-2 tag", prev, prev2)
        add("i word", w)
        add("i-1 tag+i word", prev, w)
        add("i-1 word", context[i - 1])
        add("i-1 suffix", context[i - 1][-3:])
        add("i-2 word", context[i - 2])
        add("i+1 word", context[i + 1])
        add("i+1 suffix", context[i + 1][-3:])
        add("i+2 word", context[i + 2])
        if self.lexicon:
            add("i lex", lex[i])
            add("i lex+i-1 tag", lex[i], prev)
            add("i lex+i+1 lex", lex[i], lex[i + 1])
            add("i-1 lex", lex[i - 1])
            add("i+1 lex", lex[i + 1])
        return feats

    def train(self, sentences: list[list[tuple[str, str]]], n_iter: int = 5,
              seed: int = 0) -> None:
        self._make_tagdict(sentences)
        self.model.classes = {t for sent in sentences for _, t in sent}
        rng = random.Random(seed)
        sentences = list(sentences)
        for _ in range(n_iter):
            for sent in sentences:
                words = [w for w, _ in sent]
                prev, prev2 = START
                context = START + tuple(_normalize(w) for w in words) + END
                lex = START + tuple(self._lex(w) for w in words) + END
                for i, (word, truth) in enumerate(sent):
                    guess = self.tagdict.get(word)
                    if guess is None:
                        feats = self._features(i, word, context, lex, prev, prev2, i == 0)
                        guess = self.model.predict(feats)
                        self.model.update(truth, guess, feats)
                    prev2, prev = prev, guess
            rng.shuffle(sentences)
        self.model.average_weights()

    def _make_tagdict(self, sentences: list[list[tuple[str, str]]],
                      freq_thresh: int = 20, ambiguity_thresh: float = 0.97) -> None:
        counts: dict[str, dict[str, int]] = defaultdict(lambda: defaultdict(int))
        for sent in sentences:
            for word, tag in sent:
                counts[word][tag] += 1
        for word, tag_freqs in counts.items():
            tag, mode = max(tag_freqs.items(), key=lambda item: (item[1], item[0]))
            n = sum(tag_freqs.values())
            if n >= freq_thresh and mode / n >= ambiguity_thresh:
                self.tagdict[word] = tag

    def to_dict(self) -> dict:
        return {
            "format": WEIGHTS_FORMAT,
            "version": WEIGHTS_VERSION,
            "classes": sorted(self.model.classes),
            "tagdict": dict(sorted(self.tagdict.items())),
            "lexicon": dict(sorted(self.lexicon.items())),
            "weights": {f: dict(sorted(w.items())) for f, w in sorted(self.model.weights.items()) if w},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PerceptronTagger":
        if data.get("format") != WEIGHTS_FORMAT:
            raise ValueError("not an issuelens perceptron weight table")
        if data.get("version") != WEIGHTS_VERSION:
            raise ValueError(f"unsupported weight table version {data.get('version')!r}")
        model = AveragedPerceptron()
        model.classes = set(data["classes"])
        model.weights = data["weights"]
        return cls(model, data["tagdict"], data.get("lexicon"))

    def save(self, path: str | Path) -> None:
        path = Path(path)
        opener = gzip.open if path.suffix == ".gz" else open
        with opener(path, "wt", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, separators=(",", ":"))

    @classmethod
    def load(cls, path: str | Path) -> "PerceptronTagger":
        path = Path(path)
        opener = gzip.open if path.suffix == ".gz" else open
        with opener(path, "rt", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


_DEFAULT: PerceptronTagger | None = None


def default_tagger() -> PerceptronTagger:
    """Return the bundled tagger, loading it on first use."""
    global _DEFAULT
    if _DEFAULT is None:
        ref = resources.files("issuelens").joinpath("data/tagger-weights.json.gz")
        with resources.as_file(ref) as path:
            _DEFAULT = PerceptronTagger.load(path)
    return _DEFAULT


def read_brill_lexicon(path: str | Path) -> dict[str, str]:
    """Read ``word TAG [TAG ...]`` lines; the first tag is kept."""
    lexicon = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith(";;;"):
                continue
            parts = line.split()
            if len(parts) >= 2:
                lexicon[parts[0]] = parts[1]
    return lexicon


def read_slash_tagged(path: str | Path) -> list[list[tuple[str, str]]]:
    """Read ``word/TAG word/TAG ...`` lines, one sentence per line."""
    sentences = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            sent = []
            for item in line.split():
                word, sep, tag = item.rpartition("/")
                if not sep or not word:
                    continue
                sent.append((word, tag))
            if sent:
                sentences.append(sent)
    return sentences
