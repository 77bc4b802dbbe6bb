"""Externally produced POS annotations.

Format: one sentence per block, one ``token<TAB>TAG`` line per token (an
optional third column carries the lemma), blocks separated by blank lines.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from .lemma import lemmatize
from .stream import TaggedToken


class SidecarError(ValueError):
    pass


def read_sidecar(path: str | Path) -> list[list[TaggedToken]]:
    sentences: list[list[TaggedToken]] = []
    current: list[TaggedToken] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip():
                if current:
                    sentences.append(current)
                    current = []
                continue
            cols = line.split("\t")
            if len(cols) not in (2, 3) or not all(cols):
                raise SidecarError(f"{path}:{lineno}: expected token<TAB>TAG[<TAB>lemma]")
            word, tag = cols[0], cols[1]
            lemma = cols[2] if len(cols) == 3 else lemmatize(word, tag)
            current.append(TaggedToken(word, tag, lemma or word.lower()))
    if current:
        sentences.append(current)
    return sentences


class SidecarTagger:
    """Serves tags from a sidecar file for the exact token sequences it holds.

    Drop-in for ``PerceptronTagger.tag``; unknown sentences raise unless a
    fallback tagger is given.
    """

    def __init__(self, sentences: Sequence[Sequence[TaggedToken]], fallback=None) -> None:
        self._tags = {tuple(t.word for t in s): [t.pos for t in s] for s in sentences}
        self.fallback = fallback

    @classmethod
    def from_file(cls, path: str | Path, fallback=None) -> "SidecarTagger":
        return cls(read_sidecar(path), fallback)

    def tag(self, tokens: Sequence[str]) -> list[str]:
        tags = self._tags.get(tuple(tokens))
        if tags is not None:
            return list(tags)
        if self.fallback is None:
            raise SidecarError(f"sentence not in sidecar: {' '.join(tokens)[:80]!r}")
        return self.fallback.tag(tokens)
