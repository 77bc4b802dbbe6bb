"""Noun hypernym paths from a WordNet-style database or a flat TSV.

A path lists concept labels (the uppercased head word of each synset) from
the sense itself up to a root concept, e.g.
``DEPLOYMENT > ACTIVITY > ACT > EVENT > ...``. The bundled lexicon
(``data/hypernyms.tsv.gz``) is derived from WordNet 3.0 by
``scripts/build_hypernym_lexicon.py``.
"""

from __future__ import annotations

import gzip
from collections import defaultdict
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

ACTION_LABELS = ("EVENT", "PROCESS", "ACT")
PATH_SEP = ">"

Path_ = tuple[str, ...]


class LexiconNotLoadedError(RuntimeError):
    pass


def _key(lemma: str) -> str:
    return lemma.strip().lower().replace(" ", "_")


class HypernymLexicon:
    """Immutable map from noun lemma to its set of hypernym paths."""

    def __init__(self, paths: Mapping[str, Iterable[Path_]]) -> None:
        self._paths = {_key(k): frozenset(tuple(p) for p in v) for k, v in paths.items()}
        self._raw: dict[str, list[str]] = {}

    def __len__(self) -> int:
        return len(self._paths.keys() | self._raw.keys())

    def __contains__(self, lemma: str) -> bool:
        key = _key(lemma)
        return key in self._paths or key in self._raw

    def hypernym_paths(self, lemma: str) -> frozenset[Path_]:
        key = _key(lemma)
        if key not in self._paths and key in self._raw:
            # TSV entries are split on first use so loading stays cheap;
            # the cache fill is idempotent, so concurrent readers are fine
            self._paths[key] = frozenset(
                tuple(lab.strip().upper() for lab in c.split(PATH_SEP)) for c in self._raw[key])
        return self._paths.get(key, frozenset())

    def is_action_like(self, lemma: str, labels: Iterable[str] = ACTION_LABELS) -> bool:
        """True if any sense has one of ``labels`` somewhere on its path."""
        wanted = {lab.upper() for lab in labels}
        return any(wanted.intersection(path) for path in self.hypernym_paths(lemma))

    def items(self):
        return sorted((k, self.hypernym_paths(k)) for k in self._paths.keys() | self._raw.keys())

    @classmethod
    def from_tsv(cls, path: str | Path) -> "HypernymLexicon":
        """Read ``lemma<TAB>LABEL>LABEL>...`` lines (gzip if the name ends in .gz)."""
        path = Path(path)
        opener = gzip.open if path.suffix == ".gz" else open
        raw: dict[str, list[str]] = defaultdict(list)
        with opener(path, "rt", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                lemma, sep, chain = line.partition("\t")
                if not sep or not chain:
                    raise ValueError(f"{path}:{lineno}: expected lemma<TAB>path")
                raw[_key(lemma)].append(chain)
        lexicon = cls({})
        lexicon._raw = dict(raw)
        return lexicon

    def to_tsv(self, path: str | Path) -> None:
        path = Path(path)
        data = "".join(f"{lemma}\t{PATH_SEP.join(p)}\n"
                       for lemma, paths in self.items() for p in sorted(paths)).encode("utf-8")
        if path.suffix == ".gz":
            data = gzip.compress(data, mtime=0)  # reproducible bytes
        path.write_bytes(data)

    @classmethod
    def from_wordnet(cls, dict_dir: str | Path) -> "HypernymLexicon":
        """Build from ``index.noun`` and ``data.noun`` in a WordNet dict directory."""
        dict_dir = Path(dict_dir)
        synsets = _read_noun_synsets(dict_dir / "data.noun")
        cache: dict[str, list[Path_]] = {}
        paths: dict[str, set[Path_]] = defaultdict(set)
        with open(dict_dir / "index.noun", encoding="utf-8") as fh:
            for line in fh:
                if not line.strip() or line.startswith("  "):
                    continue
                fields = line.split()
                lemma = fields[0]
                n_senses = int(fields[2])
                for offset in fields[-n_senses:]:
                    paths[lemma].update(_paths_from(offset, synsets, cache))
        return cls(paths)


def _read_noun_synsets(path: Path) -> dict[str, tuple[str, list[str]]]:
    """offset -> (head label, hypernym offsets) for every noun synset."""
    synsets = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip() or line.startswith("  "):
                continue
            fields = line.split(" | ")[0].split()
            offset = fields[0]
            n_words = int(fields[3], 16)
            head = fields[4].upper()
            pos = 4 + 2 * n_words
            n_ptrs = int(fields[pos])
            hypers = []
            for k in range(n_ptrs):
                symbol, target, target_pos = fields[pos + 1 + 4 * k: pos + 4 + 4 * k]
                if symbol in ("@", "@i") and target_pos == "n":
                    hypers.append(target)
            synsets[offset] = (head, hypers)
    return synsets


def _paths_from(offset: str, synsets, cache) -> list[Path_]:
    if offset in cache:
        return cache[offset]
    head, hypers = synsets[offset]
    if not hypers:
        result = [(head,)]
    else:
        result = [(head,) + tail for h in hypers for tail in _paths_from(h, synsets, cache)]
    cache[offset] = result
    return result


_DEFAULT: HypernymLexicon | None = None


def default_lexicon() -> HypernymLexicon:
    """The bundled WordNet-derived lexicon, loaded on first use."""
    global _DEFAULT
    if _DEFAULT is None:
        ref = resources.files("issuelens").joinpath("data/hypernyms.tsv.gz")
        with resources.as_file(ref) as path:
            _DEFAULT = HypernymLexicon.from_tsv(path)
    return _DEFAULT


def hypernym_paths(lemma: str, lexicon: HypernymLexicon | None) -> frozenset[Path_]:
    if lexicon is None:
        raise LexiconNotLoadedError("no hypernym lexicon loaded")
    return lexicon.hypernym_paths(lemma)
