"""Extract the lemma index and exception lists used by the lemmatiser.

Usage:
    python scripts/build_morph_data.py WORDNET_DICT_DIR --out src/issuelens/data/morph.tsv.gz

Output lines are ``n<TAB>lemma`` / ``v<TAB>lemma`` for every single-word noun
and verb lemma, and ``n<TAB>form<TAB>base`` / ``v<TAB>form<TAB>base`` for the
irregular forms listed in ``noun.exc`` and ``verb.exc``.
"""

import argparse
import gzip
from pathlib import Path


def index_lemmas(path):
    out = set()
    for line in open(path, encoding="utf-8"):
        if line.startswith("  ") or not line.strip():
            continue
        lemma = line.split(" ", 1)[0]
        if "_" not in lemma:
            out.add(lemma)
    return out


def exceptions(path):
    out = set()
    for line in open(path, encoding="utf-8"):
        parts = line.split()
        if len(parts) >= 2 and "_" not in parts[0]:
            out.add((parts[0], parts[1]))
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("dict_dir")
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    d = Path(args.dict_dir)
    lines = []
    for pos, name in (("n", "noun"), ("v", "verb")):
        lines += [f"{pos}\t{lemma}" for lemma in sorted(index_lemmas(d / f"index.{name}"))]
        lines += [f"{pos}\t{form}\t{base}" for form, base in sorted(exceptions(d / f"{name}.exc"))]
    data = gzip.compress(("\n".join(lines) + "\n").encode("utf-8"), mtime=0)
    Path(args.out).write_bytes(data)
    print(f"{len(lines)} lines -> {args.out} ({len(data)} bytes)")


if __name__ == "__main__":
    main()
