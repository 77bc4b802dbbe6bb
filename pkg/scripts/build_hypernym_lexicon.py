"""Flatten WordNet noun hypernym paths into the bundled TSV lexicon.

Usage:
    python scripts/build_hypernym_lexicon.py WORDNET_DICT_DIR \
        --out src/issuelens/data/hypernyms.tsv.gz

WORDNET_DICT_DIR must hold ``index.noun`` and ``data.noun`` (the WordNet 3.0
files shipped by the ``wn`` and ``nltk_data`` distributions both work).
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from issuelens.annotate.hypernyms import HypernymLexicon  # noqa: E402


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("dict_dir")
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    lexicon = HypernymLexicon.from_wordnet(args.dict_dir)
    lexicon.to_tsv(args.out)
    print(f"{len(lexicon)} lemmas -> {args.out} ({Path(args.out).stat().st_size} bytes)")
    for probe in ("deployment", "disconnection", "termination", "table", "city"):
        print(probe, lexicon.is_action_like(probe))


if __name__ == "__main__":
    main()
