"""Convert the XML polarity lexicon (pattern / TextBlob format) to the bundled TSV.

Usage:
    python scripts/build_sentiment_lexicon.py path/to/en-sentiment.xml \
        --out src/issuelens/data/sentiment-lexicon.tsv

Without a path the copy inside an installed ``textblob`` is used. Each form
keeps the mean polarity of its senses; adverbs with a non-unit intensity
become ``INT`` rows.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from issuelens.sentiment import (  # noqa: E402
    load_lexicon_xml,
    reference_lexicon_path,
    write_lexicon_tsv,
)

HEADER = """\
Polarity lexicon: form<TAB>pos<TAB>value. pos "*" matches any tag;
NEG rows list negation words, INT rows list intensifiers with their factor.
Derived from en-sentiment.xml (pattern / TextBlob, Tom De Smedt and
Walter Daelemans), released under the Open Data Commons Public Domain
Dedication and License (PDDL). Polarity = mean over the senses of a form."""


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("xml", nargs="?")
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    src = Path(args.xml) if args.xml else reference_lexicon_path()
    if src is None:
        sys.exit("no XML lexicon given and none found")
    lexicon = load_lexicon_xml(src)
    write_lexicon_tsv(lexicon, args.out, HEADER)
    print(f"{len(lexicon.entries)} entries, {len(lexicon.intensifiers)} intensifiers -> {args.out}")


if __name__ == "__main__":
    main()
