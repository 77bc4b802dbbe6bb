"""Train the bundled POS tagger weights.

Usage:
    python scripts/train_tagger.py CORPUS [CORPUS ...] --out src/issuelens/data/tagger-weights.json.gz

Each corpus file holds one sentence per line in ``word/TAG`` form (the
format of the OANC and WSJ samples distributed with the pattern3 sdist,
``test/corpora/tagged-en-*.txt``). ``--lexicon`` takes a Brill lexicon
(``pattern3/text/en/en-lexicon.txt``) whose tags become features; it is
stored in the weight file. One tenth of the sentences is held out and the
held-out accuracy is printed.
"""

import argparse
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from issuelens.annotate.tagger import (  # noqa: E402
    PerceptronTagger,
    read_brill_lexicon,
    read_slash_tagged,
)


def accuracy(tagger, sentences):
    right = total = 0
    for sent in sentences:
        words = [w for w, _ in sent]
        for guess, (_, truth) in zip(tagger.tag(words), sent):
            right += guess == truth
            total += 1
    return right / total


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("corpora", nargs="+")
    ap.add_argument("--out", required=True)
    ap.add_argument("--iterations", type=int, default=8)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--lexicon", help="Brill-format word/tag lexicon used as features")
    ap.add_argument("--extra", action="append", default=[],
                    help="additional training-only corpus (not held out)")
    args = ap.parse_args()

    sentences = []
    for path in args.corpora:
        sentences.extend(read_slash_tagged(path))
    rng = random.Random(args.seed)
    rng.shuffle(sentences)
    cut = len(sentences) // 10
    held_out, train = sentences[:cut], sentences[cut:]
    for path in args.extra:
        train.extend(read_slash_tagged(path))
    print(f"train {len(train)} sentences, held out {len(held_out)}")

    lexicon = read_brill_lexicon(args.lexicon) if args.lexicon else None
    tagger = PerceptronTagger(lexicon=lexicon)
    tagger.train(train, n_iter=args.iterations, seed=args.seed)
    print(f"held-out accuracy {accuracy(tagger, held_out):.4f}")

    # refit on everything for the shipped weights
    tagger = PerceptronTagger(lexicon=lexicon)
    tagger.train(sentences + [s for p in args.extra for s in read_slash_tagged(p)],
                 n_iter=args.iterations, seed=args.seed)
    tagger.save(args.out)
    print(f"wrote {args.out} ({Path(args.out).stat().st_size} bytes)")


if __name__ == "__main__":
    main()
