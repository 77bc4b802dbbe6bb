"""Convert a Jira REST export (JSON lines or array, e.g. a mongoexport of one
tracker's issue collection) into issuelens input records.

Usage:
    python scripts/convert_jira_dump.py Hyperledger.json hyperledger.jsonl --tracker Hyperledger
"""

import argparse

from issuelens.convert import convert_file


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("src")
    ap.add_argument("dst")
    ap.add_argument("--tracker", required=True, help="tracker name stored on every record")
    args = ap.parse_args()
    n = convert_file(args.src, args.dst, args.tracker)
    print(f"{n} issues -> {args.dst}")


if __name__ == "__main__":
    main()
