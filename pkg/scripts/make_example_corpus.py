"""Write the small two-tracker example corpus used by the tests and the README.

Usage:
    python scripts/make_example_corpus.py tests/fixtures/examples.jsonl
"""

import json
import sys

SUITABLE_BEFORE = ("Chef has been identified as a suitable option to create the automatic "
                   "deployment mechanism. The architecture of the mechanism needs to be "
                   "specified, and then implement in Chef")
SUITABLE_AFTER = SUITABLE_BEFORE.replace("a suitable option", "a option")
WSS_BEFORE = ("The Wss4jSecurityInterceptor has no X509 Binary security token support yet. "
              "It would be great if we could add it.")
WSS_AFTER = "Document the X509 Binary security token support for Wss4j."

STORIES = [
    "As an architect I want a short design. Of course there's no need to provide every single "
    "detail of the proposed architecture in the design document.",
    "As a driver I want dependable trains. Specific releases experience reliability issues "
    "during regular Motions.",
    "As a dispatcher I want an event feed. The engine returns up to 10 fired events.",
    "As a guard I want access control. The gate was opened.",
    "As a driver I want radio safety. Powering down the cab radio shall cause the "
    "disconnection from the mobile network.",
    "As an operator I want secure routes. During default deployments (without user-specific "
    "configuration) TLS termination is managed by the Route.",
]

CLONE_TEXT = ("Ledger peers drop gossip messages when the anchor peer restarts. "
              "Restart the anchor peer and watch the gossip log.")
RANDOM_TEXTS = [
    ("Upgrade the chaincode container image", "The base image is two releases behind."),
    ("Metrics endpoint returns 500", "Scraping the orderer metrics fails after rotation."),
    ("Document channel config updates", "Explain how to sign a config update transaction."),
    ("Flaky integration test for raft", "The raft test times out on slow runners."),
]


def ts(day, hour=9):
    return f"2021-{1 + day // 28:02d}-{1 + day % 28:02d}T{hour:02d}:00:00.000+0000"


def issue(key, tracker, **kw):
    rec = {"key": key, "tracker": tracker, "project": key.split("-")[0],
           "created": ts(int(key.split("-")[1])), "issue_type": "Task", "status": "Open",
           "priority": "Minor", "summary": "", "description": ""}
    rec.update(kw)
    return rec


def records():
    out = []
    for n, text in enumerate(STORIES, start=1):
        out.append(issue(f"ALPHA-{n}", "Alpha", issue_type="Story",
                         summary=f"Story {n}", description=text))
    out.append(issue("ALPHA-10", "Alpha", summary="Deployment mechanism",
                     description=SUITABLE_AFTER,
                     changelog=[{"id": "1001", "author": "dev", "created": ts(12, 15),
                                 "items": [{"field": "description", "fromString": SUITABLE_BEFORE,
                                            "toString": SUITABLE_AFTER}]}]))
    out.append(issue("ALPHA-11", "Alpha", summary="X509 token docs", description=WSS_AFTER,
                     changelog=[{"id": "1101", "author": "dev", "created": ts(13, 15),
                                 "items": [{"field": "description", "fromString": WSS_BEFORE,
                                            "toString": WSS_AFTER}]}]))
    out.append(issue(
        "ALPHA-12", "Alpha", summary="Peer crash on restart", priority="Major",
        status="In Progress",
        description="The peer crashes when restarted twice.",
        changelog=[{"id": "1201", "author": "lead", "created": ts(14, 10),
                    "items": [{"field": "priority", "fromString": "Minor", "toString": "Major"},
                              {"field": "status", "fromString": "Open",
                               "toString": "In Progress"}]}],
        comments=[
            {"id": "1", "author": "a", "created": ts(14, 11),
             "body": "We need to fix this issue ASAP. It blocks the release. "
                     "Please mark this issue as High Priority"},
            {"id": "2", "author": "b", "created": ts(14, 12),
             "body": "Sorry, this is not a Major Priority, so I cannot demote"},
            {"id": "3", "author": "c", "created": ts(14, 13), "body": "Changed Priority to Major"},
            {"id": "4", "author": "d", "created": ts(14, 14), "body": "Thanks, looking into it."},
        ]))
    out.append(issue("ALPHA-13", "Alpha", summary="Slow ledger queries", priority="High",
                     description="Range queries take seconds.",
                     changelog=[{"id": "1301", "author": "lead", "created": ts(15, 10),
                                 "items": [{"field": "priority", "fromString": "Major",
                                            "toString": "High"}]}]))
    # link fixture: one verbatim clone pair, unrelated texts under other types
    out.append(issue("ALPHA-20", "Alpha", summary="Gossip drops on restart",
                     description=CLONE_TEXT,
                     links=[{"type": "Cloners", "direction": "outward", "otherKey": "ALPHA-21"}]))
    out.append(issue("ALPHA-21", "Alpha", summary="Gossip drops on restart",
                     description=CLONE_TEXT,
                     links=[{"type": "Cloners", "direction": "inward", "otherKey": "ALPHA-20"}]))
    link_types = ["Relates", "Duplicate"]
    for n, (summary, desc) in enumerate(RANDOM_TEXTS):
        key = f"ALPHA-{22 + n}"
        rec = issue(key, "Alpha", summary=summary, description=desc)
        if n % 2 == 0:
            rec["links"] = [{"type": link_types[n // 2], "direction": "outward",
                             "otherKey": f"ALPHA-{23 + n}"}]
        out.append(rec)
    out.append(issue(
        "BETA-1", "Beta", summary="Broker rejects large messages", priority="Critical",
        description="Messages above 1 MB are rejected.",
        changelog=[{"id": "2001", "author": "x", "created": ts(1, 10),
                    "items": [{"field": "priority", "fromString": "Blocker",
                               "toString": "Critical"}]}],
        comments=[{"id": "1", "author": "y", "created": ts(1, 11),
                   "body": "Priority should be Blocker again"},
                  {"id": "2", "author": "z", "created": ts(1, 12),
                   "body": "I would call this High Priority"}]))
    return out


def main():
    path = sys.argv[1] if len(sys.argv) > 1 else "tests/fixtures/examples.jsonl"
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records():
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
