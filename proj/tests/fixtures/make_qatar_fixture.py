#!/usr/bin/env python3
"""Builds the Qatar ordering fixture.

Writes qatar_article.jsonl, qatar_dumps/qatar.json and qatar_expected.json.
The article's noun phrases, in document order, are the raw topic list

  Qatar, Palestinians, West Bank, ceasefire deal, Qatar, Qatar, ceasefire deal,
  Qatar, Palestinians, Israeli-occupied West Bank, Qatar, Qatar, Qatar,
  Palestinians, Palestinians, West Bank, Qatar

and the span dump is chosen so the five value criteria order the surviving
topics as Israeli-occupied West Bank > ceasefire deal > Qatar > Palestinians.
Expected values below are recomputed here from the dump, independently of the
C++ code: overlap by the triple loop, then linear-clamp criteria.
"""
import json
import os
import re

HERE = os.path.dirname(os.path.abspath(__file__))

TEXT = (
    "Qatar has urged Palestinians in the West Bank to accept a ceasefire deal. "
    "Officials from Qatar said that Qatar would monitor the ceasefire deal closely. "
    "Mediators in Qatar met Palestinians from the Israeli-occupied West Bank on Sunday. "
    "Qatar hosted the talks, and Qatar pledged aid, as Qatar had done before. "
    "Some Palestinians welcomed the move, and Palestinians in the West Bank looked to Qatar."
)

RAW_TOPICS = [
    "Qatar", "Palestinians", "West Bank", "ceasefire deal", "Qatar", "Qatar",
    "ceasefire deal", "Qatar", "Palestinians", "Israeli-occupied West Bank",
    "Qatar", "Qatar", "Qatar", "Palestinians", "Palestinians", "West Bank", "Qatar",
]


def find(fragment, occurrence=0):
    start = -1
    for _ in range(occurrence + 1):
        start = TEXT.index(fragment, start + 1)
    return start, start + len(fragment)


# (fragment, occurrence, score) per step; the best score of a step comes first.
STEPS = [
    [("Israeli-occupied West Bank", 0, 10.0), ("ceasefire deal", 0, 9.9),
     ("a ceasefire deal", 0, 9.85), ("Qatar", 0, 9.7), ("Palestinians", 0, 9.6),
     ("has urged", 0, 9.0)],
    [("the ceasefire deal", 0, 12.0), ("Qatar would", 0, 11.7),
     ("Palestinians from the Israeli-occupied West Bank", 0, 11.5), ("Sunday", 0, 11.0)],
    [("Qatar hosted", 0, 8.0), ("closely", 0, 7.0)],
]


def words(s):
    return re.findall(r"[\w]+(?:[-'][\w]+)*|[^\w\s]", s)


def main():
    dump = {"doc_id": "qatar", "steps": []}
    spans = []
    for index, step in enumerate(STEPS):
        cands = []
        top = max(score for _, _, score in step)
        ordered = sorted(step, key=lambda c: -c[2])
        for frag, occ, score in step:
            start, end = find(frag, occ)
            cands.append({"token_start": start, "token_end": end,
                          "logit_start": score / 2, "logit_end": score / 2})
            rank = [c[0] for c in ordered].index(frag)
            distance = 0.0 if rank == 0 else (top - score) / abs(top)
            if distance <= 0.05 and rank < 15:
                spans.append({"words": words(frag), "rank": rank, "distance": distance})
        dump["steps"].append({"span_index": index, "candidates": cands})

    # Overlap and criteria for the surviving topics; every occurrence of a phrase
    # sees the same spans, so merged counts are occurrences times matches.
    expected = []
    for phrase in ["Israeli-occupied West Bank", "ceasefire deal", "Qatar", "Palestinians"]:
        matches = []
        for w in words(phrase):
            for span in spans:
                for ws in span["words"]:
                    if w == ws:
                        matches.append(span)
        occurrences = RAW_TOPICS.count(phrase)
        n_spans = occurrences * len(matches)
        mean_distance = sum(m["distance"] for m in matches) / len(matches)
        mean_rank = sum(m["rank"] for m in matches) / len(matches)
        n_words = len(words(phrase))
        n_caps = sum(1 for w in words(phrase) if w[0].isupper())
        v = [
            min(max((0.4 - mean_distance) / 0.4, 0.0), 1.0),
            min(max((4.0 - mean_rank) / 4.0, 0.0), 1.0),
            min(n_spans, 4) / 4,
            min(n_words, 3) / 3,
            min(n_caps, 3) / 3,
        ]
        expected.append({"phrase": phrase, "total_value": sum(v), "criteria": v,
                         "n_spans": n_spans, "mean_rank": mean_rank,
                         "mean_distance": mean_distance})
    expected.sort(key=lambda t: -t["total_value"])

    with open(os.path.join(HERE, "qatar_article.jsonl"), "w") as f:
        f.write(json.dumps({"doc_id": "qatar", "text": TEXT}) + "\n")
    os.makedirs(os.path.join(HERE, "qatar_dumps"), exist_ok=True)
    with open(os.path.join(HERE, "qatar_dumps", "qatar.json"), "w") as f:
        json.dump(dump, f, indent=1)
        f.write("\n")
    with open(os.path.join(HERE, "qatar_expected.json"), "w") as f:
        json.dump({"raw_topics": RAW_TOPICS, "ordered": expected}, f, indent=1)
        f.write("\n")
    for t in expected:
        print(f"{t['total_value']:.6f}  {t['phrase']}")


if __name__ == "__main__":
    main()
