#!/usr/bin/env python3
# Copyright 2026 The DKG Toolkit Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Generates the bundled toy corpus: parsed documents plus entity embeddings.

Sentences come from hand-parsed templates (spaCy label scheme) with entity
slots "A" and "B". Output is deterministic for a given --seed.
"""

import argparse
import json
import math
import random
import re

CLUSTERS = {
    "cs": ["Machine learning", "Algorithm", "Deep learning", "Computer science",
           "Data mining", "Python (programming language)", "Statistics",
           "Artificial intelligence", "Neural network"],
    "geo": ["Champaign, Illinois", "Urbana, Illinois", "Illinois", "Chicago",
            "Lake Michigan", "Mississippi River", "Peoria, Illinois",
            "Springfield, Illinois"],
    "astro": ["Sun", "Moon", "Earth", "Mercury (planet)", "Venus", "Mars",
              "Jupiter", "Solar System", "Hipparchus"],
    "bio": ["Moth", "Momphidae", "Butterfly", "Insect", "Caterpillar",
            "Lepidoptera", "Gelechioidea", "Pollination"],
    "med": ["Schizophrenia", "Hallucination", "Psychosis", "Delusion",
            "Psychiatry", "Dopamine", "Antipsychotic", "Brain"],
    "chem": ["Mercury (element)", "Chemical element", "Metal", "Gold",
             "Silver", "Periodic table"],
}

# Two entities whose embeddings have cosine similarity 0.49.
LOW_PAIR = ("Singapore", "Indonesia")
LOW_RELEVANCE = 0.49

# Two closely related entities described only by a weak sentence.
WEAK_PAIR = ("Rhine", "Danube")
WEAK_RELEVANCE = 0.9

# (text, head, deprel); heads are 1-based template positions, "A"/"B" are
# entity slots.
TEMPLATES = {
    "explore": [("A", 2, "nsubj"), ("explores", 0, "ROOT"), ("the", 4, "det"),
                ("study", 2, "dobj"), ("of", 4, "prep"), ("B", 5, "pobj"),
                (".", 2, "punct")],
    "s1": [("A", 2, "nsubj"), ("explores", 0, "ROOT"), ("the", 4, "det"),
           ("study", 2, "dobj"), ("and", 4, "cc"), ("construction", 4, "conj"),
           ("of", 4, "prep"), ("B", 7, "pobj"), ("that", 11, "nsubj"),
           ("can", 11, "aux"), ("learn", 8, "relcl"), ("from", 11, "prep"),
           ("and", 11, "cc"), ("make", 11, "conj"), ("predictions", 14, "dobj"),
           ("on", 15, "prep"), ("data", 16, "pobj"), (".", 2, "punct")],
    "kind": [("A", 2, "nsubj"), ("is", 0, "ROOT"), ("a", 4, "det"),
             ("kind", 2, "attr"), ("of", 4, "prep"), ("B", 5, "pobj"),
             (".", 2, "punct")],
    "passive": [("A", 3, "nsubjpass"), ("was", 3, "auxpass"),
                ("developed", 0, "ROOT"), ("by", 3, "agent"),
                ("researchers", 4, "pobj"), ("of", 5, "prep"), ("B", 6, "pobj"),
                (".", 3, "punct")],
    "uses": [("A", 2, "nsubj"), ("uses", 0, "ROOT"), ("B", 2, "dobj"),
             ("for", 2, "prep"), ("many", 7, "amod"), ("practical", 7, "amod"),
             ("tasks", 4, "pobj"), (".", 2, "punct")],
    "in": [("In", 7, "prep"), ("A", 1, "pobj"), (",", 7, "punct"),
           ("B", 7, "nsubjpass"), ("is", 7, "auxpass"), ("widely", 7, "advmod"),
           ("used", 0, "ROOT"), (".", 7, "punct")],
    "compare": [("Researchers", 2, "nsubj"), ("compare", 0, "ROOT"),
                ("A", 2, "dobj"), ("with", 2, "prep"), ("B", 4, "pobj"),
                ("in", 2, "prep"), ("practice", 6, "pobj"), (".", 2, "punct")],
    "short": [("A", 2, "nsubj"), ("likes", 0, "ROOT"), ("B", 2, "dobj"),
              (".", 2, "punct")],
    "compound": [("The", 3, "det"), ("A", 3, "compound"), ("method", 4, "nsubj"),
                 ("relates", 0, "ROOT"), ("to", 4, "prep"), ("B", 5, "pobj"),
                 (".", 4, "punct")],
    "contrast": [("A", 2, "nsubj"), ("influenced", 0, "ROOT"), ("B", 2, "dobj"),
                 (",", 2, "punct"), ("but", 2, "cc"), ("critics", 10, "nsubj"),
                 ("of", 6, "prep"), ("the", 9, "det"), ("theory", 7, "pobj"),
                 ("disagreed", 2, "conj"), ("strongly", 10, "advmod"),
                 (".", 2, "punct")],
    "clause": [("Historians", 2, "nsubj"), ("say", 0, "ROOT"), ("that", 5, "mark"),
               ("A", 5, "nsubj"), ("shaped", 2, "ccomp"), ("B", 5, "dobj"),
               ("considerably", 5, "advmod"), (".", 2, "punct")],
    "partner": [("A", 2, "nsubj"), ("is", 0, "ROOT"), ("the", 7, "det"),
                ("second", 5, "advmod"), ("largest", 7, "amod"),
                ("trading", 7, "compound"), ("partner", 2, "attr"),
                ("of", 7, "prep"), ("B", 8, "pobj"), (".", 2, "punct")],
    # The relation sits in a short main clause; the parataxis clause is
    # ballast that dilutes significance.
    "aside": [("A", 2, "nsubj"), ("explores", 0, "ROOT"), ("the", 4, "det"),
              ("study", 2, "dobj"), ("of", 4, "prep"), ("B", 5, "pobj"),
              ("today", 2, "advmod"), (";", 14, "punct"), ("many", 10, "amod"),
              ("critics", 14, "nsubj"), ("of", 10, "prep"), ("the", 13, "det"),
              ("idea", 11, "pobj"), ("disagree", 2, "parataxis"),
              ("with", 14, "prep"), ("it", 15, "pobj"), (".", 2, "punct")],
}


def long_template(items=24):
    t = [("A", 2, "nsubj"), ("describes", 0, "ROOT"), ("B", 2, "dobj")]
    for k in range(items):
        t.append((",", 3, "punct"))
        t.append(("item%d" % k, 3, "conj"))
    t.append((".", 2, "punct"))
    return t


TEMPLATES["long"] = long_template()

WEIGHTS = [("explore", 3), ("s1", 1), ("kind", 3), ("passive", 2), ("uses", 3),
           ("in", 2), ("compare", 1), ("short", 1), ("compound", 1),
           ("contrast", 2), ("clause", 2), ("long", 0.3)]


def craft_mention(title):
    out = re.sub(r"\([^)]*\)", "", title.split(",")[0])
    return " ".join(out.split())


def instantiate(template, mentions):
    """Expands entity slots; returns tokens and {slot: (start, end)}."""
    tokens, head_pos, spans = [], {}, {}
    for local, (text, _, _) in enumerate(template, start=1):
        words = mentions[text].split(" ") if text in mentions else [text]
        start = len(tokens) + 1
        for w in words:
            tokens.append({"i": len(tokens) + 1, "text": w})
        head_pos[local] = len(tokens)
        if text in mentions:
            spans[text] = (start, len(tokens))
    for local, (text, head, deprel) in enumerate(template, start=1):
        h = head_pos[local]
        tokens[h - 1]["head"] = head_pos[head] if head else 0
        tokens[h - 1]["deprel"] = deprel
        if text in spans:
            start, end = spans[text]
            for i in range(start, end):
                tokens[i - 1]["head"] = end
                tokens[i - 1]["deprel"] = "compound"
    return tokens, spans


class DocBuilder:
    def __init__(self, rng, doc_id, title):
        self.rng = rng
        self.doc = {"doc_id": doc_id, "title": title, "sentences": []}
        self.linked = set()

    def add(self, template, a, b, link_targets=None, force_link=False):
        mentions = {"A": craft_mention(a), "B": craft_mention(b)}
        tokens, spans = instantiate(TEMPLATES[template], mentions)
        links = []
        for slot, entity in (("A", a), ("B", b)):
            if entity in self.linked and not force_link:
                continue
            if self.rng.random() < 0.1 and not force_link:
                continue  # first mention left unlinked
            target = (link_targets or {}).get(entity, entity)
            if target == entity and self.rng.random() < 0.15:
                target = entity.lower()
            start, end = spans[slot]
            links.append({"start": start, "end": end, "target": target})
            self.linked.add(entity)
        if self.rng.random() < 0.1:
            links.append({"start": 2, "end": 2, "target": "Nonexistent article"})
        self.doc["sentences"].append({"tokens": tokens, "links": links})


def build_corpus(rng):
    docs = []
    clusters = ["cs", "geo", "astro", "bio", "med"]
    names, weights = zip(*WEIGHTS)
    n = 0
    for cluster in clusters * 9 + ["chem"] * 3:
        members = CLUSTERS[cluster]
        doc = DocBuilder(rng, "doc%03d" % n, rng.choice(members))
        targets = {"Mercury (planet)": "mercury"} if cluster == "astro" else {}
        for _ in range(6):
            if rng.random() < 0.08:
                other = rng.choice([c for c in CLUSTERS if c != cluster])
                a, b = rng.choice(members), rng.choice(CLUSTERS[other])
            else:
                a, b = rng.sample(members, 2)
            doc.add(rng.choices(names, weights)[0], a, b, targets)
        docs.append(doc.doc)
        n += 1

    # One mention string re-linked to a different entity within a page.
    doc = DocBuilder(rng, "doc%03d" % n, "Metal")
    doc.add("kind", "Mercury (planet)", "Solar System", force_link=True)
    doc.add("explore", "Gold", "Metal", force_link=True)
    doc.add("uses", "Mercury (element)", "Chemical element", force_link=True)
    doc.add("explore", "Mercury (element)", "Gold")
    docs.append(doc.doc)
    n += 1

    # Related below the relevance threshold.
    doc = DocBuilder(rng, "doc%03d" % n, "Singapore")
    doc.add("partner", LOW_PAIR[0], LOW_PAIR[1], force_link=True)
    doc.add("kind", LOW_PAIR[1], LOW_PAIR[0])
    docs.append(doc.doc)
    n += 1

    # Related, but the only description scores just below the rd threshold.
    doc = DocBuilder(rng, "doc%03d" % n, WEAK_PAIR[0])
    doc.add("aside", WEAK_PAIR[0], WEAK_PAIR[1], force_link=True)
    docs.append(doc.doc)
    return docs


def build_embeddings():
    entities = [e for members in CLUSTERS.values() for e in members]
    dim = len(CLUSTERS) + len(entities) + 4
    rows = {}
    for c, (cluster, members) in enumerate(CLUSTERS.items()):
        for e in members:
            v = [0.0] * dim
            v[c] = 1.0
            v[len(CLUSTERS) + entities.index(e)] = 0.5
            rows[e] = v
    x, y = dim - 2, dim - 1
    s = [0.0] * dim
    s[x] = 1.0
    t = [0.0] * dim
    t[x] = LOW_RELEVANCE
    t[y] = math.sqrt(1.0 - LOW_RELEVANCE ** 2)
    rows[LOW_PAIR[0]] = s
    rows[LOW_PAIR[1]] = t
    x, y = dim - 4, dim - 3
    u = [0.0] * dim
    u[x] = 1.0
    w = [0.0] * dim
    w[x] = WEAK_RELEVANCE
    w[y] = math.sqrt(1.0 - WEAK_RELEVANCE ** 2)
    rows[WEAK_PAIR[0]] = u
    rows[WEAK_PAIR[1]] = w
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--corpus", default="data/toy/corpus.jsonl")
    p.add_argument("--embeddings", default="data/toy/embeddings.tsv")
    p.add_argument("--seed", type=int, default=7)
    args = p.parse_args()
    rng = random.Random(args.seed)
    with open(args.corpus, "w", encoding="utf-8", newline="\n") as f:
        for doc in build_corpus(rng):
            f.write(json.dumps(doc, ensure_ascii=False) + "\n")
    with open(args.embeddings, "w", encoding="utf-8", newline="\n") as f:
        for title, v in build_embeddings().items():
            f.write(title + "\t" + " ".join("%.17g" % x for x in v) + "\n")


if __name__ == "__main__":
    main()
