#!/usr/bin/env python3
"""Builds the synthetic end-to-end fixture and freezes its expected outcomes.

This script is an independent reference: it re-implements tokenization,
tf-idf/cosine scoring, embedding averaging and pair-counting ARI directly in
Python with no shared code with the C++ library. Run it from anywhere:

    python3 tests/data/derive_fixture.py

It (re)writes fixture/embeddings.bin, fixture/dataset.tsv and
fixture/expected.json.
"""

import json
import math
import os
import string
import struct
from collections import Counter, defaultdict

HERE = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixture")

EMBEDDINGS = [
    ("finance", [1.0, 0.0, 0.0, 0.0]),
    ("shore", [0.0, 1.0, 0.0, 0.0]),
    ("fish", [0.0, 0.0, 1.0, 0.0]),
    ("music", [0.0, 0.0, 0.0, 1.0]),
    ("cash", [0.9, 0.1, 0.0, 0.0]),
    ("lake", [0.0, 0.9, 0.2, 0.0]),
]

INSTANCES = [
    ("1", "bank", "1", "She deposited the cash at the bank."),
    ("2", "bank", "1", "The bank manages finance for the town."),
    ("3", "bank", "1", "Cash machines at the bank were empty."),
    ("4", "bank", "2", "We walked along the shore near the bank."),
    ("5", "bank", "2", "Ducks swim in the lake beside the bank."),
    ("6", "bank", "2", "The lake flooded the bank last spring."),
    ("7", "bass", "1", "He caught a bass in the lake."),
    ("8", "bass", "1", "A bass is a fish with spines."),
    ("9", "bass", "1", "The fish market sold bass today."),
    ("10", "bass", "2", "The bass carried the music."),
    ("11", "bass", "2", "Her bass filled the music hall."),
    ("12", "bass", "2", "Loud music came from the bass."),
]

CONTENT = {"NOUN", "VERB", "ADJ", "ADV"}
TIE_EPS = 1e-12


def read_inventory():
    synsets = []
    with open(os.path.join(HERE, "inventory.tsv"), encoding="utf-8") as f:
        for line in f:
            cols = line.rstrip("\n").split("\t")
            syn = cols[1].split(",")
            hyp = cols[2].split(",") if len(cols) > 2 and cols[2] else []
            synsets.append((cols[0], syn + hyp))
    return synsets


def read_lexicon():
    lex = {}
    with open(os.path.join(HERE, "lexicon.tsv"), encoding="utf-8") as f:
        for line in f:
            if line.startswith("#") or not line.strip():
                continue
            cols = line.rstrip("\n").split("\t")
            lex[cols[0].lower()] = (cols[1], cols[2] if len(cols) > 2 else cols[0].lower())
    return lex


def tokenize(text):
    """ASCII-only mirror of the baseline tokenizer (enough for this fixture)."""
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in string.punctuation:
            tokens.append((c, i, i + 1, True))
            i += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace() and text[j] not in string.punctuation:
            j += 1
        tokens.append((text[i:j], i, j, False))
        i = j
    return tokens


def analyze(text, lex):
    spans = []
    for word, b, e, punct in tokenize(text):
        if punct:
            spans.append((word, "PUNCT", word, b, e))
        elif word.lower() in lex:
            pos, lemma = lex[word.lower()]
            spans.append((word, pos, lemma, b, e))
        else:
            spans.append((word, "NOUN", word.lower(), b, e))
    return spans


def argmax(scored):
    best = None
    for sid, score in scored:
        if best is None or score > best[1] + TIE_EPS:
            best = (sid, score)
    return best


def sparse_choice(synsets, lemma, content):
    n = len(synsets)
    df = Counter()
    for _, bag in synsets:
        for w in set(bag):
            df[w] += 1
    idf = {w: math.log((1 + n) / (1 + d)) + 1 for w, d in df.items()}
    sent = Counter(w for w in content if w in idf)
    svec = {w: c * idf[w] for w, c in sent.items()}
    snorm = math.sqrt(sum(v * v for v in svec.values()))
    if snorm == 0:
        return None
    scored = []
    for sid, bag in sorted(synsets, key=lambda s: int(s[0])):
        if lemma not in bag:
            continue
        row = {w: c * idf[w] for w, c in Counter(bag).items()}
        rnorm = math.sqrt(sum(v * v for v in row.values()))
        dot = sum(v * svec.get(w, 0.0) for w, v in row.items())
        scored.append((sid, dot / (rnorm * snorm)))
    return argmax(scored)


def mean(vectors):
    d = len(vectors[0])
    return [sum(v[k] for v in vectors) / len(vectors) for k in range(d)]


def cosine(a, b):
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(x * x for x in b))
    if na == 0 or nb == 0:
        return None
    return sum(x * y for x, y in zip(a, b)) / (na * nb)


def dense_choice(synsets, emb, lemma, content):
    found = [emb[w] for w in content if w in emb]
    if not found:
        return None
    svec = mean(found)
    scored = []
    for sid, bag in sorted(synsets, key=lambda s: int(s[0])):
        if lemma not in bag:
            continue
        vecs = [emb[w] for w in bag if w in emb]
        if not vecs:
            continue
        c = cosine(mean(vecs), svec)
        if c is not None:
            scored.append((sid, c))
    return argmax(scored)


def pair_ari(gold, pred):
    n11 = n10 = n01 = n00 = 0
    for i in range(len(gold)):
        for j in range(i + 1, len(gold)):
            g = gold[i] == gold[j]
            p = pred[i] == pred[j]
            if g and p:
                n11 += 1
            elif g:
                n10 += 1
            elif p:
                n01 += 1
            else:
                n00 += 1
    den = (n00 + n01) * (n01 + n11) + (n00 + n10) * (n10 + n11)
    if den == 0:
        # only reachable when both partitions are trivial in the same way
        return 1.0
    return 2.0 * (n00 * n11 - n01 * n10) / den


def weighted(per_lemma):
    total = sum(n for n, _ in per_lemma.values())
    return sum(n * a for n, a in per_lemma.values()) / total


def main():
    synsets = read_inventory()
    lex = read_lexicon()
    # float32 round trip so the oracle sees exactly what the file stores
    emb = {w: list(struct.unpack("<%df" % len(v), struct.pack("<%df" % len(v), *v)))
           for w, v in EMBEDDINGS}

    with open(os.path.join(HERE, "embeddings.bin"), "wb") as f:
        f.write(("%d %d\n" % (len(EMBEDDINGS), len(EMBEDDINGS[0][1]))).encode())
        for w, v in EMBEDDINGS:
            f.write(w.encode() + b" " + struct.pack("<%df" % len(v), *v) + b"\n")

    rows = []
    expected = {"instances": [], "sparse": {}, "dense": {}}
    by_lemma = defaultdict(lambda: {"gold": [], "sparse": [], "dense": [], "ids": []})
    for cid, lemma, gold, text in INSTANCES:
        start = text.lower().index(lemma)
        end = start + len(lemma)
        rows.append("%s\t%s\t%s\t%d-%d\t%s" % (cid, lemma, gold, start, end, text))
        spans = analyze(text, lex)
        content = [s[2] for s in spans if s[1] in CONTENT]
        sp = sparse_choice(synsets, lemma, content)
        de = dense_choice(synsets, emb, lemma, content)
        target = next(i for i, s in enumerate(spans) if s[3] == start)
        expected["instances"].append({
            "id": cid, "lemma": lemma, "gold": gold, "target_position": target,
            "sparse": {"synset_id": sp[0], "score": sp[1]} if sp else None,
            "dense": {"synset_id": de[0], "score": de[1]} if de else None,
        })
        g = by_lemma[lemma]
        g["gold"].append(gold)
        g["sparse"].append(sp[0] if sp else "-")
        g["dense"].append(de[0] if de else "-")

    for method in ("sparse", "dense"):
        per = {l: (len(g["gold"]), pair_ari(g["gold"], g[method])) for l, g in by_lemma.items()}
        expected[method] = {
            "per_lemma": {l: {"instances": n, "ari": a} for l, (n, a) in sorted(per.items())},
            "total_ari": weighted(per),
        }

    with open(os.path.join(HERE, "dataset.tsv"), "w", encoding="utf-8") as f:
        f.write("context_id\tword\tgold_sense_id\tpositions\tcontext\n")
        f.write("\n".join(rows) + "\n")
    with open(os.path.join(HERE, "expected.json"), "w", encoding="utf-8") as f:
        json.dump(expected, f, indent=2, sort_keys=True)
        f.write("\n")

    for inst in expected["instances"]:
        print(inst["id"], inst["lemma"], inst["gold"], inst["sparse"], inst["dense"])
    print("sparse total", expected["sparse"]["total_ari"])
    print("dense total", expected["dense"]["total_ari"])


if __name__ == "__main__":
    main()
