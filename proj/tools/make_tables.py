#!/usr/bin/env python3
"""Regenerate data/embeddings.json and data/priors.json from data/vocabulary.txt.

Embeddings: a shared category direction plus a label-specific random part,
so labels of one category sit closer together than labels of different
categories while no two distinct labels reach the verification threshold.

Priors: P(label | category) mirrors the generator's in-category rate;
P(target present | category) is high for the target's own category and the
chance that a zone of 5 objects draws it as a stray otherwise.
"""

import argparse
import json
import pathlib

import numpy as np

IN_CATEGORY_RATE = 0.85
OBJECTS_PER_ZONE = 5
OWN_CATEGORY_P_TARGET = 0.9
DIM = 32
CATEGORY_WEIGHT = 0.55
TAU_TARGET = 0.85


def read_vocab(path):
    entries = []
    for line in path.read_text().splitlines():
        line = line.split("#", 1)[0].split()
        if line:
            entries.append((line[0], line[1]))
    return entries


def embeddings(entries, seed):
    rng = np.random.default_rng(seed)
    categories = sorted({c for _, c in entries})
    axes = {c: np.eye(DIM)[i] for i, c in enumerate(categories)}
    vectors = {}
    for label, cat in entries:
        noise = rng.normal(size=DIM)
        noise[: len(categories)] = 0.0
        noise /= np.linalg.norm(noise)
        v = CATEGORY_WEIGHT * axes[cat] + np.sqrt(1 - CATEGORY_WEIGHT**2) * noise
        vectors[label] = v / np.linalg.norm(v)
    labels = list(vectors)
    m = np.array([vectors[l] for l in labels])
    sims = m @ m.T - 2 * np.eye(len(labels))
    assert sims.max() < TAU_TARGET, "two labels would trigger verification for each other"
    return {"dim": DIM, "vectors": {l: [round(float(x), 6) for x in vectors[l]] for l in labels}}


def priors(entries):
    categories = sorted({c for _, c in entries})
    n = len(entries)
    size = {c: sum(1 for _, k in entries if k == c) for c in categories}
    p_label = {}
    for label, cat in entries:
        p_label[label] = {
            c: round(IN_CATEGORY_RATE / size[c] if c == cat else (1 - IN_CATEGORY_RATE) / (n - size[c]), 6)
            for c in categories
        }
    p_target = {}
    for label, cat in entries:
        row = {}
        for c in categories:
            if c == cat:
                row[c] = OWN_CATEGORY_P_TARGET
            else:
                q = (1 - IN_CATEGORY_RATE) / (n - size[c])
                row[c] = round(1 - (1 - q) ** OBJECTS_PER_ZONE, 6)
        p_target[label] = row
    return {"categories": categories, "p_label": p_label, "p_target": p_target}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--data", type=pathlib.Path, default=pathlib.Path(__file__).resolve().parent.parent / "data")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    entries = read_vocab(args.data / "vocabulary.txt")
    (args.data / "embeddings.json").write_text(json.dumps(embeddings(entries, args.seed), indent=1) + "\n")
    (args.data / "priors.json").write_text(json.dumps(priors(entries), indent=1) + "\n")


if __name__ == "__main__":
    main()
