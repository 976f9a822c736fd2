"""Regenerates the toy word2vec model used by tests and the browser demo.

Tokens are grouped into semantic classes; each drug gets a direction near its
class centre, and its misspellings sit close to the drug. Output is
deterministic for a fixed seed.
"""
import numpy as np

DIM = 16
rng = np.random.default_rng(20180410)

CLASSES = {
    "sedative": {
        "klonopin": ["klonipin", "klonapin", "clonopin", "klonopn", "klonodine", "klonopins"],
        "xanax": ["zanax", "xanex", "xannax", "xanaz"],
        "ativan": ["ativen", "atavan"],
        "valium": ["valim"],
        "clonazepam": ["clonazapam", "klonazepam", "clonazpam"],
        "diazepam": ["diazapam", "diazepan", "diazipam"],
        "oxazepam": [],
        "lorazepam": ["lorazepan"],
    },
    "analgesic": {
        "aspirin": ["asprin", "aspirn", "asperin"],
        "tylenol": ["tylenal", "tylonol"],
        "ibuprofen": ["ibuprofin", "ibuprophen", "ibuprofn"],
        "advil": [],
    },
    "ssri": {
        "paroxetine": ["paroxitine", "paroextine"],
        "fluoxetine": ["fluoxitine", "flouxetine"],
        "duloxetine": [],
        "paxil": ["paxill"],
        "prozac": ["prozak"],
    },
}
FILLERS = ["the", "and", "sleep", "pain", "anxiety", "headache", "pill", "pills",
           "took", "doctor", "night", "feel", "need", "work", "today", "side_effects"]


def unit(v):
    return v / np.linalg.norm(v)


rows = []
for cls, drugs in CLASSES.items():
    centre = unit(rng.normal(size=DIM))
    for drug, variants in drugs.items():
        base = unit(centre + 0.55 * unit(rng.normal(size=DIM)))
        rows.append((drug, base))
        for v in variants:
            rows.append((v, unit(base + 0.25 * unit(rng.normal(size=DIM)))))
for word in FILLERS:
    rows.append((word, unit(rng.normal(size=DIM))))

with open("toy_model.txt", "w") as f:
    f.write(f"{len(rows)} {DIM}\n")
    for token, vec in rows:
        f.write(token + " " + " ".join(f"{x:.6f}" for x in vec) + "\n")
