"""Writes corpus.txt: 1000 synthetic posts, some mentioning drugs or misspellings."""
import random

rng = random.Random(20180410)
filler = ("i took my dose today and felt fine tired anxious sleep doctor said "
          "pharmacy refill week night morning pain better worse again").split()
mentions = {
    "klonopin": 0.12, "klonipin": 0.03, "clonopin": 0.03, "klonapin": 0.02,
    "klonopn": 0.02, "xanax": 0.10, "xanex": 0.03, "zanax": 0.02,
    "aspirin": 0.05, "asprin": 0.02,
}

lines = []
for _ in range(1000):
    words = rng.choices(filler, k=rng.randint(4, 14))
    for term, p in mentions.items():
        if rng.random() < p:
            words.insert(rng.randint(0, len(words)), term.capitalize() if rng.random() < 0.3 else term)
    text = " ".join(words)
    if rng.random() < 0.2:
        text += rng.choice([".", "!", "?", " :)"])
    lines.append(text)

with open("corpus.txt", "w") as f:
    f.write("\n".join(lines) + "\n")
