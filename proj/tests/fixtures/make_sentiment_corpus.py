"""Builds sentiment_corpus.jsonl: bilingual messages with hit counts known by construction."""
import json
import random
from pathlib import Path

LEXICON = Path(__file__).resolve().parents[2] / "data" / "sentiment_lexicon.txt"


def load_lexicon():
    sections = {"positive": [], "negative": []}
    current = None
    for raw in LEXICON.read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            current = line.strip("[]")
            continue
        sections[current].append(line)
    return sections["positive"], sections["negative"]


NEUTRAL_EN = ["the", "today", "walk", "meeting", "and", "we", "was", "after", "class", "coffee", "bus", "window"]
NEUTRAL_FA = ["امروز", "من", "رفتم", "کتاب", "خانه", "دانشگاه", "صبح", "با", "دوستم"]
SEPARATORS = [" ", " ", " ", ", ", "! ", "? ", ". ", " - ", "، ", "\n"]


def is_persian(word):
    return any("؀" <= ch <= "ۿ" for ch in word)


def vary(word, rng):
    if is_persian(word):
        return word
    return rng.choice([word, word.upper(), word.capitalize()])


def main():
    pos, neg = load_lexicon()
    rng = random.Random(20240601)
    rows = []
    for i in range(200):
        words, p, n = [], 0, 0
        no_hits = i % 5 == 0
        for _ in range(rng.randint(1, 12)):
            kind = rng.random()
            if not no_hits and kind < 0.25:
                words.append(vary(rng.choice(pos), rng))
                p += 1
            elif not no_hits and kind < 0.45:
                words.append(vary(rng.choice(neg), rng))
                n += 1
            else:
                words.append(vary(rng.choice(NEUTRAL_EN + NEUTRAL_FA), rng))
        text = words[0]
        for w in words[1:]:
            text += rng.choice(SEPARATORS) + w
        text += rng.choice(["", ".", "!", "?", " :)"])
        rows.append({"text": text, "pos": p, "neg": n})
    out = Path(__file__).with_name("sentiment_corpus.jsonl")
    with out.open("w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
