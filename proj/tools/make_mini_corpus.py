#!/usr/bin/env python3
"""Writes data/mini.csv: 64 synthetic users (4 per type), 4 posts each.

Every post mixes cue words for the user's four letters with shared filler,
stopwords, links and punctuation, so the full preprocessing chain and the
CSV quoting rules are exercised.
"""
import csv
import itertools
import pathlib
import random

CUES = {
    "I": ["quiet", "alone", "solitude", "recharge", "introspection", "reading", "homebody", "reserved"],
    "E": ["party", "crowd", "socializing", "outgoing", "festival", "chatting", "networking", "energized"],
    "N": ["theory", "abstract", "imagination", "possibilities", "patterns", "future", "symbolism", "vision"],
    "S": ["practical", "details", "routine", "hands-on", "concrete", "facts", "cooking", "gardening"],
    "T": ["logic", "analysis", "efficiency", "debate", "objective", "systems", "proof", "rational"],
    "F": ["feelings", "empathy", "harmony", "compassion", "values", "kindness", "hugs", "caring"],
    "J": ["planning", "schedule", "deadlines", "organized", "lists", "structure", "decided", "tidy"],
    "P": ["spontaneous", "flexible", "improvising", "wandering", "procrastinating", "options", "adventure", "whatever"],
}
FILLER = ["today", "really", "think", "people", "time", "know", "good", "love", "work", "music",
          "movie", "friend", "game", "week", "coffee", "books", "cats", "running", "studies", "parties"]
STOPS = ["the", "and", "i", "you", "is", "was", "of", "to", "a", "it", "that", "with"]
EXTRAS = ["http://example.com/{}", "https://youtu.be/{}", "www.site{}.org", ":)", "!!", "...", "I'm", "\"quoted\"",
          "well, yes", "LOL"]


def post(rng, code):
    words = []
    for letter in code:
        words += rng.sample(CUES[letter], 2)
    words += rng.sample(FILLER, 4) + rng.sample(STOPS, 4)
    words.append(rng.choice(EXTRAS).format(rng.randint(1, 999)))
    rng.shuffle(words)
    if rng.random() < 0.5:
        words[0] = words[0].capitalize()
    return " ".join(words) + rng.choice([".", "!", "?", ""])


def main():
    rng = random.Random(7)
    codes = ["".join(t) for t in itertools.product("EI", "SN", "FT", "PJ")]
    rows = []
    for code in codes:
        for _ in range(4):
            rows.append((code, "|||".join(post(rng, code) for _ in range(4))))
    rng.shuffle(rows)
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "mini.csv"
    with out.open("w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        w.writerow(["type", "posts"])
        w.writerows(rows)


if __name__ == "__main__":
    main()
