#!/usr/bin/env python3
"""Regenerates the planted "mars" fixture corpus (30 results).

Each result mixes sentences from a space-science pool, a confectionery pool
(competitor vocabulary), a music pool and filler, with the space share
planted per rank so both scorers see a clear target-term gradient.
"""
import json
import random
from pathlib import Path

rng = random.Random(20141)

SPACE = [
    "Mars is the fourth planet from the Sun.",
    "The rover drove across the crater floor.",
    "Olympus Mons is the tallest volcano on the red planet.",
    "A spacecraft entered orbit around Mars last year.",
    "Martian dust storms can cover the whole planet.",
    "The orbiter mapped water ice near the polar crater.",
    "Astronomers used a telescope to watch the red planet.",
    "The lander measured marsquakes beneath the surface.",
    "Phobos and Deimos orbit Mars closely.",
    "The Martian sky looks butterscotch at noon.",
]
CANDY = [
    "A Mars bar is a chocolate bar with caramel and nougat.",
    "The candy aisle stocks chocolate and caramel treats.",
    "Nougat and caramel give the chocolate its chew.",
]
MUSIC = [
    "Bruno Mars released a new album this spring.",
    "The singer Bruno Mars played two encore songs.",
]
FILLER = [
    "Read more about this topic on our site.",
    "Click here to subscribe to the newsletter.",
    "This page was last updated on Monday.",
    "Share this article with your friends.",
    "Contact us for more information.",
]


def result_id(url: str) -> str:
    """FNV-1a 64 of the URL with scheme removed and host lowercased."""
    rest = url.split("://", 1)[1]
    host, _, path = rest.partition("/")
    h = 0xCBF29CE484222325
    for b in (host.lower() + "/" + path).encode():
        h ^= b
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return f"{h:016x}"


GENERIC = ("news report weather travel guide photo video market price review city history "
           "science school sport team game movie book author story family garden kitchen recipe "
           "health doctor museum river mountain island ocean forest bridge train airport hotel "
           "festival concert ticket library theatre painting camera phone laptop software").split()


def make_doc(space_share: float, candy: bool, music: bool) -> str:
    # A fixed-size sample of everyday vocabulary keeps each result's
    # off-profile term set about the same size.
    sentences = [" ".join(rng.sample(GENERIC, 12)).capitalize() + "."]
    n = 12
    n_space = round(space_share * n)
    space = rng.sample(SPACE, len(SPACE))
    for i in range(n):
        if i < n_space:
            sentences.append(space[i % len(space)])
        else:
            sentences.append(rng.choice(FILLER))
    if candy:
        sentences.insert(rng.randrange(len(sentences) + 1), rng.choice(CANDY))
    if music:
        sentences.insert(rng.randrange(len(sentences) + 1), rng.choice(MUSIC))
    rng.shuffle(sentences)
    return " ".join(sentences)


def main() -> None:
    here = Path(__file__).resolve().parent
    lines = [json.dumps({"query": "mars", "engine": "planted", "recorded_at": "2014-06-01T00:00:00Z"},
                        separators=(",", ":"))]
    # One planted space share per result, dealt in an order unrelated to
    # the native rank.
    # Ten on-topic results with graded density, twenty mostly off-topic.
    shares = [level / 12 for level in range(12, 2, -1)] + [rng.choice([0, 1, 2]) / 12 for _ in range(20)]
    rng.shuffle(shares)
    for rank in range(1, 31):
        space_share = shares[rank - 1]
        candy = rng.random() < 0.25
        music = rng.random() < 0.2
        url = f"https://results.example/{rank:02d}/{rng.randrange(10**6):06d}"
        title_pool = SPACE if space_share >= 0.5 else (CANDY if candy else FILLER)
        record = {
            "id": result_id(url),
            "rank": rank,
            "url": url,
            "title": rng.choice(title_pool).rstrip("."),
            "snippet": make_doc(space_share, False, False),
            "body": make_doc(space_share, candy, music),
        }
        lines.append(record)
    out = [lines[0]]
    for rec in lines[1:]:
        out.append(json.dumps(rec, separators=(",", ":"), ensure_ascii=False))
    (here / "mars.jsonl").write_text("\n".join(out) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
