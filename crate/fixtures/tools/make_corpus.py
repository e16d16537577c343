#!/usr/bin/env python3
"""Generate the synthetic 226-record corpus fixture.

The per-country citation lists are chosen so that full-counting country
aggregation reproduces the published indicator table (Pub, Cites, CPP,
Std.Dev, NCP, Max.Cites). Zero-cited papers are shared between countries,
which is how the 283 country/paper pairs fit into 226 records. Everything
else (titles, abstracts, keywords, references, authors, years) is synthetic.

Usage: python3 make_corpus.py > ../corpus/records.csv
"""
import csv
import math
import random
import sys

# country -> (papers, sorted non-zero citation counts); zero-cited papers fill the rest.
CITATIONS = {
    "United States": (67, [207, 73, 62, 59, 47, 45, 43, 41, 35, 33, 32, 31, 23, 21, 18, 18, 14, 14, 7, 5, 5, 2, 2, 2, 2] + [1] * 16),
    "China": (46, [54, 29, 24, 18, 18, 15, 11, 9, 5] + [1] * 14),
    "India": (34, [15, 4, 2, 2, 2] + [1] * 8),
    "South Korea": (29, [134, 17, 12, 10, 9, 7, 2] + [1] * 9),
    "Australia": (16, [54, 14, 7, 7, 5, 5, 4, 3, 2, 1]),
    "Canada": (10, [54, 32, 21, 16, 2, 1]),
    "Italy": (10, [31, 21, 18, 5, 4, 1, 1]),
    "United Kingdom": (9, [26, 2, 1, 1, 1]),
    "France": (8, [31, 17, 5, 2, 1, 1]),
    "Germany": (8, [36, 28, 21, 5, 1, 1, 1]),
    "Japan": (8, [2, 2, 2, 1, 1, 1, 1, 1]),
    "Singapore": (6, [37, 3, 1]),
    "Malaysia": (5, [26, 2, 1]),
    "Saudi Arabia": (5, [11, 8, 4, 4]),
    "Spain": (5, [6, 1, 1]),
    "Norway": (4, [5, 4, 3, 2]),
    "Pakistan": (4, [8, 6, 4, 4]),
    "Switzerland": (4, [31, 4]),
    "Brazil": (3, [12, 1]),
    "Netherlands": (3, [20, 4, 1]),
}

AUTHOR_KEYWORDS = [
    ("PRIVACY", 61), ("BIG DATA", 41), ("CLOUD COMPUTING", 27), ("SECURITY", 25),
    ("AUTHENTICATION", 17), ("ACCESS CONTROL", 13), ("UBIQUITOUS COMPUTING", 13),
    ("PERVASIVE COMPUTING", 12), ("ANONYMIZATION", 10), ("DATA MINING", 8),
    ("PRIVACY-PRESERVING", 8), ("ANONYMITY", 7), ("CLOUD", 7), ("ENCRYPTION", 7),
    ("HADOOP", 7), ("PRIVACY PRESERVATION", 7), ("CONFIDENTIALITY", 6),
    ("DATA ANONYMIZATION", 6), ("HOMOMORPHIC ENCRYPTION", 6), ("MAPREDUCE", 6),
    ("TRUST", 4), ("BIOMETRICS", 3), ("SHOULDER SURFING", 2), ("LAW AND REGULATION", 2),
    ("INTERNET OF THINGS", 4), ("E-GOVERNMENT", 2), ("WIRELESS SENSOR NETWORKS", 3),
]

INDEX_KEYWORDS = [
    ("DATA PRIVACY", 92), ("CRYPTOGRAPHY", 61), ("BIG DATA", 46), ("CLOUD COMPUTING", 45),
    ("PRIVACY PRESERVING", 41), ("DISTRIBUTED COMPUTER SYSTEMS", 32), ("DIGITAL STORAGE", 29),
    ("UBIQUITOUS COMPUTING", 23), ("INTERNET", 22), ("MOBILE SECURITY", 22),
    ("ACCESS CONTROL", 21), ("SECURITY OF DATA", 21), ("SECURITY", 20), ("DATA MINING", 18),
    ("DATA HANDLING", 17), ("PRIVACY", 17), ("SECURITY AND PRIVACY", 17),
    ("SENSITIVE INFORMATIONS", 16), ("PRIVACY PRESERVATION", 15), ("AUTHENTICATION", 14),
]

TOPICS = [
    ["storage", "hadoop", "mapreduce", "distributed", "cloud", "scalability", "servers", "file", "access", "cluster"],
    ["anonymization", "preserving", "private", "privacy", "release", "mining", "records", "sensitive", "disclosure", "medical"],
    ["encryption", "homomorphic", "authentication", "signature", "scheme", "keys", "protocol", "cryptographic", "proxy", "cipher"],
]
GENERIC = ["data", "analysis", "approach", "system", "users", "information", "model", "framework", "results", "proposed"]
STOP = ["the", "and", "of", "for", "in", "with", "on", "a", "to", "we"]

SURNAMES = ["Wang", "Li", "Huang", "Wu", "Zhou", "Xu", "Sun", "Zhu", "Gao", "Lin", "He", "Guo", "Luo",
            "Smith", "Johnson", "Brown", "Miller", "Davis", "Garcia", "Kim", "Park", "Lee", "Choi",
            "Kumar", "Singh", "Sharma", "Gupta", "Patel", "Rossi", "Bianchi", "Martin", "Bernard",
            "Muller", "Schmidt", "Tanaka", "Suzuki", "Tan", "Lim", "Rahman", "Ahmad", "Alharbi",
            "Garcia-Lopez", "Hansen", "Khan", "Meier", "Silva", "de Vries", "Brown-Jones", "Taylor",
            "Wilson", "Moore", "Clark", "Lewis", "Walker", "Hall", "Young", "King", "Wright", "Scott"]
INITIALS = "ABCDEFGHJKLMNPRSTVWY"


def main(out):
    rng = random.Random(20161213)

    # Build (countries, citations) pairs.
    docs = []
    zero_slots = []
    for country, (papers, cited) in CITATIONS.items():
        for c in cited:
            docs.append(([country], c))
        zero_slots += [country] * (papers - len(cited))
    # Zero-cited papers pair up; the last two span three countries.
    counts = {}
    for c in zero_slots:
        counts[c] = counts.get(c, 0) + 1
    groups = []
    while sum(counts.values()) > 0:
        order = sorted((c for c in counts if counts[c] > 0), key=lambda c: (-counts[c], c))
        size = 3 if sum(counts.values()) in (3, 6) else 2
        group = order[:size]
        assert len(group) == size, counts
        for c in group:
            counts[c] -= 1
        groups.append(group)
    for g in groups:
        docs.append((sorted(g), 0))
    assert len(docs) == 226, len(docs)
    rng.shuffle(docs)

    # Years: growth-shaped; zero-cited papers lean recent.
    years = list(range(2002, 2017))
    weights = [1.25 ** (y - 2002) for y in years]
    recs = []
    for i, (countries, cites) in enumerate(docs):
        if cites == 0:
            year = rng.choices(years[8:], weights[8:])[0]
        elif cites > 40:
            year = rng.choice(range(2004, 2012))
        else:
            year = rng.choices(years[:-1], weights[:-1])[0]
        if set(countries) & {"Canada", "Germany"} and cites > 0:
            year = 2015
        if "Saudi Arabia" in countries and cites > 0:
            year = 2016
        recs.append({"countries": countries, "cites": cites, "year": year, "topic": rng.randrange(3)})

    # Authors: Liu on 7 papers, Chen/Ma/Zhang on 5, everyone else at most 4.
    pool = [f"{s} {a}." for s in SURNAMES for a in INITIALS]
    rng.shuffle(pool)
    usage = {}
    for r in recs:
        r["authors"] = []
    for name, n in [("Liu Y.", 7), ("Chen X.", 5), ("Ma J.", 5), ("Zhang H.", 5)]:
        for r in rng.sample(recs, n):
            r["authors"].append(name)
    pi = 0
    for r in recs:
        want = rng.randint(1, 4)
        while len(r["authors"]) < want:
            name = pool[pi % len(pool)]
            pi += 1
            if usage.get(name, 0) >= rng.choice([1, 1, 2, 3, 4]):
                continue
            if name in r["authors"]:
                continue
            usage[name] = usage.get(name, 0) + 1
            r["authors"].append(name)
        rng.shuffle(r["authors"])

    # Keywords with exact document frequencies.
    for r in recs:
        r["de"] = []
        r["id_kw"] = []
    for kw, n in AUTHOR_KEYWORDS:
        for r in rng.sample(recs, n):
            r["de"].append(kw)
    for kw, n in INDEX_KEYWORDS:
        for r in rng.sample(recs, n):
            r["id_kw"].append(kw)

    # References: shared popular works plus topic pools.
    popular = ["Canny,2002", "Al-Muhtadi,2002", "Agrawal,2000", "Sweeney,2002", "Weiser,1991"]
    topic_refs = [[f"{s},{2003 + (k * 7 + t) % 12}" for k, s in enumerate(SURNAMES[t * 15:(t + 1) * 15])] for t in range(3)]
    for i, r in enumerate(recs):
        refs = set()
        for p, prob in zip(popular, [0.12, 0.10, 0.08, 0.06, 0.05]):
            if rng.random() < prob:
                refs.add(p)
        refs.update(rng.sample(topic_refs[r["topic"]], rng.randint(2, 6)))
        if rng.random() < 0.3:
            refs.add(rng.choice(topic_refs[rng.randrange(3)]))
        refs.add(f"Solo{i + 1},{r['year']}")
        r["refs"] = sorted(refs)

    # Text.
    titles = set()
    for i, r in enumerate(recs):
        vocab = TOPICS[r["topic"]]
        while True:
            words = rng.sample(vocab, 3) + rng.sample(GENERIC, 2)
            title = " ".join(w.capitalize() for w in words) + f" in Big Data Privacy {i + 1}"
            if title not in titles:
                titles.add(title)
                break
        body = []
        for _ in range(rng.randint(25, 45)):
            pick = rng.random()
            if pick < 0.45:
                body.append(rng.choice(vocab))
            elif pick < 0.7:
                body.append(rng.choice(GENERIC))
            else:
                body.append(rng.choice(STOP))
        r["title"] = title
        r["abstract"] = " ".join(body).capitalize() + "."

    w = csv.writer(out, lineterminator="\n")
    w.writerow(["EID", "Title", "Abstract", "Year", "Document Type", "Language of Original Document",
                "Authors", "Affiliation Countries", "Author Keywords", "Index Keywords", "References", "Cited by"])
    for i, r in enumerate(recs):
        w.writerow([
            f"2-s2.0-{85000000000 + i * 7919}",
            r["title"],
            r["abstract"],
            r["year"],
            "Article" if i % 5 < 3 else "Conference Paper",
            "English",
            "; ".join(r["authors"]),
            "; ".join(r["countries"]),
            "; ".join(r["de"]),
            "; ".join(r["id_kw"]),
            "; ".join(r["refs"]),
            r["cites"],
        ])


if __name__ == "__main__":
    main(sys.stdout)
