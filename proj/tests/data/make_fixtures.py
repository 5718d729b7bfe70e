"""Generates test fixtures and their expected values with independent code.

Run from this directory: python3 make_fixtures.py
Outputs are committed; tests read them and never call this script.
"""
import json
import random
import re
from fractions import Fraction

import numpy as np
from scipy import stats

DRUGS = ["percocet", "codeine", "oxycodone", "oxycontin", "hydrocodone", "vicodin", "fentanyl"]
FILLER = ["pain", "today", "feel", "doctor", "sleep", "music", "lean", "cup", "night",
          "surgery", "teeth", "work", "happy", "tired", "weekend", "coffee"]
DECOYS = ["codeines", "percocets", "oxycodonex", "vicodinal", "pre-codeine".replace("-", "")]


def write_jsonl(path, objs):
    with open(path, "w") as f:
        for o in objs:
            f.write(json.dumps(o, sort_keys=True) + "\n")


def tweet(i, text, rng, **over):
    o = {
        "id_str": str(1000 + i),
        "created_at": "Mon Jun %02d 12:%02d:00 +0000 2015" % (1 + i % 28, i % 60),
        "text": text,
        "retweet_count": rng.randint(0, 50),
        "favorite_count": rng.randint(0, 30),
        "in_reply_to_status_id_str": None,
        "entities": {"urls": [{}] * rng.randint(0, 2),
                     "hashtags": [{}] * rng.randint(0, 3),
                     "symbols": [{}] * rng.randint(0, 1)},
        "user": {"id_str": "u%d" % (i % 23), "verified": rng.random() < 0.1,
                 "friends_count": rng.randint(0, 5000), "followers_count": rng.randint(0, 9000),
                 "statuses_count": rng.randint(1, 200000), "favourites_count": rng.randint(0, 9000),
                 "created_at": "%04d-%02d-15T08:00:00Z" % (rng.randint(2008, 2015), rng.randint(1, 12))},
    }
    if rng.random() < 0.3:
        o["retweeted_status"] = {"id_str": "9"}
    if rng.random() < 0.2:
        o["in_reply_to_status_id_str"] = str(rng.randint(1, 10**9))
    r = rng.random()
    if r < 0.3:
        o["possibly_sensitive"] = True
    elif r < 0.6:
        o["possibly_sensitive"] = False
    o.update(over)
    return o


def keyword_fixture():
    rng = random.Random(37)
    objs = []
    hits = set(rng.sample(range(100), 37))
    for i in range(100):
        words = [rng.choice(FILLER) for _ in range(rng.randint(2, 7))]
        if i in hits:
            kw = rng.choice(DRUGS)
            form = rng.choice([kw, kw.upper(), "#" + kw, kw + ",", kw.capitalize() + "!"])
            words.insert(rng.randint(0, len(words)), form)
        elif rng.random() < 0.4:
            words.insert(rng.randint(0, len(words)), rng.choice(DECOYS))
        objs.append(tweet(i, " ".join(words), rng))
    write_jsonl("keyword_fixture.jsonl", objs)
    # Oracle: regex word runs over lowercased text.
    kept = [o["id_str"] for o in objs
            if set(re.findall(r"[a-z0-9\x80-￿]+", o["text"].lower())) & set(DRUGS)]
    return len(kept)


def feature_fixture():
    rng = random.Random(30)
    objs = [tweet(i, "codeine sample %d" % i, rng) for i in range(30)]
    write_jsonl("features_fixture.jsonl", objs)
    rows = []
    for o in objs:
        u = o["user"]
        e = o["entities"]
        rows.append([
            o["id_str"],
            1 if "retweeted_status" in o else 0,
            o["retweet_count"], o["favorite_count"],
            1 if o.get("in_reply_to_status_id_str") else 0,
            1 if o.get("possibly_sensitive") is True else 0,
            1 if e["urls"] else 0, 1 if e["symbols"] else 0, 1 if e["hashtags"] else 0,
            1 if u["verified"] else 0,
            u["friends_count"], u["followers_count"], u["statuses_count"], u["favourites_count"],
        ])
    with open("features_expected.csv", "w") as f:
        for r in rows:
            f.write(",".join(str(x) for x in r) + "\n")


def welch_fixtures():
    rng = np.random.default_rng(20)
    pairs = []
    for i in range(22):
        if i < 20:
            na, nb = int(rng.integers(2, 40)), int(rng.integers(2, 40))
            a = np.round(rng.normal(rng.uniform(-5, 5), rng.uniform(0.1, 4), na), 6)
            b = np.round(rng.normal(rng.uniform(-5, 5), rng.uniform(0.1, 4), nb), 6)
            if i == 3:  # heavy-tailed counts, the shape of follower counts
                a = np.round(rng.lognormal(3, 1.5, na))
                b = np.round(rng.lognormal(7, 2, nb))
            if i == 7:  # one constant sample
                a = np.zeros(na)
        else:
            a = np.round(rng.normal(0.0, 1.0, 50), 6)
            b = np.round(rng.normal(0.4 if i == 20 else 3.0, 1.7, 50), 6)
        res = stats.ttest_ind(a, b, equal_var=False)
        va, vb = a.var(ddof=1) / len(a), b.var(ddof=1) / len(b)
        df = (va + vb) ** 2 / (va ** 2 / (len(a) - 1) + vb ** 2 / (len(b) - 1))
        pairs.append({"a": a.tolist(), "b": b.tolist(), "t": float(res.statistic),
                      "df": float(df), "p": float(res.pvalue)})
    with open("welch_fixtures.json", "w") as f:
        json.dump(pairs, f, indent=1)


def mixture_oracle():
    # theta, phi over 3 words and 2 topics; doc biterms (0,1), (1,2), (0,1).
    theta = [Fraction(3, 5), Fraction(2, 5)]
    phi = [[Fraction(1, 2), Fraction(3, 10), Fraction(1, 5)],
           [Fraction(1, 10), Fraction(3, 10), Fraction(3, 5)]]
    doc = [(0, 1), (1, 2), (0, 1)]
    out = [Fraction(0)] * 2
    for w1, w2 in doc:
        raw = [theta[z] * phi[z][w1] * phi[z][w2] for z in range(2)]
        s = sum(raw)
        for z in range(2):
            out[z] += Fraction(1, len(doc)) * raw[z] / s
    return [float(x) for x in out]


if __name__ == "__main__":
    print("keyword hits:", keyword_fixture())
    feature_fixture()
    welch_fixtures()
    print("mixture:", ["%.17g" % x for x in mixture_oracle()])
