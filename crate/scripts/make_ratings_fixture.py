#!/usr/bin/env python3
"""Build the synthetic ESC-50 ratings fixture used by the acceptance tests.

The per-rater study data is not bundled. This script constructs 1000 clips
(50 classes x 20) with two integer ratings per clip and algorithm, chosen so
that the aggregate statistics reproduce the published figures:

  * overall clip-level mean / sample SD per algorithm,
  * clip winner tallies with 8 two-way ties,
  * the winning algorithm of every class.

Output is deterministic for a given --seed.

    python3 scripts/make_ratings_fixture.py --out-dir crates/core/tests/data
"""

import argparse
import csv
from pathlib import Path

import numpy as np

ALGOS = ["plm", "fshift", "pitch", "hapticgen"]
PLM, FS, PM, HG = range(4)

MEAN = {PM: 62.6, HG: 57.0, FS: 56.9, PLM: 31.2}
SD = {PM: 22.9, HG: 23.2, FS: 24.3, PLM: 22.9}

# sole winners; with the ties below the co-winner tallies are 403/288/261/56
SOLE = {PM: 397, FS: 283, HG: 257, PLM: 55}
TIES = [(PM, FS)] * 3 + [(PM, HG)] * 2 + [(FS, HG)] * 2 + [(PLM, PM)]

CLASS_WINNER = {}
for c in (10, 18, 20, 21, 24, 35, 36, 41, 44, 47):
    CLASS_WINNER[c] = FS
for c in (3, 5, 7, 9, 11, 13, 14, 16, 17, 23, 33, 43, 46):
    CLASS_WINNER[c] = HG
for c in range(50):
    CLASS_WINNER.setdefault(c, PM)

CLASS_NAMES = (
    "dog rooster pig cow frog cat hen insects sheep crow "
    "rain sea_waves crackling_fire crickets chirping_birds water_drops wind pouring_water toilet_flush thunderstorm "
    "crying_baby sneezing clapping breathing coughing footsteps laughing brushing_teeth snoring drinking_sipping "
    "door_wood_knock mouse_click keyboard_typing door_wood_creaks can_opening washing_machine vacuum_cleaner "
    "clock_alarm clock_tick glass_breaking "
    "helicopter chainsaw siren car_horn engine train church_bells airplane fireworks hand_saw"
).split()

N_CLASSES, PER_CLASS = 50, 20
N = N_CLASSES * PER_CLASS


def allocate_winners(rng):
    """Designated winner set for every clip, class-major order."""
    tie_class = {c: TIES[i] for i, c in enumerate(rng.choice(N_CLASSES, len(TIES), replace=False))}
    counts = np.zeros((N_CLASSES, 4), dtype=int)
    others_total = {a: SOLE[a] for a in range(4)}
    for c in range(N_CLASSES):
        n = PER_CLASS - (c in tie_class)
        w = CLASS_WINNER[c]
        counts[c, w] = round(0.5 * n)
        rest = [a for a in range(4) if a != w]
        weights = np.array([others_total[a] for a in rest], dtype=float)
        share = np.floor(weights / weights.sum() * (n - counts[c, w])).astype(int)
        counts[c, rest] = share
        counts[c, rest[int(np.argmax(weights))]] += n - counts[c].sum()

    target = np.array([SOLE[a] for a in range(4)])
    while (counts.sum(axis=0) != target).any():
        diff = counts.sum(axis=0) - target
        a, b = int(np.argmax(diff)), int(np.argmin(diff))
        for c in rng.permutation(N_CLASSES):
            w = CLASS_WINNER[c]
            if counts[c, a] == 0:
                continue
            after = counts[c].copy()
            after[a] -= 1
            after[b] += 1
            if all(after[w] > after[x] for x in range(4) if x != w):
                counts[c] = after
                break
        else:
            raise RuntimeError("cannot balance winner allocation")

    winners = []
    for c in range(N_CLASSES):
        clip = [(a,) for a in range(4) for _ in range(counts[c, a])]
        if c in tie_class:
            clip.append(tie_class[c])
        order = rng.permutation(len(clip))
        winners.extend(clip[i] for i in order)
    return winners


def sample(winners, mu, sigma, class_eff, seed):
    rng = np.random.default_rng(seed)
    v = np.zeros((N, 4))
    for i, win in enumerate(winners):
        c = i // PER_CLASS
        while True:
            x = np.clip(np.round(2 * (mu + class_eff[c] + sigma * rng.standard_normal(4))) / 2, 0, 100)
            top = sorted(range(4), key=lambda a: -x[a])
            if len(win) == 1 and top[0] == win[0] and x[top[0]] > x[top[1]]:
                break
            if len(win) == 2 and set(top[:2]) == set(win) and min(x[list(win)]) > x[top[2]]:
                x[list(win)] = max(x[list(win)])
                break
        v[i] = x
    return v


def stats(v):
    return v.mean(axis=0), v.std(axis=0, ddof=1)


def class_ok(v, c):
    m = v[c * PER_CLASS:(c + 1) * PER_CLASS].mean(axis=0)
    w = CLASS_WINNER[c]
    return all(m[w] > m[a] for a in range(4) if a != w)


def clip_ok(x, win):
    if len(win) == 1:
        return all(x[win[0]] > x[a] for a in range(4) if a != win[0])
    a, b = win
    return x[a] == x[b] and all(x[a] > x[o] for o in range(4) if o not in win)


def repair_classes(v, winners, rng):
    """Lower competing ratings on clips a competitor does not win until
    every class winner leads its class mean."""
    for c in range(N_CLASSES):
        rows = range(c * PER_CLASS, (c + 1) * PER_CLASS)
        w = CLASS_WINNER[c]
        while not class_ok(v, c):
            m = v[list(rows)].mean(axis=0)
            a = max((x for x in range(4) if x != w), key=lambda x: m[x])
            i = int(rng.choice([r for r in rows if a not in winners[r] and v[r, a] >= 0.5]))
            v[i, a] -= 0.5
    return v


def refine(v, winners, rng, tol=0.01, max_steps=2_000_000):
    """Nudge individual ratings by 0.5 until every mean and SD is within
    `tol` of its target, never breaking a clip or class winner."""
    tm = np.array([MEAN[a] for a in range(4)])
    ts = np.array([SD[a] for a in range(4)])
    s1, s2 = v.sum(axis=0), (v ** 2).sum(axis=0)

    def err(s1, s2):
        mean = s1 / N
        sd = np.sqrt((s2 - s1 ** 2 / N) / (N - 1))
        return mean - tm, sd - ts

    for _ in range(max_steps):
        em, es = err(s1, s2)
        if max(abs(em).max(), abs(es).max()) < tol:
            return v
        a = int(rng.integers(4))
        i = int(rng.integers(N))
        mean = s1[a] / N
        # raise the mean: move up; raise the SD: move away from the mean
        want_up = em[a] < -tol or (abs(em[a]) < tol and (es[a] < 0) == (v[i, a] > mean))
        step = 0.5 if want_up else -0.5
        cols = list(winners[i]) if (len(winners[i]) == 2 and a in winners[i]) else [a]
        old = v[i].copy()
        v[i, cols] += step
        if not (0 <= v[i].min() and v[i].max() <= 100 and clip_ok(v[i], winners[i]) and class_ok(v, i // PER_CLASS)):
            v[i] = old
            continue
        n1 = s1 + (v[i] - old)
        n2 = s2 + (v[i] ** 2 - old ** 2)
        new_m, new_s = err(n1, n2)
        if (new_m ** 2 + new_s ** 2).sum() < (em ** 2 + es ** 2).sum():
            s1, s2 = n1, n2
        else:
            v[i] = old
    raise RuntimeError("refinement did not converge")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", type=Path, required=True)
    ap.add_argument("--seed", type=int, default=2025)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    winners = allocate_winners(rng)
    class_eff = rng.normal(0.0, 5.0, (N_CLASSES, 4))
    for c in range(N_CLASSES):
        class_eff[c, CLASS_WINNER[c]] += 4.0

    mu = np.array([MEAN[a] for a in range(4)])
    sigma = np.array([SD[a] for a in range(4)])
    tm, ts = mu.copy(), sigma.copy()
    for _ in range(25):
        v = sample(winners, mu, sigma, class_eff, args.seed + 1)
        m, s = stats(v)
        mu += tm - m
        sigma *= ts / s
    v = sample(winners, mu, sigma, class_eff, args.seed + 1)
    v = repair_classes(v, winners, rng)
    v = refine(v, winners, rng)

    args.out_dir.mkdir(parents=True, exist_ok=True)
    ids = [f"syn-{i // PER_CLASS:02d}-{i % PER_CLASS:02d}" for i in range(N)]
    with open(args.out_dir / "manifest_synthetic.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["clip_id", "path", "class_id", "class_name", "category_id"])
        for i, cid in enumerate(ids):
            c = i // PER_CLASS
            w.writerow([cid, f"audio/{cid}.wav", c, CLASS_NAMES[c], c // 10 + 1])

    raters = [f"p{k:02d}" for k in range(1, 31)]
    with open(args.out_dir / "ratings_synthetic.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["clip_id", "algorithm", "rater_id", "rating"])
        for i, cid in enumerate(ids):
            pair = rng.choice(len(raters), 2, replace=False)
            for a in range(4):
                total = int(round(2 * v[i, a]))
                lo, hi = max(0, total - 100), min(100, total)
                r1 = int(np.clip(total // 2 + rng.integers(-8, 9), lo, hi))
                w.writerow([cid, ALGOS[a], raters[pair[0]], r1])
                w.writerow([cid, ALGOS[a], raters[pair[1]], total - r1])

    m, s = stats(v)
    for a in (PM, HG, FS, PLM):
        print(f"{ALGOS[a]:<10} mean {m[a]:.3f} sd {s[a]:.3f}")
    tally = {a: 0 for a in range(4)}
    for win in winners:
        for a in win:
            tally[a] += 1
    print("clip winners", {ALGOS[a]: n for a, n in tally.items()}, "ties", sum(len(x) == 2 for x in winners))


if __name__ == "__main__":
    main()
