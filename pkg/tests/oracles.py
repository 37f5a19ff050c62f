"""Independent brute-force oracles used to cross-check the library.

Everything here is straight-line pure Python over lists and dicts: no numpy,
no imports from the package under test, no grouping shortcuts.  Deliberately
slow and obvious.
"""

from itertools import combinations
from math import factorial


def correctness(truth, preds):
    """preds: list of per-model label lists -> list of per-model 0/1 lists."""
    return [[1 if p[n] == truth[n] else 0 for n in range(len(truth))] for p in preds]


def accuracies(bits):
    return [sum(row) / len(row) for row in bits]


def negative_set(bits, focal):
    return [n for n, ok in enumerate(bits[focal]) if not ok]


def pair_counts(bits, a, b, subset):
    n11 = n10 = n01 = n00 = 0
    for n in subset:
        if bits[a][n] and bits[b][n]:
            n11 += 1
        elif bits[a][n] and not bits[b][n]:
            n10 += 1
        elif not bits[a][n] and bits[b][n]:
            n01 += 1
        else:
            n00 += 1
    return n11, n10, n01, n00


def kappa_pair_div(bits, a, b, subset):
    n11, n10, n01, n00 = pair_counts(bits, a, b, subset)
    denom = (n11 + n10) * (n10 + n00) + (n11 + n01) * (n01 + n00)
    if denom == 0:
        return 0.0
    return 1.0 - 2.0 * (n11 * n00 - n01 * n10) / denom


def ck_team(bits, team, subset):
    pairs = list(combinations(team, 2))
    return sum(kappa_pair_div(bits, a, b, subset) for a, b in pairs) / len(pairs)


def bd_team(bits, team, subset):
    pairs = list(combinations(team, 2))
    total = 0.0
    for a, b in pairs:
        _, n10, n01, _ = pair_counts(bits, a, b, subset)
        total += (n10 + n01) / len(subset)
    return total / len(pairs)


def kw_team(bits, team, subset):
    size = len(team)
    total = 0
    for n in subset:
        correct = sum(bits[m][n] for m in team)
        total += correct * (size - correct)
    return total / (len(subset) * size * size)


def gd_team(bits, team, subset):
    size = len(team)
    counts = [0] * (size + 1)
    for n in subset:
        wrong = sum(1 - bits[m][n] for m in team)
        counts[wrong] += 1
    n = len(subset)
    p1 = sum((i / size) * (counts[i] / n) for i in range(1, size + 1))
    if p1 == 0.0:
        return 1.0
    p2 = sum((i / size) * ((i - 1) / (size - 1)) * (counts[i] / n) for i in range(2, size + 1))
    return 1.0 - p2 / p1


METRIC_FNS = {"ck": ck_team, "bd": bd_team, "kw": kw_team, "gd": gd_team}


def metric_team(metric, bits, team, subset):
    return METRIC_FNS[metric](bits, team, subset)


def rank_weights(values):
    """Ascending average ranks normalized to sum 1, via the counting formula
    rank_i = 1 + #(v < v_i) + #(ties other than i) / 2."""
    ranks = []
    for i, v in enumerate(values):
        below = sum(1 for w in values if w < v)
        tied = sum(1 for j, w in enumerate(values) if w == v and j != i)
        ranks.append(1.0 + below + tied / 2.0)
    total = sum(ranks)
    return [r / total for r in ranks]


def focal_scores(metric, truth, preds, candidates_by_size):
    """Straight-line focal diversity calculation (no grouping reuse).

    Mirrors the contract: raw scores per (size, focal) scaled min-max (all
    equal -> 0.5 for every team), error-free focal models skipped with weight
    renormalization, all-perfect teams score 0.5.
    """
    bits = correctness(truth, preds)
    accs = accuracies(bits)
    num_models = len(preds)
    neg = {f: negative_set(bits, f) for f in range(num_models)}
    metric = metric[2:] if metric.startswith("f-") else metric

    scaled = {}
    for size, teams in candidates_by_size.items():
        for focal in range(num_models):
            if not neg[focal]:
                continue
            group = [tuple(t) for t in teams if focal in t]
            if not group:
                continue
            raw = {t: metric_team(metric, bits, t, neg[focal]) for t in group}
            lo = min(raw.values())
            hi = max(raw.values())
            for t in group:
                if hi == lo:
                    scaled[(size, focal, t)] = 0.5
                else:
                    scaled[(size, focal, t)] = (raw[t] - lo) / (hi - lo)

    out = {}
    for size, teams in candidates_by_size.items():
        for team in teams:
            team = tuple(team)
            weights = rank_weights([accs[m] for m in team])
            entries = [
                (scaled[(size, f, team)], w)
                for f, w in zip(team, weights)
                if neg[f]
            ]
            if not entries:
                out[team] = 0.5
            else:
                wsum = sum(w for _, w in entries)
                out[team] = sum(s * w for s, w in entries) / wsum
    return out


def plurality_label(preds_col, team, accs):
    """Majority label with (count, summed accuracy, lowest class) tie-break."""
    tally = {}
    for m in team:
        c = preds_col[m]
        cnt, wsum = tally.get(c, (0, 0.0))
        tally[c] = (cnt + 1, wsum + accs[m])
    best = None
    for c in sorted(tally):
        cnt, wsum = tally[c]
        if best is None:
            best = (c, cnt, wsum)
        elif cnt > best[1] or (cnt == best[1] and wsum > best[2]):
            best = (c, cnt, wsum)
    return best[0]


def ensemble_accuracy(truth, preds, team):
    bits = correctness(truth, preds)
    accs = accuracies(bits)
    hits = 0
    for n in range(len(truth)):
        col = [preds[m][n] for m in range(len(preds))]
        if plurality_label(col, team, accs) == truth[n]:
            hits += 1
    return hits / len(truth)


def binomial(m, s):
    """C(m, s) via factorials, independent of math.comb."""
    return factorial(m) // (factorial(s) * factorial(m - s))


def survivors_of(teams, pruned):
    """Teams not containing any pruned entry as a subset (plain set algebra)."""
    pruned_sets = [set(p) for p in pruned]
    return [t for t in teams if not any(p <= set(t) for p in pruned_sets)]


def quality(selected, accuracy_by_team, reference, num_models, scope=None):
    """Recompute precision/recall/cost reduction from raw accuracies."""
    good = {t for t, a in accuracy_by_team.items() if a >= reference}
    if scope is not None:
        good = {t for t in good if len(t) == scope}
    sel = [tuple(t) for t in selected]
    hits = [t for t in sel if t in good]
    precision = len(hits) / len(sel) if sel else 0.0
    recall = len(hits) / len(good) if good else 0.0
    costs = [(num_models - len(t)) / num_models for t in sel]
    return {
        "precision": precision,
        "recall": recall,
        "cost_range": (min(costs), max(costs)) if costs else None,
    }
