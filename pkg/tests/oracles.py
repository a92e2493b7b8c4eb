"""Brute-force reference implementations used only to check the real ones.

Everything here is written from the coefficient definitions with plain
loops and floats, independently of src/typic/metrics.py. Keep it that way:
these oracles are the second route of every dual-route check.
"""

from __future__ import annotations


def kappa_oracle(pairs):
    """Cohen's kappa from a list of (label_a, label_b) pairs."""
    n = len(pairs)
    p_o = sum(1 for a, b in pairs if a == b) / n
    categories = {a for a, _ in pairs} | {b for _, b in pairs}
    p_e = 0.0
    for c in categories:
        p_a = sum(1 for a, _ in pairs if a == c) / n
        p_b = sum(1 for _, b in pairs if b == c) / n
        p_e += p_a * p_b
    if p_e == 1.0:
        return 1.0 if p_o == 1.0 else float("nan")
    return (p_o - p_e) / (1.0 - p_e)


def _pooled_values(units):
    """Ratings pooled over units with at least two ratings."""
    return [v for unit in units if len(unit) >= 2 for v in unit]


def _ordinal_delta2(values):
    """Squared ordinal distances keyed by category pair, from pooled counts."""
    categories = sorted(set(values))
    counts = {c: values.count(c) for c in categories}
    delta2 = {}
    for i, c in enumerate(categories):
        for j, k in enumerate(categories):
            lo, hi = min(i, j), max(i, j)
            between = sum(counts[categories[g]] for g in range(lo, hi + 1))
            d = between - (counts[c] + counts[k]) / 2.0
            delta2[(c, k)] = d * d
    return delta2


def alpha_oracle(units, distance="nominal"):
    """Krippendorff's alpha by literal pair enumeration.

    ``units`` is a list of rating lists (one list per item). Units with a
    single rating are dropped, as the definition prescribes.
    """
    usable = [u for u in units if len(u) >= 2]
    pooled = _pooled_values(units)
    n = len(pooled)
    if not usable or n < 2:
        return None
    if distance == "ordinal":
        delta2 = _ordinal_delta2(pooled)

        def d2(a, b):
            return delta2[(a, b)]

    else:

        def d2(a, b):
            return 0.0 if a == b else 1.0

    observed = 0.0
    for unit in usable:
        m = len(unit)
        for i in range(m):
            for j in range(m):
                if i != j:
                    observed += d2(unit[i], unit[j]) / (m - 1)
    observed /= n

    expected = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                expected += d2(pooled[i], pooled[j])
    expected /= n * (n - 1)
    if expected == 0.0:
        return None
    return 1.0 - observed / expected


def majority_vote_oracle(scores):
    """Exhaustive majority vote with ties resolved to the worse score."""
    best = None
    for candidate in sorted(set(scores)):
        count = scores.count(candidate)
        if best is None or count > best[1]:
            best = (candidate, count)
    return best[0]


def micro_prf_oracle(gold_sets, pred_sets):
    """Micro precision/recall/F1 by counting TP/FP/FN over label sets."""
    tp = fp = fn = 0
    for g, p in zip(gold_sets, pred_sets):
        tp += len(g & p)
        fp += len(p - g)
        fn += len(g - p)
    if tp == fp == fn == 0:
        return 1.0, 1.0, 1.0
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    if precision + recall == 0:
        return precision, recall, 0.0
    return precision, recall, 2 * precision * recall / (precision + recall)


def token_overlap_oracle(pred_tokens, gold_tokens):
    """Bag-of-token P/R/F1 via multiset intersection done by hand."""
    remaining = list(gold_tokens)
    common = 0
    for t in pred_tokens:
        if t in remaining:
            remaining.remove(t)
            common += 1
    p = common / len(pred_tokens)
    r = common / len(gold_tokens)
    f1 = 0.0 if p + r == 0 else 2 * p * r / (p + r)
    return p, r, f1


def all_five_vote_multisets():
    """All 21 multisets of five votes over {1, 2, 3}."""
    out = []
    for ones in range(6):
        for twos in range(6 - ones):
            threes = 5 - ones - twos
            out.append((1,) * ones + (2,) * twos + (3,) * threes)
    assert len(out) == 21
    return out
