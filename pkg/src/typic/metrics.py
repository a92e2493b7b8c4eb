"""Evaluation suite: coverage, agreement coefficients, informativeness
aggregation, multi-label selection metrics, and slot-overlap scoring.

Every ratio-valued result is an exact ``fractions.Fraction`` so that
percentages can be reported without float drift; callers convert to float
for display.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import (
    DegenerateChance,
    DimensionMismatch,
    EmptyInput,
    InsufficientData,
    MissingRating,
    NoVariation,
)
from .templates import NOT_APPLICABLE, TemplateSet
from .tokenizers import DEFAULT_TOKENIZER, normalized_tokens

Label = Hashable


@dataclass(frozen=True)
class LabelVector:
    """Multi-label template-selection output, ordered by the template set."""

    bits: tuple[bool, ...]

    @classmethod
    def from_ids(cls, ids: Iterable[str], template_set: TemplateSet) -> "LabelVector":
        index = template_set.label_index()
        bits = [False] * len(template_set)
        for template_id in ids:
            if template_id == NOT_APPLICABLE:
                continue
            bits[index[template_id]] = True
        return cls(tuple(bits))

    @classmethod
    def empty(cls, size: int) -> "LabelVector":
        return cls((False,) * size)

    def ids(self, template_set: TemplateSet) -> tuple[str, ...]:
        return tuple(t.id for t, bit in zip(template_set, self.bits) if bit)

    def __len__(self) -> int:
        return len(self.bits)


@dataclass
class ReliabilityData:
    """Items with per-annotator labels or scores; missing entries allowed."""

    items: list[tuple[Hashable, dict[str, Label]]]

    def annotators(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for _, ratings in self.items:
            for annotator in ratings:
                seen.setdefault(annotator, None)
        return tuple(sorted(seen))


@dataclass
class AggregatedScore:
    score: int
    vote_counts: dict[int, int]
    comment_id: Hashable | None = None


# ---------------------------------------------------------------------------
# expressiveness


def coverage(labels: Iterable[Label]) -> Fraction:
    """Fraction of diagnoses expressed by some template (label != NotApplicable)."""
    labels = list(labels)
    if not labels:
        raise EmptyInput("no diagnoses given")
    covered = sum(1 for label in labels if label != NOT_APPLICABLE)
    return Fraction(covered, len(labels))


# ---------------------------------------------------------------------------
# agreement coefficients


def _paired_labels(data: ReliabilityData) -> list[tuple[Label, Label]]:
    annotators = data.annotators()
    if len(annotators) != 2:
        raise MissingRating(f"need exactly 2 annotators, found {len(annotators)}")
    a, b = annotators
    pairs = []
    for item_id, ratings in data.items:
        if a not in ratings or b not in ratings:
            raise MissingRating(f"item {item_id!r} is missing a rating")
        pairs.append((ratings[a], ratings[b]))
    return pairs


def cohen_kappa(data: ReliabilityData) -> Fraction:
    """Chance-corrected two-annotator agreement over categorical labels."""
    pairs = _paired_labels(data)
    if len(pairs) < 2:
        raise InsufficientData("need at least 2 items")
    n = len(pairs)
    observed = Fraction(sum(1 for x, y in pairs if x == y), n)
    first = Counter(x for x, _ in pairs)
    second = Counter(y for _, y in pairs)
    expected = sum(
        (Fraction(first[c], n) * Fraction(second[c], n) for c in first if c in second),
        Fraction(0),
    )
    if expected == 1:
        if observed == 1:
            return Fraction(1)
        raise DegenerateChance("chance agreement is 1 but observed agreement is not")
    return (observed - expected) / (1 - expected)


def percent_agreement(data: ReliabilityData) -> Fraction:
    """Raw fraction of items where both annotators gave the same label."""
    pairs = _paired_labels(data)
    if not pairs:
        raise EmptyInput("no paired ratings")
    return Fraction(sum(1 for x, y in pairs if x == y), len(pairs))


def _coincidences(
    data: ReliabilityData,
) -> tuple[dict[tuple[Label, Label], Fraction], dict[Label, Fraction]]:
    """Coincidence matrix over units with >= 2 ratings, and its marginals."""
    matrix: dict[tuple[Label, Label], Fraction] = {}
    marginals: dict[Label, Fraction] = {}
    usable_units = 0
    for _, ratings in data.items:
        values = list(ratings.values())
        m = len(values)
        if m < 2:
            continue
        usable_units += 1
        weight = Fraction(1, m - 1)
        for i, v in enumerate(values):
            for j, w in enumerate(values):
                if i == j:
                    continue
                matrix[(v, w)] = matrix.get((v, w), Fraction(0)) + weight
            marginals[v] = marginals.get(v, Fraction(0)) + 1
    if usable_units == 0:
        raise InsufficientData("no item carries two or more ratings")
    return matrix, marginals


def _ordinal_distances(marginals: Mapping[Label, Fraction]) -> dict[tuple[Label, Label], Fraction]:
    """Squared ordinal distance from cumulative coincidence marginals."""
    categories = sorted(marginals)
    distances: dict[tuple[Label, Label], Fraction] = {}
    for i, c in enumerate(categories):
        for j in range(i, len(categories)):
            k = categories[j]
            between = sum((marginals[categories[g]] for g in range(i, j + 1)), Fraction(0))
            d = between - (marginals[c] + marginals[k]) / 2
            distances[(c, k)] = d * d
            distances[(k, c)] = d * d
    return distances


def krippendorff_alpha(data: ReliabilityData, distance: str = "nominal") -> Fraction:
    """Agreement for any number of annotators with missing data allowed.

    ``distance`` selects the disagreement weighting: ``nominal`` treats all
    label pairs alike, ``ordinal`` weights by squared cumulative-marginal
    distance over the sorted categories.
    """
    if distance not in ("nominal", "ordinal"):
        raise ValueError(f"unknown distance {distance!r}")
    matrix, marginals = _coincidences(data)
    n = sum(marginals.values())
    if distance == "ordinal":
        delta = _ordinal_distances(marginals)
    else:
        delta = None

    def d2(c: Label, k: Label) -> Fraction:
        if c == k:
            return Fraction(0)
        if delta is None:
            return Fraction(1)
        return delta[(c, k)]

    observed = sum(
        (count * d2(c, k) for (c, k), count in matrix.items()), Fraction(0)
    ) / n
    expected = sum(
        (
            marginals[c] * marginals[k] * d2(c, k)
            for c in marginals
            for k in marginals
        ),
        Fraction(0),
    ) / (n * (n - 1))
    if expected == 0:
        raise NoVariation("expected disagreement is zero")
    return 1 - observed / expected


# ---------------------------------------------------------------------------
# informativeness


def majority_vote(scores: Sequence[int], comment_id: Hashable | None = None) -> AggregatedScore:
    """Most frequent score; ties resolve to the worse (lower) score."""
    if not scores:
        raise EmptyInput("no scores to aggregate")
    counts = Counter(scores)
    top = max(counts.values())
    winner = min(s for s, c in counts.items() if c == top)
    return AggregatedScore(score=winner, vote_counts=dict(sorted(counts.items())), comment_id=comment_id)


def informativeness_distribution(aggregated: Sequence[AggregatedScore]) -> dict[int, Fraction]:
    if not aggregated:
        raise EmptyInput("no aggregated scores")
    counts = Counter(a.score for a in aggregated)
    total = len(aggregated)
    return {score: Fraction(c, total) for score, c in sorted(counts.items())}


# ---------------------------------------------------------------------------
# benchmark metrics


@dataclass
class PRF:
    precision: Fraction
    recall: Fraction
    f1: Fraction


@dataclass
class MultilabelReport:
    example_accuracy: Fraction
    micro: PRF
    macro_f1: Fraction
    per_label: list[PRF] = field(repr=False)
    label_names: list[str] | None = None

    def to_dict(self) -> dict:
        def num(x: Fraction) -> float:
            return float(x)

        names = self.label_names or [str(i) for i in range(len(self.per_label))]
        return {
            "example_accuracy": num(self.example_accuracy),
            "micro_precision": num(self.micro.precision),
            "micro_recall": num(self.micro.recall),
            "micro_f1": num(self.micro.f1),
            "macro_f1": num(self.macro_f1),
            "per_label": {
                name: {
                    "precision": num(p.precision),
                    "recall": num(p.recall),
                    "f1": num(p.f1),
                }
                for name, p in zip(names, self.per_label)
            },
        }


def _prf(tp: int, fp: int, fn: int, absent_value: Fraction) -> PRF:
    if tp == fp == fn == 0:
        return PRF(absent_value, absent_value, absent_value)
    precision = Fraction(tp, tp + fp) if tp + fp else Fraction(0)
    recall = Fraction(tp, tp + fn) if tp + fn else Fraction(0)
    f1 = (
        2 * precision * recall / (precision + recall)
        if precision + recall
        else Fraction(0)
    )
    return PRF(precision, recall, f1)


def multilabel_eval(
    gold: Sequence[LabelVector],
    pred: Sequence[LabelVector],
    label_names: Sequence[str] | None = None,
) -> MultilabelReport:
    """Micro/macro F1 and exact-match accuracy over label vectors.

    A label absent from both gold and pred across the whole evaluation
    contributes F1 = 1 to the macro average; conventions differ between
    toolkits, so this one is fixed explicitly.
    """
    if len(gold) != len(pred):
        raise DimensionMismatch(f"{len(gold)} gold vs {len(pred)} predicted instances")
    if not gold:
        raise EmptyInput("no instances")
    width = len(gold[0])
    for vec in list(gold) + list(pred):
        if len(vec) != width:
            raise DimensionMismatch("label vectors have differing dimensions")

    exact = sum(1 for g, p in zip(gold, pred) if g.bits == p.bits)
    tp = [0] * width
    fp = [0] * width
    fn = [0] * width
    for g, p in zip(gold, pred):
        for i in range(width):
            if p.bits[i] and g.bits[i]:
                tp[i] += 1
            elif p.bits[i]:
                fp[i] += 1
            elif g.bits[i]:
                fn[i] += 1

    per_label = [_prf(tp[i], fp[i], fn[i], absent_value=Fraction(1)) for i in range(width)]
    micro = _prf(sum(tp), sum(fp), sum(fn), absent_value=Fraction(1))
    macro_f1 = sum((p.f1 for p in per_label), Fraction(0)) / width
    return MultilabelReport(
        example_accuracy=Fraction(exact, len(gold)),
        micro=micro,
        macro_f1=macro_f1,
        per_label=per_label,
        label_names=list(label_names) if label_names is not None else None,
    )


@dataclass
class SlotOverlap:
    exact_match: bool
    precision: Fraction
    recall: Fraction
    f1: Fraction


def slot_overlap(
    pred: str, gold: str, tokenizer_id: str = DEFAULT_TOKENIZER
) -> SlotOverlap:
    """Bag-of-token precision/recall/F1 between two fillers after
    case-folding and punctuation stripping."""
    if not pred or not gold:
        raise EmptyInput("fillers must be non-empty")
    pred_tokens = normalized_tokens(pred, tokenizer_id)
    gold_tokens = normalized_tokens(gold, tokenizer_id)
    exact = pred_tokens == gold_tokens and bool(pred_tokens)
    if not pred_tokens or not gold_tokens:
        zero = Fraction(0)
        return SlotOverlap(exact_match=exact, precision=zero, recall=zero, f1=zero)
    pred_counts = Counter(pred_tokens)
    gold_counts = Counter(gold_tokens)
    common = sum((pred_counts & gold_counts).values())
    precision = Fraction(common, len(pred_tokens))
    recall = Fraction(common, len(gold_tokens))
    f1 = (
        2 * precision * recall / (precision + recall)
        if precision + recall
        else Fraction(0)
    )
    return SlotOverlap(exact_match=exact, precision=precision, recall=recall, f1=f1)


# ---------------------------------------------------------------------------
# analysis distributions


def template_distribution(labels: Iterable[Label]) -> dict[Label, int]:
    """Counts per selected label, NotApplicable included."""
    labels = list(labels)
    if not labels:
        raise EmptyInput("no diagnoses given")
    return dict(Counter(labels).most_common())


def diagnoses_per_target(groups: Iterable[Sequence[Label]]) -> dict[int, Fraction]:
    """Fraction of target groups by number of distinct labels given to them."""
    counts = Counter()
    total = 0
    for labels in groups:
        if not labels:
            continue
        counts[len(set(labels))] += 1
        total += 1
    if total == 0:
        raise EmptyInput("no diagnosis groups")
    return {k: Fraction(c, total) for k, c in sorted(counts.items())}


EXTRACTABILITY_CLASSES = ("extractable", "extractable_with_changes", "not_extractable")


def extractability_distribution(classes: Iterable[str]) -> dict[str, Fraction]:
    """Fractions over the three filler-extractability classes."""
    values = list(classes)
    if not values:
        raise EmptyInput("no fillers given")
    unknown = set(values) - set(EXTRACTABILITY_CLASSES)
    if unknown:
        raise ValueError(f"unknown extractability classes: {sorted(unknown)}")
    counts = Counter(values)
    total = len(values)
    return {cls: Fraction(counts.get(cls, 0), total) for cls in EXTRACTABILITY_CLASSES}


def as_percent(value: Fraction, decimals: int = 1) -> str:
    return f"{float(value) * 100:.{decimals}f}%"
