"""Floor models for the two subtasks (template selection, slot filling) and
the benchmark harness that evaluates them on a corpus split.

None of these models is meant to be strong; they exist so the evaluation
pipeline is exercisable end to end and future models have a floor to beat.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Protocol, Sequence

from . import corpus as corpus_mod
from .corpus import Corpus, Counterargument, Filler, SourceSpan, Split
from .errors import EmptyDev, EmptyInput, NoCandidates
from .metrics import LabelVector, MultilabelReport, multilabel_eval, slot_overlap
from .templates import Slot, Template, TemplateSet
from .tokenizers import normalized_tokens


@dataclass(frozen=True)
class SelectionInstance:
    topic_id: str
    counterargument_id: str
    target: tuple[int, ...]
    target_text: str
    gold: LabelVector


@dataclass(frozen=True)
class FillingInstance:
    comment_id: str
    annotator_id: str
    template_id: str
    counterargument_id: str
    target: tuple[int, ...]
    gold_fillers: dict[str, str] = field(hash=False)


def build_selection_instances(corpus: Corpus) -> list[SelectionInstance]:
    """One instance per (counterargument, target) group; gold is the union
    of all annotators' template labels for that group."""
    instances = []
    for (ca_id, target), diagnoses in corpus.target_groups().items():
        ca = corpus.counterarguments_by_id[ca_id]
        labels = {d.label for d in diagnoses if d.applicable}
        text = " ".join(ca.sentence_text(i) for i in target)
        instances.append(
            SelectionInstance(
                topic_id=ca.topic_id,
                counterargument_id=ca_id,
                target=target,
                target_text=text,
                gold=LabelVector.from_ids(labels, corpus.template_set),
            )
        )
    return instances


def build_filling_instances(corpus: Corpus) -> list[FillingInstance]:
    return [
        FillingInstance(
            comment_id=d.comment_id,
            annotator_id=d.annotator_id,
            template_id=d.label,
            counterargument_id=corpus.comments_by_id[d.comment_id].counterargument_id,
            target=tuple(sorted(set(corpus.comments_by_id[d.comment_id].target))),
            gold_fillers={slot: f.text for slot, f in d.fillers.items()},
        )
        for d in corpus.diagnoses
        if d.applicable and d.fillers
    ]


def assign_split(
    corpus: Corpus, instances: Sequence, split: Split
) -> tuple[list, list]:
    """Partition instances by the comment split; a selection group taking any
    dev comment goes to dev to avoid leakage into eval."""
    dev, evl = [], []
    groups = corpus.target_groups()
    for inst in instances:
        if isinstance(inst, SelectionInstance):
            members = groups[(inst.counterargument_id, inst.target)]
            comment_ids = {d.comment_id for d in members}
            (dev if comment_ids & split.dev else evl).append(inst)
        else:
            (dev if inst.comment_id in split.dev else evl).append(inst)
    return dev, evl


# ---------------------------------------------------------------------------
# selection models


class Selector(Protocol):
    name: str

    def predict(self, instance: SelectionInstance) -> LabelVector: ...


class GoldReplaySelector:
    """Oracle upper bound: replays the gold labels."""

    name = "gold"

    def predict(self, instance: SelectionInstance) -> LabelVector:
        return instance.gold


class EmptySelector:
    """Lower bound: never predicts any template."""

    name = "empty"

    def __init__(self, template_set: TemplateSet):
        self._width = len(template_set)

    def predict(self, instance: SelectionInstance) -> LabelVector:
        return LabelVector.empty(self._width)


class MajoritySelector:
    """Predicts the k most frequent dev templates for every instance."""

    name = "majority"

    def __init__(self, dev: Sequence[SelectionInstance], template_set: TemplateSet, k: int = 1):
        if not dev:
            raise EmptyDev("majority selector needs a non-empty dev set")
        counts: Counter[str] = Counter()
        for inst in dev:
            counts.update(inst.gold.ids(template_set))
        index = template_set.label_index()
        ranked = sorted(counts, key=lambda t: (-counts[t], index[t]))
        self._vector = LabelVector.from_ids(ranked[:k], template_set)

    def predict(self, instance: SelectionInstance) -> LabelVector:
        return self._vector


class LexicalKnnSelector:
    """Union of gold labels of the k dev instances whose target sentences
    have the highest normalized token overlap with the query target."""

    name = "knn"

    def __init__(self, dev: Sequence[SelectionInstance], template_set: TemplateSet, k: int = 1):
        if not dev:
            raise EmptyDev("knn selector needs a non-empty dev set")
        if k < 1:
            raise ValueError("k must be >= 1")
        self._dev = list(dev)
        self._dev_tokens = [frozenset(normalized_tokens(d.target_text)) for d in self._dev]
        self._template_set = template_set
        self._k = k

    def predict(self, instance: SelectionInstance) -> LabelVector:
        query = frozenset(normalized_tokens(instance.target_text))
        scores = []
        for i, tokens in enumerate(self._dev_tokens):
            union = len(query | tokens)
            overlap = Fraction(len(query & tokens), union) if union else Fraction(0)
            scores.append((-overlap, i))
        scores.sort()
        labels: set[str] = set()
        for _, i in scores[: self._k]:
            labels.update(self._dev[i].gold.ids(self._template_set))
        return LabelVector.from_ids(labels, self._template_set)


# ---------------------------------------------------------------------------
# slot filling


@dataclass(frozen=True)
class Chunk:
    text: str
    doc_kind: str
    doc_id: str
    start: int
    end: int


_BOUNDARY_CHARS = r".,;:!?()\[\]\"'、。，．！？「」『』・…"

_BOUNDARY_WORDS = {
    # English function words
    "the", "a", "an", "of", "to", "and", "or", "but", "is", "are", "was", "were",
    "be", "been", "that", "this", "it", "if", "even", "because", "in", "for",
    "on", "with", "as", "by", "at", "from", "why", "how", "not", "no", "can",
    "could", "will", "would", "should", "do", "does", "did", "have", "has",
    "had", "they", "them", "their", "we", "our", "you", "your", "i", "my",
    "so", "such", "than", "then", "there", "these", "those", "what", "which",
    "who", "whom", "its", "also", "may", "might", "must", "say", "said",
    # Japanese particles and copulas
    "は", "が", "を", "に", "で", "と", "も", "の", "へ", "や", "から", "まで",
    "より", "だ", "です", "ます", "した", "して", "ない", "という",
}

Chunker = Callable[[str, str, str], list[Chunk]]


def heuristic_chunks(text: str, doc_kind: str, doc_id: str) -> list[Chunk]:
    """Candidate phrase spans between punctuation and function-word
    boundaries; a heuristic stand-in for phrase chunking that works without
    a parser in either language."""
    chunks: list[Chunk] = []
    for segment in re.finditer(rf"[^{_BOUNDARY_CHARS}]+", text):
        token_spans = [
            (m.start() + segment.start(), m.end() + segment.start(), m.group())
            for m in re.finditer(r"\S+", segment.group())
        ]
        run: list[tuple[int, int, str]] = []
        for span in token_spans + [(0, 0, "")]:
            if span[2] and span[2].casefold() not in _BOUNDARY_WORDS:
                run.append(span)
                continue
            if run:
                start, end = run[0][0], run[-1][1]
                chunks.append(Chunk(text[start:end], doc_kind, doc_id, start, end))
                run = []
    return chunks


def _slot_context_tokens(template: Template, locale: str, slot: str) -> frozenset[str]:
    """Tokens of the literal segments adjacent to the slot in the pattern."""
    pattern = template.surface_forms[locale]
    context: list[str] = []
    segments = pattern.segments
    for i, seg in enumerate(segments):
        if isinstance(seg, Slot) and seg.name == slot:
            if i > 0 and not isinstance(segments[i - 1], Slot):
                context.extend(normalized_tokens(segments[i - 1].text))
            if i + 1 < len(segments) and not isinstance(segments[i + 1], Slot):
                context.extend(normalized_tokens(segments[i + 1].text))
    return frozenset(context)


@dataclass
class DocumentSet:
    """Source documents a filler may be extracted from."""

    counterargument: Counterargument
    original_points: list[tuple[str, str]] = field(default_factory=list)  # (point doc id, text)

    @classmethod
    def from_corpus(cls, corpus: Corpus, counterargument_id: str) -> "DocumentSet":
        ca = corpus.counterarguments_by_id[counterargument_id]
        topic = corpus.topics_by_id[ca.topic_id]
        return cls(
            counterargument=ca,
            original_points=[(f"{topic.id}/{p.id}", p.text) for p in topic.points],
        )


def extractive_filler(
    template: Template,
    documents: DocumentSet,
    target: Sequence[int],
    locale: str = "en",
    chunker: Chunker = heuristic_chunks,
) -> dict[str, Filler]:
    """Pick one candidate chunk per slot by token overlap with the slot's
    surrounding pattern words; ties prefer unused candidates in order.

    Candidates come from the target sentences first, then the whole
    counterargument, then the original argument's points.
    """
    ca = documents.counterargument
    tiers: list[list[Chunk]] = []
    target_chunks: list[Chunk] = []
    for index in target:
        if 0 <= index < len(ca.sentences):
            start, end = ca.sentences[index]
            for chunk in chunker(ca.text[start:end], "counterargument", ca.id):
                target_chunks.append(
                    Chunk(chunk.text, chunk.doc_kind, chunk.doc_id,
                          chunk.start + start, chunk.end + start)
                )
    tiers.append(target_chunks)
    tiers.append(chunker(ca.text, "counterargument", ca.id))
    point_chunks: list[Chunk] = []
    for doc_id, text in documents.original_points:
        point_chunks.extend(chunker(text, "point", doc_id))
    tiers.append(point_chunks)

    candidates = next((tier for tier in tiers if tier), None)
    if candidates is None:
        raise NoCandidates("no candidate chunks in any document")

    fillers: dict[str, Filler] = {}
    used: set[int] = set()
    for slot in template.slots:
        context = _slot_context_tokens(template, locale, slot)

        def score(i: int) -> tuple:
            tokens = normalized_tokens(candidates[i].text)
            overlap = (
                Fraction(sum(1 for t in tokens if t in context), len(tokens))
                if tokens
                else Fraction(0)
            )
            return (-overlap, i in used, i)

        best = min(range(len(candidates)), key=score)
        used.add(best)
        chunk = candidates[best]
        fillers[slot] = Filler(
            text=chunk.text,
            extractability=corpus_mod.EXTRACTABLE,
            source_span=SourceSpan(chunk.doc_kind, chunk.doc_id, chunk.start, chunk.end),
        )
    return fillers


class ExtractiveFillerModel:
    name = "extractive"

    def __init__(self, corpus: Corpus, locale: str = "en", chunker: Chunker = heuristic_chunks):
        self._corpus = corpus
        self._locale = locale
        self._chunker = chunker

    def fill(self, instance: FillingInstance) -> dict[str, str]:
        template = self._corpus.template_set[instance.template_id]
        documents = DocumentSet.from_corpus(self._corpus, instance.counterargument_id)
        fillers = extractive_filler(
            template, documents, instance.target, self._locale, self._chunker
        )
        return {slot: f.text for slot, f in fillers.items()}


class GoldReplayFillerModel:
    name = "gold"

    def fill(self, instance: FillingInstance) -> dict[str, str]:
        return dict(instance.gold_fillers)


class EmptyFillerModel:
    name = "empty"

    def fill(self, instance: FillingInstance) -> dict[str, str]:
        return {}


# ---------------------------------------------------------------------------
# benchmark harness


@dataclass
class FillingReport:
    n_slots: int
    exact_match_rate: Fraction
    mean_precision: Fraction
    mean_recall: Fraction
    mean_f1: Fraction

    def to_dict(self) -> dict:
        return {
            "n_slots": self.n_slots,
            "exact_match_rate": float(self.exact_match_rate),
            "mean_precision": float(self.mean_precision),
            "mean_recall": float(self.mean_recall),
            "mean_f1": float(self.mean_f1),
        }


def evaluate_filling(models: Sequence, instances: Sequence[FillingInstance]) -> dict[str, FillingReport]:
    if not instances:
        raise EmptyInput("no filling instances")
    reports = {}
    for model in models:
        exact = 0
        total = 0
        p_sum = r_sum = f_sum = Fraction(0)
        for instance in instances:
            predicted = model.fill(instance)
            for slot, gold_text in instance.gold_fillers.items():
                total += 1
                pred_text = predicted.get(slot, "")
                if not pred_text:
                    continue
                overlap = slot_overlap(pred_text, gold_text)
                exact += overlap.exact_match
                p_sum += overlap.precision
                r_sum += overlap.recall
                f_sum += overlap.f1
        reports[model.name] = FillingReport(
            n_slots=total,
            exact_match_rate=Fraction(exact, total),
            mean_precision=p_sum / total,
            mean_recall=r_sum / total,
            mean_f1=f_sum / total,
        )
    return reports


@dataclass
class BenchmarkReport:
    config: dict
    selection: dict[str, MultilabelReport]
    filling: dict[str, FillingReport]

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "selection": {name: rep.to_dict() for name, rep in sorted(self.selection.items())},
            "filling": {name: rep.to_dict() for name, rep in sorted(self.filling.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        lines = ["benchmark report", "================", ""]
        lines.append("template selection")
        header = f"{'model':<12}{'acc':>8}{'miP':>8}{'miR':>8}{'miF1':>8}{'maF1':>8}"
        lines.append(header)
        for name, rep in sorted(self.selection.items()):
            d = rep.to_dict()
            lines.append(
                f"{name:<12}{d['example_accuracy']:>8.3f}{d['micro_precision']:>8.3f}"
                f"{d['micro_recall']:>8.3f}{d['micro_f1']:>8.3f}{d['macro_f1']:>8.3f}"
            )
        lines.append("")
        lines.append("slot filling")
        lines.append(f"{'model':<12}{'exact':>8}{'P':>8}{'R':>8}{'F1':>8}")
        for name, rep in sorted(self.filling.items()):
            d = rep.to_dict()
            lines.append(
                f"{name:<12}{d['exact_match_rate']:>8.3f}{d['mean_precision']:>8.3f}"
                f"{d['mean_recall']:>8.3f}{d['mean_f1']:>8.3f}"
            )
        lines.append("")
        return "\n".join(lines)


def run_benchmark(
    corpus: Corpus,
    split: Split,
    selector_names: Iterable[str] = ("gold", "empty", "majority", "knn"),
    filler_names: Iterable[str] = ("gold", "empty", "extractive"),
    knn_k: int = 1,
    majority_k: int = 1,
    locale: str = "en",
    config_extra: dict | None = None,
) -> BenchmarkReport:
    template_set = corpus.template_set
    selection_instances = build_selection_instances(corpus)
    dev_sel, eval_sel = assign_split(corpus, selection_instances, split)
    filling_instances = build_filling_instances(corpus)
    _, eval_fill = assign_split(corpus, filling_instances, split)
    if not eval_sel:
        raise EmptyInput("eval split has no selection instances")

    selectors: list = []
    for name in selector_names:
        if name == "gold":
            selectors.append(GoldReplaySelector())
        elif name == "empty":
            selectors.append(EmptySelector(template_set))
        elif name == "majority":
            selectors.append(MajoritySelector(dev_sel, template_set, k=majority_k))
        elif name == "knn":
            selectors.append(LexicalKnnSelector(dev_sel, template_set, k=knn_k))
        else:
            raise ValueError(f"unknown selector {name!r}")

    gold_vectors = [inst.gold for inst in eval_sel]
    label_names = list(template_set.ids)
    selection_reports = {
        model.name: multilabel_eval(
            gold_vectors, [model.predict(inst) for inst in eval_sel], label_names
        )
        for model in selectors
    }

    fillers: list = []
    for name in filler_names:
        if name == "gold":
            fillers.append(GoldReplayFillerModel())
        elif name == "empty":
            fillers.append(EmptyFillerModel())
        elif name == "extractive":
            fillers.append(ExtractiveFillerModel(corpus, locale=locale))
        else:
            raise ValueError(f"unknown filler {name!r}")
    filling_reports = evaluate_filling(fillers, eval_fill) if eval_fill else {}

    config = {
        "n_selection_instances_eval": len(eval_sel),
        "n_selection_instances_dev": len(dev_sel),
        "n_filling_instances_eval": len(eval_fill),
        "knn_k": knn_k,
        "majority_k": majority_k,
        "locale": locale,
    }
    if config_extra:
        config.update(config_extra)
    return BenchmarkReport(config=config, selection=selection_reports, filling=filling_reports)
