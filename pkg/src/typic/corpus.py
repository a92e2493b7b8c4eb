"""Corpus model and storage: debate topics, counterarguments, diagnostic
comments, templated diagnoses, and informativeness judgments.

Files are UTF-8 line-delimited JSON, one record per line, plus a manifest
that pins the template-set version and tokenizer id. Serialization is
canonical (sorted keys, no spaces) so that load -> save round-trips
committed fixtures byte for byte.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import EmptyCorpus, SchemaError, ValidationFailure
from .templates import (
    NOT_APPLICABLE,
    TemplateSet,
    bundled_template_set,
    load_template_set_file,
)
from .tokenizers import DEFAULT_TOKENIZER, get_tokenizer

EXTRACTABLE = "extractable"
EXTRACTABLE_WITH_CHANGES = "extractable_with_changes"
NOT_EXTRACTABLE = "not_extractable"
EXTRACTABILITY_VALUES = (EXTRACTABLE, EXTRACTABLE_WITH_CHANGES, NOT_EXTRACTABLE)

AUTHOR_KINDS = ("expert", "crowd")

MANIFEST_NAME = "manifest.json"

DEFAULT_FILES = {
    "topics": "topics.jsonl",
    "counterarguments": "counterarguments.jsonl",
    "comments": "comments.jsonl",
    "templated": "templated.jsonl",
    "judgments": "judgments.jsonl",
    "adjudication": "adjudication.jsonl",
}


@dataclass(frozen=True)
class Point:
    id: str
    text: str


@dataclass(frozen=True)
class Topic:
    id: str
    motion: str
    points: tuple[Point, ...]


@dataclass(frozen=True)
class Counterargument:
    id: str
    topic_id: str
    text: str
    sentences: tuple[tuple[int, int], ...]
    author_kind: str

    def sentence_text(self, index: int) -> str:
        start, end = self.sentences[index]
        return self.text[start:end]


@dataclass(frozen=True)
class DiagnosticComment:
    id: str
    counterargument_id: str
    annotator_id: str
    target: tuple[int, ...]
    text: str


@dataclass(frozen=True)
class SourceSpan:
    doc_kind: str  # "counterargument" | "point"
    doc_id: str
    start: int
    end: int


@dataclass(frozen=True)
class Filler:
    text: str
    extractability: str
    source_span: SourceSpan | None = None


@dataclass(frozen=True)
class TemplatedDiagnosis:
    comment_id: str
    annotator_id: str
    label: str
    fillers: Mapping[str, Filler] | None = None

    @property
    def key(self) -> tuple[str, str]:
        return (self.comment_id, self.annotator_id)

    @property
    def applicable(self) -> bool:
        return self.label != NOT_APPLICABLE


@dataclass(frozen=True)
class InformativenessJudgment:
    comment_id: str
    diagnosis_annotator_id: str
    worker_id: str
    score: int


@dataclass(frozen=True)
class AdjudicatedSlotPair:
    """A paired slot filler from two annotators with a human verdict."""

    comment_id: str
    annotator_a: str
    annotator_b: str
    slot: str
    filler_a: str
    filler_b: str
    agreed: bool


@dataclass(frozen=True)
class Split:
    dev: frozenset[str]
    eval: frozenset[str]


@dataclass
class Manifest:
    name: str = "corpus"
    version: str = "1.0"
    template_set: str = "builtin"
    template_set_version: str = ""
    tokenizer: str = DEFAULT_TOKENIZER
    locale: str = "en"
    files: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_FILES))
    application_annotators: list[str] = field(default_factory=list)
    filler_sample: list[dict[str, str]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "version": self.version,
            "template_set": self.template_set,
            "template_set_version": self.template_set_version,
            "tokenizer": self.tokenizer,
            "locale": self.locale,
            "files": dict(self.files),
            "application_annotators": list(self.application_annotators),
            "filler_sample": [dict(s) for s in self.filler_sample],
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "Manifest":
        known = {f for f in cls.__dataclass_fields__}
        extra = raw.keys() - known
        if extra:
            raise SchemaError(f"manifest has unknown fields {sorted(extra)}")
        return cls(**raw)


@dataclass
class Corpus:
    topics: tuple[Topic, ...]
    counterarguments: tuple[Counterargument, ...]
    comments: tuple[DiagnosticComment, ...]
    diagnoses: tuple[TemplatedDiagnosis, ...]
    judgments: tuple[InformativenessJudgment, ...]
    adjudication: tuple[AdjudicatedSlotPair, ...]
    manifest: Manifest
    template_set: TemplateSet

    def __post_init__(self):
        self.topics_by_id = {t.id: t for t in self.topics}
        self.counterarguments_by_id = {c.id: c for c in self.counterarguments}
        self.comments_by_id = {c.id: c for c in self.comments}
        self.diagnoses_by_key = {d.key: d for d in self.diagnoses}

    # --- convenience views -------------------------------------------------

    def application_diagnoses(self) -> tuple[TemplatedDiagnosis, ...]:
        """Diagnoses recorded in the template-application study."""
        study = set(self.manifest.application_annotators)
        if not study:
            return self.diagnoses
        return tuple(d for d in self.diagnoses if d.annotator_id in study)

    def overlap_items(self) -> list[tuple[str, dict[str, str]]]:
        """Comment ids annotated by two or more application annotators,
        with each annotator's selected label."""
        study = self.application_diagnoses()
        by_comment: dict[str, dict[str, str]] = {}
        for d in study:
            by_comment.setdefault(d.comment_id, {})[d.annotator_id] = d.label
        return [
            (comment_id, labels)
            for comment_id, labels in sorted(by_comment.items())
            if len(labels) >= 2
        ]

    def target_groups(
        self, diagnoses: Sequence[TemplatedDiagnosis] | None = None
    ) -> dict[tuple[str, tuple[int, ...]], list[TemplatedDiagnosis]]:
        """Diagnoses grouped by (counterargument, target sentence set)."""
        if diagnoses is None:
            diagnoses = self.diagnoses
        groups: dict[tuple[str, tuple[int, ...]], list[TemplatedDiagnosis]] = {}
        for d in diagnoses:
            comment = self.comments_by_id[d.comment_id]
            key = (comment.counterargument_id, tuple(sorted(set(comment.target))))
            groups.setdefault(key, []).append(d)
        return dict(sorted(groups.items()))

    def sample_fillers(self) -> list[tuple[str, Filler]]:
        """The manually analyzed filler sample named by the manifest,
        as (slot, filler) pairs in record order."""
        out: list[tuple[str, Filler]] = []
        for ref in self.manifest.filler_sample:
            diagnosis = self.diagnoses_by_key[(ref["comment_id"], ref["annotator_id"])]
            if not diagnosis.fillers:
                continue
            template = self.template_set[diagnosis.label]
            for slot in template.slots:
                out.append((slot, diagnosis.fillers[slot]))
        return out


# ---------------------------------------------------------------------------
# canonical JSON


def canonical_line(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def write_jsonl(path: Path, records: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(canonical_line(record) + "\n")


def read_jsonl(path: Path) -> list[dict]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path.name}:{lineno}: invalid JSON: {exc}") from exc
    return records


# ---------------------------------------------------------------------------
# record (de)serialization


def _span_to_dict(span: SourceSpan | None):
    if span is None:
        return None
    return {"doc_kind": span.doc_kind, "doc_id": span.doc_id, "start": span.start, "end": span.end}


def topic_to_dict(t: Topic) -> dict:
    return {"id": t.id, "motion": t.motion, "points": [{"id": p.id, "text": p.text} for p in t.points]}


def counterargument_to_dict(c: Counterargument) -> dict:
    return {
        "id": c.id,
        "topic_id": c.topic_id,
        "text": c.text,
        "sentences": [[s, e] for s, e in c.sentences],
        "author_kind": c.author_kind,
    }


def comment_to_dict(c: DiagnosticComment) -> dict:
    return {
        "id": c.id,
        "counterargument_id": c.counterargument_id,
        "annotator_id": c.annotator_id,
        "target": list(c.target),
        "text": c.text,
    }


def diagnosis_to_dict(d: TemplatedDiagnosis) -> dict:
    fillers = None
    if d.fillers is not None:
        fillers = {
            slot: {
                "text": f.text,
                "extractability": f.extractability,
                "source_span": _span_to_dict(f.source_span),
            }
            for slot, f in d.fillers.items()
        }
    return {
        "comment_id": d.comment_id,
        "annotator_id": d.annotator_id,
        "label": d.label,
        "fillers": fillers,
    }


def judgment_to_dict(j: InformativenessJudgment) -> dict:
    return {
        "comment_id": j.comment_id,
        "diagnosis_annotator_id": j.diagnosis_annotator_id,
        "worker_id": j.worker_id,
        "score": j.score,
    }


def adjudication_to_dict(a: AdjudicatedSlotPair) -> dict:
    return {
        "comment_id": a.comment_id,
        "annotator_a": a.annotator_a,
        "annotator_b": a.annotator_b,
        "slot": a.slot,
        "filler_a": a.filler_a,
        "filler_b": a.filler_b,
        "agreed": a.agreed,
    }


def _require(raw: dict, fields: dict[str, type], where: str) -> None:
    for name, kind in fields.items():
        if name not in raw:
            raise SchemaError(f"{where}: missing field {name!r}")
        if not isinstance(raw[name], kind):
            raise SchemaError(f"{where}: field {name!r} must be {kind.__name__}")


def topic_from_dict(raw: dict, where: str) -> Topic:
    _require(raw, {"id": str, "motion": str, "points": list}, where)
    points = []
    for p in raw["points"]:
        _require(p, {"id": str, "text": str}, f"{where} point")
        points.append(Point(id=p["id"], text=p["text"]))
    return Topic(id=raw["id"], motion=raw["motion"], points=tuple(points))


def counterargument_from_dict(raw: dict, where: str) -> Counterargument:
    _require(raw, {"id": str, "topic_id": str, "text": str, "sentences": list, "author_kind": str}, where)
    sentences = []
    for span in raw["sentences"]:
        if (
            not isinstance(span, list)
            or len(span) != 2
            or not all(isinstance(v, int) for v in span)
        ):
            raise SchemaError(f"{where}: sentence spans must be [start, end] int pairs")
        sentences.append((span[0], span[1]))
    return Counterargument(
        id=raw["id"],
        topic_id=raw["topic_id"],
        text=raw["text"],
        sentences=tuple(sentences),
        author_kind=raw["author_kind"],
    )


def comment_from_dict(raw: dict, where: str) -> DiagnosticComment:
    _require(raw, {"id": str, "counterargument_id": str, "annotator_id": str, "target": list, "text": str}, where)
    if not all(isinstance(t, int) for t in raw["target"]):
        raise SchemaError(f"{where}: target must be a list of sentence indices")
    return DiagnosticComment(
        id=raw["id"],
        counterargument_id=raw["counterargument_id"],
        annotator_id=raw["annotator_id"],
        target=tuple(raw["target"]),
        text=raw["text"],
    )


def diagnosis_from_dict(raw: dict, where: str) -> TemplatedDiagnosis:
    _require(raw, {"comment_id": str, "annotator_id": str, "label": str}, where)
    raw_fillers = raw.get("fillers")
    fillers = None
    if raw_fillers is not None:
        if not isinstance(raw_fillers, dict):
            raise SchemaError(f"{where}: fillers must be an object or null")
        fillers = {}
        for slot, f in raw_fillers.items():
            _require(f, {"text": str, "extractability": str}, f"{where} filler {slot!r}")
            span = f.get("source_span")
            source_span = None
            if span is not None:
                _require(span, {"doc_kind": str, "doc_id": str, "start": int, "end": int}, f"{where} span")
                source_span = SourceSpan(
                    doc_kind=span["doc_kind"], doc_id=span["doc_id"],
                    start=span["start"], end=span["end"],
                )
            fillers[slot] = Filler(
                text=f["text"], extractability=f["extractability"], source_span=source_span
            )
    return TemplatedDiagnosis(
        comment_id=raw["comment_id"],
        annotator_id=raw["annotator_id"],
        label=raw["label"],
        fillers=fillers,
    )


def judgment_from_dict(raw: dict, where: str) -> InformativenessJudgment:
    _require(raw, {"comment_id": str, "diagnosis_annotator_id": str, "worker_id": str, "score": int}, where)
    return InformativenessJudgment(
        comment_id=raw["comment_id"],
        diagnosis_annotator_id=raw["diagnosis_annotator_id"],
        worker_id=raw["worker_id"],
        score=raw["score"],
    )


def adjudication_from_dict(raw: dict, where: str) -> AdjudicatedSlotPair:
    _require(
        raw,
        {"comment_id": str, "annotator_a": str, "annotator_b": str, "slot": str,
         "filler_a": str, "filler_b": str, "agreed": bool},
        where,
    )
    return AdjudicatedSlotPair(**raw)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Issue:
    kind: str
    where: str
    message: str

    def __str__(self):
        return f"[{self.kind}] {self.where}: {self.message}"


def validate_corpus(corpus: Corpus) -> list[Issue]:
    issues: list[Issue] = []

    def bad(kind: str, where: str, message: str) -> None:
        issues.append(Issue(kind, where, message))

    seen_topics = set()
    for topic in corpus.topics:
        if topic.id in seen_topics:
            bad("schema", f"topic {topic.id}", "duplicate id")
        seen_topics.add(topic.id)
        if not 1 <= len(topic.points) <= 10:
            bad("schema", f"topic {topic.id}", f"{len(topic.points)} points outside 1..10")
        point_ids = [p.id for p in topic.points]
        if len(set(point_ids)) != len(point_ids):
            bad("schema", f"topic {topic.id}", "duplicate point ids")

    seen_cas = set()
    for ca in corpus.counterarguments:
        where = f"counterargument {ca.id}"
        if ca.id in seen_cas:
            bad("schema", where, "duplicate id")
        seen_cas.add(ca.id)
        if ca.topic_id not in corpus.topics_by_id:
            bad("dangling", where, f"unknown topic {ca.topic_id!r}")
        if ca.author_kind not in AUTHOR_KINDS:
            bad("schema", where, f"unknown author kind {ca.author_kind!r}")
        previous_end = 0
        for i, (start, end) in enumerate(ca.sentences):
            if not (0 <= start < end <= len(ca.text)):
                bad("span", where, f"sentence {i} span [{start},{end}) out of bounds")
            elif start < previous_end:
                bad("span", where, f"sentence {i} overlaps or reorders previous span")
            previous_end = max(previous_end, end)

    seen_comments = set()
    for comment in corpus.comments:
        where = f"comment {comment.id}"
        if comment.id in seen_comments:
            bad("schema", where, "duplicate id")
        seen_comments.add(comment.id)
        if not comment.text:
            bad("schema", where, "empty text")
        if not comment.target:
            bad("schema", where, "empty target")
        elif len(set(comment.target)) != len(comment.target):
            bad("schema", where, "duplicate target sentence indices")
        ca = corpus.counterarguments_by_id.get(comment.counterargument_id)
        if ca is None:
            bad("dangling", where, f"unknown counterargument {comment.counterargument_id!r}")
            continue
        for index in comment.target:
            if not 0 <= index < len(ca.sentences):
                bad("span", where, f"target sentence index {index} out of range")

    seen_diagnoses = set()
    for diagnosis in corpus.diagnoses:
        where = f"diagnosis {diagnosis.comment_id}/{diagnosis.annotator_id}"
        if diagnosis.key in seen_diagnoses:
            bad("schema", where, "duplicate (comment, annotator) record")
        seen_diagnoses.add(diagnosis.key)
        if diagnosis.comment_id not in corpus.comments_by_id:
            bad("dangling", where, f"unknown comment {diagnosis.comment_id!r}")
        if diagnosis.label == NOT_APPLICABLE:
            if diagnosis.fillers:
                bad("schema", where, "NotApplicable must not carry fillers")
            continue
        if diagnosis.label not in corpus.template_set:
            bad("dangling", where, f"unknown template {diagnosis.label!r}")
            continue
        template = corpus.template_set[diagnosis.label]
        fillers = diagnosis.fillers or {}
        if set(fillers) != set(template.slots):
            bad(
                "schema",
                where,
                f"filler slots {sorted(fillers)} do not match template slots {sorted(template.slots)}",
            )
            continue
        for slot, filler in fillers.items():
            fwhere = f"{where} slot {slot}"
            if not filler.text:
                bad("schema", fwhere, "empty filler text")
            if filler.extractability not in EXTRACTABILITY_VALUES:
                bad("schema", fwhere, f"unknown extractability {filler.extractability!r}")
            if (filler.source_span is not None) != (filler.extractability == EXTRACTABLE):
                bad("schema", fwhere, "source span must be present iff extractable")
            if filler.source_span is not None:
                span = filler.source_span
                text = None
                if span.doc_kind == "counterargument":
                    doc = corpus.counterarguments_by_id.get(span.doc_id)
                    text = doc.text if doc else None
                elif span.doc_kind == "point":
                    topic_id, _, point_id = span.doc_id.partition("/")
                    topic = corpus.topics_by_id.get(topic_id)
                    if topic:
                        for point in topic.points:
                            if point.id == point_id:
                                text = point.text
                                break
                else:
                    bad("schema", fwhere, f"unknown span doc kind {span.doc_kind!r}")
                    continue
                if text is None:
                    bad("dangling", fwhere, f"span references unknown document {span.doc_id!r}")
                elif not 0 <= span.start < span.end <= len(text):
                    bad("span", fwhere, f"span [{span.start},{span.end}) out of bounds")

    for judgment in corpus.judgments:
        where = f"judgment {judgment.comment_id}/{judgment.diagnosis_annotator_id}/{judgment.worker_id}"
        if judgment.score not in (1, 2, 3):
            bad("schema", where, f"score {judgment.score} outside 1..3")
        key = (judgment.comment_id, judgment.diagnosis_annotator_id)
        diagnosis = corpus.diagnoses_by_key.get(key)
        if diagnosis is None:
            bad("dangling", where, "no matching templated diagnosis")
        elif not diagnosis.applicable:
            bad("schema", where, "judgment refers to a NotApplicable diagnosis")

    for ref in corpus.manifest.filler_sample:
        key = (ref.get("comment_id", ""), ref.get("annotator_id", ""))
        if key not in corpus.diagnoses_by_key:
            bad("dangling", "manifest filler_sample", f"no diagnosis {key}")

    for row in corpus.adjudication:
        where = f"adjudication {row.comment_id}/{row.slot}"
        if row.comment_id not in corpus.comments_by_id:
            bad("dangling", where, "unknown comment")

    return issues


# ---------------------------------------------------------------------------
# load / save


def load_corpus(directory, template_set: TemplateSet | None = None, strict: bool = True) -> Corpus:
    """Load and validate a corpus directory.

    Raises ValidationFailure when strict and any invariant is violated;
    file-shape problems raise SchemaError immediately.
    """
    directory = Path(directory)
    manifest_path = directory / MANIFEST_NAME
    if not manifest_path.exists():
        raise SchemaError(f"no {MANIFEST_NAME} in {directory}")
    with open(manifest_path, encoding="utf-8") as fh:
        try:
            manifest = Manifest.from_dict(json.load(fh))
        except json.JSONDecodeError as exc:
            raise SchemaError(f"manifest is not valid JSON: {exc}") from exc

    if template_set is None:
        if manifest.template_set == "builtin":
            template_set = bundled_template_set()
        else:
            template_set = load_template_set_file(directory / manifest.template_set)
    if manifest.template_set_version and manifest.template_set_version != template_set.version:
        raise SchemaError(
            f"manifest pins template set {manifest.template_set_version!r}, "
            f"loaded {template_set.version!r}"
        )

    def load_file(kind: str, parser):
        name = manifest.files.get(kind)
        if not name:
            return ()
        path = directory / name
        if not path.exists():
            return ()
        return tuple(
            parser(raw, f"{name}:{i + 1}") for i, raw in enumerate(read_jsonl(path))
        )

    corpus = Corpus(
        topics=load_file("topics", topic_from_dict),
        counterarguments=load_file("counterarguments", counterargument_from_dict),
        comments=load_file("comments", comment_from_dict),
        diagnoses=load_file("templated", diagnosis_from_dict),
        judgments=load_file("judgments", judgment_from_dict),
        adjudication=load_file("adjudication", adjudication_from_dict),
        manifest=manifest,
        template_set=template_set,
    )
    if strict:
        issues = validate_corpus(corpus)
        if issues:
            raise ValidationFailure(issues)
    return corpus


def save_corpus(corpus: Corpus, directory) -> None:
    """Write all corpus files in canonical form; the directory is
    self-contained, including a non-builtin template set."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    if corpus.manifest.template_set != "builtin":
        with open(directory / corpus.manifest.template_set, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(corpus.template_set.to_document(), fh, ensure_ascii=False, sort_keys=True, indent=2)
            fh.write("\n")
    files = corpus.manifest.files
    write_jsonl(directory / files["topics"], (topic_to_dict(t) for t in corpus.topics))
    write_jsonl(
        directory / files["counterarguments"],
        (counterargument_to_dict(c) for c in corpus.counterarguments),
    )
    write_jsonl(directory / files["comments"], (comment_to_dict(c) for c in corpus.comments))
    write_jsonl(directory / files["templated"], (diagnosis_to_dict(d) for d in corpus.diagnoses))
    write_jsonl(directory / files["judgments"], (judgment_to_dict(j) for j in corpus.judgments))
    write_jsonl(
        directory / files["adjudication"],
        (adjudication_to_dict(a) for a in corpus.adjudication),
    )
    with open(directory / MANIFEST_NAME, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(corpus.manifest.to_dict(), fh, ensure_ascii=False, sort_keys=True, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# splitting


def _round_half_up(value: Fraction) -> int:
    return int(math.floor(value + Fraction(1, 2)))


def split_comments(corpus: Corpus, ratio: float, seed: int) -> Split:
    """Deterministic dev/eval partition of comment ids, stratified by topic.

    The dev side gets round(ratio * N) comments (half rounds up), allocated
    across topics by largest remainder so every motion stays represented.
    """
    if not 0 < ratio < 1:
        raise ValueError("ratio must be strictly between 0 and 1")
    if not corpus.comments:
        raise EmptyCorpus("corpus has no diagnostic comments")
    frac = Fraction(ratio).limit_denominator(10**9)
    total = len(corpus.comments)
    dev_total = _round_half_up(frac * total)

    by_topic: dict[str, list[str]] = {}
    for comment in corpus.comments:
        ca = corpus.counterarguments_by_id[comment.counterargument_id]
        by_topic.setdefault(ca.topic_id, []).append(comment.id)

    topics = sorted(by_topic)
    ideal = {t: frac * len(by_topic[t]) for t in topics}
    quota = {t: math.floor(ideal[t]) for t in topics}
    remainder = dev_total - sum(quota.values())
    by_leftover = sorted(topics, key=lambda t: (-(ideal[t] - quota[t]), t))
    for t in by_leftover[:remainder]:
        quota[t] += 1

    rng = random.Random(seed)
    dev: set[str] = set()
    for t in topics:
        ids = sorted(by_topic[t])
        rng.shuffle(ids)
        dev.update(ids[: quota[t]])
    eval_ids = frozenset(c.id for c in corpus.comments) - dev
    return Split(dev=frozenset(dev), eval=eval_ids)


# ---------------------------------------------------------------------------
# statistics


@dataclass
class StatsReport:
    n_counterarguments: int
    n_comments: int
    n_annotated_arguments: int
    avg_tokens_per_argument: Fraction
    avg_sentences_per_argument: Fraction
    avg_comments_per_annotated_argument: Fraction
    tokenizer: str

    def to_dict(self) -> dict:
        return {
            "n_counterarguments": self.n_counterarguments,
            "n_comments": self.n_comments,
            "n_annotated_arguments": self.n_annotated_arguments,
            "avg_tokens_per_argument": round(float(self.avg_tokens_per_argument), 3),
            "avg_sentences_per_argument": round(float(self.avg_sentences_per_argument), 3),
            "avg_comments_per_annotated_argument": round(
                float(self.avg_comments_per_annotated_argument), 3
            ),
            "tokenizer": self.tokenizer,
        }


def corpus_stats(corpus: Corpus, tokenizer_id: str | None = None) -> StatsReport:
    if not corpus.counterarguments:
        raise EmptyCorpus("corpus has no counterarguments")
    tokenizer_id = tokenizer_id or corpus.manifest.tokenizer
    tokenize = get_tokenizer(tokenizer_id)
    n_args = len(corpus.counterarguments)
    total_tokens = sum(len(tokenize(ca.text)) for ca in corpus.counterarguments)
    total_sentences = sum(len(ca.sentences) for ca in corpus.counterarguments)
    annotated = {c.counterargument_id for c in corpus.comments}
    n_comments = len(corpus.comments)
    return StatsReport(
        n_counterarguments=n_args,
        n_comments=n_comments,
        n_annotated_arguments=len(annotated),
        avg_tokens_per_argument=Fraction(total_tokens, n_args),
        avg_sentences_per_argument=Fraction(total_sentences, n_args),
        avg_comments_per_annotated_argument=(
            Fraction(n_comments, len(annotated)) if annotated else Fraction(0)
        ),
        tokenizer=tokenizer_id,
    )
