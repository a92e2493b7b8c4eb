"""Annotation service: project persistence plus a JSON-over-HTTP API for the
three human workflows (free-text diagnosis, template application,
informativeness judging).

Storage is an embedded append-only event log, one file per project; state
is rebuilt by replay on open. Annotators authenticate with a per-annotator
token and never see each other's work. Optimistic concurrency: every
(item, annotator) assignment carries a revision that a submission must
echo; revisions only grow.
"""

from __future__ import annotations

import json
import math
import random
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import corpus as corpus_mod
from .corpus import (
    Corpus,
    DiagnosticComment,
    InformativenessJudgment,
    Manifest,
    TemplatedDiagnosis,
    diagnosis_from_dict,
    load_corpus,
    save_corpus,
    validate_corpus,
)
from .errors import (
    RenderError,
    RevisionConflict,
    SchemaError,
    SubmissionInvalid,
    UnknownAnnotator,
    ValidationFailure,
)
from .templates import NOT_APPLICABLE, render

WORKFLOWS = ("FreeTextDiagnosis", "TemplateApplication", "InformativenessJudging")

# Scoring rubric shown to informativeness judges.
INFORMATIVENESS_RUBRIC = {
    3: "It gives the same diagnosis as the original, without lacking specificity.",
    2: "It gives the same diagnosis, but is less specific.",
    1: "It gives different diagnosis than the original.",
}

OPEN, IN_PROGRESS, DONE = "open", "in_progress", "done"

# Published submission-payload schemas, JSON Schema subset, versioned so
# clients can pin what they were built against.
PAYLOAD_SCHEMA_VERSION = "1"

_SOURCE_SPAN_SCHEMA = {
    "type": ["object", "null"],
    "required": ["doc_kind", "doc_id", "start", "end"],
    "properties": {
        "doc_kind": {"enum": ["counterargument", "point"]},
        "doc_id": {"type": "string"},
        "start": {"type": "integer", "minimum": 0},
        "end": {"type": "integer", "minimum": 1},
    },
}

PAYLOAD_SCHEMAS = {
    "FreeTextDiagnosis": {
        "type": "object",
        "required": ["target", "text"],
        "properties": {
            "target": {"type": "array", "items": {"type": "integer"}, "minItems": 1},
            "text": {"type": "string", "minLength": 1},
        },
    },
    "TemplateApplication": {
        "type": "object",
        "required": ["label", "fillers"],
        "properties": {
            "label": {"type": "string", "description": "template id or NotApplicable"},
            "fillers": {
                "type": ["object", "null"],
                "description": "one filler per slot of the selected template; null for NotApplicable",
                "additionalProperties": {
                    "type": "object",
                    "required": ["text", "extractability", "source_span"],
                    "properties": {
                        "text": {"type": "string", "minLength": 1},
                        "extractability": {
                            "enum": list(corpus_mod.EXTRACTABILITY_VALUES)
                        },
                        "source_span": _SOURCE_SPAN_SCHEMA,
                    },
                },
            },
        },
    },
    "InformativenessJudging": {
        "type": "object",
        "required": ["score"],
        "properties": {"score": {"enum": [1, 2, 3]}},
    },
}


@dataclass
class ProjectConfig:
    id: str
    corpus_dir: str
    workflow: str
    annotators: list[dict[str, str]]  # {"id", "token"}
    overlap_fraction: float = 0.0
    judges_per_item: int = 5
    calibration_items: int = 0
    seed: int = 0
    locale: str = "en"

    def __post_init__(self):
        if self.workflow not in WORKFLOWS:
            raise SchemaError(f"unknown workflow {self.workflow!r}")
        if not 0 <= self.overlap_fraction <= 1:
            raise SchemaError("overlap_fraction must be within [0, 1]")
        if self.calibration_items < 0:
            raise SchemaError("calibration_items must be >= 0")
        if not self.annotators:
            raise SchemaError("project needs at least one annotator")
        ids = [a["id"] for a in self.annotators]
        if len(set(ids)) != len(ids):
            raise SchemaError("duplicate annotator ids")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "corpus_dir": self.corpus_dir,
            "workflow": self.workflow,
            "annotators": [dict(a) for a in self.annotators],
            "overlap_fraction": self.overlap_fraction,
            "judges_per_item": self.judges_per_item,
            "calibration_items": self.calibration_items,
            "seed": self.seed,
            "locale": self.locale,
        }


@dataclass
class Assignment:
    item_id: str
    annotator_ids: tuple[str, ...]
    calibration: bool = False
    # per-annotator progress; revision increments on every accepted submission
    status: dict[str, str] = field(default_factory=dict)
    revision: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        for annotator in self.annotator_ids:
            self.status.setdefault(annotator, OPEN)
            self.revision.setdefault(annotator, 0)


def generate_assignments(
    item_ids: list[str],
    config: ProjectConfig,
) -> list[Assignment]:
    """Deterministic task assignment. The first ``calibration_items`` of the
    seeded shuffle go to every annotator and are flagged so they can be
    discussed before the main round; of the rest, ceil(overlap_fraction * N)
    are double-assigned. Judging projects assign every item to
    ``judges_per_item`` annotators instead."""
    annotators = [a["id"] for a in config.annotators]
    rng = random.Random(config.seed)
    shuffled = sorted(item_ids)
    rng.shuffle(shuffled)

    assignments = []
    if config.workflow == "InformativenessJudging":
        per_item = min(config.judges_per_item, len(annotators))
        for i, item in enumerate(shuffled):
            chosen = [annotators[(i + j) % len(annotators)] for j in range(per_item)]
            assignments.append(Assignment(item, tuple(chosen)))
        return assignments

    n_calibration = min(config.calibration_items, len(shuffled))
    for item in shuffled[:n_calibration]:
        assignments.append(Assignment(item, tuple(annotators), calibration=True))
    rest = shuffled[n_calibration:]
    n_overlap = math.ceil(config.overlap_fraction * len(rest))
    for i, item in enumerate(rest):
        if i < n_overlap and len(annotators) >= 2:
            a = annotators[i % len(annotators)]
            b = annotators[(i + 1) % len(annotators)]
            assignments.append(Assignment(item, (a, b)))
        else:
            assignments.append(Assignment(item, (annotators[i % len(annotators)],)))
    return assignments


class Project:
    """A single annotation project backed by an append-only event log."""

    def __init__(self, log_path: Path, config: ProjectConfig, base: Corpus):
        self.log_path = log_path
        self.config = config
        self.base = base
        self.assignments: dict[str, Assignment] = {}
        self.order: list[str] = []
        # (item_id, annotator_id) -> list of payloads, append-only
        self.submissions: dict[tuple[str, str], list[dict]] = {}
        self._lock = threading.RLock()
        self._tokens = {a["token"]: a["id"] for a in config.annotators}

    # --- construction -------------------------------------------------------

    @classmethod
    def create(cls, log_path: Path, config: ProjectConfig) -> "Project":
        base = load_corpus(config.corpus_dir)
        project = cls(log_path, config, base)
        items = project._item_ids()
        if not items:
            raise SchemaError("corpus provides no items for this workflow")
        for assignment in generate_assignments(items, config):
            project.assignments[assignment.item_id] = assignment
            project.order.append(assignment.item_id)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        with open(log_path, "w", encoding="utf-8") as fh:
            fh.write(corpus_mod.canonical_line({
                "event": "created",
                "config": config.to_dict(),
                "assignments": [
                    {
                        "item_id": a.item_id,
                        "annotator_ids": list(a.annotator_ids),
                        "calibration": a.calibration,
                    }
                    for a in (project.assignments[i] for i in project.order)
                ],
            }) + "\n")
        return project

    @classmethod
    def open(cls, log_path: Path) -> "Project":
        if not log_path.exists():
            raise SchemaError(f"no project log at {log_path}")
        with open(log_path, encoding="utf-8") as fh:
            events = [json.loads(line) for line in fh if line.strip()]
        if not events or events[0].get("event") != "created":
            raise SchemaError("project log must start with a 'created' event")
        config = ProjectConfig(**events[0]["config"])
        base = load_corpus(config.corpus_dir)
        project = cls(log_path, config, base)
        for raw in events[0]["assignments"]:
            assignment = Assignment(
                raw["item_id"],
                tuple(raw["annotator_ids"]),
                calibration=raw.get("calibration", False),
            )
            project.assignments[assignment.item_id] = assignment
            project.order.append(assignment.item_id)
        for event in events[1:]:
            if event["event"] == "issued":
                a = project.assignments[event["item_id"]]
                if a.status[event["annotator_id"]] == OPEN:
                    a.status[event["annotator_id"]] = IN_PROGRESS
            elif event["event"] == "submitted":
                project._apply_submission(
                    event["item_id"], event["annotator_id"], event["payload"]
                )
        return project

    def _append_event(self, event: dict) -> None:
        with open(self.log_path, "a", encoding="utf-8") as fh:
            fh.write(corpus_mod.canonical_line(event) + "\n")

    # --- item enumeration ----------------------------------------------------

    def _item_ids(self) -> list[str]:
        workflow = self.config.workflow
        if workflow == "FreeTextDiagnosis":
            return [ca.id for ca in self.base.counterarguments]
        if workflow == "TemplateApplication":
            return [c.id for c in self.base.comments]
        return [
            f"{d.comment_id}::{d.annotator_id}"
            for d in self.base.diagnoses
            if d.applicable
        ]

    # --- auth -----------------------------------------------------------------

    def annotator_for_token(self, token: str) -> str:
        annotator = self._tokens.get(token)
        if annotator is None:
            raise UnknownAnnotator("invalid annotator token")
        return annotator

    def check_annotator(self, annotator_id: str) -> None:
        if annotator_id not in {a["id"] for a in self.config.annotators}:
            raise UnknownAnnotator(f"annotator {annotator_id!r} is not registered")

    # --- task flow --------------------------------------------------------------

    def next_task(self, annotator_id: str) -> dict | None:
        """First in-progress item for the annotator, else the first open one
        (marking it in progress); None when the queue is exhausted."""
        self.check_annotator(annotator_id)
        with self._lock:
            chosen = None
            for item_id in self.order:
                a = self.assignments[item_id]
                if annotator_id not in a.annotator_ids:
                    continue
                if a.status[annotator_id] == IN_PROGRESS:
                    chosen = a
                    break
                if chosen is None and a.status[annotator_id] == OPEN:
                    chosen = a
                    break
            if chosen is None:
                return None
            if chosen.status[annotator_id] == OPEN:
                chosen.status[annotator_id] = IN_PROGRESS
                self._append_event({
                    "event": "issued",
                    "item_id": chosen.item_id,
                    "annotator_id": annotator_id,
                })
            return self._task_payload(chosen, annotator_id)

    def _task_payload(self, assignment: Assignment, annotator_id: str) -> dict:
        item_id = assignment.item_id
        payload: dict[str, Any] = {
            "item_id": item_id,
            "revision": assignment.revision[annotator_id],
            "workflow": self.config.workflow,
        }
        if assignment.calibration:
            payload["calibration"] = True
        workflow = self.config.workflow
        if workflow == "FreeTextDiagnosis":
            ca = self.base.counterarguments_by_id[item_id]
            payload["counterargument"] = corpus_mod.counterargument_to_dict(ca)
            payload["topic"] = corpus_mod.topic_to_dict(self.base.topics_by_id[ca.topic_id])
        elif workflow == "TemplateApplication":
            comment = self.base.comments_by_id[item_id]
            ca = self.base.counterarguments_by_id[comment.counterargument_id]
            payload["comment"] = corpus_mod.comment_to_dict(comment)
            payload["counterargument"] = corpus_mod.counterargument_to_dict(ca)
            payload["topic"] = corpus_mod.topic_to_dict(self.base.topics_by_id[ca.topic_id])
        else:
            comment_id, _, diagnosis_annotator = item_id.partition("::")
            diagnosis = self.base.diagnoses_by_key[(comment_id, diagnosis_annotator)]
            comment = self.base.comments_by_id[comment_id]
            template = self.base.template_set[diagnosis.label]
            fillers = {slot: f.text for slot, f in diagnosis.fillers.items()}
            payload["original_comment"] = comment.text
            payload["templated_comment"] = render(template, self.config.locale, fillers)
            payload["template_id"] = diagnosis.label
            payload["rubric"] = {str(k): v for k, v in INFORMATIVENESS_RUBRIC.items()}
        return payload

    # --- submission ---------------------------------------------------------------

    def submit(self, annotator_id: str, item_id: str, revision: int, payload: dict) -> dict:
        self.check_annotator(annotator_id)
        with self._lock:
            assignment = self.assignments.get(item_id)
            if assignment is None or annotator_id not in assignment.annotator_ids:
                raise UnknownAnnotator(
                    f"item {item_id!r} is not assigned to {annotator_id!r}"
                )
            current = assignment.revision[annotator_id]
            if revision != current:
                raise RevisionConflict(
                    f"stale revision {revision}, current is {current}"
                )
            self._validate_payload(item_id, annotator_id, payload)
            self._append_event({
                "event": "submitted",
                "item_id": item_id,
                "annotator_id": annotator_id,
                "payload": payload,
            })
            self._apply_submission(item_id, annotator_id, payload)
            return {"ok": True, "revision": assignment.revision[annotator_id]}

    def _apply_submission(self, item_id: str, annotator_id: str, payload: dict) -> None:
        assignment = self.assignments[item_id]
        self.submissions.setdefault((item_id, annotator_id), []).append(payload)
        assignment.status[annotator_id] = DONE
        assignment.revision[annotator_id] += 1

    def _validate_payload(self, item_id: str, annotator_id: str, payload: dict) -> None:
        workflow = self.config.workflow
        if not isinstance(payload, dict):
            raise SubmissionInvalid("payload must be an object")
        try:
            if workflow == "FreeTextDiagnosis":
                record = corpus_mod.comment_from_dict(
                    {
                        "id": "pending",
                        "counterargument_id": item_id,
                        "annotator_id": annotator_id,
                        "target": payload.get("target"),
                        "text": payload.get("text"),
                    },
                    "submission",
                )
                ca = self.base.counterarguments_by_id[item_id]
                if not record.target or not record.text:
                    raise SubmissionInvalid("need a non-empty target and text")
                if any(not 0 <= t < len(ca.sentences) for t in record.target):
                    raise SubmissionInvalid("target sentence index out of range")
            elif workflow == "TemplateApplication":
                record = diagnosis_from_dict(
                    {
                        "comment_id": item_id,
                        "annotator_id": annotator_id,
                        "label": payload.get("label"),
                        "fillers": payload.get("fillers"),
                    },
                    "submission",
                )
                self._validate_diagnosis(record)
            else:
                score = payload.get("score")
                if score not in (1, 2, 3):
                    raise SubmissionInvalid("score must be 1, 2, or 3")
        except SchemaError as exc:
            raise SubmissionInvalid(str(exc)) from exc

    def _validate_diagnosis(self, record: TemplatedDiagnosis) -> None:
        if record.label == NOT_APPLICABLE:
            if record.fillers:
                raise SubmissionInvalid("NotApplicable takes no fillers")
            return
        if record.label not in self.base.template_set:
            raise SubmissionInvalid(f"unknown template {record.label!r}")
        template = self.base.template_set[record.label]
        fillers = record.fillers or {}
        if set(fillers) != set(template.slots):
            raise SubmissionInvalid(
                f"fillers {sorted(fillers)} do not cover slots {sorted(template.slots)}"
            )
        for slot, filler in fillers.items():
            if not filler.text:
                raise SubmissionInvalid(f"slot {slot!r} has an empty filler")
            if filler.extractability not in corpus_mod.EXTRACTABILITY_VALUES:
                raise SubmissionInvalid(f"bad extractability for slot {slot!r}")
            if (filler.source_span is not None) != (
                filler.extractability == corpus_mod.EXTRACTABLE
            ):
                raise SubmissionInvalid("source span must be present iff extractable")

    # --- progress / export -----------------------------------------------------------

    def progress(self) -> dict:
        total = done = 0
        for assignment in self.assignments.values():
            for annotator in assignment.annotator_ids:
                total += 1
                done += assignment.status[annotator] == DONE
        return {"assignments": total, "done": done}

    def export(self) -> Corpus:
        """A corpus combining the base documents with this project's
        submissions (latest submission per item and annotator wins)."""
        comments = list(self.base.comments)
        diagnoses = list(self.base.diagnoses)
        judgments = list(self.base.judgments)
        workflow = self.config.workflow

        if workflow == "FreeTextDiagnosis":
            comments, serial = [], 0
            for item_id, annotator_id in sorted(self.submissions):
                payload = self.submissions[(item_id, annotator_id)][-1]
                serial += 1
                comments.append(DiagnosticComment(
                    id=f"c{serial:04d}",
                    counterargument_id=item_id,
                    annotator_id=annotator_id,
                    target=tuple(payload["target"]),
                    text=payload["text"],
                ))
            diagnoses, judgments = [], []
        elif workflow == "TemplateApplication":
            diagnoses = [
                diagnosis_from_dict(
                    {
                        "comment_id": item_id,
                        "annotator_id": annotator_id,
                        "label": self.submissions[(item_id, annotator_id)][-1]["label"],
                        "fillers": self.submissions[(item_id, annotator_id)][-1].get("fillers"),
                    },
                    "export",
                )
                for item_id, annotator_id in sorted(self.submissions)
            ]
            judgments = []
        else:
            judgments = []
            for item_id, annotator_id in sorted(self.submissions):
                payload = self.submissions[(item_id, annotator_id)][-1]
                comment_id, _, diagnosis_annotator = item_id.partition("::")
                judgments.append(InformativenessJudgment(
                    comment_id=comment_id,
                    diagnosis_annotator_id=diagnosis_annotator,
                    worker_id=annotator_id,
                    score=payload["score"],
                ))

        manifest = Manifest(
            name=f"export-{self.config.id}",
            version=self.base.manifest.version,
            template_set=self.base.manifest.template_set,
            template_set_version=self.base.manifest.template_set_version,
            tokenizer=self.base.manifest.tokenizer,
            locale=self.config.locale,
            application_annotators=(
                [a["id"] for a in self.config.annotators]
                if workflow == "TemplateApplication"
                else list(self.base.manifest.application_annotators)
            ),
            filler_sample=[],
        )
        exported = Corpus(
            topics=self.base.topics,
            counterarguments=self.base.counterarguments,
            comments=tuple(comments),
            diagnoses=tuple(diagnoses),
            judgments=tuple(judgments),
            adjudication=(),
            manifest=manifest,
            template_set=self.base.template_set,
        )
        issues = validate_corpus(exported)
        if issues:
            raise SubmissionInvalid(f"export failed validation: {issues[:3]}")
        return exported

    def export_to_directory(self, directory: Path) -> None:
        save_corpus(self.export(), directory)

    def export_files(self) -> dict[str, str]:
        """Exported corpus as {filename: content} for API transfer."""
        import tempfile

        with tempfile.TemporaryDirectory() as tmp:
            tmp_path = Path(tmp)
            self.export_to_directory(tmp_path)
            return {
                path.name: path.read_text(encoding="utf-8")
                for path in sorted(tmp_path.iterdir())
            }


class ProjectStore:
    """All projects under one storage directory, one log file each."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self._projects: dict[str, Project] = {}
        self._lock = threading.Lock()

    def _path(self, project_id: str) -> Path:
        safe = project_id.replace("/", "_")
        return self.root / f"{safe}.jsonl"

    def create_project(self, config: ProjectConfig) -> Project:
        with self._lock:
            if config.id in self._projects or self._path(config.id).exists():
                raise SchemaError(f"project {config.id!r} already exists")
            project = Project.create(self._path(config.id), config)
            self._projects[config.id] = project
            return project

    def open_project(self, project_id: str) -> Project:
        with self._lock:
            if project_id not in self._projects:
                self._projects[project_id] = Project.open(self._path(project_id))
            return self._projects[project_id]

    def delete_project(self, project_id: str) -> None:
        with self._lock:
            path = self._path(project_id)
            if not path.exists() and project_id not in self._projects:
                raise SchemaError(f"no project {project_id!r}")
            self._projects.pop(project_id, None)
            if path.exists():
                path.unlink()

    def list_projects(self) -> list[str]:
        on_disk = {p.stem for p in self.root.glob("*.jsonl")} if self.root.exists() else set()
        return sorted(on_disk | set(self._projects))


# ---------------------------------------------------------------------------
# HTTP layer


def create_app(store_root: Path):
    from fastapi import FastAPI, Header, HTTPException
    from fastapi.responses import JSONResponse

    app = FastAPI(title="annotation service")
    store = ProjectStore(Path(store_root))

    def get_project(project_id: str) -> Project:
        try:
            return store.open_project(project_id)
        except SchemaError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc

    def authenticate(project: Project, token: str | None) -> str:
        if not token:
            raise HTTPException(status_code=401, detail="missing X-Annotator-Token")
        try:
            return project.annotator_for_token(token)
        except UnknownAnnotator as exc:
            raise HTTPException(status_code=401, detail=str(exc)) from exc

    @app.post("/projects")
    def create_project(config: dict):
        try:
            project = store.create_project(ProjectConfig(**config))
        except (TypeError, SchemaError, ValidationFailure) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {
            "id": project.config.id,
            "workflow": project.config.workflow,
            "n_items": len(project.order),
            "progress": project.progress(),
        }

    @app.get("/projects")
    def list_projects():
        return {"projects": store.list_projects()}

    @app.get("/projects/{project_id}")
    def project_info(project_id: str):
        project = get_project(project_id)
        return {
            "id": project.config.id,
            "workflow": project.config.workflow,
            "locale": project.config.locale,
            "template_set_version": project.base.template_set.version,
            "n_items": len(project.order),
            "progress": project.progress(),
        }

    @app.get("/projects/{project_id}/template-set")
    def template_set(project_id: str):
        project = get_project(project_id)
        return project.base.template_set.to_document()

    @app.get("/projects/{project_id}/next-task")
    def next_task(project_id: str, x_annotator_token: str | None = Header(default=None)):
        project = get_project(project_id)
        annotator = authenticate(project, x_annotator_token)
        task = project.next_task(annotator)
        if task is None:
            return JSONResponse(status_code=200, content={"task": None})
        return {"task": task}

    @app.post("/projects/{project_id}/submit")
    def submit(
        project_id: str,
        body: dict,
        x_annotator_token: str | None = Header(default=None),
    ):
        project = get_project(project_id)
        annotator = authenticate(project, x_annotator_token)
        try:
            return project.submit(
                annotator,
                body.get("item_id", ""),
                body.get("revision", -1),
                body.get("payload", {}),
            )
        except RevisionConflict as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        except SubmissionInvalid as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        except UnknownAnnotator as exc:
            raise HTTPException(status_code=403, detail=str(exc)) from exc

    @app.post("/projects/{project_id}/render")
    def render_preview(project_id: str, body: dict):
        project = get_project(project_id)
        template_id = body.get("template_id", "")
        if template_id not in project.base.template_set:
            raise HTTPException(status_code=422, detail=f"unknown template {template_id!r}")
        template = project.base.template_set[template_id]
        try:
            text = render(
                template, body.get("locale", project.config.locale), body.get("fillers", {})
            )
        except RenderError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return {"text": text}

    @app.get("/projects/{project_id}/submission-schema")
    def submission_schema(project_id: str):
        project = get_project(project_id)
        return {
            "schema_version": PAYLOAD_SCHEMA_VERSION,
            "workflow": project.config.workflow,
            "template_set_version": project.base.template_set.version,
            "payload": PAYLOAD_SCHEMAS[project.config.workflow],
        }

    @app.delete("/projects/{project_id}")
    def delete_project(project_id: str):
        try:
            store.delete_project(project_id)
        except SchemaError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        return {"ok": True}

    @app.get("/projects/{project_id}/export")
    def export(project_id: str):
        project = get_project(project_id)
        return {"files": project.export_files()}

    return app
