import math
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from typic import corpus as C
from typic import errors
from typic.service import (
    INFORMATIVENESS_RUBRIC,
    Project,
    ProjectConfig,
    ProjectStore,
    create_app,
    generate_assignments,
)

from conftest import make_mini_corpus


def write_base(tmp_path, **kwargs) -> Path:
    corpus = make_mini_corpus(**kwargs)
    base = tmp_path / "base"
    C.save_corpus(corpus, base)
    return base


def config_dict(base, **overrides):
    cfg = {
        "id": "proj",
        "corpus_dir": str(base),
        "workflow": "TemplateApplication",
        "annotators": [{"id": "ann1", "token": "tok1"}, {"id": "ann2", "token": "tok2"}],
        "overlap_fraction": 0.5,
        "seed": 3,
    }
    cfg.update(overrides)
    return cfg


def diagnosis_payload(label="CA2", slots=("x", "y")):
    return {
        "label": label,
        "fillers": {
            s: {"text": f"filler {s}", "extractability": "not_extractable", "source_span": None}
            for s in slots
        },
    }


class TestAssignmentGeneration:
    def base_config(self, n_annotators=2, **overrides):
        cfg = dict(
            id="p",
            corpus_dir="unused",
            workflow="TemplateApplication",
            annotators=[{"id": f"a{i}", "token": f"t{i}"} for i in range(n_annotators)],
        )
        cfg.update(overrides)
        return ProjectConfig(**cfg)

    def test_overlap_count_is_ceiling(self):
        items = [f"i{n:03d}" for n in range(740)]
        config = self.base_config(overlap_fraction=0.10, seed=1)
        assignments = generate_assignments(items, config)
        double = [a for a in assignments if len(a.annotator_ids) == 2]
        assert len(double) == math.ceil(0.10 * 740) == 74

    def test_zero_overlap(self):
        assignments = generate_assignments(
            ["a", "b", "c"], self.base_config(overlap_fraction=0.0)
        )
        assert all(len(a.annotator_ids) == 1 for a in assignments)

    def test_full_overlap(self):
        assignments = generate_assignments(
            ["a", "b", "c"], self.base_config(overlap_fraction=1.0)
        )
        assert all(len(a.annotator_ids) == 2 for a in assignments)

    def test_overlap_choice_is_seeded(self):
        items = [f"i{n}" for n in range(40)]
        one = generate_assignments(items, self.base_config(overlap_fraction=0.2, seed=5))
        two = generate_assignments(items, self.base_config(overlap_fraction=0.2, seed=5))
        assert [a.item_id for a in one] == [a.item_id for a in two]
        three = generate_assignments(items, self.base_config(overlap_fraction=0.2, seed=6))
        assert [a.item_id for a in one] != [a.item_id for a in three]

    def test_judging_assigns_five_workers(self):
        config = self.base_config(
            n_annotators=7, workflow="InformativenessJudging", judges_per_item=5
        )
        assignments = generate_assignments(["x", "y"], config)
        assert all(len(a.annotator_ids) == 5 for a in assignments)

    def test_config_validation(self):
        with pytest.raises(errors.SchemaError):
            self.base_config(workflow="Karaoke")
        with pytest.raises(errors.SchemaError):
            self.base_config(overlap_fraction=1.5)
        with pytest.raises(errors.SchemaError):
            self.base_config(calibration_items=-1)
        with pytest.raises(errors.SchemaError):
            ProjectConfig(id="p", corpus_dir="d", workflow="TemplateApplication", annotators=[])

    def test_calibration_batch_reaches_every_annotator(self):
        items = [f"i{n}" for n in range(12)]
        config = self.base_config(n_annotators=3, calibration_items=3, overlap_fraction=0.0, seed=2)
        assignments = generate_assignments(items, config)
        calibration = [a for a in assignments if a.calibration]
        assert len(calibration) == 3
        assert all(len(a.annotator_ids) == 3 for a in calibration)
        assert all(len(a.annotator_ids) == 1 for a in assignments if not a.calibration)


class TestProjectFlow:
    def make_project(self, tmp_path, **config_overrides) -> Project:
        base = write_base(tmp_path)
        store = ProjectStore(tmp_path / "store")
        return store.create_project(ProjectConfig(**config_dict(base, **config_overrides)))

    def test_next_task_fresh_project(self, tmp_path):
        project = self.make_project(tmp_path)
        task = project.next_task("ann1")
        assert task is not None
        assert task["workflow"] == "TemplateApplication"
        assert task["revision"] == 0
        assert {"comment", "counterargument", "topic"} <= task.keys()

    def test_repoll_returns_same_in_progress_item(self, tmp_path):
        project = self.make_project(tmp_path)
        first = project.next_task("ann1")
        second = project.next_task("ann1")
        assert first["item_id"] == second["item_id"]

    def test_unknown_annotator(self, tmp_path):
        project = self.make_project(tmp_path)
        with pytest.raises(errors.UnknownAnnotator):
            project.next_task("ghost")

    def test_single_assigned_items_stay_disjoint(self, tmp_path):
        project = self.make_project(tmp_path, overlap_fraction=0.0)
        seen = {"ann1": set(), "ann2": set()}
        for annotator in seen:
            while True:
                task = project.next_task(annotator)
                if task is None:
                    break
                project.submit(annotator, task["item_id"], task["revision"], diagnosis_payload())
                seen[annotator].add(task["item_id"])
        assert not seen["ann1"] & seen["ann2"]
        assert len(seen["ann1"] | seen["ann2"]) == 20

    def test_concurrent_polling_never_double_issues(self, tmp_path):
        import threading

        project = self.make_project(tmp_path, overlap_fraction=0.0)
        seen = {"ann1": set(), "ann2": set()}
        errors_seen = []

        def drain(annotator):
            try:
                while True:
                    task = project.next_task(annotator)
                    if task is None:
                        return
                    seen[annotator].add(task["item_id"])
                    project.submit(
                        annotator, task["item_id"], task["revision"], diagnosis_payload()
                    )
            except Exception as exc:  # surface failures from worker threads
                errors_seen.append(exc)

        threads = [threading.Thread(target=drain, args=(a,)) for a in seen]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors_seen
        assert not seen["ann1"] & seen["ann2"]
        assert len(seen["ann1"] | seen["ann2"]) == 20

    def test_submit_validates_slot_cover(self, tmp_path):
        project = self.make_project(tmp_path)
        task = project.next_task("ann1")
        with pytest.raises(errors.SubmissionInvalid):
            project.submit(
                "ann1", task["item_id"], task["revision"], diagnosis_payload(slots=("x",))
            )

    def test_not_applicable_payload(self, tmp_path):
        project = self.make_project(tmp_path)
        task = project.next_task("ann1")
        ack = project.submit(
            "ann1", task["item_id"], task["revision"],
            {"label": "NotApplicable", "fillers": None},
        )
        assert ack["ok"] and ack["revision"] == 1

    def test_revision_conflict(self, tmp_path):
        project = self.make_project(tmp_path)
        task = project.next_task("ann1")
        project.submit("ann1", task["item_id"], task["revision"], diagnosis_payload())
        with pytest.raises(errors.RevisionConflict):
            project.submit("ann1", task["item_id"], task["revision"], diagnosis_payload())

    def test_resubmission_with_fresh_revision_wins_at_export(self, tmp_path):
        project = self.make_project(tmp_path)
        task = project.next_task("ann1")
        project.submit("ann1", task["item_id"], task["revision"], diagnosis_payload("CA2"))
        project.submit(
            "ann1", task["item_id"], task["revision"] + 1, diagnosis_payload("CLS1")
        )
        exported = project.export()
        record = exported.diagnoses_by_key[(task["item_id"], "ann1")]
        assert record.label == "CLS1"
        # both submissions remain in the append-only log
        log_lines = project.log_path.read_text().splitlines()
        submitted = [l for l in log_lines if '"submitted"' in l]
        assert len(submitted) == 2

    def test_log_replay_restores_state(self, tmp_path):
        project = self.make_project(tmp_path)
        task = project.next_task("ann1")
        project.submit("ann1", task["item_id"], task["revision"], diagnosis_payload())
        reopened = Project.open(project.log_path)
        assignment = reopened.assignments[task["item_id"]]
        assert assignment.status["ann1"] == "done"
        assert assignment.revision["ann1"] == 1
        with pytest.raises(errors.RevisionConflict):
            reopened.submit("ann1", task["item_id"], 0, diagnosis_payload())

    def test_overlap_items_reach_both_annotators(self, tmp_path):
        project = self.make_project(tmp_path, overlap_fraction=1.0)
        for annotator in ("ann1", "ann2"):
            task = project.next_task(annotator)
            project.submit(annotator, task["item_id"], task["revision"], diagnosis_payload())
        double = [a for a in project.assignments.values() if len(a.annotator_ids) == 2]
        assert len(double) == 20

    def test_empty_project_exports_valid_files(self, tmp_path):
        project = self.make_project(tmp_path)
        out = tmp_path / "export"
        project.export_to_directory(out)
        exported = C.load_corpus(out)
        assert exported.diagnoses == ()
        assert len(exported.counterarguments) == 4


class TestWorkflows:
    def test_free_text_round_trip(self, tmp_path):
        base = write_base(tmp_path)
        store = ProjectStore(tmp_path / "store")
        project = store.create_project(
            ProjectConfig(**config_dict(base, workflow="FreeTextDiagnosis", overlap_fraction=0.0))
        )
        task = project.next_task("ann1")
        assert "counterargument" in task
        project.submit(
            "ann1", task["item_id"], task["revision"],
            {"target": [0], "text": "The second step does not follow."},
        )
        exported = project.export()
        assert len(exported.comments) == 1
        assert exported.comments[0].counterargument_id == task["item_id"]

    def test_free_text_requires_target(self, tmp_path):
        base = write_base(tmp_path)
        store = ProjectStore(tmp_path / "store")
        project = store.create_project(
            ProjectConfig(**config_dict(base, workflow="FreeTextDiagnosis"))
        )
        task = project.next_task("ann1")
        with pytest.raises(errors.SubmissionInvalid):
            project.submit("ann1", task["item_id"], task["revision"], {"target": [], "text": "x"})
        with pytest.raises(errors.SubmissionInvalid):
            project.submit("ann1", task["item_id"], task["revision"], {"target": [99], "text": "x"})

    def test_judging_round_trip(self, tmp_path):
        base = write_base(tmp_path, with_diagnoses=True)
        store = ProjectStore(tmp_path / "store")
        judges = [{"id": f"w{i}", "token": f"wtok{i}"} for i in range(5)]
        project = store.create_project(
            ProjectConfig(
                **config_dict(
                    base, workflow="InformativenessJudging", annotators=judges,
                    judges_per_item=5,
                )
            )
        )
        task = project.next_task("w0")
        assert set(task["rubric"]) == {"1", "2", "3"}
        assert task["rubric"]["3"] == INFORMATIVENESS_RUBRIC[3]
        assert task["templated_comment"]
        with pytest.raises(errors.SubmissionInvalid):
            project.submit("w0", task["item_id"], task["revision"], {"score": 5})
        project.submit("w0", task["item_id"], task["revision"], {"score": 3})
        exported = project.export()
        assert exported.judgments[0].score == 3
        assert exported.judgments[0].worker_id == "w0"


class TestHttpApi:
    @pytest.fixture()
    def client(self, tmp_path):
        self.base = write_base(tmp_path)
        app = create_app(tmp_path / "store")
        return TestClient(app)

    def test_full_session(self, client):
        response = client.post("/projects", json=config_dict(self.base))
        assert response.status_code == 200
        assert response.json()["n_items"] == 20

        assert client.get("/projects").json() == {"projects": ["proj"]}
        info = client.get("/projects/proj").json()
        assert info["workflow"] == "TemplateApplication"

        headers = {"X-Annotator-Token": "tok1"}
        task = client.get("/projects/proj/next-task", headers=headers).json()["task"]
        ack = client.post(
            "/projects/proj/submit",
            headers=headers,
            json={"item_id": task["item_id"], "revision": task["revision"],
                  "payload": diagnosis_payload()},
        )
        assert ack.status_code == 200

        stale = client.post(
            "/projects/proj/submit",
            headers=headers,
            json={"item_id": task["item_id"], "revision": task["revision"],
                  "payload": diagnosis_payload()},
        )
        assert stale.status_code == 409

        bad = client.post(
            "/projects/proj/submit",
            headers=headers,
            json={"item_id": task["item_id"], "revision": task["revision"] + 1,
                  "payload": diagnosis_payload(slots=("x",))},
        )
        assert bad.status_code == 422

    def test_auth_required(self, client):
        client.post("/projects", json=config_dict(self.base))
        assert client.get("/projects/proj/next-task").status_code == 401
        assert (
            client.get(
                "/projects/proj/next-task", headers={"X-Annotator-Token": "wrong"}
            ).status_code
            == 401
        )

    def test_template_set_and_render_endpoints(self, client):
        client.post("/projects", json=config_dict(self.base))
        doc = client.get("/projects/proj/template-set").json()
        assert len(doc["templates"]) == 24
        rendered = client.post(
            "/projects/proj/render",
            json={"template_id": "CA2", "locale": "en", "fillers": {"x": "a", "y": "b"}},
        )
        assert rendered.json()["text"] == "It is unclear why a causes a bad result of b"
        missing = client.post(
            "/projects/proj/render",
            json={"template_id": "CA2", "locale": "en", "fillers": {"x": "a"}},
        )
        assert missing.status_code == 422

    def test_unknown_project_404(self, client):
        assert client.get("/projects/ghost").status_code == 404

    def test_submission_schema_published_and_versioned(self, client):
        client.post("/projects", json=config_dict(self.base))
        body = client.get("/projects/proj/submission-schema").json()
        assert body["schema_version"] == "1"
        assert body["workflow"] == "TemplateApplication"
        assert body["payload"]["required"] == ["label", "fillers"]

    def test_delete_project(self, client):
        client.post("/projects", json=config_dict(self.base))
        assert client.delete("/projects/proj").json() == {"ok": True}
        assert client.get("/projects/proj").status_code == 404
        assert client.delete("/projects/proj").status_code == 404
        # the id is free again afterwards
        assert client.post("/projects", json=config_dict(self.base)).status_code == 200

    def test_calibration_tasks_flagged_in_payload(self, client):
        config = config_dict(self.base, id="calib", overlap_fraction=0.0)
        config["calibration_items"] = 2
        client.post("/projects", json=config)
        task = client.get(
            "/projects/calib/next-task", headers={"X-Annotator-Token": "tok1"}
        ).json()["task"]
        assert task["calibration"] is True

    def test_duplicate_project_rejected(self, client):
        assert client.post("/projects", json=config_dict(self.base)).status_code == 200
        assert client.post("/projects", json=config_dict(self.base)).status_code == 400

    def test_export_round_trips_through_loader(self, client, tmp_path):
        client.post("/projects", json=config_dict(self.base))
        headers = {"X-Annotator-Token": "tok1"}
        task = client.get("/projects/proj/next-task", headers=headers).json()["task"]
        client.post(
            "/projects/proj/submit",
            headers=headers,
            json={"item_id": task["item_id"], "revision": task["revision"],
                  "payload": diagnosis_payload()},
        )
        files = client.get("/projects/proj/export").json()["files"]
        out = tmp_path / "fetched"
        out.mkdir()
        for name, content in files.items():
            (out / name).write_text(content, encoding="utf-8")
        exported = C.load_corpus(out)
        assert len(exported.diagnoses) == 1
