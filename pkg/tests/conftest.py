from __future__ import annotations

from pathlib import Path

import pytest

from typic import corpus as C
from typic.templates import bundled_template_set

REPO_ROOT = Path(__file__).resolve().parent.parent
RELEASE_DIR = REPO_ROOT / "data" / "release"


@pytest.fixture(scope="session")
def template_set():
    return bundled_template_set()


@pytest.fixture(scope="session")
def release_dir() -> Path:
    assert RELEASE_DIR.exists(), "release fixture missing; run scripts/make_release_fixture.py"
    return RELEASE_DIR


@pytest.fixture(scope="session")
def release(release_dir) -> C.Corpus:
    return C.load_corpus(release_dir)


def make_mini_corpus(
    n_args: int = 4,
    n_comments: int = 20,
    with_diagnoses: bool = False,
    template_set=None,
) -> C.Corpus:
    """A small, fully valid corpus for service and baseline tests."""
    ts = template_set or bundled_template_set()
    topics = (
        C.Topic(
            "HW",
            "Homework should be abolished",
            (
                C.Point("HW1", "Abolishing homework gives students more free time"),
                C.Point("HW2", "Homework teaches students discipline and persistence"),
            ),
        ),
        C.Topic(
            "DP",
            "Death penalty should be abolished",
            (C.Point("DP1", "Death penalty is an inhumane punishment"),),
        ),
    )
    sentence_bank = [
        "Abolishing homework makes students passive in their studies.",
        "Students develop strong habits through daily practice.",
        "Families gain free evenings when assignments disappear.",
        "Teachers can measure progress with classroom quizzes instead.",
    ]
    cas = []
    for i in range(n_args):
        sentences = sentence_bank[: 2 + (i % 3)]
        text = " ".join(sentences)
        spans, cursor = [], 0
        for s in sentences:
            if spans:
                cursor += 1
            spans.append((cursor, cursor + len(s)))
            cursor += len(s)
        cas.append(
            C.Counterargument(
                id=f"ca{i:02d}",
                topic_id="HW" if i % 2 == 0 else "DP",
                text=text,
                sentences=tuple(spans),
                author_kind="crowd" if i % 2 else "expert",
            )
        )
    comments = tuple(
        C.DiagnosticComment(
            id=f"c{i:03d}",
            counterargument_id=f"ca{i % n_args:02d}",
            annotator_id=f"assessor{1 + i % 2}",
            target=(i % 2,),
            text=f"The point about practice is unsupported, case {i}.",
        )
        for i in range(n_comments)
    )
    diagnoses = ()
    if with_diagnoses:
        labels = ["CLS1", "CA2", "EX1", "CLS1", "GR1", "NotApplicable"]
        records = []
        for i, comment in enumerate(comments):
            label = labels[i % len(labels)]
            if label == "NotApplicable":
                records.append(C.TemplatedDiagnosis(comment.id, "annotator_a", label, None))
                continue
            template = ts[label]
            ca = next(a for a in cas if a.id == comment.counterargument_id)
            start, end = ca.sentences[comment.target[0]]
            words = ca.text[start:end].rstrip(".").split()
            fillers = {}
            for j, slot in enumerate(template.slots):
                phrase = " ".join(words[j : j + 2])
                offset = ca.text.index(phrase, start)
                fillers[slot] = C.Filler(
                    text=phrase,
                    extractability=C.EXTRACTABLE,
                    source_span=C.SourceSpan("counterargument", ca.id, offset, offset + len(phrase)),
                )
            records.append(C.TemplatedDiagnosis(comment.id, "annotator_a", label, fillers))
        diagnoses = tuple(records)
    corpus = C.Corpus(
        topics=topics,
        counterarguments=tuple(cas),
        comments=comments,
        diagnoses=diagnoses,
        judgments=(),
        adjudication=(),
        manifest=C.Manifest(name="mini", template_set_version=ts.version),
        template_set=ts,
    )
    issues = C.validate_corpus(corpus)
    assert not issues, issues
    return corpus


@pytest.fixture()
def mini_corpus():
    return make_mini_corpus()


@pytest.fixture()
def mini_corpus_with_diagnoses():
    return make_mini_corpus(with_diagnoses=True)
