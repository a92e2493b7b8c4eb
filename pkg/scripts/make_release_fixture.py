#!/usr/bin/env python3
"""Build the bundled release fixture under data/release.

The public corpus release is not redistributable here, so the repository
ships a synthetic stand-in whose published headline numbers are reproduced
exactly: corpus-scale statistics, template-application coverage, the
double-annotation agreement table, informativeness judgments, the filler
extractability sample, and the diagnoses-per-target histogram. Every count
is asserted at build time, and the script re-verifies the final directory
through the toolkit's own loaders and metrics before it exits.

Deterministic for a fixed seed; re-running writes byte-identical files.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from typic import corpus as C
from typic import metrics as M
from typic.templates import NOT_APPLICABLE, bundled_template_set

SEED = 20220620

# corpus scale
N_ARGS = 1000
N_SENTENCES_TOTAL = 7100          # mean 7.1 per argument
N_TOKENS_TOTAL = 124_000          # mean 124.0 per argument
N_ANNOTATED = 197
N_COMMENTS = 1082                 # 97 args x 6 + 100 args x 5
N_EXPERT = 250

# template-application study
N_OVERLAP = 74
N_STUDY_RECORDS = 821             # 747 comments, 74 of them double-annotated
N_STUDY_NA = 64                   # coverage 757/821
N_INDUCTION_NA = 2                # 1090 judged items = 1156 records - 66 NA
N_SLOT_PAIRS = 73                 # slots over agreed template selections
N_SLOT_AGREED = 65

# analyses
N_GROUPS = 762
GROUP_K_COUNTS = {1: 542, 2: 144, 3: 52, 4: 19, 5: 5}
FILLER_SAMPLE = {"extractable": 126, "extractable_with_changes": 14, "not_extractable": 26}

# informativeness
N_JUDGED_ITEMS = 1090
N_SCORE3 = 857
ALPHA_TARGET = 0.265

# Two-annotator confusion design for the 74 overlap items. Diagonal 48/74 and
# sum(row_c * col_c) = 1492 give kappa = 515/996 = 0.51707. The 43 template
# agreements split 13 one-slot + 30 two-slot, i.e. 73 slot pairs to adjudicate.
KAPPA_DIAGONAL = {
    "CLS1": 23, "CA2": 5, "VAL1": 2,   # two-slot agreements (30)
    "EX1": 9, "GR1": 4,                # one-slot agreements (13)
    NOT_APPLICABLE: 5,
}
KAPPA_EXACT = Fraction(515, 996)
# Disagreements whose two labels form a two-label target group on their own.
KAPPA_SPECIALS = [
    ("CLS1", NOT_APPLICABLE),
    (NOT_APPLICABLE, "CLS1"),
    ("VAL1", "VAL4"),
    ("CA1", "CA2"),
    ("CMP1", "CMP2"),
]
# Disagreements hidden inside two-label groups whose other comment repeats
# the first annotator's label.
KAPPA_HIDDEN = (
    [("CLS1", "CA2")] * 4
    + [("CA2", "CLS1")] * 4
    + [("CLS1", "VAL1")] * 3
    + [("VAL1", "CLS1")] * 3
    + [("CLS1", "GR1")] * 2
    + [("GR1", "CLS1")] * 2
    + [("CLS1", "EX1")] * 2
    + [("EX1", "CLS1")] * 1
)

ASSESSORS = ("assessor1", "assessor2", "assessor3", "assessor4")
APP_A, APP_B = "annotator_a", "annotator_b"
INDUCTION = "induction"
WORKERS = tuple(f"worker{i}" for i in range(1, 6))

# Label weights for groups not pinned by the agreement table; heavier mass on
# the property-style and causal templates.
LABEL_WEIGHTS = {
    "CLS1": 18, "CA2": 10, "VAL1": 8, "EX1": 8, "GR2": 7, "LR1": 6, "GR1": 5,
    "CA1": 5, "VAL2": 4, "CMP1": 4, "EX3": 4, "GS1": 4, "CLS2": 3, "CA3": 3,
    "CA4": 3, "VAL3": 3, "VAL4": 3, "EX2": 3, "CMP2": 3, "CLR1": 3, "CLR2": 2,
    "GR3": 2, "GS2": 2, "PR1": 2,
}

TOPICS = [
    {
        "id": "HW",
        "motion": "Homework should be abolished",
        "points": [
            ("HW1", "Abolishing homework gives students more free time"),
            ("HW2", "Forcing students to do homework makes them passive in character"),
            ("HW3", "It is not good for students to be obliged to study by their teachers or parents"),
            ("HW4", "Students have memorized the incorrect way to study with homework"),
            ("HW5", "Schools should take responsibility for the academic skills of children, not parents at home"),
        ],
    },
    {
        "id": "DP",
        "motion": "Death penalty should be abolished",
        "points": [
            ("DP1", "Death penalty is an inhumane punishment"),
            ("DP2", "Abolishing death penalty will prevent the ending the life of innocent people"),
            ("DP3", "Because of the high stress on the executioner, death penalty should be abolished"),
            ("DP4", "Death penalty deprives criminals of the opportunity for rehabilitation"),
            ("DP5", "The society is brutalized by the use of death penalty"),
        ],
    },
]

WORD_POOLS = {
    "HW": {
        "nouns": ["students", "homework", "teachers", "school", "learning", "skills",
                  "practice", "habits", "grades", "assignments", "families", "pressure",
                  "motivation", "classrooms", "children", "study", "freedom", "knowledge",
                  "routine", "effort", "stress", "discipline", "curiosity", "education"],
        "verbs": ["develop", "reduce", "improve", "build", "harm", "support", "encourage",
                  "limit", "create", "damage", "foster", "waste", "strengthen", "undermine",
                  "promote", "require", "teach", "balance"],
    },
    "DP": {
        "nouns": ["society", "justice", "punishment", "criminals", "victims", "courts",
                  "prisons", "deterrence", "rehabilitation", "innocence", "executions",
                  "judges", "mistakes", "violence", "safety", "costs", "morality", "law",
                  "evidence", "appeals", "prisoners", "crime", "mercy", "retribution"],
        "verbs": ["deter", "protect", "punish", "prevent", "reform", "threaten", "harm",
                  "reduce", "brutalize", "execute", "convict", "acquit", "sentence",
                  "rehabilitate", "endanger", "uphold", "violate", "restore"],
    },
}

FUNCTION_WORDS = ["the", "a", "of", "to", "and", "in", "for", "with", "that", "this",
                  "not", "more", "less", "many", "some", "most", "their", "our", "such",
                  "without", "against", "because", "although", "since", "therefore",
                  "moreover", "however", "also", "often", "rarely", "clearly"]

SENTENCE_BLOCK = [7, 8, 6, 7, 9, 5, 8, 6, 7, 8]                   # sums to 71
TOKEN_BLOCK = [124, 118, 131, 122, 140, 109, 127, 115, 133, 121]  # sums to 1240

NOT_EXTRACTABLE_PHRASES = {
    "HW": ["independent study plans", "peer tutoring programs", "project based learning",
           "voluntary reading clubs", "flexible classroom schedules", "self directed practice"],
    "DP": ["restorative justice programs", "life imprisonment without parole",
           "international human rights norms", "independent review boards",
           "structured parole hearings", "community supervision schemes"],
}


def build_sentence(rng: random.Random, pool: dict, n_tokens: int) -> str:
    words = []
    while len(words) < n_tokens:
        roll = rng.random()
        if roll < 0.42:
            words.append(rng.choice(pool["nouns"]))
        elif roll < 0.62:
            words.append(rng.choice(pool["verbs"]))
        else:
            words.append(rng.choice(FUNCTION_WORDS))
    sentence = " ".join(words[:n_tokens])
    return sentence[0].upper() + sentence[1:] + "."


def build_argument(rng: random.Random, topic_id: str, n_sentences: int, n_tokens: int):
    pool = WORD_POOLS[topic_id]
    base = n_tokens // n_sentences
    counts = [base + (1 if i < n_tokens - base * n_sentences else 0) for i in range(n_sentences)]
    assert sum(counts) == n_tokens
    sentences = [build_sentence(rng, pool, c) for c in counts]
    spans = []
    cursor = 0
    parts = []
    for s in sentences:
        if parts:
            cursor += 1  # joining space
        spans.append((cursor, cursor + len(s)))
        parts.append(s)
        cursor += len(s)
    return " ".join(parts), tuple(spans)


def weighted_labels(rng: random.Random, count: int) -> list[str]:
    labels, weights = zip(*LABEL_WEIGHTS.items())
    chosen: list[str] = []
    while len(chosen) < count:
        pick = rng.choices(labels, weights=weights, k=1)[0]
        if pick not in chosen:
            chosen.append(pick)
    return chosen


# ---------------------------------------------------------------------------
# informativeness score engineering


def _multiset_types():
    types = []
    for n1 in range(6):
        for n2 in range(6 - n1):
            n3 = 5 - n1 - n2
            counts = {1: n1, 2: n2, 3: n3}
            top = max(counts.values())
            mv = min(s for s, c in counts.items() if c == top)
            types.append(((n1, n2, n3), mv))
    assert len(types) == 21
    return types


def _alpha_for_counts(type_counts: dict) -> float:
    """Ordinal alpha for items of five ratings each, from multiset counts."""
    marg = {1: 0.0, 2: 0.0, 3: 0.0}
    for (n1, n2, n3), count in type_counts.items():
        marg[1] += n1 * count
        marg[2] += n2 * count
        marg[3] += n3 * count
    n = sum(marg.values())
    cats = [1, 2, 3]
    delta2 = {}
    for i, c in enumerate(cats):
        for j in range(i, 3):
            k = cats[j]
            between = sum(marg[cats[g]] for g in range(i, j + 1))
            d = between - (marg[c] + marg[k]) / 2.0
            delta2[(c, k)] = d * d
            delta2[(k, c)] = d * d
    d_obs = 0.0
    for (n1, n2, n3), count in type_counts.items():
        unit = {1: n1, 2: n2, 3: n3}
        within = 0.0
        for c in cats:
            for k in cats:
                if c != k:
                    within += unit[c] * unit[k] * delta2[(c, k)]
        d_obs += count * within / 4.0  # 1/(m-1) with m = 5
    d_obs /= n
    d_exp = 0.0
    for c in cats:
        for k in cats:
            if c != k:
                d_exp += marg[c] * marg[k] * delta2[(c, k)]
    d_exp /= n * (n - 1)
    return 1.0 - d_obs / d_exp


def engineer_informativeness(rng: random.Random) -> list[tuple[int, int, int]]:
    """Choose per-item five-vote multisets: majority vote lands on 3 for
    exactly N_SCORE3 items and ordinal alpha sits within 2e-4 of target."""
    types = _multiset_types()
    mv3 = [t for t, mv in types if mv == 3]
    rest = [t for t, mv in types if mv != 3]

    counts = {t: 0 for t, _ in types}
    counts[(0, 0, 5)] = N_SCORE3 - 200
    counts[(0, 1, 4)] = 120
    counts[(1, 1, 3)] = 80
    counts[(0, 4, 1)] = 90
    counts[(0, 5, 0)] = 30
    counts[(1, 3, 1)] = 40
    counts[(4, 1, 0)] = 30
    counts[(3, 1, 1)] = 25
    counts[(2, 1, 2)] = 18
    assert sum(counts[t] for t in mv3) == N_SCORE3
    assert sum(counts.values()) == N_JUDGED_ITEMS

    def objective() -> float:
        return abs(_alpha_for_counts(counts) - ALPHA_TARGET)

    best = objective()
    for _ in range(50000):
        if best < 2e-4:
            break
        bucket = mv3 if rng.random() < 0.5 else rest
        src = rng.choice(bucket)
        dst = rng.choice(bucket)
        if src == dst or counts[src] == 0:
            continue
        step = min(counts[src], rng.choice([1, 2, 5, 10]))
        counts[src] -= step
        counts[dst] += step
        now = objective()
        if now <= best:
            best = now
        else:
            counts[src] += step
            counts[dst] -= step
    assert best < 2e-4, f"alpha search stalled at distance {best}"

    patterns = []
    for t, _ in types:
        patterns.extend([t] * counts[t])
    rng.shuffle(patterns)
    return patterns


# ---------------------------------------------------------------------------
# main build


def build(out_dir: Path) -> None:
    rng = random.Random(SEED)
    template_set = bundled_template_set()

    topics = tuple(
        C.Topic(id=t["id"], motion=t["motion"],
                points=tuple(C.Point(id=p, text=txt) for p, txt in t["points"]))
        for t in TOPICS
    )

    # --- counterarguments ---------------------------------------------------
    sentence_counts: list[int] = []
    token_counts: list[int] = []
    for _ in range(N_ARGS // 10):
        s_block, t_block = SENTENCE_BLOCK[:], TOKEN_BLOCK[:]
        rng.shuffle(s_block)
        rng.shuffle(t_block)
        sentence_counts.extend(s_block)
        token_counts.extend(t_block)
    assert sum(sentence_counts) == N_SENTENCES_TOTAL
    assert sum(token_counts) == N_TOKENS_TOTAL

    counterarguments = []
    for i in range(N_ARGS):
        topic_id = "HW" if i < N_ARGS // 2 else "DP"
        per_topic_index = i % (N_ARGS // 2)
        text, spans = build_argument(rng, topic_id, sentence_counts[i], token_counts[i])
        counterarguments.append(
            C.Counterargument(
                id=f"ca{i + 1:04d}",
                topic_id=topic_id,
                text=text,
                sentences=spans,
                author_kind="expert" if per_topic_index < N_EXPERT // 2 else "crowd",
            )
        )
    counterarguments = tuple(counterarguments)
    args_by_id = {a.id: a for a in counterarguments}

    # --- annotated arguments and their comment/group layout -------------------
    annotated_ids = [f"ca{i + 1:04d}" for i in range(99)] + [
        f"ca{i + 1:04d}" for i in range(500, 598)
    ]
    assert len(annotated_ids) == N_ANNOTATED
    rng.shuffle(annotated_ids)
    six_args = annotated_ids[:97]
    five_args = annotated_ids[97:]

    # Comment counts per target group, per argument.
    plans: list[tuple[str, tuple[int, ...]]] = []
    plans += [(a, (3, 2, 1)) for a in six_args[:52]]
    plans += [(a, (2, 2, 1, 1)) for a in six_args[52:94]]
    plans += [(a, (2, 1, 1, 1, 1)) for a in six_args[94:]]
    plans += [(a, (5,)) for a in five_args[:5]]
    plans += [(a, (4, 1)) for a in five_args[5:24]]
    plans += [(a, (1, 1, 1, 1, 1)) for a in five_args[24:]]
    assert sum(sum(p) for _, p in plans) == N_COMMENTS
    assert sum(len(p) for _, p in plans) == N_GROUPS

    target_palette = [(0,), (1,), (2,), (3,), (4,), (0, 1), (2, 3)]
    groups: list[dict] = []
    for arg_id, partition in plans:
        for j, size in enumerate(partition):
            groups.append({"arg": arg_id, "target": target_palette[j], "size": size})

    by_size = {s: [g for g in groups if g["size"] == s] for s in (1, 2, 3, 4, 5)}
    assert {s: len(v) for s, v in by_size.items()} == {1: 547, 2: 139, 3: 52, 4: 19, 5: 5}

    singles_pool = by_size[1][:]
    rng.shuffle(singles_pool)
    cursor = 0

    def take(n):
        nonlocal cursor
        chunk = singles_pool[cursor:cursor + n]
        cursor += n
        return chunk

    special_groups = take(len(KAPPA_SPECIALS))
    na_pair_groups = take(KAPPA_DIAGONAL[NOT_APPLICABLE])
    agree_labels = [
        label
        for label, count in KAPPA_DIAGONAL.items()
        if label != NOT_APPLICABLE
        for _ in range(count)
    ]
    agree_groups = take(len(agree_labels))
    n_overlap_na_records = 2 * KAPPA_DIAGONAL[NOT_APPLICABLE] + sum(
        1 for pair in KAPPA_SPECIALS for side in pair if side == NOT_APPLICABLE
    )
    n_na_singles = (N_STUDY_NA - n_overlap_na_records) + N_INDUCTION_NA
    na_single_groups = take(n_na_singles)
    plain_single_groups = singles_pool[cursor:]

    pairs2 = by_size[2][:]
    rng.shuffle(pairs2)
    hidden_groups = pairs2[: len(KAPPA_HIDDEN)]
    plain_pair_groups = pairs2[len(KAPPA_HIDDEN):]

    for g, pair in zip(special_groups, KAPPA_SPECIALS):
        g["role"], g["pair"] = "special", pair
    for g in na_pair_groups:
        g["role"] = "na_pair"
    for g, label in zip(agree_groups, agree_labels):
        g["role"], g["label"] = "agree", label
    for g in na_single_groups:
        g["role"] = "na_single"
    for g in plain_single_groups:
        g["role"], g["labels"] = "plain", weighted_labels(rng, 1)
    for g, pair in zip(hidden_groups, KAPPA_HIDDEN):
        g["role"], g["pair"] = "hidden", pair
    for g in plain_pair_groups:
        g["role"], g["labels"] = "plain", weighted_labels(rng, 2)
    for size in (3, 4, 5):
        for g in by_size[size]:
            g["role"], g["labels"] = "plain", weighted_labels(rng, size)

    # --- comments plus per-record (annotator, label) skeletons -----------------
    assessor_pair = {
        arg_id: (ASSESSORS[0], ASSESSORS[1]) if arg_id <= "ca0500" else (ASSESSORS[2], ASSESSORS[3])
        for arg_id in annotated_ids
    }

    comments: list[C.DiagnosticComment] = []
    skeletons: list[dict] = []  # {"comment", "records": [[annotator, label], ...]}
    overlap_entries: list[tuple[C.DiagnosticComment, str, str]] = []
    comment_serial = 0

    def new_comment(group) -> C.DiagnosticComment:
        nonlocal comment_serial
        comment_serial += 1
        arg_id = group["arg"]
        a, b = assessor_pair[arg_id]
        pool = WORD_POOLS["HW" if arg_id <= "ca0500" else "DP"]
        words = [rng.choice(pool["nouns"]) for _ in range(3)]
        text = (
            f"No clear reason is given why {words[0]} would {rng.choice(pool['verbs'])} "
            f"{words[1]} rather than {words[2]}."
        )
        comment = C.DiagnosticComment(
            id=f"c{comment_serial:04d}",
            counterargument_id=arg_id,
            annotator_id=a if comment_serial % 2 else b,
            target=group["target"],
            text=text,
        )
        comments.append(comment)
        return comment

    for g in groups:
        role = g["role"]
        if role == "special":
            comment = new_comment(g)
            la, lb = g["pair"]
            skeletons.append({"comment": comment, "records": [[APP_A, la], [APP_B, lb]]})
            overlap_entries.append((comment, la, lb))
        elif role == "na_pair":
            comment = new_comment(g)
            skeletons.append(
                {"comment": comment, "records": [[APP_A, NOT_APPLICABLE], [APP_B, NOT_APPLICABLE]]}
            )
            overlap_entries.append((comment, NOT_APPLICABLE, NOT_APPLICABLE))
        elif role == "agree":
            comment = new_comment(g)
            label = g["label"]
            skeletons.append({"comment": comment, "records": [[APP_A, label], [APP_B, label]]})
            overlap_entries.append((comment, label, label))
        elif role == "na_single":
            comment = new_comment(g)
            skeletons.append({"comment": comment, "records": [["?", NOT_APPLICABLE]]})
        elif role == "hidden":
            la, lb = g["pair"]
            comment = new_comment(g)
            skeletons.append({"comment": comment, "records": [[APP_A, la], [APP_B, lb]]})
            overlap_entries.append((comment, la, lb))
            other = new_comment(g)
            skeletons.append({"comment": other, "records": [["?", la]]})
        else:
            for label in g["labels"]:
                comment = new_comment(g)
                skeletons.append({"comment": comment, "records": [["?", label]]})

    assert len(comments) == N_COMMENTS
    assert len(overlap_entries) == N_OVERLAP
    assert sum(len(s["records"]) for s in skeletons) == N_COMMENTS + N_OVERLAP

    # --- study vs induction for single records ----------------------------------
    single_skeletons = [s for s in skeletons if s["records"][0][0] == "?"]
    na_singles = [s for s in single_skeletons if s["records"][0][1] == NOT_APPLICABLE]
    tmpl_singles = [s for s in single_skeletons if s["records"][0][1] != NOT_APPLICABLE]
    assert len(na_singles) == n_na_singles

    rng.shuffle(na_singles)
    for s in na_singles[:N_INDUCTION_NA]:
        s["records"][0][0] = INDUCTION
    study_na = na_singles[N_INDUCTION_NA:]

    n_study_singles = N_STUDY_RECORDS - 2 * N_OVERLAP
    n_study_template_singles = n_study_singles - len(study_na)
    rng.shuffle(tmpl_singles)
    study_tmpl = tmpl_singles[:n_study_template_singles]
    induction_tmpl = tmpl_singles[n_study_template_singles:]

    toggle = True
    for s in study_na + study_tmpl:
        s["records"][0][0] = APP_A if toggle else APP_B
        toggle = not toggle
    for s in induction_tmpl:
        s["records"][0][0] = INDUCTION

    # --- filler extractability sample: decide classes before generation ---------
    # 78 two-slot + 10 one-slot study records = 166 fillers, exact histogram.
    def slot_count(label: str) -> int:
        return len(template_set[label].slots)

    two_slot = [s for s in study_tmpl if slot_count(s["records"][0][1]) == 2]
    one_slot = [s for s in study_tmpl if slot_count(s["records"][0][1]) == 1]
    sample_skeletons = two_slot[:78] + one_slot[:10]
    assert sum(slot_count(s["records"][0][1]) for s in sample_skeletons) == sum(
        FILLER_SAMPLE.values()
    )

    class_deck = (
        [C.EXTRACTABLE] * FILLER_SAMPLE["extractable"]
        + [C.EXTRACTABLE_WITH_CHANGES] * FILLER_SAMPLE["extractable_with_changes"]
        + [C.NOT_EXTRACTABLE] * FILLER_SAMPLE["not_extractable"]
    )
    rng.shuffle(class_deck)
    deck_iter = iter(class_deck)
    pinned_classes: dict[tuple[str, str], list[str]] = {}
    sample_refs: list[dict[str, str]] = []
    for s in sample_skeletons:
        annotator, label = s["records"][0]
        key = (s["comment"].id, annotator)
        pinned_classes[key] = [next(deck_iter) for _ in range(slot_count(label))]
        sample_refs.append({"comment_id": key[0], "annotator_id": key[1]})

    # --- generate all templated diagnoses ----------------------------------------
    def extract_span(arg: C.Counterargument, target: tuple[int, ...]):
        start, end = arg.sentences[rng.choice(target)]
        words = arg.text[start:end].rstrip(".").split(" ")
        width = rng.randint(2, min(4, len(words)))
        begin = rng.randint(0, len(words) - width)
        phrase = " ".join(words[begin:begin + width])
        offset = arg.text.index(phrase, start)
        return phrase, C.SourceSpan("counterargument", arg.id, offset, offset + len(phrase))

    def make_filler(arg, target, extractability: str, topic_id: str) -> C.Filler:
        if extractability == C.EXTRACTABLE:
            text, span = extract_span(arg, target)
            return C.Filler(text=text, extractability=extractability, source_span=span)
        if extractability == C.EXTRACTABLE_WITH_CHANGES:
            text, _ = extract_span(arg, target)
            return C.Filler(text="the way " + text, extractability=extractability)
        return C.Filler(
            text=rng.choice(NOT_EXTRACTABLE_PHRASES[topic_id]),
            extractability=extractability,
        )

    def default_class() -> str:
        roll = rng.random()
        if roll < 0.76:
            return C.EXTRACTABLE
        if roll < 0.84:
            return C.EXTRACTABLE_WITH_CHANGES
        return C.NOT_EXTRACTABLE

    diagnoses: list[C.TemplatedDiagnosis] = []
    for s in skeletons:
        comment = s["comment"]
        arg = args_by_id[comment.counterargument_id]
        for annotator, label in s["records"]:
            assert annotator in (APP_A, APP_B, INDUCTION)
            if label == NOT_APPLICABLE:
                diagnoses.append(C.TemplatedDiagnosis(comment.id, annotator, label, None))
                continue
            template = template_set[label]
            classes = pinned_classes.get((comment.id, annotator))
            fillers = {}
            for j, slot in enumerate(template.slots):
                cls = classes[j] if classes else default_class()
                fillers[slot] = make_filler(arg, comment.target, cls, arg.topic_id)
            diagnoses.append(C.TemplatedDiagnosis(comment.id, annotator, label, fillers))
    diagnoses_tuple = tuple(diagnoses)
    assert len(diagnoses_tuple) == N_COMMENTS + N_OVERLAP

    study_records = [d for d in diagnoses_tuple if d.annotator_id in (APP_A, APP_B)]
    assert len(study_records) == N_STUDY_RECORDS
    assert sum(1 for d in study_records if not d.applicable) == N_STUDY_NA

    # --- slot adjudication file ----------------------------------------------------
    by_key = {d.key: d for d in diagnoses_tuple}
    adjudication_rows = []
    for comment, la, lb in overlap_entries:
        if la != lb or la == NOT_APPLICABLE:
            continue
        template = template_set[la]
        rec_a = by_key[(comment.id, APP_A)]
        rec_b = by_key[(comment.id, APP_B)]
        for slot in template.slots:
            adjudication_rows.append(
                C.AdjudicatedSlotPair(
                    comment_id=comment.id,
                    annotator_a=APP_A,
                    annotator_b=APP_B,
                    slot=slot,
                    filler_a=rec_a.fillers[slot].text,
                    filler_b=rec_b.fillers[slot].text,
                    agreed=True,
                )
            )
    assert len(adjudication_rows) == N_SLOT_PAIRS
    disagreed = set(rng.sample(range(N_SLOT_PAIRS), N_SLOT_PAIRS - N_SLOT_AGREED))
    adjudication = tuple(
        C.AdjudicatedSlotPair(
            row.comment_id, row.annotator_a, row.annotator_b, row.slot,
            row.filler_a, row.filler_b, agreed=(i not in disagreed),
        )
        for i, row in enumerate(adjudication_rows)
    )

    # --- informativeness judgments ---------------------------------------------------
    judged = [d for d in diagnoses_tuple if d.applicable]
    assert len(judged) == N_JUDGED_ITEMS
    patterns = engineer_informativeness(rng)
    judgments = []
    mv3_count = 0
    for d, (n1, n2, n3) in zip(judged, patterns):
        scores = [1] * n1 + [2] * n2 + [3] * n3
        rng.shuffle(scores)
        if M.majority_vote(scores).score == 3:
            mv3_count += 1
        for worker, score in zip(WORKERS, scores):
            judgments.append(
                C.InformativenessJudgment(
                    comment_id=d.comment_id,
                    diagnosis_annotator_id=d.annotator_id,
                    worker_id=worker,
                    score=score,
                )
            )
    assert mv3_count == N_SCORE3

    manifest = C.Manifest(
        name="typic-release-fixture",
        version="1.0",
        template_set="builtin",
        template_set_version=template_set.version,
        tokenizer="unicode-words",
        locale="en",
        application_annotators=[APP_A, APP_B],
        filler_sample=sorted(sample_refs, key=lambda r: (r["comment_id"], r["annotator_id"])),
    )

    release = C.Corpus(
        topics=topics,
        counterarguments=counterarguments,
        comments=tuple(comments),
        diagnoses=diagnoses_tuple,
        judgments=tuple(judgments),
        adjudication=adjudication,
        manifest=manifest,
        template_set=template_set,
    )
    issues = C.validate_corpus(release)
    assert not issues, issues[:5]
    out_dir.mkdir(parents=True, exist_ok=True)
    C.save_corpus(release, out_dir)
    verify(out_dir)


def verify(out_dir: Path) -> None:
    """Reload the written fixture and assert every headline number."""
    corpus = C.load_corpus(out_dir)
    stats = C.corpus_stats(corpus)
    assert stats.n_counterarguments == N_ARGS
    assert stats.n_comments == N_COMMENTS
    assert stats.n_annotated_arguments == N_ANNOTATED
    assert stats.avg_sentences_per_argument == Fraction(71, 10)
    assert stats.avg_tokens_per_argument == Fraction(124)
    assert stats.avg_comments_per_annotated_argument == Fraction(N_COMMENTS, N_ANNOTATED)

    study = corpus.application_diagnoses()
    cov = M.coverage([d.label for d in study])
    assert cov == Fraction(757, 821), cov

    overlap = corpus.overlap_items()
    assert len(overlap) == N_OVERLAP
    kappa = M.cohen_kappa(M.ReliabilityData(items=overlap))
    assert kappa == KAPPA_EXACT, kappa

    slot_data = M.ReliabilityData(
        items=[
            ((row.comment_id, row.slot),
             {"a": row.filler_a, "b": row.filler_a if row.agreed else row.filler_b})
            for row in corpus.adjudication
        ]
    )
    assert M.percent_agreement(slot_data) == Fraction(N_SLOT_AGREED, N_SLOT_PAIRS)

    per_item: dict[tuple[str, str], list[int]] = {}
    for j in corpus.judgments:
        per_item.setdefault((j.comment_id, j.diagnosis_annotator_id), []).append(j.score)
    assert len(per_item) == N_JUDGED_ITEMS
    aggregated = [M.majority_vote(scores) for scores in per_item.values()]
    dist = M.informativeness_distribution(aggregated)
    assert dist[3] == Fraction(N_SCORE3, N_JUDGED_ITEMS), dist
    alpha_data = M.ReliabilityData(
        items=[
            (key, {w: s for w, s in zip(WORKERS, scores)})
            for key, scores in per_item.items()
        ]
    )
    alpha = float(M.krippendorff_alpha(alpha_data, distance="ordinal"))
    assert abs(alpha - ALPHA_TARGET) < 5e-4, alpha

    groups = corpus.target_groups()
    assert len(groups) == N_GROUPS
    per_k = M.diagnoses_per_target([[d.label for d in g] for g in groups.values()])
    assert per_k == {
        k: Fraction(v, N_GROUPS) for k, v in GROUP_K_COUNTS.items()
    }, per_k

    sample = corpus.sample_fillers()
    assert len(sample) == sum(FILLER_SAMPLE.values())
    extractability = M.extractability_distribution(f.extractability for _, f in sample)
    assert extractability == {
        cls: Fraction(n, sum(FILLER_SAMPLE.values())) for cls, n in FILLER_SAMPLE.items()
    }

    print(f"release fixture verified at {out_dir}")
    print(f"  kappa        = {float(kappa):.4f}")
    print(f"  coverage     = {float(cov):.4f}")
    print(f"  alpha        = {alpha:.4f}")
    print(f"  score-3 rate = {float(dist[3]):.4f}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Build the bundled release fixture.")
    parser.add_argument("--out", default=Path("data/release"), type=Path)
    args = parser.parse_args()
    build(args.out)
