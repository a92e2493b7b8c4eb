#!/usr/bin/env python3
"""Run the full evaluation suite over a corpus directory and print the
headline numbers side by side with their reference values.

Usage: python scripts/reproduce_results.py [--data data/release]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from typic import corpus as C
from typic import metrics as M

REFERENCE = {
    "counterarguments": "1000",
    "diagnostic comments": "1082",
    "avg sentences / argument": "7.1",
    "avg comments / annotated argument": "5.5",
    "avg tokens / argument": "124.0",
    "coverage": "92.2% (757/821)",
    "cohen kappa (74 overlap items)": "0.517",
    "slot content agreement": "89.0% (65/73)",
    "informativeness score-3": "78.6% (857/1090)",
    "krippendorff alpha (ordinal)": "0.265",
    "filler extractable": "75.9%",
    "filler extractable w/ changes": "8.4%",
    "filler not extractable": "15.7%",
    "targets with 1 diagnosis": "71.1%",
    "targets with 2 diagnoses": "18.9%",
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data", default="data/release", type=Path)
    args = parser.parse_args()

    corpus = C.load_corpus(args.data)
    rows: list[tuple[str, str]] = []

    stats = C.corpus_stats(corpus)
    rows.append(("counterarguments", str(stats.n_counterarguments)))
    rows.append(("diagnostic comments", str(stats.n_comments)))
    rows.append(("avg sentences / argument", f"{float(stats.avg_sentences_per_argument):.1f}"))
    rows.append((
        "avg comments / annotated argument",
        f"{float(stats.avg_comments_per_annotated_argument):.1f}",
    ))
    rows.append(("avg tokens / argument", f"{float(stats.avg_tokens_per_argument):.1f}"))

    study = corpus.application_diagnoses()
    cov = M.coverage([d.label for d in study])
    rows.append(("coverage", f"{float(cov) * 100:.1f}% ({cov.numerator}/{cov.denominator})"))

    overlap = corpus.overlap_items()
    kappa = M.cohen_kappa(M.ReliabilityData(items=overlap))
    rows.append((f"cohen kappa ({len(overlap)} overlap items)", f"{float(kappa):.3f}"))

    if corpus.adjudication:
        slot_data = M.ReliabilityData(
            items=[
                ((r.comment_id, r.slot),
                 {"a": r.filler_a, "b": r.filler_a if r.agreed else r.filler_b})
                for r in corpus.adjudication
            ]
        )
        agreement = M.percent_agreement(slot_data)
        rows.append((
            "slot content agreement",
            f"{float(agreement) * 100:.1f}% ({agreement.numerator}/{agreement.denominator})",
        ))

    per_item: dict[tuple[str, str], dict[str, int]] = {}
    for j in corpus.judgments:
        per_item.setdefault((j.comment_id, j.diagnosis_annotator_id), {})[j.worker_id] = j.score
    if per_item:
        aggregated = [M.majority_vote(list(v.values())) for v in per_item.values()]
        dist = M.informativeness_distribution(aggregated)
        three = dist.get(3, 0)
        rows.append((
            "informativeness score-3",
            f"{float(three) * 100:.1f}% ({three.numerator}/{three.denominator})",
        ))
        alpha = M.krippendorff_alpha(
            M.ReliabilityData(items=sorted(per_item.items())), distance="ordinal"
        )
        rows.append(("krippendorff alpha (ordinal)", f"{float(alpha):.3f}"))

    sample = corpus.sample_fillers()
    if sample:
        extract = M.extractability_distribution(f.extractability for _, f in sample)
        rows.append(("filler extractable", f"{float(extract['extractable']) * 100:.1f}%"))
        rows.append((
            "filler extractable w/ changes",
            f"{float(extract['extractable_with_changes']) * 100:.1f}%",
        ))
        rows.append((
            "filler not extractable",
            f"{float(extract['not_extractable']) * 100:.1f}%",
        ))

    groups = corpus.target_groups()
    if groups:
        per_k = M.diagnoses_per_target([[d.label for d in g] for g in groups.values()])
        for k in sorted(per_k):
            noun = "diagnosis" if k == 1 else "diagnoses"
            rows.append((f"targets with {k} {noun}", f"{float(per_k[k]) * 100:.1f}%"))

    width = max(len(name) for name, _ in rows)
    print(f"{'measure':<{width}}  {'computed':>18}  reference")
    print("-" * (width + 40))
    for name, value in rows:
        reference = REFERENCE.get(name, "")
        print(f"{name:<{width}}  {value:>18}  {reference}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
