"""Command-line entry point.

Human-readable tables go to stdout; identical machine-readable reports are
written as JSON when ``--out`` is given. Exit codes: 0 ok, 1 validation or
computation failure, 2 usage errors (argparse's default).

The corpus directory defaults to $TYPIC_DATA, falling back to
``data/release`` relative to the working directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import baselines, corpus as corpus_mod, metrics
from .errors import TypicError, ValidationFailure
from .templates import NOT_APPLICABLE, bundled_template_set, render

DEFAULT_DATA_DIR = "data/release"
ENV_DATA_DIR = "TYPIC_DATA"


def _data_dir(args) -> Path:
    if args.data:
        return Path(args.data)
    return Path(os.environ.get(ENV_DATA_DIR, DEFAULT_DATA_DIR))


def _write_report(out: str | None, payload: dict) -> None:
    if not out:
        return
    text = json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n"
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    Path(out).write_text(text, encoding="utf-8")


def _frac(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _load(args) -> corpus_mod.Corpus:
    return corpus_mod.load_corpus(_data_dir(args))


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    directory = _data_dir(args)
    try:
        corpus = corpus_mod.load_corpus(directory, strict=False)
    except TypicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    issues = corpus_mod.validate_corpus(corpus)
    if issues:
        for issue in issues:
            print(issue, file=sys.stderr)
        print(f"{len(issues)} issue(s) found in {directory}", file=sys.stderr)
        return 1
    print(
        f"ok: {len(corpus.counterarguments)} counterarguments, "
        f"{len(corpus.comments)} comments, {len(corpus.diagnoses)} templated diagnoses, "
        f"{len(corpus.judgments)} judgments"
    )
    return 0


def cmd_stats(args) -> int:
    corpus = _load(args)
    report = corpus_mod.corpus_stats(corpus, args.tokenizer)
    print(f"counterarguments                {report.n_counterarguments:>7,}")
    print(f"  avg tokens per argument       {float(report.avg_tokens_per_argument):>7.1f}")
    print(f"  avg sentences per argument    {float(report.avg_sentences_per_argument):>7.1f}")
    print(f"diagnostic comments             {report.n_comments:>7,}")
    print(f"  annotated arguments           {report.n_annotated_arguments:>7,}")
    print(
        f"  avg comments per annotated arg"
        f"{float(report.avg_comments_per_annotated_argument):>8.1f}"
    )
    print(f"tokenizer                       {report.tokenizer:>7}")
    _write_report(args.out, report.to_dict())
    return 0


def cmd_agreement(args) -> int:
    corpus = _load(args)
    overlap = corpus.overlap_items()
    if not args.overlap_only:
        study = corpus.application_diagnoses()
        by_comment: dict[str, dict[str, str]] = {}
        for d in study:
            by_comment.setdefault(d.comment_id, {})[d.annotator_id] = d.label
        items = sorted(by_comment.items())
    else:
        items = overlap
    data = metrics.ReliabilityData(items=items)
    kappa = metrics.cohen_kappa(data)
    observed = metrics.percent_agreement(data)
    print(f"template selection items        {len(items):>7,}")
    print(f"  percent agreement             {float(observed) * 100:>7.1f}%")
    print(f"  Cohen's kappa                 {float(kappa):>7.3f}")

    no_na = [
        (item, ratings)
        for item, ratings in items
        if all(label != NOT_APPLICABLE for label in ratings.values())
    ]
    kappa_no_na = None
    if len(no_na) >= 2:
        kappa_no_na = metrics.cohen_kappa(metrics.ReliabilityData(items=no_na))
        print(f"  kappa excl. NotApplicable     {float(kappa_no_na):>7.3f}  ({len(no_na)} items)")

    payload = {
        "n_items": len(items),
        "percent_agreement": float(observed),
        "cohen_kappa": float(kappa),
        "cohen_kappa_exact": _frac(kappa),
        "kappa_excluding_not_applicable": (
            float(kappa_no_na) if kappa_no_na is not None else None
        ),
    }

    if corpus.adjudication:
        slot_data = metrics.ReliabilityData(
            items=[
                ((row.comment_id, row.slot),
                 {"a": row.filler_a, "b": row.filler_a if row.agreed else row.filler_b})
                for row in corpus.adjudication
            ]
        )
        slot_agreement = metrics.percent_agreement(slot_data)
        print(
            f"slot content agreement          {float(slot_agreement) * 100:>7.1f}%"
            f"  ({_frac(slot_agreement)} adjudicated pairs)"
        )
        payload["slot_agreement"] = float(slot_agreement)
        payload["slot_agreement_exact"] = _frac(slot_agreement)

    slot_pairs = _paired_slot_fillers(corpus)
    if slot_pairs:
        # Automatic stand-in for the human lenient-match judgment, not a
        # replacement for it: token F1 >= 0.5 counts as a proxy match.
        proxy_hits = sum(
            1
            for row in slot_pairs
            if metrics.slot_overlap(row["filler_a"], row["filler_b"]).f1 >= Fraction(1, 2)
        )
        proxy = Fraction(proxy_hits, len(slot_pairs))
        print(
            f"slot token-F1>=0.5 proxy        {float(proxy) * 100:>7.1f}%"
            f"  ({_frac(proxy)}, machine proxy, not the human judgment)"
        )
        payload["slot_proxy_agreement"] = float(proxy)
        payload["slot_proxy_agreement_exact"] = _frac(proxy)

    if args.export_slot_pairs:
        path = Path(args.export_slot_pairs)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for row in slot_pairs:
                fh.write(corpus_mod.canonical_line(row) + "\n")
        print(f"wrote {len(slot_pairs)} slot pairs for manual adjudication to {path}")

    _write_report(args.out, payload)
    return 0


def _paired_slot_fillers(corpus: corpus_mod.Corpus) -> list[dict]:
    """Paired fillers from overlap items where both annotators selected the
    same template; rows await a human agreed/disagreed verdict."""
    rows = []
    for comment_id, labels in corpus.overlap_items():
        annotators = sorted(labels)
        if len(annotators) != 2:
            continue
        a, b = annotators
        if labels[a] != labels[b] or labels[a] == NOT_APPLICABLE:
            continue
        rec_a = corpus.diagnoses_by_key[(comment_id, a)]
        rec_b = corpus.diagnoses_by_key[(comment_id, b)]
        for slot in corpus.template_set[labels[a]].slots:
            rows.append({
                "comment_id": comment_id,
                "annotator_a": a,
                "annotator_b": b,
                "slot": slot,
                "filler_a": rec_a.fillers[slot].text,
                "filler_b": rec_b.fillers[slot].text,
                "agreed": None,
            })
    return rows


def cmd_informativeness(args) -> int:
    corpus = _load(args)
    per_item: dict[tuple[str, str], dict[str, int]] = {}
    for j in corpus.judgments:
        per_item.setdefault((j.comment_id, j.diagnosis_annotator_id), {})[j.worker_id] = j.score
    if not per_item:
        print("error: corpus has no informativeness judgments", file=sys.stderr)
        return 1
    aggregated = [
        metrics.majority_vote(list(scores.values()), comment_id=key)
        for key, scores in sorted(per_item.items())
    ]
    distribution = metrics.informativeness_distribution(aggregated)
    alpha = metrics.krippendorff_alpha(
        metrics.ReliabilityData(items=sorted(per_item.items())), distance="ordinal"
    )
    print(f"judged items                    {len(aggregated):>7,}")
    for score in (3, 2, 1):
        fraction = distribution.get(score, Fraction(0))
        count = round(fraction * len(aggregated))
        print(f"  score {score}                       {float(fraction) * 100:>7.1f}%  ({count})")
    print(f"  Krippendorff alpha (ordinal)  {float(alpha):>7.3f}")
    _write_report(
        args.out,
        {
            "n_items": len(aggregated),
            "distribution": {str(s): float(f) for s, f in distribution.items()},
            "distribution_exact": {str(s): _frac(f) for s, f in distribution.items()},
            "krippendorff_alpha_ordinal": float(alpha),
        },
    )
    return 0


def cmd_coverage(args) -> int:
    corpus = _load(args)
    labels = [d.label for d in corpus.application_diagnoses()]
    value = metrics.coverage(labels)
    print(
        f"coverage                        {float(value) * 100:>7.1f}%  ({_frac(value)})"
    )
    _write_report(args.out, {"coverage": float(value), "coverage_exact": _frac(value)})
    return 0


def cmd_eval(args) -> int:
    corpus = _load(args)
    split = corpus_mod.split_comments(corpus, args.ratio, args.seed)
    report = baselines.run_benchmark(
        corpus,
        split,
        selector_names=args.selectors.split(","),
        filler_names=args.fillers.split(","),
        knn_k=args.knn_k,
        majority_k=args.majority_k,
        locale=args.locale,
        config_extra={"split_ratio": args.ratio, "split_seed": args.seed},
    )
    print(report.to_text(), end="")
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(report.to_json(), encoding="utf-8")
    return 0


def cmd_render(args) -> int:
    template_set = bundled_template_set()
    if args.template not in template_set:
        print(f"error: unknown template {args.template!r}", file=sys.stderr)
        return 1
    template = template_set[args.template]
    fillers = {}
    for name, value in (("x", args.x), ("y", args.y), ("z", args.z)):
        if value is not None:
            fillers[name] = value
    for assignment in args.filler:
        name, _, value = assignment.partition("=")
        if not value:
            print(f"error: --filler needs name=value, got {assignment!r}", file=sys.stderr)
            return 1
        fillers[name] = value
    try:
        print(render(template, args.locale, fillers))
    except TypicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def cmd_plot_data(args) -> int:
    corpus = _load(args)
    rows: list[tuple[str, str]] = []
    if args.table == "template-distribution":
        counts = metrics.template_distribution(
            [d.label for d in corpus.application_diagnoses()]
        )
        order = list(corpus.template_set.ids) + [NOT_APPLICABLE]
        rows = [(label, str(counts.get(label, 0))) for label in order]
        header = ("template", "count")
    elif args.table == "informativeness":
        per_item: dict[tuple[str, str], list[int]] = {}
        for j in corpus.judgments:
            per_item.setdefault((j.comment_id, j.diagnosis_annotator_id), []).append(j.score)
        aggregated = [metrics.majority_vote(v) for v in per_item.values()]
        distribution = metrics.informativeness_distribution(aggregated)
        rows = [(str(s), f"{float(f):.6f}") for s, f in sorted(distribution.items())]
        header = ("score", "fraction")
    elif args.table == "diagnoses-per-target":
        groups = corpus.target_groups()
        fractions = metrics.diagnoses_per_target(
            [[d.label for d in g] for g in groups.values()]
        )
        rows = [(str(k), f"{float(f):.6f}") for k, f in sorted(fractions.items())]
        header = ("distinct_diagnoses", "fraction")
    elif args.table == "extractability":
        sample = corpus.sample_fillers()
        fractions = metrics.extractability_distribution(f.extractability for _, f in sample)
        rows = [(cls, f"{float(f):.6f}") for cls, f in fractions.items()]
        header = ("class", "fraction")
    else:  # pragma: no cover - argparse restricts choices
        return 2
    lines = ["\t".join(header)] + ["\t".join(r) for r in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(Path(args.store))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_export(args) -> int:
    from .service import ProjectStore

    store = ProjectStore(Path(args.store))
    project = store.open_project(args.project)
    out_dir = Path(args.out_dir)
    project.export_to_directory(out_dir)
    print(f"exported project {args.project} to {out_dir}")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="typic",
        description="Template-based diagnostic comment toolkit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--data", help="corpus directory (default: $TYPIC_DATA or data/release)")
        p.add_argument("--out", help="write a machine-readable report here")
        return p

    add("validate", cmd_validate, "validate a corpus directory")

    p = add("stats", cmd_stats, "corpus descriptive statistics")
    p.add_argument("--tokenizer", default=None, help="tokenizer id (default: manifest)")

    p = add("agreement", cmd_agreement, "template-selection agreement and slot adjudication")
    p.add_argument(
        "--overlap-only",
        action="store_true",
        help="restrict to items annotated by both annotators",
    )
    p.add_argument(
        "--export-slot-pairs",
        metavar="FILE",
        help="write paired slot fillers (verdict column empty) for manual adjudication",
    )

    add("informativeness", cmd_informativeness, "informativeness aggregation and alpha")
    add("coverage", cmd_coverage, "template-set coverage of the application study")

    p = add("eval", cmd_eval, "run baseline benchmark on a split")
    p.add_argument("--ratio", type=float, default=0.25, help="dev fraction (default 0.25)")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--selectors", default="gold,empty,majority,knn")
    p.add_argument("--fillers", default="gold,empty,extractive")
    p.add_argument("--knn-k", type=int, default=1)
    p.add_argument("--majority-k", type=int, default=1)
    p.add_argument("--locale", default="en")

    p = sub.add_parser("render", help="render a template with fillers")
    p.set_defaults(func=cmd_render)
    p.add_argument("--template", required=True)
    p.add_argument("--locale", default="en")
    p.add_argument("-x", default=None)
    p.add_argument("-y", default=None)
    p.add_argument("-z", default=None)
    p.add_argument("--filler", action="append", default=[], metavar="NAME=VALUE")

    p = add("plot-data", cmd_plot_data, "emit plot-ready delimited tables")
    p.add_argument(
        "--table",
        required=True,
        choices=[
            "template-distribution",
            "informativeness",
            "diagnoses-per-target",
            "extractability",
        ],
    )

    p = sub.add_parser("serve", help="run the annotation service")
    p.set_defaults(func=cmd_serve)
    p.add_argument("--store", default="annotation_store", help="service storage directory")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8787)

    p = sub.add_parser("export", help="export an annotation project to corpus files")
    p.set_defaults(func=cmd_export)
    p.add_argument("--store", default="annotation_store")
    p.add_argument("--project", required=True)
    p.add_argument("--out-dir", required=True)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationFailure as exc:
        for issue in exc.issues:
            print(issue, file=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except TypicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
