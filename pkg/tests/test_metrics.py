import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from typic import errors, metrics
from typic.metrics import (
    AggregatedScore,
    LabelVector,
    ReliabilityData,
    cohen_kappa,
    coverage,
    diagnoses_per_target,
    extractability_distribution,
    informativeness_distribution,
    krippendorff_alpha,
    majority_vote,
    multilabel_eval,
    percent_agreement,
    slot_overlap,
    template_distribution,
)

from oracles import (
    all_five_vote_multisets,
    alpha_oracle,
    kappa_oracle,
    majority_vote_oracle,
    micro_prf_oracle,
    token_overlap_oracle,
)


def pairs_data(pairs):
    return ReliabilityData(items=[(i, {"a": x, "b": y}) for i, (x, y) in enumerate(pairs)])


def units_data(units):
    return ReliabilityData(
        items=[(i, {f"r{j}": v for j, v in enumerate(unit)}) for i, unit in enumerate(units)]
    )


class TestCoverage:
    def test_fraction(self):
        assert coverage(["CA2", "NotApplicable", "CLS1", "CLS1"]) == Fraction(3, 4)

    def test_all_not_applicable(self):
        assert coverage(["NotApplicable"] * 3) == 0

    def test_none_not_applicable(self):
        assert coverage(["CA2", "GS2"]) == 1

    def test_empty(self):
        with pytest.raises(errors.EmptyInput):
            coverage([])


class TestCohenKappa:
    def test_hand_derived(self):
        # p_o = 3/4, p_e = 1/2 by direct computation
        kappa = cohen_kappa(pairs_data([("A", "A"), ("A", "B"), ("B", "B"), ("B", "B")]))
        assert kappa == Fraction(1, 2)

    def test_perfect_agreement(self):
        assert cohen_kappa(pairs_data([("A", "A"), ("B", "B"), ("C", "C")])) == 1

    def test_constant_identical_annotators(self):
        assert cohen_kappa(pairs_data([("A", "A"), ("A", "A")])) == 1

    def test_missing_rating(self):
        data = ReliabilityData(items=[(0, {"a": "A", "b": "A"}), (1, {"a": "A"})])
        with pytest.raises(errors.MissingRating):
            cohen_kappa(data)

    def test_three_annotators_rejected(self):
        data = ReliabilityData(items=[(0, {"a": "A", "b": "A", "c": "A"})] * 2)
        with pytest.raises(errors.MissingRating):
            cohen_kappa(data)

    def test_matches_oracle_on_random_instances(self):
        rng = random.Random(99)
        for _ in range(300):
            n = rng.randint(2, 10)
            cats = rng.randint(2, 5)
            pairs = [(rng.randint(1, cats), rng.randint(1, cats)) for _ in range(n)]
            expected = kappa_oracle(pairs)
            if expected != expected:  # nan: degenerate chance
                continue
            assert abs(float(cohen_kappa(pairs_data(pairs))) - expected) < 1e-12


class TestKrippendorffAlpha:
    def test_identical_raters_two_values(self):
        units = [[1, 1], [2, 2], [1, 1]]
        assert krippendorff_alpha(units_data(units)) == 1
        assert krippendorff_alpha(units_data(units), "ordinal") == 1

    def test_no_variation(self):
        with pytest.raises(errors.NoVariation):
            krippendorff_alpha(units_data([[1, 1], [1, 1]]))

    def test_single_ratings_are_dropped(self):
        units = [[1, 1], [2, 2], [3]]
        expected = alpha_oracle(units, "nominal")
        assert abs(float(krippendorff_alpha(units_data(units))) - expected) < 1e-12

    def test_no_pairable_data(self):
        with pytest.raises(errors.InsufficientData):
            krippendorff_alpha(units_data([[1], [2]]))

    def test_golden_four_item_fixture(self):
        # Pinned from the pair-enumeration oracle before the implementation
        # existed; guards the coincidence-matrix route.
        units = [[1, 2, 2], [3, 3, 3], [2, 2], [1, 3]]
        expected_nominal = alpha_oracle(units, "nominal")
        expected_ordinal = alpha_oracle(units, "ordinal")
        # D_o = 0.4 and D_e = 64/90 by hand for the nominal case
        assert abs(expected_nominal - 0.4375) < 1e-15
        assert abs(expected_ordinal - 0.275) < 1e-15
        assert abs(float(krippendorff_alpha(units_data(units))) - expected_nominal) < 1e-12
        got = krippendorff_alpha(units_data(units), "ordinal")
        assert abs(float(got) - expected_ordinal) < 1e-12

    def test_unknown_distance(self):
        with pytest.raises(ValueError):
            krippendorff_alpha(units_data([[1, 2]]), "interval")

    @given(
        st.lists(
            st.lists(st.integers(min_value=1, max_value=4), min_size=1, max_size=4),
            min_size=2,
            max_size=8,
        )
    )
    @settings(max_examples=200)
    def test_alpha_at_most_one_and_matches_oracle(self, units):
        for distance in ("nominal", "ordinal"):
            expected = alpha_oracle(units, distance)
            if expected is None:
                with pytest.raises((errors.NoVariation, errors.InsufficientData)):
                    krippendorff_alpha(units_data(units), distance)
                continue
            got = krippendorff_alpha(units_data(units), distance)
            assert float(got) <= 1 + 1e-12
            assert abs(float(got) - expected) < 1e-12

    def test_alpha_is_one_iff_no_observed_disagreement(self):
        agreeing = units_data([[2, 2, 2], [1, 1]])
        assert krippendorff_alpha(agreeing) == 1
        disagreeing = units_data([[2, 1], [1, 1]])
        assert krippendorff_alpha(disagreeing) < 1


class TestMajorityVote:
    def test_clear_majority(self):
        assert majority_vote([3, 3, 3, 2, 1]).score == 3

    def test_tie_goes_to_worse(self):
        assert majority_vote([3, 3, 2, 2, 1]).score == 2

    def test_unanimous(self):
        assert majority_vote([1, 1, 1, 1, 1]).score == 1

    def test_empty(self):
        with pytest.raises(errors.EmptyInput):
            majority_vote([])

    def test_vote_counts_recorded(self):
        agg = majority_vote([3, 2, 3], comment_id="c1")
        assert agg.vote_counts == {2: 1, 3: 2}
        assert agg.comment_id == "c1"

    def test_exhaustive_five_vote_multisets(self):
        cases = all_five_vote_multisets()
        assert len(cases) == 21
        for scores in cases:
            got = majority_vote(list(scores)).score
            assert got == majority_vote_oracle(list(scores))
            top = max(scores.count(s) for s in set(scores))
            tied = {s for s in set(scores) if scores.count(s) == top}
            assert got == min(tied)

    @given(st.lists(st.sampled_from([1, 2, 3]), min_size=1, max_size=9))
    @settings(max_examples=200)
    def test_permutation_invariance(self, scores):
        rng = random.Random(0)
        expected = majority_vote(scores).score
        for _ in range(5):
            shuffled = scores[:]
            rng.shuffle(shuffled)
            assert majority_vote(shuffled).score == expected


class TestInformativenessDistribution:
    def test_fractions_sum_to_one(self):
        agg = [AggregatedScore(3, {}), AggregatedScore(3, {}), AggregatedScore(1, {})]
        dist = informativeness_distribution(agg)
        assert dist == {1: Fraction(1, 3), 3: Fraction(2, 3)}
        assert sum(dist.values()) == 1

    def test_all_twos(self):
        assert informativeness_distribution([AggregatedScore(2, {})]) == {2: Fraction(1)}

    def test_split(self):
        agg = [AggregatedScore(s, {}) for s in (3, 3, 1, 1)]
        assert informativeness_distribution(agg) == {1: Fraction(1, 2), 3: Fraction(1, 2)}

    def test_empty(self):
        with pytest.raises(errors.EmptyInput):
            informativeness_distribution([])


class TestPercentAgreement:
    def test_ratio(self):
        pairs = [("A", "A")] * 65 + [("A", "B")] * 8
        assert percent_agreement(pairs_data(pairs)) == Fraction(65, 73)

    def test_identical(self):
        assert percent_agreement(pairs_data([("A", "A")])) == 1

    def test_disjoint(self):
        assert percent_agreement(pairs_data([("A", "B"), ("C", "D")])) == 0


class TestMultilabelEval:
    def vec(self, bits):
        return LabelVector(tuple(bool(b) for b in bits))

    def test_perfect(self):
        gold = [self.vec([1, 0, 1]), self.vec([0, 1, 0])]
        report = multilabel_eval(gold, gold)
        assert report.example_accuracy == 1
        assert report.micro.f1 == 1
        assert report.macro_f1 == 1

    def test_one_extra_prediction(self):
        gold = [self.vec([1, 0])]
        pred = [self.vec([1, 1])]
        report = multilabel_eval(gold, pred)
        assert report.micro.precision == Fraction(1, 2)
        assert report.micro.recall == 1
        assert report.micro.f1 == Fraction(2, 3)
        assert report.example_accuracy == 0

    def test_empty_predictions(self):
        gold = [self.vec([1, 0]), self.vec([0, 1])]
        pred = [self.vec([0, 0]), self.vec([0, 0])]
        report = multilabel_eval(gold, pred)
        assert report.micro.recall == 0
        assert report.micro.f1 == 0

    def test_absent_label_macro_convention(self):
        gold = [self.vec([1, 0])]
        pred = [self.vec([1, 0])]
        report = multilabel_eval(gold, pred)
        assert report.per_label[1].f1 == 1
        assert report.macro_f1 == 1

    def test_dimension_mismatch(self):
        with pytest.raises(errors.DimensionMismatch):
            multilabel_eval([self.vec([1])], [self.vec([1, 0])])
        with pytest.raises(errors.DimensionMismatch):
            multilabel_eval([self.vec([1])], [])

    def test_matches_hand_counted_oracle(self):
        rng = random.Random(7)
        for _ in range(100):
            width = rng.randint(1, 6)
            n = rng.randint(1, 8)
            gold_sets = [frozenset(i for i in range(width) if rng.random() < 0.4) for _ in range(n)]
            pred_sets = [frozenset(i for i in range(width) if rng.random() < 0.4) for _ in range(n)]
            gold = [self.vec([i in g for i in range(width)]) for g in gold_sets]
            pred = [self.vec([i in p for i in range(width)]) for p in pred_sets]
            report = multilabel_eval(gold, pred)
            p, r, f1 = micro_prf_oracle([set(g) for g in gold_sets], [set(p) for p in pred_sets])
            assert abs(float(report.micro.precision) - p) < 1e-12
            assert abs(float(report.micro.recall) - r) < 1e-12
            assert abs(float(report.micro.f1) - f1) < 1e-12

    @given(st.data())
    @settings(max_examples=100)
    def test_label_permutation_invariance(self, data):
        width = data.draw(st.integers(min_value=2, max_value=5))
        n = data.draw(st.integers(min_value=1, max_value=5))
        bits = st.lists(st.booleans(), min_size=width, max_size=width)
        gold = [tuple(data.draw(bits)) for _ in range(n)]
        pred = [tuple(data.draw(bits)) for _ in range(n)]
        perm = data.draw(st.permutations(range(width)))
        base = multilabel_eval([LabelVector(g) for g in gold], [LabelVector(p) for p in pred])
        permuted = multilabel_eval(
            [LabelVector(tuple(g[i] for i in perm)) for g in gold],
            [LabelVector(tuple(p[i] for i in perm)) for p in pred],
        )
        assert base.micro.f1 == permuted.micro.f1
        assert base.macro_f1 == permuted.macro_f1
        assert base.example_accuracy == permuted.example_accuracy


class TestSlotOverlap:
    def test_partial(self):
        result = slot_overlap("abolishing homework", "homework")
        assert result.precision == Fraction(1, 2)
        assert result.recall == 1
        assert result.f1 == Fraction(2, 3)
        assert not result.exact_match

    def test_identical(self):
        result = slot_overlap("Free Time", "free time")
        assert result.exact_match
        assert result.f1 == 1

    def test_disjoint(self):
        result = slot_overlap("alpha beta", "gamma delta")
        assert result.f1 == 0

    def test_empty_rejected(self):
        with pytest.raises(errors.EmptyInput):
            slot_overlap("", "x")

    def test_unknown_tokenizer(self):
        with pytest.raises(errors.UnknownTokenizer):
            slot_overlap("a", "b", tokenizer_id="nope")

    @given(
        st.text(alphabet="ab c", min_size=1, max_size=12),
        st.text(alphabet="ab c", min_size=1, max_size=12),
    )
    @settings(max_examples=200)
    def test_precision_recall_swap_symmetry(self, a, b):
        try:
            forward = slot_overlap(a, b)
            backward = slot_overlap(b, a)
        except errors.EmptyInput:
            return
        assert forward.precision == backward.recall
        assert forward.recall == backward.precision
        assert forward.f1 == backward.f1

    def test_matches_hand_counted_oracle(self):
        rng = random.Random(5)
        vocab = ["red", "blue", "green", "slow", "fast"]
        for _ in range(100):
            a = " ".join(rng.choices(vocab, k=rng.randint(1, 6)))
            b = " ".join(rng.choices(vocab, k=rng.randint(1, 6)))
            got = slot_overlap(a, b)
            p, r, f1 = token_overlap_oracle(a.split(), b.split())
            assert abs(float(got.precision) - p) < 1e-12
            assert abs(float(got.recall) - r) < 1e-12
            assert abs(float(got.f1) - f1) < 1e-12


class TestDistributions:
    def test_template_distribution(self):
        assert template_distribution(["CA2", "CA2", "GS2"]) == {"CA2": 2, "GS2": 1}

    def test_template_distribution_not_applicable(self):
        assert template_distribution(["NotApplicable"] * 4) == {"NotApplicable": 4}

    def test_diagnoses_per_target(self):
        groups = [["CA1", "CMP2"]]
        assert diagnoses_per_target(groups) == {2: Fraction(1)}

    def test_diagnoses_per_target_singletons(self):
        groups = [["CA1"], ["CA1", "CA1"], ["GS2"]]
        assert diagnoses_per_target(groups) == {1: Fraction(1)}

    def test_extractability(self):
        classes = ["extractable"] * 3 + ["not_extractable"]
        dist = extractability_distribution(classes)
        assert dist == {
            "extractable": Fraction(3, 4),
            "extractable_with_changes": Fraction(0, 1),
            "not_extractable": Fraction(1, 4),
        }
        assert sum(dist.values()) == 1

    def test_extractability_all_one_class(self):
        dist = extractability_distribution(["extractable"] * 5)
        assert dist["extractable"] == 1
        assert sum(dist.values()) == 1

    def test_extractability_unknown_class(self):
        with pytest.raises(ValueError):
            extractability_distribution(["sideways"])

    def test_empties(self):
        with pytest.raises(errors.EmptyInput):
            template_distribution([])
        with pytest.raises(errors.EmptyInput):
            diagnoses_per_target([])
        with pytest.raises(errors.EmptyInput):
            extractability_distribution([])


class TestLabelVector:
    def test_from_ids_respects_set_order(self, template_set):
        vec = metrics.LabelVector.from_ids(["GS2", "CA1"], template_set)
        assert vec.bits[0] is True          # CA1 is first in the authored order
        assert vec.bits[-1] is True         # GS2 is last
        assert sum(vec.bits) == 2
        assert vec.ids(template_set) == ("CA1", "GS2")

    def test_not_applicable_sets_no_bit(self, template_set):
        vec = metrics.LabelVector.from_ids(["NotApplicable"], template_set)
        assert not any(vec.bits)
