import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from policyloop.corpus import HUMAN, Annotation, Blob, Document
from policyloop.errors import ShapeError
from policyloop.evaluation.metrics import (
    brier_score,
    classification_f1,
    hit_at_k,
    krank_f1,
)
from policyloop.retrieval import SuggestionSet


def doc_with_positives(n_blobs: int, positive: list[int], label: str = "r") -> Document:
    blobs = [Blob(index=i, text=f"blob {i}") for i in range(n_blobs)]
    for i in positive:
        blobs[i].annotate(Annotation(label=label, value=1, source=HUMAN))
    return Document(id="d", title="d", language="de", blobs=blobs)


def sugg(indices: list[int], label: str = "r") -> SuggestionSet:
    return SuggestionSet(
        document_id="d",
        label=label,
        k=len(indices),
        threshold=0.0,
        suggestions=[(i, 1.0 - 0.01 * j) for j, i in enumerate(indices)],
    )


class TestHitAtK:
    def test_hit_when_true_blob_suggested(self):
        doc = doc_with_positives(10, [7])
        assert hit_at_k(sugg([7, 2, 9, 1, 4]), doc, "r") == 1

    def test_miss_when_true_blob_absent(self):
        doc = doc_with_positives(10, [7])
        assert hit_at_k(sugg([2, 9, 1, 4, 3]), doc, "r") == 0

    def test_single_overlap_of_multiple_truths_counts(self):
        doc = doc_with_positives(10, [3, 8])
        assert hit_at_k(sugg([8, 0, 1, 2, 4]), doc, "r") == 1

    def test_document_without_positive_is_skipped(self):
        doc = doc_with_positives(10, [])
        assert hit_at_k(sugg([0, 1]), doc, "r") is None


class TestKrankF1:
    def test_perfect_retrieval_at_k1(self):
        docs = [doc_with_positives(10, [i]) for i in range(3)]
        sets = [sugg([i]) for i in range(3)]
        assert krank_f1(sets, docs, "r") == 1.0

    def test_disjoint_suggestions_give_zero(self):
        docs = [doc_with_positives(10, [0])]
        assert krank_f1([sugg([5, 6, 7, 8, 9])], docs, "r") == 0.0

    def test_hand_computed_micro_average(self):
        # doc A: true blob 0 retrieved at k=5 (TP=1, FP=4);
        # doc B: true blob 0 missed (FP=5, FN=1) -> micro F1 = 1/6
        doc_a = doc_with_positives(10, [0])
        doc_b = doc_with_positives(10, [0])
        sets = [sugg([0, 1, 2, 3, 4]), sugg([5, 6, 7, 8, 9])]
        assert krank_f1(sets, [doc_a, doc_b], "r") == pytest.approx(1 / 6, abs=1e-12)


class TestClassificationF1:
    def test_perfect_scores(self):
        assert classification_f1([1.0, 1.0, 0.0], [1, 1, 0]) == 1.0

    def test_all_zero_scores(self):
        assert classification_f1([0.0, 0.0], [1, 0]) == 0.0

    def test_hand_computation(self):
        # TP=2, FP=1, FN=2 -> F1 = 4/7
        scores = [0.9, 0.8, 0.7, 0.1, 0.2]
        truth = [1, 1, 0, 1, 1]
        assert classification_f1(scores, truth) == pytest.approx(4 / 7, abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ShapeError):
            classification_f1([0.5], [1, 0])


class TestBrierScore:
    def test_perfect_hard_predictions(self):
        assert brier_score([1.0, 0.0], [1, 0], [0.5, 0.5]) == pytest.approx(0.0, abs=1e-12)

    def test_confidently_wrong_predictions(self):
        assert brier_score([0.0, 1.0], [1, 0], [0.5, 0.5]) == pytest.approx(1.0, abs=1e-12)

    def test_hand_evaluation(self):
        assert brier_score([0.8, 0.2], [1, 0], [1.0, 1.0]) == pytest.approx(0.04, abs=1e-12)

    def test_default_weights_balance_classes(self):
        # one positive vs three negatives: each class carries half the mass
        scores = [1.0, 0.0, 0.0, 1.0]
        truth = [1, 0, 0, 0]
        assert brier_score(scores, truth) == pytest.approx(0.5 * (1 / 3), abs=1e-12)

    def test_weight_validation(self):
        with pytest.raises(ValueError):
            brier_score([0.5, 0.5], [1, 0], [0.0, 0.0])
        with pytest.raises(ShapeError):
            brier_score([0.5, 0.5], [1, 0], [1.0])

    @given(
        st.lists(
            st.tuples(
                st.floats(0, 1),
                st.integers(0, 1),
                st.floats(0.01, 10),
            ),
            min_size=1,
            max_size=50,
        )
    )
    @settings(max_examples=100, deadline=None)
    def test_range_and_weight_scale_invariance(self, rows):
        scores = [r[0] for r in rows]
        truth = [r[1] for r in rows]
        weights = [r[2] for r in rows]
        value = brier_score(scores, truth, weights)
        assert 0.0 <= value <= 1.0
        scaled = brier_score(scores, truth, [w * 7.3 for w in weights])
        assert scaled == pytest.approx(value, abs=1e-12)

    @given(
        st.lists(st.floats(0, 1), min_size=2, max_size=40),
        st.data(),
    )
    @settings(max_examples=100, deadline=None)
    def test_metrics_stay_in_unit_interval(self, scores, data):
        truth = data.draw(
            st.lists(
                st.integers(0, 1), min_size=len(scores), max_size=len(scores)
            ).filter(lambda t: 0 < sum(t) < len(t))
        )
        assert 0.0 <= classification_f1(scores, truth) <= 1.0
        assert 0.0 <= brier_score(scores, truth) <= 1.0
