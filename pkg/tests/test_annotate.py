import json
import threading

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from inspiremine.annotate import (
    AggregateLabel,
    AnnotationRecord,
    AnnotationStore,
    AssignmentLedger,
    DuplicateAnnotationError,
    InvalidAnnotationError,
    UndefinedAgreementError,
    UnknownPostError,
    aggregate_labels,
    agreement_counts,
    effect_emotion_tables,
    fleiss_kappa,
    inspiring_rating_matrix,
    record_annotation,
    write_agreement_csv,
    write_effect_emotion_csv,
)

from oracles import fleiss_kappa_direct


def rec(post_id, annotator_id, inspiring, influences=(), emotions=()):
    return AnnotationRecord(
        post_id=post_id,
        annotator_id=annotator_id,
        inspiring=inspiring,
        influences=influences,
        emotions=emotions,
    )


# Hand-built 30-record store: 10 posts x 3 annotators. The expected tables
# below were counted by hand from this listing before running the code.
def fixture_records():
    records = []
    # p01: 3 inspiring votes
    records.append(rec("p01", "a1", True, ("motivation_to_act", "feel_good"), ("admiration", "gratitude")))
    records.append(rec("p01", "a2", True, ("motivation_to_act",), ("admiration",)))
    records.append(rec("p01", "a3", True, ("motivation_to_act",), ("Admiration",)))
    # p02: 2 inspiring votes
    records.append(rec("p02", "a1", True, ("feel_good",), ("gratitude",)))
    records.append(rec("p02", "a2", True, ("feel_good", "no_effect"), ("optimism", "gratitude")))
    records.append(rec("p02", "a3", False))
    # p03: 1 inspiring vote (free-text influence pools into "other")
    records.append(rec("p03", "a1", True, ("motivation_to_act", "its practical advice"), ("curiosity",)))
    records.append(rec("p03", "a2", False))
    records.append(rec("p03", "a3", False))
    # p04: 0 inspiring votes
    records.append(rec("p04", "a1", False))
    records.append(rec("p04", "a2", False))
    records.append(rec("p04", "a3", False))
    # p05: 3 inspiring votes
    records.append(rec("p05", "a1", True, ("feel_good",), ("admiration", "amusement")))
    records.append(rec("p05", "a2", True, ("feel_good", "motivation_to_act"), ("admiration",)))
    records.append(rec("p05", "a3", True, ("no_effect",), ("neutral",)))
    # p06: 2 inspiring votes
    records.append(rec("p06", "a1", True, ("motivation_to_act",), ("gratitude",)))
    records.append(rec("p06", "a2", True, ("motivation_to_act", "feel_good"), ("curiosity", "gratitude")))
    records.append(rec("p06", "a3", False))
    # p07: 0 inspiring votes
    records.append(rec("p07", "a1", False))
    records.append(rec("p07", "a2", False))
    records.append(rec("p07", "a3", False))
    # p08: 1 inspiring vote
    records.append(rec("p08", "a1", True, ("made me call my mom",), ("neutral",)))
    records.append(rec("p08", "a2", False))
    records.append(rec("p08", "a3", False))
    # p09: 0 inspiring votes
    records.append(rec("p09", "a1", False))
    records.append(rec("p09", "a2", False))
    records.append(rec("p09", "a3", False))
    # p10: 3 inspiring votes
    records.append(rec("p10", "a1", True, ("feel_good",), ("admiration",)))
    records.append(rec("p10", "a2", True, ("feel_good",), ("admiration", "optimism")))
    records.append(rec("p10", "a3", True, ("feel_good", "other"), ("admiration",)))
    return records


EXPECTED_AGREEMENT = {
    "non_inspiring": 3,
    "agreement_1": 2,
    "agreement_2": 2,
    "agreement_3": 3,
}
EXPECTED_INFLUENCE = {
    "motivation_to_act": {1: 4, 2: 2, 3: 1},
    "feel_good": {1: 5, 2: 3, 3: 1},
    "no_effect": {1: 2, 2: 0, 3: 0},
    "other": {1: 3, 2: 0, 3: 0},
}
EXPECTED_EMOTION = {
    "admiration": {1: 3, 2: 3, 3: 2},
    "gratitude": {1: 3, 2: 2, 3: 0},
    "optimism": {1: 2, 2: 0, 3: 0},
    "curiosity": {1: 2, 2: 0, 3: 0},
    "neutral": {1: 2, 2: 0, 3: 0},
    "amusement": {1: 1, 2: 0, 3: 0},
}
EXPECTED_KAPPA = 7.0 / 15.0  # derived by hand from the vote patterns


class TestAnnotationRecord:
    def test_non_inspiring_must_be_bare(self):
        with pytest.raises(InvalidAnnotationError):
            rec("p", "a", False, influences=("feel_good",))
        with pytest.raises(InvalidAnnotationError):
            rec("p", "a", False, emotions=("joy",))

    def test_blank_entries_rejected(self):
        with pytest.raises(InvalidAnnotationError):
            rec("p", "a", True, influences=("  ",))

    def test_confidence_enum(self):
        with pytest.raises(InvalidAnnotationError):
            AnnotationRecord("p", "a", True, confidence="medium")

    def test_json_roundtrip(self):
        record = rec("p", "a", True, ("feel_good",), ("awe",))
        again = AnnotationRecord.from_json_dict(record.to_json_dict())
        assert again == record

    def test_other_influences(self):
        record = rec("p", "a", True, ("feel_good", "reminded me to vote"))
        assert record.other_influences() == ("reminded me to vote",)


class TestAnnotationStore:
    def test_append_and_duplicate_rejection(self, tmp_path):
        store = AnnotationStore(tmp_path / "ann.ndjson")
        assert store.append(rec("p", "a", True, ("feel_good",), ("awe",))) == 1
        with pytest.raises(DuplicateAnnotationError):
            store.append(rec("p", "a", False))

    def test_durable_across_reopen(self, tmp_path):
        path = tmp_path / "ann.ndjson"
        store = AnnotationStore(path)
        store.append(rec("p", "a", True, ("feel_good",), ()))
        reopened = AnnotationStore(path)
        assert len(reopened) == 1
        with pytest.raises(DuplicateAnnotationError):
            reopened.append(rec("p", "a", True))

    def test_file_is_one_json_object_per_line(self, tmp_path):
        path = tmp_path / "ann.ndjson"
        store = AnnotationStore(path)
        store.append(rec("p1", "a", True, (), ("joy",)))
        store.append(rec("p2", "a", False))
        lines = path.read_text().strip().splitlines()
        assert len(lines) == 2
        assert all(json.loads(line)["annotator_id"] == "a" for line in lines)


class TestAssignmentLedger:
    def test_fresh_ledger_offers_the_post(self):
        ledger = AssignmentLedger(["p1"])
        assert ledger.next_task("alice") == "p1"

    def test_completed_post_not_reoffered_to_same_annotator(self):
        ledger = AssignmentLedger(["p1", "p2"])
        first = ledger.next_task("alice")
        ledger.complete(first, "alice")
        second = ledger.next_task("alice")
        assert second != first

    def test_repeat_requests_reoffer_open_reservation(self):
        ledger = AssignmentLedger(["p1", "p2", "p3"])
        offered = ledger.next_task("alice")
        assert ledger.next_task("alice") == offered

    def test_cap_of_three_distinct_annotators(self):
        ledger = AssignmentLedger(["p1"])
        for name in ("a", "b", "c"):
            ledger.complete("p1", name)
        assert ledger.next_task("d") is None
        with pytest.raises(InvalidAnnotationError):
            ledger.complete("p1", "d")

    def test_exhaustion_five_annotators_ten_posts(self):
        posts = [f"p{i}" for i in range(10)]
        ledger = AssignmentLedger(posts)
        annotators = [f"ann{i}" for i in range(5)]
        done = {a: set() for a in annotators}
        progress = True
        while progress:
            progress = False
            for name in annotators:
                task = ledger.next_task(name)
                if task is not None:
                    ledger.complete(task, name)
                    assert task not in done[name]
                    done[name].add(task)
                    progress = True
        per_post = {p: ledger.annotators_of(p) for p in posts}
        assert all(len(v) == 3 for v in per_post.values())
        assert all(len(set(v)) == 3 for v in per_post.values())
        assert ledger.is_exhausted()


class TestRecordAnnotation:
    def test_unknown_post_rejected(self, tmp_path):
        store = AnnotationStore(tmp_path / "a.ndjson")
        with pytest.raises(UnknownPostError):
            record_annotation(rec("ghost", "a", True), store, known_posts={"p1"})

    def test_ledger_rolls_back_on_store_failure(self, tmp_path):
        store = AnnotationStore(tmp_path / "a.ndjson")
        ledger = AssignmentLedger(["p1"])
        record = rec("p1", "a", True)
        record_annotation(record, store, known_posts={"p1"}, ledger=ledger)
        # duplicate: the ledger rejects before the store is touched
        with pytest.raises((DuplicateAnnotationError, InvalidAnnotationError)):
            record_annotation(record, store, known_posts={"p1"}, ledger=ledger)
        assert len(store) == 1
        assert set(ledger.annotators_of("p1")) == {"a"}

    def test_cap_enforced_even_for_walk_ins(self, tmp_path):
        store = AnnotationStore(tmp_path / "a.ndjson")
        ledger = AssignmentLedger(["p1"])
        for name in ("a", "b", "c"):
            record_annotation(rec("p1", name, True), store, ledger=ledger)
        with pytest.raises(InvalidAnnotationError):
            record_annotation(rec("p1", "d", True), store, ledger=ledger)
        assert len(store) == 3


class TestAggregation:
    def test_two_of_three_votes(self):
        labels = aggregate_labels([rec("p", "a", True), rec("p", "b", True), rec("p", "c", False)])
        assert labels == [AggregateLabel("p", True, 2, 3)]

    def test_zero_votes(self):
        labels = aggregate_labels([rec("p", x, False) for x in "abc"])
        assert labels == [AggregateLabel("p", False, 0, 3)]

    def test_partial_annotation_flagged_incomplete(self):
        (label,) = aggregate_labels([rec("p", "a", True)])
        assert label.agreement == 1 and not label.complete

    def test_monotone_in_positive_votes(self):
        base = [rec("p", "a", True), rec("p", "b", False)]
        more = base + [rec("p", "c", True)]
        (first,) = aggregate_labels(base)
        (second,) = aggregate_labels(more)
        assert second.agreement >= first.agreement


class TestFleissKappa:
    def test_unanimous_split_across_categories_is_one(self):
        matrix = [[3, 0], [0, 3], [3, 0], [0, 3]]
        assert fleiss_kappa(matrix) == 1.0

    def test_uniform_two_rater_split_is_minus_one(self):
        matrix = [[1, 1], [1, 1]]
        assert fleiss_kappa(matrix) == -1.0

    def test_single_category_raises(self):
        with pytest.raises(UndefinedAgreementError):
            fleiss_kappa([[3, 0], [3, 0]])

    def test_matches_direct_oracle_on_random_matrices(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            counts = rng.multinomial(3, [0.4, 0.35, 0.25], size=10)
            try:
                ours = fleiss_kappa(counts)
            except UndefinedAgreementError:
                with pytest.raises(ZeroDivisionError):
                    fleiss_kappa_direct(counts)
                continue
            assert abs(ours - fleiss_kappa_direct(counts)) < 1e-9

    @given(st.integers(min_value=0, max_value=2**31 - 1))
    @settings(max_examples=40, deadline=None)
    def test_invariant_under_column_permutation(self, seed):
        rng = np.random.default_rng(seed)
        counts = rng.multinomial(4, [0.3, 0.4, 0.3], size=6)
        perm = rng.permutation(3)
        try:
            base = fleiss_kappa(counts)
        except UndefinedAgreementError:
            return
        assert fleiss_kappa(counts[:, perm]) == pytest.approx(base, abs=1e-12)

    def test_unanimous_rows_with_two_categories_used(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            cols = rng.integers(0, 2, size=8)
            if len(set(cols.tolist())) < 2:
                cols[0] = 1 - cols[0]
            matrix = np.zeros((8, 2), dtype=int)
            matrix[np.arange(8), cols] = 3
            assert fleiss_kappa(matrix) == 1.0

    def test_rejects_ragged_and_tiny(self):
        with pytest.raises(ValueError):
            fleiss_kappa([[2, 1], [3, 1]])
        with pytest.raises(ValueError):
            fleiss_kappa([[1, 0]])


class TestThirtyRecordFixture:
    def test_agreement_counts_match_hand_counts(self):
        labels = aggregate_labels(fixture_records())
        assert agreement_counts(labels) == EXPECTED_AGREEMENT

    def test_influence_table_matches_hand_counts(self):
        influence, _ = effect_emotion_tables(fixture_records())
        assert influence == EXPECTED_INFLUENCE

    def test_emotion_table_matches_hand_counts(self):
        _, emotion = effect_emotion_tables(fixture_records())
        assert emotion == EXPECTED_EMOTION

    def test_kappa_matches_hand_derivation(self):
        matrix, post_ids = inspiring_rating_matrix(fixture_records())
        assert len(post_ids) == 10
        assert fleiss_kappa(matrix) == pytest.approx(EXPECTED_KAPPA, abs=1e-12)

    def test_csv_outputs(self, tmp_path):
        records = fixture_records()
        agreement_path = tmp_path / "agreement.csv"
        write_agreement_csv(aggregate_labels(records), agreement_path)
        assert agreement_path.read_text() == (
            "non_inspiring,agreement_1,agreement_2,agreement_3\n3,2,2,3\n"
        )
        table_path = tmp_path / "tables.csv"
        influence, emotion = effect_emotion_tables(records)
        write_effect_emotion_csv(influence, emotion, table_path)
        lines = table_path.read_text().splitlines()
        assert lines[0] == "kind,category,at_least_1,at_least_2,at_least_3"
        assert "influence,feel_good,5,3,1" in lines
        assert "emotion,admiration,3,3,2" in lines


class TestThresholdNesting:
    @given(st.integers(min_value=0, max_value=2**31 - 1))
    @settings(max_examples=100, deadline=None)
    def test_nested_for_random_stores(self, seed):
        rng = np.random.default_rng(seed)
        records = []
        influence_pool = ["motivation_to_act", "feel_good", "no_effect", "free text"]
        emotion_pool = ["admiration", "joy", "awe", "gratitude"]
        for p in range(rng.integers(1, 8)):
            for a in range(3):
                inspiring = bool(rng.integers(0, 2))
                influences = ()
                emotions = ()
                if inspiring:
                    influences = tuple(
                        rng.choice(influence_pool, size=rng.integers(0, 3), replace=False)
                    )
                    emotions = tuple(
                        rng.choice(emotion_pool, size=rng.integers(0, 3), replace=False)
                    )
                records.append(rec(f"p{p}", f"a{a}", inspiring, influences, emotions))
        influence_table, emotion_table = effect_emotion_tables(records)
        for table in (influence_table, emotion_table):
            for counts in table.values():
                assert counts[3] <= counts[2] <= counts[1]

    def test_empty_store_all_zeros(self):
        influence, emotion = effect_emotion_tables([])
        assert all(v == {1: 0, 2: 0, 3: 0} for v in influence.values())
        assert all(v == {1: 0, 2: 0, 3: 0} for v in emotion.values())

    def test_all_three_chose_feel_good(self):
        records = [rec("p", a, True, ("feel_good",), ()) for a in "abc"]
        influence, _ = effect_emotion_tables(records)
        assert influence["feel_good"] == {1: 1, 2: 1, 3: 1}
