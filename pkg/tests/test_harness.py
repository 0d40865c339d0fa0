"""Paragraph experiments: splitting, scoring, transformation tables, groups."""

import math

import numpy as np
import pytest

from accenthmm.harness import (
    EvalItem,
    EvalReport,
    MalformedTranscript,
    PARAGRAPH_LENGTH,
    TEST_SIZE,
    TRAIN_SIZE,
    UnbalancedDesign,
    anova_table,
    evaluate_speaker,
    feature_labels,
    group_of,
    group_report,
    load_reference_table,
    load_transcript,
    model_transformations,
    score,
    split_transcript,
    standard_error,
    transformation_table,
)
from accenthmm.hmm import align_and_count, init_naive_params
from accenthmm.resources import (
    load_reference_transformations,
    load_speaker,
    subject_names,
)


@pytest.fixture(scope="module")
def french8(symbols):
    return load_speaker("french8", symbols)


@pytest.fixture(scope="module")
def labels(symbols):
    return feature_labels(symbols)


class TestTranscripts:
    def test_sizes(self, french8, eval_lexicon):
        assert TRAIN_SIZE == 35 and TEST_SIZE == 34 and PARAGRAPH_LENGTH == 69
        assert len(french8.entries) == 69
        train, test = split_transcript(french8, eval_lexicon)
        assert len(train) == 35 and len(test) == 34

    def test_bundled_speakers(self, symbols):
        names = subject_names()
        assert len(names) == 19
        assert sum(group_of(n) == "A" for n in names) == 10
        assert sum(group_of(n) == "B" for n in names) == 9

    def test_wrong_token_count_rejected(self, tmp_path, symbols):
        path = tmp_path / "short.tsv"
        path.write_text("please\npli:z\n".replace("\n", "\t", 1), encoding="utf-8")
        with pytest.raises(MalformedTranscript):
            load_transcript(path, symbols)

    def test_missing_tab_rejected(self, tmp_path, symbols):
        path = tmp_path / "bad.tsv"
        path.write_text("please pli:z\n" * 69, encoding="utf-8")
        with pytest.raises(MalformedTranscript):
            load_transcript(path, symbols)


class TestScoring:
    def test_homophone_rule(self, eval_lexicon):
        test_pairs = [
            (eval_lexicon.form("red"), ()),
            (eval_lexicon.form("snake"), ()),
        ]
        ties = [("read",), ("stella",)]
        report = score(test_pairs, ties, eval_lexicon, "x", "before")
        assert [item.correct for item in report.items] == [True, False]
        assert report.n_correct == 1
        assert math.isclose(report.rate, 50.0)

    def test_tie_set_count_must_match(self, eval_lexicon):
        with pytest.raises(ValueError):
            score([(eval_lexicon.form("red"), ())], [], eval_lexicon)

    def test_rate_of_34_item_report(self):
        items = tuple(
            EvalItem("w", ("w",), i < 22) for i in range(34)
        )
        report = EvalReport("s", "before", items)
        assert math.isclose(report.rate, 100.0 * 22 / 34)


class TestFrench8Experiment:
    def test_before_and_after_rates(self, french8, eval_lexicon):
        before, after, counts = evaluate_speaker(french8, eval_lexicon)
        assert (before.n_correct, after.n_correct) == (22, 30)
        assert math.isclose(before.rate, 100 * 22 / 34)
        assert math.isclose(after.rate, 100 * 30 / 34)
        assert counts.n_not_ins + counts.n_ins > 0

    def test_learning_set_transformations_match_reference(
        self, french8, eval_lexicon, symbols, labels
    ):
        params = init_naive_params(eval_lexicon.inventory)
        train, _ = split_transcript(french8, eval_lexicon)
        counts = align_and_count(params, train)
        reference = load_reference_transformations(symbols)
        report = transformation_table(counts, labels, reference)
        assert report.all_match, report.text()

    def test_model_table_marks_insertions_and_deletions(
        self, french8, eval_lexicon, symbols, labels
    ):
        params = init_naive_params(eval_lexicon.inventory)
        train, _ = split_transcript(french8, eval_lexicon)
        table = model_transformations(align_and_count(params, train), labels)
        assert table[("ɹ", "∅")] == 4
        assert table[("∅", "ʀ")] == 6
        assert table[("z", "s")] == 7


class TestReferenceTables:
    def test_spelling_variants_join_on_vectors(self, tmp_path, symbols):
        path = tmp_path / "ref.tsv"
        path.write_text("g\tk\t2\n", encoding="utf-8")
        a = load_reference_table(path, symbols)
        path.write_text("ɡ\tk\t2\n", encoding="utf-8")  # U+0261 spelling
        b = load_reference_table(path, symbols)
        assert a == b

    def test_epsilon_rows(self, tmp_path, symbols):
        path = tmp_path / "ref.tsv"
        path.write_text("# comment\nɹ\t∅\t4\n∅\tʀ\t6\n", encoding="utf-8")
        table = load_reference_table(path, symbols)
        assert table[("ɹ", "∅")] == 4 and table[("∅", "ʀ")] == 6

    def test_multi_phone_side_rejected(self, tmp_path, symbols):
        path = tmp_path / "ref.tsv"
        path.write_text("sn\ts\t1\n", encoding="utf-8")
        with pytest.raises(ValueError):
            load_reference_table(path, symbols)

    def test_bad_field_count_rejected(self, tmp_path, symbols):
        path = tmp_path / "ref.tsv"
        path.write_text("z\ts\n", encoding="utf-8")
        with pytest.raises(ValueError):
            load_reference_table(path, symbols)


class TestGroups:
    def test_group_of(self):
        assert group_of("english10") == "A"
        assert group_of("English134") == "A"
        assert group_of("french8") == "B"
        assert group_of("korean3") == "B"

    def test_standard_error(self):
        assert standard_error([5.0]) == 0.0
        values = [2.0, 4.0, 6.0, 8.0]
        want = np.std(values, ddof=1) / 2.0
        assert math.isclose(standard_error(values), want)

    def test_group_report_cells(self):
        reports = [
            EvalReport("english1", "before", (EvalItem("w", ("w",), True),)),
            EvalReport("english2", "before", (EvalItem("w", ("w",), False),)),
            EvalReport("french1", "before", (EvalItem("w", ("w",), True),)),
        ]
        cells = {(c.group, c.condition): c for c in group_report(reports)}
        assert cells[("A", "before")].n == 2
        assert math.isclose(cells[("A", "before")].mean, 50.0)
        assert cells[("B", "before")].n == 1
        assert cells[("B", "before")].se == 0.0

    def test_anova_table_needs_balance(self):
        reports = []
        for i in range(2):
            for condition in ("before", "after"):
                reports.append(
                    EvalReport(f"english{i}", condition, (EvalItem("w", ("w",), True),))
                )
        for condition in ("before", "after"):
            reports.append(
                EvalReport("french0", condition, (EvalItem("w", ("w",), True),))
            )
        with pytest.raises(UnbalancedDesign):
            anova_table(reports)

    def test_anova_table_shape(self):
        reports = []
        for speaker in ("english0", "english1", "french0", "spanish0"):
            for condition, correct in (("before", False), ("after", True)):
                reports.append(
                    EvalReport(speaker, condition, (EvalItem("w", ("w",), correct),))
                )
        table = anova_table(reports)
        assert table.shape == (2, 2, 2)
        assert np.all(table[:, 0, :] == 0.0) and np.all(table[:, 1, :] == 100.0)
