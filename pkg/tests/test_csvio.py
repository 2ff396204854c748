"""Tests for deterministic CSV emission and the matching reader."""

import numpy as np
import pytest

from benthdrift.csvio import emit_csv, format_cell, read_csv


class TestFormatCell:
    def test_strings_pass_through(self):
        assert format_cell("converged_positive") == "converged_positive"

    def test_booleans_are_lowercase_words(self):
        assert format_cell(True) == "true"
        assert format_cell(False) == "false"
        assert format_cell(np.bool_(True)) == "true"

    def test_integers_have_no_decimal_point(self):
        assert format_cell(400) == "400"
        assert format_cell(np.int64(-3)) == "-3"

    def test_floats_use_nine_significant_digits(self):
        assert format_cell(0.1741111646) == "0.174111165"
        assert format_cell(np.float64(1.0)) == "1"
        assert format_cell(-2.5e-17) == "-2.5e-17"

    def test_unknown_types_rejected(self):
        with pytest.raises(TypeError):
            format_cell(object())
        with pytest.raises(TypeError):
            format_cell(None)


class TestRoundTrip:
    def test_comments_header_and_rows_survive(self, tmp_path):
        path = str(tmp_path / "out.csv")
        emit_csv(
            path,
            ["x", "u", "v"],
            [[0.0, 1, True], [0.5, 2, False]],
            comments=["preset=fig_bistable_ff", "outcome=extinct"],
        )
        table = read_csv(path)
        assert table.comments == ("preset=fig_bistable_ff", "outcome=extinct")
        assert table.header == ("x", "u", "v")
        assert table.rows == (("0", "1", "true"), ("0.5", "2", "false"))

    def test_column_conversion(self, tmp_path):
        path = str(tmp_path / "cols.csv")
        emit_csv(path, ["t", "label"], [[0.25, "a"], [0.75, "b"]])
        table = read_csv(path)
        np.testing.assert_allclose(table.column("t"), [0.25, 0.75])
        assert list(table.column("label", dtype=str)) == ["a", "b"]
        with pytest.raises(KeyError):
            table.column("missing")

    def test_float_precision_round_trips_to_formatter(self, tmp_path):
        values = [0.0736746752912, -0.190333704529, 1e-300]
        path = str(tmp_path / "prec.csv")
        emit_csv(path, ["value"], [[value] for value in values])
        got = read_csv(path).column("value")
        for raw, back in zip(values, got):
            assert back == pytest.approx(raw, rel=1e-8)

    def test_parent_directories_created(self, tmp_path):
        path = str(tmp_path / "deep" / "nested" / "file.csv")
        emit_csv(path, ["a"], [[1]])
        assert read_csv(path).rows == (("1",),)

    def test_lines_end_with_bare_lf(self, tmp_path):
        path = str(tmp_path / "lf.csv")
        emit_csv(path, ["a"], [[1]], comments=["note"])
        with open(path, "rb") as handle:
            raw = handle.read()
        assert raw == b"# note\na\n1\n"

    def test_rewrite_is_byte_identical(self, tmp_path):
        path = str(tmp_path / "stable.csv")
        rows = [[i * 0.1, i] for i in range(5)]
        emit_csv(path, ["x", "i"], rows, comments=["seed=7"])
        with open(path, "rb") as handle:
            first = handle.read()
        emit_csv(path, ["x", "i"], rows, comments=["seed=7"])
        with open(path, "rb") as handle:
            assert handle.read() == first


class TestReaderEdges:
    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        table = read_csv(str(path))
        assert table.header == ()
        assert table.rows == ()
        assert table.comments == ()

    def test_comment_only_file(self, tmp_path):
        path = tmp_path / "comments.csv"
        path.write_text("# alpha\n#beta\n")
        table = read_csv(str(path))
        assert table.comments == ("alpha", "beta")
        assert table.header == ()

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "blanks.csv"
        path.write_text("a,b\n\n1,2\n\n")
        table = read_csv(str(path))
        assert table.header == ("a", "b")
        assert table.rows == (("1", "2"),)
