import pytest

from neurashed.errors import ReportingError
from neurashed.reporting.tables import (
    Table,
    emit_csv,
    format_cell,
    read_csv,
    render_csv,
)


def test_empty_table_header_only(tmp_path):
    path = tmp_path / "out.csv"
    emit_csv(Table(columns=("a", "b")), path)
    assert path.read_bytes() == b"a,b\n"


def test_float_round_trip(tmp_path):
    path = tmp_path / "out.csv"
    values = [0.1, 1 / 3, 1e-300, 2.0**60 + 0.5]
    emit_csv(Table(columns=("x",), rows=[(v,) for v in values]), path)
    assert [float(c) for c in read_csv(path).column("x")] == values


def test_column_order_and_line_endings():
    text = render_csv(Table(columns=("z", "a"), rows=[(1, "p"), (2, "q")]))
    assert text == "z,a\n1,p\n2,q\n"
    assert "\r" not in text


def test_format_cell():
    assert format_cell(None) == ""
    assert format_cell(True) == "true"
    assert format_cell(3) == "3"
    assert format_cell(0.5) == "0.5"


def test_format_numpy_float():
    numpy = pytest.importorskip("numpy")
    assert format_cell(numpy.float64(0.25)) == "0.25"


def test_quoting():
    text = render_csv(Table(columns=("id",), rows=[("13->19",), ("a,b",)]))
    assert text == 'id\n13->19\n"a,b"\n'


def test_ragged_rows_rejected():
    with pytest.raises(ReportingError, match="row 1"):
        Table(columns=("a", "b"), rows=[(1, 2), (3,)])


def test_records():
    table = Table(columns=("a", "b"), rows=[(1, None), (2, "x")])
    assert table.records() == [{"a": 1, "b": None}, {"a": 2, "b": "x"}]


def test_emit_overwrites_without_leftovers(tmp_path):
    path = tmp_path / "out.csv"
    emit_csv(Table(columns=("a",), rows=[(1,)]), path)
    emit_csv(Table(columns=("a",), rows=[(2,)]), path)
    assert path.read_text() == "a\n2\n"
    assert sorted(p.name for p in tmp_path.iterdir()) == ["out.csv"]
