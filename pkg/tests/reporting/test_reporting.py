# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins import *
from future.builtins.disabled import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

import zipfile

import numpy as np
import pytest

from npuleak.reporting import (NOT_AVAILABLE, Table, ToCsv, ToText, ToWorkbook, read_csv_table, render_text,
                               write_report)
from npuleak.reporting._writer_base import format_value


@pytest.fixture
def scores():
    return Table("boundaries", ["model", "precision", "found"], [["alexnet", np.float64(1.0), np.int64(3)],
                                                                 ["vgg16", 0.875, 7]],
                 title="Boundary detection")


def test_table_plain_values(scores):
    assert type(scores.rows[0][1]) is float
    assert scores.column("found") == [3, 7]
    with pytest.raises(ValueError):
        Table("bad", ["a", "b"], [[1]])


def test_missing_values_are_not_available(tmp_path):
    table = Table("shaped", ["model", "precision"], [["alexnet", None]])
    assert table.rows == [("alexnet", NOT_AVAILABLE)]
    assert render_text(table).splitlines()[-1].split() == ["alexnet", "NA"]
    assert read_csv_table(ToCsv().table(table, tmp_path)).rows == table.rows


def test_format_value():
    assert format_value(0.5) == "0.5000"
    assert format_value(True) == "yes"
    assert format_value("NA") == "NA"
    assert format_value(3) == "3"


def test_render_text(scores):
    lines = render_text(scores).splitlines()
    assert lines[0] == "Boundary detection"
    assert lines[1].split() == ["model", "precision", "found"]
    assert set(lines[2].replace(" ", "")) == {"-"}
    assert lines[3].split() == ["alexnet", "1.0000", "3"]
    # numbers are right-aligned to the header width
    assert lines[3].endswith("    3")
    assert len(lines[3]) == len(lines[4])


def test_csv_round_trip(tmp_path, scores):
    path = ToCsv().table(scores, tmp_path)
    assert path.name == "boundaries.csv"
    restored = read_csv_table(path)
    assert restored.columns == scores.columns
    assert restored.rows == scores.rows


def test_read_csv_table_empty(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text(u"")
    with pytest.raises(ValueError):
        read_csv_table(empty)


def test_no_overwrite(tmp_path, scores):
    ToText().table(scores, tmp_path)
    with pytest.raises(ValueError):
        ToText().table(scores, tmp_path, overwrite=False)


def test_write_report(tmp_path, scores):
    text, csv_path = write_report(scores, tmp_path)
    assert text.read_text() == render_text(scores)
    assert csv_path.exists()
    assert sorted(p.name for p in tmp_path.iterdir()) == ["boundaries.csv", "boundaries.txt"]


def test_workbook(tmp_path, scores):
    empty = Table("a_table_name_that_is_far_too_long_for_a_sheet", ["x"], [])
    twin = Table("a_table_name_that_is_far_too_long_for_a_sheet_too", ["x"], [[1]])
    path = ToWorkbook().workbook([scores, empty, twin], tmp_path / "report.xlsx")
    assert zipfile.is_zipfile(str(path))
    with zipfile.ZipFile(str(path)) as archive:
        workbook_xml = archive.read("xl/workbook.xml").decode("utf-8")
    assert 'name="boundaries"' in workbook_xml
    assert 'name="a_table_name_that_is_far_too_lo"' in workbook_xml
    assert 'name="a_table_name_that_is_far_too_~1"' in workbook_xml
    assert [p.name for p in tmp_path.iterdir()] == ["report.xlsx"]
