# coding=utf-8
"""Aligned plain-text reports."""

# Python 2/3 compatibility
# pylint: disable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position
from __future__ import (absolute_import, division, print_function, unicode_literals)
from future.builtins.disabled import *
from future.builtins import *
from future.standard_library import install_aliases
install_aliases()
# pylint: enable=wildcard-import,unused-wildcard-import,wrong-import-order,wrong-import-position

# Local imports
from ._writer_base import ReportWriterBase, format_value


class ToText(ReportWriterBase):

    extension = ".txt"

    def _table(self, table, fout):
        fout.write(render_text(table))


def render_text(table):
    """Right-aligned numeric columns, left-aligned text, one space-padded header and a rule under it."""
    cells = [[format_value(v) for v in row] for row in table.rows]
    widths = [len(c) for c in table.columns]
    for row in cells:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]

    def _line(values, raw):
        parts = []
        for value, width, original in zip(values, widths, raw):
            if isinstance(original, (int, float)) and not isinstance(original, bool):
                parts.append(value.rjust(width))
            else:
                parts.append(value.ljust(width))
        return "  ".join(parts).rstrip()

    lines = []
    if table.title:
        lines.append(table.title)
    lines.append("  ".join(c.ljust(w) for c, w in zip(table.columns, widths)).rstrip())
    lines.append("  ".join("-" * w for w in widths))
    lines.extend(_line(row, raw) for row, raw in zip(cells, table.rows))
    return "\n".join(lines) + "\n"
