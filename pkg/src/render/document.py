#!/usr/bin/env python3
"""
Standalone HTML documents for the external renderer.

Each document embeds the style sheet of a StyleAugmentation and the table,
with every td tagged by its anchor (data-row, data-col) so the renderer can
locate cells by XPath.
"""

from typing import Dict, List, Optional

import lxml.etree as etree

from src.markup.html_codec import HtmlTableDoc, parse_table_html
from src.render.style import StyleAugmentation
from src.table.structure import LogicalCell


def cell_xpath(row: int, col: int) -> str:
    """XPath locating the td anchored at (row, col)."""
    return f"//td[@data-row='{row}' and @data-col='{col}']"


def _build_table(builder: etree.TreeBuilder, doc: HtmlTableDoc) -> None:
    s = doc.structure
    by_row: Dict[int, List[LogicalCell]] = {r: [] for r in range(s.n_rows)}
    for cell in s.cells:
        by_row[cell.anchor_row].append(cell)

    builder.start("table", {})
    open_group: Optional[str] = None
    open_index = 0
    for r in range(s.n_rows):
        if r < len(doc.rows):
            group, index = doc.rows[r].group, doc.rows[r].group_index
        else:
            group, index = open_group, open_index
        if (group, index) != (open_group, open_index):
            if open_group:
                builder.end(open_group)
            if group:
                builder.start(group, {})
            open_group, open_index = group, index
        builder.start("tr", {})
        for cell in by_row[r]:
            attrs = {"data-row": str(cell.anchor_row), "data-col": str(cell.anchor_col)}
            if cell.row_span > 1:
                attrs["rowspan"] = str(cell.row_span)
            if cell.col_span > 1:
                attrs["colspan"] = str(cell.col_span)
            builder.start("td", attrs)
            if cell.content:
                builder.data(cell.content)
            builder.end("td")
        builder.end("tr")
    if open_group:
        builder.end(open_group)
    builder.end("table")


def emit_document(html: str, style: StyleAugmentation, title: str = "table") -> str:
    """
    Wrap a table into a self-contained HTML document.

    Args:
        html: Markup holding exactly one table
        style: Style to embed
        title: Document title

    Returns:
        The document text; identical inputs give identical output

    Raises:
        MalformedMarkup: if html does not parse as a single table
    """
    doc = parse_table_html(html)
    builder = etree.TreeBuilder()
    builder.start("html", {})
    builder.start("head", {})
    builder.start("meta", {"charset": "utf-8"})
    builder.end("meta")
    builder.start("title", {})
    builder.data(title)
    builder.end("title")
    builder.start("style", {})
    builder.data(style.to_css())
    builder.end("style")
    builder.end("head")
    builder.start("body", {})
    _build_table(builder, doc)
    builder.end("body")
    root = builder.end("html")
    return etree.tostring(root, method="html", encoding="unicode", doctype="<!DOCTYPE html>")
