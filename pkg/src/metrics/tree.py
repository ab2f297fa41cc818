#!/usr/bin/env python3
"""
Ordered labeled trees of HTML tables, as compared by TEDS.
"""

from dataclasses import dataclass, field
from typing import Iterator, List, Optional

from src.markup.html_codec import HtmlTableDoc


@dataclass(eq=False)
class TableTreeNode:
    """One element of a table tree; only td nodes carry spans and content."""

    tag: str
    colspan: int = 1
    rowspan: int = 1
    content: Optional[str] = None
    children: List["TableTreeNode"] = field(default_factory=list)

    def size(self) -> int:
        return 1 + sum(child.size() for child in self.children)

    def iter_nodes(self) -> Iterator["TableTreeNode"]:
        yield self
        for child in self.children:
            yield from child.iter_nodes()

    def bracket(self) -> str:
        """Bracket notation, handy in assertion messages."""
        if self.tag == "td":
            label = f"td[{self.rowspan}x{self.colspan}]:{self.content or ''}"
        else:
            label = self.tag
        return "{" + label + "".join(child.bracket() for child in self.children) + "}"


def build_tree(doc: HtmlTableDoc) -> TableTreeNode:
    """
    Build the tree of a parsed table.

    Rows keep the grouping of the source markup: rows written in one
    thead/tbody/tfoot element hang under one group node, bare rows hang off
    the table directly.

    Args:
        doc: Parsed table document

    Returns:
        Root table node
    """
    root = TableTreeNode("table")
    current_group: Optional[TableTreeNode] = None
    current_index = 0
    for row in doc.rows:
        tr = TableTreeNode("tr")
        for cell in row.cells:
            tr.children.append(
                TableTreeNode("td", cell.col_span, cell.row_span, cell.content)
            )
        if row.group is None:
            current_group = None
            root.children.append(tr)
            continue
        if current_group is None or current_index != row.group_index:
            current_group = TableTreeNode(row.group)
            current_index = row.group_index
            root.children.append(current_group)
        current_group.children.append(tr)
    return root


def normalize_grouping(tree: TableTreeNode) -> TableTreeNode:
    """
    Wrap runs of bare tr children of the table root into a tbody node.

    Returns a new root; the input is left untouched.
    """
    root = TableTreeNode(tree.tag, tree.colspan, tree.rowspan, tree.content)
    pending: Optional[TableTreeNode] = None
    for child in tree.children:
        if child.tag == "tr":
            if pending is None:
                pending = TableTreeNode("tbody")
                root.children.append(pending)
            pending.children.append(child)
        else:
            pending = None
            root.children.append(child)
    return root
