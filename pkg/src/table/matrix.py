#!/usr/bin/env python3
"""
Atomic cell matrix: a grid of C/L/U/X tokens describing table topology.

C starts a new cell, L continues the cell to the left, U continues the cell
above and X continues both. Well-formedness is checked by validate_matrix,
never by construction, so malformed grids can be loaded and reported on.
"""

import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, List, Sequence, Tuple

from src.core.errors import InvalidMatrix, OutOfBounds

logger = logging.getLogger("table-matrix")


class Token(str, Enum):
    """One position of an atomic cell matrix."""

    C = "C"  # independent cell / anchor
    L = "L"  # merged with the left neighbour
    U = "U"  # merged with the upper neighbour
    X = "X"  # merged left and up

    def __str__(self) -> str:
        return self.value


# Rule identifiers reported by validate_matrix
RULE_ORIGIN = "origin_not_c"
RULE_L_COL0 = "L in column 0"
RULE_X_COL0 = "X in column 0"
RULE_U_ROW0 = "U in row 0"
RULE_X_ROW0 = "X in row 0"
RULE_L_LEFT = "L without C/L on the left"
RULE_U_UP = "U without C/U above"
RULE_X_LEFT = "X without U/X on the left"
RULE_X_UP = "X without L/X above"
RULE_C_INSIDE = "C inside a merged region"


@dataclass(frozen=True)
class CellMatrix:
    """Row-major grid of tokens."""

    n_rows: int
    n_cols: int
    grid: Tuple[Token, ...]

    def __post_init__(self):
        if self.n_rows < 1 or self.n_cols < 1:
            raise OutOfBounds(f"matrix dims must be positive, got {self.n_rows}x{self.n_cols}")
        if len(self.grid) != self.n_rows * self.n_cols:
            raise InvalidMatrix(
                f"grid holds {len(self.grid)} tokens, expected {self.n_rows}x{self.n_cols}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "CellMatrix":
        """Build a matrix from nested rows of tokens or token letters."""
        if not rows or not rows[0]:
            raise OutOfBounds("matrix needs at least one row and one column")
        width = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != width:
                raise InvalidMatrix(f"row {i} has {len(row)} tokens, expected {width}")
        grid = tuple(Token(str(t)) for row in rows for t in row)
        return cls(len(rows), width, grid)

    @classmethod
    def from_text(cls, text: str) -> "CellMatrix":
        """
        Parse the text serialization: one row per line, one letter per token.

        Spaces inside a row and blank lines are ignored.

        Args:
            text: Serialized matrix such as "CL\\nUX"

        Returns:
            Parsed matrix
        """
        rows = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            letters = "".join(line.split())
            if not letters:
                continue
            try:
                rows.append([Token(ch) for ch in letters.upper()])
            except ValueError:
                raise InvalidMatrix(f"line {lineno}: unknown token in {line!r}")
        return cls.from_rows(rows)

    @classmethod
    def filled(cls, n_rows: int, n_cols: int, token: Token = Token.C) -> "CellMatrix":
        return cls(n_rows, n_cols, (token,) * (n_rows * n_cols))

    def at(self, row: int, col: int) -> Token:
        return self.grid[row * self.n_cols + col]

    def rows(self) -> List[Tuple[Token, ...]]:
        return [self.grid[r * self.n_cols:(r + 1) * self.n_cols] for r in range(self.n_rows)]

    def to_text(self) -> str:
        return "\n".join("".join(t.value for t in row) for row in self.rows())

    def transpose(self) -> "CellMatrix":
        """Swap rows and columns; L and U exchange roles."""
        swap = {Token.C: Token.C, Token.L: Token.U, Token.U: Token.L, Token.X: Token.X}
        grid = tuple(
            swap[self.at(r, c)] for c in range(self.n_cols) for r in range(self.n_rows)
        )
        return CellMatrix(self.n_cols, self.n_rows, grid)

    def with_token(self, row: int, col: int, token: Token) -> "CellMatrix":
        idx = row * self.n_cols + col
        grid = self.grid[:idx] + (token,) + self.grid[idx + 1:]
        return CellMatrix(self.n_rows, self.n_cols, grid)

    def __str__(self) -> str:
        return self.to_text()


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validate_matrix; one entry per violated rule and position."""

    violations: Tuple[Tuple[int, int, str, str], ...] = field(default_factory=tuple)

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def rule_ids(self) -> List[str]:
        return [v[2] for v in self.violations]

    def as_dict(self) -> dict:
        return {
            "is_valid": self.is_valid,
            "violations": [
                {"row": r, "col": c, "rule": rule, "message": msg}
                for r, c, rule, msg in self.violations
            ],
        }


def _iter_violations(m: CellMatrix) -> Iterator[Tuple[int, int, str, str]]:
    for r in range(m.n_rows):
        for c in range(m.n_cols):
            tok = m.at(r, c)
            if r == 0 and c == 0 and tok is not Token.C:
                yield (0, 0, RULE_ORIGIN, f"top-left token must be C, found {tok.value}")
            if c == 0 and tok is Token.L:
                yield (r, c, RULE_L_COL0, "L cannot merge left from the first column")
            if c == 0 and tok is Token.X:
                yield (r, c, RULE_X_COL0, "X cannot merge left from the first column")
            if r == 0 and tok is Token.U:
                yield (r, c, RULE_U_ROW0, "U cannot merge up from the first row")
            if r == 0 and tok is Token.X:
                yield (r, c, RULE_X_ROW0, "X cannot merge up from the first row")

            if tok is Token.L and c > 0 and m.at(r, c - 1) not in (Token.C, Token.L):
                yield (r, c, RULE_L_LEFT, f"left neighbour is {m.at(r, c - 1).value}")
            if tok is Token.U and r > 0 and m.at(r - 1, c) not in (Token.C, Token.U):
                yield (r, c, RULE_U_UP, f"upper neighbour is {m.at(r - 1, c).value}")
            if tok is Token.X:
                if c > 0 and m.at(r, c - 1) not in (Token.U, Token.X):
                    yield (r, c, RULE_X_LEFT, f"left neighbour is {m.at(r, c - 1).value}")
                if r > 0 and m.at(r - 1, c) not in (Token.L, Token.X):
                    yield (r, c, RULE_X_UP, f"upper neighbour is {m.at(r - 1, c).value}")
            # A region continuing both left and above must close its corner
            if (
                tok is Token.C
                and r > 0
                and c > 0
                and m.at(r, c - 1) in (Token.U, Token.X)
                and m.at(r - 1, c) in (Token.L, Token.X)
            ):
                yield (r, c, RULE_C_INSIDE, "left and upper neighbours require X here")


def validate_matrix(m: CellMatrix) -> ValidationReport:
    """
    Check every well-formedness rule and report all violations.

    Malformed input is reported, never raised.

    Args:
        m: Matrix to check

    Returns:
        Report whose is_valid flag is True only when no rule is violated
    """
    return ValidationReport(tuple(_iter_violations(m)))


def require_valid(m: CellMatrix, context: str = "matrix") -> None:
    """Raise InvalidMatrix when m is not well-formed."""
    report = validate_matrix(m)
    if not report.is_valid:
        first = report.violations[0]
        raise InvalidMatrix(
            f"{context} is not well-formed: {first[2]} at ({first[0]}, {first[1]})",
            report.violations,
        )


def crop_top_left(m: CellMatrix, r: int, c: int) -> CellMatrix:
    """
    Keep rows [0, r) and columns [0, c).

    Any top-left window of a valid matrix is valid, because every rule only
    looks up and to the left.

    Args:
        m: Source matrix
        r: Number of rows to keep
        c: Number of columns to keep

    Returns:
        The cropped matrix
    """
    if not (1 <= r <= m.n_rows and 1 <= c <= m.n_cols):
        raise OutOfBounds(f"crop {r}x{c} outside {m.n_rows}x{m.n_cols} matrix")
    grid = tuple(t for row in m.rows()[:r] for t in row[:c])
    return CellMatrix(r, c, grid)


def _single_cells(m: CellMatrix) -> List[Tuple[int, int]]:
    """Anchors of 1x1 cells: C with no L to the right and no U below."""
    singles = []
    for r in range(m.n_rows):
        for c in range(m.n_cols):
            if m.at(r, c) is not Token.C:
                continue
            if c + 1 < m.n_cols and m.at(r, c + 1) is Token.L:
                continue
            if r + 1 < m.n_rows and m.at(r + 1, c) is Token.U:
                continue
            singles.append((r, c))
    return singles


def legal_merge_moves(m: CellMatrix) -> List[Tuple[int, int, str]]:
    """
    List every (row, col, direction) pair merge available in m.

    direction is "right" or "down"; both cells involved must be 1x1.
    """
    singles = set(_single_cells(m))
    moves = []
    for r, c in sorted(singles):
        if (r, c + 1) in singles:
            moves.append((r, c, "right"))
        if (r + 1, c) in singles:
            moves.append((r, c, "down"))
    return moves


def _keeps_lines_explicit(m: CellMatrix, move: Tuple[int, int, str]) -> bool:
    """Whether a merge leaves every row with a C/L and every column with a C/U."""
    r, c, direction = move
    if direction == "right":
        col = c + 1
        return any(m.at(i, col) in (Token.C, Token.U) for i in range(m.n_rows) if i != r)
    row = r + 1
    return any(m.at(row, j) in (Token.C, Token.L) for j in range(m.n_cols) if j != c)


def inject_merges(m: CellMatrix, k: int, rng: random.Random, keep_explicit: bool = False) -> CellMatrix:
    """
    Fuse up to k pairs of adjacent 1x1 cells.

    Each move picks a random legal pair and rewrites the right neighbour to L or
    the lower neighbour to U. Only 1x1 pairs are fused, so every merged region
    stays a rectangle. Stops early when no legal move remains.

    Args:
        m: Valid matrix
        k: Maximum number of merge moves
        rng: Seeded random source
        keep_explicit: Skip moves that would leave a row without any C/L or a
            column without any C/U

    Returns:
        Matrix of the same dimensions with the merges applied
    """
    require_valid(m)
    out = m
    for done in range(k):
        moves = legal_merge_moves(out)
        if keep_explicit:
            moves = [move for move in moves if _keeps_lines_explicit(out, move)]
        if not moves:
            logger.debug(f"inject_merges stopped after {done} of {k} moves")
            break
        r, c, direction = rng.choice(moves)
        if direction == "right":
            out = out.with_token(r, c + 1, Token.L)
        else:
            out = out.with_token(r + 1, c, Token.U)
    return out
