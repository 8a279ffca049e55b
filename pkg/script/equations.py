"""
Additive label equations satisfied by the chip tiles, and their consequences
for rectangles and horizontal cylinders.

With d = (0, -1, 1) and e = (1, 0, 0) every chip tile (r, t, l, b) satisfies

    <d, t + l> / n - <e, l>  ==  <d, b + r> / n - <e, b>,   l0 == r0,   b0 == t0.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from script.logger import logger
from script.tiles import Label, TileSet, WangTile, adjacency_violations, chip_tiles, theta

Grid = Sequence[Sequence[WangTile]]


class InvalidPatternError(ValueError):
    """The pattern has an adjacency mismatch."""


class NotCylindricalError(ValueError):
    """Left boundary column differs from right boundary column."""


def inner_d(v: Sequence[int]) -> int:
    """<d, v> with d = (0, -1, 1)."""
    return v[2] - v[1]


def inner_e(v: Sequence[int]) -> int:
    """<e, v> with e = (1, 0, 0)."""
    return v[0]


@dataclass(frozen=True)
class EquationResidual:
    main: Fraction
    leftright: int
    bottomtop: int

    @property
    def is_zero(self) -> bool:
        return self.main == 0 and self.leftright == 0 and self.bottomtop == 0


@dataclass(frozen=True)
class CylinderStep:
    holds: bool
    shift: Fraction
    width: int
    height: int


@dataclass(frozen=True)
class Counterexample:
    n: int
    tile: WangTile
    residual: EquationResidual
    in_chip_set: bool
    theta_of_left_bottom: Label


def tile_residual(n: int, t: WangTile) -> EquationResidual:
    """Residuals of the tile equations; labels need not lie in V_n."""
    lhs = Fraction(inner_d(t.top) + inner_d(t.left), n) - inner_e(t.left)
    rhs = Fraction(inner_d(t.bottom) + inner_d(t.right), n) - inner_e(t.bottom)
    return EquationResidual(lhs - rhs, t.left[0] - t.right[0], t.bottom[0] - t.top[0])


def _as_grid(pattern) -> Grid:
    if hasattr(pattern, "tile_rows"):
        return pattern.tile_rows()
    return pattern


def _require_valid(grid: Grid) -> None:
    if not grid or not grid[0]:
        raise InvalidPatternError("empty pattern")
    width = len(grid[0])
    if any(len(row) != width for row in grid):
        raise InvalidPatternError("pattern is not rectangular")
    violations = adjacency_violations(grid)
    if violations:
        first = violations[0]
        raise InvalidPatternError(
            f"{len(violations)} mismatched edges, first at {first.position} ({first.direction})")


def _boundary_averages(grid: Grid):
    """Average <d, .> and <e, .> of the right/left columns and top/bottom rows."""
    height, width = len(grid), len(grid[0])
    right = [row[-1].right for row in grid]
    left = [row[0].left for row in grid]
    top = [tile.top for tile in grid[-1]]
    bottom = [tile.bottom for tile in grid[0]]

    def avg_d(labels):
        return Fraction(sum(inner_d(v) for v in labels), len(labels))

    def avg_e(labels):
        return Fraction(sum(inner_e(v) for v in labels), len(labels))

    return width, height, right, left, top, bottom, avg_d, avg_e


def rectangle_residual(n: int, pattern) -> Fraction:
    """LHS - RHS of the rectangle identity for a valid W x H pattern.

    (1/H) <d/n, T - B> - <e, L>  ==  (1/W) <d/n, R - L> - <e, B>

    where R, L average the right/left boundary columns and T, B the top/bottom
    boundary rows.
    """
    grid = _as_grid(pattern)
    _require_valid(grid)
    width, height, right, left, top, bottom, avg_d, avg_e = _boundary_averages(grid)
    lhs = (avg_d(top) - avg_d(bottom)) / (n * height) - avg_e(left)
    rhs = (avg_d(right) - avg_d(left)) / (n * width) - avg_e(bottom)
    return lhs - rhs


def tile_residual_average(n: int, pattern) -> Fraction:
    """Average main residual of the tiles of a pattern."""
    grid = _as_grid(pattern)
    cells = [tile for row in grid for tile in row]
    return sum((tile_residual(n, t).main for t in cells), Fraction(0)) / len(cells)


def _is_cylindrical(grid: Grid) -> bool:
    return all(row[0].left == row[-1].right for row in grid)


def cylinder_step(n: int, pattern) -> CylinderStep:
    """Check <d/n, T> == <d/n, B> - H <e, B> (mod 1) on a horizontal cylinder.

    ``shift`` is the per-row rotation -<e, B> mod 1.
    """
    grid = _as_grid(pattern)
    _require_valid(grid)
    if not _is_cylindrical(grid):
        raise NotCylindricalError("left boundary labels differ from right boundary labels")
    width, height, _, _, top, bottom, avg_d, avg_e = _boundary_averages(grid)
    difference = avg_d(top) / n - (avg_d(bottom) / n - height * avg_e(bottom))
    shift = (-avg_e(bottom)) % 1
    return CylinderStep(difference.denominator == 1, shift, width, height)


def cylindrical_rows(ts: TileSet, width: int, limit: Optional[int] = None) -> Iterator[Tuple[WangTile, ...]]:
    """Rows of ``width`` tiles whose last right label equals the first left label."""
    if width < 1:
        raise ValueError("width must be positive")
    by_left = {}
    for tile in ts:
        by_left.setdefault(tile.left, []).append(tile)
    found = 0
    for first in ts:
        stack: List[Tuple[WangTile, ...]] = [(first,)]
        while stack:
            row = stack.pop()
            if len(row) == width:
                if row[-1].right == first.left:
                    yield row
                    found += 1
                    if limit is not None and found >= limit:
                        return
                continue
            for tile in reversed(by_left.get(row[-1].right, [])):
                stack.append(row + (tile,))


def cylinders(ts: TileSet, width: int, height: int,
              limit: Optional[int] = None, row_limit: Optional[int] = None) -> Iterator[Tuple[Tuple[WangTile, ...], ...]]:
    """Stack cylindrical rows so that each row's bottoms match the tops below."""
    rows = list(cylindrical_rows(ts, width, row_limit))
    by_bottom = {}
    for row in rows:
        by_bottom.setdefault(tuple(t.bottom for t in row), []).append(row)
    found = 0
    for first in rows:
        stack = [(first,)]
        while stack:
            stacked = stack.pop()
            if len(stacked) == height:
                yield stacked
                found += 1
                if limit is not None and found >= limit:
                    return
                continue
            tops = tuple(t.top for t in stacked[-1])
            for row in reversed(by_bottom.get(tops, [])):
                stack.append(stacked + (row,))


def non_chip_counterexample() -> Counterexample:
    """A V_4 quadruple with zero residuals that is not a chip tile."""
    n = 4
    tile = WangTile(right=Label(1, 1, 3), top=Label(0, 0, 3), left=Label(1, 1, 5), bottom=Label(0, 0, 1))
    residual = tile_residual(n, tile)
    chip_right = theta(n, tile.left, tile.bottom)
    result = Counterexample(n, tile, residual, tile in chip_tiles(n), chip_right)
    logger.debug(f"counterexample residual={residual}, theta(l,b)={chip_right}")
    return result
