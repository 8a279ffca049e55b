"""
Label vectors, the theta/psi chip maps and the metallic mean Wang tile sets.

A label is an integer triple ``(v0, v1, v2)``; V_n is the set of labels with
``0 <= v0 <= v1 <= 1`` and ``v1 <= v2 <= n + 1``.  Tiles are quadruples of
labels stored in the fixed order (right, top, left, bottom).
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from script.logger import logger


class LabelError(ValueError):
    """A label or tile is outside the set an operation is defined on."""


class Label(NamedTuple):
    v0: int
    v1: int
    v2: int

    def in_vn(self, n: int) -> bool:
        return 0 <= self.v0 <= self.v1 <= 1 and self.v1 <= self.v2 <= n + 1

    def word(self, n: int) -> str:
        return render_label(self, n)


class WangTile(NamedTuple):
    right: Label
    top: Label
    left: Label
    bottom: Label

    def labels(self) -> Tuple[Label, Label, Label, Label]:
        return (self.right, self.top, self.left, self.bottom)


class Family(str, Enum):
    WHITE = "white"
    BLUE_H = "blueH"
    BLUE_V = "blueV"
    YELLOW_H = "yellowH"
    YELLOW_V = "yellowV"
    GREEN_H = "greenH"
    GREEN_V = "greenV"
    ANTIGREEN_H = "antigreenH"
    ANTIGREEN_V = "antigreenV"
    JUNCTION = "junction"


_MIRROR = {
    Family.BLUE_H: Family.BLUE_V,
    Family.YELLOW_H: Family.YELLOW_V,
    Family.GREEN_H: Family.GREEN_V,
    Family.ANTIGREEN_H: Family.ANTIGREEN_V,
}
_SYMBOLS = {
    Family.WHITE: "w",
    Family.BLUE_H: "b",
    Family.BLUE_V: "b^",
    Family.YELLOW_H: "y",
    Family.YELLOW_V: "y^",
    Family.GREEN_H: "g",
    Family.GREEN_V: "g^",
    Family.ANTIGREEN_H: "a",
    Family.ANTIGREEN_V: "a^",
    Family.JUNCTION: "j",
}


@dataclass(frozen=True, order=True)
class FamilyTag:
    """Family name plus its indices: (i,), (i, j) for white, (k, l, r, s) for junctions."""

    family: Family
    indices: Tuple[int, ...]

    def __str__(self) -> str:
        return f"{_SYMBOLS[self.family]}{{{','.join(map(str, self.indices))}}}"

    def mirrored(self) -> "FamilyTag":
        if self.family is Family.WHITE:
            return FamilyTag(Family.WHITE, (self.indices[1], self.indices[0]))
        if self.family is Family.JUNCTION:
            k, l, r, s = self.indices
            return FamilyTag(Family.JUNCTION, (r, s, k, l))
        for horizontal, vertical in _MIRROR.items():
            if self.family is horizontal:
                return FamilyTag(vertical, self.indices)
            if self.family is vertical:
                return FamilyTag(horizontal, self.indices)
        raise LabelError(f"unknown family {self.family}")


class Corner(str, Enum):
    NE = "NE"
    SW = "SW"
    NW = "NW"
    SE = "SE"


@dataclass(frozen=True)
class TileSet:
    """Canonically ordered, duplicate-free collection of tiles."""

    n: int
    kind: str
    tiles: Tuple[WangTile, ...]
    _positions: Dict[WangTile, int] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if list(self.tiles) != sorted(set(self.tiles)):
            raise LabelError("tile set must be sorted and duplicate free")
        self._positions.update({tile: idx for idx, tile in enumerate(self.tiles)})

    @classmethod
    def from_tiles(cls, n: int, kind: str, tiles) -> "TileSet":
        return cls(n, kind, tuple(sorted(set(tiles))))

    def __len__(self) -> int:
        return len(self.tiles)

    def __iter__(self) -> Iterator[WangTile]:
        return iter(self.tiles)

    def __getitem__(self, idx: int) -> WangTile:
        return self.tiles[idx]

    def __contains__(self, tile) -> bool:
        return tile in self._positions

    def index(self, tile: WangTile) -> int:
        try:
            return self._positions[tile]
        except KeyError:
            raise LabelError(f"{tile} is not in the {self.kind} set for n={self.n}") from None

    def as_set(self) -> frozenset:
        return frozenset(self.tiles)


@dataclass(frozen=True)
class DeterminismReport:
    corner: Corner
    holds: bool
    witness: Optional[Tuple[WangTile, WangTile]] = None


@dataclass(frozen=True)
class Violation:
    """A mismatched edge between the cell at ``position`` and its right or upper neighbour."""

    position: Tuple[int, int]
    direction: str
    expected: Label
    found: Label


def _check_n(n: int) -> None:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")


def _require_vn(n: int, *labels: Sequence[int]) -> None:
    for v in labels:
        if not Label(*v).in_vn(n):
            raise LabelError(f"label {tuple(v)} is not in V_{n}")


@lru_cache(maxsize=None)
def _vn(n: int) -> Tuple[Label, ...]:
    return tuple(
        Label(v0, v1, v2)
        for v0 in (0, 1)
        for v1 in range(v0, 2)
        for v2 in range(v1, n + 2)
    )


def enumerate_vn(n: int) -> List[Label]:
    """All labels of V_n in lexicographic order (3n + 4 of them)."""
    _check_n(n)
    return list(_vn(n))


def theta(n: int, u: Sequence[int], v: Sequence[int]) -> Label:
    """The chip map: right = theta(left, bottom), top = theta(bottom, left).

    The result is not filtered; it may fall outside V_n.
    """
    _require_vn(n, u, v)
    r1 = v[2] - n if u[0] == 0 else 1
    r2 = v[1] + u[0] if v[0] == 0 else u[2] + 1
    return Label(u[0], r1, r2)


def psi(n: int, r: Sequence[int], t: Sequence[int]) -> Label:
    """Recover the left label from (right, top); bottom = psi(top, right)."""
    _require_vn(n, r, t)
    l1 = t[2] - t[0] if r[0] == 0 else 1
    l2 = t[1] + n if t[0] == 0 else r[2] - 1
    return Label(r[0], l1, l2)


def chip_tile(n: int, left: Sequence[int], bottom: Sequence[int]) -> WangTile:
    left, bottom = Label(*left), Label(*bottom)
    return WangTile(theta(n, left, bottom), theta(n, bottom, left), left, bottom)


@lru_cache(maxsize=None)
def chip_tiles(n: int) -> TileSet:
    """Every instance of the theta-chip whose four labels lie in V_n."""
    _check_n(n)
    tiles = []
    for u in _vn(n):
        for v in _vn(n):
            tile = chip_tile(n, u, v)
            if tile.right.in_vn(n) and tile.top.in_vn(n):
                tiles.append(tile)
    logger.debug(f"chip_tiles({n}): {len(tiles)} tiles")
    return TileSet.from_tiles(n, "chip", tiles)


def reflect(tile: WangTile) -> WangTile:
    """Mirror along the diagonal: (a, b, c, d) -> (b, a, d, c)."""
    return WangTile(tile.top, tile.right, tile.bottom, tile.left)


@lru_cache(maxsize=None)
def family_tiles(n: int) -> Dict[FamilyTag, WangTile]:
    """Every template tile of the extended set, keyed by family tag."""
    _check_n(n)
    top = n + 1
    horizontal: Dict[FamilyTag, WangTile] = {}
    for i in range(0, n + 1):
        horizontal[FamilyTag(Family.BLUE_H, (i,))] = WangTile(
            Label(0, 0, i + 1), Label(1, 1, 1), Label(0, 0, i), Label(1, 1, n))
        horizontal[FamilyTag(Family.GREEN_H, (i,))] = WangTile(
            Label(0, 1, i + 1), Label(1, 1, 1), Label(0, 0, i), Label(1, 1, top))
    for i in range(1, n + 1):
        horizontal[FamilyTag(Family.YELLOW_H, (i,))] = WangTile(
            Label(0, 1, i + 1), Label(1, 1, 2), Label(0, 1, i), Label(1, 1, top))
        horizontal[FamilyTag(Family.ANTIGREEN_H, (i,))] = WangTile(
            Label(0, 0, i + 1), Label(1, 1, 2), Label(0, 1, i), Label(1, 1, n))

    tiles: Dict[FamilyTag, WangTile] = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            tiles[FamilyTag(Family.WHITE, (i, j))] = WangTile(
                Label(1, 1, i + 1), Label(1, 1, j + 1), Label(1, 1, i), Label(1, 1, j))
    for tag, tile in horizontal.items():
        tiles[tag] = tile
        tiles[tag.mirrored()] = reflect(tile)
    pairs = ((0, 0), (0, 1), (1, 1))
    for k, l in pairs:
        for r, s in pairs:
            tiles[FamilyTag(Family.JUNCTION, (k, l, r, s))] = WangTile(
                Label(0, k, l), Label(0, r, s), Label(0, s, n + r), Label(0, l, n + k))
    return tiles


def _excluded_tags(n: int) -> List[FamilyTag]:
    tags = [
        FamilyTag(Family.BLUE_H, (n,)),
        FamilyTag(Family.BLUE_V, (n,)),
        FamilyTag(Family.JUNCTION, (0, 0, 1, 1)),
        FamilyTag(Family.JUNCTION, (1, 1, 0, 0)),
    ]
    for i in range(1, n + 1):
        tags.append(FamilyTag(Family.ANTIGREEN_H, (i,)))
        tags.append(FamilyTag(Family.ANTIGREEN_V, (i,)))
    return tags


@lru_cache(maxsize=None)
def extended_tiles(n: int) -> TileSet:
    return TileSet.from_tiles(n, "extended", family_tiles(n).values())


@lru_cache(maxsize=None)
def metallic_tiles(n: int) -> TileSet:
    """The base set T_n of (n + 3)**2 tiles."""
    excluded = set(_excluded_tags(n))
    kept = [tile for tag, tile in family_tiles(n).items() if tag not in excluded]
    return TileSet.from_tiles(n, "base", kept)


def tileset(n: int, kind: str) -> TileSet:
    builders = {"base": metallic_tiles, "extended": extended_tiles, "chip": chip_tiles}
    try:
        return builders[kind](n)
    except KeyError:
        raise LabelError(f"unknown tile set kind {kind!r}") from None


def difference_set(n: int) -> Dict[FamilyTag, WangTile]:
    """Tiles of the extended set that the base set leaves out (2n + 4 of them)."""
    templates = family_tiles(n)
    return {tag: templates[tag] for tag in sorted(_excluded_tags(n))}


@lru_cache(maxsize=None)
def _tags_by_tile(n: int) -> Dict[WangTile, FamilyTag]:
    return {tile: tag for tag, tile in family_tiles(n).items()}


def classify(n: int, tile: WangTile) -> FamilyTag:
    try:
        return _tags_by_tile(n)[tile]
    except KeyError:
        raise LabelError(f"{tile} is not a tile of the extended set for n={n}") from None


def family_counts(n: int) -> Counter:
    return Counter(tag.family for tag in family_tiles(n))


def _corner_key(tile: WangTile, corner: Corner) -> Tuple[Label, Label]:
    if corner is Corner.SW:
        return (tile.bottom, tile.left)
    if corner is Corner.NE:
        return (tile.top, tile.right)
    if corner is Corner.NW:
        return (tile.top, tile.left)
    return (tile.bottom, tile.right)


def check_deterministic(ts: TileSet, corner: Corner) -> DeterminismReport:
    """True iff no two tiles share the ordered pair of colours at ``corner``."""
    corner = Corner(corner)
    seen: Dict[Tuple[Label, Label], WangTile] = {}
    for tile in ts:
        key = _corner_key(tile, corner)
        if key in seen:
            return DeterminismReport(corner, False, (seen[key], tile))
        seen[key] = tile
    return DeterminismReport(corner, True)


def adjacency_violations(rows: Sequence[Sequence[WangTile]],
                         origin: Tuple[int, int] = (0, 0)) -> List[Violation]:
    """Mismatched edges in a grid of tiles stored as ``rows[j][i]`` with row 0 at the bottom."""
    i0, j0 = origin
    violations: List[Violation] = []
    for j, row in enumerate(rows):
        for i, tile in enumerate(row):
            if i + 1 < len(row) and row[i + 1].left != tile.right:
                violations.append(Violation((i0 + i, j0 + j), "horizontal", tile.right, row[i + 1].left))
            if j + 1 < len(rows) and i < len(rows[j + 1]) and rows[j + 1][i].bottom != tile.top:
                violations.append(Violation((i0 + i, j0 + j), "vertical", tile.top, rows[j + 1][i].bottom))
    return violations


def chip_cluster(n: int, left_inputs: Sequence[Sequence[int]],
                 bottom_inputs: Sequence[Sequence[int]]) -> Tuple[Tuple[WangTile, ...], ...]:
    """Fill a rectangle with chips given its left column and bottom row of labels.

    Returns ``rows[j][i]``; raises LabelError when a computed label leaves V_n.
    """
    rows: List[Tuple[WangTile, ...]] = []
    for j, left_label in enumerate(left_inputs):
        row: List[WangTile] = []
        for i, bottom_label in enumerate(bottom_inputs):
            left = row[-1].right if row else Label(*left_label)
            bottom = rows[-1][i].top if rows else Label(*bottom_label)
            tile = chip_tile(n, left, bottom)
            if not (tile.right.in_vn(n) and tile.top.in_vn(n)):
                raise LabelError(f"chip output leaves V_{n} at cell ({i}, {j}): {tile}")
            row.append(tile)
        rows.append(tuple(row))
    return tuple(rows)


def render_label(v: Sequence[int], n: int) -> str:
    if n <= 8:
        return "".join(str(x) for x in v)
    return f"[{','.join(str(x) for x in v)}]"


def parse_label(text: str) -> Label:
    text = text.strip()
    if text.startswith("["):
        parts = text.strip("[]").split(",")
    else:
        parts = list(text)
    if len(parts) != 3:
        raise LabelError(f"cannot parse label {text!r}")
    try:
        return Label(*(int(p) for p in parts))
    except ValueError as e:
        raise LabelError(f"cannot parse label {text!r}") from e
