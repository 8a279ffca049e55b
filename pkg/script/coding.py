"""
Coding of the torus by floors of linear forms.

``lambda_floor`` maps a point of [0,1)^2 to a label of V_n, ``tile_at`` turns a
point into a Wang tile and ``window`` samples the configuration
``(i, j) -> tile_at(x + i/beta, y + j/beta)`` on a rectangle.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Optional, Tuple, Union

from script.logger import logger
from script.quadfield import FieldSpec, QuadNum, field, frac
from script.tiles import (
    Family,
    FamilyTag,
    Label,
    TileSet,
    Violation,
    WangTile,
    adjacency_violations,
    metallic_tiles,
    reflect,
    theta,
)
from script.workers import map_chunked

Number = Union[QuadNum, int, Fraction]


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class TorusPoint(NamedTuple):
    x: QuadNum
    y: QuadNum

    @classmethod
    def of(cls, n: int, x: Number, y: Number) -> "TorusPoint":
        spec = field(n)
        return cls(frac(spec.coerce(x)), frac(spec.coerce(y)))

    def shifted(self, i: int, j: int) -> "TorusPoint":
        alpha = self.x.spec.beta_inv
        return TorusPoint(frac(self.x + i * alpha), frac(self.y + j * alpha))


@dataclass(frozen=True)
class Window:
    """Cells ``cells[j][i]`` hold indices into ``tileset`` for configuration
    positions ``(origin[0] + i, origin[1] + j)``; row 0 is the bottom row."""

    n: int
    origin: Tuple[int, int]
    cells: Tuple[Tuple[int, ...], ...]
    tileset: TileSet

    def __post_init__(self) -> None:
        if not self.cells or not self.cells[0]:
            raise DomainError("a window needs at least one cell")
        width = len(self.cells[0])
        for row in self.cells:
            if len(row) != width:
                raise DomainError("window rows must all have the same width")
            for idx in row:
                if not 0 <= idx < len(self.tileset):
                    raise DomainError(f"tile index {idx} out of range for {len(self.tileset)} tiles")

    @property
    def width(self) -> int:
        return len(self.cells[0])

    @property
    def height(self) -> int:
        return len(self.cells)

    def cell(self, i: int, j: int) -> int:
        """Index at offset (i, j) from the origin."""
        return self.cells[j][i]

    def tile(self, i: int, j: int) -> WangTile:
        return self.tileset[self.cells[j][i]]

    def tile_rows(self) -> Tuple[Tuple[WangTile, ...], ...]:
        return tuple(tuple(self.tileset[idx] for idx in row) for row in self.cells)

    def replace(self, i: int, j: int, idx: int) -> "Window":
        rows = [list(row) for row in self.cells]
        rows[j][i] = idx
        return Window(self.n, self.origin, tuple(tuple(r) for r in rows), self.tileset)


def _point(spec: FieldSpec, value: Number) -> QuadNum:
    return spec.coerce(value)


def _check_unit(value: QuadNum, name: str) -> None:
    if value.sign() < 0 or (value - 1).sign() >= 0:
        raise DomainError(f"{name} = {value} is outside [0, 1)")


def lambda_floor(n: int, x: Number, y: Number) -> Label:
    """(floor(y + c), floor(x/beta + y + c), floor(beta*x + y + c)) with c = n - beta + 1."""
    spec = field(n)
    x, y = _point(spec, x), _point(spec, y)
    _check_unit(x, "x")
    _check_unit(y, "y")
    c = spec.beta_star + 1
    shifted = y + c
    return Label(shifted.floor(), (spec.beta_inv * x + shifted).floor(), (spec.beta * x + shifted).floor())


def lambda_floor_alt(n: int, x: Number, y: Number) -> Label:
    """The same coding written with 1 - 1/beta as the constant."""
    spec = field(n)
    x, y = _point(spec, x), _point(spec, y)
    _check_unit(x, "x")
    _check_unit(y, "y")
    alpha = spec.beta.inverse()
    c = 1 - alpha
    return Label((y + c).floor(), (alpha * x + y + c).floor(), (spec.beta * x + y + c).floor())


def factorization_holds(n: int, x: Number, y: Number) -> bool:
    """Lambda(x, y) == theta(Lambda({x + beta*}, y), Lambda({y + beta*}, x)) for x, y in [0, 1)."""
    spec = field(n)
    x, y = _point(spec, x), _point(spec, y)
    left = lambda_floor(n, frac(x + spec.beta_star), y)
    bottom = lambda_floor(n, frac(y + spec.beta_star), x)
    return lambda_floor(n, x, y) == theta(n, left, bottom)


def tile_at(n: int, x: Number, y: Number) -> WangTile:
    spec = field(n)
    x, y = _point(spec, x), _point(spec, y)
    alpha = spec.beta_inv
    fx, fy = frac(x), frac(y)
    return WangTile(
        right=lambda_floor(n, fx, fy),
        top=lambda_floor(n, fy, fx),
        left=lambda_floor(n, frac(x - alpha), fy),
        bottom=lambda_floor(n, frac(y - alpha), fx),
    )


def _row_indices(task) -> List[Tuple[int, ...]]:
    n, x, y, i_values, j_values = task
    ts = metallic_tiles(n)
    alpha = field(n).beta_inv
    rows = []
    for j in j_values:
        yj = y + j * alpha
        rows.append(tuple(ts.index(tile_at(n, x + i * alpha, yj)) for i in i_values))
    return rows


def window(n: int, p: Union[TorusPoint, Tuple[Number, Number]], i_range: range, j_range: range,
           max_workers: Optional[int] = 1) -> Window:
    """The configuration c_p restricted to ``i_range x j_range``."""
    if len(i_range) == 0 or len(j_range) == 0:
        raise DomainError("window ranges must be nonempty")
    if i_range.step != 1 or j_range.step != 1:
        raise DomainError("window ranges must have step 1")
    point = p if isinstance(p, TorusPoint) else TorusPoint.of(n, *p)
    i_values = tuple(i_range)

    def run(j_chunk):
        return _row_indices((n, point.x, point.y, i_values, tuple(j_chunk)))

    chunks = map_chunked(run, list(j_range), chunk_size=max(1, len(j_range) // 4 or 1),
                         max_workers=max_workers)
    cells = tuple(row for chunk in chunks for row in chunk)
    return Window(n, (i_range.start, j_range.start), cells, metallic_tiles(n))


def check_valid(w: Window) -> List[Violation]:
    """Adjacency violations with absolute configuration coordinates; empty when valid."""
    return adjacency_violations(w.tile_rows(), w.origin)


def is_symmetric(w: Window) -> bool:
    """c(i, j) == reflect(c(j, i)) on a square window centred at the origin."""
    if w.width != w.height or w.origin != (-(w.width // 2), -(w.height // 2)):
        raise DomainError("symmetry check needs a square window centred at the origin")
    size = w.width
    return all(w.tile(i, j) == reflect(w.tile(j, i)) for i in range(size) for j in range(size))


def witness_points(n: int) -> List[Tuple[FamilyTag, Tuple[QuadNum, QuadNum]]]:
    """One explicit point per tile of the base set, paired with the family tag of its tile.

    Vertical tiles are obtained from horizontal ones by swapping coordinates.
    """
    spec = field(n)
    one = spec.one
    alpha = spec.beta_inv
    alpha2 = alpha * alpha
    u = (spec.beta + 1).inverse()
    zero = spec.zero

    horizontal: List[Tuple[FamilyTag, Tuple[QuadNum, QuadNum]]] = []
    junctions = [
        ((0, 0, 0, 0), (zero, zero)),
        ((0, 1, 0, 0), (alpha2, zero)),
        ((0, 0, 0, 1), (zero, alpha2)),
        ((0, 1, 0, 1), (alpha * u, alpha * u)),
        ((1, 1, 0, 1), (u / 2, (alpha + u) / 2)),
        ((0, 1, 1, 1), ((alpha + u) / 2, u / 2)),
        ((1, 1, 1, 1), (u, u)),
    ]
    points = [(FamilyTag(Family.JUNCTION, code), xy) for code, xy in junctions]

    horizontal.append((FamilyTag(Family.BLUE_H, (0,)), (alpha, zero)))
    for i in range(1, n):
        horizontal.append((FamilyTag(Family.BLUE_H, (i,)), (alpha2 + i * alpha, zero)))

    horizontal.append((FamilyTag(Family.GREEN_H, (0,)), (alpha, alpha - alpha2)))
    for i in range(1, n):
        horizontal.append((FamilyTag(Family.GREEN_H, (i,)), (one * Fraction(i, n), alpha * (1 - Fraction(i, n)))))
    eps = Fraction(1, 10 * (n + 1) ** 3)
    horizontal.append((FamilyTag(Family.GREEN_H, (n,)), (one - eps, spec.beta * eps)))

    eps = Fraction(1, 2 * (n + 1))
    horizontal.append((FamilyTag(Family.YELLOW_H, (1,)), (alpha + eps, alpha - alpha * eps)))
    for i in range(2, n + 1):
        horizontal.append((FamilyTag(Family.YELLOW_H, (i,)), ((i - alpha2) / n, alpha * Fraction(n + 1 - i, n))))

    for tag, (x, y) in horizontal:
        points.append((tag, (x, y)))
        points.append((tag.mirrored(), (y, x)))

    for j in range(1, n + 1):
        points.append((FamilyTag(Family.WHITE, (1, j)), (alpha, j * alpha)))
    for i in range(2, n + 1):
        points.append((FamilyTag(Family.WHITE, (i, 1)), (i * alpha, alpha)))
    for i in range(2, n + 1):
        for j in range(2, n + 1):
            x = alpha + ((i - 1) - (j - 1) * alpha) / n
            y = alpha + ((j - 1) - (i - 1) * alpha) / n
            points.append((FamilyTag(Family.WHITE, (i, j)), (x, y)))
    return points


def witness_failures(n: int) -> List[Tuple[FamilyTag, WangTile]]:
    """Witness points whose tile differs from the template of their family tag."""
    from script.tiles import family_tiles

    templates = family_tiles(n)
    failures = []
    for tag, (x, y) in witness_points(n):
        found = tile_at(n, x, y)
        if templates[tag] != found:
            failures.append((tag, found))
    return failures


def range_check(n: int) -> bool:
    """The tiles with positive-area atoms are exactly the base set, and every
    witness point lands on its tile."""
    try:
        from script.geometry import tiles_of_partition
    except ImportError as e:
        raise DomainError(f"geometry module unavailable: {e}") from e

    realized = tiles_of_partition(n)
    base = metallic_tiles(n)
    same = realized.as_set() == base.as_set()
    failures = witness_failures(n)
    for tag, found in failures:
        logger.error(f"witness for {tag} produced {found}")
    if not same:
        logger.error(f"realized tiles differ from base set: {len(realized)} vs {len(base)}")
    return same and not failures
