"""
Exact convex polygons over Q(beta) and the polygonal partitions of the torus
that code the metallic mean tilings.

Polygons are closed, counterclockwise, and kept in a canonical vertex order so
that equality is plain tuple equality.  Anything of zero area is the empty
polygon.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import (Any, Dict, Hashable, Iterable, Iterator, List, NamedTuple, Optional, Sequence,
                    Tuple)

from script.logger import logger
from script.quadfield import FieldSpec, QuadNum, field, frac
from script.tiles import Label, TileSet, WangTile, enumerate_vn, metallic_tiles

Point = Tuple[QuadNum, QuadNum]


class PartitionError(ValueError):
    """Partitions live on different domains or do not cover their domain."""


class HalfPlane(NamedTuple):
    """The closed half-plane ``c0 + cx*x + cy*y >= 0``."""

    c0: QuadNum
    cx: QuadNum
    cy: QuadNum

    def value(self, point: Point) -> QuadNum:
        return self.c0 + self.cx * point[0] + self.cy * point[1]

    def negated(self) -> "HalfPlane":
        return HalfPlane(-self.c0, -self.cx, -self.cy)

    @classmethod
    def of(cls, spec: FieldSpec, c0, cx, cy) -> "HalfPlane":
        return cls(spec.coerce(c0), spec.coerce(cx), spec.coerce(cy))


def _cross(o: Point, a: Point, b: Point) -> QuadNum:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _twice_signed_area(vertices: Sequence[Point]) -> QuadNum:
    total = vertices[0][0] * 0
    for idx, (x0, y0) in enumerate(vertices):
        x1, y1 = vertices[(idx + 1) % len(vertices)]
        total = total + x0 * y1 - x1 * y0
    return total


@dataclass(frozen=True)
class ConvexPolygon:
    """Closed convex polygon with counterclockwise vertices, smallest vertex first."""

    vertices: Tuple[Point, ...]
    spec: FieldSpec

    @classmethod
    def empty(cls, spec: FieldSpec) -> "ConvexPolygon":
        return cls((), spec)

    @classmethod
    def from_vertices(cls, spec: FieldSpec, points: Iterable[Sequence[Any]]) -> "ConvexPolygon":
        pts: List[Point] = []
        for x, y in points:
            p = (spec.coerce(x), spec.coerce(y))
            if not pts or pts[-1] != p:
                pts.append(p)
        while len(pts) > 1 and pts[0] == pts[-1]:
            pts.pop()
        changed = True
        while changed and len(pts) >= 3:
            changed = False
            for idx in range(len(pts)):
                if _cross(pts[idx - 1], pts[idx], pts[(idx + 1) % len(pts)]).is_zero():
                    del pts[idx]
                    changed = True
                    break
        if len(pts) < 3:
            return cls.empty(spec)
        area2 = _twice_signed_area(pts)
        if area2.is_zero():
            return cls.empty(spec)
        if area2.sign() < 0:
            pts.reverse()
        start = min(range(len(pts)), key=lambda i: pts[i])
        return cls(tuple(pts[start:] + pts[:start]), spec)

    @classmethod
    def rectangle(cls, spec: FieldSpec, x0, y0, x1, y1) -> "ConvexPolygon":
        return cls.from_vertices(spec, [(x0, y0), (x1, y0), (x1, y1), (x0, y1)])

    @classmethod
    def unit_square(cls, spec: FieldSpec) -> "ConvexPolygon":
        return cls.rectangle(spec, 0, 0, 1, 1)

    def __bool__(self) -> bool:
        return bool(self.vertices)

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def area(self) -> QuadNum:
        if self.is_empty:
            return self.spec.zero
        return _twice_signed_area(self.vertices) / 2

    @cached_property
    def bbox(self) -> Optional[Tuple[QuadNum, QuadNum, QuadNum, QuadNum]]:
        if self.is_empty:
            return None
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return (min(xs), min(ys), max(xs), max(ys))

    def may_overlap(self, other: "ConvexPolygon") -> bool:
        """False when the bounding boxes share no interior."""
        if self.is_empty or other.is_empty:
            return False
        ax0, ay0, ax1, ay1 = self.bbox
        bx0, by0, bx1, by1 = other.bbox
        return ax0 < bx1 and bx0 < ax1 and ay0 < by1 and by0 < ay1

    def edges(self) -> Iterator[Tuple[Point, Point]]:
        count = len(self.vertices)
        for idx in range(count):
            yield self.vertices[idx], self.vertices[(idx + 1) % count]

    def halfplanes(self) -> List[HalfPlane]:
        planes = []
        for (ax, ay), (bx, by) in self.edges():
            dx, dy = bx - ax, by - ay
            planes.append(HalfPlane(dy * ax - dx * ay, -dy, dx))
        return planes

    def clip(self, plane: HalfPlane) -> "ConvexPolygon":
        """Sutherland-Hodgman step against one closed half-plane."""
        if self.is_empty:
            return self
        values = [plane.value(v) for v in self.vertices]
        signs = [v.sign() for v in values]
        if all(s >= 0 for s in signs):
            return self
        if all(s <= 0 for s in signs):
            return ConvexPolygon.empty(self.spec)
        output: List[Point] = []
        count = len(self.vertices)
        for idx in range(count):
            s_idx = idx - 1
            start, end = self.vertices[s_idx], self.vertices[idx]
            f_start, f_end = values[s_idx], values[idx]
            inside_start, inside_end = signs[s_idx] >= 0, signs[idx] >= 0
            if inside_end:
                if not inside_start:
                    output.append(_intersection(start, end, f_start, f_end))
                output.append(end)
            elif inside_start:
                output.append(_intersection(start, end, f_start, f_end))
        return ConvexPolygon.from_vertices(self.spec, output)

    def intersect(self, other: "ConvexPolygon") -> "ConvexPolygon":
        if not self.may_overlap(other):
            return ConvexPolygon.empty(self.spec)
        result = self
        for plane in other.halfplanes():
            result = result.clip(plane)
            if result.is_empty:
                break
        return result

    def translate(self, dx, dy) -> "ConvexPolygon":
        if self.is_empty:
            return self
        return ConvexPolygon(tuple((x + dx, y + dy) for x, y in self.vertices), self.spec)

    def affine(self, factor, offset: Sequence[Any]) -> "ConvexPolygon":
        """Image under ``p -> factor*p + offset``; a negative factor is re-canonicalised."""
        if self.is_empty:
            return self
        ox, oy = offset
        return ConvexPolygon.from_vertices(
            self.spec, [(factor * x + ox, factor * y + oy) for x, y in self.vertices])

    def swap_axes(self) -> "ConvexPolygon":
        return ConvexPolygon.from_vertices(self.spec, [(y, x) for x, y in self.vertices])

    def contains(self, point: Sequence[Any]) -> bool:
        if self.is_empty:
            return False
        p = (self.spec.coerce(point[0]), self.spec.coerce(point[1]))
        return all(_cross(a, b, p).sign() >= 0 for a, b in self.edges())

    def within(self, other: "ConvexPolygon") -> bool:
        return all(other.contains(v) for v in self.vertices)

    def float_vertices(self) -> List[Tuple[float, float]]:
        return [(float(x), float(y)) for x, y in self.vertices]


def _intersection(start: Point, end: Point, f_start: QuadNum, f_end: QuadNum) -> Point:
    t = f_start / (f_start - f_end)
    return (start[0] + t * (end[0] - start[0]), start[1] + t * (end[1] - start[1]))


def clip(poly: ConvexPolygon, halfplane: Sequence[Any]) -> ConvexPolygon:
    """Intersection of ``poly`` with ``c0 + cx*x + cy*y >= 0``."""
    return poly.clip(HalfPlane.of(poly.spec, *halfplane))


def pieces_area(pieces: Iterable[ConvexPolygon], spec: FieldSpec) -> QuadNum:
    total = spec.zero
    for piece in pieces:
        total = total + piece.area()
    return total


def overlap_area(first: Sequence[ConvexPolygon], second: Sequence[ConvexPolygon],
                 spec: FieldSpec) -> QuadNum:
    """Area of the intersection of two unions of interior-disjoint pieces."""
    total = spec.zero
    for a in first:
        for b in second:
            if a.may_overlap(b):
                total = total + a.intersect(b).area()
    return total


def region_equal(first: Sequence[ConvexPolygon], second: Sequence[ConvexPolygon],
                 spec: FieldSpec) -> bool:
    """Exact equality of two regions up to a null set, whatever their piece splitting."""
    area_first = pieces_area(first, spec)
    if area_first != pieces_area(second, spec):
        return False
    return overlap_area(first, second, spec) == area_first


@dataclass
class LabeledPartition:
    """Labelled family of convex pieces covering ``domain``.

    An atom may consist of several pieces when a torus wrap cuts it.
    """

    atoms: Dict[Hashable, Tuple[ConvexPolygon, ...]]
    domain: ConvexPolygon
    name: str = ""

    def __post_init__(self) -> None:
        cleaned = {}
        for label in sorted(self.atoms):
            pieces = tuple(sorted((p for p in self.atoms[label] if not p.is_empty), key=lambda p: p.vertices))
            if pieces:
                cleaned[label] = pieces
        self.atoms = cleaned

    @property
    def spec(self) -> FieldSpec:
        return self.domain.spec

    def __len__(self) -> int:
        return len(self.atoms)

    def labels(self) -> List[Hashable]:
        return list(self.atoms)

    def pieces(self) -> Iterator[Tuple[Hashable, ConvexPolygon]]:
        for label, polys in self.atoms.items():
            for poly in polys:
                yield label, poly

    def atom_area(self, label: Hashable) -> QuadNum:
        return pieces_area(self.atoms.get(label, ()), self.spec)

    def area(self) -> QuadNum:
        return pieces_area((poly for _, poly in self.pieces()), self.spec)

    def covers_domain(self) -> bool:
        return self.area() == self.domain.area()

    def relabel(self, mapping: Dict[Hashable, Hashable], name: Optional[str] = None) -> "LabeledPartition":
        atoms: Dict[Hashable, Tuple[ConvexPolygon, ...]] = {}
        for label, polys in self.atoms.items():
            target = mapping[label]
            atoms[target] = atoms.get(target, ()) + polys
        return LabeledPartition(atoms, self.domain, name or self.name)

    def swap_axes(self, name: Optional[str] = None) -> "LabeledPartition":
        return LabeledPartition(
            {label: tuple(p.swap_axes() for p in polys) for label, polys in self.atoms.items()},
            self.domain.swap_axes(), name or self.name)

    def locate(self, point: Sequence[Any]) -> List[Hashable]:
        """Labels of every atom whose closure contains ``point``."""
        return [label for label, poly in self.pieces() if poly.contains(point)]


def torus_translate_polygon(poly: ConvexPolygon, vector: Sequence[Any]) -> List[ConvexPolygon]:
    """Translate a polygon of the unit square by ``vector`` modulo 1, split at the wrap lines."""
    spec = poly.spec
    vx, vy = frac(spec.coerce(vector[0])), frac(spec.coerce(vector[1]))
    moved = poly.translate(vx, vy)
    below_x, above_x = HalfPlane.of(spec, 1, -1, 0), HalfPlane.of(spec, -1, 1, 0)
    below_y, above_y = HalfPlane.of(spec, 1, 0, -1), HalfPlane.of(spec, -1, 0, 1)
    pieces = []
    for plane_x, shift_x in ((below_x, 0), (above_x, -1)):
        part = moved.clip(plane_x)
        if part.is_empty:
            continue
        for plane_y, shift_y in ((below_y, 0), (above_y, -1)):
            piece = part.clip(plane_y)
            if not piece.is_empty:
                pieces.append(piece.translate(shift_x, shift_y))
    return pieces


def torus_translate(partition: LabeledPartition, vector: Sequence[Any],
                    name: Optional[str] = None) -> LabeledPartition:
    atoms: Dict[Hashable, Tuple[ConvexPolygon, ...]] = {}
    for label, polys in partition.atoms.items():
        moved: List[ConvexPolygon] = []
        for poly in polys:
            moved.extend(torus_translate_polygon(poly, vector))
        atoms[label] = tuple(moved)
    return LabeledPartition(atoms, partition.domain, name or partition.name)


def atom_halfplanes(n: int, v: Sequence[int]) -> List[HalfPlane]:
    """Half-planes bounding the closure of the set where the coding equals v."""
    spec = field(n)
    alpha = spec.beta_inv
    beta = spec.beta
    a, b, c = v
    return [
        HalfPlane.of(spec, 1 - alpha - a, 0, 1),
        HalfPlane.of(spec, a + alpha, 0, -1),
        HalfPlane.of(spec, 1 - alpha - b, alpha, 1),
        HalfPlane.of(spec, b + alpha, -alpha, -1),
        HalfPlane.of(spec, 1 - alpha - c, beta, 1),
        HalfPlane.of(spec, c + alpha, -beta, -1),
    ]


def atom(n: int, v: Sequence[int]) -> List[ConvexPolygon]:
    """Closure of the set of points of [0,1]^2 coded by ``v``; empty list when it has no area."""
    label = Label(*v)
    if not label.in_vn(n):
        from script.tiles import LabelError
        raise LabelError(f"label {tuple(v)} is not in V_{n}")
    poly = ConvexPolygon.unit_square(field(n))
    for plane in atom_halfplanes(n, label):
        poly = poly.clip(plane)
        if poly.is_empty:
            return []
    return [poly]


class Partitions(NamedTuple):
    east: LabeledPartition
    north: LabeledPartition
    west: LabeledPartition
    south: LabeledPartition


@lru_cache(maxsize=None)
def build_partitions(n: int) -> Partitions:
    """The coding partition and its images under the diagonal flip and the two rotations."""
    spec = field(n)
    square = ConvexPolygon.unit_square(spec)
    east = LabeledPartition({v: tuple(atom(n, v)) for v in enumerate_vn(n)}, square, "east")
    north = east.swap_axes("north")
    alpha = spec.beta_inv
    west = torus_translate(east, (alpha, 0), "west")
    south = torus_translate(north, (0, alpha), "south")
    logger.debug(f"partitions n={n}: east {len(east)}, west pieces "
                 f"{sum(1 for _ in west.pieces())}, south pieces {sum(1 for _ in south.pieces())}")
    return Partitions(east, north, west, south)


@dataclass(frozen=True)
class RefinementCertificate:
    """The refined atoms ``(a, b)`` making up each atom ``a`` of the first
    partition and each atom ``b`` of the second."""

    first: Dict[Hashable, Tuple[Hashable, ...]]
    second: Dict[Hashable, Tuple[Hashable, ...]]

    def holds(self, first: LabeledPartition, second: LabeledPartition, refined: LabeledPartition) -> bool:
        """Each source atom has the area of the refined atoms listed for it."""
        for source, cover in ((first, self.first), (second, self.second)):
            if set(cover) != set(source.labels()):
                return False
            for label, parts in cover.items():
                total = sum((refined.atom_area(p) for p in parts), source.spec.zero)
                if total != source.atom_area(label):
                    return False
        return True


def refine(first: LabeledPartition, second: LabeledPartition,
           name: str = "") -> Tuple[LabeledPartition, RefinementCertificate]:
    """Common refinement with labels (a, b), and the certificate listing which
    refined atoms cover each source atom."""
    if first.domain != second.domain:
        raise PartitionError("cannot refine partitions on different domains")
    atoms: Dict[Hashable, List[ConvexPolygon]] = {}
    for label_a, poly_a in first.pieces():
        for label_b, poly_b in second.pieces():
            piece = poly_a.intersect(poly_b)
            if not piece.is_empty:
                atoms.setdefault((label_a, label_b), []).append(piece)
    refined = LabeledPartition({k: tuple(v) for k, v in atoms.items()}, first.domain, name)
    first_cover: Dict[Hashable, List[Hashable]] = {label: [] for label in first.labels()}
    second_cover: Dict[Hashable, List[Hashable]] = {label: [] for label in second.labels()}
    for label_a, label_b in refined.labels():
        first_cover[label_a].append((label_a, label_b))
        second_cover[label_b].append((label_a, label_b))
    certificate = RefinementCertificate({k: tuple(v) for k, v in first_cover.items()},
                                        {k: tuple(v) for k, v in second_cover.items()})
    return refined, certificate


@lru_cache(maxsize=None)
def refine_all(n: int) -> LabeledPartition:
    """Refinement of the four partitions labelled by (right, top, left, bottom) tiles."""
    east, north, west, south = build_partitions(n)
    en, _ = refine(east, north)
    enw, _ = refine(en, west)
    enws, _ = refine(enw, south)
    atoms = {}
    for (((right, top), left), bottom), polys in enws.atoms.items():
        atoms[WangTile(right, top, left, bottom)] = polys
    return LabeledPartition(atoms, east.domain, "refined")


def refined_by_index(n: int) -> LabeledPartition:
    """The refinement relabelled by position in the canonical base tile set."""
    ts = metallic_tiles(n)
    full = refine_all(n)
    return full.relabel({tile: ts.index(tile) for tile in full.labels()}, "P")


def tiles_of_partition(n: int) -> TileSet:
    """Quadruples whose refined atom has positive area."""
    return TileSet.from_tiles(n, "base", refine_all(n).labels())


def equal_up_to_relabeling(first: LabeledPartition,
                           second: LabeledPartition) -> Optional[Dict[Hashable, Hashable]]:
    """Bijection ``first label -> second label`` under which atoms coincide as regions, or None."""
    if first.domain != second.domain or len(first) != len(second):
        return None
    spec = first.spec
    areas_second = {label: second.atom_area(label) for label in second.labels()}
    mapping: Dict[Hashable, Hashable] = {}
    used = set()
    for label, polys in first.atoms.items():
        area = first.atom_area(label)
        match = None
        for candidate, candidate_area in areas_second.items():
            if candidate in used or candidate_area != area:
                continue
            if overlap_area(polys, second.atoms[candidate], spec) == area:
                match = candidate
                break
        if match is None:
            logger.debug(f"no counterpart for atom {label!r}")
            return None
        mapping[label] = match
        used.add(match)
    return mapping


def en_ws_relabeling(n: int) -> Optional[Dict[Hashable, Hashable]]:
    """Match the EAST/NORTH refinement against the WEST/SOUTH refinement."""
    east, north, west, south = build_partitions(n)
    pen, _ = refine(east, north)
    pws, _ = refine(west, south)
    return equal_up_to_relabeling(pen, pws)


def pattern_region(n: int, w) -> List[ConvexPolygon]:
    """Points p whose configuration c_p shows the pattern of window ``w`` at its cells."""
    spec = field(n)
    alpha = spec.beta_inv
    full = refine_all(n)
    region = [ConvexPolygon.unit_square(spec)]
    i0, j0 = w.origin
    for j in range(w.height):
        for i in range(w.width):
            tile = w.tile(i, j)
            vector = (-(i0 + i) * alpha, -(j0 + j) * alpha)
            moved: List[ConvexPolygon] = []
            for poly in full.atoms.get(tile, ()):
                moved.extend(torus_translate_polygon(poly, vector))
            region = [r.intersect(m) for r in region for m in moved if r.may_overlap(m)]
            region = [r for r in region if not r.is_empty]
            if not region:
                return []
    return region


def locate(n: int, w) -> Optional[Tuple[QuadNum, QuadNum, QuadNum, QuadNum]]:
    """Bounding box (xmin, ymin, xmax, ymax) of the pattern region, None when empty."""
    region = pattern_region(n, w)
    if not region:
        return None
    boxes = [poly.bbox for poly in region]
    return (min(b[0] for b in boxes), min(b[1] for b in boxes),
            max(b[2] for b in boxes), max(b[3] for b in boxes))
