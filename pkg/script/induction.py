"""
Polyhedron exchange transformations on the unit square and their first-return
induction on half-plane windows.

``self_similarity`` runs the renormalization of the coding partition: induce
the e1 rotation on {x <= 1/beta}, then the e2 rotation on {y <= 1/beta},
rescale the result by -beta back onto the unit square, and recognise the
original partition.  The return words of the two inductions compose into a
two-dimensional substitution that maps each tile to a block of tiles.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from functools import lru_cache
from typing import Any, Dict, Hashable, List, NamedTuple, Optional, Sequence, Set, Tuple

from script.coding import DomainError
from script.geometry import (ConvexPolygon, HalfPlane, LabeledPartition, equal_up_to_relabeling,
                             pieces_area, refined_by_index, region_equal)
from script.logger import logger
from script.quadfield import QuadNum, field
from script.substitution import Substitution2d, compose
from script.workers import PipelineStage, StageReport, StageTimer

Vector = Tuple[QuadNum, QuadNum]

DEFAULT_CAP_FACTOR = 10


class ReturnTimeExceeded(RuntimeError):
    """Some orbit did not come back to the window within the cap."""


class RelabelingNotFound(RuntimeError):
    """The renormalized partition does not match the original one."""


@dataclass
class PET:
    """Piecewise translation: each piece moves by its own vector."""

    domain: ConvexPolygon
    pieces: List[Tuple[ConvexPolygon, Vector]]
    name: str = ""

    @property
    def spec(self):
        return self.domain.spec

    def __len__(self) -> int:
        return len(self.pieces)

    def translations(self) -> Dict[Vector, List[ConvexPolygon]]:
        grouped: Dict[Vector, List[ConvexPolygon]] = {}
        for poly, vector in self.pieces:
            if not poly.is_empty:
                grouped.setdefault(vector, []).append(poly)
        return grouped

    def apply(self, point: Sequence[Any]) -> Vector:
        """Image of a point; on shared piece boundaries the first piece wins."""
        x, y = self.spec.coerce(point[0]), self.spec.coerce(point[1])
        for poly, (dx, dy) in self.pieces:
            if poly.contains((x, y)):
                return (x + dx, y + dy)
        raise DomainError(f"point ({x}, {y}) is outside the domain of {self.name or 'the map'}")

    def inverse(self) -> "PET":
        return PET(self.domain,
                   [(poly.translate(dx, dy), (-dx, -dy)) for poly, (dx, dy) in self.pieces],
                   f"{self.name}^-1" if self.name else "")

    def scale(self, factor) -> "PET":
        """Conjugate by the dilation p -> factor * p."""
        factor = self.spec.coerce(factor)
        origin = (self.spec.zero, self.spec.zero)
        return PET(self.domain.affine(factor, origin),
                   [(poly.affine(factor, origin), (factor * dx, factor * dy))
                    for poly, (dx, dy) in self.pieces],
                   self.name)

    def equals(self, other: "PET") -> bool:
        """Same map up to a null set, whatever the splitting into pieces."""
        if self.domain != other.domain:
            return False
        mine, theirs = self.translations(), other.translations()
        if set(mine) != set(theirs):
            return False
        return all(region_equal(mine[v], theirs[v], self.spec) for v in mine)

    def is_exchange(self) -> bool:
        """Pieces and their images both fill the domain."""
        area = self.domain.area()
        if pieces_area((p for p, _ in self.pieces), self.spec) != area:
            return False
        return all(poly.translate(dx, dy).within(self.domain) for poly, (dx, dy) in self.pieces)


def toral_translation(n: int, axis: str) -> PET:
    """Rotation of the unit torus by 1/beta along e1 or e2."""
    spec = field(n)
    alpha = spec.beta_inv
    cut = 1 - alpha
    zero = spec.zero
    if axis == "e1":
        pieces = [(ConvexPolygon.rectangle(spec, 0, 0, cut, 1), (alpha, zero)),
                  (ConvexPolygon.rectangle(spec, cut, 0, 1, 1), (alpha - 1, zero))]
    elif axis == "e2":
        pieces = [(ConvexPolygon.rectangle(spec, 0, 0, 1, cut), (zero, alpha)),
                  (ConvexPolygon.rectangle(spec, 0, cut, 1, 1), (zero, alpha - 1))]
    else:
        raise ValueError(f"axis must be 'e1' or 'e2', got {axis!r}")
    return PET(ConvexPolygon.unit_square(spec), pieces, f"R{axis}")


class Return(NamedTuple):
    preimage: ConvexPolygon
    translation: Vector
    word: Tuple[Hashable, ...]
    steps: int


def _as_halfplane(T: PET, window: Sequence[Any]) -> HalfPlane:
    if isinstance(window, HalfPlane):
        return window
    return HalfPlane.of(T.spec, *window)


def _trace_returns(T: PET, plane: HalfPlane, partition: Optional[LabeledPartition],
                   cap: int) -> List[Return]:
    """Follow every part of the window under T until it comes back.

    Each active part is carried as its current image together with the total
    translation applied so far, so its preimage is recovered by one
    translation at return time.
    """
    spec = T.spec
    window = T.domain.clip(plane)
    if window.is_empty:
        raise DomainError("the induction window has no area")
    if partition is not None and partition.domain != T.domain:
        raise DomainError("partition and map live on different domains")
    outside_plane = plane.negated()
    active = [(window, (spec.zero, spec.zero), ())]
    returns: List[Return] = []
    step = 0
    while active:
        step += 1
        if step > cap:
            raise ReturnTimeExceeded(f"{len(active)} parts still away after {cap} steps")
        following = []
        for image, (tx, ty), word in active:
            if partition is None:
                split = [(None, image)]
            else:
                split = [(label, image.intersect(poly)) for label, poly in partition.pieces()
                         if image.may_overlap(poly)]
            for label, part in split:
                if part.is_empty:
                    continue
                letters = word if partition is None else word + (label,)
                for piece, (dx, dy) in T.pieces:
                    moved = part.intersect(piece)
                    if moved.is_empty:
                        continue
                    moved = moved.translate(dx, dy)
                    total = (tx + dx, ty + dy)
                    inside = moved.clip(plane)
                    if not inside.is_empty:
                        returns.append(Return(inside.translate(-total[0], -total[1]), total, letters, step))
                    outside = moved.clip(outside_plane)
                    if not outside.is_empty:
                        following.append((outside, total, letters))
        active = following
    logger.debug(f"{T.name or 'map'}: {len(returns)} return pieces, max return time {step}")
    return returns


def induce_transformation(T: PET, window: Sequence[Any],
                          cap: Optional[int] = None) -> Tuple[PET, List[int]]:
    """First-return map of T on ``window`` and the return time of each piece."""
    plane = _as_halfplane(T, window)
    cap = cap or DEFAULT_CAP_FACTOR * (T.spec.n + 2)
    returns = _trace_returns(T, plane, None, cap)
    induced = PET(T.domain.clip(plane), [(r.preimage, r.translation) for r in returns],
                  f"{T.name}|" if T.name else "")
    return induced, [r.steps for r in returns]


def induce_partition(T: PET, window: Sequence[Any], P: LabeledPartition, kind: str = "row",
                     cap: Optional[int] = None) -> Tuple[LabeledPartition, Substitution2d]:
    """Cylinders of return words on ``window``, and the substitution sending
    each new label to its word laid out as a row or a column."""
    if kind not in ("row", "column"):
        raise ValueError(f"kind must be 'row' or 'column', got {kind!r}")
    plane = _as_halfplane(T, window)
    cap = cap or DEFAULT_CAP_FACTOR * (T.spec.n + 2)
    returns = _trace_returns(T, plane, P, cap)
    by_word: Dict[Tuple[Hashable, ...], List[ConvexPolygon]] = {}
    for r in returns:
        by_word.setdefault(r.word, []).append(r.preimage)
    words = sorted(by_word)
    atoms = {k: tuple(by_word[w]) for k, w in enumerate(words)}
    induced = LabeledPartition(atoms, T.domain.clip(plane), f"{P.name}|")
    rules = {k: w for k, w in enumerate(words)}
    sub = Substitution2d.from_rows(rules) if kind == "row" else Substitution2d.from_columns(rules)
    return induced, sub


def rescale(P: LabeledPartition, factor, offset: Sequence[Any],
            target: Optional[ConvexPolygon] = None) -> LabeledPartition:
    """Image of P under p -> factor * p + offset, optionally placed on ``target``."""
    spec = P.spec
    factor = spec.coerce(factor)
    offset = (spec.coerce(offset[0]), spec.coerce(offset[1]))
    domain = P.domain.affine(factor, offset)
    if target is not None:
        if not domain.within(target):
            raise DomainError("rescaled partition escapes the target domain")
        domain = target
    atoms = {label: tuple(poly.affine(factor, offset) for poly in polys) for label, polys in P.atoms.items()}
    return LabeledPartition(atoms, domain, P.name)


def apply_pet_to_partition(T: PET, P: LabeledPartition) -> LabeledPartition:
    """Push every atom of P forward through T."""
    if P.domain != T.domain:
        raise DomainError("partition and map live on different domains")
    atoms: Dict[Hashable, List[ConvexPolygon]] = {}
    for label, poly in P.pieces():
        for piece, (dx, dy) in T.pieces:
            if not poly.may_overlap(piece):
                continue
            part = poly.intersect(piece)
            if not part.is_empty:
                atoms.setdefault(label, []).append(part.translate(dx, dy))
    return LabeledPartition({k: tuple(v) for k, v in atoms.items()}, T.domain, P.name)


@dataclass
class SelfSimilarity:
    n: int
    partition: LabeledPartition
    s1: Substitution2d
    s2: Substitution2d
    s3: Substitution2d
    substitution: Substitution2d
    relabel: Dict[Hashable, Hashable]
    row_return_times: Set[int]
    column_return_times: Set[int]
    actions_match: Tuple[bool, bool]
    stages: List[StageReport] = dataclass_field(default_factory=list)

    @property
    def return_times_ok(self) -> bool:
        allowed = {self.n, self.n + 1}
        return self.row_return_times <= allowed and self.column_return_times <= allowed

    @property
    def shapes_ok(self) -> bool:
        allowed = {self.n, self.n + 1}
        return all(w in allowed and h in allowed for w, h in self.substitution.shapes().values())

    @property
    def holds(self) -> bool:
        return all(self.actions_match) and self.return_times_ok and self.shapes_ok


@lru_cache(maxsize=None)
def self_similarity(n: int, cap_factor: int = DEFAULT_CAP_FACTOR) -> SelfSimilarity:
    spec = field(n)
    alpha = spec.beta_inv
    cap = cap_factor * (n + 2)
    stages: List[StageReport] = []
    logger.info(f"Self-similarity pipeline for n={n}")

    with StageTimer(PipelineStage.PARTITIONS, stages) as stage:
        P = refined_by_index(n)
        stage.detail["atoms"] = len(P)
    re1, re2 = toral_translation(n, "e1"), toral_translation(n, "e2")

    x_le_alpha = HalfPlane.of(spec, alpha, -1, 0)
    with StageTimer(PipelineStage.INDUCE_ROWS, stages) as stage:
        P1, s1 = induce_partition(re1, x_le_alpha, P, "row", cap)
        r1e1, rows_times = induce_transformation(re1, x_le_alpha, cap)
        r1e2, _ = induce_transformation(re2, x_le_alpha, cap)
        stage.detail["atoms"] = len(P1)

    y_le_alpha = HalfPlane.of(spec, alpha, 0, -1)
    with StageTimer(PipelineStage.INDUCE_COLUMNS, stages) as stage:
        P2, s2 = induce_partition(r1e2, y_le_alpha, P1, "column", cap)
        r2e1, _ = induce_transformation(r1e1, y_le_alpha, cap)
        r2e2, column_times = induce_transformation(r1e2, y_le_alpha, cap)
        stage.detail["atoms"] = len(P2)

    with StageTimer(PipelineStage.RESCALE, stages):
        P2_scaled = rescale(P2, -spec.beta, (1, 1), P.domain)
        P3 = apply_pet_to_partition(re2, apply_pet_to_partition(re1, P2_scaled))

    with StageTimer(PipelineStage.RELABEL, stages) as stage:
        perm = equal_up_to_relabeling(P, P3)
        if perm is None:
            raise RelabelingNotFound(f"renormalized partition differs from the original for n={n}")
        stage.detail["labels"] = len(perm)

    with StageTimer(PipelineStage.COMPOSE, stages):
        s3 = Substitution2d.from_permutation(perm)
        s123 = compose(s1, compose(s2, s3))
        matches = (re1.equals(r2e1.scale(spec.beta).inverse()),
                   re2.equals(r2e2.scale(spec.beta).inverse()))

    result = SelfSimilarity(n, P, s1, s2, s3, s123, perm, set(rows_times), set(column_times),
                            matches, stages)
    level = logger.info if result.holds else logger.error
    level(f"n={n}: {len(s123)} rules, actions match {matches}, return times "
          f"{sorted(result.row_return_times)}/{sorted(result.column_return_times)}")
    return result
