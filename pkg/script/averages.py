"""
Finite-horizon label averages that estimate the torus point behind a coding.

The row estimate averages <d/n, TOP> over the tiles c_p(i, 0), |i| <= k, and
tends to y; the column estimate averages <d/n, RIGHT> over c_p(0, j) and
tends to x.  All sums are exact; only the final comparison with a target uses
a tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from script.coding import DomainError, TorusPoint, lambda_floor
from script.equations import inner_d
from script.logger import logger
from script.quadfield import QuadNum, field, floor_scaled, frac
from script.workers import map_chunked

__all__ = [
    "Axis",
    "AverageEstimate",
    "ConvergenceRow",
    "ShiftLaws",
    "InnerProductFloor",
    "inner_d",
    "inner_product_floor",
    "phi_estimate",
    "factor_estimate",
    "convergence_table",
    "shift_laws",
    "circle_distance",
]


class Axis(str, Enum):
    ROW = "row"
    COLUMN = "column"

    @classmethod
    def parse(cls, text: str) -> "Axis":
        aliases = {"row": cls.ROW, "col": cls.COLUMN, "column": cls.COLUMN}
        try:
            return aliases[text.lower()]
        except KeyError:
            raise ValueError(f"unknown axis {text!r}") from None


@dataclass(frozen=True)
class AverageEstimate:
    value: Fraction
    horizon: int
    axis: Axis

    def error(self, target: QuadNum) -> QuadNum:
        return abs(target - self.value)

    def within(self, target: QuadNum, tolerance: Fraction) -> bool:
        return (self.error(target) - tolerance).sign() <= 0


@dataclass(frozen=True)
class InnerProductFloor:
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class ConvergenceRow:
    horizon: int
    value: Fraction
    target: QuadNum
    error: QuadNum


@dataclass(frozen=True)
class ShiftLaws:
    horizon: int
    e1_drift: Fraction
    e1_bound: Fraction
    e2_drift: QuadNum

    @property
    def e1_holds(self) -> bool:
        return abs(self.e1_drift) <= self.e1_bound


def inner_product_floor(n: int, x, y) -> InnerProductFloor:
    """<d, Lambda(x, y)> against floor(n x) + [ {delta_x + y} in [1 - {n x}, 1) ]."""
    spec = field(n)
    x, y = spec.coerce(x), spec.coerce(y)
    if x.sign() < 0 or (x - 1).sign() >= 0 or y.sign() < 0 or (y - 1).sign() >= 0:
        raise DomainError(f"({x}, {y}) is outside [0, 1)^2")
    lhs = inner_d(lambda_floor(n, x, y))
    nx = n * x
    delta = 1 - spec.beta_inv * (1 - x)
    indicator = 1 if (frac(delta + y) - (1 - frac(nx))).sign() >= 0 else 0
    return InnerProductFloor(lhs, nx.floor() + indicator)


def _partial_sum(task) -> int:
    """Sum over i of floor(K3 + base + i/beta) - floor(K2 + base + i/beta)."""
    n, high, low, i_values = task
    a3, b3, d3 = high
    a2, b2, d2 = low
    total = 0
    for i in i_values:
        # i/beta = -i*n + i*beta
        total += (floor_scaled(a3 - i * n * d3, b3 + i * d3, d3, n)
                  - floor_scaled(a2 - i * n * d2, b2 + i * d2, d2, n))
    return total


def _label_average(n: int, fixed: QuadNum, moving: QuadNum, k: int,
                   max_workers: Optional[int], chunk_size: int) -> Fraction:
    """Average of <d/n, Lambda(fixed, {moving + i/beta})> over |i| <= k.

    The floor of ``moving + i/beta`` cancels between the two forms, so only the
    unreduced sums are needed.
    """
    spec = field(n)
    c = spec.beta_star + 1
    high = (spec.beta * fixed + c + moving).scaled_integers()
    low = (spec.beta_inv * fixed + c + moving).scaled_integers()
    indices = list(range(-k, k + 1))
    sums = map_chunked(lambda chunk: _partial_sum((n, high, low, chunk)), indices,
                       chunk_size=chunk_size, max_workers=max_workers)
    return Fraction(sum(sums), n * (2 * k + 1))


def phi_estimate(n: int, p: Union[TorusPoint, Tuple], k: int, axis: Union[Axis, str] = Axis.ROW,
                 max_workers: Optional[int] = 1, chunk_size: int = 4096) -> AverageEstimate:
    """Row estimate (tends to y) or column estimate (tends to x) at horizon k."""
    if k < 1:
        raise ValueError(f"horizon must be at least 1, got {k}")
    axis = Axis(axis) if not isinstance(axis, Axis) else axis
    point = p if isinstance(p, TorusPoint) else TorusPoint.of(n, *p)
    if axis is Axis.ROW:
        value = _label_average(n, point.y, point.x, k, max_workers, chunk_size)
    else:
        value = _label_average(n, point.x, point.y, k, max_workers, chunk_size)
    logger.debug(f"phi_estimate n={n} k={k} axis={axis.value}: {float(value):.6f}")
    return AverageEstimate(value, k, axis)


def factor_estimate(n: int, p, k: int, max_workers: Optional[int] = 1) -> Tuple[AverageEstimate, AverageEstimate]:
    """(column estimate, row estimate), approximating the point p itself."""
    return (phi_estimate(n, p, k, Axis.COLUMN, max_workers),
            phi_estimate(n, p, k, Axis.ROW, max_workers))


def convergence_table(n: int, p, horizons: Sequence[int], axis: Union[Axis, str] = Axis.ROW,
                      max_workers: Optional[int] = 1) -> List[ConvergenceRow]:
    point = p if isinstance(p, TorusPoint) else TorusPoint.of(n, *p)
    axis = Axis(axis) if not isinstance(axis, Axis) else axis
    target = point.y if axis is Axis.ROW else point.x
    rows = []
    for k in sorted(set(horizons)):
        estimate = phi_estimate(n, point, k, axis, max_workers)
        rows.append(ConvergenceRow(k, estimate.value, target, estimate.error(target)))
    return rows


def circle_distance(a, b) -> QuadNum:
    """Distance between a and b on R/Z."""
    d = frac(a - b)
    other = 1 - d
    return d if (d - other).sign() <= 0 else other


def shift_laws(n: int, p, k: int, max_workers: Optional[int] = 1) -> ShiftLaws:
    """Compare row estimates of c_p with those of its e1 and e2 shifts.

    Shifting by e1 leaves the row estimate unchanged up to two boundary terms;
    shifting by e2 rotates it by 1/beta.  ``e2_drift`` is the circle distance
    between the observed rotation and 1/beta.
    """
    point = p if isinstance(p, TorusPoint) else TorusPoint.of(n, *p)
    base = phi_estimate(n, point, k, Axis.ROW, max_workers).value
    right = phi_estimate(n, point.shifted(1, 0), k, Axis.ROW, max_workers).value
    up = phi_estimate(n, point.shifted(0, 1), k, Axis.ROW, max_workers).value
    alpha = field(n).beta_inv
    e2_drift = circle_distance(field(n).coerce(up - base), alpha)
    return ShiftLaws(k, right - base, Fraction(2 * (n + 1), 2 * k + 1), e2_drift)
