"""
Tests for the finite-horizon label averages.
"""
from fractions import Fraction

import pytest

from script.averages import (AverageEstimate, Axis, circle_distance, convergence_table,
                             factor_estimate, inner_product_floor, phi_estimate, shift_laws)
from script.coding import TorusPoint, lambda_floor, window
from script.equations import inner_d
from script.quadfield import field

TOLERANCE = Fraction(1, 50)


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_inner_product_floor_identity(n, rational_points):
    """Test <d, Lambda(x, y)> == floor(n x) + indicator at 500 random points."""
    for x, y in rational_points(500):
        result = inner_product_floor(n, x, y)
        assert result.holds, (x, y)


def test_estimate_matches_direct_sum():
    """Test the floor-cancelling sum against averaging a coded window directly."""
    n, k = 3, 12
    x, y = Fraction(2, 9), Fraction(5, 17)
    w = window(n, (x, y), range(-k, k + 1), range(0, 1))
    direct = Fraction(sum(inner_d(w.tile(i, 0).top) for i in range(w.width)), n * w.width)
    assert phi_estimate(n, (x, y), k, Axis.ROW).value == direct
    w = window(n, (x, y), range(0, 1), range(-k, k + 1))
    direct = Fraction(sum(inner_d(w.tile(0, j).right) for j in range(w.height)), n * w.height)
    assert phi_estimate(n, (x, y), k, "column").value == direct


def test_estimate_at_origin_is_zero():
    """Test that the origin configuration has zero averages."""
    for n in (1, 2, 3):
        assert phi_estimate(n, (0, 0), 50).value == 0
        assert phi_estimate(n, (0, 0), 50, Axis.COLUMN).value == 0


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2, 3])
def test_estimates_converge(n, rational_points):
    """Test on 20 points that the error at k = 10**4 is within tolerance and below the k = 10**2 error."""
    worst_small = worst_large = field(n).zero
    for x, y in rational_points(20):
        rows = convergence_table(n, (x, y), [100, 10000])
        assert rows[-1].error <= TOLERANCE
        worst_small = max(worst_small, rows[0].error)
        worst_large = max(worst_large, rows[-1].error)
    assert worst_large < worst_small


def test_factor_estimate_recovers_the_point():
    """Test that (column, row) estimates approximate (x, y)."""
    n = 2
    p = TorusPoint.of(n, Fraction(3, 7), Fraction(4, 5))
    col, row = factor_estimate(n, p, 2000)
    assert col.axis is Axis.COLUMN and row.axis is Axis.ROW
    assert col.within(p.x, TOLERANCE)
    assert row.within(p.y, TOLERANCE)


def test_parallel_estimate_is_identical():
    """Test that chunked threads give the exact same sum."""
    p = (Fraction(1, 3), Fraction(3, 8))
    assert (phi_estimate(3, p, 3000, max_workers=4, chunk_size=500).value
            == phi_estimate(3, p, 3000).value)


def test_shift_laws(rational_points):
    """Test the e1 drift bound and the 1/beta rotation under e2."""
    for n in (1, 3):
        for x, y in rational_points(2):
            laws = shift_laws(n, (x, y), 1000)
            assert laws.e1_holds
            assert laws.e2_drift <= Fraction(1, 50)


def test_circle_distance():
    """Test distances on R/Z."""
    spec = field(3)
    assert circle_distance(spec(Fraction(1, 10)), spec(Fraction(9, 10))) == Fraction(1, 5)
    assert circle_distance(spec.beta, spec.beta_inv) == 0
    assert circle_distance(spec(Fraction(1, 4)), spec(0)) == Fraction(1, 4)


def test_axis_parsing_and_validation():
    """Test axis aliases and horizon checks."""
    assert Axis.parse("col") is Axis.COLUMN
    assert Axis.parse("ROW") is Axis.ROW
    with pytest.raises(ValueError):
        Axis.parse("diagonal")
    with pytest.raises(ValueError):
        phi_estimate(2, (0, 0), 0)


def test_average_estimate_error():
    """Test error() and within() of an estimate."""
    spec = field(2)
    estimate = AverageEstimate(Fraction(1, 2), 10, Axis.ROW)
    assert estimate.error(spec(Fraction(1, 4))) == Fraction(1, 4)
    assert estimate.within(spec(Fraction(1, 2) + Fraction(1, 50)), TOLERANCE)
    assert not estimate.within(spec.beta_inv, TOLERANCE)
