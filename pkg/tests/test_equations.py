"""
Tests for the additive label equations and their rectangle and cylinder forms.
"""
from fractions import Fraction

import pytest

from script.coding import window
from script.equations import (InvalidPatternError, NotCylindricalError, cylinder_step,
                              cylindrical_rows, cylinders, inner_d, inner_e, rectangle_residual,
                              non_chip_counterexample, tile_residual, tile_residual_average)
from script.tiles import Family, FamilyTag, Label, chip_tiles, family_tiles, metallic_tiles


def test_inner_products():
    """Test <d, v> and <e, v>."""
    assert inner_d((0, 1, 3)) == 2
    assert inner_e((1, 1, 3)) == 1
    assert inner_e((0, 0, 4)) == 0


@pytest.mark.parametrize("n", range(1, 9))
def test_chip_tiles_satisfy_the_equations(n):
    """Test that every chip tile has zero residuals."""
    for t in chip_tiles(n):
        assert tile_residual(n, t).is_zero, t


def test_counterexample_satisfies_equations_but_is_not_a_chip():
    """Test the n = 4 quadruple that solves the equations without being a tile."""
    found = non_chip_counterexample()
    assert found.n == 4
    assert found.residual.is_zero
    assert not found.in_chip_set
    assert found.theta_of_left_bottom == Label(1, 1, 1)
    assert found.theta_of_left_bottom != found.tile.right
    assert all(v.in_vn(4) for v in found.tile)


def _row(n, *tags):
    templates = family_tiles(n)
    return tuple(templates[tag] for tag in tags)


def test_cylinder_row_of_blue_tiles():
    """Test a single cylindrical row: junction followed by b0, b1, b2 for n = 3."""
    n = 3
    row = _row(n, FamilyTag(Family.JUNCTION, (0, 0, 0, 0)), FamilyTag(Family.BLUE_H, (0,)),
               FamilyTag(Family.BLUE_H, (1,)), FamilyTag(Family.BLUE_H, (2,)))
    assert all(t in metallic_tiles(n) for t in row)
    step = cylinder_step(n, [row])
    assert step.holds
    assert step.shift == Fraction(1, 4)
    assert (step.width, step.height) == (4, 1)


def test_cylinder_rejects_open_rows():
    """Test NotCylindricalError when the row does not close up."""
    n = 3
    row = _row(n, FamilyTag(Family.BLUE_H, (0,)), FamilyTag(Family.BLUE_H, (1,)))
    with pytest.raises(NotCylindricalError):
        cylinder_step(n, [row])


def test_invalid_patterns_are_rejected():
    """Test InvalidPatternError for mismatches, ragged and empty input."""
    n = 3
    b0 = family_tiles(n)[FamilyTag(Family.BLUE_H, (0,))]
    with pytest.raises(InvalidPatternError):
        rectangle_residual(n, [[b0, b0]])
    with pytest.raises(InvalidPatternError):
        rectangle_residual(n, [])
    with pytest.raises(InvalidPatternError):
        rectangle_residual(n, [[b0], [b0, b0]])


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_rectangle_identity_on_coding_windows(n, rational_points):
    """Test the rectangle identity on valid windows of several shapes."""
    for (x, y), (width, height) in zip(rational_points(6), [(1, 1), (2, 3), (4, 4), (5, 2), (3, 7), (6, 6)]):
        w = window(n, (x, y), range(width), range(height))
        assert rectangle_residual(n, w) == 0
        assert tile_residual_average(n, w) == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_enumerated_cylinders_satisfy_the_step_law(n):
    """Test every enumerated short cylinder of the base set."""
    ts = metallic_tiles(n)
    rows = list(cylindrical_rows(ts, n + 1, limit=200))
    assert rows
    for row in rows:
        assert row[0].left == row[-1].right
        assert cylinder_step(n, [row]).holds
    stacked = list(cylinders(ts, n + 1, 2, limit=50, row_limit=200))
    for grid in stacked:
        assert cylinder_step(n, grid).holds


def test_cylindrical_rows_validates_width():
    """Test that a zero width is rejected."""
    with pytest.raises(ValueError):
        list(cylindrical_rows(metallic_tiles(2), 0))
