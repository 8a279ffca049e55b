"""
Tests for the torus coding, windows and witness points.
"""
from fractions import Fraction

import pytest

from script.coding import (DomainError, TorusPoint, Window, check_valid, factorization_holds,
                           is_symmetric, lambda_floor, lambda_floor_alt, range_check, tile_at,
                           window, witness_failures, witness_points)
from script.equations import rectangle_residual
from script.quadfield import field
from script.tiles import (Family, FamilyTag, Label, chip_cluster, difference_set, family_tiles,
                          metallic_tiles)


def test_lambda_examples():
    """Test the coding at hand-checked points for n = 3."""
    spec = field(3)
    alpha = spec.beta_inv
    assert lambda_floor(3, 1 - alpha, 0) == Label(0, 0, 3)
    assert lambda_floor(3, Fraction(1, 2), Fraction(1, 2)) == Label(1, 1, 2)
    assert lambda_floor(3, 0, 0) == Label(0, 0, 0)


def test_tile_at_origin():
    """Test that the origin codes the all-zero junction."""
    assert tile_at(3, 0, 0) == family_tiles(3)[FamilyTag(Family.JUNCTION, (0, 0, 0, 0))]


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2, 3, 4, 7])
def test_lambda_forms_agree(n, rational_points):
    """Test both constant forms and the chip factorization at random points."""
    for x, y in rational_points(500):
        assert lambda_floor(n, x, y) == lambda_floor_alt(n, x, y)
        assert lambda_floor(n, x, y).in_vn(n)
        assert factorization_holds(n, x, y)


def test_lambda_rejects_points_off_the_square():
    """Test DomainError outside [0, 1)."""
    with pytest.raises(DomainError):
        lambda_floor(2, 1, 0)
    with pytest.raises(DomainError):
        lambda_floor(2, 0, Fraction(-1, 3))


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_windows_are_valid_base_patterns(n, rational_points):
    """Test that coding windows use base tiles only and have no mismatches."""
    forbidden = set(difference_set(n).values())
    for x, y in rational_points(5):
        w = window(n, (x, y), range(-4, 6), range(-3, 7))
        assert (w.width, w.height) == (10, 10)
        assert w.origin == (-4, -3)
        assert check_valid(w) == []
        assert not any(w.tile(i, j) in forbidden for i in range(w.width) for j in range(w.height))


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2, 3])
def test_sampled_windows_up_to_15x15(n, rational_points):
    """Test validity, base tiles and the rectangle identity on 200 windows per n."""
    forbidden = set(difference_set(n).values())
    for k, (x, y) in enumerate(rational_points(200)):
        width, height = k % 15 + 1, (7 * k + 3) % 15 + 1
        w = window(n, (x, y), range(-(width // 2), width - width // 2), range(height))
        assert (w.width, w.height) == (width, height)
        assert check_valid(w) == [], (x, y)
        assert not any(w.tile(i, j) in forbidden for i in range(width) for j in range(height))
        assert rectangle_residual(n, w) == 0


def test_window_shift_compatibility(rational_points):
    """Test c_p(i + a, j + b) == c_{p + (a, b)/beta}(i, j)."""
    n = 3
    for x, y in rational_points(4):
        p = TorusPoint.of(n, x, y)
        big = window(n, p, range(0, 8), range(0, 8))
        small = window(n, p.shifted(3, 2), range(0, 5), range(0, 6))
        for j in range(6):
            for i in range(5):
                assert small.cell(i, j) == big.cell(i + 3, j + 2)


def test_window_parallel_matches_sequential(rational_points):
    """Test that splitting rows over threads does not change the result."""
    (x, y), = rational_points(1)
    sequential = window(2, (x, y), range(12), range(12))
    threaded = window(2, (x, y), range(12), range(12), max_workers=4)
    assert sequential == threaded


def test_origin_configuration_is_symmetric():
    """Test the diagonal symmetry of the configuration at the origin."""
    for n in (1, 2, 3):
        w = window(n, (0, 0), range(-5, 6), range(-5, 6))
        assert is_symmetric(w)
    with pytest.raises(DomainError):
        is_symmetric(window(2, (0, 0), range(0, 4), range(0, 4)))


def test_check_valid_reports_a_corrupted_cell():
    """Test that replacing a cell produces violations at absolute positions."""
    n = 3
    w = window(n, (Fraction(1, 3), Fraction(2, 7)), range(10, 15), range(-2, 3))
    original = w.cell(2, 2)
    replacement = next(k for k in range(len(w.tileset)) if w.tileset[k].right != w.tile(2, 2).right)
    broken = w.replace(2, 2, replacement)
    assert original != replacement
    violations = check_valid(broken)
    assert violations
    assert all(v.position[0] in (11, 12) and v.position[1] in (-1, 0) for v in violations)


def test_window_validation():
    """Test Window and window() argument checks."""
    ts = metallic_tiles(2)
    with pytest.raises(DomainError):
        Window(2, (0, 0), ((0, 1), (2,)), ts)
    with pytest.raises(DomainError):
        Window(2, (0, 0), ((len(ts),),), ts)
    with pytest.raises(DomainError):
        window(2, (0, 0), range(0), range(3))
    with pytest.raises(DomainError):
        window(2, (0, 0), range(0, 6, 2), range(3))


def test_chip_cluster_rebuilds_a_window():
    """Test that the boundary of a coding window determines the whole window."""
    n = 3
    w = window(n, (Fraction(5, 11), Fraction(3, 13)), range(6), range(5))
    rows = w.tile_rows()
    rebuilt = chip_cluster(n, [row[0].left for row in rows], [t.bottom for t in rows[0]])
    assert rebuilt == rows


@pytest.mark.parametrize("n", range(1, 7))
def test_witness_points_cover_the_base_set(n):
    """Test that each witness point codes its tile and every base tile is witnessed."""
    assert witness_failures(n) == []
    templates = family_tiles(n)
    witnessed = {templates[tag] for tag, _ in witness_points(n)}
    assert witnessed == metallic_tiles(n).as_set()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_range_check(n):
    """Test that positive-area atoms and witness points agree with the base set."""
    assert range_check(n)


def test_torus_point_reduction():
    """Test that TorusPoint.of reduces modulo 1."""
    spec = field(2)
    p = TorusPoint.of(2, spec.beta, Fraction(5, 2))
    assert p.x == spec.beta - 2
    assert p.y == Fraction(1, 2)
    assert p.shifted(1, 0).x == (spec.beta - 2 + spec.beta_inv).frac()
