"""
Tests for polyhedron exchange transformations, induction and the
self-similarity pipeline.
"""
from fractions import Fraction

import pytest

from script.coding import DomainError, TorusPoint, check_valid, window
from script.geometry import ConvexPolygon, HalfPlane, LabeledPartition, refined_by_index
from script.induction import (DEFAULT_CAP_FACTOR, PET, ReturnTimeExceeded, apply_pet_to_partition,
                              induce_partition, induce_transformation, rescale, self_similarity, toral_translation)
from script.quadfield import field
from script.substitution import apply_substitution, incidence, spectral_check
from script.workers import PipelineStage


def test_toral_translation_moves_points(rational_points):
    """Test the e1 and e2 rotations and their inverses on random points."""
    n = 2
    spec = field(n)
    re1, re2 = toral_translation(n, "e1"), toral_translation(n, "e2")
    assert re1.is_exchange() and re2.is_exchange()
    for x, y in rational_points(10):
        p = TorusPoint.of(n, x, y)
        assert re1.apply(p) == TorusPoint.of(n, p.x + spec.beta_inv, p.y)
        assert re2.apply(p) == TorusPoint.of(n, p.x, p.y + spec.beta_inv)
        assert re1.inverse().apply(re1.apply(p)) == p
    with pytest.raises(ValueError):
        toral_translation(n, "e3")
    with pytest.raises(DomainError):
        re1.apply((2, 0))


def test_pet_equality_ignores_piece_splitting():
    """Test that splitting a piece does not change the map."""
    n = 2
    spec = field(n)
    re1 = toral_translation(n, "e1")
    first, second = re1.pieces
    top = first[0].clip(HalfPlane.of(spec, Fraction(1, 2), 0, -1))
    bottom = first[0].clip(HalfPlane.of(spec, Fraction(-1, 2), 0, 1))
    split = PET(re1.domain, [(top, first[1]), (bottom, first[1]), second])
    assert split.equals(re1)
    assert not re1.equals(toral_translation(n, "e2"))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_induced_rotation_on_a_strip(n):
    """Test first return of the e1 rotation to x <= 1/beta."""
    spec = field(n)
    window_plane = HalfPlane.of(spec, spec.beta_inv, -1, 0)
    induced, times = induce_transformation(toral_translation(n, "e1"), window_plane)
    assert set(times) <= {n, n + 1}
    assert induced.is_exchange()
    assert induced.domain.area() == spec.beta_inv


def test_induce_transformation_caps_return_times():
    """Test ReturnTimeExceeded when the cap is too small."""
    n = 3
    spec = field(n)
    with pytest.raises(ReturnTimeExceeded):
        induce_transformation(toral_translation(n, "e1"), (spec.beta_inv, -1, 0), cap=2)


def test_induce_partition_words():
    """Test that return words tile the strip and their lengths are return times."""
    n = 2
    spec = field(n)
    P = refined_by_index(n)
    induced, words = induce_partition(toral_translation(n, "e1"), (spec.beta_inv, -1, 0), P, "row")
    assert induced.covers_domain()
    assert induced.area() == spec.beta_inv
    assert len(words) == len(induced)
    assert {w for w, _ in words.shapes().values()} <= {n, n + 1}
    assert all(h == 1 for _, h in words.shapes().values())
    with pytest.raises(ValueError):
        induce_partition(toral_translation(n, "e1"), (spec.beta_inv, -1, 0), P, "diagonal")


def test_rescale_round_trip():
    """Test that rescaling by -beta and back is the identity."""
    n = 3
    spec = field(n)
    strip = ConvexPolygon.rectangle(spec, 0, 0, spec.beta_inv, spec.beta_inv)
    square = ConvexPolygon.unit_square(spec)
    P = LabeledPartition({"a": (strip.clip(HalfPlane.of(spec, 0, 1, -1)),),
                          "b": (strip.clip(HalfPlane.of(spec, 0, -1, 1)),)}, strip)
    big = rescale(P, -spec.beta, (1, 1), square)
    assert big.domain == square
    assert big.area() == 1
    back = rescale(big, -spec.beta_inv, (spec.beta_inv, spec.beta_inv))
    assert back == P
    with pytest.raises(DomainError):
        rescale(P, spec.beta ** 2, (0, 0), square)


def test_apply_pet_to_partition_preserves_areas():
    """Test pushing a partition through a rotation."""
    P = refined_by_index(2)
    moved = apply_pet_to_partition(toral_translation(2, "e2"), P)
    assert moved.labels() == P.labels()
    for label in P.labels():
        assert moved.atom_area(label) == P.atom_area(label)


@pytest.mark.parametrize("n", [1, 2])
def test_self_similarity_small_n(n):
    """Test the full pipeline for n = 1 and n = 2."""
    result = self_similarity(n, DEFAULT_CAP_FACTOR)
    assert result.holds
    assert len(result.substitution) == (n + 3) ** 2
    assert sorted(result.relabel) == list(range((n + 3) ** 2))
    assert [r.stage for r in result.stages] == [
        PipelineStage.PARTITIONS, PipelineStage.INDUCE_ROWS, PipelineStage.INDUCE_COLUMNS,
        PipelineStage.RESCALE, PipelineStage.RELABEL, PipelineStage.COMPOSE]


def test_self_similarity_n3(selfsim3):
    """Test the n = 3 result: return times, shapes and conjugate actions."""
    assert selfsim3.actions_match == (True, True)
    assert selfsim3.row_return_times <= {3, 4}
    assert selfsim3.column_return_times <= {3, 4}
    assert len(selfsim3.substitution) == 36
    assert set(selfsim3.substitution.codomain()) <= set(range(36))
    assert selfsim3.holds


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2, 3])
def test_substitution_maps_windows_to_valid_windows(n, rational_points):
    """Test on 500 coding windows that substituting gives a valid pattern of base tiles."""
    s = self_similarity(n, DEFAULT_CAP_FACTOR).substitution
    for x, y in rational_points(500):
        w = window(n, (x, y), range(4), range(4))
        image = apply_substitution(s, w)
        assert image.width >= 4 * n and image.height >= 4 * n
        assert check_valid(image) == [], (x, y)


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_pipeline_and_spectrum(n):
    """Test the pipeline and the incidence spectrum of the composed substitution."""
    result = self_similarity(n, DEFAULT_CAP_FACTOR)
    assert result.holds
    assert result.actions_match == (True, True)
    assert sorted(result.relabel) == list(range((n + 3) ** 2))
    report = spectral_check(incidence(result.substitution), n)
    assert report.divisible
    assert report.rational_roots_ok
    assert report.perron_ok
