"""Complex representation, validation, heights and lower stars."""

import numpy as np
import pytest

from conftest import (
    TRI,
    filled_triangle,
    generic_direction,
    hollow_polygon,
    make_complex,
    random_complex,
    random_orthogonal,
    segment2,
)
from eulerscan import (
    SimplicialComplex,
    TieError,
    euler_char,
    heights,
    lower_star,
    lower_star_partition,
    validate,
)
from eulerscan.strata import arrangement, stratum_label


def test_validate_triangle_ok():
    report = validate(filled_triangle())
    assert report.ok and report.violations == ()


def test_validate_missing_face():
    K = SimplicialComplex.from_data(2, TRI, [[0], [1], [2], [0, 1, 2]])
    report = validate(K)
    assert not report.ok
    assert any("missing face" in v for v in report.violations)


def test_validate_degenerate_edge():
    K = SimplicialComplex.from_data(
        2, [(0.0, 0.0), (0.0, 0.0)], [[0], [1], [0, 1]]
    )
    report = validate(K)
    assert not report.ok
    assert any("affinely dependent" in v for v in report.violations)
    assert any("duplicate vertex" in v for v in report.violations)


def test_validate_out_of_range_and_missing_zero_simplex():
    K = SimplicialComplex.from_data(2, [(0.0, 0.0), (1.0, 0.0)], [[0], [0, 2]])
    report = validate(K)
    assert any("out-of-range" in v for v in report.violations)
    assert any("vertex 1 missing" in v for v in report.violations)


def test_repeated_index_rejected():
    with pytest.raises(ValueError):
        SimplicialComplex.from_data(2, TRI, [[0, 0, 1]])


def test_heights_axis_projection():
    K = make_complex(2, [(0.0, 0.0), (1.0, 0.0)], [[0], [1]], close=False)
    assert np.array_equal(heights(K, (1.0, 0.0)), [0.0, 1.0])


def test_heights_negate_with_direction():
    rng = np.random.default_rng(0)
    K = random_complex(rng)
    v = generic_direction(K, rng)
    assert np.array_equal(heights(K, -v), -heights(K, v))


def test_heights_unit_triangle_diagonal():
    K = make_complex(2, [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)], [[0, 1, 2]])
    h = heights(K, (1.0, 1.0))
    expected = K.vertices @ (np.array([1.0, 1.0]) / np.sqrt(2.0))
    assert np.array_equal(h, expected)
    assert np.allclose(h, [0.0, 0.7071067811865475, 0.7071067811865475], atol=1e-12)


def test_lower_star_segment():
    K = make_complex(2, [(0.0, 0.0), (1.0, 0.0)], [[0, 1]])
    v = (1.0, 0.0)
    assert set(lower_star(K, 1, v)) == {(1,), (0, 1)}
    assert set(lower_star(K, 0, v)) == {(0,)}


def test_lower_star_filled_triangle_top_vertex():
    # Height order x < y < z: the top vertex owns the triangle, both upper
    # edges and itself.
    K = make_complex(2, [(0.0, 0.0), (0.4, 0.5), (0.1, 1.0)], [[0, 1, 2]])
    v = (0.0, 1.0)
    assert set(lower_star(K, 2, v)) == {(2,), (0, 2), (1, 2), (0, 1, 2)}
    assert euler_char(lower_star(K, 2, v)) == 0


def test_lower_star_tie_error_names_pair():
    K = make_complex(2, [(0.0, 0.0), (1.0, 0.0)], [[0, 1]])
    with pytest.raises(TieError) as err:
        lower_star(K, 0, (0.0, 1.0))
    assert err.value.pair == (0, 1)


def test_euler_char_examples():
    assert euler_char([]) == 0
    assert euler_char([(0,), (0, 1)]) == 0
    assert euler_char([(2,), (0, 2), (1, 2), (0, 1, 2)]) == 0
    assert euler_char([(0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)]) == 1


def test_partition_property_random_complexes():
    rng = np.random.default_rng(42)
    for _ in range(15):
        K = random_complex(rng, d=int(rng.integers(2, 4)), max_vertices=8)
        v = generic_direction(K, rng)
        part = lower_star_partition(K, v)
        union = [s for owned in part.values() for s in owned]
        assert sorted(union) == sorted(K.simplices)
        assert len(union) == len(K.simplices)
        assert sum(euler_char(owned) for owned in part.values()) == euler_char(
            K.simplices
        )


def test_lower_stars_constant_per_stratum():
    rng = np.random.default_rng(7)
    K = hollow_polygon(5, seed=1)
    arr = arrangement(K.vertices)
    base = generic_direction(K, rng)
    label = stratum_label(arr, base)
    reference = lower_star_partition(K, base)
    found = 0
    while found < 10:
        v = generic_direction(K, rng)
        if stratum_label(arr, v) != label:
            continue
        assert lower_star_partition(K, v) == reference
        found += 1


def test_heights_rotation_invariant():
    rng = np.random.default_rng(3)
    K = random_complex(rng, d=3, max_vertices=7)
    rho = random_orthogonal(rng, 3)
    v = generic_direction(K, rng)
    rotated = K.transformed(rho)
    assert np.allclose(heights(rotated, rho @ v), heights(K, v), atol=1e-9)
