import pytest

from conftest import (
    boundary_tetrahedron,
    circle_delta,
    cycle,
    hollow_triangle,
    klein_bottle,
    named_corpus,
    path,
    rp2,
    rp2_delta,
    torus,
)
from dualcx.complexes import SimplicialComplex, barycentric_subdivision, euler_characteristic, full_skeleton, stellar_subdivision
from dualcx.core.exceptions import InvalidInputError
from dualcx.homology import (
    IntegerMatrix,
    boundary_matrix,
    boundary_squares_to_zero,
    homology,
    is_connected,
    is_q_acyclic,
    rational_rank,
    smith_normal_form,
)
from dualcx.models import Ring


def test_snf_identity():
    form = smith_normal_form(IntegerMatrix.identity(3))
    assert form.invariant_factors == (1, 1, 1)
    assert form.rank == 3


def test_snf_small_example():
    form = smith_normal_form(IntegerMatrix.from_rows([[1, 2], [3, 4]]))
    assert form.invariant_factors == (1, 2)


def test_snf_divisibility_is_restored():
    assert smith_normal_form(IntegerMatrix.from_rows([[2, 0], [0, 3]])).invariant_factors == (1, 6)
    assert smith_normal_form(IntegerMatrix.from_rows([[4, 0], [0, 6]])).invariant_factors == (2, 12)


def test_snf_zero_matrix():
    form = smith_normal_form(IntegerMatrix.zeros(2, 3))
    assert form.invariant_factors == ()
    assert form.rank == 0


@pytest.mark.parametrize("rows", [
    [[1, 2], [3, 4]],
    [[2, 4, 4], [-6, 6, 12], [10, -4, -16]],
    [[0, 0, 3], [0, 5, 0], [7, 0, 0], [1, 1, 1]],
    [[6, 10, 15]],
])
def test_snf_transforms(rows):
    M = IntegerMatrix.from_rows(rows)
    form = smith_normal_form(M, with_transforms=True)
    assert form.left @ M @ form.right == form.diagonal
    for k in range(form.rank):
        assert form.diagonal.entries[k][k] == form.invariant_factors[k] > 0
    for a, b in zip(form.invariant_factors, form.invariant_factors[1:]):
        assert b % a == 0


def test_snf_classic_example():
    M = IntegerMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert smith_normal_form(M).invariant_factors == (2, 6, 12)


def test_boundary_matrix_of_triangle():
    full = full_skeleton(["a", "b", "c"], 2)
    assert boundary_matrix(full, 2).to_lists() == [[1], [-1], [1]]
    d1 = boundary_matrix(hollow_triangle(), 1)
    assert (d1.rows, d1.cols) == (3, 3)
    assert rational_rank(d1) == 2
    assert smith_normal_form(d1).rank == 2


def test_boundary_matrix_of_rp2():
    d2 = boundary_matrix(rp2(), 2)
    assert (d2.rows, d2.cols) == (15, 10)
    # full rank over Q, rank 9 only mod 2
    assert rational_rank(d2) == 10
    assert smith_normal_form(d2).invariant_factors[-1] == 2


def test_boundary_matrix_index_range():
    with pytest.raises(InvalidInputError):
        boundary_matrix(hollow_triangle(), 0)
    with pytest.raises(InvalidInputError):
        boundary_matrix(hollow_triangle(), 2)


@pytest.mark.parametrize("name,C", list(named_corpus().items()))
def test_boundary_squares_to_zero(name, C):
    assert boundary_squares_to_zero(C)


@pytest.mark.parametrize("name,C", list(named_corpus().items()))
def test_betti_sum_is_euler_characteristic(name, C):
    assert homology(C).euler_characteristic == euler_characteristic(C)
    assert homology(C, Ring.Q).euler_characteristic == euler_characteristic(C)


@pytest.mark.parametrize("name,C", list(named_corpus().items()))
def test_snf_rank_matches_rational_rank(name, C):
    for k in range(1, C.dim + 1):
        matrix = boundary_matrix(C, k)
        assert smith_normal_form(matrix).rank == rational_rank(matrix)


@pytest.mark.parametrize("build,betti,torsion", [
    (boundary_tetrahedron, (1, 0, 1), ((), (), ())),
    (rp2, (1, 0, 0), ((), (2,), ())),
    (torus, (1, 2, 1), ((), (), ())),
    (klein_bottle, (1, 1, 0), ((), (2,), ())),
    (path, (1, 0), ((), ())),
    (hollow_triangle, (1, 1), ((), ())),
])
def test_integral_homology(build, betti, torsion):
    profile = homology(build())
    assert profile.betti == betti
    assert profile.torsion == torsion


def test_rational_homology_drops_torsion():
    profile = homology(rp2(), Ring.Q)
    assert profile.betti == (1, 0, 0)
    assert profile.torsion == ((), (), ())
    assert profile.to_dict(Ring.Q) == {"ring": "Q", "betti": [1, 0, 0]}


def test_homology_of_delta_complexes():
    assert homology(circle_delta()).betti == (1, 1)
    profile = homology(rp2_delta())
    assert profile.betti == (1, 0, 0)
    assert profile.torsion == ((), (2,), ())


@pytest.mark.parametrize("name,C", list(named_corpus().items()))
def test_stellar_subdivision_keeps_homology(name, C):
    expected = homology(C)
    for cell in C.ordered_cells():
        assert homology(stellar_subdivision(C, cell, "w")) == expected


def test_homology_survives_subdivision():
    C = boundary_tetrahedron()
    assert homology(stellar_subdivision(C, ("a",), "w")) == homology(C)
    assert homology(barycentric_subdivision(rp2(), 1)) == homology(rp2())
    assert homology(barycentric_subdivision(torus(), 1)) == homology(torus())
    assert homology(barycentric_subdivision(rp2_delta(), 2)) == homology(rp2_delta())


def test_q_acyclicity():
    assert is_q_acyclic(rp2())
    assert is_q_acyclic(path())
    assert not is_q_acyclic(torus())
    assert not is_q_acyclic(cycle(4))


def test_connectivity():
    assert is_connected(path())
    assert is_connected(SimplicialComplex(["a"]))
    assert not is_connected(SimplicialComplex(["a", "b"]))
    assert not is_connected(SimplicialComplex.from_facets([("a", "b"), ("c", "d")]))


def test_empty_complex_has_no_homology():
    with pytest.raises(InvalidInputError):
        homology(SimplicialComplex([]))
