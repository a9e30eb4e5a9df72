import itertools
from fractions import Fraction

import pytest

from dualcx.arrangement import (
    RationalMatrix,
    build_arrangement,
    initial_dual_complex,
    rational_point,
    stratum_dimension,
    stratum_equations,
    verify_general_position,
)
from dualcx.complexes import f_vector, full_skeleton
from dualcx.core.exceptions import InvalidInputError
from dualcx.models import EMPTY


def _labels(m):
    return [f"h{i}" for i in range(m)]


def test_vandermonde_rows():
    A = build_arrangement(["a", "b", "c"], 1)
    assert A.nodes == (0, 1, 2)
    assert A.coeffs == ((1, 0, 0), (1, 1, 1), (1, 2, 4))
    assert A.ambient_dim == 2


def test_vandermonde_rows_for_points_on_a_line():
    A = build_arrangement(["a", "b"], 0)
    assert A.coeffs == ((1, 0), (1, 1))


def test_rational_nodes():
    A = build_arrangement(["a", "b"], 1, nodes=["1/2", "-3"])
    assert A.row("a") == (1, Fraction(1, 2), Fraction(1, 4))
    assert A.row("b") == (1, -3, 9)
    assert A.to_dict()["nodes"] == ["1/2", "-3"]


@pytest.mark.parametrize("labels,n,nodes", [
    (["a", "b"], 1, [1, 1]),
    (["a", "a"], 1, None),
    (["a", "b"], -1, None),
    ([], 1, None),
    (["a", "b"], 1, [0]),
])
def test_build_arrangement_rejects(labels, n, nodes):
    with pytest.raises(InvalidInputError):
        build_arrangement(labels, n, nodes)


def test_unknown_label():
    A = build_arrangement(["a", "b"], 1)
    with pytest.raises(InvalidInputError):
        stratum_dimension(A, ["z"])


def test_general_position_of_vandermonde():
    assert verify_general_position(build_arrangement(["a", "b", "c"], 1))
    report = verify_general_position(build_arrangement(_labels(8), 3))
    assert report
    assert report.subset_size == 5
    assert report.checked == 56
    assert report.exhaustive


def test_general_position_failure_has_witness():
    A = build_arrangement(["a", "b", "c"], 1, coefficients=[[1, 0, 0], [1, 1, 1], [2, 2, 2]])
    report = verify_general_position(A)
    assert not report
    assert report.witness == ("a", "b", "c")
    with pytest.raises(InvalidInputError):
        initial_dual_complex(A)


def test_general_position_sampling():
    A = build_arrangement(_labels(8), 3)
    report = verify_general_position(A, enumeration_limit=10, sample_size=20, seed=3)
    assert report
    assert not report.exhaustive
    assert report.checked <= 20


def test_stratum_dimensions_in_the_plane():
    A = build_arrangement(["a", "b", "c"], 1)
    assert stratum_dimension(A, ["a"]) == 1
    assert stratum_dimension(A, ["a", "b"]) == 0
    assert stratum_dimension(A, ["a", "b", "c"]) is EMPTY


def test_stratum_dimensions_in_space():
    A = build_arrangement(["a", "b", "c", "d"], 2)
    assert stratum_dimension(A, ["a"]) == 2
    assert stratum_dimension(A, ["a", "b", "c"]) == 0
    assert stratum_dimension(A, ["a", "b", "c", "d"]) is EMPTY


@pytest.mark.parametrize("m", range(1, 9))
@pytest.mark.parametrize("n", range(0, 5))
def test_every_stratum_has_the_expected_dimension(m, n):
    A = build_arrangement(_labels(m), n)
    for size in range(1, min(m, n + 2) + 1):
        for J in itertools.combinations(A.labels, size):
            expected = EMPTY if size == n + 2 else n + 1 - size
            assert stratum_dimension(A, J) == expected


@pytest.mark.parametrize("m,n", [(3, 1), (4, 2), (5, 2), (6, 3)])
def test_rational_points(m, n):
    A = build_arrangement(_labels(m), n)
    for size in range(1, min(m, n + 2) + 1):
        for J in itertools.combinations(A.labels, size):
            point = rational_point(A, J)
            if size == n + 2:
                assert point is None
                continue
            assert any(point)
            assert not any(stratum_equations(A, J).apply(point))


def test_initial_dual_complex():
    assert initial_dual_complex(build_arrangement(["a", "b", "c"], 1)) == full_skeleton(["a", "b", "c"], 1)
    assert initial_dual_complex(build_arrangement(["a", "b", "c", "d"], 2)) == full_skeleton(["a", "b", "c", "d"], 2)
    assert f_vector(initial_dual_complex(build_arrangement(_labels(7), 2))).counts == (7, 21, 35)


def test_initial_dual_complex_with_few_hyperplanes():
    C = initial_dual_complex(build_arrangement(["a", "b"], 3))
    assert C == full_skeleton(["a", "b"], 1)


def test_rational_matrix_nullspace():
    M = RationalMatrix.from_rows([[1, 1, 1], [1, 2, 4]])
    assert M.rank() == 2
    (v,) = M.nullspace()
    assert v[0] == 1
    assert M.apply(v) == (0, 0)
    assert RationalMatrix.from_rows([[1, 2], [2, 4]]).rank() == 1
