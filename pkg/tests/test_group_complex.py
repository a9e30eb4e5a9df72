import pytest

from conftest import boundary_tetrahedron
from dualcx.complexes import DeltaComplex, f_vector
from dualcx.core.exceptions import InvalidInputError
from dualcx.group_complex import (
    TwoCycle,
    abelianization,
    build_presentation_complex,
    cone_off,
    cycles_from_file,
    h1_h2,
    parse_presentation,
    presentation_complex,
    q_superperfect_report,
    relator_chain,
    spans_sphere,
    support_complex,
)
from dualcx.homology import homology
from dualcx.models import CycleRecord, CyclesFile, Ring


def _presentation(gens, *rels):
    return parse_presentation(gens.split(","), list(rels))


def test_parse_presentation():
    P = _presentation("a,b", "abAB")
    assert P.generators == ("a", "b")
    assert P.relators == (((0, 1), (1, 1), (0, -1), (1, -1)),)
    assert P.exponent_matrix() == [[0, 0]]
    assert P.word_text(0) == "abAB"


@pytest.mark.parametrize("gens,rels", [
    ("a", ["b"]),
    ("a,a", []),
    ("ab", []),
    ("A", []),
    ("a", [""]),
])
def test_parse_presentation_rejects(gens, rels):
    with pytest.raises(InvalidInputError):
        parse_presentation(gens.split(","), rels)


@pytest.mark.parametrize("gens,rels,expected", [
    ("a", [], (1, ())),
    ("a", ["a"], (0, ())),
    ("a", ["aa"], (0, (2,))),
    ("a", ["aaa"], (0, (3,))),
    ("a,b", ["abAB"], (2, ())),
    ("a,b", ["aa", "bbb"], (0, (6,))),
    ("a,b", ["aabb"], (1, (2,))),
    ("a,b", ["ab"], (1, ())),
    ("a,b,c", ["abc"], (2, ())),
    ("a,b", ["aaBB", "abAB"], (1, (2,))),
    ("a,b", ["aaaa", "bb", "abAB"], (0, (2, 4))),
    ("a,b", ["aaBB", "abaB"], (0, (2, 2))),
])
def test_abelianization_matches_h1(gens, rels, expected):
    P = parse_presentation(gens.split(","), rels)
    assert abelianization(P) == expected
    profile = h1_h2(presentation_complex(P), P)
    assert (profile.betti[0], profile.torsion[0]) == expected


def test_free_group_on_one_generator():
    D = presentation_complex(_presentation("a"))
    assert homology(D).betti == (1, 1)


def test_trivial_group():
    profile = homology(presentation_complex(_presentation("a", "a")))
    assert profile.betti == (1, 0, 0)
    assert profile.torsion == ((), (), ())


def test_cyclic_group_of_order_two():
    profile = homology(presentation_complex(_presentation("a", "aa")))
    assert profile.betti == (1, 0, 0)
    assert profile.torsion == ((), (2,), ())


def test_torus_presentation():
    profile = h1_h2(presentation_complex(_presentation("a,b", "abAB")))
    assert profile.betti == (2, 1)


def test_padding_keeps_homology():
    for rels in (["a"], ["aa"]):
        P = parse_presentation(["a"], rels)
        assert homology(presentation_complex(P, pad=False)) == homology(presentation_complex(P, pad=True))


def _tetrahedron_class():
    D = DeltaComplex.from_simplicial(boundary_tetrahedron())
    signs = {("b", "c", "d"): 1, ("a", "c", "d"): -1, ("a", "b", "d"): 1, ("a", "b", "c"): -1}
    return D, TwoCycle({cell.id: signs[D.vertex_labels(cell.id)] for cell in D.cells_of_dim(2)})


def test_cone_off_sphere_keeps_low_homology():
    D, chain = _tetrahedron_class()
    assert spans_sphere(D, chain)
    profile = homology(cone_off(D, [chain]))
    assert profile.betti == (1, 0, 0, 0)
    assert profile.restrict((0, 1)) == homology(D).restrict((0, 1))


def test_cone_off_fundamental_class_of_torus():
    built = build_presentation_complex(_presentation("a,b", "abAB"))
    chain = relator_chain(built, 0)
    assert homology(built.delta).betti == (1, 2, 1)
    assert not spans_sphere(built.delta, chain)
    # the cone over the whole torus is contractible
    assert homology(cone_off(built.delta, [chain])).betti == (1, 0, 0, 0)


def test_support_complex_is_face_closed():
    D, chain = _tetrahedron_class()
    assert f_vector(support_complex(D, chain)).counts == (4, 6, 4)


def test_cone_off_without_cycles_is_identity():
    D = presentation_complex(_presentation("a,b", "abAB"))
    assert cone_off(D, []) is D


def test_cone_off_rejects_non_cycles():
    built = build_presentation_complex(_presentation("a,b", "abAB"))
    triangle, _ = built.fans[0][0]
    with pytest.raises(InvalidInputError):
        cone_off(built.delta, [TwoCycle({triangle: 1})])


def test_two_cycle_coefficients():
    with pytest.raises(InvalidInputError):
        TwoCycle({0: 2})


def test_relator_chain_needs_zero_exponent_sums():
    with pytest.raises(InvalidInputError):
        relator_chain(_presentation("a", "aa"), 0)
    with pytest.raises(InvalidInputError):
        relator_chain(_presentation("a,b", "abAB"), 1)


def test_superperfect_report_for_cyclic_group():
    report = q_superperfect_report(_presentation("a", "aa"))
    assert report.q_acyclic
    assert report.q_superperfect
    assert report.h3_vanishes is None
    assert homology(report.simplicial, Ring.Q).betti == (1, 0, 0)
    assert report.to_dict()["abelianization"] == {"rank": 0, "torsion": [2]}


def test_superperfect_report_for_free_group():
    report = q_superperfect_report(_presentation("a"), simplicialize=False)
    assert not report.q_superperfect
    assert not report.q_acyclic
    assert "simplicial_f_vector" not in report.to_dict()


def test_superperfect_report_for_coned_torus():
    P = _presentation("a,b", "abAB")
    cycles = cycles_from_file(build_presentation_complex(P), CyclesFile(cycles=[CycleRecord(relator=0)]))
    report = q_superperfect_report(P, cycles, simplicialize=False)
    assert report.coned
    assert report.h3_vanishes
    assert report.low_homology_kept is False
    assert report.homology_c3.betti == (1, 0, 0, 0)
    assert report.q_acyclic
    assert not report.q_superperfect
    assert report.to_dict()["c3"]["h0_h1_kept"] is False


def test_superperfect_report_for_spherical_cycle():
    P = _presentation("a", "a", "a")
    built = build_presentation_complex(P)
    chain = TwoCycle({t: s for t, s in built.fans[0]} | {t: -s for t, s in built.fans[1]})
    assert spans_sphere(built.delta, chain)
    report = q_superperfect_report(P, [chain], simplicialize=False)
    assert report.homology_c2.betti == (1, 0, 1)
    assert report.homology_c3.betti == (1, 0, 0, 0)
    assert report.low_homology_kept
    assert report.q_superperfect
    assert report.q_acyclic
    assert report.h3_vanishes

