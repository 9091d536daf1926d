"""Complexes, maps, subdivision, stars."""
import json

import pytest

from charrig import corpus, zlin
from charrig.simplicial import (
    Complex, DegreeError, DuplicateError, FaceClosureError, ParseError,
    SimplicialMap, barycentric_subdivide, closed_star_neighborhood,
    complex_from_maximal, identity_map, parse_complex,
    subcomplex_from_simplices,
)
from charrig.cochains import cohomology, homology


def test_parse_triangle_circle():
    doc = json.dumps({"name": "circle", "simplices": [[0, 1], [1, 2], [0, 2]],
                      "vertices": 3})
    cx = parse_complex(doc)
    assert cx.n_simplices(0) == 3 and cx.n_simplices(1) == 3
    assert cx.dim == 1


def test_parse_rp2_counts(cx):
    rp2 = cx("rp2")
    assert [rp2.n_simplices(d) for d in range(3)] == [6, 15, 10]


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_complex("not json at all {")
    with pytest.raises(ParseError):
        parse_complex(json.dumps({"simplices": [[0, 1]]}))  # no name
    with pytest.raises(ParseError):
        parse_complex(json.dumps({"name": "x", "simplices": [[1, 0]]}))
    with pytest.raises(DuplicateError):
        parse_complex(json.dumps({"name": "x", "simplices": [[0, 1], [0, 1]]}))
    with pytest.raises(ParseError):
        parse_complex(json.dumps({"name": "x", "simplices": [[0, 1, 2]],
                                  "dimension": 1}))


def test_explicit_mode_face_closure_error():
    doc = json.dumps({"name": "bad", "explicit": True,
                      "simplices": [[0, 1, 2], [0, 1], [1, 2],
                                    [0], [1], [2]]})
    with pytest.raises(FaceClosureError):
        parse_complex(doc)


def test_boundary_matrix_shapes_and_degrees(cx):
    s1 = cx("s1")
    b1 = s1.boundary_matrix(1)
    assert all(sum(col) == 0 for col in zip(*b1))
    pt = cx("point")
    assert pt.boundary_matrix(1) == [[]]  # 1 x 0
    with pytest.raises(DegreeError):
        pt.boundary_matrix(2)
    with pytest.raises(DegreeError):
        pt.boundary_matrix(-1)


def test_boundary_squares_to_zero(corpus_complex):
    X = corpus_complex
    for j in range(1, X.dim + 1):
        prod = zlin.mat_mul(X.boundary_matrix(j), X.boundary_matrix(j + 1))
        assert all(all(v == 0 for v in row) for row in prod)


def test_subdivision_edge():
    edge = complex_from_maximal("edge", [(0, 1)])
    sd = barycentric_subdivide(edge)
    assert sd.complex.n_simplices(0) == 3
    assert sd.complex.n_simplices(1) == 2


def test_subdivision_preserves_euler_and_betti(cx):
    for name in ("s1", "s2", "rp2"):
        X = cx(name)
        sd = barycentric_subdivide(X)
        Y = sd.complex
        assert Y.euler_characteristic() == X.euler_characteristic()
        for j in range(X.dim + 1):
            gx = cohomology(X, j, "Z")
            gy = cohomology(Y, j, "Z")
            assert (gx.rank, gx.torsion) == (gy.rank, gy.torsion), (name, j)


def test_subdivision_chain_map_commutes_with_boundary(cx):
    for name in ("s1", "s2", "rp2"):
        X = cx(name)
        sd = barycentric_subdivide(X)
        Y = sd.complex
        for j in range(1, X.dim + 1):
            for i in range(X.n_simplices(j)):
                vec = [0] * X.n_simplices(j)
                vec[i] = 1
                lhs = Y.boundary_of_chain(j, sd.subdivide_chain(j, vec))
                rhs = sd.subdivide_chain(j - 1, X.boundary_of_chain(j, vec))
                assert lhs == rhs


def test_last_vertex_section_of_subdivision(cx):
    for name in ("s1", "s2"):
        X = cx(name)
        sd = barycentric_subdivide(X)
        for j in range(X.dim + 1):
            for i in range(X.n_simplices(j)):
                vec = [0] * X.n_simplices(j)
                vec[i] = 1
                assert sd.last_vertex.push_chain(j, sd.subdivide_chain(j, vec)) == vec


def test_subdivided_fundamental_cycle(cx):
    from charrig.cochains import cycle_basis
    s1 = cx("s1")
    sd = barycentric_subdivide(s1)
    z = cycle_basis(s1, 1)[0]
    z6 = sd.subdivide_chain(1, list(z))
    assert sum(1 for c in z6 if c) == 6
    assert all(abs(c) == 1 for c in z6 if c)
    assert sd.complex.is_cycle(1, z6)


def test_carrier_points_at_smallest_containing_simplex(cx):
    s2 = cx("s2")
    sd = barycentric_subdivide(s2)
    for d in range(sd.complex.dim + 1):
        for i, s in enumerate(sd.complex.simplices[d]):
            # the carrier of a flag is its top element
            assert sd.vertex_carrier[s[-1]] == sd.carrier[d][i]


def test_closed_star_of_vertex(cx):
    s1 = cx("s1")
    K = subcomplex_from_simplices(s1, [(0,)])
    star = closed_star_neighborhood(s1, K)
    lists = star.simplex_lists()
    assert lists[0] == [(0,), (1,), (2,)]
    assert lists[1] == [(0, 1), (0, 2)]


def test_closed_star_of_empty_is_empty(cx):
    s1 = cx("s1")
    K = subcomplex_from_simplices(s1, [])
    star = closed_star_neighborhood(s1, K)
    assert star.is_empty()


def test_star_in_twice_subdivided_torus_loses_top_cohomology(cx):
    from charrig.geometry import cohomology_vanishes_above
    from charrig.simplicial import subdivision_tower
    from charrig.cochains import homology as hom
    t2 = cx("t2")
    gen = hom(t2, 1).gen_cycles[0]
    tower = subdivision_tower(t2, 2)
    z = list(gen)
    for sd in tower:
        z = sd.subdivide_chain(1, z)
    Y = tower[1].complex
    simps = [Y.simplices[1][i] for i, c in enumerate(z) if c]
    K = subcomplex_from_simplices(Y, simps)
    star = closed_star_neighborhood(Y, K)
    ucx, _ = star.as_complex()
    assert cohomology_vanishes_above(ucx, 1)
    assert cohomology(ucx, 2, "Z").describe() == "0"


def test_induced_chain_map_identity_and_constant(cx):
    s1 = cx("s1")
    pt = cx("point")
    assert identity_map(s1).induced_chain_map(1) == zlin.identity(3)
    const = SimplicialMap(s1, pt, [0, 0, 0])
    mat = const.induced_chain_map(1)
    assert all(all(v == 0 for v in row) for row in mat)


def test_induced_chain_map_commutes_with_boundary(cx):
    s1 = cx("s1")
    sd = barycentric_subdivide(s1)
    phi = SimplicialMap(sd.complex, s1, [0, 2, 1, 1, 2, 0])
    for j in range(1, 2):
        lhs = zlin.mat_mul(s1.boundary_matrix(j), phi.induced_chain_map(j))
        rhs = zlin.mat_mul(phi.induced_chain_map(j - 1),
                           sd.complex.boundary_matrix(j))
        assert lhs == rhs


def test_degree_two_circle_map(cx):
    from charrig.cochains import cycle_basis
    s1 = cx("s1")
    sd = barycentric_subdivide(s1)
    phi = SimplicialMap(sd.complex, s1, [0, 2, 1, 1, 2, 0])
    z = cycle_basis(sd.complex, 1)[0]
    img = phi.push_chain(1, list(z))
    fund = cycle_basis(s1, 1)[0]
    ratios = {img[i] // fund[i] for i in range(3) if fund[i]}
    assert len(ratios) == 1 and abs(ratios.pop()) == 2


def test_simplicial_map_validation(cx):
    s1 = cx("s1")
    s2 = cx("s2")
    with pytest.raises(Exception):
        SimplicialMap(s2, s1, [0, 1, 2, 2])  # (0,1,2) has no image simplex


def test_subcomplex_as_complex_preserves_orientation(cx):
    t2 = cx("t2")
    K = subcomplex_from_simplices(t2, [t2.simplices[2][0]])
    sub, incl = K.as_complex()
    for j in range(sub.dim + 1):
        for i in range(sub.n_simplices(j)):
            entry = incl.chain_columns(j)[i]
            assert entry is not None and entry[1] == 1


def test_corpus_and_packaged_files_agree():
    import pathlib
    repo = pathlib.Path(__file__).resolve().parent.parent / "corpus"
    packaged = corpus.corpus_dir()
    for name in corpus.CORPUS_NAMES:
        a = (repo / f"{name}.json").read_bytes()
        b = (packaged / f"{name}.json").read_bytes()
        assert a == b, name
    for cyc in sorted((repo / "cycles").glob("*.json")):
        assert cyc.read_bytes() == (packaged / "cycles" / cyc.name).read_bytes()
