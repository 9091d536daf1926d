"""Cycle surgery: good neighborhoods, pseudomanifolds, splitting, bounding."""
import itertools
import random

import pytest

from charrig import corpus
from charrig.cochains import cohomology, cycle_basis, homology
from charrig.geometry import (
    BoundResult, DimensionError, GeometryBudgetExceeded, NotNullHomologous,
    Pseudomanifold, bound_in_good_neighborhood, cohomology_vanishes_above,
    good_neighborhood, good_neighborhood_of_cycle, is_pseudomanifold,
    normalize_cycle, resolve_cycle, split_cycle, verify_normalization,
)
from charrig.simplicial import (
    complex_from_maximal, identity_map, subcomplex_from_simplices,
)


def test_good_neighborhood_of_vertex_is_cone(corpus_complex):
    X = corpus_complex
    K = subcomplex_from_simplices(X, [X.simplices[0][0]])
    nb = good_neighborhood(X, K, 0)
    assert nb.level == 0  # the closed star of a vertex is already a cone
    assert cohomology_vanishes_above(nb.complex, 0)


def test_good_neighborhood_of_torus_cycle_is_annular(cx):
    t2 = cx("t2")
    gen = list(homology(t2, 1).gen_cycles[0])
    nb = good_neighborhood_of_cycle(t2, 1, gen, 1)
    assert cohomology(nb.complex, 2, "Z").describe() == "0"
    assert cohomology_vanishes_above(nb.complex, 1)


def test_good_neighborhood_of_rp2_torsion_cycle(cx):
    rp2 = cx("rp2")
    tors = list(homology(rp2, 1).gen_cycles[0])
    nb = good_neighborhood_of_cycle(rp2, 1, tors, 1)
    assert cohomology(nb.complex, 2, "Z").describe() == "0"


def test_good_neighborhood_budget_error(cx):
    """A neighborhood of everything can never lose the top cohomology."""
    s1 = cx("s1")
    K = subcomplex_from_simplices(s1, s1.simplices[1])
    with pytest.raises(GeometryBudgetExceeded):
        good_neighborhood(s1, K, 0, max_subdiv=1)


def test_is_pseudomanifold_examples(cx):
    s1 = cx("s1")
    z = cycle_basis(s1, 1)[0]
    pm, b2 = resolve_cycle(s1, 1, list(z))
    assert is_pseudomanifold(pm)
    assert all(c == 0 for c in b2)
    # same induced orientation on a shared edge: boundary cells break it
    strip = complex_from_maximal("strip", [(0, 1, 2), (1, 2, 3)])
    bad = Pseudomanifold(strip, identity_map(strip), (1, -1))
    assert not is_pseudomanifold(bad)
    # disjoint circles: the condition is local
    two = complex_from_maximal(
        "two", [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    fund = []
    for s in two.simplices[1]:
        fund.append(1 if s in ((0, 1), (1, 2), (3, 4), (4, 5)) else -1)
    pm2 = Pseudomanifold(two, identity_map(two), tuple(fund))
    assert is_pseudomanifold(pm2)


def test_resolve_figure_eight(cx):
    fig8 = complex_from_maximal(
        "fig8", [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    z = [0] * fig8.n_simplices(1)
    for e, v in [((0, 1), 1), ((1, 2), 1), ((0, 2), -1),
                 ((2, 3), 1), ((3, 4), 1), ((2, 4), -1)]:
        z[fig8.simplex_index(e)] = v
    pm, _ = resolve_cycle(fig8, 1, z)
    assert is_pseudomanifold(pm)
    # abstract result is two disjoint circles: the shared vertex doubled
    assert pm.complex.n_simplices(0) == 6
    assert pm.ambient_cycle() == z


def test_resolve_wedge_of_spheres_in_four_dim_ambient():
    """Two tetrahedral 2-spheres sharing an edge inside the 4-sphere."""
    d5 = complex_from_maximal(
        "bd5", [t for t in itertools.combinations(range(6), 5)])
    assert d5.dim == 4
    wedge = [0] * d5.n_simplices(2)

    def add_sphere(tetra, sign):
        t = sorted(tetra)
        for i in range(4):
            face = tuple(t[:i] + t[i + 1:])
            wedge[d5.simplex_index(face)] += sign * (-1) ** i

    add_sphere((0, 1, 2, 3), 1)
    add_sphere((2, 3, 4, 5), 1)
    assert d5.is_cycle(2, wedge)
    pm, _ = resolve_cycle(d5, 2, wedge)
    assert is_pseudomanifold(pm)
    # the shared edge is separated into one copy per sphere
    assert pm.complex.n_simplices(0) == 8
    assert pm.complex.n_simplices(2) == 8
    assert pm.ambient_cycle() == wedge
    # each 1-cell has exactly two cofaces (already checked inside
    # is_pseudomanifold, restated here as the wedge's point)
    counts = [0] * pm.complex.n_simplices(1)
    for col in pm.complex.faces_with_signs(2):
        for r, _ in col:
            counts[r] += 1
    assert set(counts) == {2}


def test_split_identity_on_unit_coefficients(cx):
    t2 = cx("t2")
    gen = list(homology(t2, 1).gen_cycles[0])
    sr = split_cycle(t2, 1, gen)
    assert sr.level == 0 and sr.cycle == gen
    assert all(c == 0 for c in sr.witness)


def test_split_doubled_circle_in_torus(cx):
    t2 = cx("t2")
    gen = list(homology(t2, 1).gen_cycles[0])
    doubled = [2 * c for c in gen]
    sr = split_cycle(t2, 1, doubled)
    assert sr.level == 2
    assert all(abs(c) <= 1 for c in sr.cycle)
    db = sr.complex.boundary_of_chain(2, sr.witness)
    assert all(t == b + c for t, b, c in zip(sr.transported, db, sr.cycle))
    # the split pieces are two parallel circles: a valid pseudomanifold
    pm, _ = resolve_cycle(sr.complex, 1, sr.cycle)
    assert is_pseudomanifold(pm)


def test_split_zero_cycle_multiplicity_three(cx):
    s2 = cx("s2")
    z = [0] * 4
    z[0], z[1] = 3, -3
    sr = split_cycle(s2, 0, z)
    assert all(abs(c) <= 1 for c in sr.cycle)
    assert sum(1 for c in sr.cycle if c == 1) == 3
    assert sum(1 for c in sr.cycle if c == -1) == 3
    results = verify_normalization(s2, 0, z)
    assert all(r.status == "pass" for r in results)


def test_split_needs_room(cx):
    s1 = cx("s1")
    z = [2 * c for c in cycle_basis(s1, 1)[0]]
    with pytest.raises(DimensionError):
        split_cycle(s1, 1, z)  # 1-cycles in a 1-complex have no room


def test_normalization_suite_on_corpus_cycles(corpus_complex):
    X = corpus_complex
    rng = random.Random(0)
    for d in range(min(2, X.dim)):
        hom_d = homology(X, d)
        cycles = [list(g) for g in hom_d.gen_cycles]
        if hom_d.gen_cycles:
            cycles.append([2 * c for c in hom_d.gen_cycles[0]])
        if X.n_simplices(d + 1):
            vec = [0] * X.n_simplices(d + 1)
            vec[rng.randrange(X.n_simplices(d + 1))] = 1
            cycles.append(X.boundary_of_chain(d + 1, vec))
        for z in cycles:
            if all(c == 0 for c in z):
                continue
            results = verify_normalization(X, d, z, rng)
            bad = [(r.name, r.detail) for r in results if r.status != "pass"]
            assert not bad, (X.name, d, bad)


def test_equator_bounds_in_good_neighborhood(cx):
    s2 = cx("s2")
    eq = [0] * s2.n_simplices(1)
    eq[s2.simplex_index((0, 1))] = 1
    eq[s2.simplex_index((1, 2))] = 1
    eq[s2.simplex_index((0, 2))] = -1
    sr, pm = normalize_cycle(s2, 1, eq)
    out = bound_in_good_neighborhood(pm, s2, sr.tower)
    assert isinstance(out, BoundResult)
    nb = out.neighborhood
    assert cohomology_vanishes_above(nb.complex, 1)
    db = nb.complex.boundary_of_chain(2, out.chain)
    zP = pm.ambient_cycle()
    for sd in nb.tower:
        zP = sd.subdivide_chain(1, zP)
    assert db == nb.chain_to_neighborhood(1, zP)
    # the collapse certificate deflates the band to a graph
    assert out.collapsed_dim <= 1


def test_torus_generator_not_null_homologous(cx):
    t2 = cx("t2")
    gen = list(homology(t2, 1).gen_cycles[0])
    sr, pm = normalize_cycle(t2, 1, gen)
    out = bound_in_good_neighborhood(pm, t2, sr.tower)
    assert isinstance(out, NotNullHomologous)
    assert tuple(out.coords) in ((1, 0), (0, 1), (-1, 0), (0, -1))


def test_rp2_torsion_not_null_homologous_over_z(cx):
    rp2 = cx("rp2")
    tors = list(homology(rp2, 1).gen_cycles[0])
    sr, pm = normalize_cycle(rp2, 1, tors)
    out = bound_in_good_neighborhood(pm, rp2, sr.tower)
    assert isinstance(out, NotNullHomologous)
    assert out.group == "Z/2" and out.coords == (1,)


def test_boundary_cycle_bounds_locally(cx):
    """The boundary of one triangle bounds with a small neighborhood."""
    rp2 = cx("rp2")
    vec = [0] * rp2.n_simplices(2)
    vec[0] = 1
    z = rp2.boundary_of_chain(2, vec)
    sr, pm = normalize_cycle(rp2, 1, z)
    out = bound_in_good_neighborhood(pm, rp2, sr.tower)
    assert isinstance(out, BoundResult)


def test_neighborhoods_always_pass_direct_vanishing(cx):
    """Never trusted from theory: re-verify every emitted neighborhood."""
    for name, d in [("t2", 1), ("rp2", 1), ("s2", 1), ("klein", 1)]:
        X = cx(name)
        for g in homology(X, d).gen_cycles:
            nb = good_neighborhood_of_cycle(X, d, list(g), d)
            assert cohomology_vanishes_above(nb.complex, d)
            for j in range(d + 1, nb.complex.dim + 1):
                assert cohomology(nb.complex, j, "Z").describe() == "0"
