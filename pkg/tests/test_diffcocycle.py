"""Differential cocycle classes: equality, structure maps, the diagram."""
import random
from fractions import Fraction

import pytest

from charrig.cochains import (
    Cochain, QuotientForm, basis_cochain, bockstein, coboundary, cohomology,
    cycle_basis, is_integral_form, zero_cochain,
)
from charrig.diffcocycle import (
    DifferentialCocycle, NotInImage, class_equal, coboundary_shift, delta1,
    delta2, equivalence_witness, i1, i2, lift_through_i2, make_class,
    preimage_of_class, preimage_of_form, pullback, sample_classes,
    verify_diagram, zero_class,
)
from charrig.simplicial import (
    SimplicialMap, barycentric_subdivide, closed_star_neighborhood,
    subcomplex_from_simplices,
)

DEGREES = [("s1", 1), ("s1", 2), ("s2", 1), ("s2", 2), ("rp2", 1),
           ("rp2", 2), ("t2", 1), ("t2", 2), ("klein", 2), ("moore_z3", 2)]


def test_cocycle_invariants_enforced(cx):
    s1 = cx("s1")
    # delta h = 0 but omega - c != 0: construction must refuse
    with pytest.raises(ValueError):
        DifferentialCocycle(
            basis_cochain(s1, "Z", 1, 0),
            zero_cochain(s1, "Q", 0),
            zero_cochain(s1, "Q", 1))


def test_class_equal_under_coboundary_shifts(cx):
    rng = random.Random(0)
    for name, k in DEGREES:
        X = cx(name)
        for x in sample_classes(X, k, random.Random(1), count=3):
            n_prev = X.n_simplices(k - 1)
            b = Cochain(X, "Z", k - 1,
                        tuple(rng.randrange(-2, 3) for _ in range(n_prev)))
            n_pp = X.n_simplices(k - 2) if k >= 2 else 0
            s = Cochain(X, "Q", k - 2,
                        tuple(Fraction(rng.randrange(-2, 3), 3)
                              for _ in range(n_pp)))
            y = coboundary_shift(x, b, s)
            w = equivalence_witness(x, y)
            assert w is not None
            wb, ws = w
            # the witness satisfies the defining identities exactly
            assert (x.rep.c - y.rep.c).values == coboundary(wb).values
            assert (x.rep.h - y.rep.h).values == \
                (coboundary(ws) - wb.to_q()).values


def test_distinct_holonomies_are_distinct_classes(cx):
    s1 = cx("s1")

    def hol(q):
        h = Cochain(s1, "Q", 0, (q, q, q))
        return make_class(zero_cochain(s1, "Z", 1), h,
                          zero_cochain(s1, "Q", 1))

    assert not class_equal(hol(Fraction(1, 3)), hol(Fraction(1, 2)))
    assert class_equal(hol(Fraction(1, 3)), hol(Fraction(1, 3)))
    assert class_equal(hol(Fraction(1, 3)), hol(Fraction(4, 3)))  # differ by 1


def test_i2_kills_exactly_integral_forms(cx):
    s1 = cx("s1")
    integral = QuotientForm(Cochain(s1, "Q", 0, (2, 2, 2)))
    assert class_equal(i2(integral), zero_class(s1, 1))
    frac = QuotientForm(Cochain(s1, "Q", 0, (Fraction(1, 3),) * 3))
    assert not class_equal(i2(frac), zero_class(s1, 1))


def test_delta1_of_i2_is_d(cx):
    t2 = cx("t2")
    th = QuotientForm(basis_cochain(t2, "Q", 0, 3).scale(Fraction(1, 4)))
    assert delta1(i2(th)).values == coboundary(th.rep).values


def test_i1_image_is_flat_and_matches_minus_bockstein(cx):
    rp2 = cx("rp2")
    hqz = cohomology(rp2, 1, "QmodZ")
    u = hqz.make([Fraction(1, 2)])
    x = i1(u)
    assert delta1(x).is_zero()
    assert delta2(x) == -bockstein(u)
    assert not delta2(x).is_zero()


def test_lift_through_i2_roundtrip_and_obstruction(cx):
    s2 = cx("s2")
    th = QuotientForm(basis_cochain(s2, "Q", 0, 1).scale(Fraction(1, 5)))
    back = lift_through_i2(i2(th))
    assert back == th
    rp2 = cx("rp2")
    tors = cohomology(rp2, 2, "Z").make((1,))
    with pytest.raises(NotInImage):
        lift_through_i2(preimage_of_class(rp2, tors))


def test_delta2_surjectivity_preimages(cx):
    for name in ("s1", "rp2", "t2", "klein", "moore_z3"):
        X = cx(name)
        for k in range(1, X.dim + 1):
            hz = cohomology(X, k, "Z")
            for t in range(hz.fg.n_coords):
                e = [0] * hz.fg.n_coords
                e[t] = 1
                cls = hz.make(tuple(e))
                assert delta2(preimage_of_class(X, cls)) == cls


def test_delta1_surjectivity_preimages(cx):
    s1 = cx("s1")
    z = cycle_basis(s1, 1)[0]
    # synthesized integral forms with periods 0, +-1, +-2
    for period in (0, 1, -1, 2, -2):
        om = Cochain(s1, "Q", 1, tuple(Fraction(period * c, 3) for c in z))
        assert is_integral_form(om)
        x = preimage_of_form(s1, om)
        assert delta1(x).values == om.values


def test_pullback_functorial(cx):
    s1 = cx("s1")
    sd = barycentric_subdivide(s1)
    lv = sd.last_vertex
    x = sample_classes(s1, 1, random.Random(2), count=2)[1]
    # identity pullback
    from charrig.simplicial import identity_map
    assert class_equal(pullback(identity_map(s1), x), x)
    # composition: pulling back through sd twice equals the composite
    sd2 = barycentric_subdivide(sd.complex)
    composite = lv.compose(sd2.last_vertex)
    a = pullback(sd2.last_vertex, pullback(lv, x))
    b = pullback(composite, x)
    assert class_equal(a, b)


def test_pullback_to_point_kills_positive_degree(cx):
    s1 = cx("s1")
    pt = cx("point")
    const = SimplicialMap(s1, pt, [0, 0, 0])
    x = sample_classes(pt, 1, random.Random(0), count=2)[-1]
    y = pullback(const, x)
    assert y.degree == 1
    # positive-degree classes on the point are i1 images of H^0(Q/Z);
    # pulled back they stay flat
    assert delta1(y).is_zero()


def test_restriction_to_good_neighborhood_lifts(cx):
    """On a star neighborhood (cone), delta2 dies and the lift exists."""
    t2 = cx("t2")
    K = subcomplex_from_simplices(t2, [(0,)])
    star = closed_star_neighborhood(t2, K)
    sub, incl = star.as_complex()
    for x in sample_classes(t2, 2, random.Random(3), count=3):
        y = pullback(incl, x)
        th = lift_through_i2(y)  # H^2(star) = 0, never obstructed
        assert class_equal(i2(th), y)


def test_verify_diagram_full_corpus(corpus_complex):
    X = corpus_complex
    for k in range(1, X.dim + 2):
        results = verify_diagram(X, k, random.Random(0))
        bad = [(r.name, r.witness) for r in results if r.status != "pass"]
        assert not bad, (X.name, k, bad)


def test_verify_diagram_naturality(cx):
    rp2 = cx("rp2")
    maps = [barycentric_subdivide(rp2).last_vertex]
    K = subcomplex_from_simplices(rp2, [(0,)])
    _, incl = closed_star_neighborhood(rp2, K).as_complex()
    maps.append(incl)
    for k in (1, 2):
        results = verify_diagram(rp2, k, random.Random(0), maps=maps)
        names = {r.name for r in results}
        assert "naturality.transformations_commute" in names
        assert all(r.status == "pass" for r in results)
