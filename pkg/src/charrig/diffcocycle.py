"""Differential cocycles (c, h, omega) and their classes.

A degree-k differential cocycle is an integral k-cocycle c, a rational
(k-1)-cochain h and a rational k-cochain omega with delta h = omega - c;
omega is then closed with integral periods. Two cocycles represent the
same class when omega agrees exactly and (c, h) differ by
(delta b, -b + delta s) for an integral b and rational s. The four
structure maps i1, i2, delta1, delta2 and pullback make the classes the
engine's model of the character functor.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import zlin
from .cochains import (
    RING_Q, RING_QMODZ, RING_Z,
    Cochain, CohomologyClass, QuotientForm,
    basis_cochain, coboundary, cohomology, cycle_basis, cocycle_basis,
    homology, is_integral_form, integral_form_generators, zero_cochain,
    _int_pairing, _snf_coboundary,
)
from .report import CheckResult, check
from .simplicial import Complex, MismatchError, SimplicialMap


class NotInImage(Exception):
    pass


@dataclass(frozen=True)
class DifferentialCocycle:
    c: Cochain
    h: Cochain
    omega: Cochain

    def __post_init__(self):
        c, h, omega = self.c, self.h, self.omega
        if not (c.cx is h.cx is omega.cx):
            raise MismatchError("components live on different complexes")
        if c.ring != RING_Z or h.ring != RING_Q or omega.ring != RING_Q:
            raise ValueError("expected rings (Z, Q, Q)")
        k = c.degree
        if h.degree != k - 1 or omega.degree != k:
            raise ValueError("component degrees must be (k, k-1, k)")
        if not coboundary(c).is_zero():
            raise ValueError("c is not a cocycle")
        if not (coboundary(h) - (omega - c.to_q())).is_zero():
            raise ValueError("delta h != omega - c")

    @property
    def cx(self) -> Complex:
        return self.c.cx

    @property
    def degree(self) -> int:
        return self.c.degree


class DiffClass:
    """A differential cohomology class, held by one representative."""

    __hash__ = None

    def __init__(self, rep: DifferentialCocycle):
        self.rep = rep

    @property
    def cx(self) -> Complex:
        return self.rep.cx

    @property
    def degree(self) -> int:
        return self.rep.degree

    def __add__(self, other: "DiffClass") -> "DiffClass":
        a, b = self.rep, other.rep
        return DiffClass(DifferentialCocycle(a.c + b.c, a.h + b.h, a.omega + b.omega))

    def __sub__(self, other: "DiffClass") -> "DiffClass":
        return self + (-other)

    def __neg__(self) -> "DiffClass":
        r = self.rep
        return DiffClass(DifferentialCocycle(-r.c, -r.h, -r.omega))

    def scale(self, n: int) -> "DiffClass":
        r = self.rep
        return DiffClass(DifferentialCocycle(r.c.scale(n), r.h.scale(n), r.omega.scale(n)))

    def equal(self, other: "DiffClass") -> bool:
        return class_equal(self, other)

    def __repr__(self):
        return f"DiffClass(deg {self.degree} on {self.cx.name})"

    def serialize(self):
        return {"c": self.rep.c.serialize(), "h": self.rep.h.serialize(),
                "omega": self.rep.omega.serialize()}


def make_class(c: Cochain, h: Cochain, omega: Cochain) -> DiffClass:
    return DiffClass(DifferentialCocycle(c, h, omega))


def zero_class(cx: Complex, k: int) -> DiffClass:
    return make_class(zero_cochain(cx, RING_Z, k),
                      zero_cochain(cx, RING_Q, k - 1),
                      zero_cochain(cx, RING_Q, k))


def coboundary_shift(x: DiffClass, b: Cochain, s: Cochain) -> DiffClass:
    """The representative changed by the coboundary of (b, s); same class."""
    r = x.rep
    return make_class(r.c + coboundary(b),
                      r.h - b.to_q() + coboundary(s),
                      r.omega)


def _decide_equivalence(x: DiffClass, y: DiffClass, want_witness: bool):
    """Decide class equality; with want_witness also reconstruct (b, s).
    Returns None when the classes differ, True for a bare positive answer,
    or the witness pair."""
    if x.cx is not y.cx or x.degree != y.degree:
        raise MismatchError("classes live on different complexes or degrees")
    cx = x.cx
    k = x.degree
    if not (x.rep.omega - y.rep.omega).is_zero():
        return None
    dc = x.rep.c - y.rep.c
    delta_prev = _snf_coboundary(cx, k - 1)
    b0 = zlin.solve_integer([], list(dc.values), fact=delta_prev)
    if b0 is None:
        return None
    v = (x.rep.h - y.rep.h) + Cochain(cx, RING_Q, k - 1, tuple(b0))
    K = cycle_basis(cx, k - 1)
    t = [Fraction(v.pair(z)) for z in K]
    if any(f.denominator != 1 for f in t):
        return None
    W = cocycle_basis(cx, k - 1)
    key = ("cycle_cocycle_pairing", k - 1)
    if key not in cx._cache:
        cx._cache[key] = [[zlin.vec_dot(w, z) for w in W] for z in K]
    M = cx._cache[key]
    a = zlin.solve_integer(M, [-f.numerator for f in t], ncols=len(W))
    if a is None:
        return None
    if not want_witness:
        return True
    n_prev = cx.n_simplices(k - 1) if k >= 1 else 0
    bvals = list(b0) if b0 else [0] * n_prev
    for coeff, w in zip(a, W):
        if coeff:
            for i in range(n_prev):
                bvals[i] += coeff * w[i]
    b = Cochain(cx, RING_Z, k - 1, tuple(bvals))
    target = (x.rep.h - y.rep.h) + b.to_q()
    if k >= 2:
        s_vals = zlin.solve_rational_with_fact(
            _snf_coboundary(cx, k - 2), list(target.values))
        if s_vals is None:
            raise AssertionError("witness reconstruction failed on an exact cochain")
    else:
        if not target.is_zero():
            raise AssertionError("degree-0 witness must vanish exactly")
        s_vals = []
    s = Cochain(cx, RING_Q, k - 2, tuple(s_vals))
    return b, s


def equivalence_witness(x: DiffClass, y: DiffClass):
    """(b, s) with c_x - c_y = delta b and h_x - h_y = -b + delta s,
    or None when the classes differ."""
    return _decide_equivalence(x, y, want_witness=True)


def class_equal(x: DiffClass, y: DiffClass) -> bool:
    """Decidable equality of differential cohomology classes."""
    return _decide_equivalence(x, y, want_witness=False) is not None


# ---------------------------------------------------------------------------
# the four structure maps

def i1(u: CohomologyClass) -> DiffClass:
    """Inclusion of H^{k-1}(Q/Z): flat classes with zero curvature."""
    if u.group.ring != RING_QMODZ:
        raise ValueError("i1 expects a Q/Z cohomology class")
    rep = u.group.cochain_for(u.coords)
    return i1_of_cocycle(rep)


def i1_of_cocycle(rep: Cochain) -> DiffClass:
    h = rep.to_q()
    dh = coboundary(h)
    if any(v.denominator != 1 for v in dh.values):
        raise ValueError("representative is not a cocycle mod 1")
    c = Cochain(rep.cx, RING_Z, dh.degree, tuple(-v.numerator for v in dh.values))
    return make_class(c, h, zero_cochain(rep.cx, RING_Q, dh.degree))


def i2(theta: QuotientForm) -> DiffClass:
    """Inclusion of forms modulo integral forms."""
    h = theta.rep
    return make_class(zero_cochain(h.cx, RING_Z, h.degree + 1), h, coboundary(h))


def delta1(x: DiffClass) -> Cochain:
    """The curvature component; an integral form, constant on classes."""
    return x.rep.omega


def delta2(x: DiffClass) -> CohomologyClass:
    """The characteristic class [c] in H^k(Z); constant on classes."""
    return cohomology(x.cx, x.degree, RING_Z).class_from_cocycle(x.rep.c)


def pullback(phi: SimplicialMap, x: DiffClass) -> DiffClass:
    """Componentwise cochain pullback along a simplicial map."""
    if x.cx is not phi.target:
        raise MismatchError("class does not live on the map's target")
    k = x.degree
    src = phi.source
    c = Cochain(src, RING_Z, k, tuple(phi.pull_values(k, x.rep.c.values)))
    h = Cochain(src, RING_Q, k - 1, tuple(phi.pull_values(k - 1, x.rep.h.values)))
    om = Cochain(src, RING_Q, k, tuple(phi.pull_values(k, x.rep.omega.values)))
    return make_class(c, h, om)


def lift_through_i2(x: DiffClass) -> QuotientForm:
    """The unique quotient form with i2(theta) = x; needs delta2(x) = 0."""
    cx = x.cx
    k = x.degree
    b = zlin.solve_integer([], list(x.rep.c.values), fact=_snf_coboundary(cx, k - 1))
    if b is None:
        raise NotInImage("delta2 obstruction: c is not an integral coboundary")
    theta = x.rep.h + Cochain(cx, RING_Q, k - 1, tuple(b))
    return QuotientForm(theta)


# ---------------------------------------------------------------------------
# constructive surjectivity

def preimage_of_class(cx: Complex, zclass: CohomologyClass) -> DiffClass:
    """A differential class with delta2 equal to the given integral class."""
    c = zclass.group.cochain_for(zclass.coords)
    return make_class(c, zero_cochain(cx, RING_Q, c.degree - 1), c.to_q())


def preimage_of_form(cx: Complex, omega: Cochain) -> DiffClass:
    """A differential class with delta1 equal to the given integral form."""
    if not is_integral_form(omega):
        raise ValueError("delta1 preimages exist only for integral forms")
    k = omega.degree
    hq = cohomology(cx, k, RING_Q)
    hz = cohomology(cx, k, RING_Z)
    evals = [Fraction(omega.pair(z)) for z in hq.free_cycles]
    a = zlin.solve_integer(_int_pairing(hq), [e.numerator for e in evals]) \
        if hq.rank else []
    if a is None:
        raise AssertionError("integral periods admit no integral class")
    c = zero_cochain(cx, RING_Z, k)
    for coeff, g in zip(a, hz.gen_cochains[:hz.rank]):
        if coeff:
            c = c + g.scale(coeff)
    diff = omega - c.to_q()
    if k >= 1:
        h_vals = zlin.solve_rational_with_fact(_snf_coboundary(cx, k - 1),
                                               list(diff.values))
        if h_vals is None:
            raise AssertionError("omega - c should be exact over Q")
    else:
        h_vals = []
    h = Cochain(cx, RING_Q, k - 1, tuple(h_vals))
    return make_class(c, h, omega)


# ---------------------------------------------------------------------------
# seeded samples and the diagram suite

def sample_classes(cx: Complex, k: int, rng, count: int = 6) -> list[DiffClass]:
    """A deterministic spanning-flavored family of degree-k classes:
    delta2 preimages of the integral generators, i1 and i2 images, and
    seeded combinations shifted by random coboundaries."""
    hz = cohomology(cx, k, RING_Z)
    hqz = cohomology(cx, k - 1, RING_QMODZ)
    out = [zero_class(cx, k)]
    for e in _unit_tuples(hz.fg.n_coords):
        out.append(preimage_of_class(cx, hz.make(e)))
    for i in range(hqz.n_coords):
        coords = [Fraction(0)] * hqz.n_coords
        if i < hqz.free_count:
            coords[i] = Fraction(1, 2 + i)
        else:
            coords[i] = Fraction(1, hqz.torsion[i - hqz.free_count])
        out.append(i1(hqz.make(coords)))
    n_prev = cx.n_simplices(k - 1) if k >= 1 else 0
    if n_prev:
        theta = basis_cochain(cx, RING_Q, k - 1, rng.randrange(n_prev)).scale(
            Fraction(1, rng.randrange(2, 5)))
        out.append(i2(QuotientForm(theta)))
    while len(out) < count + 1 and len(out) >= 2:
        x = out[rng.randrange(1, len(out))]
        y = out[rng.randrange(1, len(out))]
        z = x + y.scale(rng.randrange(-2, 3))
        if n_prev and rng.randrange(2):
            b_vals = tuple(rng.randrange(-2, 3) for _ in range(n_prev))
            z = coboundary_shift(z, Cochain(cx, RING_Z, k - 1, b_vals),
                                 zero_cochain(cx, RING_Q, k - 2))
        out.append(z)
    return out[:count + 1]


def _unit_tuples(n):
    for t in range(n):
        e = [0] * n
        e[t] = 1
        yield tuple(e)


def sample_quotient_forms(cx: Complex, k: int, rng, count: int = 3):
    """Quotient forms in degree k-1: scaled basis cochains and a closed one."""
    n_prev = cx.n_simplices(k - 1) if k >= 1 else 0
    out = [QuotientForm(zero_cochain(cx, RING_Q, k - 1))]
    for _ in range(count):
        if not n_prev:
            break
        t = rng.randrange(n_prev)
        out.append(QuotientForm(basis_cochain(cx, RING_Q, k - 1, t).scale(
            Fraction(1, rng.randrange(2, 6)))))
    hq = cohomology(cx, k - 1, RING_Q)
    if hq.rank:
        out.append(QuotientForm(hq.cochain_for(
            [Fraction(1, 3)] + [Fraction(0)] * (hq.rank - 1))))
    return out


def sample_qmodz_classes(cx: Complex, j: int, rng, count: int = 3):
    g = cohomology(cx, j, RING_QMODZ)
    out = [g.zero_class()]
    for i in range(g.free_count):
        coords = [Fraction(0)] * g.n_coords
        coords[i] = Fraction(1, 2)
        out.append(g.make(coords))
        coords2 = list(coords)
        coords2[i] = Fraction(rng.randrange(1, 5), 5)
        out.append(g.make(coords2))
    for t, d in enumerate(g.torsion):
        coords = [Fraction(0)] * g.n_coords
        coords[g.free_count + t] = Fraction(1, d)
        out.append(g.make(coords))
    return out


def verify_diagram(cx: Complex, k: int, rng, maps=None) -> list[CheckResult]:
    """Exact diagonal sequences and the four commuting faces at degree k,
    checked constructively on generators and seeded samples."""
    from .cochains import alpha, beta, bockstein, d_of_quotient, \
        r_to_rational, s_class_of_form
    results = []
    hz = cohomology(cx, k, RING_Z)
    hqz_prev = cohomology(cx, k - 1, RING_QMODZ)
    hq_prev = cohomology(cx, k - 1, RING_Q)

    # diagonal 1: 0 -> forms/integral -> G^k -> H^k(Z) -> 0
    probs, wit = [], []
    thetas = sample_quotient_forms(cx, k, rng)
    for idx, th in enumerate(thetas):
        lifted = lift_through_i2(i2(th))
        if not (lifted == th):
            probs.append(("i2 image does not lift back to its argument", idx))
        if class_equal(i2(th), zero_class(cx, k)) != th.is_zero():
            probs.append(("i2 injectivity violated", idx))
    for x in sample_classes(cx, k, rng, count=4):
        if delta2(x).is_zero():
            th = lift_through_i2(x)
            if not class_equal(i2(th), x):
                probs.append(("kernel element outside the image of i2",))
            else:
                wit.append({"lift": "ok"})
        else:
            try:
                lift_through_i2(x)
                probs.append(("lift succeeded despite delta2 obstruction",))
            except NotInImage:
                wit.append({"obstructed": list(delta2(x).coords)})
    for e in _unit_tuples(hz.fg.n_coords):
        pre = preimage_of_class(cx, hz.make(e))
        if delta2(pre) != hz.make(e):
            probs.append(("delta2 surjectivity preimage failed", e))
    results.append(check("diagonal.i2_delta2_exact", not probs,
                         f"{len(thetas)} forms, {hz.fg.n_coords} classes",
                         {"witnesses": wit[:4], "problems": probs}))

    # diagonal 2: 0 -> H^{k-1}(Q/Z) -> G^k -> integral forms -> 0
    probs, wit = [], []
    for u in sample_qmodz_classes(cx, k - 1, rng):
        x = i1(u)
        if not delta1(x).is_zero():
            probs.append(("delta1 of an i1 image is nonzero",))
        if class_equal(x, zero_class(cx, k)) != u.is_zero():
            probs.append(("i1 injectivity violated", list(map(str, u.coords))))
    for x in sample_classes(cx, k, rng, count=4):
        if delta1(x).is_zero():
            u = hqz_prev.class_from_cocycle(x.rep.h.mod1())
            if not class_equal(i1(u), x):
                probs.append(("flat class outside the image of i1",))
            else:
                wit.append({"flat_preimage": "ok"})
    forms = integral_form_generators(cx, k)
    n_prev = cx.n_simplices(k - 1) if k >= 1 else 0
    if n_prev:
        forms = forms + [coboundary(basis_cochain(cx, RING_Q, k - 1, 0)
                                    .scale(Fraction(1, 2)))]
    for idx, om in enumerate(forms):
        pre = preimage_of_form(cx, om)
        if delta1(pre).values != om.to_q().values:
            probs.append(("delta1 surjectivity preimage failed", idx))
    results.append(check("diagonal.i1_delta1_exact", not probs,
                         f"{len(forms)} integral forms",
                         {"witnesses": wit[:4], "problems": probs}))

    # face: i1 . alpha = i2 . beta on H^{k-1}(Q)
    probs = []
    rats = [hq_prev.zero_class()]
    for i in range(hq_prev.rank):
        coords = [Fraction(0)] * hq_prev.rank
        coords[i] = Fraction(rng.randrange(1, 6), rng.randrange(2, 6))
        rats.append(hq_prev.make(coords))
    for idx, xq in enumerate(rats):
        if not class_equal(i1(alpha(xq)), i2(beta(xq))):
            probs.append(("i1(alpha(x)) != i2(beta(x))", idx))
    results.append(check("face.i1_alpha_eq_i2_beta", not probs,
                         f"{len(rats)} rational classes", {"problems": probs}))

    # face: delta1 . i2 = d on quotient forms
    probs = []
    for idx, th in enumerate(thetas):
        if delta1(i2(th)).values != d_of_quotient(th).values:
            probs.append(("delta1(i2(theta)) != d theta", idx))
    results.append(check("face.delta1_i2_eq_d", not probs,
                         f"{len(thetas)} forms", {"problems": probs}))

    # face: r . delta2 = s . delta1 on sampled classes
    probs = []
    for idx, x in enumerate(sample_classes(cx, k, rng, count=5)):
        if r_to_rational(delta2(x)) != s_class_of_form(delta1(x)):
            probs.append(("r(delta2) != s(delta1)", idx))
    results.append(check("face.r_delta2_eq_s_delta1", not probs,
                         "sampled classes", {"problems": probs}))

    # face: delta2 . i1 = -B on H^{k-1}(Q/Z)
    probs = []
    for idx, u in enumerate(sample_qmodz_classes(cx, k - 1, rng)):
        if delta2(i1(u)) != -bockstein(u):
            probs.append(("delta2(i1(u)) != -B(u)", idx))
    results.append(check("face.delta2_i1_eq_minus_bockstein", not probs,
                         "includes torsion duals", {"problems": probs}))

    # naturality of the four transformations under the supplied maps
    if maps:
        probs = []
        for mi, phi in enumerate(maps):
            if phi.target is not cx:
                continue
            src = phi.source
            for u in sample_qmodz_classes(cx, k - 1, rng, count=2):
                lhs = pullback(phi, i1(u))
                rhs = i1(pullback_qmodz(phi, u))
                if not class_equal(lhs, rhs):
                    probs.append(("i1 naturality", mi))
            for th in sample_quotient_forms(cx, k, rng, count=2):
                lhs = pullback(phi, i2(th))
                rhs = i2(QuotientForm(Cochain(
                    src, RING_Q, k - 1,
                    tuple(phi.pull_values(k - 1, th.rep.values)))))
                if not class_equal(lhs, rhs):
                    probs.append(("i2 naturality", mi))
            for x in sample_classes(cx, k, rng, count=3):
                y = pullback(phi, x)
                if delta1(y).values != tuple(phi.pull_values(k, delta1(x).values)):
                    probs.append(("delta1 naturality", mi))
                if delta2(y) != pullback_integral(phi, delta2(x)):
                    probs.append(("delta2 naturality", mi))
        results.append(check("naturality.transformations_commute", not probs,
                             f"{len(maps)} maps", {"problems": probs}))
    return results


def pullback_qmodz(phi: SimplicialMap, u: CohomologyClass) -> CohomologyClass:
    """phi^* on H^j(Q/Z) through a representative cocycle."""
    rep = u.group.cochain_for(u.coords)
    pulled = Cochain(phi.source, RING_QMODZ, rep.degree,
                     tuple(phi.pull_values(rep.degree, rep.values)))
    return cohomology(phi.source, rep.degree, RING_QMODZ).class_from_cocycle(pulled)


def pullback_integral(phi: SimplicialMap, c: CohomologyClass) -> CohomologyClass:
    rep = c.group.cochain_for(c.coords)
    pulled = Cochain(phi.source, RING_Z, rep.degree,
                     tuple(phi.pull_values(rep.degree, rep.values)))
    return cohomology(phi.source, rep.degree, RING_Z).class_from_cocycle(pulled)


def pullback_rational(phi: SimplicialMap, x: CohomologyClass) -> CohomologyClass:
    rep = x.group.cochain_for(x.coords)
    pulled = Cochain(phi.source, RING_Q, rep.degree,
                     tuple(phi.pull_values(rep.degree, rep.values)))
    return cohomology(phi.source, rep.degree, RING_Q).class_from_cocycle(pulled)
