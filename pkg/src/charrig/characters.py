"""The hom-on-cycles model of differential characters and the equivalence
with the differential-cocycle model, computed two independent ways.

A degree-k character is a Q/Z-valued function on the (k-1)-cycles together
with a compatible integral form: f(boundary a) = omega(a) mod 1 for every
k-chain a. The equivalence takes a cocycle class to the character read off
its h component (phi_direct), and back by extending f over all chains with
a divisibility lift (phi_inverse). An independent evaluation (phi_good)
restricts the class to a good neighborhood of the cycle, where it must be
an i2 image, and integrates the resulting form.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from . import zlin
from .cochains import (
    RING_Q, RING_QMODZ, RING_Z,
    Cochain, CohomologyClass, QuotientForm,
    coboundary, cohomology, cycle_basis, homology, is_integral_form,
    zero_cochain, _snf_boundary,
)
from .diffcocycle import (
    DiffClass, class_equal, delta1, delta2, i1 as dc_i1, i2 as dc_i2,
    lift_through_i2, make_class, pullback, sample_classes, zero_class,
)
from .geometry import GoodNeighborhood, good_neighborhood_of_cycle, normalize_cycle
from .report import CheckResult, check
from .simplicial import Complex, MismatchError, SimplicialMap


class NotACycle(Exception):
    pass


def _mod1(x) -> Fraction:
    x = Fraction(x)
    return x - floor(x)


@dataclass(frozen=True)
class Character:
    """Q/Z values on the cycle basis of Z_{k-1} plus a compatible form."""
    cx: Complex
    degree: int
    f_values: tuple       # Fractions in [0,1), one per cycle-basis element
    omega: Cochain        # rational degree-k cochain, in the integral forms

    def __post_init__(self):
        expected = len(cycle_basis(self.cx, self.degree - 1))
        if len(self.f_values) != expected:
            raise ValueError(
                f"degree-{self.degree} character needs {expected} values "
                f"on the cycle basis, got {len(self.f_values)}")
        object.__setattr__(self, "f_values",
                           tuple(_mod1(v) for v in self.f_values))

    def evaluate(self, z) -> Fraction:
        """Value on an integer (k-1)-cycle, by linearity over the basis."""
        k = self.degree
        if not self.cx.is_cycle(k - 1, z):
            raise NotACycle("chain has nonzero boundary")
        fact = _snf_boundary(self.cx, k - 1)
        coords = [zlin.vec_dot(fact.Vinv[t], z)
                  for t in range(fact.rank, fact.shape[1])]
        return _mod1(sum(c * f for c, f in zip(coords, self.f_values)))

    def __eq__(self, other):
        if not isinstance(other, Character):
            return NotImplemented
        return (self.cx is other.cx and self.degree == other.degree
                and self.f_values == other.f_values
                and self.omega.values == other.omega.values)

    __hash__ = None

    def __add__(self, other):
        return Character(self.cx, self.degree,
                         tuple(a + b for a, b in zip(self.f_values, other.f_values)),
                         self.omega + other.omega)

    def __neg__(self):
        return Character(self.cx, self.degree,
                         tuple(-v for v in self.f_values), -self.omega)

    def serialize(self):
        return {"degree": self.degree,
                "f": [[i, f"{v.numerator}/{v.denominator}"]
                      for i, v in enumerate(self.f_values) if v],
                "omega": self.omega.serialize()}


def is_character(cx: Complex, k: int, f_values, omega: Cochain) -> bool:
    """Compatibility f(boundary e) = omega(e) mod 1 on every basis k-chain,
    with omega closed of integral periods."""
    if omega.degree != k or omega.ring not in (RING_Z, RING_Q):
        return False
    if not is_integral_form(omega):
        return False
    K = cycle_basis(cx, k - 1)
    if len(f_values) != len(K):
        return False
    ch = Character(cx, k, tuple(f_values), omega.to_q())
    for e in range(cx.n_simplices(k)):
        vec = [0] * cx.n_simplices(k)
        vec[e] = 1
        bnd = cx.boundary_of_chain(k, vec)
        if ch.evaluate(bnd) != _mod1(omega.values[e]):
            return False
    return True


def make_character(cx: Complex, k: int, f_values, omega: Cochain) -> Character:
    if not is_character(cx, k, f_values, omega):
        raise ValueError("data does not satisfy the character compatibility")
    return Character(cx, k, tuple(f_values), omega.to_q())


def zero_character(cx: Complex, k: int) -> Character:
    return Character(cx, k, (Fraction(0),) * len(cycle_basis(cx, k - 1)),
                     zero_cochain(cx, RING_Q, k))


# ---------------------------------------------------------------------------
# the divisibility lift T and the characteristic class

def lift_T(ch: Character, strategy: str = "floor") -> Cochain:
    """A rational (k-1)-cochain whose values on cycles agree with f mod 1.

    Built on the Smith-adapted basis of the chain group: zero on the
    complement of the cycles, a lift of f on the cycle basis.
    """
    cx = ch.cx
    k = ch.degree
    fact = _snf_boundary(cx, k - 1)
    n = cx.n_simplices(k - 1)
    if strategy == "floor":
        lifts = list(ch.f_values)
    elif strategy == "centered":
        lifts = [v if v <= Fraction(1, 2) else v - 1 for v in ch.f_values]
    else:
        raise ValueError(f"unknown lift strategy {strategy!r}")
    vals = [Fraction(0)] * n
    for t in range(fact.rank, fact.shape[1]):
        g = lifts[t - fact.rank]
        if g:
            row = fact.Vinv[t]
            for i in range(n):
                vals[i] += g * row[i]
    return Cochain(cx, RING_Q, k - 1, tuple(vals))


def delta2_via_lift(ch: Character, strategy: str = "floor") -> CohomologyClass:
    """Characteristic class [omega - delta T] in H^k(Z)."""
    T = lift_T(ch, strategy)
    diff = ch.omega - coboundary(T)
    if any(v.denominator != 1 for v in diff.values):
        raise AssertionError("omega - delta T must be integral for a character")
    c = Cochain(ch.cx, RING_Z, ch.degree, tuple(v.numerator for v in diff.values))
    return cohomology(ch.cx, ch.degree, RING_Z).class_from_cocycle(c)


# ---------------------------------------------------------------------------
# the equivalence, three ways

def phi_direct(x: DiffClass) -> Character:
    """Character read off the h component on the cycle basis."""
    k = x.degree
    K = cycle_basis(x.cx, k - 1)
    f = tuple(_mod1(x.rep.h.pair(z)) for z in K)
    return Character(x.cx, k, f, x.rep.omega)


def phi_inverse(ch: Character, strategy: str = "floor") -> DiffClass:
    """Differential class with phi_direct equal to the given character."""
    T = lift_T(ch, strategy)
    diff = ch.omega - coboundary(T)
    c = Cochain(ch.cx, RING_Z, ch.degree, tuple(v.numerator for v in diff.values))
    return make_class(c, T, ch.omega)


def phi_good(x: DiffClass, z, max_subdiv: int = 2) -> Fraction:
    """Evaluate the class on a cycle through a good neighborhood of its
    support: restrict, lift through i2, integrate the quotient form."""
    cx = x.cx
    k = x.degree
    if not cx.is_cycle(k - 1, z):
        raise NotACycle("chain has nonzero boundary")
    if all(c == 0 for c in z):
        return Fraction(0)
    nb = good_neighborhood_of_cycle(cx, k - 1, z, k - 1, max_subdiv)
    theta = _theta_on_neighborhood(x, nb)
    z_amb = nb.transport_chain(k - 1, z)
    z_local = nb.chain_to_neighborhood(k - 1, z_amb)
    return _mod1(theta.rep.pair(z_local))


def _theta_on_neighborhood(x: DiffClass, nb: GoodNeighborhood) -> QuotientForm:
    """Restrict a class to a good neighborhood and lift it through i2
    (possible because H^k vanishes there)."""
    y = x
    for sd in nb.tower:
        y = pullback(sd.last_vertex, y)
    y = pullback(nb.inclusion, y)
    return lift_through_i2(y)


def evaluate_via_normalization(x: DiffClass, z) -> Fraction:
    """Evaluate on a cycle through its pseudomanifold normalization:
    z = boundary(b) + P gives the value omega(b) + f(P)."""
    cx = x.cx
    k = x.degree
    sr, pm = normalize_cycle(cx, k - 1, z)
    omega_vals = delta1(x).values
    for sd in sr.tower:
        omega_vals = sd.transport_values(k, omega_vals)
    omega_up = Cochain(sr.complex, RING_Q, k, tuple(omega_vals))
    part_form = omega_up.pair(sr.witness)
    zP = pm.ambient_cycle()
    zP_base = sr.push_down_chain(k - 1, zP)
    part_char = phi_direct(x).evaluate(zP_base)
    return _mod1(Fraction(part_form) + part_char)


# ---------------------------------------------------------------------------
# hom-model transformations (the character side of the diagram)

def char_i1(u: CohomologyClass) -> Character:
    """H^{k-1}(Q/Z) included as the flat characters."""
    rep = u.group.cochain_for(u.coords)
    cx = rep.cx
    K = cycle_basis(cx, rep.degree)
    f = tuple(rep.pair(z) for z in K)
    return Character(cx, rep.degree + 1, f,
                     zero_cochain(cx, RING_Q, rep.degree + 1))


def char_i2(theta: QuotientForm) -> Character:
    """Forms modulo integral forms included by integration mod 1."""
    rep = theta.rep
    K = cycle_basis(rep.cx, rep.degree)
    f = tuple(_mod1(rep.pair(z)) for z in K)
    return Character(rep.cx, rep.degree + 1, f, coboundary(rep))


def char_pullback(phi: SimplicialMap, ch: Character) -> Character:
    """The hom-model pullback: f'(a) = f(phi_* a)."""
    if ch.cx is not phi.target:
        raise MismatchError("character does not live on the map's target")
    k = ch.degree
    src = phi.source
    K = cycle_basis(src, k - 1)
    f = tuple(ch.evaluate(phi.push_chain(k - 1, list(z))) for z in K)
    omega = Cochain(src, RING_Q, k, tuple(phi.pull_values(k, ch.omega.values)))
    return Character(src, k, f, omega)


# ---------------------------------------------------------------------------
# verification suites

def verify_equivalence(cx: Complex, k: int, rng, n_round_trips: int = 20,
                       maps=None) -> list[CheckResult]:
    """The equivalence suite: both models carry the same structure and the
    translation is a bijection computed constructively."""
    from .cochains import basis_cochain, integral_form_generators
    from .diffcocycle import (coboundary_shift, sample_qmodz_classes,
                              sample_quotient_forms)
    results = []
    classes = sample_classes(cx, k, rng, count=6)

    # phi_direct lands in characters and is constant on classes
    probs = []
    for idx, x in enumerate(classes):
        ch = phi_direct(x)
        if not is_character(cx, k, ch.f_values, ch.omega):
            probs.append(("phi_direct output fails the character condition", idx))
        n_prev = cx.n_simplices(k - 1) if k >= 1 else 0
        if n_prev:
            b = basis_cochain(cx, RING_Z, k - 1, rng.randrange(n_prev))
            y = coboundary_shift(x, b, zero_cochain(cx, RING_Q, k - 2))
            if phi_direct(y) != ch:
                probs.append(("phi_direct is not class-invariant", idx))
    results.append(check("phi.well_defined", not probs,
                         f"{len(classes)} classes", {"problems": probs}))

    # compatibility with i1, i2 and delta1 (property 1.11 shape)
    probs = []
    for u in sample_qmodz_classes(cx, k - 1, rng):
        if phi_direct(dc_i1(u)) != char_i1(u):
            probs.append(("phi . i1 != i1 on the hom model", list(map(str, u.coords))))
    for th in sample_quotient_forms(cx, k, rng):
        if phi_direct(dc_i2(th)) != char_i2(th):
            probs.append(("phi . i2 != i2 on the hom model",))
    for x in classes:
        if phi_direct(x).omega.values != delta1(x).values:
            probs.append(("delta1 not preserved",))
    results.append(check("phi.structure_compatibility", not probs, "",
                         {"problems": probs}))

    # delta2 through the lift: strategy independence and model agreement
    probs = []
    for idx, x in enumerate(classes):
        ch = phi_direct(x)
        d2a = delta2_via_lift(ch, "floor")
        d2b = delta2_via_lift(ch, "centered")
        if d2a != d2b:
            probs.append(("lift strategies disagree", idx))
        if d2a != delta2(x):
            probs.append(("delta2 . phi != delta2", idx))
    results.append(check("phi.delta2_via_lift", not probs,
                         "two lift strategies", {"problems": probs}))

    # bijectivity by explicit round trips
    probs = []
    trips = 0
    rounds = list(classes)
    while len(rounds) < n_round_trips:
        rounds.extend(sample_classes(cx, k, rng, count=4)[1:])
    for idx, x in enumerate(rounds[:n_round_trips]):
        ch = phi_direct(x)
        back = phi_inverse(ch)
        if phi_direct(back) != ch:
            probs.append(("phi(phi_inverse(ch)) != ch", idx))
        if not class_equal(back, x):
            probs.append(("phi_inverse(phi(x)) differs from x", idx))
        trips += 1
    # synthesized characters round-trip too
    K = cycle_basis(cx, k - 1)
    for trial in range(3):
        f = [Fraction(rng.randrange(0, 6), 6) for _ in K]
        ch = character_from_holonomies(cx, k, f)
        x = phi_inverse(ch)
        if phi_direct(x) != ch:
            probs.append(("synthesized character fails the round trip", trial))
        trips += 1
    results.append(check("phi.bijective_round_trips", not probs,
                         f"{trips} round trips", {"problems": probs}))

    # the two short exact rows of the five-lemma ladder, hom-model side
    probs = []
    for u in sample_qmodz_classes(cx, k - 1, rng):
        ch = char_i1(u)
        if (all(v == 0 for v in ch.f_values)) != u.is_zero():
            probs.append(("hom-model i1 injectivity",))
    for x in classes:
        ch = phi_direct(x)
        if ch.omega.is_zero():
            u = _flat_class_from_values(cx, k, ch.f_values)
            if char_i1(u) != ch:
                probs.append(("flat character outside im(i1)",))
    for om in integral_form_generators(cx, k):
        ch = character_with_form(cx, k, om)
        if ch.omega.to_q().values != om.to_q().values:
            probs.append(("delta1 surjectivity on the hom model",))
    results.append(check("phi.five_lemma_rows", not probs, "",
                         {"problems": probs}))

    # naturality (property 1.10 shape)
    if maps:
        probs = []
        for mi, phi in enumerate(maps):
            if phi.target is not cx:
                continue
            for x in classes[:4]:
                lhs = char_pullback(phi, phi_direct(x))
                rhs = phi_direct(pullback(phi, x))
                if lhs != rhs:
                    probs.append(("phi does not commute with pullback", mi))
        results.append(check("phi.naturality", not probs,
                             f"{len(maps)} maps", {"problems": probs}))
    return results


def _flat_class_from_values(cx: Complex, k: int, f_values) -> CohomologyClass:
    """The Q/Z class whose cocycle extension restricts to f on cycles."""
    ch = Character(cx, k, tuple(f_values), zero_cochain(cx, RING_Q, k))
    T = lift_T(ch)
    u = T.mod1()
    return cohomology(cx, k - 1, RING_QMODZ).class_from_cocycle(u)


def character_with_form(cx: Complex, k: int, omega: Cochain) -> Character:
    """Some character with the given integral form (delta1 surjectivity)."""
    from .diffcocycle import preimage_of_form
    return phi_direct(preimage_of_form(cx, omega.to_q()))


def character_from_holonomies(cx: Complex, k: int, f_values) -> Character:
    """The character with the given values on the cycle basis and the
    exact form of its canonical lift (any holonomy data is realizable)."""
    ch0 = Character(cx, k, tuple(f_values), zero_cochain(cx, RING_Q, k))
    T = lift_T(ch0)
    return Character(cx, k, tuple(f_values), coboundary(T))


def verify_phi_good(cx: Complex, k: int, rng, n_pairs: int = 6,
                    max_subdiv: int = 2) -> list[CheckResult]:
    """Agreement of the neighborhood evaluation with the direct one, its
    independence from the choice of neighborhood, the boundary formula,
    and the pseudomanifold-path evaluation."""
    results = []
    classes = sample_classes(cx, k, rng, count=4)
    cycles = sample_cycles(cx, k - 1, rng)
    pairs = []
    for x in classes:
        for z in cycles:
            pairs.append((x, z))
    rng.shuffle(pairs)
    pairs = pairs[:n_pairs]

    probs = []
    for idx, (x, z) in enumerate(pairs):
        direct = phi_direct(x).evaluate(list(z))
        via_nb = phi_good(x, list(z), max_subdiv)
        if direct != via_nb:
            probs.append(("phi_good disagrees with phi_direct", idx))
    results.append(check("phi.good_neighborhood_agreement", not probs,
                         f"{len(pairs)} (class, cycle) pairs", {"problems": probs}))

    # independence of the neighborhood: compare against a second, different
    # good neighborhood (finer subdivision level, or a fattened star)
    probs = []
    compared = 0
    for idx, (x, z) in enumerate(pairs[:3]):
        if all(c == 0 for c in z):
            continue
        v1 = phi_good(x, list(z), max_subdiv)
        v2 = _phi_good_alternative(x, list(z), max_subdiv)
        if v2 is None:
            continue
        compared += 1
        if v1 != v2:
            probs.append(("value depends on the neighborhood", idx))
    results.append(check("phi.neighborhood_independence", not probs,
                         f"{compared} alternative neighborhoods",
                         {"problems": probs}))

    # boundaries: phi(x)(boundary e) = omega(e) mod 1
    probs = []
    n_k = cx.n_simplices(k)
    x = classes[min(1, len(classes) - 1)]
    for e in range(min(n_k, 3)):
        vec = [0] * n_k
        vec[e] = 1
        bnd = cx.boundary_of_chain(k, vec)
        if phi_direct(x).evaluate(bnd) != _mod1(delta1(x).values[e]):
            probs.append(("boundary evaluation misses the form", e))
    results.append(check("phi.boundary_formula", not probs,
                         f"{min(n_k, 3)} basis chains", {"problems": probs}))

    # the pseudomanifold path (cycle surgery consistency)
    probs = []
    for idx, (x, z) in enumerate(pairs[:4]):
        if k - 1 >= cx.dim or all(c == 0 for c in z):
            continue
        direct = phi_direct(x).evaluate(list(z))
        via_pm = evaluate_via_normalization(x, list(z))
        if direct != via_pm:
            probs.append(("pseudomanifold-path value disagrees", idx))
    results.append(check("phi.pseudomanifold_path", not probs,
                         "normalization evaluation", {"problems": probs}))
    return results


def _phi_good_alternative(x: DiffClass, z, max_subdiv: int):
    """The phi_good value through a second good neighborhood: first try a
    strictly finer one (deeper subdivision), else a fattened star; None
    when no alternative fits the subdivision budget."""
    from .geometry import GeometryBudgetExceeded, good_neighborhood
    from .simplicial import chain_support, closed_star_neighborhood
    cx = x.cx
    k = x.degree
    support = chain_support(cx, k - 1, z)
    base_nb = good_neighborhood(cx, support, k - 1, max_subdiv)
    candidates = []
    if base_nb.level < max_subdiv:
        candidates.append(lambda: good_neighborhood(
            cx, support, k - 1, max_subdiv, min_level=base_nb.level + 1))
    fat = closed_star_neighborhood(cx, support)
    candidates.append(lambda: good_neighborhood(cx, fat, k - 1, max_subdiv))
    for cand in candidates:
        try:
            nb = cand()
        except GeometryBudgetExceeded:
            continue
        if nb.level == base_nb.level and nb.subcomplex.included == \
                base_nb.subcomplex.included:
            continue
        theta = _theta_on_neighborhood(x, nb)
        z_amb = nb.transport_chain(k - 1, z)
        z_local = nb.chain_to_neighborhood(k - 1, z_amb)
        return _mod1(theta.rep.pair(z_local))
    return None


def sample_cycles(cx: Complex, d: int, rng):
    """Deterministic cycle samples: homology generators, a boundary, a
    doubled generator, and the zero cycle."""
    out = []
    n = cx.n_simplices(d)
    hom = homology(cx, d)
    for g in hom.gen_cycles:
        out.append(tuple(g))
    if cx.n_simplices(d + 1):
        vec = [0] * cx.n_simplices(d + 1)
        vec[rng.randrange(cx.n_simplices(d + 1))] = 1
        out.append(tuple(cx.boundary_of_chain(d + 1, vec)))
    if hom.gen_cycles:
        out.append(tuple(2 * c for c in hom.gen_cycles[0]))
    out.append((0,) * n)
    return out
