"""Cochains over Z, Q and Q/Z, their cohomology, the cup product, and the
two long exact sequences feeding the character diagram.

Coefficient conventions: "R" is realized as Q and "R/Z" as Q/Z, with Q/Z
values stored as Fractions reduced to [0, 1). H^j(Q/Z) is presented as
Hom(H_j, Q/Z): an element is its tuple of evaluations on a fixed homology
generator basis (free generators first, then one coordinate per torsion
factor), and a representative cocycle is synthesized on demand.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from . import zlin
from .report import CheckResult, check
from .simplicial import Complex, MismatchError

RING_Z = "Z"
RING_Q = "Q"
RING_QMODZ = "QmodZ"


class RingError(Exception):
    pass


def _mod1(x: Fraction) -> Fraction:
    return x - floor(x)


# ---------------------------------------------------------------------------
# cochains

@dataclass(frozen=True)
class Cochain:
    cx: Complex
    ring: str
    degree: int
    values: tuple

    def __post_init__(self):
        n = self.cx.n_simplices(self.degree) if self.degree >= 0 else 0
        if len(self.values) != n:
            raise ValueError(
                f"degree-{self.degree} cochain on {self.cx.name} needs "
                f"{n} values, got {len(self.values)}")
        if self.ring == RING_Z:
            vals = tuple(int(v) for v in self.values)
            if any(v != w for v, w in zip(vals, self.values)):
                raise RingError("non-integer value in a Z cochain")
        elif self.ring == RING_Q:
            vals = tuple(Fraction(v) for v in self.values)
        elif self.ring == RING_QMODZ:
            vals = tuple(_mod1(Fraction(v)) for v in self.values)
        else:
            raise RingError(f"unknown ring {self.ring!r}")
        object.__setattr__(self, "values", vals)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def _compatible(self, other: "Cochain"):
        if self.cx is not other.cx:
            raise MismatchError("cochains live on different complexes")
        if self.degree != other.degree or self.ring != other.ring:
            raise RingError("degree or ring mismatch")

    def __add__(self, other):
        self._compatible(other)
        return Cochain(self.cx, self.ring, self.degree,
                       tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other):
        self._compatible(other)
        return Cochain(self.cx, self.ring, self.degree,
                       tuple(a - b for a, b in zip(self.values, other.values)))

    def __neg__(self):
        return Cochain(self.cx, self.ring, self.degree,
                       tuple(-v for v in self.values))

    def scale(self, c):
        if self.ring == RING_Z and Fraction(c).denominator != 1:
            raise RingError("cannot scale a Z cochain by a non-integer")
        return Cochain(self.cx, self.ring, self.degree,
                       tuple(c * v for v in self.values))

    def pair(self, chain_vec):
        """Evaluate on a chain coefficient vector (Q/Z values come back mod 1)."""
        total = sum(v * c for v, c in zip(self.values, chain_vec))
        return _mod1(Fraction(total)) if self.ring == RING_QMODZ else total

    def to_q(self) -> "Cochain":
        """View over Q (Z inclusion, or the canonical [0,1) lift of Q/Z)."""
        return Cochain(self.cx, RING_Q, self.degree,
                       tuple(Fraction(v) for v in self.values))

    def mod1(self) -> "Cochain":
        if self.ring == RING_QMODZ:
            return self
        return Cochain(self.cx, RING_QMODZ, self.degree, self.values)

    def serialize(self) -> dict:
        vals = {}
        for i, v in enumerate(self.values):
            if v:
                key = ",".join(map(str, self.cx.simplices[self.degree][i]))
                f = Fraction(v)
                vals[key] = f"{f.numerator}/{f.denominator}"
        return {"ring": self.ring, "degree": self.degree, "values": vals}


def zero_cochain(cx: Complex, ring: str, degree: int) -> Cochain:
    n = cx.n_simplices(degree) if degree >= 0 else 0
    return Cochain(cx, ring, degree, (0,) * n)


def basis_cochain(cx: Complex, ring: str, degree: int, i: int) -> Cochain:
    n = cx.n_simplices(degree)
    vals = [0] * n
    vals[i] = 1
    return Cochain(cx, ring, degree, tuple(vals))


def unit_cochain(cx: Complex) -> Cochain:
    return Cochain(cx, RING_Z, 0, (1,) * cx.n_simplices(0))


def coboundary(x: Cochain) -> Cochain:
    """delta x = x applied to boundaries; Q/Z values are reduced mod 1."""
    cx = x.cx
    j = x.degree + 1
    n = cx.n_simplices(j)
    out = [0] * n
    if 0 < j <= cx.dim and x.degree >= 0:
        for c, col in enumerate(cx.faces_with_signs(j)):
            out[c] = sum(sign * x.values[r] for r, sign in col)
    return Cochain(cx, x.ring, j, tuple(out))


def cup(x: Cochain, y: Cochain) -> Cochain:
    """Alexander-Whitney front-face/back-face product on ordered simplices."""
    if x.cx is not y.cx:
        raise MismatchError("cup factors live on different complexes")
    if x.ring == RING_QMODZ or y.ring == RING_QMODZ:
        raise RingError("cup is defined over Z and Q factors only")
    ring = RING_Z if (x.ring == RING_Z and y.ring == RING_Z) else RING_Q
    cx = x.cx
    k, l = x.degree, y.degree
    n = cx.n_simplices(k + l)
    out = [0] * n
    if n and k >= 0 and l >= 0:
        front_index = cx.index[k]
        back_index = cx.index[l]
        for c, s in enumerate(cx.simplices[k + l]):
            a = x.values[front_index[s[:k + 1]]]
            if a:
                b = y.values[back_index[s[k:]]]
                if b:
                    out[c] = a * b
    return Cochain(cx, ring, k + l, tuple(out))


def cup_int_qmodz(c: Cochain, u: Cochain) -> Cochain:
    """Cup of an integer cochain with a Q/Z cochain, valued in Q/Z."""
    if c.ring != RING_Z or u.ring != RING_QMODZ:
        raise RingError("expected a Z cochain cup a Q/Z cochain")
    return cup(c, u.to_q()).mod1()


def cup_integral_classes(a: "CohomologyClass", b: "CohomologyClass") -> "CohomologyClass":
    """Cup product on integral cohomology classes."""
    if a.group.ring != RING_Z or b.group.ring != RING_Z:
        raise RingError("expected two integral classes")
    prod = cup(a.cocycle(), b.cocycle())
    return cohomology(prod.cx, prod.degree, RING_Z).class_from_cocycle(prod)


def cup_class_qmodz(a: "CohomologyClass", u: "CohomologyClass") -> "CohomologyClass":
    """Cup of an integral class with a Q/Z class, valued in H(Q/Z)."""
    if a.group.ring != RING_Z or u.group.ring != RING_QMODZ:
        raise RingError("expected an integral class cup a Q/Z class")
    prod = cup_int_qmodz(a.cocycle(), u.group.cochain_for(u.coords))
    return cohomology(prod.cx, prod.degree, RING_QMODZ).class_from_cocycle(prod)


# ---------------------------------------------------------------------------
# cached chain-level data

def _snf_boundary(cx: Complex, j: int) -> zlin.SNFResult:
    key = ("snf_boundary", j)
    if key not in cx._cache:
        mat = cx._boundary_any(j) if j >= 0 else []
        cx._cache[key] = zlin.smith_normal_form(mat, ncols=cx.n_simplices(j))
    return cx._cache[key]


def _snf_coboundary(cx: Complex, j: int) -> zlin.SNFResult:
    """SNF of delta^j: C^j -> C^{j+1}, the transpose of boundary_{j+1}."""
    key = ("snf_coboundary", j)
    if key not in cx._cache:
        mat = zlin.transpose(cx._boundary_any(j + 1))
        cx._cache[key] = zlin.smith_normal_form(mat, ncols=cx.n_simplices(j))
    return cx._cache[key]


def cycle_basis(cx: Complex, j: int):
    """Columns forming a Z-basis of the j-cycles Z_j = ker boundary_j."""
    key = ("cycle_basis", j)
    if key not in cx._cache:
        if 0 <= j <= cx.dim:
            cx._cache[key] = tuple(tuple(col) for col in
                                   zlin.kernel_basis([], fact=_snf_boundary(cx, j)))
        else:
            cx._cache[key] = ()
    return cx._cache[key]


def cycle_coords(cx: Complex, j: int, vec):
    """Coordinates of a j-cycle in the cycle basis (error if not a cycle)."""
    if not cx.is_cycle(j, vec):
        raise ValueError("chain is not a cycle")
    fact = _snf_boundary(cx, j)
    r = fact.rank
    return [zlin.vec_dot(fact.Vinv[t], vec) for t in range(r, fact.shape[1])]


def cocycle_basis(cx: Complex, j: int):
    key = ("cocycle_basis", j)
    if key not in cx._cache:
        if 0 <= j <= cx.dim:
            cx._cache[key] = tuple(tuple(col) for col in
                                   zlin.kernel_basis([], fact=_snf_coboundary(cx, j)))
        else:
            cx._cache[key] = ()
    return cx._cache[key]


def cocycle_coords(cx: Complex, j: int, values):
    fact = _snf_coboundary(cx, j)
    r = fact.rank
    return [zlin.vec_dot(fact.Vinv[t], values) for t in range(r, fact.shape[1])]


@dataclass(frozen=True)
class HomologyData:
    cx: Complex
    degree: int
    fg: zlin.FgAbelianGroup      # presentation over cycle coordinates
    gen_cycles: tuple            # ambient chain vectors, free gens then torsion

    @property
    def free_count(self):
        return self.fg.rank

    @property
    def torsion(self):
        return self.fg.torsion

    def project_chain(self, vec) -> tuple:
        return self.fg.project(cycle_coords(self.cx, self.degree, vec))


def homology(cx: Complex, j: int) -> HomologyData:
    """H_j(cx; Z) with explicit generator cycles."""
    key = ("homology", j)
    if key not in cx._cache:
        K = cycle_basis(cx, j)
        p = len(K)
        fact = _snf_boundary(cx, j)
        r = fact.rank
        coord_rows = [fact.Vinv[t] for t in range(r, fact.shape[1])]
        cols = []
        for c in range(cx.n_simplices(j + 1)):
            col = [row[c] for row in cx._boundary_any(j + 1)]
            cols.append([zlin.vec_dot(row, col) for row in coord_rows])
        Y = [[cols[c][t] for c in range(len(cols))] for t in range(p)]
        fg = zlin.cokernel(Y, ambient=p)
        gens = []
        n = cx.n_simplices(j)
        for t in range(fg.n_coords):
            e = [0] * fg.n_coords
            e[t] = 1
            coords = fg.lift(e)
            vec = [0] * n
            for s, c in enumerate(coords):
                if c:
                    for i in range(n):
                        vec[i] += c * K[s][i]
            gens.append(tuple(vec))
        cx._cache[key] = HomologyData(cx, j, fg, tuple(gens))
    return cx._cache[key]


# ---------------------------------------------------------------------------
# cohomology groups and classes

@dataclass(frozen=True)
class CohomologyClass:
    group: object
    coords: tuple

    def __add__(self, other):
        if self.group is not other.group:
            raise MismatchError("classes belong to different groups")
        return self.group.make(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self.group.make(tuple(-a for a in self.coords))

    def scale(self, c: int):
        return self.group.make(tuple(c * a for a in self.coords))

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.coords)

    def cocycle(self) -> Cochain:
        return self.group.cochain_for(self.coords)

    def serialize(self):
        return {"ring": self.group.ring, "degree": self.group.degree,
                "coords": list(self.coords)}


class ZCohomology:
    """H^j(X; Z) = ker delta / im delta presented by Smith normal form."""

    ring = RING_Z

    def __init__(self, cx: Complex, j: int):
        self.cx = cx
        self.degree = j
        W = cocycle_basis(cx, j)
        q = len(W)
        n_prev = cx.n_simplices(j - 1) if j >= 1 else 0
        cols = []
        for t in range(n_prev):
            img = coboundary(basis_cochain(cx, RING_Z, j - 1, t)).values
            cols.append(cocycle_coords(cx, j, img))
        Y = [[cols[c][t] for c in range(n_prev)] for t in range(q)]
        self.fg = zlin.cokernel(Y, ambient=q)
        self.rank = self.fg.rank
        self.torsion = self.fg.torsion
        self._W = W
        self.gen_cochains = tuple(self._materialize(self.fg.lift(e))
                                  for e in _units(self.fg.n_coords))

    def _materialize(self, wcoords) -> Cochain:
        n = self.cx.n_simplices(self.degree)
        vals = [0] * n
        for s, c in enumerate(wcoords):
            if c:
                for i in range(n):
                    vals[i] += c * self._W[s][i]
        return Cochain(self.cx, RING_Z, self.degree, tuple(vals))

    def make(self, coords) -> CohomologyClass:
        return CohomologyClass(self, self.fg.reduce(coords))

    def zero_class(self) -> CohomologyClass:
        return self.make(self.fg.zero())

    def class_from_cocycle(self, coch: Cochain) -> CohomologyClass:
        if coch.ring != RING_Z or coch.degree != self.degree or coch.cx is not self.cx:
            raise RingError("expected an integral cocycle of the right degree")
        if not coboundary(coch).is_zero():
            raise ValueError("cochain is not a cocycle")
        w = cocycle_coords(self.cx, self.degree, coch.values)
        return self.make(self.fg.project(w))

    def cochain_for(self, coords) -> Cochain:
        return self._materialize(self.fg.lift(self.fg.reduce(coords)))

    def describe(self) -> str:
        return self.fg.describe()


class QCohomology:
    """H^j(X; Q), coordinatized by evaluation on free homology generators."""

    ring = RING_Q

    def __init__(self, cx: Complex, j: int):
        self.cx = cx
        self.degree = j
        hz = _coho_z(cx, j)
        hom = homology(cx, j)
        self.rank = hom.free_count
        self.torsion = ()
        self.free_cycles = hom.gen_cycles[:hom.free_count]
        # pairing of the integral free generators against the cycle basis
        self._free_gens = hz.gen_cochains[:hz.rank]
        self.pairing = [[Fraction(g.pair(z)) for g in self._free_gens]
                        for z in self.free_cycles]

    def make(self, coords) -> CohomologyClass:
        return CohomologyClass(self, tuple(Fraction(c) for c in coords))

    def zero_class(self) -> CohomologyClass:
        return self.make((Fraction(0),) * self.rank)

    def class_from_cocycle(self, coch: Cochain) -> CohomologyClass:
        if coch.ring not in (RING_Z, RING_Q) or coch.degree != self.degree \
                or coch.cx is not self.cx:
            raise RingError("expected a rational cocycle of the right degree")
        if not coboundary(coch).is_zero():
            raise ValueError("cochain is not a cocycle")
        return self.make(tuple(Fraction(coch.pair(z)) for z in self.free_cycles))

    def cochain_for(self, coords) -> Cochain:
        coords = [Fraction(c) for c in coords]
        if self.rank == 0:
            return zero_cochain(self.cx, RING_Q, self.degree)
        a = zlin.solve_rational(self.pairing, coords)
        out = zero_cochain(self.cx, RING_Q, self.degree)
        for c, g in zip(a, self._free_gens):
            if c:
                out = out + g.to_q().scale(c)
        return out

    def describe(self) -> str:
        return " + ".join(["Q"] * self.rank) if self.rank else "0"


class QmodZCohomology:
    """H^j(X; Q/Z) presented as Hom(H_j(Z), Q/Z).

    Coordinates are evaluations on the homology generator basis: one
    Fraction mod 1 per free generator, and one (with denominator dividing
    the factor) per torsion generator.
    """

    ring = RING_QMODZ

    def __init__(self, cx: Complex, j: int):
        self.cx = cx
        self.degree = j
        self.hom = homology(cx, j)
        self.free_count = self.hom.free_count
        self.torsion = self.hom.torsion
        self.rank = self.free_count  # number of divisible (Q/Z) factors

    @property
    def n_coords(self):
        return self.free_count + len(self.torsion)

    def make(self, coords) -> CohomologyClass:
        coords = [_mod1(Fraction(c)) for c in coords]
        if len(coords) != self.n_coords:
            raise ValueError("coordinate length mismatch")
        for t, d in enumerate(self.torsion):
            v = coords[self.free_count + t]
            if d % v.denominator:
                raise ValueError(
                    f"torsion coordinate {v} incompatible with factor {d}")
        return CohomologyClass(self, tuple(coords))

    def zero_class(self) -> CohomologyClass:
        return self.make((Fraction(0),) * self.n_coords)

    def class_from_cocycle(self, coch: Cochain) -> CohomologyClass:
        if coch.ring != RING_QMODZ or coch.degree != self.degree \
                or coch.cx is not self.cx:
            raise RingError("expected a Q/Z cochain of the right degree")
        if not coboundary(coch).is_zero():
            raise ValueError("cochain is not a cocycle mod 1")
        return self.make(tuple(coch.pair(z) for z in self.hom.gen_cycles))

    def cochain_for(self, coords) -> Cochain:
        coords = self.make(coords).coords
        fact = _snf_boundary(self.cx, self.degree)
        p = fact.shape[1] - fact.rank
        psi = [Fraction(0)] * p
        for c, row in zip(coords, self.hom.fg._proj_rows):
            if c:
                for i in range(p):
                    psi[i] += c * row[i]
        n = self.cx.n_simplices(self.degree)
        vals = [Fraction(0)] * n
        for t in range(p):
            if psi[t]:
                row = fact.Vinv[fact.rank + t]
                for i in range(n):
                    vals[i] += psi[t] * row[i]
        return Cochain(self.cx, RING_QMODZ, self.degree, tuple(vals))

    def describe(self) -> str:
        parts = ["Q/Z"] * self.free_count + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def _units(n):
    for t in range(n):
        e = [0] * n
        e[t] = 1
        yield tuple(e)


def _coho_z(cx, j) -> ZCohomology:
    key = ("cohomology", RING_Z, j)
    if key not in cx._cache:
        cx._cache[key] = ZCohomology(cx, j)
    return cx._cache[key]


def cohomology(cx: Complex, j: int, ring: str):
    """The cohomology group of the complex in one of the three rings."""
    key = ("cohomology", ring, j)
    if key not in cx._cache:
        if ring == RING_Z:
            cx._cache[key] = ZCohomology(cx, j)
        elif ring == RING_Q:
            cx._cache[key] = QCohomology(cx, j)
        elif ring == RING_QMODZ:
            cx._cache[key] = QmodZCohomology(cx, j)
        else:
            raise RingError(f"unknown ring {ring!r}")
    return cx._cache[key]


# ---------------------------------------------------------------------------
# integral forms and quotient forms

def is_integral_form(omega: Cochain) -> bool:
    """Closed with integer evaluation on every integer cycle."""
    if omega.ring not in (RING_Z, RING_Q):
        raise RingError("integral forms are rational cochains")
    if not coboundary(omega).is_zero():
        return False
    for z in cycle_basis(omega.cx, omega.degree):
        if Fraction(omega.pair(z)).denominator != 1:
            return False
    return True


class QuotientForm:
    """A rational cochain modulo closed integral-period cochains."""

    __hash__ = None

    def __init__(self, rep: Cochain):
        if rep.ring not in (RING_Z, RING_Q):
            raise RingError("quotient forms are represented by rational cochains")
        self.rep = rep.to_q()

    def __add__(self, other):
        return QuotientForm(self.rep + other.rep)

    def __neg__(self):
        return QuotientForm(-self.rep)

    def __sub__(self, other):
        return QuotientForm(self.rep - other.rep)

    def __eq__(self, other):
        if not isinstance(other, QuotientForm):
            return NotImplemented
        return is_integral_form(self.rep - other.rep)

    def is_zero(self) -> bool:
        return is_integral_form(self.rep)

    def __repr__(self):
        return f"QuotientForm(deg {self.rep.degree} on {self.rep.cx.name})"

    def serialize(self):
        return {"quotient_form": self.rep.serialize()}


def integral_form_generators(cx: Complex, k: int):
    """A finite generating family of the integral forms in degree k:
    free integral cohomology generators plus coboundaries of the integer
    basis cochains."""
    hz = _coho_z(cx, k)
    gens = [g.to_q() for g in hz.gen_cochains[:hz.rank]]
    n_prev = cx.n_simplices(k - 1) if k >= 1 else 0
    for t in range(n_prev):
        g = coboundary(basis_cochain(cx, RING_Q, k - 1, t))
        if not g.is_zero():
            gens.append(g)
    return gens


# ---------------------------------------------------------------------------
# Bockstein and the sequence maps

def bockstein(u: CohomologyClass, strategy: str = "floor") -> CohomologyClass:
    """Connecting map H^j(Q/Z) -> H^{j+1}(Z): lift a representative cocycle
    to a rational cochain and take the class of its (integral) coboundary."""
    group = u.group
    if group.ring != RING_QMODZ:
        raise RingError("bockstein starts from a Q/Z class")
    rep = group.cochain_for(u.coords)
    return bockstein_of_cocycle(rep, strategy)


def bockstein_of_cocycle(rep: Cochain, strategy: str = "floor") -> CohomologyClass:
    if rep.ring != RING_QMODZ:
        raise RingError("expected a Q/Z cocycle")
    if strategy == "floor":
        lift = rep.to_q()
    elif strategy == "centered":
        lift = Cochain(rep.cx, RING_Q, rep.degree,
                       tuple(v if v <= Fraction(1, 2) else v - 1 for v in rep.values))
    else:
        raise ValueError(f"unknown lift strategy {strategy!r}")
    c = coboundary(lift)
    if any(v.denominator != 1 for v in c.values):
        raise ValueError("input was not a cocycle mod 1")
    c_int = Cochain(rep.cx, RING_Z, c.degree, tuple(int(v) for v in c.values))
    return _coho_z(rep.cx, c.degree).class_from_cocycle(c_int)


def alpha(x: CohomologyClass) -> CohomologyClass:
    """Reduction H^j(Q) -> H^j(Q/Z); torsion evaluations vanish rationally."""
    if x.group.ring != RING_Q:
        raise RingError("alpha starts from a rational class")
    g = cohomology(x.group.cx, x.group.degree, RING_QMODZ)
    coords = [_mod1(c) for c in x.coords] + [Fraction(0)] * len(g.torsion)
    return g.make(coords)


def r_to_rational(c: CohomologyClass) -> CohomologyClass:
    """Coefficient inclusion H^j(Z) -> H^j(Q)."""
    if c.group.ring != RING_Z:
        raise RingError("r starts from an integral class")
    g = cohomology(c.group.cx, c.group.degree, RING_Q)
    return g.class_from_cocycle(c.cocycle().to_q())


def beta(x: CohomologyClass) -> QuotientForm:
    """De Rham map H^j(Q) -> forms modulo integral forms."""
    if x.group.ring != RING_Q:
        raise RingError("beta starts from a rational class")
    return QuotientForm(x.group.cochain_for(x.coords))


def s_class_of_form(omega: Cochain) -> CohomologyClass:
    """Cohomology class in H^j(Q) of a closed rational cochain."""
    g = cohomology(omega.cx, omega.degree, RING_Q)
    return g.class_from_cocycle(omega)


def d_of_quotient(theta: QuotientForm) -> Cochain:
    """Coboundary on a representative; lands in the integral forms."""
    return coboundary(theta.rep)


# ---------------------------------------------------------------------------
# exactness of the two long sequences

def _sample_fracs(rng, count=2):
    base = [Fraction(1, 2), Fraction(1, 3)]
    if rng is not None:
        for _ in range(count):
            base.append(Fraction(rng.randrange(1, 7), rng.randrange(2, 7)))
    return base


def check_exactness(cx: Complex, k: int, rng=None) -> list[CheckResult]:
    """Exactness of the Bockstein sequence (alpha, B, r) and the de Rham-type
    sequence (beta, d, s) at the nodes displayed in the character diagram,
    verified constructively on generators. Returns one result per node."""
    hz_prev = cohomology(cx, k - 1, RING_Z)
    hq_prev = cohomology(cx, k - 1, RING_Q)
    hqz_prev = cohomology(cx, k - 1, RING_QMODZ)
    hz_k = cohomology(cx, k, RING_Z)
    results = []
    fracs = _sample_fracs(rng)

    # --- Bockstein: ker alpha = im r at H^{k-1}(Q)
    probs, wit = [], []
    for e in _units(hz_prev.fg.n_coords):
        x = r_to_rational(hz_prev.make(e))
        if not alpha(x).is_zero():
            probs.append(("alpha(r(gen)) != 0", e))
    for i in range(hq_prev.rank):
        # the lattice of integer-evaluation classes is spanned by the dual
        # basis vectors; each needs an integral preimage under r
        target = [Fraction(0)] * hq_prev.rank
        target[i] = Fraction(1)
        a = zlin.solve_integer(_int_pairing(hq_prev),
                               [0] * i + [1] + [0] * (hq_prev.rank - 1 - i))
        if a is None:
            probs.append(("integral-evaluation class has no integral preimage", i))
            continue
        pre = hz_prev.make(tuple(a) + (0,) * len(hz_prev.torsion))
        if r_to_rational(pre).coords != tuple(target):
            probs.append(("preimage does not map onto the dual vector", i))
        else:
            wit.append({"dual_index": i, "preimage": list(pre.coords)})
    results.append(check("bockstein.ker_alpha_eq_im_r", not probs,
                         f"{hq_prev.rank} dual generators", {"witnesses": wit, "problems": probs}))

    # --- Bockstein: ker B = im alpha at H^{k-1}(Q/Z)
    probs, wit = [], []
    for i in range(hqz_prev.free_count):
        for q in fracs:
            coords = [Fraction(0)] * hqz_prev.n_coords
            coords[i] = q
            phi = hqz_prev.make(coords)
            if not bockstein(phi).is_zero():
                probs.append(("B(alpha image) != 0", i, str(q)))
                continue
            # constructive preimage through alpha
            ratl = hq_prev.make([Fraction(0)] * i + [q] + [Fraction(0)] * (hq_prev.rank - 1 - i))
            if alpha(ratl) != phi:
                probs.append(("rational lift does not reduce to the class", i, str(q)))
            else:
                wit.append({"free_index": i, "value": str(q)})
    for t, d in enumerate(hqz_prev.torsion):
        for m in range(1, d):
            coords = [Fraction(0)] * hqz_prev.n_coords
            coords[hqz_prev.free_count + t] = Fraction(m, d)
            img = bockstein(hqz_prev.make(coords))
            if img.is_zero():
                probs.append(("B vanishes on a nonzero torsion dual", t, m))
        coords = [Fraction(0)] * hqz_prev.n_coords
        coords[hqz_prev.free_count + t] = Fraction(1, d)
        ordr = _class_order(bockstein(hqz_prev.make(coords)))
        if ordr != d:
            probs.append(("B(torsion dual) has order", t, ordr, "expected", d))
    results.append(check("bockstein.ker_B_eq_im_alpha", not probs,
                         f"{hqz_prev.free_count} divisible factors, "
                         f"{len(hqz_prev.torsion)} torsion duals",
                         {"witnesses": wit[:4], "problems": probs}))

    # --- Bockstein: ker r = im B at H^k(Z)
    probs, wit = [], []
    for t, d in enumerate(hz_k.torsion):
        e = [0] * hz_k.fg.n_coords
        e[hz_k.rank + t] = 1
        tors = hz_k.make(e)
        if not r_to_rational(tors).is_zero():
            probs.append(("torsion class survives rationally", t))
            continue
        c = tors.cocycle()
        dc = c.scale(d)
        b = zlin.solve_integer(
            zlin.transpose(cx._boundary_any(k)), list(dc.values),
            fact=_transpose_snf(cx, k))
        if b is None:
            probs.append(("d*c is not an integral coboundary", t))
            continue
        u = Cochain(cx, RING_QMODZ, k - 1, tuple(Fraction(v, d) for v in b))
        phi = hqz_prev.class_from_cocycle(u)
        if bockstein(phi) != tors:
            probs.append(("constructed Bockstein preimage misses the class", t))
        else:
            wit.append({"torsion_index": t, "order": d})
    for i in range(hqz_prev.free_count):
        coords = [Fraction(0)] * hqz_prev.n_coords
        coords[i] = Fraction(1, 2)
        if not r_to_rational(bockstein(hqz_prev.make(coords))).is_zero():
            probs.append(("r(B(phi)) != 0", i))
    results.append(check("bockstein.ker_r_eq_im_B", not probs,
                         f"{len(hz_k.torsion)} torsion generators",
                         {"witnesses": wit, "problems": probs}))

    # --- de Rham: ker beta = im r at H^{k-1}(Q)
    probs, wit = [], []
    for e in _units(hz_prev.fg.n_coords):
        x = r_to_rational(hz_prev.make(e))
        if not beta(x).is_zero():
            probs.append(("beta(r(gen)) != 0", e))
    for i in range(hq_prev.rank):
        a = zlin.solve_integer(_int_pairing(hq_prev),
                               [0] * i + [1] + [0] * (hq_prev.rank - 1 - i))
        if a is None:
            probs.append(("no integral preimage for dual vector", i))
        else:
            pre = hz_prev.make(tuple(a) + (0,) * len(hz_prev.torsion))
            if not beta(r_to_rational(pre)).is_zero():
                probs.append(("preimage not in ker beta", i))
            else:
                wit.append({"dual_index": i})
    results.append(check("derham.ker_beta_eq_im_r", not probs,
                         f"{hq_prev.rank} dual generators",
                         {"witnesses": wit, "problems": probs}))

    # --- de Rham: ker d = im beta at forms/integral forms (degree k-1)
    probs, wit = [], []
    samples = []
    for i in range(hq_prev.rank):
        for q in fracs[:2]:
            samples.append(hq_prev.make([Fraction(0)] * i + [q]
                                        + [Fraction(0)] * (hq_prev.rank - 1 - i)))
    samples.append(hq_prev.zero_class())
    shift = integral_form_generators(cx, k - 1)
    for idx, x in enumerate(samples):
        theta = beta(x)
        if not d_of_quotient(theta).is_zero():
            probs.append(("d(beta(x)) != 0", idx))
            continue
        rep = theta.rep if not shift else theta.rep + shift[0]
        closed = QuotientForm(rep)
        back = beta(s_class_of_form(closed.rep))
        if back != closed:
            probs.append(("closed quotient form not recovered through beta", idx))
        else:
            wit.append({"sample": idx})
    results.append(check("derham.ker_d_eq_im_beta", not probs,
                         f"{len(samples)} closed samples",
                         {"witnesses": wit[:4], "problems": probs}))

    # --- de Rham: ker s = im d at integral forms (degree k)
    probs, wit = [], []
    n_prev = cx.n_simplices(k - 1) if k >= 1 else 0
    d_mat = zlin.transpose(cx._boundary_any(k))
    exact_samples = []
    for t in range(min(n_prev, 4)):
        exact_samples.append(coboundary(basis_cochain(cx, RING_Q, k - 1, t)))
    if n_prev:
        exact_samples.append(coboundary(
            basis_cochain(cx, RING_Q, k - 1, 0).scale(Fraction(1, 3))))
    for idx, omega in enumerate(exact_samples):
        if omega.is_zero():
            continue
        if not s_class_of_form(omega).is_zero():
            probs.append(("exact form has nonzero rational class", idx))
            continue
        rho = zlin.solve_rational(d_mat, list(omega.values), ncols=n_prev)
        if rho is None:
            probs.append(("exact form not solvable as a coboundary", idx))
            continue
        theta = QuotientForm(Cochain(cx, RING_Q, k - 1, tuple(rho)))
        if d_of_quotient(theta).values != omega.values:
            probs.append(("primitive does not reproduce the form", idx))
        else:
            wit.append({"sample": idx})
    # s(d(theta)) = 0 for arbitrary quotient forms
    for t in range(min(n_prev, 3)):
        theta = QuotientForm(basis_cochain(cx, RING_Q, k - 1, t).scale(Fraction(1, 2)))
        omega = d_of_quotient(theta)
        if not omega.is_zero() and not s_class_of_form(omega).is_zero():
            probs.append(("s(d(theta)) != 0", t))
    results.append(check("derham.ker_s_eq_im_d", not probs,
                         f"{len(exact_samples)} exact samples",
                         {"witnesses": wit[:4], "problems": probs}))
    return results


def _int_pairing(hq: QCohomology):
    """The (unimodular) pairing matrix as integers, for integral solves."""
    out = []
    for row in hq.pairing:
        irow = []
        for v in row:
            f = Fraction(v)
            if f.denominator != 1:
                raise ValueError("integral generator has non-integer period")
            irow.append(f.numerator)
        out.append(irow)
    return out


def _transpose_snf(cx: Complex, j: int) -> zlin.SNFResult:
    """SNF of delta^{j-1} = transpose(boundary_j), cached."""
    return _snf_coboundary(cx, j - 1)


def _class_order(c: CohomologyClass):
    """Order of an integral cohomology class, None when infinite."""
    if any(c.coords[:c.group.rank]):
        return None
    order = 1
    for t, d in enumerate(c.group.torsion):
        v = c.coords[c.group.rank + t] % d
        if v:
            g = _gcd(v, d)
            order = _lcm(order, d // g)
    return order


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _lcm(a, b):
    return a * b // _gcd(a, b)
