"""Combinatorial cycle surgery: good neighborhoods, pseudomanifold
normalization of integer cycles, and bounding inside good neighborhoods.

Smooth deformations are replaced by their combinatorial shadows: parallel
copies of an over-counted cell are routed through distinct sectors of the
second barycentric subdivision inside the open star of the cell, and sheet
separation at an over-crowded codimension-one face is an abstract regluing
of the incident cells (the ambient images stay put, so the homology
witnesses are exact and supported where they should be).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import zlin
from .report import CheckResult, check
from .simplicial import (
    Complex, SimplicialMap, Subcomplex, chain_support,
    closed_star_neighborhood, complex_from_maximal,
    subcomplex_from_simplices, subdivision_tower,
)


class GeometryBudgetExceeded(Exception):
    pass


class DimensionError(Exception):
    pass


@dataclass(frozen=True)
class NotNullHomologous:
    """Returned when a cycle has a nonzero homology class; carries the
    class coordinates in the base complex as witness."""
    coords: tuple
    group: str


# ---------------------------------------------------------------------------
# cohomology vanishing via Smith normal form ranks

def cohomology_vanishes_above(cx: Complex, k: int) -> bool:
    """H^j(cx; Z) = 0 for every j > k, decided by boundary-matrix ranks and
    invariant factors (H^j has rank b_j and torsion from the SNF of d_j)."""
    from .cochains import _snf_boundary
    for j in range(k + 1, cx.dim + 1):
        f_j = _snf_boundary(cx, j)
        f_j1 = _snf_boundary(cx, j + 1)
        betti = cx.n_simplices(j) - f_j.rank - f_j1.rank
        if betti:
            return False
        if any(d > 1 for d in f_j.diag):
            return False
    return True


# ---------------------------------------------------------------------------
# good neighborhoods

@dataclass
class GoodNeighborhood:
    base: Complex
    level: int
    tower: list          # Subdivision objects, base -> ambient
    ambient: Complex
    subcomplex: Subcomplex
    complex: Complex     # the neighborhood as a standalone complex
    inclusion: SimplicialMap
    k: int               # cohomology vanishes above this degree

    def transport_chain(self, j: int, vec):
        """Chain on the base -> chain on the ambient subdivision."""
        for sd in self.tower:
            vec = sd.subdivide_chain(j, vec)
        return vec

    def transport_cochain_values(self, j: int, values):
        """Cochain values on the base -> values on the ambient subdivision."""
        for sd in self.tower:
            values = sd.transport_values(j, values)
        return values

    def push_down_chain(self, j: int, vec):
        """Chain on the ambient subdivision -> chain on the base."""
        for sd in reversed(self.tower):
            vec = sd.last_vertex.push_chain(j, vec)
        return vec

    def chain_to_neighborhood(self, j: int, vec):
        """Reindex an ambient chain supported inside the neighborhood."""
        cols = self.inclusion.chain_columns(j)
        back = {}
        for src, entry in enumerate(cols):
            back[entry[0]] = (src, entry[1])
        out = [0] * self.complex.n_simplices(j)
        for i, coef in enumerate(vec):
            if coef:
                if i not in back:
                    raise ValueError("chain leaves the neighborhood")
                src, sign = back[i]
                out[src] = sign * coef
        return out


def _transport_subcomplex(K: Subcomplex, sd) -> Subcomplex:
    """The subdivision of a subcomplex, located by carrier membership."""
    included = []
    for d in range(sd.complex.dim + 1):
        level = set()
        for i in range(sd.complex.n_simplices(d)):
            cd, ci = sd.carrier[d][i]
            if K.contains(cd, ci):
                level.add(i)
        included.append(level)
    return Subcomplex(sd.complex, included)


def good_neighborhood(base: Complex, K: Subcomplex, k: int,
                      max_subdiv: int = 2, min_level: int = 0) -> GoodNeighborhood:
    """A closed-star neighborhood of (the image of) K in at most
    `max_subdiv` barycentric subdivisions whose integral cohomology
    vanishes above k; the vanishing is always checked directly.

    `min_level` forces extra subdivisions first (used to produce a second,
    finer neighborhood for independence tests)."""
    if K.is_empty():
        raise ValueError("cannot build a neighborhood of an empty subcomplex")
    cache_key = ("good_nb", tuple(tuple(sorted(lv)) for lv in K.included),
                 k, max_subdiv, min_level)
    if cache_key in base._cache:
        return base._cache[cache_key]
    tower = []
    ambient = base
    K_here = K
    for level in range(max_subdiv + 1):
        if level >= min_level:
            U = closed_star_neighborhood(ambient, K_here)
            ucx, incl = U.as_complex(f"{base.name}|nb{level}")
            if cohomology_vanishes_above(ucx, k):
                nb = GoodNeighborhood(base, level, list(tower), ambient, U,
                                      ucx, incl, k)
                base._cache[cache_key] = nb
                return nb
        if level == max_subdiv:
            break
        tower = subdivision_tower(base, level + 1)
        sd = tower[level]
        K_here = _transport_subcomplex(K_here, sd)
        ambient = sd.complex
    raise GeometryBudgetExceeded(
        f"no {k}-good closed-star neighborhood within {max_subdiv} subdivisions")


def good_neighborhood_of_cycle(base: Complex, j: int, vec, k: int,
                               max_subdiv: int = 2) -> GoodNeighborhood:
    return good_neighborhood(base, chain_support(base, j, vec), k, max_subdiv)


# ---------------------------------------------------------------------------
# pseudomanifolds

@dataclass
class Pseudomanifold:
    complex: Complex               # abstract oriented (k-1)-complex
    map_to_ambient: SimplicialMap
    fundamental_cycle: tuple       # +-1 coefficients on top simplices

    @property
    def dim(self) -> int:
        return self.complex.dim

    def ambient_cycle(self):
        return self.map_to_ambient.push_chain(self.dim, self.fundamental_cycle)

    def serialize(self):
        return {
            "simplices": [[list(s) for s in lvl] for lvl in self.complex.simplices],
            "vertex_map": list(self.map_to_ambient.vertex_map),
            "fundamental_cycle": list(self.fundamental_cycle),
        }


def is_pseudomanifold(P: Pseudomanifold) -> bool:
    """Every codimension-one cell bounds exactly two top cells with
    cancelling induced orientations, and the ambient map is an embedding
    surrogate (simplexwise injective, injective on top-cell interiors)."""
    cx = P.complex
    d = cx.dim
    if len(P.fundamental_cycle) != cx.n_simplices(d):
        return False
    if any(c not in (1, -1) for c in P.fundamental_cycle):
        return False
    # purity: every simplex is a face of a top cell
    covered = [set() for _ in range(d)]
    for s in cx.simplices[d]:
        for r in range(1, d + 1):
            for f in combinations(s, r):
                covered[r - 1].add(f)
    for r in range(d):
        if set(cx.simplices[r]) != covered[r]:
            return False
    if d >= 1:
        counts = [0] * cx.n_simplices(d - 1)
        for col in cx.faces_with_signs(d):
            for r, _ in col:
                counts[r] += 1
        if any(c != 2 for c in counts):
            return False
        if not cx.is_cycle(d, P.fundamental_cycle):
            return False
    # embedding surrogate
    vm = P.map_to_ambient.vertex_map
    images = set()
    for s, coef in zip(cx.simplices[d], P.fundamental_cycle):
        img = tuple(sorted(vm[v] for v in s))
        if len(set(img)) != d + 1:
            return False
        if img in images:
            return False
        images.add(img)
    return True


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def resolve_cycle(ambient: Complex, d: int, vec):
    """Reglue the +-1 cells of a d-cycle so every (d-1)-face has exactly
    two sheets with cancelling orientations; sheets are paired off in
    sorted order. Returns (Pseudomanifold, b2) with b2 = 0 because the
    ambient images are untouched."""
    if not ambient.is_cycle(d, vec):
        raise ValueError("input chain is not a cycle")
    cells = [(i, c) for i, c in enumerate(vec) if c]
    if any(abs(c) != 1 for _, c in cells):
        raise ValueError("resolve expects coefficients in {-1, 0, +1}")
    uf = _UnionFind()
    cell_tuples = [ambient.simplices[d][i] for i, _ in cells]
    if d >= 1:
        incident: dict[int, list] = {}
        for pos, (i, coef) in enumerate(cells):
            for f_idx, sign in ambient.faces_with_signs(d)[i]:
                incident.setdefault(f_idx, []).append((pos, sign * coef))
        for f_idx in sorted(incident):
            entries = incident[f_idx]
            plus = sorted(p for p, s in entries if s > 0)
            minus = sorted(p for p, s in entries if s < 0)
            assert len(plus) == len(minus), "cycle condition violated at a face"
            face = ambient.simplices[d - 1][f_idx]
            for a, b in zip(plus, minus):
                for v in face:
                    sa = cell_tuples[a].index(v)
                    sb = cell_tuples[b].index(v)
                    uf.union((a, sa), (b, sb))
    # abstract vertices = union-find classes, labelled deterministically
    classes = {}
    for pos in range(len(cells)):
        for slot in range(d + 1):
            root = uf.find((pos, slot))
            classes.setdefault(root, []).append((pos, slot))
    order = sorted(classes, key=min)
    label = {root: i for i, root in enumerate(order)}
    vertex_map = [0] * len(order)
    for root, members in classes.items():
        imgs = {cell_tuples[p][s] for p, s in members}
        assert len(imgs) == 1, "glued slots map to different ambient vertices"
        vertex_map[label[root]] = imgs.pop()
    tops = []
    coefs = []
    for pos, (i, coef) in enumerate(cells):
        labs = [label[uf.find((pos, slot))] for slot in range(d + 1)]
        assert len(set(labs)) == d + 1, "cell collapsed during regluing"
        sign = _sort_parity(labs)
        tops.append(tuple(sorted(labs)))
        coefs.append(coef * sign)
    abstract = complex_from_maximal(f"{ambient.name}|pm", sorted(set(tops)),
                                    len(order))
    fund = [0] * abstract.n_simplices(d)
    for t, c in zip(tops, coefs):
        fund[abstract.simplex_index(t)] = c
    pm = Pseudomanifold(abstract,
                        SimplicialMap(abstract, ambient, vertex_map),
                        tuple(fund))
    b2 = [0] * ambient.n_simplices(d + 1)
    return pm, b2


def _sort_parity(seq) -> int:
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return (-1) ** inv


# ---------------------------------------------------------------------------
# splitting multi-coefficient cells into parallel copies

@dataclass
class SplitResult:
    base: Complex
    level: int
    tower: list
    complex: Complex      # where the output cycle lives
    degree: int
    transported: list     # the input cycle transported to `complex`
    cycle: list           # coefficients in {-1, 0, +1}
    witness: list         # (d+1)-chain with transported = boundary(witness) + cycle

    def transport_chain(self, j, vec):
        for sd in self.tower:
            vec = sd.subdivide_chain(j, vec)
        return vec

    def push_down_chain(self, j, vec):
        for sd in reversed(self.tower):
            vec = sd.last_vertex.push_chain(j, vec)
        return vec


def split_cycle(base: Complex, d: int, vec) -> SplitResult:
    """Replace every coefficient-n cell of a d-cycle (n > 1) by n parallel
    copies routed through sectors of the second barycentric subdivision,
    homologous inside the closed star of the cell. Needs d < dim."""
    if d >= base.dim:
        raise DimensionError("splitting needs cycles below the top dimension")
    if not base.is_cycle(d, vec):
        raise ValueError("input chain is not a cycle")
    return _split_chain(base, d, vec)


def _split_chain(base: Complex, d: int, vec) -> SplitResult:
    """Splitting body; also valid for chains rel boundary, because every
    parallel copy shares the boundary of the cell it copies."""
    if all(abs(c) <= 1 for c in vec):
        return SplitResult(base, 0, [], base, d, list(vec), list(vec),
                           [0] * base.n_simplices(d + 1))
    if d > 1:
        raise GeometryBudgetExceeded(
            "parallel-copy routing is implemented for cells of dimension <= 1")
    tower = subdivision_tower(base, 2)
    Y = tower[1].complex
    z2 = vec
    for sd in tower:
        z2 = sd.subdivide_chain(d, z2)
    z_out = list(z2)
    b1 = [0] * Y.n_simplices(d + 1)
    cofaces = _coface_table(base, d)
    for i, coef in enumerate(vec):
        n = abs(coef)
        if n <= 1:
            continue
        sign = 1 if coef > 0 else -1
        slots = cofaces[i]
        if len(slots) < n - 1:
            raise GeometryBudgetExceeded(
                f"cell {base.simplices[d][i]} has {len(slots)} cofaces, "
                f"needs {n - 1} parallel slots")
        unit = [0] * base.n_simplices(d)
        unit[i] = 1
        s2 = unit
        for sd in tower:
            s2 = sd.subdivide_chain(d, s2)
        for c in range(Y.n_simplices(d)):
            z_out[c] -= (coef - sign) * s2[c]
        for copy_idx in range(n - 1):
            rho = slots[copy_idx]
            route = _parallel_copy(base, tower, d, i, rho)
            for c, v in enumerate(route):
                z_out[c] += sign * v
            # boundary(h) = route - s2, so the identity z2 = boundary(b1) + z'
            # wants -h per copy
            h = _local_homology_witness(base, tower, d, rho, route, s2)
            for c, v in enumerate(h):
                b1[c] -= sign * v
    # exactness of the bookkeeping: transported = boundary(b1) + cycle
    db = Y.boundary_of_chain(d + 1, b1)
    assert all(z2[c] == db[c] + z_out[c] for c in range(Y.n_simplices(d))), \
        "split witness identity failed"
    assert all(abs(c) <= 1 for c in z_out), "split left a large coefficient"
    return SplitResult(base, 2, tower, Y, d, list(z2), z_out, b1)


def _coface_table(base: Complex, d: int):
    out = [[] for _ in range(base.n_simplices(d))]
    for j, col in enumerate(base.faces_with_signs(d + 1)):
        for r, _ in col:
            out[r].append(j)
    return out


def _parallel_copy(base: Complex, tower, d: int, cell: int, rho: int):
    """A +-1 copy of the subdivided d-cell routed through the sd^2 sector
    of the coface rho, sharing exactly the cell's boundary."""
    sd1, sd2 = tower
    Y = sd2.complex
    out = [0] * Y.n_simplices(d)
    if d == 0:
        v = base.simplices[0][cell][0]
        a, b = base.simplices[1][rho]
        mid = sd1.new_vertex(1, rho)
        quarter_edge = tuple(sorted((v, mid)))
        q = sd2.new_vertex(1, sd1.complex.simplex_index(quarter_edge))
        out[Y.simplex_index((q,))] = 1
        return out
    # d == 1: route a -> c1 -> y -> c2 -> b inside the coface triangle
    a, b = base.simplices[1][cell]
    mid = sd1.new_vertex(1, cell)
    beta = sd1.new_vertex(2, rho)
    s1cx = sd1.complex
    c1 = sd2.new_vertex(2, s1cx.simplex_index(tuple(sorted((a, mid, beta)))))
    yv = sd2.new_vertex(1, s1cx.simplex_index(tuple(sorted((mid, beta)))))
    c2 = sd2.new_vertex(2, s1cx.simplex_index(tuple(sorted((b, mid, beta)))))
    for (u, w) in ((a, c1), (c1, yv), (yv, c2), (c2, b)):
        lo, hi = (u, w) if u < w else (w, u)
        idx = Y.simplex_index((lo, hi))
        out[idx] += 1 if lo == u else -1
    return out


def _local_homology_witness(base: Complex, tower, d: int, rho: int,
                            route, s2):
    """Solve boundary(h) = route - s2 inside the subdivided closed coface."""
    Y = tower[1].complex
    rhs = [route[c] - s2[c] for c in range(Y.n_simplices(d))]
    local = _carrier_subcomplex(base, tower, d + 1, rho)
    sub, incl = local.as_complex()
    rhs_local = [0] * sub.n_simplices(d)
    back = {}
    for src, entry in enumerate(incl.chain_columns(d)):
        back[entry[0]] = (src, entry[1])
    for i, v in enumerate(rhs):
        if v:
            src, sign = back[i]
            rhs_local[src] = sign * v
    sol = zlin.solve_integer(sub.boundary_matrix(d + 1), rhs_local,
                             ncols=sub.n_simplices(d + 1))
    assert sol is not None, "local witness must exist inside a disk"
    out = [0] * Y.n_simplices(d + 1)
    for src, entry in enumerate(incl.chain_columns(d + 1)):
        if sol[src]:
            out[entry[0]] = entry[1] * sol[src]
    return out


def _carrier_subcomplex(base: Complex, tower, d: int, idx: int) -> Subcomplex:
    """All sd^2 simplices carried inside the closed d-simplex `idx`."""
    closed = subcomplex_from_simplices(base, [base.simplices[d][idx]])
    K = closed
    for sd in tower:
        K = _transport_subcomplex(K, sd)
    return K


def normalize_cycle(base: Complex, d: int, vec):
    """Split then resolve: the full cycle-to-pseudomanifold pipeline.
    Returns (SplitResult, Pseudomanifold). Splitting needs d < dim, but a
    cycle that already has unit coefficients skips it in any dimension."""
    if all(abs(c) <= 1 for c in vec):
        if not base.is_cycle(d, vec):
            raise ValueError("input chain is not a cycle")
        sr = SplitResult(base, 0, [], base, d, list(vec), list(vec),
                         [0] * base.n_simplices(d + 1))
    else:
        sr = split_cycle(base, d, vec)
    pm, _ = resolve_cycle(sr.complex, d, sr.cycle)
    return sr, pm


# ---------------------------------------------------------------------------
# bounding in a good neighborhood

@dataclass
class BoundResult:
    neighborhood: GoodNeighborhood
    chain: list                 # y with boundary(y) = fundamental cycle
    collapse_pairs: int
    collapsed_dim: int


def bound_in_good_neighborhood(P: Pseudomanifold, base: Complex, tower,
                               max_subdiv: int = 2):
    """Either a (k-1)-good neighborhood of a bounding chain for P's
    fundamental cycle, or NotNullHomologous with the class as witness.

    `base` and `tower` describe how P's ambient complex sits over the base
    complex (empty tower when they coincide)."""
    from .cochains import homology
    d = P.dim
    k = d + 1
    ambient = P.map_to_ambient.target
    zP = P.ambient_cycle()
    z_base = zP
    for sd in reversed(tower):
        z_base = sd.last_vertex.push_chain(d, z_base)
    hom = homology(base, d)
    coords = hom.project_chain(z_base)
    if any(coords):
        return NotNullHomologous(coords, hom.fg.describe())
    if base.dim < k:
        raise DimensionError("ambient dimension is below the bounding degree")
    from .cochains import _snf_boundary
    w = zlin.solve_integer([], zP, fact=_snf_boundary(ambient, k))
    assert w is not None, "null-homologous cycle must bound"
    if base.dim == k:
        # the cycle separates; pick the compact side by shifting with
        # multiples of the fundamental top cycles
        w = _normalize_top_chain(ambient, k, w)
        if any(abs(c) > 1 for c in w):
            raise GeometryBudgetExceeded(
                "bounding chain cannot be normalized to unit coefficients")
    elif any(abs(c) > 1 for c in w):
        sr = _split_chain(ambient, k, w)
        ambient = sr.complex
        w = sr.cycle
        zP = sr.transport_chain(d, zP)
    # neighborhood of the support of w (which contains |P|)
    support = [ambient.simplices[k][i] for i, c in enumerate(w) if c]
    support += [ambient.simplices[d][i] for i, c in enumerate(zP) if c]
    K = subcomplex_from_simplices(ambient, support)
    nb = good_neighborhood(ambient, K, d, max_subdiv)
    y = w
    for sd in nb.tower:
        y = sd.subdivide_chain(k, y)
    zP_nb = zP
    for sd in nb.tower:
        zP_nb = sd.subdivide_chain(d, zP_nb)
    y_local = nb.chain_to_neighborhood(k, y)
    db = nb.complex.boundary_of_chain(k, y_local)
    z_local = nb.chain_to_neighborhood(d, zP_nb)
    assert db == z_local, "bounding chain boundary mismatch inside U'"
    pairs, dim_left = _greedy_collapse(nb.complex)
    return BoundResult(nb, y_local, pairs, dim_left)


def _normalize_top_chain(cx: Complex, k: int, w):
    """Shift by top-cycle multiples so coefficients land in {-1, 0, 1}."""
    from .cochains import cycle_basis
    if all(abs(c) <= 1 for c in w):
        return w
    for F in cycle_basis(cx, k):
        for t in sorted(set(w)):
            cand = [c - t * f for c, f in zip(w, F)]
            if all(abs(c) <= 1 for c in cand):
                return cand
            cand = [c + t * f for c, f in zip(w, F)]
            if all(abs(c) <= 1 for c in cand):
                return cand
    return w


def _greedy_collapse(cx: Complex):
    """Greedy free-face collapse; returns (pairs removed, top dimension
    left). A certificate of how far the neighborhood deflates, reported
    alongside the direct cohomology check, never instead of it."""
    alive = [set(range(cx.n_simplices(d))) for d in range(cx.dim + 1)]
    cofaces: list[dict] = [dict() for _ in range(cx.dim + 1)]
    for d in range(1, cx.dim + 1):
        for i, col in enumerate(cx.faces_with_signs(d)):
            for r, _ in col:
                cofaces[d - 1].setdefault(r, set()).add(i)
    pairs = 0
    progress = True
    while progress:
        progress = False
        for d in range(cx.dim - 1, -1, -1):
            for i in sorted(alive[d]):
                up = {j for j in cofaces[d].get(i, ()) if j in alive[d + 1]}
                if len(up) == 1:
                    j = up.pop()
                    higher = False
                    if d + 2 <= cx.dim:
                        for jj in cofaces[d + 1].get(j, ()):
                            if jj in alive[d + 2]:
                                higher = True
                                break
                    if higher:
                        continue
                    alive[d].discard(i)
                    alive[d + 1].discard(j)
                    pairs += 1
                    progress = True
    dim_left = max((d for d in range(cx.dim + 1) if alive[d]), default=0)
    return pairs, dim_left


# ---------------------------------------------------------------------------
# verification suite

def verify_normalization(base: Complex, d: int, vec, rng=None) -> list[CheckResult]:
    """Normalization identity, pseudomanifold validity and support
    containment for one cycle."""
    results = []
    sr, pm = normalize_cycle(base, d, vec)
    Y = sr.complex
    ok_pm = is_pseudomanifold(pm)
    results.append(check("surgery.is_pseudomanifold", ok_pm,
                         f"{Y.name}: {sum(1 for c in pm.fundamental_cycle if c)} top cells"))
    fund = pm.ambient_cycle()
    db = Y.boundary_of_chain(d + 1, sr.witness)
    identity_ok = all(t == b + f for t, b, f in zip(sr.transported, db, fund))
    results.append(check("surgery.homology_identity", identity_ok,
                         "transported z = boundary(b) + P"))
    if any(c for c in sr.witness):
        star = closed_star_neighborhood(
            Y, chain_support(Y, d, sr.transported))
        wit_support = chain_support(Y, d + 1, sr.witness)
        contained = all(wit_support.included[dd] <= star.included[dd]
                        for dd in range(len(wit_support.included)))
        results.append(check("surgery.witness_in_closed_star", contained,
                             "splitting homologies stay near the cycle"))
    return results
