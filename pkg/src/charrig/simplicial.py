"""Finite oriented simplicial complexes, simplicial maps, barycentric
subdivision and closed-star neighborhoods.

Simplices are strictly increasing vertex tuples; the orientation is the
given vertex order and the boundary operator uses the alternating-sign
face convention. Simplex indexing within a dimension is lexicographic,
so every derived object is reproducible.
"""
from __future__ import annotations

import json
from itertools import combinations


class ParseError(Exception):
    pass


class FaceClosureError(Exception):
    pass


class DuplicateError(Exception):
    pass


class DegreeError(Exception):
    pass


class MismatchError(Exception):
    pass


class Complex:
    """Immutable simplicial complex with integer boundary matrices."""

    def __init__(self, name: str, simplices_by_dim, vertex_count: int | None = None):
        self.name = name
        cleaned = []
        for d, simps in enumerate(simplices_by_dim):
            seen = set()
            for s in simps:
                t = tuple(s)
                if len(t) != d + 1:
                    raise ParseError(f"simplex {t} listed in dimension {d}")
                if any(t[i] >= t[i + 1] for i in range(d)):
                    raise ParseError(f"simplex {t} is not strictly increasing")
                if t in seen:
                    raise DuplicateError(f"duplicate simplex {t}")
                seen.add(t)
            cleaned.append(tuple(sorted(seen)))
        while cleaned and not cleaned[-1]:
            cleaned.pop()
        if not cleaned:
            raise ParseError("complex has no simplices")
        max_vertex = max((v for s in cleaned[0] for v in s), default=-1)
        if vertex_count is None:
            vertex_count = max_vertex + 1
        elif vertex_count < max_vertex + 1:
            raise ParseError(f"vertex_count {vertex_count} below maximum index {max_vertex}")
        self.vertex_count = vertex_count
        self.simplices = tuple(cleaned)
        self.index = tuple({s: i for i, s in enumerate(level)} for level in cleaned)
        self._validate_closure()
        self._cache: dict = {}

    # -- structure ---------------------------------------------------------

    def _validate_closure(self):
        for d in range(1, len(self.simplices)):
            lower = self.index[d - 1]
            for s in self.simplices[d]:
                for i in range(d + 1):
                    face = s[:i] + s[i + 1:]
                    if face not in lower:
                        raise FaceClosureError(f"face {face} of {s} is missing")

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def n_simplices(self, j: int) -> int:
        if 0 <= j <= self.dim:
            return len(self.simplices[j])
        return 0

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(level) for d, level in enumerate(self.simplices))

    def simplex_index(self, s) -> int:
        t = tuple(s)
        d = len(t) - 1
        if not (0 <= d <= self.dim) or t not in self.index[d]:
            raise KeyError(f"{t} is not a simplex of {self.name}")
        return self.index[d][t]

    def faces_with_signs(self, j: int):
        """For each j-simplex, the list of ((j-1)-simplex index, sign)."""
        key = ("faces", j)
        if key not in self._cache:
            out = []
            if 1 <= j <= self.dim:
                lower = self.index[j - 1]
                for s in self.simplices[j]:
                    out.append(tuple((lower[s[:i] + s[i + 1:]], (-1) ** i)
                                     for i in range(j + 1)))
            self._cache[key] = tuple(out)
        return self._cache[key]

    def boundary_matrix(self, j: int):
        """Matrix of the boundary operator C_j -> C_{j-1}.

        Accepts 0 <= j <= dim+1; the extremes give matrices with an empty
        side (a point complex has a 1x0 boundary in degree 1).
        """
        if not (0 <= j <= self.dim + 1):
            raise DegreeError(f"degree {j} out of range for {self.name} (dim {self.dim})")
        return self._boundary_any(j)

    def _boundary_any(self, j: int):
        key = ("boundary", j)
        if key not in self._cache:
            rows = self.n_simplices(j - 1) if j >= 1 else 0
            cols = self.n_simplices(j)
            mat = [[0] * cols for _ in range(rows)]
            if rows and cols:
                for c, col in enumerate(self.faces_with_signs(j)):
                    for r, sign in col:
                        mat[r][c] = sign
            self._cache[key] = mat
        return self._cache[key]

    def boundary_of_chain(self, j: int, vec):
        """Apply the boundary operator to a j-chain coefficient vector."""
        rows = self.n_simplices(j - 1) if j >= 1 else 0
        out = [0] * rows
        if 1 <= j <= self.dim:
            for c, coef in enumerate(vec):
                if coef:
                    for r, sign in self.faces_with_signs(j)[c]:
                        out[r] += sign * coef
        return out

    def is_cycle(self, j: int, vec) -> bool:
        return all(v == 0 for v in self.boundary_of_chain(j, vec))

    def __repr__(self):
        counts = ",".join(str(len(l)) for l in self.simplices)
        return f"Complex({self.name}: {counts})"


def complex_from_maximal(name: str, maximal, vertex_count: int | None = None) -> Complex:
    """Build a complex from maximal simplices, generating all faces."""
    by_dim: dict[int, set] = {}
    listed = set()
    for s in maximal:
        t = tuple(s)
        if len(set(t)) != len(t):
            raise ParseError(f"simplex {t} has repeated vertices")
        if any(t[i] >= t[i + 1] for i in range(len(t) - 1)):
            raise ParseError(f"simplex {t} is not strictly increasing")
        if t in listed:
            raise DuplicateError(f"duplicate simplex {t}")
        listed.add(t)
        for r in range(1, len(t) + 1):
            for f in combinations(t, r):
                by_dim.setdefault(r - 1, set()).add(f)
    if vertex_count is not None:
        for v in range(vertex_count):
            by_dim.setdefault(0, set()).add((v,))
    dims = max(by_dim) if by_dim else 0
    levels = [sorted(by_dim.get(d, ())) for d in range(dims + 1)]
    return Complex(name, levels, vertex_count)


def parse_complex(document: str) -> Complex:
    """Parse the JSON complex-description format.

    Fields: `name`, optional `dimension`, optional `vertices` (count),
    `simplices` = maximal simplices (faces auto-generated), optional
    `explicit` = true to declare `simplices` as the full face-closed list.
    """
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as e:
        raise ParseError(f"not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    name = doc.get("name")
    if not isinstance(name, str) or not name:
        raise ParseError("missing or invalid 'name'")
    simps = doc.get("simplices")
    if not isinstance(simps, list) or not simps:
        raise ParseError("missing or empty 'simplices'")
    for s in simps:
        if not isinstance(s, list) or not all(isinstance(v, int) and v >= 0 for v in s):
            raise ParseError(f"bad simplex entry {s!r}")
    vertices = doc.get("vertices")
    if vertices is not None and (not isinstance(vertices, int) or vertices < 0):
        raise ParseError("'vertices' must be a nonnegative integer")
    if doc.get("explicit", False):
        by_dim: dict[int, list] = {}
        for s in simps:
            by_dim.setdefault(len(s) - 1, []).append(tuple(s))
        levels = [by_dim.get(d, []) for d in range(max(by_dim) + 1)]
        cx = Complex(name, levels, vertices)
    else:
        cx = complex_from_maximal(name, [tuple(s) for s in simps], vertices)
    dimension = doc.get("dimension")
    if dimension is not None and dimension != cx.dim:
        raise ParseError(f"declared dimension {dimension}, actual {cx.dim}")
    return cx


def load_complex(path) -> Complex:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_complex(fh.read())


# ---------------------------------------------------------------------------
# subcomplexes

class Subcomplex:
    """Face-closed selection of simplices of a parent complex."""

    def __init__(self, parent: Complex, included):
        self.parent = parent
        self.included = tuple(frozenset(level) for level in included)
        while len(self.included) < len(parent.simplices):
            self.included = self.included + (frozenset(),)
        for d in range(1, len(parent.simplices)):
            lower = parent.index[d - 1]
            for idx in self.included[d]:
                s = parent.simplices[d][idx]
                for i in range(d + 1):
                    if lower[s[:i] + s[i + 1:]] not in self.included[d - 1]:
                        raise FaceClosureError(
                            f"subcomplex not face-closed at {s}")

    def is_empty(self) -> bool:
        return all(not level for level in self.included)

    def vertex_set(self):
        return frozenset(self.parent.simplices[0][i][0] for i in self.included[0])

    def simplex_lists(self):
        return [sorted(self.parent.simplices[d][i] for i in level)
                for d, level in enumerate(self.included)]

    def contains(self, d: int, idx: int) -> bool:
        return d < len(self.included) and idx in self.included[d]

    def as_complex(self, name: str | None = None):
        """Standalone complex plus the inclusion map into the parent.

        Vertices are renumbered order-preservingly, so orientations agree.
        """
        if self.is_empty():
            raise ValueError("empty subcomplex has no standalone complex")
        verts = sorted(self.vertex_set())
        renum = {v: i for i, v in enumerate(verts)}
        levels = []
        for d, level in enumerate(self.included):
            levels.append([tuple(renum[v] for v in self.parent.simplices[d][i])
                           for i in sorted(level)])
        while levels and not levels[-1]:
            levels.pop()
        sub = Complex(name or f"{self.parent.name}|sub", levels, len(verts))
        incl = SimplicialMap(sub, self.parent, verts)
        return sub, incl


def subcomplex_from_simplices(parent: Complex, simplices) -> Subcomplex:
    """Face closure of the given simplices inside the parent."""
    included = [set() for _ in parent.simplices]
    for s in simplices:
        t = tuple(s)
        for r in range(1, len(t) + 1):
            for f in combinations(t, r):
                included[r - 1].add(parent.index[r - 1][f])
    return Subcomplex(parent, included)


def chain_support(parent: Complex, j: int, vec) -> Subcomplex:
    """Face closure of the simplices carrying nonzero coefficients."""
    simps = [parent.simplices[j][i] for i, c in enumerate(vec) if c]
    return subcomplex_from_simplices(parent, simps)


def closed_star_neighborhood(parent: Complex, K: Subcomplex) -> Subcomplex:
    """Closed star of K's vertex set: every simplex meeting it, plus faces."""
    if K.parent is not parent:
        raise MismatchError("subcomplex belongs to a different complex")
    verts = K.vertex_set()
    if not verts:
        return Subcomplex(parent, [set() for _ in parent.simplices])
    hits = []
    for level in parent.simplices:
        for s in level:
            if any(v in verts for v in s):
                hits.append(s)
    return subcomplex_from_simplices(parent, hits)


# ---------------------------------------------------------------------------
# simplicial maps

def _sort_sign(seq):
    """Sorted tuple and permutation parity; None when entries repeat."""
    if len(set(seq)) != len(seq):
        return None, 0
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return tuple(sorted(seq)), (-1) ** inv


class SimplicialMap:
    """Vertex map carrying every source simplex onto a target simplex."""

    def __init__(self, source: Complex, target: Complex, vertex_map):
        self.source = source
        self.target = target
        vm = tuple(vertex_map)
        if len(vm) != source.vertex_count:
            raise MismatchError("vertex map length differs from vertex count")
        if any(not (0 <= w < target.vertex_count) for w in vm):
            raise MismatchError("vertex map leaves the target vertex range")
        self.vertex_map = vm
        for level in source.simplices:
            for s in level:
                image = tuple(sorted(set(vm[v] for v in s)))
                d = len(image) - 1
                if d > target.dim or image not in target.index[d]:
                    raise MismatchError(
                        f"image of {s} does not span a target simplex")
        self._columns: dict = {}

    def chain_columns(self, j: int):
        """Sparse induced chain map: per source j-simplex, (target idx, sign)
        or None for a degenerate image."""
        if j not in self._columns:
            cols = []
            for s in self.source.simplices[j] if 0 <= j <= self.source.dim else ():
                image = tuple(self.vertex_map[v] for v in s)
                sorted_img, sign = _sort_sign(image)
                if sorted_img is None:
                    cols.append(None)
                else:
                    cols.append((self.target.index[j][sorted_img], sign))
            self._columns[j] = tuple(cols)
        return self._columns[j]

    def induced_chain_map(self, j: int):
        """Dense matrix of the induced map on j-chains."""
        rows = self.target.n_simplices(j)
        cols = self.source.n_simplices(j)
        mat = [[0] * cols for _ in range(rows)]
        if cols:
            for c, entry in enumerate(self.chain_columns(j)):
                if entry is not None:
                    mat[entry[0]][c] = entry[1]
        return mat

    def push_chain(self, j: int, vec):
        out = [0] * self.target.n_simplices(j)
        for c, coef in enumerate(vec):
            if coef:
                entry = self.chain_columns(j)[c]
                if entry is not None:
                    out[entry[0]] += entry[1] * coef
        return out

    def pull_values(self, j: int, values):
        """Transpose action on cochain value vectors."""
        out = [0] * self.source.n_simplices(j)
        if 0 <= j <= self.source.dim:
            for c, entry in enumerate(self.chain_columns(j)):
                if entry is not None:
                    out[c] = entry[1] * values[entry[0]]
        return out

    def is_monotone(self) -> bool:
        """True when the vertex map is weakly increasing on every simplex,
        which is what cochain-level cup functoriality needs."""
        vm = self.vertex_map
        for level in self.source.simplices[1:]:
            for s in level:
                for a, b in zip(s, s[1:]):
                    if vm[a] > vm[b]:
                        return False
        return True

    def compose(self, inner: "SimplicialMap") -> "SimplicialMap":
        """self after inner (inner.target must be self.source)."""
        if inner.target is not self.source:
            raise MismatchError("maps do not compose")
        vm = tuple(self.vertex_map[w] for w in inner.vertex_map)
        return SimplicialMap(inner.source, self.target, vm)


def identity_map(cx: Complex) -> SimplicialMap:
    return SimplicialMap(cx, cx, range(cx.vertex_count))


# ---------------------------------------------------------------------------
# barycentric subdivision

class Subdivision:
    """One barycentric subdivision with carrier and transport data.

    `complex` is the subdivided complex; new vertex i corresponds to the old
    simplex `vertex_carrier[i]` (a (dim, index) pair). `carrier[j][i]` is the
    smallest old simplex containing new j-simplex i. `chain_map(j)` is the
    subdivision chain map C_j(old) -> C_j(new), and `last_vertex` is the
    simplicial map new -> old sending each barycenter to the top vertex of
    its simplex; the two compose to the identity on old chains.
    """

    def __init__(self, base: Complex):
        self.base = base
        offset = []
        total = 0
        for level in base.simplices:
            offset.append(total)
            total += len(level)
        self.vertex_of = offset  # offset[d] + idx = new vertex id
        vertex_carrier = []
        for d, level in enumerate(base.simplices):
            vertex_carrier.extend((d, i) for i in range(len(level)))
        self.vertex_carrier = tuple(vertex_carrier)

        # all inclusion chains in the face poset, indexed by top simplex
        chains_at: list[list[list]] = [[] for _ in range(total)]
        faces_of: list[list[int]] = [[] for _ in range(total)]
        for d, level in enumerate(base.simplices):
            for i, s in enumerate(level):
                me = offset[d] + i
                props = set()
                for r in range(1, d + 1):
                    for f in combinations(s, r):
                        props.add(offset[r - 1] + base.index[r - 1][f])
                faces_of[me] = sorted(props)
                mine = [[me]]
                for f in faces_of[me]:
                    for c in chains_at[f]:
                        mine.append(c + [me])
                chains_at[me] = mine
        by_dim: list[list[tuple]] = [[] for _ in range(base.dim + 1)]
        carrier_of: dict[tuple, tuple] = {}
        for me in range(total):
            for c in chains_at[me]:
                t = tuple(c)
                by_dim[len(c) - 1].append(t)
                carrier_of[t] = self.vertex_carrier[me]
        levels = [sorted(lvl) for lvl in by_dim]
        self.complex = Complex(f"sd({base.name})", levels, total)
        self.carrier = tuple(
            tuple(carrier_of[s] for s in self.complex.simplices[d])
            for d in range(self.complex.dim + 1))
        lv = tuple(base.simplices[d][i][-1] for (d, i) in self.vertex_carrier)
        self.last_vertex = SimplicialMap(self.complex, base, lv)
        self._sd_cols: dict = {}

    def new_vertex(self, d: int, idx: int) -> int:
        return self.vertex_of[d] + idx

    def _sd_simplex(self, d: int, idx: int):
        """Subdivision chain of one old simplex: list of (new idx, sign)."""
        key = (d, idx)
        if key in self._sd_cols:
            return self._sd_cols[key]
        if d == 0:
            out = (((self.complex.index[0][(self.new_vertex(0, idx),)]), 1),)
        else:
            apex = self.new_vertex(d, idx)
            acc: dict[int, int] = {}
            s = self.base.simplices[d][idx]
            for i in range(d + 1):
                face = s[:i] + s[i + 1:]
                fidx = self.base.index[d - 1][face]
                fsign = (-1) ** i
                for new_idx, sign in self._sd_simplex(d - 1, fidx):
                    tup = self.complex.simplices[d - 1][new_idx] + (apex,)
                    ni = self.complex.index[d][tup]
                    acc[ni] = acc.get(ni, 0) + fsign * sign
            par = (-1) ** d  # makes boundary commute with subdivision
            out = tuple((i, par * v) for i, v in sorted(acc.items()) if v)
        self._sd_cols[key] = out
        return out

    def chain_map(self, j: int):
        """Sparse columns of sd: per old j-simplex, tuple of (new idx, sign)."""
        return tuple(self._sd_simplex(j, i)
                     for i in range(self.base.n_simplices(j)))

    def subdivide_chain(self, j: int, vec):
        out = [0] * self.complex.n_simplices(j)
        for i, coef in enumerate(vec):
            if coef:
                for ni, sign in self._sd_simplex(j, i):
                    out[ni] += sign * coef
        return out

    def transport_values(self, j: int, values):
        """Cochain values old -> new (pullback along last_vertex)."""
        return self.last_vertex.pull_values(j, values)

    def restrict_values(self, j: int, values):
        """Cochain values new -> old (transpose of the subdivision map)."""
        out = [0] * self.base.n_simplices(j)
        for i in range(self.base.n_simplices(j)):
            acc = 0
            for ni, sign in self._sd_simplex(j, i):
                acc += sign * values[ni]
            out[i] = acc
        return out


def barycentric_subdivide(base: Complex) -> Subdivision:
    key = "subdivision"
    if key not in base._cache:
        base._cache[key] = Subdivision(base)
    return base._cache[key]


def subdivision_tower(base: Complex, levels: int):
    """[Subdivision at depth 1, ..., depth `levels`], cached on the base."""
    tower = []
    cx = base
    for _ in range(levels):
        sd = barycentric_subdivide(cx)
        tower.append(sd)
        cx = sd.complex
    return tower
