"""Exact integer and rational linear algebra.

Everything here works with arbitrary-precision Python ints and Fractions;
no floating point is used anywhere. The central routine is a Smith normal
form with unimodular transforms (and their inverses), from which integer
solvability, kernels, cokernels and finitely generated abelian group
presentations are derived.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class ShapeError(Exception):
    pass


# ---------------------------------------------------------------------------
# dense matrix helpers (lists of lists, row-major)

def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(m, n):
    return [[0] * n for _ in range(m)]


def transpose(a):
    return [list(col) for col in zip(*a)] if a else []


def mat_mul(a, b):
    if a and b and len(a[0]) != len(b):
        raise ShapeError(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0])}")
    if not b:
        return [[] for _ in a] if a and not a[0] else [[0] * 0 for _ in a]
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a, v):
    if a and len(a[0]) != len(v):
        raise ShapeError(f"cannot apply {len(a)}x{len(a[0])} to vector of length {len(v)}")
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def vec_dot(u, v):
    if len(u) != len(v):
        raise ShapeError("dot product length mismatch")
    return sum(x * y for x, y in zip(u, v))


def mat_eq(a, b):
    return a == b


# ---------------------------------------------------------------------------
# Smith normal form

@dataclass(frozen=True)
class SNFResult:
    """U @ A @ V == S with U, V unimodular.

    S is diagonal with nonnegative entries d_0 | d_1 | ... (zeros trailing);
    only the diagonal is stored. Uinv and Vinv are the exact inverses,
    carried along during elimination because recovering them afterwards
    would cost another elimination.
    """
    shape: tuple[int, int]
    diag: tuple[int, ...]
    U: list
    V: list
    Uinv: list
    Vinv: list

    @property
    def S(self):
        m, n = self.shape
        s = zeros(m, n)
        for i, d in enumerate(self.diag):
            s[i][i] = d
        return s

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d != 0)


def smith_normal_form(a, ncols: int | None = None) -> SNFResult:
    """Smith normal form over Z.

    Pivot choice: smallest absolute value in the active submatrix, ties
    broken by row index then column index, which keeps the result
    deterministic and bounds coefficient growth.

    `ncols` disambiguates the column count of a 0-row matrix, which the
    list-of-lists representation cannot express.
    """
    m = len(a)
    n = len(a[0]) if m else (ncols or 0)
    # sparse working copy: per-row dict col -> value, plus per-column row sets
    rows = [{j: int(x) for j, x in enumerate(r) if x} for r in a]
    col_rows = [set() for _ in range(n)]
    for i, r in enumerate(rows):
        for j in r:
            col_rows[j].add(i)
    U = identity(m)
    Uinv = identity(m)
    V = identity(n)
    Vinv = identity(n)

    def row_op(i, t, q):
        # row_i -= q * row_t
        rt = rows[t]
        ri = rows[i]
        for j, val in rt.items():
            new = ri.get(j, 0) - q * val
            if new:
                ri[j] = new
                col_rows[j].add(i)
            elif j in ri:
                del ri[j]
                col_rows[j].discard(i)
        Ui, Ut = U[i], U[t]
        for c in range(m):
            Ui[c] -= q * Ut[c]
        for r in range(m):
            Uinv[r][t] += q * Uinv[r][i]

    def col_op(j, t, q):
        # col_j -= q * col_t
        for i in list(col_rows[t]):
            ri = rows[i]
            new = ri.get(j, 0) - q * ri[t]
            if new:
                ri[j] = new
                col_rows[j].add(i)
            elif j in ri:
                del ri[j]
                col_rows[j].discard(i)
        for r in range(n):
            V[r][j] -= q * V[r][t]
        Vt, Vj = Vinv[t], Vinv[j]
        for c in range(n):
            Vt[c] += q * Vj[c]

    def row_swap(i, t):
        if i == t:
            return
        touched = set(rows[i]) | set(rows[t])
        rows[i], rows[t] = rows[t], rows[i]
        for j in touched:
            for r in (i, t):
                if j in rows[r]:
                    col_rows[j].add(r)
                else:
                    col_rows[j].discard(r)
        U[i], U[t] = U[t], U[i]
        for r in range(m):
            Uinv[r][i], Uinv[r][t] = Uinv[r][t], Uinv[r][i]

    def col_swap(j, t):
        if j == t:
            return
        for i in col_rows[j] | col_rows[t]:
            ri = rows[i]
            vj, vt = ri.pop(j, None), ri.pop(t, None)
            if vt is not None:
                ri[j] = vt
            if vj is not None:
                ri[t] = vj
        col_rows[j], col_rows[t] = col_rows[t], col_rows[j]
        for r in range(n):
            V[r][j], V[r][t] = V[r][t], V[r][j]
        Vinv[j], Vinv[t] = Vinv[t], Vinv[j]

    def row_negate(i):
        for j in rows[i]:
            rows[i][j] = -rows[i][j]
        U[i] = [-x for x in U[i]]
        for r in range(m):
            Uinv[r][i] = -Uinv[r][i]

    def find_pivot(t):
        best = None
        for i in range(t, m):
            for j, val in rows[i].items():
                if j < t:
                    continue
                key = (abs(val), i, j)
                if best is None or key < best:
                    best = key
        return None if best is None else (best[1], best[2])

    diag = []
    t = 0
    limit = min(m, n)
    while t < limit:
        piv = find_pivot(t)
        if piv is None:
            break
        row_swap(piv[0], t)
        col_swap(piv[1], t)
        if rows[t][t] < 0:
            row_negate(t)
        while True:
            # clear column t with floor-division remainders, Euclid style
            progressed = True
            while progressed:
                progressed = False
                p = rows[t][t]
                for i in sorted(col_rows[t]):
                    if i == t:
                        continue
                    q = rows[i][t] // p
                    if q:
                        row_op(i, t, q)
                rem = sorted(i for i in col_rows[t] if i != t)
                if rem:
                    i_min = min(rem, key=lambda i: (rows[i][t], i))
                    row_swap(i_min, t)
                    progressed = True
            # clear row t
            p = rows[t][t]
            for j in sorted(rows[t]):
                if j == t:
                    continue
                q = rows[t][j] // p
                if q:
                    col_op(j, t, q)
            rem = sorted(j for j in rows[t] if j != t)
            if rem:
                j_min = min(rem, key=lambda j: (rows[t][j], j))
                col_swap(j_min, t)
                continue  # column t dirtied by the swap
            if len(col_rows[t]) > 1:
                continue
            p = rows[t][t]
            if p > 1:
                # divisibility sweep: pivot must divide the remaining block
                bad = None
                for i in range(t + 1, m):
                    for j, val in rows[i].items():
                        if val % p:
                            bad = (i, j) if bad is None else min(bad, (i, j))
                            break
                if bad is not None:
                    row_op(t, bad[0], -1)  # row_t += row_bad
                    continue
            break
        diag.append(rows[t][t])
        t += 1
    diag.extend([0] * (limit - len(diag)))
    return SNFResult((m, n), tuple(diag), U, V, Uinv, Vinv)


def kernel_basis(a, fact: SNFResult | None = None, ncols: int | None = None):
    """Columns form a Z-basis of ker(a); returned as a list of columns."""
    if fact is None:
        fact = smith_normal_form(a, ncols=ncols)
    n = fact.shape[1]
    r = fact.rank
    return [[fact.V[i][j] for i in range(n)] for j in range(r, n)]


def solve_integer(a, b, fact: SNFResult | None = None, ncols: int | None = None):
    """One integer solution x of a @ x == b, or None if unsolvable over Z.

    When `fact` is supplied, `a` is ignored (pass [])."""
    if fact is None:
        fact = smith_normal_form(a, ncols=ncols)
    m, n = fact.shape
    if len(b) != m:
        raise ShapeError(f"rhs length {len(b)} does not match {m} rows")
    c = mat_vec(fact.U, b)
    y = [0] * n
    r = fact.rank
    for i in range(m):
        if i < r:
            d = fact.diag[i]
            if c[i] % d:
                return None
            y[i] = c[i] // d
        elif c[i]:
            return None
    return mat_vec(fact.V, y)


@dataclass(frozen=True)
class FgAbelianGroup:
    """Finitely generated abelian group Z^rank + sum of Z/d_i.

    Coordinates are (free part, then torsion part); `gen_lift` columns send
    coordinate vectors to the ambient Z^m, and `project` is a left inverse,
    so project(gen_lift(x)) == reduce(x).
    """
    rank: int
    torsion: tuple[int, ...]
    gen_lift: tuple  # tuple of ambient column vectors, one per coordinate
    _proj_rows: tuple  # rows of U picking out each coordinate
    ambient: int

    @property
    def n_coords(self) -> int:
        return self.rank + len(self.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.n_coords == 0

    def order(self):
        """Group order, or None when infinite."""
        if self.rank:
            return None
        o = 1
        for d in self.torsion:
            o *= d
        return o

    def reduce(self, coords):
        coords = list(coords)
        if len(coords) != self.n_coords:
            raise ShapeError("coordinate length mismatch")
        for i, d in enumerate(self.torsion):
            coords[self.rank + i] %= d
        return tuple(coords)

    def project(self, v) -> tuple:
        """Coordinates of an ambient vector's class."""
        return self.reduce([vec_dot(row, v) for row in self._proj_rows])

    def lift(self, coords):
        """An ambient representative of the class with the given coordinates."""
        coords = self.reduce(coords)
        out = [0] * self.ambient
        for c, col in zip(coords, self.gen_lift):
            if c:
                for i in range(self.ambient):
                    out[i] += c * col[i]
        return out

    def zero(self) -> tuple:
        return (0,) * self.n_coords

    def describe(self) -> str:
        parts = ["Z"] * self.rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def cokernel(a, ambient: int | None = None, fact: SNFResult | None = None) -> FgAbelianGroup:
    """Presentation of Z^m / im(a).

    `ambient` must be given when `a` has no rows to disambiguate the target
    rank (an empty image inside Z^ambient).
    """
    m = len(a)
    if m == 0:
        if ambient is None:
            ambient = 0
        eye = identity(ambient)
        rows = tuple(tuple(r) for r in eye)
        return FgAbelianGroup(ambient, (), rows, rows, ambient)
    if ambient is not None and ambient != m:
        raise ShapeError("ambient rank disagrees with row count")
    if fact is None:
        fact = smith_normal_form(a)
    free_idx = list(range(fact.rank, m))
    tors_idx = [i for i in range(fact.rank) if fact.diag[i] > 1]
    torsion = tuple(fact.diag[i] for i in tors_idx)
    cols = []
    rows = []
    for i in free_idx + tors_idx:
        cols.append(tuple(fact.Uinv[r][i] for r in range(m)))
        rows.append(tuple(fact.U[i]))
    return FgAbelianGroup(len(free_idx), torsion, tuple(cols), tuple(rows), m)


# ---------------------------------------------------------------------------
# rational elimination

def solve_rational_with_fact(fact: SNFResult, b):
    """Rational solution of A x = b through an existing Smith factorization
    of the integer matrix A, or None when inconsistent. Much cheaper than
    fresh elimination when the factorization is already cached."""
    m, n = fact.shape
    if len(b) != m:
        raise ShapeError(f"rhs length {len(b)} does not match {m} rows")
    c = [sum(u * v for u, v in zip(row, b) if v) for row in fact.U]
    r = fact.rank
    y = [Fraction(0)] * n
    for i in range(m):
        if i < r:
            y[i] = Fraction(c[i], fact.diag[i])
        elif c[i]:
            return None
    out = [Fraction(0)] * n
    for i in range(n):
        row = fact.V[i]
        acc = Fraction(0)
        for t in range(r):
            if row[t] and y[t]:
                acc += row[t] * y[t]
        out[i] = acc
    return out


def solve_rational(a, b, ncols: int | None = None):
    """One rational solution x of a @ x == b, or None when inconsistent.

    Free variables are set to zero; pivoting takes the first nonzero entry,
    so the answer is deterministic.
    """
    m = len(a)
    n = len(a[0]) if m else (ncols or 0)
    if len(b) != m:
        raise ShapeError(f"rhs length {len(b)} does not match {m} rows")
    aug = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    pivots = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if aug[i][c]), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n]:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = aug[i][n]
    return x
