"""Dev scratch: construct candidate corpus complexes and verify their homology
with sympy as an independent oracle. Not part of the deliverable."""
from itertools import combinations
from sympy import Matrix
from sympy.matrices.normalforms import invariant_factors


def close_faces(top_simplices):
    simp = {}
    for s in top_simplices:
        s = tuple(sorted(s))
        assert len(set(s)) == len(s), f"degenerate {s}"
        for r in range(1, len(s) + 1):
            for f in combinations(s, r):
                simp.setdefault(len(f) - 1, set()).add(f)
    return {d: sorted(v) for d, v in simp.items()}


def boundary(simp, j):
    rows = simp.get(j - 1, [])
    cols = simp.get(j, [])
    idx = {s: i for i, s in enumerate(rows)}
    M = [[0] * len(cols) for _ in rows]
    for c, s in enumerate(cols):
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            M[idx[face]][c] = (-1) ** i
    return M


def homology(top):
    simp = close_faces(top)
    dim = max(simp)
    out = []
    for j in range(0, dim + 1):
        dj = Matrix(boundary(simp, j)) if j > 0 else Matrix(0, len(simp[0]), [])
        dj1 = Matrix(boundary(simp, j + 1)) if j + 1 <= dim else Matrix(len(simp[j]), 0, [])
        n_j = len(simp[j])
        rank_dj = dj.rank() if dj.rows and dj.cols else 0
        rank_dj1 = dj1.rank() if dj1.rows and dj1.cols else 0
        betti = n_j - rank_dj - rank_dj1
        tors = [d for d in invariant_factors(dj1) if d not in (0, 1)] if dj1.cols else []
        out.append((betti, tors))
    counts = [len(simp.get(d, [])) for d in range(dim + 1)]
    return out, counts


def edge_cofaces_ok(top):
    """closed surface check: every edge in exactly two triangles"""
    simp = close_faces(top)
    cnt = {e: 0 for e in simp[1]}
    for t in simp[2]:
        for e in combinations(t, 2):
            cnt[e] += 1
    return sorted(set(cnt.values()))


# 7-vertex torus (Moebius-Kuehnel)
t2 = [tuple(sorted(((i % 7), ((i + 1) % 7), ((i + 3) % 7)))) for i in range(7)] + \
     [tuple(sorted(((i % 7), ((i + 2) % 7), ((i + 3) % 7)))) for i in range(7)]
print("T2:", homology(t2), "edge cofaces", edge_cofaces_ok(t2))

# 6-vertex RP2
rp2 = [(0, 1, 2), (0, 2, 3), (0, 1, 5), (0, 3, 4), (0, 4, 5),
       (1, 2, 4), (1, 3, 4), (1, 3, 5), (2, 3, 5), (2, 4, 5)]
print("RP2:", homology(rp2), "edge cofaces", edge_cofaces_ok(rp2))

# S2 = boundary of tetrahedron
s2 = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
print("S2:", homology(s2), "edge cofaces", edge_cofaces_ok(s2))


def klein_grid(n, m):
    """n columns (torus wrap), m rows (flip wrap)."""
    def v(i, j):
        if j == m:
            return (n - i) % n  # row m identified with row 0 reflected
        return j * n + (i % n)
    tris = []
    for j in range(m):
        for i in range(n):
            a, b, c, d = v(i, j), v(i + 1, j), v(i, j + 1), v(i + 1, j + 1)
            tris.append(tuple(sorted((a, b, d))))
            tris.append(tuple(sorted((a, d, c))))
    # validity: distinct vertices per triangle, no duplicate triangles
    ok = all(len(set(t)) == 3 for t in tris) and len(set(tris)) == len(tris)
    return tris, ok


for (n, m) in [(3, 3), (4, 3), (3, 4), (4, 4)]:
    tris, ok = klein_grid(n, m)
    if not ok:
        print(f"klein {n}x{m}: invalid (degenerate or duplicate)")
        continue
    h, counts = homology(tris)
    print(f"klein {n}x{m}: counts={counts} H={h} edges-cofaces={edge_cofaces_ok(tris)}")

# Moore space M(Z/3,1): disk (center c + middle ring m0..m8) glued 3:1 onto circle a0,a1,a2
C = 0
M = [1 + i for i in range(9)]        # middle ring
A = [10, 11, 12]                     # inner circle a0,a1,a2
moore = []
for i in range(9):
    moore.append(tuple(sorted((C, M[i], M[(i + 1) % 9]))))          # cap fan
for i in range(9):
    a_i = A[i % 3]
    a_i1 = A[(i + 1) % 3]
    moore.append(tuple(sorted((M[i], M[(i + 1) % 9], a_i1))))
    moore.append(tuple(sorted((M[i], a_i, a_i1))))
ok = all(len(set(t)) == 3 for t in moore) and len(set(moore)) == len(moore)
print("moore valid:", ok)
print("Moore:", homology(moore))
