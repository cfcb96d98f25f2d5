"""Simplicial complexes, flag completions, nerves, and integer homology.

Homology is computed over the integers with exact arithmetic: boundary
matrices are reduced to Smith normal form with magnitude pivoting, giving
Betti numbers and torsion invariant factors per dimension.  No floating
point appears anywhere in this module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .graphs import CapExceeded, FiniteGraph

SIMPLEX_CAP = 100000


class SimplicialComplex:
    """Abstract simplicial complex given by its facets (downward closure implicit)."""

    def __init__(self, vertex_count, facets):
        self.vertex_count = int(vertex_count)
        fs = set()
        for f in facets:
            t = tuple(sorted(set(f)))
            if any(v < 0 or v >= self.vertex_count for v in t):
                raise ValueError("facet vertex out of range")
            fs.add(t)
        # keep only maximal faces
        self.facets = frozenset(
            f for f in fs if not any(set(f) < set(g) for g in fs)
        )

    def faces(self, cap=SIMPLEX_CAP):
        """All faces grouped by dimension: list of sorted lists of tuples."""
        all_faces = set()
        for f in self.facets:
            for k in range(1, len(f) + 1):
                for s in itertools.combinations(f, k):
                    all_faces.add(s)
                    if len(all_faces) > cap:
                        raise CapExceeded(f"simplex count exceeds {cap}")
        if not all_faces:
            return []
        top = max(len(s) for s in all_faces)
        return [sorted(s for s in all_faces if len(s) == k + 1) for k in range(top)]

    def dimension(self):
        return max((len(f) for f in self.facets), default=0) - 1

    def euler_characteristic(self):
        return sum((-1) ** k * len(fk) for k, fk in enumerate(self.faces()))

    def to_json(self):
        return {"n": self.vertex_count, "facets": [list(f) for f in sorted(self.facets)]}

    @staticmethod
    def from_json(data):
        return SimplicialComplex(data["n"], data["facets"])


@dataclass(frozen=True)
class HomologyProfile:
    betti: tuple  # unreduced Betti numbers b_0, b_1, ...
    torsion: tuple  # per dimension, tuple of invariant factors > 1

    def reduced_betti(self):
        b = list(self.betti)
        if b:
            b[0] -= 1
        while b and b[-1] == 0:
            b.pop()
        return tuple(b)

    def to_json(self):
        return {"betti": list(self.betti), "torsion": [list(t) for t in self.torsion]}


def flag_completion(g: FiniteGraph, cap=SIMPLEX_CAP) -> SimplicialComplex:
    """Clique complex of a graph: simplices are the cliques."""
    facets = [tuple(c) for c in _maximal_cliques(g)]
    sc = SimplicialComplex(g.n, facets)
    sc.faces(cap=cap)  # enforce the cap eagerly
    return sc


def _maximal_cliques(g):
    """Bron-Kerbosch with pivoting; deterministic order."""
    out = []

    def bk(r, p, x):
        if not p and not x:
            out.append(sorted(r))
            return
        pivot = max(p | x, key=lambda v: (len(g.adj_sets[v] & p), -v))
        for v in sorted(p - g.adj_sets[pivot]):
            bk(r | {v}, p & g.adj_sets[v], x & g.adj_sets[v])
            p = p - {v}
            x = x | {v}

    bk(set(), set(range(g.n)), set())
    return sorted(out)


def nerve(family) -> SimplicialComplex:
    """Nerve of a family of sets: simplex per subfamily with common element."""
    sets = [frozenset(s) for s in family]
    k = len(sets)
    facets = []
    # grow simplices; a subfamily is a face iff total intersection non-empty
    def extend(idx, current, inter):
        maximal = True
        for j in range(idx, k):
            ni = inter & sets[j]
            if ni:
                maximal = False
                extend(j + 1, current + [j], ni)
        # also check extensions with earlier indices for maximality only
        if maximal:
            for j in range(k):
                if j not in current and inter & sets[j]:
                    maximal = False
                    break
        if current and maximal:
            facets.append(tuple(current))

    for i in range(k):
        if sets[i]:
            extend(i + 1, [i], sets[i])
        else:
            facets.append((i,))
    if not facets:
        facets = [(i,) for i in range(k)]
    return SimplicialComplex(k, facets)


def smith_normal_form(rows):
    """Invariant factors of an integer matrix (list of lists), exact arithmetic.

    Returns the list of non-zero diagonal entries d_1 | d_2 | ... of the SNF.
    """
    m = [list(r) for r in rows]
    if not m or not m[0]:
        return []
    nr, nc = len(m), len(m[0])
    divisors = []
    top = 0
    left = 0
    while top < nr and left < nc:
        # magnitude pivoting: smallest non-zero entry in the remaining block
        pivot = None
        for i in range(top, nr):
            for j in range(left, nc):
                if m[i][j] != 0 and (pivot is None or abs(m[i][j]) < abs(m[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i0, j0 = pivot
        m[top], m[i0] = m[i0], m[top]
        for row in m:
            row[left], row[j0] = row[j0], row[left]
        # clear row and column by division steps
        while True:
            cleared = True
            for i in range(top + 1, nr):
                if m[i][left] != 0:
                    q = m[i][left] // m[top][left]
                    for j in range(left, nc):
                        m[i][j] -= q * m[top][j]
                    if m[i][left] != 0:
                        m[top], m[i] = m[i], m[top]
                        cleared = False
            for j in range(left + 1, nc):
                if m[top][j] != 0:
                    q = m[top][j] // m[top][left]
                    for i in range(top, nr):
                        m[i][j] -= q * m[i][left]
                    if m[top][j] != 0:
                        for i in range(top, nr):
                            m[i][left], m[i][j] = m[i][j], m[i][left]
                        cleared = False
            if cleared:
                break
        # divisibility fix-up: pivot must divide every remaining entry
        d = abs(m[top][left])
        fixed = True
        for i in range(top + 1, nr):
            for j in range(left + 1, nc):
                if m[i][j] % d != 0:
                    for jj in range(left, nc):
                        m[top][jj] += m[i][jj]
                    fixed = False
                    break
            if not fixed:
                break
        if not fixed:
            continue
        divisors.append(d)
        top += 1
        left += 1
    return divisors


def boundary_matrix(faces_k, faces_km1):
    """Boundary operator from k-faces to (k-1)-faces, position-parity signs."""
    index = {f: i for i, f in enumerate(faces_km1)}
    rows = [[0] * len(faces_k) for _ in faces_km1]
    for col, f in enumerate(faces_k):
        for pos in range(len(f)):
            face = f[:pos] + f[pos + 1 :]
            rows[index[face]][col] = (-1) ** pos
    return rows


def homology(sc: SimplicialComplex, cap=SIMPLEX_CAP) -> HomologyProfile:
    """Integer homology: Betti numbers and torsion per dimension."""
    faces = sc.faces(cap=cap)
    if not faces:
        return HomologyProfile(betti=(), torsion=())
    dims = len(faces)
    boundaries = []
    for k in range(1, dims):
        boundaries.append(boundary_matrix(faces[k], faces[k - 1]))
    snfs = [smith_normal_form(b) for b in boundaries]
    ranks = [len(s) for s in snfs]
    betti = []
    torsion = []
    for k in range(dims):
        nk = len(faces[k])
        rk = ranks[k - 1] if k >= 1 else 0  # rank of boundary from dim k
        rk1 = ranks[k] if k < len(ranks) else 0  # rank of boundary from dim k+1
        betti.append(nk - rk - rk1)
        if k < len(snfs):
            torsion.append(tuple(d for d in snfs[k] if abs(d) > 1))
        else:
            torsion.append(())
    return HomologyProfile(betti=tuple(betti), torsion=tuple(torsion))


def verify_boundary_squared(sc: SimplicialComplex):
    """Exact check that consecutive boundary operators compose to zero."""
    faces = sc.faces()
    for k in range(2, len(faces)):
        b1 = boundary_matrix(faces[k], faces[k - 1])
        b2 = boundary_matrix(faces[k - 1], faces[k - 2])
        for i in range(len(b2)):
            for j in range(len(b1[0])):
                s = sum(b2[i][t] * b1[t][j] for t in range(len(b1)))
                if s != 0:
                    return False
    return True


def nontrivial_in_dim(sc: SimplicialComplex, n: int) -> bool:
    """Non-zero reduced integer homology in dimension exactly n."""
    prof = homology(sc)
    if n >= len(prof.betti):
        return False
    b = prof.betti[n] - (1 if n == 0 else 0)
    tor = prof.torsion[n] if n < len(prof.torsion) else ()
    return b > 0 or bool(tor)


def sphere_profile(d, complex_profile: HomologyProfile) -> bool:
    """Whether a profile matches the d-sphere: reduced homology Z in degree d only."""
    rb = list(complex_profile.reduced_betti())
    expected = [0] * d + [1]
    if rb != expected:
        return False
    return all(not t for t in complex_profile.torsion)
