"""Median graphs: certification, hyperplanes, convexity, cubes, orientations.

A median graph is a connected graph in which every vertex triple has exactly
one median (a vertex lying on geodesics between each pair).  Certification is
by exhaustive triple check over bitset intervals; hyperplanes are computed as
union-find classes of the opposite-in-a-square relation on edges.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .graphs import CapExceeded, FiniteGraph, Permutation, induced_subgraph

CERTIFY_CAP = 4096
ORIENTATION_CAP = 20


@dataclass(frozen=True)
class MedianFailure:
    """Witness that a graph is not median."""

    reason: str  # "disconnected" | "bad-triple"
    triple: tuple | None = None
    median_count: int | None = None


@dataclass(frozen=True)
class Hyperplane:
    """An edge class plus the two halfspaces obtained by deleting it."""

    edges: frozenset
    side_minus: frozenset
    side_plus: frozenset

    def side(self, sign):
        return self.side_minus if sign == 0 else self.side_plus

    def separates(self, u, v):
        return (u in self.side_minus) != (v in self.side_minus)


class MedianGraph:
    """A certified median graph with its hyperplane decomposition."""

    def __init__(self, graph):
        self.graph = graph
        self.n = graph.n

    @cached_property
    def _intervals(self):
        """interval[u][v] as a bitmask of vertices on u-v geodesics."""
        g = self.graph
        iv = [[0] * g.n for _ in range(g.n)]
        for u in range(g.n):
            du = g.dist[u]
            for v in range(u, g.n):
                duv = du[v]
                dv = g.dist[v]
                mask = 0
                for w in range(g.n):
                    if du[w] + dv[w] == duv:
                        mask |= 1 << w
                iv[u][v] = mask
                iv[v][u] = mask
        return iv

    def interval(self, u, v):
        return self._intervals[u][v]

    def median(self, u, v, w):
        iv = self._intervals
        m = iv[u][v] & iv[v][w] & iv[u][w]
        assert m.bit_count() == 1
        return m.bit_length() - 1

    @cached_property
    def hyperplanes(self):
        return _hyperplane_decomposition(self.graph)

    @cached_property
    def _hyperplane_of_edge(self):
        out = {}
        for i, h in enumerate(self.hyperplanes):
            for e in h.edges:
                out[e] = i
        return out

    def hyperplane_index(self, a, b):
        return self._hyperplane_of_edge[(min(a, b), max(a, b))]

    @cached_property
    def _side_masks(self):
        """(minus, plus) bitmask pair per hyperplane."""
        out = []
        for h in self.hyperplanes:
            mm = sum(1 << v for v in h.side_minus)
            mp = sum(1 << v for v in h.side_plus)
            out.append((mm, mp))
        return out

    def separating_count(self, u, v):
        return sum(1 for h in self.hyperplanes if h.separates(u, v))

    def transverse(self, i, j):
        """Two hyperplanes cross iff all four side intersections are non-empty."""
        mi = self._side_masks[i]
        mj = self._side_masks[j]
        return all(mi[a] & mj[b] for a in (0, 1) for b in (0, 1))


def certify_median(g, cap=CERTIFY_CAP):
    """Certify g as median; returns MedianGraph or a MedianFailure witness."""
    if g.n > cap:
        raise CapExceeded(f"median certification capped at {cap} vertices")
    if g.n == 0 or not g.is_connected():
        return MedianFailure(reason="disconnected")
    mg = MedianGraph(g)
    iv = mg._intervals
    for u in range(g.n):
        for v in range(u + 1, g.n):
            for w in range(v + 1, g.n):
                m = iv[u][v] & iv[v][w] & iv[u][w]
                c = m.bit_count()
                if c != 1:
                    return MedianFailure(reason="bad-triple", triple=(u, v, w), median_count=c)
    # Median graphs are bipartite; reaching here the triple condition already
    # forces it, so no separate parity check is needed.
    return mg


def _hyperplane_decomposition(g):
    """Union-find closure of 'opposite edges in a 4-cycle', plus halfspaces."""
    edges = g.sorted_edges()
    index = {e: i for i, e in enumerate(edges)}
    parent = list(range(len(edges)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    # Squares a-b, c-d with a~c, b~d and the other matching absent: it is
    # enough to relate (a,b) with (c,d) whenever a-c and b-d are edges and
    # the four vertices are distinct (median graphs are triangle-free, so
    # any such configuration is an induced 4-cycle when a-d, b-c are not
    # edges; relating chords never occurs since diagonals are non-edges).
    for a, b in edges:
        for c in g.adj[a]:
            if c == b:
                continue
            for d in g.adj[b]:
                if d == a or d == c:
                    continue
                if g.has_edge(c, d) and not g.has_edge(a, d) and not g.has_edge(b, c):
                    union(index[(min(a, b), max(a, b))], index[(min(c, d), max(c, d))])

    classes = {}
    for i, e in enumerate(edges):
        classes.setdefault(find(i), []).append(e)

    out = []
    for root in sorted(classes):
        cls = classes[root]
        removed = set(cls)
        comp = _components_without(g, removed)
        if len(comp) != 2:
            raise ValueError("edge class does not split the graph in two")
        a0 = min(min(comp[0]), min(comp[1]))
        if a0 in comp[1]:
            comp = [comp[1], comp[0]]
        out.append(
            Hyperplane(
                edges=frozenset(cls),
                side_minus=frozenset(comp[0]),
                side_plus=frozenset(comp[1]),
            )
        )
    return out


def _components_without(g, removed_edges):
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        comp = {s}
        seen[s] = True
        stack = [s]
        while stack:
            v = stack.pop()
            for w in g.adj[v]:
                e = (min(v, w), max(v, w))
                if e in removed_edges or seen[w]:
                    continue
                seen[w] = True
                comp.add(w)
                stack.append(w)
        comps.append(comp)
    return comps


def convex_hull(mg, seed):
    """Intersection of all halfspaces containing the seed.

    Returns (hull, is_convex) where is_convex says the seed equals its hull.
    The halfspace computation is cross-checked against the connected plus
    locally-convex criterion.
    """
    seed = frozenset(seed)
    if not seed:
        raise ValueError("empty seed")
    hull = frozenset(range(mg.n))
    for h in mg.hyperplanes:
        if seed <= h.side_minus:
            hull &= h.side_minus
        elif seed <= h.side_plus:
            hull &= h.side_plus
    assert _is_connected_locally_convex(mg, hull), "hull fails the local-convexity cross-check"
    return hull, hull == seed


def _is_connected_locally_convex(mg, vs):
    """Connected + every 4-cycle with two consecutive edges inside stays inside."""
    g = mg.graph
    vs = set(vs)
    if not vs:
        return True
    start = next(iter(vs))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in g.adj[v]:
            if w in vs and w not in seen:
                seen.add(w)
                stack.append(w)
    if seen != vs:
        return False
    for a in vs:
        for b in g.adj[a]:
            if b not in vs:
                continue
            for c in g.adj[a]:
                if c <= b or c not in vs:
                    continue
                # b-a-c two consecutive edges; any common neighbour d != a
                # completing a square must lie inside.
                for d in g.adj[b]:
                    if d != a and d in g.adj_sets[c] and d not in vs:
                        return False
    return True


def is_convex(mg, vs):
    hull, flag = convex_hull(mg, vs)
    return flag


def gate_projection(mg, convex_set, x):
    """The gate of x in a convex set: realizes distance to every member."""
    cs = sorted(convex_set)
    if not cs:
        raise ValueError("empty set")
    if not is_convex(mg, convex_set):
        raise ValueError("gate projection requires a convex set")
    d = mg.graph.dist
    y = min(cs, key=lambda v: (d[x][v], v))
    for z in cs:
        if d[x][z] != d[x][y] + d[y][z]:
            raise AssertionError("nearest point is not a gate; set not convex?")
    return y


def helly_intersection(mg, family):
    """A common vertex of pairwise-intersecting convex sets, or a disjoint pair.

    Returns ("vertex", v) or ("disjoint", (i, j)).
    """
    fam = [frozenset(s) for s in family]
    for s in fam:
        if not is_convex(mg, s):
            raise ValueError("helly_intersection requires convex members")
    for i, j in itertools.combinations(range(len(fam)), 2):
        if not (fam[i] & fam[j]):
            return ("disjoint", (i, j))
    total = frozenset(range(mg.n))
    for s in fam:
        total &= s
    if not total:
        raise AssertionError("Helly property violated on a median graph")
    return ("vertex", min(total))


def _incident_hyperplanes(mg, v):
    """Hyperplane index per edge at v, with the opposite endpoint."""
    return [(mg.hyperplane_index(v, w), w) for w in mg.graph.adj[v]]


def _find_cube(mg, v, hyp_dirs):
    """Explicit cube spanned at v by the given (hyperplane, neighbour) pairs.

    Returns the dict subset-of-directions -> vertex, or None if some square
    fails to close.
    """
    g = mg.graph
    k = len(hyp_dirs)
    verts = {0: v}
    for size in range(1, k + 1):
        for subset in itertools.combinations(range(k), size):
            mask = sum(1 << i for i in subset)
            if size == 1:
                verts[mask] = hyp_dirs[subset[0]][1]
                continue
            i = subset[0]
            rest = mask & ~(1 << i)
            a = verts.get(rest)
            j = subset[1]
            other = mask & ~(1 << j)
            b = verts.get(other)
            base = mask & ~(1 << i) & ~(1 << j)
            c = verts.get(base)
            if a is None or b is None or c is None:
                return None
            # complete the square c-a, c-b: common neighbour of a and b other than c
            cands = [x for x in g.adj[a] if x != c and x in g.adj_sets[b]]
            if len(cands) != 1:
                return None
            verts[mask] = cands[0]
    if len(set(verts.values())) != 1 << k:
        return None
    return verts


def _local_cliques(mg, v):
    """Cliques in the crossing graph of the hyperplanes incident to v.

    Yields lists of (hyperplane index, neighbour) pairs; every subset of
    pairwise-transverse incident hyperplanes is a clique here, so cubes at v
    are found among these without enumerating all subsets.
    """
    inc = _incident_hyperplanes(mg, v)
    k = len(inc)
    cross = [
        [a != b and mg.transverse(inc[a][0], inc[b][0]) for b in range(k)] for a in range(k)
    ]

    def extend(clique, cands):
        yield [inc[i] for i in clique]
        for pos, c in enumerate(cands):
            yield from extend(clique + [c], [d for d in cands[pos + 1 :] if cross[c][d]])

    yield from extend([], list(range(k)))


def cubical_dimension(mg):
    """Size of the largest cube subgraph, via transverse hyperplanes at vertices."""
    best = 0
    for v in range(mg.n):
        for clique in _local_cliques(mg, v):
            if len(clique) > best and _find_cube(mg, v, clique) is not None:
                best = len(clique)
    return best


def enumerate_cubes(mg):
    """All cube subgraphs as a map frozenset-of-vertices -> dimension."""
    cubes = {}
    for v in range(mg.n):
        for clique in _local_cliques(mg, v):
            cube = _find_cube(mg, v, clique)
            if cube is not None:
                cubes[frozenset(cube.values())] = len(clique)
    return cubes


def cubical_subdivision(mg, cap=CERTIFY_CAP):
    """Median graph on the cubes of mg, adjacency = codimension-1 face incidence.

    Returns (subdivided MedianGraph, vertex map original -> subdivision index).
    """
    cubes = enumerate_cubes(mg)
    items = sorted(cubes.items(), key=lambda kv: (kv[1], sorted(kv[0])))
    if len(items) > cap:
        raise CapExceeded("subdivision larger than certification cap")
    index = {c: i for i, (c, _) in enumerate(items)}
    edges = []
    for c, d in items:
        if d == 0:
            continue
        for sub, dsub in items:
            if dsub == d - 1 and sub < c:
                edges.append((index[sub], index[c]))
    sg = FiniteGraph(len(items), edges)
    out = certify_median(sg)
    if not isinstance(out, MedianGraph):
        raise AssertionError("cubical subdivision failed median certification")
    vmap = {v: index[frozenset([v])] for v in range(mg.n)}
    return out, vmap


@dataclass(frozen=True)
class Orientation:
    """One side per hyperplane: 0 = minus, 1 = plus; pairwise consistent."""

    choice: tuple
    principal_vertex: int | None

    @property
    def principal(self):
        return self.principal_vertex is not None


def consistent_orientations(mg, cap=ORIENTATION_CAP):
    """All pairwise-consistent orientations, by backtracking with pruning."""
    hs = mg.hyperplanes
    if len(hs) > cap:
        raise CapExceeded(f"orientation enumeration capped at {cap} hyperplanes")
    masks = mg._side_masks
    full = (1 << mg.n) - 1
    out = []

    def rec(i, choice, inter):
        if i == len(hs):
            pv = (inter & -inter).bit_length() - 1 if inter else None
            out.append(Orientation(choice=tuple(choice), principal_vertex=pv))
            return
        for side in (0, 1):
            m = masks[i][side]
            ok = True
            for j in range(i):
                if not (masks[j][choice[j]] & m):
                    ok = False
                    break
            if ok:
                choice.append(side)
                rec(i + 1, choice, inter & m)
                choice.pop()

    rec(0, [], full)
    return sorted(out, key=lambda o: o.choice)


class GraphAction:
    """A group action on a graph, by labelled automorphism generators."""

    def __init__(self, graph, generators):
        self.graph = graph
        self.generators = dict(generators)
        for label, p in self.generators.items():
            if len(p) != graph.n or not p.is_automorphism(graph):
                raise ValueError(f"generator {label!r} is not an automorphism")

    def evaluate(self, word):
        """word: sequence of (label, exponent) pairs, applied left to right."""
        p = Permutation.identity(self.graph.n)
        for label, exp in word:
            q = self.generators[label]
            if exp < 0:
                q = q.inverse()
                exp = -exp
            for _ in range(exp):
                p = q.compose(p)
        return p

    def group_elements(self, cap=100000):
        """Closure of the generators under composition."""
        elems = {Permutation.identity(self.graph.n)}
        frontier = list(elems)
        gens = list(self.generators.values())
        gens += [g.inverse() for g in gens]
        while frontier:
            p = frontier.pop()
            for g in gens:
                q = g.compose(p)
                if q not in elems:
                    if len(elems) >= cap:
                        raise CapExceeded("group closure cap")
                    elems.add(q)
                    frontier.append(q)
        return elems


def fixed_set(mg, action, words=None):
    """Vertices fixed by every listed element (default: all generators)."""
    if words is None:
        perms = list(action.generators.values())
    else:
        perms = [action.evaluate(w) for w in words]
    return frozenset(v for v in range(mg.n) if all(p(v) == v for p in perms))


def restrict_median(mg, vertices):
    """Certified median structure on an induced (convex) subgraph."""
    sub, old = induced_subgraph(mg.graph, vertices)
    out = certify_median(sub)
    return out, old
