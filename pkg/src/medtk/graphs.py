"""Finite simple graphs: the substrate everything else is built on.

Vertices are integers 0..n-1.  Graphs are immutable after construction and
cache their adjacency lists and all-pairs BFS distances, so repeated metric
queries are cheap and all iteration orders are deterministic.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from functools import cached_property

AUTOMORPHISM_CAP = 16
HYPERCUBE_CAP = 12


class CapExceeded(Exception):
    """A resource cap was hit; the result would not be desk-scale."""


class FiniteGraph:
    """Simple undirected graph on vertices 0..n-1."""

    def __init__(self, n, edges):
        self.n = int(n)
        norm = set()
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError(f"edge ({a},{b}) out of range for n={self.n}")
            norm.add((min(a, b), max(a, b)))
        self.edges = frozenset(norm)

    def __eq__(self, other):
        return isinstance(other, FiniteGraph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"FiniteGraph(n={self.n}, m={len(self.edges)})"

    @cached_property
    def adj(self):
        """Sorted neighbour lists, one per vertex."""
        nbrs = [[] for _ in range(self.n)]
        for a, b in sorted(self.edges):
            nbrs[a].append(b)
            nbrs[b].append(a)
        return [sorted(x) for x in nbrs]

    @cached_property
    def adj_sets(self):
        return [frozenset(x) for x in self.adj]

    def has_edge(self, a, b):
        return (min(a, b), max(a, b)) in self.edges

    @cached_property
    def dist(self):
        """All-pairs BFS distance matrix; -1 means unreachable."""
        out = []
        for s in range(self.n):
            d = [-1] * self.n
            d[s] = 0
            q = deque([s])
            while q:
                v = q.popleft()
                for w in self.adj[v]:
                    if d[w] < 0:
                        d[w] = d[v] + 1
                        q.append(w)
            out.append(d)
        return out

    def is_connected(self):
        return self.n == 0 or all(d >= 0 for d in self.dist[0])

    def diameter(self):
        if self.n == 0:
            return 0
        best = 0
        for row in self.dist:
            for d in row:
                if d < 0:
                    raise ValueError("diameter of a disconnected graph")
                best = max(best, d)
        return best

    def sorted_edges(self):
        return sorted(self.edges)

    def to_json(self):
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}

    @staticmethod
    def from_json(data):
        return FiniteGraph(data["n"], [tuple(e) for e in data["edges"]])

    def dump(self):
        return json.dumps(self.to_json(), sort_keys=True)


class Permutation:
    """A bijection on 0..n-1, given by its list of images."""

    def __init__(self, images):
        self.images = tuple(images)
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError("not a bijection")

    def __call__(self, v):
        return self.images[v]

    def __len__(self):
        return len(self.images)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation{self.images}"

    def compose(self, other):
        """self after other: (self*other)(v) = self(other(v))."""
        return Permutation(tuple(self.images[other.images[v]] for v in range(len(self.images))))

    def inverse(self):
        inv = [0] * len(self.images)
        for i, im in enumerate(self.images):
            inv[im] = i
        return Permutation(inv)

    @staticmethod
    def identity(n):
        return Permutation(range(n))

    def is_automorphism(self, g):
        return all(g.has_edge(self(a), self(b)) for a, b in g.edges)


def build_hypercube(r, cap=HYPERCUBE_CAP):
    """The r-dimensional cube graph: bit strings with Hamming-distance-1 edges."""
    if r > cap:
        raise CapExceeded(f"hypercube dimension {r} exceeds cap {cap}")
    n = 1 << r
    edges = [(v, v ^ (1 << i)) for v in range(n) for i in range(r) if v < v ^ (1 << i)]
    return FiniteGraph(n, edges)


def build_join(parts):
    """Disjoint union of the parts plus every edge between distinct parts."""
    if not parts:
        raise ValueError("join of zero parts")
    offsets = []
    total = 0
    for p in parts:
        offsets.append(total)
        total += p.n
    edges = []
    for p, off in zip(parts, offsets):
        edges.extend((a + off, b + off) for a, b in p.edges)
    for (p1, o1), (p2, o2) in itertools.combinations(zip(parts, offsets), 2):
        edges.extend((a + o1, b + o2) for a in range(p1.n) for b in range(p2.n))
    return FiniteGraph(total, edges)


def empty_pair():
    """Two isolated vertices: the join building block for octahedra."""
    return FiniteGraph(2, [])


def build_gamma_rs(r, s, cap=HYPERCUBE_CAP):
    """r-cube vertices, edges between distinct vertices at Hamming distance <= s."""
    if not (1 <= s <= r):
        raise ValueError("need 1 <= s <= r")
    if r > cap:
        raise CapExceeded(f"dimension {r} exceeds cap {cap}")
    n = 1 << r
    edges = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if (u ^ v).bit_count() <= s
    ]
    return FiniteGraph(n, edges)


def _refine_classes(g):
    """Iterated degree/distance-profile refinement; returns a colour per vertex."""
    colours = [len(g.adj[v]) for v in range(g.n)]
    while True:
        profiles = []
        for v in range(g.n):
            prof = (colours[v], tuple(sorted((g.dist[v][w], colours[w]) for w in range(g.n))))
            profiles.append(prof)
        order = {p: i for i, p in enumerate(sorted(set(profiles)))}
        new = [order[p] for p in profiles]
        if new == colours:
            return colours
        colours = new


def _iso_search(g1, g2, find_all):
    """Backtracking isomorphism search guided by refinement colours."""
    if g1.n != g2.n or len(g1.edges) != len(g2.edges):
        return []
    c1, c2 = _refine_classes(g1), _refine_classes(g2)
    if sorted(c1) != sorted(c2):
        return []
    # Assign vertices of g1 in order of increasing colour-class size.
    class_size = {c: c1.count(c) for c in set(c1)}
    order = sorted(range(g1.n), key=lambda v: (class_size[c1[v]], c1[v], v))
    results = []
    mapping = [-1] * g1.n
    used = [False] * g2.n

    def place(i):
        if i == g1.n:
            results.append(Permutation(list(mapping)))
            return not find_all
        v = order[i]
        for w in range(g2.n):
            if used[w] or c1[v] != c2[w]:
                continue
            ok = True
            for u in order[:i]:
                if g1.has_edge(v, u) != g2.has_edge(w, mapping[u]):
                    ok = False
                    break
            if ok:
                mapping[v] = w
                used[w] = True
                if place(i + 1):
                    return True
                mapping[v] = -1
                used[w] = False
        return False

    place(0)
    return results


def automorphism_group(g, cap=AUTOMORPHISM_CAP):
    """Every adjacency-preserving permutation of g, as a sorted list."""
    if g.n > cap:
        raise CapExceeded(f"automorphism enumeration capped at {cap} vertices")
    autos = _iso_search(g, g, find_all=True)
    return sorted(autos, key=lambda p: p.images)


def graph_isomorphic(g1, g2, cap=64):
    """An adjacency-preserving bijection g1 -> g2, or None."""
    if g1.n + g2.n > 2 * cap:
        raise CapExceeded(f"isomorphism check capped at {cap} vertices per graph")
    found = _iso_search(g1, g2, find_all=False)
    return found[0] if found else None


def check_distance2_transitivity(g, h_gens):
    """Whether <h_gens> is transitive on unordered vertex pairs at distance 2.

    Returns (True, None) or (False, (pair, pair)) with two pairs in distinct
    orbits as a counterexample.
    """
    for p in h_gens:
        if not p.is_automorphism(g):
            raise ValueError("generator is not an automorphism")
    pairs = sorted(
        (u, v) for u in range(g.n) for v in range(u + 1, g.n) if g.dist[u][v] == 2
    )
    if len(pairs) <= 1:
        return True, None
    seen = {pairs[0]}
    frontier = [pairs[0]]
    gens = list(h_gens) + [p.inverse() for p in h_gens]
    while frontier:
        a, b = frontier.pop()
        for p in gens:
            im = (min(p(a), p(b)), max(p(a), p(b)))
            if im not in seen:
                seen.add(im)
                frontier.append(im)
    for pr in pairs:
        if pr not in seen:
            return False, (pairs[0], pr)
    return True, None


def induced_subgraph(g, vertices):
    """Induced subgraph; returns (graph, old-vertex list in new order)."""
    vs = sorted(vertices)
    index = {v: i for i, v in enumerate(vs)}
    edges = [(index[a], index[b]) for a, b in g.edges if a in index and b in index]
    return FiniteGraph(len(vs), edges), vs
