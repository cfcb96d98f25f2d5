"""Quasi-median structure of graph-product Cayley graphs.

The Cayley graph of a graph product with respect to the union of its
vertex groups is quasi-median.  This module builds finite balls of that
graph, decomposes them into hyperplanes (edge classes under the
"same 3-cycle or opposite in a 4-cycle" relation), verifies the claimed
coset structure of cliques and prisms in the deep interior, and, for
complete graphs (finite groups), cubulates the whole group via a system
of wallspaces transported clique by clique.
"""

from dataclasses import dataclass
from functools import cached_property

from .graphs import FiniteGraph, CapExceeded
from .graphprod import NormalForm, normal_form, nf_mult, nf_inv, _enumerate_elements, _subgroup_elements
from .wallspace import Wallspace, make_wallspace, cubulate

BALL_CAP = 5000


@dataclass(frozen=True)
class QMHyperplane:
    """An edge class of the quasi-median hyperplane relation."""

    edges: frozenset
    cliques: tuple  # maximal complete subgraphs carried by the class
    sectors: tuple  # vertex sets of the components after removing the class


def _maximal_cliques_of_edges(g, edge_set):
    """Maximal cliques of g that use only edges from edge_set."""
    adj = [set() for _ in range(g.n)]
    for a, b in edge_set:
        adj[a].add(b)
        adj[b].add(a)
    verts = sorted(v for v in range(g.n) if adj[v])
    cliques = set()
    def extend(clique, cand):
        grew = False
        for v in sorted(cand):
            extend(clique + (v,), cand & adj[v] & set(range(v + 1, g.n)))
            grew = True
        if not grew:
            # maximality against all eligible vertices, not just later ones
            full = set(verts)
            for c in clique:
                full &= adj[c]
            if not full:
                cliques.add(clique)
    for v in verts:
        extend((v,), adj[v] & set(range(v + 1, g.n)))
    return tuple(sorted(cliques))


def qm_hyperplanes(g):
    """Hyperplanes of a graph: edge classes closed under the relation
    "in a common 3-cycle" or "opposite edges of an induced 4-cycle".

    Returns one QMHyperplane per class with its maximal cliques and the
    components of the graph after deleting the class (its sectors).
    """
    edges = sorted(g.edges)
    idx = {e: i for i, e in enumerate(edges)}
    parent = list(range(len(edges)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    adj = g.adj_sets
    for a, b in edges:
        for c in sorted(adj[a] & adj[b]):
            union(idx[(a, b)], idx[(min(a, c), max(a, c))])
            union(idx[(a, b)], idx[(min(b, c), max(b, c))])
    for a, b in edges:
        # opposite edges (a,b) vs (c,d) of a square a-b, b-d, d-c, c-a
        for c in sorted(adj[a] - adj[b] - {b}):
            for d in sorted(adj[b] & adj[c]):
                if d == a or d in adj[a]:
                    continue
                union(idx[(a, b)], idx[(min(c, d), max(c, d))])
    classes = {}
    for e in edges:
        classes.setdefault(find(idx[e]), []).append(e)
    out = []
    for root in sorted(classes, key=lambda r: classes[r][0]):
        cls = frozenset(classes[root])
        cliques = _maximal_cliques_of_edges(g, cls)
        remaining = g.edges - cls
        sectors = _components(g.n, remaining)
        out.append(QMHyperplane(cls, cliques, sectors))
    return out


def _components(n, edges):
    adj = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        comp = []
        stack = [s]
        seen[s] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(tuple(sorted(comp)))
    return tuple(sorted(comps))


@dataclass(frozen=True)
class QMBall:
    """Ball of the graph-product Cayley graph over the vertex groups.

    Vertices carry canonical normal forms; the center is the identity and
    the radius counts syllables.
    """

    graph: FiniteGraph
    labels: tuple  # vertex -> NormalForm
    center: int
    radius: int
    spec: object

    @cached_property
    def label_index(self):
        return {nf: i for i, nf in enumerate(self.labels)}


def build_qm_ball(spec, radius):
    """Ball of normal forms of syllable length <= radius.

    Edges join labels differing by one right multiplication by a
    non-trivial vertex-group element, both endpoints inside the ball.
    """
    elements = _enumerate_elements(spec, radius)
    if len(elements) > BALL_CAP:
        raise CapExceeded("ball too large")
    index = {nf: i for i, nf in enumerate(elements)}
    edges = set()
    for nf in elements:
        i = index[nf]
        for u in range(spec.gamma.n):
            for a in range(1, spec.orders[u]):
                h = nf_mult(spec, nf, NormalForm(((u, a),)))
                j = index.get(h)
                if j is not None and j != i:
                    edges.add((min(i, j), max(i, j)))
    graph = FiniteGraph(len(elements), frozenset(edges))
    return QMBall(graph, tuple(elements), index[NormalForm(())], radius, spec)


def verify_coset_structure(ball, margin):
    """Check cliques and prisms of the ball against cosets, deep inside.

    For every vertex at distance <= radius - margin from the center:
    each maximal clique through it must be a coset g G_u, and each box
    spanned by a set of pairwise-commuting clique directions through it
    must be a coset g<L> with L complete.  Returns a report dict
    {"checked": n, "violations": [...], "margin": margin}; violations are
    content, not errors.
    """
    if margin >= ball.radius and ball.radius > 0:
        raise ValueError("margin must be smaller than the radius")
    spec = ball.spec
    g = ball.graph
    dist = g.dist[ball.center]
    interior = [v for v in range(g.n) if dist[v] <= ball.radius - margin]
    adj = g.adj_sets
    violations = []
    checked = 0
    cliques_seen = set()
    for v in interior:
        label = ball.labels[v]
        # expected cliques: one coset g G_u per vertex u of gamma
        expected = []
        for u in range(spec.gamma.n):
            coset = set()
            for a in range(spec.orders[u]):
                h = nf_mult(spec, label, NormalForm(((u, a),)))
                idx = ball.label_index.get(h)
                coset.add(idx)
            expected.append((u, frozenset(coset)))
        # actual maximal cliques through v
        actual = _maximal_cliques_through(g, v)
        checked += 1
        exp_sets = {c for _, c in expected if None not in c}
        act_sets = {frozenset(c) for c in actual if len(c) > 1}
        if exp_sets != act_sets:
            violations.append(
                {
                    "vertex": v,
                    "kind": "clique",
                    "expected": sorted(sorted(c) for c in exp_sets),
                    "actual": sorted(sorted(c) for c in act_sets),
                }
            )
            continue
        # prisms: for each complete L, the coset g<L> must induce a box
        for lam in spec.cliques:
            if len(lam) < 2:
                continue
            coset = []
            ok = True
            for h in _subgroup_elements(spec, lam):
                idx = ball.label_index.get(nf_mult(spec, label, h))
                if idx is None:
                    ok = False
                    break
                coset.append(idx)
            if not ok:
                continue  # coset leaves the ball; outside this check's scope
            if not _is_box(g, sorted(set(coset)), [spec.orders[u] for u in lam]):
                violations.append({"vertex": v, "kind": "prism", "lambda": list(lam)})
    return {"checked": checked, "violations": violations, "margin": margin}


def _maximal_cliques_through(g, v):
    adj = g.adj_sets
    out = []
    def extend(clique, cand):
        grew = False
        for w in sorted(cand):
            extend(clique + (w,), cand & adj[w])
            grew = True
        if not grew:
            full = set(range(g.n))
            for c in clique:
                full &= adj[c]
            if not full:
                out.append(tuple(sorted(clique)))
    extend((v,), set(adj[v]))
    return sorted(set(out))


def _is_box(g, verts, side_lengths):
    """Does the induced subgraph on verts look like a product of complete
    graphs with the given side lengths (a prism)?"""
    expected_n = 1
    for s in side_lengths:
        expected_n *= s
    if len(verts) != expected_n:
        return False
    vset = set(verts)
    # each vertex should have degree sum(s-1) within the box
    want = sum(s - 1 for s in side_lengths)
    adj = g.adj_sets
    return all(len(adj[v] & vset) == want for v in verts)


def cubulate_with_wall_system(ball, vertex_group_walls):
    """Cubulate a finite graph product via per-clique wall systems.

    Works only when the underlying graph is complete, so the ball is the
    whole (finite) group.  Each vertex group comes with a wallspace on
    its elements; walls transport along each hyperplane's cliques via the
    canonical identification clique = coset g G_u, and extend to the
    whole group by taking preimages under the coordinate map.  The union
    is cubulated by the wallspace module; the output is a certified
    median graph.

    Coherence across each hyperplane (gate projections between its
    cliques send walls to walls index by index) is verified explicitly.

    Each vertex-group wallspace lives on q + 1 points: the q group
    elements plus a spike point (index q) marking the clique center.
    The spike keeps complementary singleton walls distinct, which is what
    lets the coset vertices between group elements appear; the extended
    wallspace carries one global spike point outside every halfspace.
    """
    spec = ball.spec
    n = spec.gamma.n
    if len(spec.gamma.edges) != n * (n - 1) // 2:
        raise ValueError("wall-system cubulation requires a complete graph")
    for u in range(n):
        ws = vertex_group_walls[u]
        q = spec.orders[u]
        if ws.point_count != q + 1:
            raise ValueError("wallspace must live on the group plus its spike point")
        # walls must separate group elements
        for a in range(q):
            for b in range(a + 1, q):
                if not any((a in w) != (b in w) for w in ws.walls):
                    raise ValueError("vertex-group walls must separate points")
    # coordinate map: since gamma is complete, every element has one
    # syllable per vertex (possibly identity); coordinate u of g
    def coord(nf, u):
        for w, a in nf.syllables:
            if w == u:
                return a
        return 0

    hyperplanes = qm_hyperplanes(ball.graph)
    _verify_wall_coherence(ball, hyperplanes, coord)
    walls = set()
    for u in range(n):
        q = spec.orders[u]
        for w in vertex_group_walls[u].walls:
            side = w if q not in w else frozenset(range(q + 1)) - w
            ext = frozenset(v for v in range(ball.graph.n) if coord(ball.labels[v], u) in side)
            walls.add(ext)
    # spike point: index ball.graph.n, outside every halfspace
    ws = make_wallspace(ball.graph.n + 1, walls)
    mg, point_map = cubulate(ws)
    return mg, point_map


def spike_wallspace(q):
    """Singleton walls {g} on a group of order q with its spike point q."""
    return make_wallspace(q + 1, [frozenset([g]) for g in range(q)])


def _verify_wall_coherence(ball, hyperplanes, coord):
    """Gate projections between cliques of one hyperplane match the
    clique-to-group identification: corresponding elements have equal
    group coordinates except at the hyperplane's own vertex."""
    spec = ball.spec
    for hp in hyperplanes:
        # the class's cliques are cosets gG_u for one common u
        us = set()
        for clique in hp.cliques:
            labels = [ball.labels[v] for v in clique]
            diff = None
            for w in range(spec.gamma.n):
                vals = {coord(l, w) for l in labels}
                if len(vals) > 1:
                    diff = w
            us.add(diff)
        if len(us) != 1:
            raise ValueError("hyperplane cliques disagree on their vertex group")
        u = us.pop()
        dist = ball.graph.dist
        base = hp.cliques[0]
        base_by_elem = {coord(ball.labels[v], u): v for v in base}
        for clique in hp.cliques[1:]:
            by_elem = {coord(ball.labels[v], u): v for v in clique}
            if set(by_elem) != set(base_by_elem):
                raise ValueError("clique misses group elements")
            # the gate projection (nearest-point map between parallel
            # cliques) must match elements index by index
            for a, v in base_by_elem.items():
                gate = min(by_elem.values(), key=lambda w: (dist[v][w], w))
                if gate != by_elem[a]:
                    raise ValueError("gate projection does not send walls to walls")
                if any(
                    dist[v][w] <= dist[v][gate] for w in by_elem.values() if w != gate
                ):
                    raise ValueError("gate projection not unique")
