"""Graph products of finite groups.

A graph product over a finite graph takes one finite group per vertex and
imposes commutation between groups on adjacent vertices.  This module
provides canonical normal forms for elements, the coset complex on which
the graph product acts (vertices are cosets g<L> for complete subgraphs L),
the extended action that also permutes the factors by graph symmetries,
fixed sets of vertex groups, and the induced action of a group on a
Cartesian power of a space its finite-index subgroup acts on.

Vertex groups are cyclic Z/q by default; explicit multiplication tables
are accepted for generality.  Identity is always element 0.
"""

from dataclasses import dataclass, field
from functools import cached_property

from .graphs import FiniteGraph, Permutation, CapExceeded, build_join
from .median import GraphAction

COMPLEX_CAP = 20000
POWER_CAP = 100000


class TruncationError(Exception):
    """A computation touched the boundary of a radius-truncated complex."""


@dataclass(frozen=True)
class GraphProductSpec:
    """Defining data: the graph and one finite group per vertex.

    orders[u] gives a cyclic group Z/orders[u]; an entry in tables
    overrides it with an explicit multiplication table (tuple of tuples,
    identity 0).
    """

    gamma: FiniteGraph
    orders: tuple  # one integer >= 2 per vertex
    tables: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.orders) != self.gamma.n:
            raise ValueError("one order per vertex required")
        for q in self.orders:
            if q < 2:
                raise ValueError("vertex group orders must be >= 2")
        for u, table in self.tables.items():
            q = self.orders[u]
            if len(table) != q or any(len(row) != q for row in table):
                raise ValueError("table size mismatch")
            if any(table[0][a] != a or table[a][0] != a for a in range(q)):
                raise ValueError("element 0 must be the identity")
            if any(sorted(row) != list(range(q)) for row in table):
                raise ValueError("rows must be permutations")
            for a in range(q):
                if all(table[a][b] != 0 for b in range(q)):
                    raise ValueError("element without inverse")

    def mult(self, u, a, b):
        if u in self.tables:
            return self.tables[u][a][b]
        return (a + b) % self.orders[u]

    def inv(self, u, a):
        if u in self.tables:
            return next(b for b in range(self.orders[u]) if self.tables[u][a][b] == 0)
        return (-a) % self.orders[u]

    @cached_property
    def cliques(self):
        """All complete vertex subsets, including the empty one, sorted."""
        adj = self.gamma.adj_sets
        out = [()]
        frontier = [(v,) for v in range(self.gamma.n)]
        while frontier:
            out.extend(frontier)
            nxt = []
            for c in frontier:
                common = set(range(c[-1] + 1, self.gamma.n))
                for v in c:
                    common &= adj[v]
                for w in sorted(common):
                    nxt.append(c + (w,))
            frontier = nxt
        return sorted(out, key=lambda c: (len(c), c))

    def to_json(self):
        data = {"gamma": self.gamma.to_json(), "orders": {str(u): q for u, q in enumerate(self.orders)}}
        return data

    @classmethod
    def from_json(cls, data):
        gamma = FiniteGraph.from_json(data["gamma"])
        orders = tuple(data["orders"][str(u)] for u in range(gamma.n))
        return cls(gamma, orders)


@dataclass(frozen=True)
class NormalForm:
    """Canonical graphically reduced word: tuple of (vertex, element) syllables."""

    syllables: tuple

    def __len__(self):
        return len(self.syllables)


def normal_form(spec, word):
    """Canonical form of a word of (vertex, element) syllables.

    Same-vertex syllables merge whenever only adjacent-vertex syllables
    separate them, identity syllables drop, and commuting neighbours are
    shuffled to the lexicographically minimal arrangement.  Two words get
    the same form iff they represent the same element.
    """
    adj = spec.gamma.adj_sets
    sylls = []
    for u, a in word:
        if not (0 <= u < spec.gamma.n) or not (0 <= a < spec.orders[u]):
            raise ValueError("syllable out of range")
        sylls.append((u, a))
    changed = True
    while changed:
        changed = False
        # merge: pull a later same-vertex syllable across adjacent ones
        for i in range(len(sylls)):
            u = sylls[i][0]
            for j in range(i + 1, len(sylls)):
                v = sylls[j][0]
                if v == u:
                    merged = spec.mult(u, sylls[i][1], sylls[j][1])
                    del sylls[j]
                    if merged == 0:
                        del sylls[i]
                    else:
                        sylls[i] = (u, merged)
                    changed = True
                    break
                if v not in adj[u]:
                    break
            if changed:
                break
        if changed:
            continue
        for i, (u, a) in enumerate(sylls):
            if a == 0:
                del sylls[i]
                changed = True
                break
        if changed:
            continue
        # canonical shuffle to lexicographic minimum
        for i in range(len(sylls) - 1):
            u, v = sylls[i][0], sylls[i + 1][0]
            if u > v and v in adj[u]:
                sylls[i], sylls[i + 1] = sylls[i + 1], sylls[i]
                changed = True
    return NormalForm(tuple(sylls))


def nf_mult(spec, nf1, nf2):
    return normal_form(spec, nf1.syllables + nf2.syllables)


def nf_inv(spec, nf):
    inv = [(u, spec.inv(u, a)) for u, a in reversed(nf.syllables)]
    return normal_form(spec, inv)


@dataclass(frozen=True)
class VGPElement:
    """Element of the extended group: a graph-product part and a symmetry."""

    word: NormalForm
    symmetry: Permutation


def _subgroup_elements(spec, lam):
    """All elements of <L> for a complete subset L, as normal forms."""
    elems = [NormalForm(())]
    for u in lam:
        elems = [
            nf_mult(spec, e, NormalForm(((u, a),)))
            for e in elems
            for a in range(spec.orders[u])
        ]
    return elems


def _coset_key(spec, g, lam, subgroup_elems):
    """Lexicographically minimal member of g<L>, a canonical coset name."""
    best = None
    for h in subgroup_elems:
        cand = nf_mult(spec, g, h).syllables
        if best is None or (len(cand), cand) < (len(best), best):
            best = cand
    return best


@dataclass(frozen=True)
class CosetComplex:
    """Coset complex of a graph product.

    Vertices are cosets g<L> over complete subsets L; an edge joins g<L>
    to g<L u {pt}>.  cosets[i] = (representative syllables, L).
    """

    graph: FiniteGraph
    cosets: tuple
    full: bool
    radius: int  # -1 in the full regime

    def coset_index(self, spec, g, lam):
        lam = tuple(sorted(lam))
        key = (_coset_key(spec, g, lam, _subgroup_elements(spec, lam)), lam)
        try:
            return self._index[key]
        except KeyError:
            raise TruncationError("coset outside the truncated complex")

    @cached_property
    def _index(self):
        return {c: i for i, c in enumerate(self.cosets)}


def _enumerate_elements(spec, radius):
    """Normal forms of syllable length <= radius (all of them when radius is None)."""
    seen = {NormalForm(())}
    frontier = [NormalForm(())]
    depth = 0
    while frontier and (radius is None or depth < radius):
        depth += 1
        nxt = []
        for g in frontier:
            for u in range(spec.gamma.n):
                for a in range(1, spec.orders[u]):
                    h = nf_mult(spec, g, NormalForm(((u, a),)))
                    if len(h) == depth and h not in seen:
                        seen.add(h)
                        nxt.append(h)
            if len(seen) > COMPLEX_CAP:
                raise CapExceeded("too many group elements")
        frontier = nxt
    return sorted(seen, key=lambda g: (len(g), g.syllables))


def build_coset_complex(spec, radius="full"):
    """The complex of cosets g<L>, full or radius-truncated.

    The full regime requires a complete graph (so the group is finite);
    there the output is a median graph of cubical dimension equal to the
    clique number.  Otherwise vertices come from representatives of
    syllable length <= radius and nothing outside that ball exists.
    """
    full = radius == "full"
    if full:
        n = spec.gamma.n
        if len(spec.gamma.edges) != n * (n - 1) // 2:
            raise ValueError("full regime requires a complete graph")
    elements = _enumerate_elements(spec, None if full else radius)
    sub_elems = {lam: _subgroup_elements(spec, lam) for lam in spec.cliques}
    cosets = set()
    for g in elements:
        for lam in spec.cliques:
            cosets.add((_coset_key(spec, g, lam, sub_elems[lam]), lam))
            if len(cosets) > COMPLEX_CAP:
                raise CapExceeded("too many cosets")
    cosets = sorted(cosets, key=lambda c: (len(c[1]), c[1], len(c[0]), c[0]))
    index = {c: i for i, c in enumerate(cosets)}
    edges = set()
    for key, lam in cosets:
        g = NormalForm(key)
        for pt in range(spec.gamma.n):
            if pt in lam:
                continue
            big = tuple(sorted(lam + (pt,)))
            if big not in sub_elems:
                continue
            bigkey = (_coset_key(spec, g, big, sub_elems[big]), big)
            if bigkey in index:
                edges.add((index[(key, lam)], index[bigkey]))
    graph = FiniteGraph(len(cosets), frozenset(edges))
    return CosetComplex(graph, tuple(cosets), full, -1 if full else radius)


def vgp_action(spec, h_gens, complex):
    """Action of the extended graph product on the coset complex.

    One generator labelled ("g", u) per vertex group (its distinguished
    generator, element 1, acting by left multiplication) and one labelled
    ("h", i) per given graph symmetry (relabelling cosets).  Every
    generator is checked to be a graph automorphism; an image falling
    outside a truncated complex raises TruncationError.
    """
    for pi in h_gens:
        if not pi.is_automorphism(spec.gamma):
            raise ValueError("symmetry does not preserve the graph")
        for u in range(spec.gamma.n):
            if spec.orders[pi.images[u]] != spec.orders[u]:
                raise ValueError("symmetry does not preserve vertex group orders")
            if (u in spec.tables) != (pi.images[u] in spec.tables) or (
                u in spec.tables and spec.tables[u] != spec.tables[pi.images[u]]
            ):
                raise ValueError("symmetry does not preserve vertex group tables")
    gens = {}
    for u in range(spec.gamma.n):
        s = NormalForm(((u, 1),))
        images = []
        for key, lam in complex.cosets:
            g = nf_mult(spec, s, NormalForm(key))
            images.append(complex.coset_index(spec, g, lam))
        gens[("g", u)] = Permutation(tuple(images))
    for i, pi in enumerate(h_gens):
        images = []
        for key, lam in complex.cosets:
            g = NormalForm(tuple((pi.images[u], a) for u, a in key))
            new_lam = tuple(sorted(pi.images[u] for u in lam))
            images.append(complex.coset_index(spec, g, new_lam))
        gens[("h", i)] = Permutation(tuple(images))
    return GraphAction(complex.graph, gens)


def vertex_group_orders_of_stabilizers(spec, action, complex):
    """Order of the stabilizer of each coset vertex under the full group.

    Enumerates the generated permutation group; usable only in the full
    regime where that group is finite.
    """
    elements = action.group_elements()
    return tuple(
        sum(1 for p in elements if p.images[v] == v) for v in range(complex.graph.n)
    )


def vertex_group_fixed_sets(spec, action, median_graph, region=None):
    """Fixed sets of the vertex groups inside a certified median region.

    Returns per-vertex-group fixed sets (as sorted tuples), convexity
    flags computed in the given median graph, and the matrix of pairwise
    intersection sizes that feeds the nerve construction.
    """
    from .median import is_convex

    if region is None:
        region = range(median_graph.graph.n)
    region = sorted(region)
    fixed = []
    for u in range(spec.gamma.n):
        if u in spec.tables:
            # fixed(generator) = fixed(group) needs the generator to generate
            elems = set()
            a = 1
            while a != 0:
                elems.add(a)
                a = spec.mult(u, a, 1)
            if len(elems) != spec.orders[u] - 1:
                raise ValueError("table group not cyclic; supply explicit generators")
        perm = action.generators[("g", u)]
        fix = tuple(v for v in region if perm.images[v] == v)
        fixed.append(fix)
    convex = tuple(is_convex(median_graph, set(f)) if f else False for f in fixed)
    inter = tuple(
        tuple(len(set(fixed[u]) & set(fixed[v])) for v in range(spec.gamma.n))
        for u in range(spec.gamma.n)
    )
    return fixed, convex, inter


def induced_power_action(table, schreier, sub_action, labels=None):
    """Induced action on the Cartesian power of a subgroup's space.

    table is the coset table of a finite-index subgroup H <= G, schreier
    the rewriting data produced with it, and sub_action an action of H
    whose generators are labelled by Schreier-generator index.  The
    ambient group acts on X^index: its generator x sends the point with
    coordinate p at coset i to the point with coordinate (Schreier element
    for (i, x)) applied to p, placed at coset i.x.  The result is an
    action by automorphisms of the power graph.
    """
    index = len(table.rows)
    x = sub_action.graph
    if x.n**index > POWER_CAP:
        raise CapExceeded("power graph too large")
    ngens = len(table.rows[0]) // 2
    power = x
    for _ in range(index - 1):
        power = _cartesian_product(power, x)
    # vertex of power = tuple read off in base x.n, coordinate 0 innermost
    def unpack(v):
        out = []
        for _ in range(index):
            out.append(v % x.n)
            v //= x.n
        return out

    def pack(coords):
        v = 0
        for c in reversed(coords):
            v = v * x.n + c
        return v

    # Schreier element permutations: transversal[i] * gen * transversal[i.gen]^-1
    from .groups import _col, _inv_col, free_reduce, invert_word

    sub_perm_cache = {}

    def subgroup_perm(word):
        """Permutation of X for an H-element given as an ambient word."""
        word = free_reduce(word)
        if word in sub_perm_cache:
            return sub_perm_cache[word]
        rewritten = _rewrite_into_schreier(table, schreier, word)
        perm = Permutation.identity(x.n)
        for label, exp in rewritten:
            p = sub_action.generators[label]
            if exp < 0:
                p = p.inverse()
                exp = -exp
            for _ in range(exp):
                perm = p.compose(perm)
        sub_perm_cache[word] = perm
        return perm

    gens = {}
    gen_labels = labels if labels is not None else [("x", g) for g in range(ngens)]
    for g in range(ngens):
        target = [table.rows[i][_col(g + 1)] for i in range(index)]
        coord_perm = []
        for i in range(index):
            j = target[i]
            word = free_reduce(
                schreier.transversal[i] + (g + 1,) + invert_word(schreier.transversal[j])
            )
            coord_perm.append((j, subgroup_perm(word)))
        images = []
        for v in range(power.n):
            coords = unpack(v)
            out = [0] * index
            for i in range(index):
                j, perm = coord_perm[i]
                out[j] = perm.images[coords[i]]
            images.append(pack(out))
        gens[gen_labels[g]] = Permutation(tuple(images))
    return GraphAction(power, gens)


def _cartesian_product(a, b):
    """Cartesian (box) product; vertex (i, j) encoded as j * a.n + i."""
    edges = set()
    for j in range(b.n):
        for u, v in a.edges:
            edges.add((j * a.n + u, j * a.n + v))
    for u, v in b.edges:
        for i in range(a.n):
            edges.add((u * a.n + i, v * a.n + i))
    return FiniteGraph(a.n * b.n, frozenset(edges))


def _rewrite_into_schreier(table, schreier, word):
    """Rewrite a subgroup-defining ambient word into Schreier generators.

    Returns a list of (label, exponent) over Schreier-generator indices.
    Requires the word to stay in the subgroup (end at coset 0).
    """
    from .groups import _col, _inv_col, invert_word

    index = len(table.rows)
    # Schreier generator index lookup: position in schreier.generator_words
    lookup = {}
    for k, w in enumerate(schreier.generator_words):
        lookup[w] = k
    out = []
    state = 0
    for s in word:
        g = abs(s)
        nxt = table.rows[state][_col(g) if s > 0 else _inv_col(g)]
        if s > 0:
            raw = free_reduce_tuple(
                schreier.transversal[state] + (g,) + invert_word(schreier.transversal[nxt])
            )
        else:
            raw = free_reduce_tuple(
                schreier.transversal[state] + (-g,) + invert_word(schreier.transversal[nxt])
            )
        if raw:
            if raw in lookup:
                out.append((lookup[raw], 1))
            else:
                inv = invert_word(raw)
                if inv not in lookup:
                    raise ValueError("unrecognized Schreier element")
                out.append((lookup[inv], -1))
        state = nxt
    if state != 0:
        raise ValueError("word does not lie in the subgroup")
    return out


def free_reduce_tuple(word):
    from .groups import free_reduce

    return free_reduce(tuple(word))
