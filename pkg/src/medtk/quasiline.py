"""Periodic median quasi-lines and their morphisms to Z >< Z/2.

A periodic quasi-line is a Z-indexed chain of copies of one period graph,
consecutive copies glued along a boundary identification.  Isometries are
given by a copy shift, an optional end reversal, and an internal map of
the period.  From an action with unbounded orbits this module extracts
the end-swap sign, the integer translation length, and a verified
morphism onto a subgroup of the infinite dihedral group.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .graphs import FiniteGraph, Permutation


@dataclass(frozen=True)
class PeriodicQuasiLine:
    """One period plus the gluing of its right boundary onto the next
    copy's left boundary (index-aligned bijection)."""

    period_graph: FiniteGraph
    left: tuple
    right: tuple

    def __post_init__(self):
        if len(self.left) != len(self.right):
            raise ValueError("boundary sizes differ")
        if len(set(self.left)) != len(self.left) or len(set(self.right)) != len(self.right):
            raise ValueError("boundary vertices must be distinct")
        if set(self.left) & set(self.right):
            raise ValueError("left and right boundaries must be disjoint")

    def canon(self, k, i):
        """Canonical name of a line vertex: left-boundary vertices are the
        previous copy's right-boundary vertices."""
        if i in self._left_index:
            return (k - 1, self.right[self._left_index[i]])
        return (k, i)

    @property
    def _left_index(self):
        return {v: j for j, v in enumerate(self.left)}

    def window(self, lo, hi):
        """Induced graph on copies lo..hi-1; returns (graph, vertex map)."""
        verts = []
        seen = set()
        for k in range(lo, hi):
            for i in range(self.period_graph.n):
                c = self.canon(k, i)
                if c not in seen:
                    seen.add(c)
                    verts.append(c)
        verts.sort()
        vmap = {c: n for n, c in enumerate(verts)}
        edges = set()
        for k in range(lo, hi):
            for a, b in self.period_graph.edges:
                ca, cb = self.canon(k, a), self.canon(k, b)
                if ca in vmap and cb in vmap:
                    edges.add((min(vmap[ca], vmap[cb]), max(vmap[ca], vmap[cb])))
        return FiniteGraph(len(verts), frozenset(edges)), vmap

    def to_json(self):
        return {
            "period": self.period_graph.to_json(),
            "left": list(self.left),
            "right": list(self.right),
        }

    @classmethod
    def from_json(cls, data):
        return cls(FiniteGraph.from_json(data["period"]), tuple(data["left"]), tuple(data["right"]))


@dataclass(frozen=True)
class QLIsometry:
    """Raw line map (k, i) -> (eps*k + shift, internal(i)), eps = -1 when
    the two ends are swapped."""

    period_shift: int
    reverses: bool
    internal_map: Permutation

    def apply(self, ql, v):
        k, i = v
        k2 = self.period_shift - k if self.reverses else self.period_shift + k
        return ql.canon(k2, self.internal_map(i))

    def compose(self, other):
        """self after other: copy map k -> eps_s*(eps_o*k + s_o) + s_s."""
        rev = self.reverses != other.reverses
        if self.reverses:
            shift = self.period_shift - other.period_shift
        else:
            shift = self.period_shift + other.period_shift
        return QLIsometry(shift, rev, self.internal_map.compose(other.internal_map))

    def inverse(self):
        if self.reverses:
            return QLIsometry(self.period_shift, True, self.internal_map.inverse())
        return QLIsometry(-self.period_shift, False, self.internal_map.inverse())

    @staticmethod
    def identity(ql):
        return QLIsometry(0, False, Permutation.identity(ql.period_graph.n))

    def to_json(self):
        return {
            "shift": self.period_shift,
            "reverses": self.reverses,
            "internal": list(self.internal_map.images),
        }

    @classmethod
    def from_json(cls, data):
        return cls(int(data["shift"]), bool(data["reverses"]), Permutation(tuple(data["internal"])))


class QuasiLineError(Exception):
    pass


def verify_isometry(ql, g, copies=4):
    """An isometry must induce a graph automorphism wherever a window maps
    into a larger one; checked on copies around 0."""
    lo, hi = -copies, copies + 1
    win, vmap = ql.window(lo, hi)
    big_lo = min(lo, g.period_shift - (hi - 1) if g.reverses else g.period_shift + lo) - 1
    big_hi = max(hi, (g.period_shift - lo if g.reverses else g.period_shift + (hi - 1)) + 1) + 1
    big, big_map = ql.window(big_lo, big_hi)
    images = {}
    for v, idx in vmap.items():
        w = g.apply(ql, v)
        if w not in big_map:
            raise QuasiLineError("image leaves the verification window")
        images[idx] = big_map[w]
    if len(set(images.values())) != len(images):
        return False
    for a, b in win.edges:
        if not big.has_edge(images[a], images[b]):
            return False
    return True


@dataclass(frozen=True)
class DinftyElement:
    """Element (t, eps) of Z >< Z/2 with (t,e)(t',e') = (t + e t', e e')."""

    translation: int
    flip: int

    def __post_init__(self):
        if self.flip not in (1, -1):
            raise ValueError("flip must be +1 or -1")

    def mult(self, other):
        return DinftyElement(self.translation + self.flip * other.translation, self.flip * other.flip)


def translation_data(ql, g, base=None):
    """(sigma, h): the end-swap sign and the integer translation length.

    sigma = -1 when g swaps the two ends, and then h = 0.  Otherwise h is
    the stabilized per-iterate displacement of a base vertex, signed by
    the direction of the copy shift; exact for periodic data.
    """
    if g.reverses:
        return (-1, 0)
    if base is None:
        base = ql.canon(0, 0)
    # minimal t with g^t returning to the same period position
    power = g
    t = 1
    while power.apply(ql, base)[1] != base[1]:
        power = g.compose(power)
        t += 1
        if t > ql.period_graph.n + 1:
            raise QuasiLineError("internal map fails to return to its position")
    v1 = power.apply(ql, base)
    copies = abs(v1[0] - base[0])
    lo = min(base[0], v1[0]) - 2
    hi = max(base[0], v1[0]) + 3
    win, vmap = ql.window(lo, hi)
    d = win.dist[vmap[base]][vmap[v1]]
    sign = 1 if v1[0] > base[0] else (-1 if v1[0] < base[0] else 0)
    h = Fraction(sign * d, t)
    if h.denominator != 1:
        raise QuasiLineError("translation length is not integral")
    # soundness: displacement already linear at one period's worth
    v2 = power.apply(ql, v1)
    lo2, hi2 = min(base[0], v2[0]) - 2, max(base[0], v2[0]) + 3
    win2, vmap2 = ql.window(lo2, hi2)
    if win2.dist[vmap2[base]][vmap2[v2]] != 2 * d:
        raise QuasiLineError("per-iterate displacement did not stabilize")
    return (1, int(h))


def _word_isometry(ql, gens, word):
    """Word read left to right as a product; product acts by composition,
    so the leftmost letter is applied last."""
    g = QLIsometry.identity(ql)
    for label in word:
        if isinstance(label, tuple) and label[0] == "inv":
            g = g.compose(gens[label[1]].inverse())
        else:
            g = g.compose(gens[label])
    return g


def dinfty_from_quasiline_action(ql, gens, length=4):
    """Morphism to the infinite dihedral group from a quasi-line action.

    Requires unbounded orbits (some short word translates non-trivially).
    Picks g0 as the shortest end-swapping word (breadth-first, ties by
    label order) when one exists; phi(g) = (lambda(g), sigma(g)) with
    lambda(g) = h(g) for non-swapping g and h(g g0) for swapping g.
    Returns ({label: DinftyElement}, report); the report records the
    exhaustive homomorphism check on words of length <= length, the
    infinite-image witness, the cocycle identity, and the conjugation
    identity h(g0 g g0^-1) = -h(g).
    """
    labels = sorted(gens)
    for lab in labels:
        if not verify_isometry(ql, gens[lab]):
            raise QuasiLineError(f"generator {lab!r} is not an isometry")

    def data(word):
        return translation_data(ql, _word_isometry(ql, gens, word))

    unbounded = False
    for wl in (1, 2):
        for word in itertools.product(labels, repeat=wl):
            s, h = data(word)
            if s == 1 and h != 0:
                unbounded = True
        if unbounded:
            break
    if not unbounded:
        raise QuasiLineError("orbits are bounded")

    g0_word = None
    for wl in range(1, length + 1):
        for word in itertools.product(labels, repeat=wl):
            if translation_data(ql, _word_isometry(ql, gens, word))[0] == -1:
                g0_word = word
                break
        if g0_word is not None:
            break

    def phi_word(word):
        s, h = data(word)
        if s == 1:
            return DinftyElement(h, 1)
        s2, h2 = data(tuple(word) + g0_word)
        assert s2 == 1
        return DinftyElement(h2, -1)

    phi = {lab: phi_word((lab,)) for lab in labels}
    report = {"g0": list(g0_word) if g0_word else None, "checks": []}

    # homomorphism law, exhaustively at short lengths
    cache = {}

    def phi_cached(word):
        if word not in cache:
            cache[word] = phi_word(word)
        return cache[word]

    hom_ok = True
    half = length // 2
    words = [w for l in range(0, half + 1) for w in itertools.product(labels, repeat=l)]
    for w in words:
        for v in words:
            lhs = phi_cached(tuple(w) + tuple(v))
            rhs = phi_cached(tuple(w)).mult(phi_cached(tuple(v)))
            if lhs != rhs:
                hom_ok = False
    report["checks"].append({"name": "homomorphism-law", "ok": hom_ok})

    infinite = any(e.translation != 0 for e in (phi_cached(w) for w in words if w))
    report["checks"].append({"name": "infinite-image", "ok": infinite})

    cocycle_ok = True
    for w in words:
        for v in words:
            sw, lw = phi_cached(tuple(w)).flip, phi_cached(tuple(w)).translation
            lv = phi_cached(tuple(v)).translation
            if phi_cached(tuple(w) + tuple(v)).translation != lw + sw * lv:
                cocycle_ok = False
    report["checks"].append({"name": "cocycle-identity", "ok": cocycle_ok})

    if g0_word is not None:
        conj_ok = True
        g0 = _word_isometry(ql, gens, g0_word)
        for l in range(1, length + 1):
            for word in itertools.product(labels, repeat=l):
                g = _word_isometry(ql, gens, word)
                s, h = translation_data(ql, g)
                if s != 1:
                    continue
                conj = g0.compose(g).compose(g0.inverse())
                s2, h2 = translation_data(ql, conj)
                if s2 != 1 or h2 != -h:
                    conj_ok = False
        report["checks"].append({"name": "conjugation-negates-translation", "ok": conj_ok})

    report["ok"] = all(c["ok"] for c in report["checks"])
    return phi, report
