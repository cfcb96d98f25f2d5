"""Finite spaces with walls and their cubulation into median graphs.

A wall is a bipartition of the point set, stored by one side.  Cubulation
enumerates pairwise-consistent orientations reachable by single-wall flips
from the principal orientations, which at finite scale is all of them; the
all-orientations brute force is kept separate as an oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import CapExceeded, FiniteGraph
from .median import MedianGraph, certify_median

WALL_CAP = 20


@dataclass(frozen=True)
class Wallspace:
    point_count: int
    walls: tuple  # each wall a frozenset (one side; complement is the other)

    def __post_init__(self):
        seen = set()
        for w in self.walls:
            if not w or len(w) >= self.point_count:
                raise ValueError("wall with an empty side")
            if any(p < 0 or p >= self.point_count for p in w):
                raise ValueError("wall point out of range")
            comp = frozenset(range(self.point_count)) - w
            key = min(tuple(sorted(w)), tuple(sorted(comp)))
            if key in seen:
                raise ValueError("duplicate wall")
            seen.add(key)

    def side(self, i, sign):
        """sign 0 = the stored side, 1 = its complement."""
        w = self.walls[i]
        return w if sign == 0 else frozenset(range(self.point_count)) - w

    def separates_all_pairs(self):
        for a in range(self.point_count):
            for b in range(a + 1, self.point_count):
                if not any((a in w) != (b in w) for w in self.walls):
                    return False
        return True

    def to_json(self):
        return {
            "points": self.point_count,
            "walls": [sorted(self._canonical(w)) for w in self.walls],
        }

    def _canonical(self, w):
        comp = frozenset(range(self.point_count)) - w
        return min(w, comp, key=lambda s: tuple(sorted(s)))

    @staticmethod
    def from_json(data):
        return Wallspace(data["points"], tuple(frozenset(w) for w in data["walls"]))


def make_wallspace(points, walls):
    return Wallspace(points, tuple(frozenset(w) for w in walls))


def walls_of_median(mg: MedianGraph) -> Wallspace:
    """One wall per hyperplane; the carrier is the vertex set."""
    return Wallspace(mg.n, tuple(h.side_minus for h in mg.hyperplanes))


def _side_masks(ws):
    full = (1 << ws.point_count) - 1
    masks = []
    for w in ws.walls:
        m = sum(1 << p for p in w)
        masks.append((m, full & ~m))
    return masks


def _consistent(masks, bits, k, changed=None):
    """Pairwise consistency of the orientation encoded in bits.

    With changed set, only pairs touching that wall are rechecked.
    """
    idxs = range(k) if changed is None else [changed]
    for i in idxs:
        mi = masks[i][(bits >> i) & 1]
        for j in range(k):
            if j == i:
                continue
            if not (mi & masks[j][(bits >> j) & 1]):
                return False
    return True


def principal_orientation_bits(ws, point):
    """Orientation choosing, per wall, the side containing the point."""
    bits = 0
    for i, w in enumerate(ws.walls):
        if point not in w:
            bits |= 1 << i
    return bits


def cubulate(ws: Wallspace, cap=WALL_CAP):
    """Cubulation of a finite wallspace.

    Returns (MedianGraph, point_to_vertex map).  Vertices are the consistent
    orientations in the flip-component of the principal ones, numbered in
    sorted bit-string order; edges join orientations differing on one wall.
    """
    k = len(ws.walls)
    if k > cap:
        raise CapExceeded(f"cubulation capped at {cap} walls")
    masks = _side_masks(ws)
    principal = {principal_orientation_bits(ws, p) for p in range(ws.point_count)}
    if k == 0:
        g = FiniteGraph(1, [])
        mg = certify_median(g)
        return mg, {p: 0 for p in range(ws.point_count)}
    seen = set()
    frontier = []
    for b in sorted(principal):
        if not _consistent(masks, b, k):
            raise AssertionError("principal orientation inconsistent")
        if b not in seen:
            seen.add(b)
            frontier.append(b)
    while frontier:
        b = frontier.pop()
        for i in range(k):
            nb = b ^ (1 << i)
            if nb in seen:
                continue
            if _consistent(masks, nb, k, changed=i):
                seen.add(nb)
                frontier.append(nb)
    verts = sorted(seen)
    index = {b: i for i, b in enumerate(verts)}
    edges = []
    for b in verts:
        for i in range(k):
            nb = b ^ (1 << i)
            if nb > b and nb in index:
                edges.append((index[b], index[nb]))
    g = FiniteGraph(len(verts), edges)
    mg = certify_median(g)
    if not isinstance(mg, MedianGraph):
        raise AssertionError(f"cubulation is not median: {mg}")
    pmap = {p: index[principal_orientation_bits(ws, p)] for p in range(ws.point_count)}
    return mg, pmap


def all_consistent_orientations(ws: Wallspace, cap=16):
    """Oracle: brute-force enumeration over all 2^k orientations."""
    k = len(ws.walls)
    if k > cap:
        raise CapExceeded(f"brute-force orientation oracle capped at {cap} walls")
    masks = _side_masks(ws)
    return [b for b in range(1 << k) if _consistent(masks, b, k)]


def max_pairwise_crossing(ws: Wallspace, cap=12):
    """Largest number of pairwise-crossing walls, by subset search."""
    k = len(ws.walls)
    if k > cap:
        raise CapExceeded(f"crossing search capped at {cap} walls")
    masks = _side_masks(ws)

    def cross(i, j):
        return all(masks[i][a] & masks[j][b] for a in (0, 1) for b in (0, 1))

    adj = [[cross(i, j) if i != j else False for j in range(k)] for i in range(k)]
    best = 0

    def extend(clique, cands):
        nonlocal best
        best = max(best, len(clique))
        for pos, c in enumerate(cands):
            extend(clique + [c], [d for d in cands[pos + 1 :] if adj[c][d]])

    extend([], list(range(k)))
    return best
