"""Named verification scenarios tying all modules together.

Each scenario runs a fixed pipeline of checks and returns a ScenarioReport.
Reports are deterministic for fixed parameters (sorted iteration, seeded
randomness, no timestamps), so identical runs serialize identically.
A check that cannot be completed within its caps is reported as
"inconclusive", never silently skipped or passed.
"""

import itertools
import json
import random
from dataclasses import dataclass, field

from .graphs import (
    FiniteGraph,
    Permutation,
    build_gamma_rs,
    build_hypercube,
    build_join,
    empty_pair,
    automorphism_group,
    check_distance2_transitivity,
    graph_isomorphic,
)
from .median import (
    certify_median,
    MedianGraph,
    MedianFailure,
    convex_hull,
    cubical_dimension,
    GraphAction,
    fixed_set,
)
from .wallspace import walls_of_median, cubulate
from .topology import flag_completion, homology, nerve, nontrivial_in_dim, sphere_profile
from .groups import (
    Presentation,
    build_affine_coxeter,
    fwn_virtually_abelian,
    fw_plus_cyclic,
    verify_d4_quotients,
    LimitExceeded,
)
from .graphprod import GraphProductSpec, build_coset_complex, vgp_action, vertex_group_fixed_sets
from .quasimedian import build_qm_ball, verify_coset_structure, cubulate_with_wall_system, spike_wallspace
from .quasiline import PeriodicQuasiLine, QLIsometry, dinfty_from_quasiline_action, translation_data


@dataclass
class ScenarioReport:
    scenario: str
    params: dict
    checks: list = field(default_factory=list)
    resources: dict = field(default_factory=dict)

    def add(self, name, anchor, verdict, data=None):
        assert verdict in ("pass", "fail", "inconclusive")
        self.checks.append({"name": name, "anchor": anchor, "verdict": verdict, "data": data})

    @property
    def overall(self):
        if any(c["verdict"] == "fail" for c in self.checks):
            return "fail"
        if any(c["verdict"] == "inconclusive" for c in self.checks):
            return "inconclusive"
        return "pass"

    @property
    def exit_code(self):
        return {"pass": 0, "fail": 1, "inconclusive": 2}[self.overall]

    def to_json(self):
        return {
            "scenario": self.scenario,
            "params": self.params,
            "checks": self.checks,
            "overall": self.overall,
            "resources": self.resources,
        }

    def dump(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    def text(self):
        lines = [f"scenario {self.scenario} {self.params}"]
        for c in self.checks:
            lines.append(f"  [{c['verdict']:>12}] {c['name']}  ({c['anchor']})")
        lines.append(f"overall: {self.overall}")
        return "\n".join(lines)


def _round_trip(g):
    """walls-of -> cubulate -> isomorphic to the original median graph?"""
    mg = certify_median(g)
    if isinstance(mg, MedianFailure):
        return False, "not median"
    ws = walls_of_median(mg)
    rebuilt, _ = cubulate(ws)
    if rebuilt.graph.n != g.n:
        return False, f"vertex count {rebuilt.graph.n} != {g.n}"
    if graph_isomorphic(rebuilt.graph, g) is None:
        return False, "not isomorphic"
    return True, None


def _grid(a, b):
    edges = []
    v = lambda i, j: i * b + j
    for i in range(a):
        for j in range(b):
            if i + 1 < a:
                edges.append((v(i, j), v(i + 1, j)))
            if j + 1 < b:
                edges.append((v(i, j), v(i, j + 1)))
    return FiniteGraph(a * b, edges)


def _trees_up_to(max_n):
    import networkx as nx

    out = [FiniteGraph(1, [])]
    for n in range(2, max_n + 1):
        for t in nx.nonisomorphic_trees(n):
            out.append(FiniteGraph(n, list(t.edges())))
    return out


def _random_convex_subgraphs(count, seed):
    """Convex subgraphs of the 6-cube: hulls of random vertex sets."""
    rng = random.Random(seed)
    q6 = build_hypercube(6)
    mg = certify_median(q6)
    seen = set()
    graphs = []
    attempts = 0
    while len(graphs) < count and attempts < count * 20:
        attempts += 1
        k = rng.randint(2, 4)
        pts = rng.sample(range(q6.n), k)
        hull, _ = convex_hull(mg, set(pts))
        if hull in seen:
            continue
        seen.add(hull)
        verts = sorted(hull)
        idx = {v: i for i, v in enumerate(verts)}
        edges = [(idx[a], idx[b]) for a, b in q6.edges if a in hull and b in hull]
        graphs.append(FiniteGraph(len(verts), edges))
    return graphs


def scenario_duality(params):
    corpus = params.get("corpus", "small")
    seed = int(params.get("seed", 0))
    rep = ScenarioReport("duality", {"corpus": corpus, "seed": seed})
    if corpus == "small":
        graphs = _trees_up_to(7)
        graphs += [_grid(a, b) for a in range(2, 4) for b in range(a, 4)]
        graphs += [build_hypercube(d) for d in range(4)]
        graphs += _random_convex_subgraphs(10, seed)
    elif corpus == "full":
        graphs = _trees_up_to(10)
        graphs += [_grid(a, b) for a in range(2, 6) for b in range(a, 6)]
        graphs += [build_hypercube(d) for d in range(5)]
        graphs += _random_convex_subgraphs(50, seed)
    else:
        raise ValueError(f"unknown corpus {corpus!r}")
    failures = []
    for i, g in enumerate(graphs):
        ok, why = _round_trip(g)
        if not ok:
            failures.append({"index": i, "n": g.n, "reason": why})
    rep.add(
        "cubulation-round-trip",
        "cubulating the wallspace of a median graph recovers it",
        "pass" if not failures else "fail",
        {"instances": len(graphs), "failures": failures},
    )
    rep.resources = {"instances": len(graphs)}
    return rep


def scenario_cubulable_fw(params):
    n = int(params.get("n", 2))
    q = int(params.get("q", 5))
    rep = ScenarioReport("cubulable-fw", {"n": n, "q": q})
    gamma = build_join([empty_pair() for _ in range(n)])
    diam = max(max(row) for row in gamma.dist)
    rep.add(
        "join-diameter-two",
        "the n-fold join of two-point graphs has diameter 2",
        "pass" if diam == 2 else "fail",
        {"diameter": diam},
    )
    try:
        autos = automorphism_group(gamma)
        ok, counter = check_distance2_transitivity(gamma, autos)
        rep.add(
            "distance-two-pair-transitivity",
            "the full symmetry group is transitive on vertex pairs at distance 2",
            "pass" if ok else "fail",
            {"automorphisms": len(autos), "counterexample": counter},
        )
    except Exception as e:  # cap
        rep.add("distance-two-pair-transitivity", "the full symmetry group is transitive on vertex pairs at distance 2", "inconclusive", {"error": str(e)})
    ok = fw_plus_cyclic(q, n - 1)
    rep.add(
        "cyclic-group-small-divisor-condition",
        "Z/q fixes a point in every action on a median graph of dimension below n when q has no divisor in [2, n-1]",
        "pass" if ok else "fail",
        {"q": q, "dimension": n - 1},
    )
    sc = flag_completion(gamma)
    ok = nontrivial_in_dim(sc, n - 1)
    prof = homology(sc)
    rep.add(
        "flag-completion-homology-nontrivial",
        "the flag completion of the join carries non-trivial reduced homology in dimension n-1",
        "pass" if ok else "fail",
        {"betti": list(prof.betti), "torsion": [list(t) for t in prof.torsion]},
    )
    rep.resources = {"gamma_vertices": gamma.n}
    return rep


def scenario_gamma_rs(params):
    r = int(params.get("r", 3))
    s = int(params.get("s", 2))
    rep = ScenarioReport("gamma-rs", {"r": r, "s": s})
    g = build_gamma_rs(r, s)
    diam = max(max(row) for row in g.dist)
    want = -(-r // s)
    rep.add(
        "thickened-cube-diameter",
        "connecting cube vertices at Hamming distance <= s divides the diameter by s",
        "pass" if diam == want else "fail",
        {"diameter": diam, "expected": want},
    )
    if s == r:
        complete = len(g.edges) == g.n * (g.n - 1) // 2
        rep.add(
            "complete-at-s-equals-r",
            "at s = r every pair of cube vertices is joined",
            "pass" if complete else "fail",
            None,
        )
    # halfspace nerve of the r-cube: one sphere of dimension r-1
    mg = certify_median(build_hypercube(r))
    halfspaces = []
    for h in mg.hyperplanes:
        halfspaces.append(h.side_minus)
        halfspaces.append(h.side_plus)
    sc = nerve(halfspaces)
    prof = homology(sc)
    ok = sphere_profile(r - 1, prof)
    rep.add(
        "halfspace-nerve-is-sphere",
        "the nerve of the 2r halfspaces of the r-cube is an (r-1)-sphere",
        "pass" if ok else "fail",
        {"betti": list(prof.betti), "torsion": [list(t) for t in prof.torsion]},
    )
    # the non-complementary-halfspace graph is the r-fold join of point pairs
    k = len(halfspaces)
    edges = [
        (i, j)
        for i in range(k)
        for j in range(i + 1, k)
        if halfspaces[i] & halfspaces[j]
    ]
    hgraph = FiniteGraph(k, edges)
    join = build_join([empty_pair() for _ in range(r)])
    ok = graph_isomorphic(hgraph, join) is not None
    rep.add(
        "halfspace-graph-is-join",
        "halfspaces meet unless complementary, giving the r-fold join of point pairs",
        "pass" if ok else "fail",
        None,
    )
    rep.resources = {"halfspaces": k}
    return rep


def scenario_graph_product(params):
    qa = int(params.get("qa", 2))
    qb = int(params.get("qb", 2))
    rep = ScenarioReport("graph-product", {"qa": qa, "qb": qb})
    k2 = FiniteGraph(2, [(0, 1)])
    spec = GraphProductSpec(k2, (qa, qb))
    cc = build_coset_complex(spec)
    mg = certify_median(cc.graph)
    median_ok = isinstance(mg, MedianGraph)
    rep.add(
        "coset-complex-median",
        "the complex of cosets g<L> over complete subgraphs is a median graph",
        "pass" if median_ok else "fail",
        {"vertices": cc.graph.n},
    )
    if not median_ok:
        return rep
    dim = cubical_dimension(mg)
    rep.add(
        "coset-complex-dimension",
        "cubical dimension equals the clique number of the defining graph",
        "pass" if dim == 2 else "fail",
        {"dimension": dim},
    )
    ball = build_qm_ball(spec, 2)
    struct = verify_coset_structure(ball, 0)
    rep.add(
        "cayley-ball-coset-structure",
        "cliques of the group's Cayley ball are vertex-group cosets and prisms are coset boxes",
        "pass" if not struct["violations"] else "fail",
        struct,
    )
    mg2, _ = cubulate_with_wall_system(ball, {0: spike_wallspace(qa), 1: spike_wallspace(qb)})
    iso = graph_isomorphic(mg2.graph, cc.graph) is not None
    rep.add(
        "wall-system-cross-oracle",
        "cubulating the transported per-clique wall system reproduces the coset complex",
        "pass" if iso else "fail",
        {"wall_system_vertices": mg2.graph.n},
    )
    swap = Permutation((1, 0))
    action = vgp_action(spec, [swap] if qa == qb else [], cc)
    elements = action.group_elements()
    empty_cosets = [i for i, (_, lam) in enumerate(cc.cosets) if lam == ()]
    stab_orders = {
        i: sum(1 for p in elements if p.images[i] == i) for i in empty_cosets
    }
    bound = 2  # |Isom(K2)|
    ok = all(bound % o == 0 for o in stab_orders.values())
    rep.add(
        "group-vertex-stabilizers-divide-symmetries",
        "stabilizers of group-element vertices embed in the defining graph's symmetry group",
        "pass" if ok else "fail",
        {"orders": sorted(set(stab_orders.values())), "group_order": len(elements)},
    )
    # defining relators act as the identity permutation
    ident = Permutation.identity(cc.graph.n)
    rel_words = [
        [(("g", 0), qa)],
        [(("g", 1), qb)],
        [(("g", 0), 1), (("g", 1), 1), (("g", 0), -1), (("g", 1), -1)],
    ]
    if qa == qb:
        rel_words.append([(("h", 0), 2)])
        rel_words.append([(("h", 0), 1), (("g", 0), 1), (("h", 0), -1), (("g", 1), -1)])
    ok = all(action.evaluate(w) == ident for w in rel_words)
    rep.add(
        "relators-act-trivially",
        "every defining relator of the extended graph product acts as the identity",
        "pass" if ok else "fail",
        {"relators_checked": len(rel_words)},
    )
    fixed, convex, inter = vertex_group_fixed_sets(spec, action, mg)
    ok = all(f for f in fixed) and all(convex) and inter[0][1] > 0
    rep.add(
        "vertex-group-fixed-sets",
        "adjacent vertex groups have non-empty convex fixed sets with common points",
        "pass" if ok else "fail",
        {"sizes": [len(f) for f in fixed], "intersection": [list(r) for r in inter]},
    )
    rep.resources = {"complex_vertices": cc.graph.n, "group_order": len(elements)}
    return rep


def scenario_affine_coxeter(params):
    n = int(params.get("n", 2))
    limit = int(params.get("limit", 10000))
    rep = ScenarioReport("affine-coxeter", {"n": n, "limit": limit})
    pres = build_affine_coxeter(n)
    try:
        verdict = fwn_virtually_abelian(pres, n)
    except LimitExceeded as e:
        rep.add(
            "no-small-index-dihedral-quotient",
            "no subgroup of index <= n maps onto the infinite dihedral group",
            "inconclusive",
            {"error": str(e)},
        )
        return rep
    data = {"holds": verdict.holds}
    if not verdict.holds:
        data["subgroup_index"] = verdict.subgroup_index
        w = verdict.witness
        data["witness"] = {
            "sigma": list(w.sigma),
            "lam": [str(x) for x in w.lam],
            "word": list(w.word),
            "value": str(w.value),
        }
    rep.add(
        "no-small-index-dihedral-quotient",
        "no subgroup of index <= n maps onto the infinite dihedral group",
        "pass" if verdict.holds else "fail",
        data,
    )
    if n == 3:
        quotients = verify_d4_quotients(coset_limit=limit)
        for case in sorted(quotients):
            result = quotients[case]
            if result["finite"] is True:
                v = "pass"
            elif result["finite"] is False:
                v = "fail"
            else:
                v = "inconclusive"
            rep.add(
                f"square-symmetry-quotient-finite[{case}]",
                "the rank-3 lattice extended by square symmetries has finite quotient after killing one index-two part",
                v,
                result,
            )
    rep.resources = {"generators": pres.generator_count}
    return rep


def scenario_quasiline_dinfty(params):
    length = int(params.get("length", 4))
    rep = ScenarioReport("quasiline-dinfty", {"length": length})
    line = PeriodicQuasiLine(FiniteGraph(2, [(0, 1)]), (0,), (1,))
    refl0 = QLIsometry(0, True, Permutation((1, 0)))
    refl1 = QLIsometry(1, True, Permutation((1, 0)))
    phi, report = dinfty_from_quasiline_action(line, {"a": refl0, "b": refl1}, length=length)
    for check in report["checks"]:
        anchors = {
            "homomorphism-law": "the emitted map multiplies like the dihedral group on all short words",
            "infinite-image": "some value has non-zero translation part",
            "cocycle-identity": "translation parts satisfy the twisted additivity rule",
            "conjugation-negates-translation": "conjugating by an end-swapper negates translation lengths",
        }
        rep.add(
            f"two-reflection-{check['name']}",
            anchors[check["name"]],
            "pass" if check["ok"] else "fail",
            None,
        )
    rep.checks[-1]["data"] = {"phi": {k: [v.translation, v.flip] for k, v in sorted(phi.items())}, "g0": report["g0"]}
    shift = QLIsometry(1, False, Permutation.identity(2))
    phi2, rep2 = dinfty_from_quasiline_action(line, {"s": shift}, length=length)
    ok = (
        rep2["ok"]
        and rep2["g0"] is None
        and phi2["s"].translation == 1
        and phi2["s"].flip == 1
    )
    rep.add(
        "pure-shift-lands-in-translations",
        "an action without end-swappers maps into the translation subgroup",
        "pass" if ok else "fail",
        {"phi": {k: [v.translation, v.flip] for k, v in sorted(phi2.items())}},
    )
    rep.resources = {"word_length": length}
    return rep


def scenario_cube_fix(params):
    k = int(params.get("k", 3))
    rep = ScenarioReport("cube-fix", {"k": k})
    q = build_hypercube(k)
    mg = certify_median(q)
    # transitive coordinate rotation: bit i -> bit (i+1) mod k
    images = []
    for v in range(q.n):
        w = ((v << 1) | (v >> (k - 1))) & (q.n - 1)
        images.append(w)
    action = GraphAction(q, {"rot": Permutation(tuple(images))})
    fix = sorted(fixed_set(mg, action))
    expected = [0, q.n - 1]
    rep.add(
        "fixed-set-is-diagonal-pair",
        "a transitive coordinate rotation of the cube fixes exactly the two constant vertices",
        "pass" if fix == expected else "fail",
        {"fixed": fix},
    )
    hull_set, _ = convex_hull(mg, set(expected))
    hull = sorted(hull_set)
    ok = hull == list(range(q.n))
    rep.add(
        "fixed-set-hull-is-whole-cube",
        "the convex hull of the two constant vertices is the whole cube, so the fixed set is not convex",
        "pass" if ok else "fail",
        {"hull_size": len(hull), "convex": len(hull) == len(fix)},
    )
    rep.resources = {"vertices": q.n}
    return rep


SCENARIOS = {
    "duality": scenario_duality,
    "cubulable-fw": scenario_cubulable_fw,
    "gamma-rs": scenario_gamma_rs,
    "graph-product": scenario_graph_product,
    "affine-coxeter": scenario_affine_coxeter,
    "quasiline-dinfty": scenario_quasiline_dinfty,
    "cube-fix": scenario_cube_fix,
}


def run_scenario(name, params=None):
    if name not in SCENARIOS:
        raise KeyError(f"unknown scenario {name!r}; known: {sorted(SCENARIOS)}")
    return SCENARIOS[name](params or {})
