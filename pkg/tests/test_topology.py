import math

from hypothesis import given, settings, strategies as st

from medtk.graphs import FiniteGraph, build_hypercube, build_join, empty_pair
from medtk.median import certify_median
from medtk.topology import (
    HomologyProfile,
    SimplicialComplex,
    flag_completion,
    homology,
    nerve,
    nontrivial_in_dim,
    smith_normal_form,
    sphere_profile,
    verify_boundary_squared,
)


def test_complex_basics():
    sc = SimplicialComplex(4, [(0, 1, 2), (2, 3)])
    assert sc.dimension() == 2
    assert sc.euler_characteristic() == 4 - 4 + 1
    assert SimplicialComplex.from_json(sc.to_json()).faces() == sc.faces()


def test_flag_completion_triangle():
    k3 = FiniteGraph(3, [(0, 1), (1, 2), (0, 2)])
    sc = flag_completion(k3)
    assert sc.dimension() == 2
    prof = homology(sc)
    assert prof.reduced_betti() == ()  # contractible


def test_circle_homology():
    c4 = FiniteGraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    prof = homology(flag_completion(c4))
    assert prof.betti == (1, 1)
    assert sphere_profile(1, prof)


def test_octahedron_is_two_sphere():
    octa = build_join([empty_pair()] * 3)
    prof = homology(flag_completion(octa))
    assert prof.reduced_betti() == (0, 0, 1)
    assert sphere_profile(2, prof)


def test_join_spheres():
    for n in (2, 3, 4):
        g = build_join([empty_pair()] * n)
        prof = homology(flag_completion(g))
        assert sphere_profile(n - 1, prof)
        assert nontrivial_in_dim(flag_completion(g), n - 1)
        assert not nontrivial_in_dim(flag_completion(g), n - 2)


def test_projective_plane_torsion():
    # minimal 6-vertex triangulation: antipodal quotient of the icosahedron
    facets = [
        (0, 1, 3), (0, 1, 4), (0, 2, 3), (0, 2, 5), (0, 4, 5),
        (1, 2, 4), (1, 2, 5), (1, 3, 5), (2, 3, 4), (3, 4, 5),
    ]
    sc = SimplicialComplex(6, facets)
    prof = homology(sc)
    assert prof.betti == (1, 0, 0)
    assert prof.torsion[1] == (2,)
    assert verify_boundary_squared(sc)


def test_nerve_of_interval_cover():
    # three arcs covering a circle pairwise but not triply
    fam = [{0, 1}, {1, 2}, {2, 0}]
    sc = nerve(fam)
    assert sphere_profile(1, homology(sc))
    # a cover with a global common point nerves to a simplex
    fam2 = [{0, 1}, {0, 2}, {0, 3}]
    assert homology(nerve(fam2)).reduced_betti() == ()


def test_halfspace_nerve_spheres():
    for d in (2, 3):
        mg = certify_median(build_hypercube(d))
        halves = []
        for h in mg.hyperplanes:
            halves.append(h.side_minus)
            halves.append(h.side_plus)
        prof = homology(nerve(halves))
        assert sphere_profile(d - 1, prof)


def test_smith_normal_form_known():
    assert smith_normal_form([[2, 0], [0, 3]]) == [1, 6]
    assert smith_normal_form([[1, 0], [0, 0]]) == [1]
    assert smith_normal_form([[0, 0], [0, 0]]) == []
    assert smith_normal_form([[2, 4], [6, 8]]) == [2, 4]
    assert smith_normal_form([[4, 6]]) == [2]


def test_boundary_squared():
    sc = SimplicialComplex(5, [(0, 1, 2, 3), (1, 2, 3, 4)])
    assert verify_boundary_squared(sc)


@st.composite
def small_matrices(draw):
    r = draw(st.integers(1, 3))
    c = draw(st.integers(1, 3))
    return [[draw(st.integers(-6, 6)) for _ in range(c)] for _ in range(r)]


def _gcd_of_minors(m, k):
    import itertools

    r, c = len(m), len(m[0])
    g = 0
    for rows in itertools.combinations(range(r), k):
        for cols in itertools.combinations(range(c), k):
            sub = [[m[i][j] for j in cols] for i in rows]
            g = math.gcd(g, round(_det(sub)))
    return g


def _det(m):
    k = len(m)
    if k == 1:
        return m[0][0]
    total = 0
    for j in range(k):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        total += (-1) ** j * m[0][j] * _det(minor)
    return total


@settings(max_examples=60, deadline=None)
@given(small_matrices())
def test_snf_matches_minor_gcds(m):
    divs = smith_normal_form([row[:] for row in m])
    for i in range(len(divs) - 1):
        assert divs[i + 1] % divs[i] == 0
    prod = 1
    for k, d in enumerate(divs, start=1):
        prod *= d
        assert abs(prod) == _gcd_of_minors(m, k)
    if len(divs) < min(len(m), len(m[0])):
        assert _gcd_of_minors(m, len(divs) + 1) == 0
