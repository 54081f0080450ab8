import random
from itertools import combinations

import pytest

from oracles import interlaced, segments_cross
from smithvk.deleted import build_deleted_product
from smithvk.embedding import (DegeneracyError, EmbeddingMap, crossing_parity, embedding_class_report,
                               embedding_cocycle, moment_curve_map, reduced_embedding_cochain,
                               simplex_pair_intersection)
from smithvk.simplicial import SimplicialComplex, complete_bipartite, complete_graph, skeleton
from smithvk.smith import class_vanishes, quotient_of


def plane_map(coords):
    return EmbeddingMap(2, {v: v for v in coords}, coords)


def test_moment_curve_points():
    f = moment_curve_map(complete_graph(5), 2)
    assert [f.point(v) for v in range(5)] == [(i, i * i) for i in range(1, 6)]
    g = moment_curve_map(skeleton(2, 6), 4)
    assert g.point(6) == (7, 49, 343, 2401)


def test_moment_curve_rejects_bad_parameters():
    K = complete_graph(4)
    with pytest.raises(ValueError):
        moment_curve_map(K, 2, [1, 2, 2, 3])
    with pytest.raises(ValueError):
        moment_curve_map(K, 2, [1, 2, 3])


def test_crossing_examples():
    f = moment_curve_map(complete_graph(4), 2, [1, 2, 3, 4])
    assert abs(simplex_pair_intersection(f, (0, 2), (1, 3))) == 1
    assert simplex_pair_intersection(f, (0, 1), (2, 3)) == 0


def test_intersection_sign_is_antisymmetric_in_plane():
    f = moment_curve_map(complete_graph(4), 2)
    assert simplex_pair_intersection(f, (0, 2), (1, 3)) == -simplex_pair_intersection(f, (1, 3), (0, 2))


@pytest.mark.parametrize("m, n_vertices", [(2, 6), (3, 7), (4, 7)])
def test_magnitudes_follow_interlacing(m, n_vertices):
    rng = random.Random(m)
    params = sorted(rng.sample(range(-20, 40), n_vertices))
    rng.shuffle(params)
    K = SimplicialComplex([range(n_vertices)])
    f = moment_curve_map(K, m, params)
    checked = 0
    for p in range(1, m + 1):
        q = m + 2 - p
        for a in combinations(range(n_vertices), p):
            rest = [v for v in range(n_vertices) if v not in a]
            for b in combinations(rest, q):
                got = abs(simplex_pair_intersection(f, a, b))
                assert got == interlaced([params[v] for v in a], [params[v] for v in b])
                checked += 1
    assert checked > 50


def test_plane_crossings_match_orientation_oracle():
    rng = random.Random(17)
    for _ in range(100):
        pts = {v: (rng.randint(-30, 30), rng.randint(-30, 30)) for v in range(4)}
        f = plane_map(pts)
        try:
            got = abs(simplex_pair_intersection(f, (0, 1), (2, 3)))
        except DegeneracyError:
            continue
        assert got == segments_cross(pts[0], pts[1], pts[2], pts[3])


def test_degenerate_configurations():
    touching = plane_map({0: (0, 0), 1: (2, 0), 2: (1, 0), 3: (1, 1)})
    with pytest.raises(DegeneracyError):
        simplex_pair_intersection(touching, (0, 1), (2, 3))
    overlapping = plane_map({0: (0, 0), 1: (2, 0), 2: (1, 0), 3: (3, 0)})
    with pytest.raises(DegeneracyError):
        simplex_pair_intersection(overlapping, (0, 1), (2, 3))
    parallel = plane_map({0: (0, 0), 1: (1, 0), 2: (0, 1), 3: (1, 1)})
    assert simplex_pair_intersection(parallel, (0, 1), (2, 3)) == 0


def test_intersection_preconditions():
    f = moment_curve_map(complete_graph(4), 2)
    with pytest.raises(ValueError):
        simplex_pair_intersection(f, (0, 1), (1, 2))
    with pytest.raises(ValueError):
        simplex_pair_intersection(f, (0,), (1, 2))


@pytest.mark.parametrize("K, m", [(complete_graph(5), 2), (complete_bipartite(3, 3), 2), (skeleton(1, 4), 3),
                                  (skeleton(2, 6), 4), (skeleton(2, 6), 3)], ids=lambda x: str(x))
def test_cocycle_and_equivariance(K, m):
    D = build_deleted_product(K)
    theta = embedding_cocycle(K, m, D=D)
    assert D.is_cocycle(theta)
    assert D.involution_cochain(theta) == theta * (-1) ** m


@pytest.mark.parametrize("K", [complete_graph(5), complete_bipartite(3, 3)], ids=lambda K: K.name)
def test_map_independence(K):
    D = build_deleted_product(K)
    a = embedding_cocycle(K, 2, moment_curve_map(K, 2, [1, 2, 3, 4, 5, 6][:len(K.vertices)]), D)
    b = embedding_cocycle(K, 2, moment_curve_map(K, 2, [2, 3, 5, 7, 11, 13][:len(K.vertices)]), D)
    assert class_vanishes(D, a - b, "delta")


def test_k5_crossing_parity_and_count():
    K = complete_graph(5)
    f = moment_curve_map(K, 2)
    assert crossing_parity(K, f) == 5
    oracle = sum(segments_cross(f.point(a), f.point(b), f.point(c), f.point(d))
                 for (a, b), (c, d) in combinations(combinations(range(5), 2), 2) if not {a, b} & {c, d})
    assert oracle == 5


def test_k33_crossings_are_odd():
    assert crossing_parity(complete_bipartite(3, 3)) % 2 == 1


@pytest.mark.parametrize("K, nonzero", [(complete_graph(4), False), (complete_graph(5), True),
                                        (complete_bipartite(3, 3), True)], ids=["K4", "K5", "K33"])
def test_graph_reports(K, nonzero):
    rep = embedding_class_report(K, 2)
    assert rep.vanishes != nonzero
    assert rep.agrees_with_smith
    assert rep.mod2_vanishes != nonzero
    if nonzero:
        assert rep.torsion_certificate.modulus == 2
        assert rep.mod2_witness is not None


def test_general_position_range():
    rep = embedding_class_report(complete_graph(5), 3)
    assert rep.vanishes and rep.reason == "general position"


def test_reduced_cochain_lives_on_quotient():
    K = complete_graph(5)
    D = build_deleted_product(K)
    theta = embedding_cocycle(K, 2, D=D)
    nu = reduced_embedding_cochain(D, theta)
    Q = quotient_of(D)
    assert Q.is_cocycle(nu)
    assert not Q.is_coboundary(nu)
    assert Q.is_coboundary(nu * 2)
