import random

import pytest

from smithvk.deleted import build_deleted_product, sphere_z2_complex, transfer_cochain
from smithvk.simplicial import complete_bipartite, complete_graph, join_three, skeleton
from smithvk.smith import (InvariantViolation, NotACocycleError, ResolutionSequence, check_exactness,
                           class_vanishes, constant_one, mu_step, quotient_of, reduced_classes,
                           reduced_matches_special, resolution_of_one, restrict_resolution, rho_of_degree,
                           smith_classes, smith_classes_and_index, solve_special, special_coboundary,
                           special_subcomplex_basis, verify_resolution)

STRATEGIES = ("explicit", "mirror", "random", "solve")


def corpus():
    return [sphere_z2_complex(3), build_deleted_product(complete_graph(5)),
            build_deleted_product(complete_bipartite(3, 3)), build_deleted_product(join_three(complete_graph(3)))]


@pytest.mark.parametrize("n", range(1, 5))
def test_sphere_classes(n):
    S = sphere_z2_complex(n)
    report = smith_classes_and_index(S)
    assert report.index == n + 1
    assert [not c.vanishes for c in report.classes] == [k <= n for k in range(n + 3)]
    assert report.mod2_index == n + 1


@pytest.mark.parametrize("n", range(1, 5))
def test_sphere_reduced_classes_are_cell_generators(n):
    S = sphere_z2_complex(n)
    Q = quotient_of(S)
    for rc in reduced_classes(S, resolution_of_one(S)):
        assert not rc.vanishes
        gamma = Q.cochain(rc.degree, {("+", rc.degree): 1}, rc.ring)
        assert Q.is_coboundary(rc.representative - gamma)


@pytest.mark.parametrize("K, index", [(complete_graph(4), 2), (complete_graph(5), 3), (complete_bipartite(3, 3), 3)],
                         ids=["K4", "K5", "K33"])
def test_graph_indices(K, index):
    assert smith_classes_and_index(build_deleted_product(K)).index == index


@pytest.mark.parametrize("X", corpus(), ids=lambda X: X.name)
def test_exactness_of_all_four_sequences(X):
    for i in range(X.dim + 1):
        for rho in ("delta", "s"):
            for kind in ("chain", "cochain"):
                assert check_exactness(X, i, rho, kind).exact


def test_special_basis_rank():
    X = build_deleted_product(complete_graph(5))
    for rho in ("delta", "s"):
        basis = special_subcomplex_basis(X, 1, rho)
        assert basis.rank == 30
        for g in basis.generators:
            eps = 1 if rho == "delta" else -1
            assert X.involution(g) == g * eps


@pytest.mark.parametrize("X", corpus(), ids=lambda X: X.name)
def test_mu_step_independent_of_solve(X):
    rep = constant_one(X)
    for k in range(1, X.dim + 1):
        rho = rho_of_degree(k - 1)
        outs = [mu_step(X, rep, rho, s, random.Random(k)) for s in STRATEGIES]
        for other in outs[1:]:
            assert class_vanishes(X, outs[0] - other, rho_of_degree(k))
        rep = outs[0]


def test_mu_of_coboundary_is_coboundary():
    X = build_deleted_product(complete_graph(5))
    rng = random.Random(5)
    for rho in ("delta", "s"):
        phi = special_coboundary(X, 0, [rng.randint(-3, 3) for _ in X.domain(0)], rho)
        other = "s" if rho == "delta" else "delta"
        assert class_vanishes(X, mu_step(X, phi, rho), other)


def test_class_vanishes_examples():
    S2 = sphere_z2_complex(2)
    classes = smith_classes(S2)
    assert class_vanishes(S2, S2.cochain(1), "s")
    assert not class_vanishes(S2, classes[2].representative, "delta")
    S1 = sphere_z2_complex(1)
    assert smith_classes(S1)[2].vanishes
    rng = random.Random(1)
    for rho in ("delta", "s"):
        assert class_vanishes(S2, special_coboundary(S2, 1, [rng.randint(-5, 5)], rho), "s" if rho == "s" else "delta")


def test_class_vanishes_rejects_non_cocycles():
    X = build_deleted_product(complete_graph(4))
    with pytest.raises(NotACocycleError):
        class_vanishes(X, X.cochain(0, {X.cells(0)[0]: 1}), "delta")
    with pytest.raises(NotACocycleError):
        mu_step(X, X.special_cochain(0, {X.domain(0)[0]: 1}, "delta"), "delta")


def test_solve_special_reports_missing_solution():
    S = sphere_z2_complex(1)
    with pytest.raises(InvariantViolation):
        solve_special(S, S.cochain(0, {("+", 0): 1}), 1, "solve")


@pytest.mark.parametrize("X", corpus(), ids=lambda X: X.name)
def test_resolutions_agree_across_strategies(X):
    results = []
    for strategy, seed in (("explicit", 0), ("random", 1), ("solve", 2), ("mirror", 0)):
        res = resolution_of_one(X, strategy=strategy, seed=seed)
        assert verify_resolution(X, res) == []
        results.append(reduced_classes(X, res))
    Q = quotient_of(X)
    for other in results[1:]:
        for a, b in zip(results[0], other):
            assert a.vanishes == b.vanishes
            assert Q.is_coboundary(a.representative - b.representative)


def test_reduced_matches_special_in_even_degrees():
    for X in corpus():
        res = resolution_of_one(X)
        for k in range(0, X.dim + 1, 2):
            assert reduced_matches_special(X, res, k)


def test_verify_resolution_detects_corruption():
    X = build_deleted_product(complete_graph(5))
    res = resolution_of_one(X)
    bad = ResolutionSequence(res.complex_name, [res[0], res[1] * 2, res[2]])
    assert verify_resolution(X, bad)


def test_resolution_json_roundtrip():
    X = build_deleted_product(complete_graph(5))
    res = resolution_of_one(X, strategy="random", seed=4)
    back = ResolutionSequence.from_json(res.to_json())
    assert back.cochains == res.cochains
    assert verify_resolution(X, back) == []


@pytest.mark.parametrize("K", [complete_graph(4), complete_graph(5), complete_bipartite(3, 3)], ids=lambda K: K.name)
def test_restriction_of_resolution(K):
    big = build_deleted_product(join_three(K))
    small = build_deleted_product(K)
    res = resolution_of_one(big, 4, strategy="random", seed=9)
    assert verify_resolution(small, restrict_resolution(res, big, small)) == []


def test_resolution_length_is_bounded():
    with pytest.raises(ValueError):
        resolution_of_one(sphere_z2_complex(2), 5)


def test_reduced_class_of_unit():
    X = build_deleted_product(skeleton(1, 4))
    Q = quotient_of(X)
    res = resolution_of_one(X, 0)
    assert transfer_cochain(Q, res[0]) == Q.cochain(0, {v: 1 for v in Q.cells(0)})


def test_summary_shape():
    summary = smith_classes_and_index(sphere_z2_complex(2)).summary()
    assert summary["index"] == 3
    assert [c["nonzero"] for c in summary["classes"]] == [True, True, True, False, False]
    assert summary["reduced_index"] is None
