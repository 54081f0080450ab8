import pytest
from hypothesis import given, strategies as st

from smithvk.chains import Chain
from smithvk.simplicial import (SimplicialComplex, canonicalize_simplex, complete_bipartite, complete_graph,
                                cone_simplex, cycle_graph, discrete, generate_corpus, join_complex, join_power,
                                join_three, load_complex, path_graph, permutation_sign, save_complex,
                                simplex_boundary, skeleton)


@pytest.mark.parametrize("raw, expected", [
    ([2, 0, 1], ((0, 1, 2), 1)),
    ([1, 0], ((0, 1), -1)),
    ([0, 1, 2], ((0, 1, 2), 1)),
])
def test_canonicalize(raw, expected):
    s = canonicalize_simplex(raw)
    assert (s.vertices, s.sign) == expected


def test_canonicalize_rejects_duplicates():
    with pytest.raises(ValueError):
        canonicalize_simplex([0, 1, 0])


@given(st.lists(st.integers(0, 30), min_size=1, max_size=7, unique=True))
def test_canonicalize_idempotent(vs):
    s = canonicalize_simplex(vs)
    t = canonicalize_simplex(s.vertices)
    assert t.vertices == s.vertices and t.sign == 1
    assert s.sign == permutation_sign(vs) * permutation_sign(sorted(vs))


def test_simplex_boundary_examples():
    assert simplex_boundary([0, 1, 2]) == Chain(1, {(1, 2): 1, (0, 2): -1, (0, 1): 1})
    assert simplex_boundary([0, 1]) == Chain(0, {(1,): 1, (0,): -1})
    assert simplex_boundary([5]).is_zero()


def test_cone_boundary_formula():
    coned = simplex_boundary(cone_simplex(9, [0, 1]))
    s = cone_simplex(9, [0, 1])
    assert s.sign == 1 and s.vertices == (0, 1, 9)
    # d[9,0,1] = [0,1] - [9,1] + [9,0] written in canonical orientation
    expected = Chain(1, {(0, 1): 1, (1, 9): 1, (0, 9): -1})
    assert coned == expected


def test_boundary_squares_to_zero():
    for K in (skeleton(3, 6), join_three(complete_graph(4)), complete_bipartite(3, 3)):
        for i in range(2, K.dim + 1):
            assert (K.boundary_matrix(i - 1) @ K.boundary_matrix(i)).is_zero()


def test_face_closure():
    K = SimplicialComplex([[0, 1, 2, 3]])
    assert [len(level) for level in K.simplices] == [4, 6, 4, 1]
    for level in K.simplices[1:]:
        for s in level:
            for face in K.boundary_of(s):
                assert face in K


def test_join_counts():
    L = join_three(complete_graph(5))
    assert L.cell_counts() == [8, 25, 30]
    assert join_complex([7], SimplicialComplex([[0, 1]])).cell_counts() == [3, 3, 1]
    assert join_complex([0, 1, 2], SimplicialComplex([])).cell_counts() == [3]


def test_join_has_no_two_apex_simplex():
    L = join_three(complete_graph(3))
    apexes = {3, 4, 5}
    assert all(len(set(s) & apexes) <= 1 for level in L.simplices for s in level)


def test_join_rejects_collisions():
    with pytest.raises(ValueError):
        join_complex([0, 9], complete_graph(3))


def test_corpus_counts():
    assert skeleton(2, 6).cell_counts() == [7, 21, 35]
    assert complete_graph(5).cell_counts() == [5, 10]
    assert join_power(3, 2) == complete_bipartite(3, 3)
    assert complete_bipartite(3, 3).vertices == list(range(6))
    assert path_graph(4).cell_counts() == [4, 3]
    assert cycle_graph(5).cell_counts() == [5, 5]
    assert discrete(3).cell_counts() == [3]


def test_generate_corpus_and_unknown_name():
    assert generate_corpus("complete_graph", 4) == complete_graph(4)
    with pytest.raises(ValueError):
        generate_corpus("moebius", 3)


def test_json_roundtrip(tmp_path):
    K = skeleton(2, 5)
    path = tmp_path / "k.json"
    save_complex(K, path)
    assert load_complex(path) == K
    assert SimplicialComplex.from_json({"result": K.to_json()}) == K


def test_relabel():
    K = complete_graph(3).relabel({0: 10, 1: 11, 2: 12})
    assert K.vertices == [10, 11, 12]
