"""Abstract simplicial complexes, oriented simplices, joins and a small corpus.

A simplex is stored as an ascending tuple of integer vertex labels; that
order is its reference orientation.  Any other vertex order is an
:class:`OrientedSimplex` carrying the parity sign of the sorting permutation.
"""
from __future__ import annotations

import json
from itertools import combinations
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

from .chains import CellComplex, Chain

Simplex = tuple[int, ...]


class OrientedSimplex(NamedTuple):
    vertices: Simplex
    sign: int

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


def permutation_sign(seq: Sequence[int]) -> int:
    """Parity sign of the permutation sorting ``seq`` (entries distinct)."""
    sign = 1
    seen = [False] * len(seq)
    order = sorted(range(len(seq)), key=seq.__getitem__)
    for start in range(len(seq)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def canonicalize_simplex(vertices: Iterable[int]) -> OrientedSimplex:
    vs = [int(v) for v in vertices]
    if len(set(vs)) != len(vs):
        raise ValueError(f"repeated vertex in simplex {vs}")
    return OrientedSimplex(tuple(sorted(vs)), permutation_sign(vs))


def simplex_boundary(simplex: OrientedSimplex | Sequence[int]) -> Chain:
    """Alternating sum of facets; a vertex has zero boundary."""
    if not isinstance(simplex, OrientedSimplex):
        simplex = canonicalize_simplex(simplex)
    return Chain(simplex.dim - 1, _boundary_terms(simplex.vertices, simplex.sign))


def _boundary_terms(vs: Simplex, sign: int = 1) -> dict[Simplex, int]:
    if len(vs) <= 1:
        return {}
    return {vs[:k] + vs[k + 1:]: sign * (-1) ** k for k in range(len(vs))}


def cone_simplex(apex: int, simplex: Sequence[int]) -> OrientedSimplex:
    """The simplex ``apex * simplex`` oriented with the apex first."""
    return canonicalize_simplex([apex, *simplex])


class SimplicialComplex(CellComplex):
    """A finite abstract simplicial complex, closed under faces."""

    def __init__(self, maximal: Iterable[Iterable[int]], name: str = "", vertices: Iterable[int] = ()):
        super().__init__()
        self.name = name
        faces: set[Simplex] = set()
        gens = [tuple(sorted(set(int(v) for v in s))) for s in maximal]
        for s in gens:
            if not s:
                continue
            for r in range(1, len(s) + 1):
                faces.update(combinations(s, r))
        for v in vertices:
            faces.add((int(v),))
        top = max((len(s) for s in faces), default=0)
        self._cells = [sorted(s for s in faces if len(s) == k + 1) for k in range(top)]
        self._faces = faces

    @property
    def vertices(self) -> list[int]:
        return [s[0] for s in self.cells(0)]

    @property
    def simplices(self) -> list[list[Simplex]]:
        return self._cells

    def __contains__(self, s) -> bool:
        return tuple(sorted(s)) in self._faces

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._faces == other._faces

    def __hash__(self):
        return hash(frozenset(self._faces))

    def __repr__(self) -> str:
        return f"SimplicialComplex({self.name!r}, f={self.cell_counts()})"

    def cell_dim(self, cell: Simplex) -> int:
        return len(cell) - 1

    def boundary_of(self, cell: Simplex) -> dict[Simplex, int]:
        return _boundary_terms(cell)

    def maximal_simplices(self) -> list[Simplex]:
        out = []
        for s in sorted(self._faces, key=lambda s: (-len(s), s)):
            if not any(set(s) < set(t) for t in out):
                out.append(s)
        return sorted(out, key=lambda s: (len(s), s))

    def relabel(self, mapping: dict[int, int], name: str | None = None) -> "SimplicialComplex":
        return SimplicialComplex(
            [[mapping[v] for v in s] for s in self.maximal_simplices()],
            name=self.name if name is None else name,
            vertices=[mapping[v] for v in self.vertices])

    def to_json(self) -> dict:
        return {"name": self.name, "maximal_simplices": [list(s) for s in self.maximal_simplices()]}

    @classmethod
    def from_json(cls, data: dict) -> "SimplicialComplex":
        if isinstance(data, dict) and isinstance(data.get("result"), dict):
            data = data["result"]  # a report written by the command-line tool
        if not isinstance(data, dict) or "maximal_simplices" not in data:
            raise ValueError("complex JSON needs a 'maximal_simplices' list")
        simplices = data["maximal_simplices"]
        if not isinstance(simplices, list) or not all(isinstance(s, list) for s in simplices):
            raise ValueError("'maximal_simplices' must be a list of integer lists")
        for s in simplices:
            if len(set(s)) != len(s):
                raise ValueError(f"repeated vertex in simplex {s}")
            if not all(isinstance(v, int) for v in s):
                raise ValueError(f"non-integer vertex label in {s}")
        return cls(simplices, name=str(data.get("name", "")))


def load_complex(path: str | Path) -> SimplicialComplex:
    with open(path) as fh:
        return SimplicialComplex.from_json(json.load(fh))


def save_complex(K: SimplicialComplex, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(K.to_json(), fh, indent=1)


def join_complex(apexes: Sequence[int], K: SimplicialComplex, name: str | None = None) -> SimplicialComplex:
    """Join of ``K`` with a discrete set of fresh apex vertices."""
    apexes = [int(a) for a in apexes]
    if len(set(apexes)) != len(apexes):
        raise ValueError("apex labels must be distinct")
    clash = set(apexes) & set(K.vertices)
    if clash:
        raise ValueError(f"apex labels {sorted(clash)} already used in {K.name or 'K'}")
    maximal = [(a, *s) for a in apexes for s in K.maximal_simplices()]
    if not K.cells(0):
        maximal = [(a,) for a in apexes]
    if name is None:
        name = f"[{len(apexes)}]*{K.name}" if K.name else f"[{len(apexes)}]*K"
    return SimplicialComplex(maximal, name=name, vertices=list(K.vertices) + apexes)


def fresh_apexes(K: SimplicialComplex, count: int = 3) -> list[int]:
    top = max(K.vertices, default=-1)
    return [top + 1 + k for k in range(count)]


def join_three(K: SimplicialComplex) -> SimplicialComplex:
    """``[3]*K`` with apexes labelled max+1, max+2, max+3."""
    return join_complex(fresh_apexes(K, 3), K)


# corpus -------------------------------------------------------------------

def complete_graph(n: int) -> SimplicialComplex:
    return SimplicialComplex(combinations(range(n), 2), name=f"K{n}", vertices=range(n))


def complete_bipartite(a: int, b: int) -> SimplicialComplex:
    edges = [(i, a + j) for i in range(a) for j in range(b)]
    return SimplicialComplex(edges, name=f"K{a},{b}", vertices=range(a + b))


def skeleton(d: int, n: int) -> SimplicialComplex:
    """The d-skeleton of the n-simplex, on vertices 0..n."""
    return SimplicialComplex(combinations(range(n + 1), d + 1), name=f"skel{d}_{n}", vertices=range(n + 1))


def path_graph(n: int) -> SimplicialComplex:
    """Path with ``n`` vertices."""
    return SimplicialComplex([(i, i + 1) for i in range(n - 1)], name=f"P{n}", vertices=range(n))


def cycle_graph(n: int) -> SimplicialComplex:
    if n < 3:
        raise ValueError("a cycle graph needs at least 3 vertices")
    return SimplicialComplex([tuple(sorted((i, (i + 1) % n))) for i in range(n)], name=f"C{n}", vertices=range(n))


def discrete(n: int) -> SimplicialComplex:
    return SimplicialComplex([], name=f"[{n}]", vertices=range(n))


def join_power(n: int, k: int) -> SimplicialComplex:
    """The k-fold join [n]*[n]*...*[n], vertices 0..nk-1."""
    if k < 1:
        raise ValueError("join_power needs k >= 1")
    K = discrete(n)
    for _ in range(k - 1):
        K = join_complex(fresh_apexes(K, n), K)
    K.name = f"[{n}]^{k}"
    return K


CORPUS = {
    "complete_graph": (complete_graph, 1),
    "complete_bipartite": (complete_bipartite, 2),
    "skeleton": (skeleton, 2),
    "join_power": (join_power, 2),
    "path": (path_graph, 1),
    "cycle": (cycle_graph, 1),
    "discrete": (discrete, 1),
}


def generate_corpus(name: str, *params: int) -> SimplicialComplex:
    """Build a named complex, e.g. ``generate_corpus("skeleton", 2, 6)``."""
    try:
        builder, arity = CORPUS[name]
    except KeyError:
        raise ValueError(f"unknown complex family {name!r}; known: {sorted(CORPUS)}") from None
    if len(params) != arity:
        raise ValueError(f"{name} takes {arity} integer parameter(s), got {len(params)}")
    return builder(*map(int, params))
