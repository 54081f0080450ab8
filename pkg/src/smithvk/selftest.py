"""A compact invariant suite runnable from the command line."""
from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

from .certificates import prism_boundary_law, cone_boundary_law, verify_join_theorem
from .chains import Chain
from .deleted import (build_deleted_product, build_quotient, project_chain, pullback_cochain, sphere_z2_complex,
                      transfer_chain, transfer_cochain)
from .embedding import embedding_class_report
from .linalg import SparseIntMatrix, smith_normal_form, determinant, is_diagonal_chain
from .simplicial import complete_bipartite, complete_graph, join_three, skeleton
from .smith import check_exactness, smith_classes_and_index

THREADS_ENV = "SMITHVK_THREADS"


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _corpus():
    return [sphere_z2_complex(3), build_deleted_product(complete_graph(5)),
            build_deleted_product(complete_bipartite(3, 3))]


def check_boundary_squares(seed: int) -> None:
    for X in _corpus() + [skeleton(2, 5)]:
        for i in range(2, X.dim + 1):
            assert (X.boundary_matrix(i - 1) @ X.boundary_matrix(i)).is_zero(), f"dd != 0 on {X.name}"


def check_involution(seed: int) -> None:
    rng = random.Random(seed)
    for X in _corpus():
        for i in range(X.dim + 1):
            cells = X.cells(i)
            x = X.chain(i, {rng.choice(cells): rng.randint(-3, 3) for _ in range(5)})
            assert X.involution(X.involution(x)) == x
            if i:
                assert X.boundary(X.involution(x)) == X.involution(X.boundary(x))


def check_exact_sequences(seed: int) -> None:
    for X in _corpus():
        for i in range(X.dim + 1):
            for rho in ("delta", "s"):
                for kind in ("chain", "cochain"):
                    assert check_exactness(X, i, rho, kind).exact, f"{X.name} {i} {rho} {kind}"


def check_transfers(seed: int) -> None:
    for X in _corpus():
        Q = build_quotient(X)
        for i in range(X.dim + 1):
            for r in X.domain(i):
                q = Q.chain(i, {r: 1})
                assert project_chain(Q, transfer_chain(Q, q)) == q * 2
                x = X.chain(i, {r: 1})
                assert transfer_chain(Q, project_chain(Q, x)) == x + X.involution(x)
                psi = Q.cochain(i, {r: 1})
                assert transfer_cochain(Q, pullback_cochain(Q, psi)) == psi * 2


def check_smith_normal_form(seed: int) -> None:
    rng = random.Random(seed)
    for _ in range(50):
        r, c = rng.randint(1, 8), rng.randint(1, 8)
        M = SparseIntMatrix.from_dense([[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)])
        snf = smith_normal_form(M)
        assert snf.U @ M @ snf.V == snf.D
        assert abs(determinant(snf.U)) == 1 and abs(determinant(snf.V)) == 1
        assert is_diagonal_chain(snf.diagonal)


def check_sphere_index(seed: int) -> None:
    for n in range(1, 5):
        assert smith_classes_and_index(sphere_z2_complex(n)).index == n + 1


def check_graphs(seed: int) -> None:
    for K, nonzero in ((complete_graph(4), False), (complete_graph(5), True), (complete_bipartite(3, 3), True)):
        rep = embedding_class_report(K, 2)
        assert rep.vanishes != nonzero and rep.agrees_with_smith, K.name


def check_cone_laws(seed: int) -> None:
    rng = random.Random(seed)
    D = build_deleted_product(complete_graph(5))
    cells = list(D.all_cells())
    for _ in range(50):
        cell = rng.choice(cells)
        x = Chain(D.cell_dim(cell), {cell: 1})
        lhs, rhs = cone_boundary_law(7, x)
        assert lhs == rhs
        lhs, rhs = prism_boundary_law(7, 8, x)
        assert lhs == rhs


def check_join(seed: int) -> None:
    rep = verify_join_theorem(complete_graph(5), 2)
    assert rep.agree and rep.direct_nonzero
    assert embedding_class_report(join_three(complete_graph(4)), 4).vanishes


SUITES: dict[str, Callable[[int], None]] = {
    "boundary_squares": check_boundary_squares,
    "involution": check_involution,
    "exact_sequences": check_exact_sequences,
    "transfers": check_transfers,
    "smith_normal_form": check_smith_normal_form,
    "sphere_index": check_sphere_index,
    "graphs": check_graphs,
    "cone_laws": check_cone_laws,
    "join": check_join,
}


def run_selftest(seed: int = 0, threads: int | None = None) -> dict[str, str]:
    """Run every suite; values are ``"ok"`` or the failure message."""
    def run(name: str) -> tuple[str, str]:
        try:
            SUITES[name](seed)
            return name, "ok"
        except AssertionError as exc:
            return name, f"failed: {exc}"
    threads = threads or thread_cap()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return dict(pool.map(run, sorted(SUITES)))
