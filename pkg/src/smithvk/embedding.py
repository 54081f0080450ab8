"""Moment-curve maps, exact intersection signs and the embedding cocycle."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, islice
from typing import Any, Sequence

from .chains import Chain, Cochain
from .deleted import DeletedProduct, build_deleted_product
from .linalg import determinant
from .simplicial import Simplex, SimplicialComplex
from .smith import InvariantViolation, class_vanishes, quotient_of, rho_of_degree, smith_classes

SMALL_PRIMES = (2, 3, 5, 7, 11, 13)


class DegeneracyError(ValueError):
    """Two image simplices meet in a non-generic way."""

    def __init__(self, pair, message: str):
        super().__init__(f"{message}: simplices {list(pair[0])} and {list(pair[1])}")
        self.pair = pair


@dataclass(frozen=True)
class EmbeddingMap:
    m: int
    parameters: dict[int, int]
    coords: dict[int, tuple[int, ...]]

    def point(self, v: int) -> tuple[int, ...]:
        return self.coords[v]

    def scaled(self, factor: int) -> "EmbeddingMap":
        return _moment(self.m, {v: factor * t for v, t in self.parameters.items()})


def _moment(m: int, params: dict[int, int]) -> EmbeddingMap:
    coords = {v: tuple(t ** e for e in range(1, m + 1)) for v, t in params.items()}
    return EmbeddingMap(m, dict(params), coords)


def moment_curve_map(K: SimplicialComplex, m: int, parameters: Sequence[int] | None = None,
                     check_samples: int = 200) -> EmbeddingMap:
    """Vertices to ``(t, t^2, ..., t^m)``; default ``t_v = 1 + rank of v``."""
    if m < 1:
        raise ValueError("target dimension must be at least 1")
    verts = K.vertices
    if parameters is None:
        parameters = [1 + r for r in range(len(verts))]
    parameters = [int(t) for t in parameters]
    if len(parameters) != len(verts):
        raise ValueError(f"{len(parameters)} parameters for {len(verts)} vertices")
    if len(set(parameters)) != len(parameters):
        raise ValueError("moment-curve parameters must be distinct")
    f = _moment(m, dict(zip(verts, parameters)))
    k = min(m + 1, len(verts))
    for subset in islice(combinations(verts, k), check_samples):
        if not affinely_independent([f.point(v) for v in subset]):
            raise DegeneracyError((subset, ()), "affinely dependent vertex images")
    return f


def affinely_independent(points: Sequence[Sequence[int]]) -> bool:
    if len(points) <= 1:
        return True
    base = points[0]
    vecs = [[Fraction(a - b) for a, b in zip(p, base)] for p in points[1:]]
    return _rank(vecs) == len(vecs)


def _rank(rows: list[list[Fraction]]) -> int:
    rows = [r[:] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                k = rows[r][c] / rows[rank][c]
                rows[r] = [x - k * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def _solve(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Unique solution of a square system, or None if singular."""
    n = len(A)
    M = [A[i][:] + [b[i]] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        for r in range(n):
            if r != c and M[r][c]:
                k = M[r][c] / M[c][c]
                M[r] = [x - k * y for x, y in zip(M[r], M[c])]
    return [M[i][n] / M[i][i] for i in range(n)]


def simplex_pair_intersection(f: EmbeddingMap, a: Sequence[int], b: Sequence[int]) -> int:
    """Signed intersection number of the images of two disjoint simplices.

    The dimensions must add up to ``f.m``.  The sign is that of the
    determinant of the edge vectors of ``a`` followed by those of ``b``.
    """
    a, b = tuple(a), tuple(b)
    if set(a) & set(b):
        raise ValueError(f"simplices {list(a)} and {list(b)} share a vertex")
    m = f.m
    if len(a) + len(b) - 2 != m:
        raise ValueError(f"dimensions {len(a) - 1} + {len(b) - 1} do not add up to {m}")
    A = [f.point(v) for v in a]
    B = [f.point(v) for v in b]
    # sum lambda_i A_i - sum mu_j B_j = 0, sum lambda = 1, sum mu = 1
    rows = [[Fraction(p[r]) for p in A] + [Fraction(-q[r]) for q in B] for r in range(m)]
    rows.append([Fraction(1)] * len(A) + [Fraction(0)] * len(B))
    rows.append([Fraction(0)] * len(A) + [Fraction(1)] * len(B))
    rhs = [Fraction(0)] * m + [Fraction(1), Fraction(1)]
    sol = _solve(rows, rhs)
    if sol is None:
        # parallel hulls: disjoint unless the system is still consistent
        if _rank(rows) == _rank([r + [x] for r, x in zip(rows, rhs)]):
            raise DegeneracyError((a, b), "affine hulls meet in more than one point")
        return 0
    if any(x == 0 for x in sol):
        raise DegeneracyError((a, b), "images meet on a proper face")
    if any(x < 0 for x in sol):
        return 0
    edges = [[p - q for p, q in zip(P, A[0])] for P in A[1:]] + [[p - q for p, q in zip(P, B[0])] for P in B[1:]]
    det = determinant([list(col) for col in zip(*edges)])
    if det == 0:
        raise DegeneracyError((a, b), "images are not transverse")
    return 1 if det > 0 else -1


def embedding_cocycle(K: SimplicialComplex, m: int, f: EmbeddingMap | None = None,
                      D: DeletedProduct | None = None, retry: bool = True) -> Cochain:
    """``theta(a x b) = (-1)^dim(a) * inter(f(a), f(b))`` on the m-cells of the deleted product."""
    D = D or build_deleted_product(K)
    f = f or moment_curve_map(K, m)
    attempts = [1, *SMALL_PRIMES] if retry else [1]
    last = None
    for factor in attempts:
        g = f if factor == 1 else f.scaled(factor)
        try:
            theta = _cocycle_values(D, g)
            break
        except DegeneracyError as exc:
            last = exc
    else:
        raise last
    if D.involution_cochain(theta) != theta * (-1) ** m:
        raise InvariantViolation("embedding cochain is not equivariant with sign (-1)^m")
    if not D.is_cocycle(theta):
        raise InvariantViolation("embedding cochain is not a cocycle")
    return theta


def _cocycle_values(D: DeletedProduct, f: EmbeddingMap) -> Cochain:
    acc = {}
    for a, b in D.cells(f.m):
        v = simplex_pair_intersection(f, a, b)
        if v:
            acc[(a, b)] = (-1) ** (len(a) - 1) * v
    return D.cochain(f.m, acc)


def crossing_parity(K: SimplicialComplex, f: EmbeddingMap | None = None) -> int:
    """Number of crossing pairs of disjoint edges over the fundamental domain."""
    f = f or moment_curve_map(K, 2)
    D = build_deleted_product(K)
    return sum(abs(simplex_pair_intersection(f, a, b))
               for a, b in D.domain(2) if len(a) == 2 and len(b) == 2)


def reduced_embedding_cochain(D: DeletedProduct, theta: Cochain) -> Cochain:
    """Quotient cochain: domain values of ``theta``, reduced mod 2 for odd degree."""
    Q = quotient_of(D)
    ring = "Z" if theta.dim % 2 == 0 else "Z2"
    return Q.cochain(theta.dim, ((c, v) for c, v in theta.terms.items() if D.in_domain(c)), ring)


@dataclass
class ObstructionReport:
    complex_name: str
    m: int
    rho: str
    vanishes: bool
    reason: str = ""
    representative: Cochain | None = None
    reduced: Cochain | None = None
    reduced_vanishes: bool | None = None
    mod2_vanishes: bool | None = None
    smith_vanishes: bool | None = None
    mod2_witness: Chain | None = None
    torsion_certificate: Any = None
    parameters: list[int] = field(default_factory=list)

    @property
    def agrees_with_smith(self) -> bool | None:
        if self.smith_vanishes is None:
            return None
        return self.smith_vanishes == self.vanishes

    def summary(self) -> dict[str, Any]:
        from .deleted import cells_to_json
        out: dict[str, Any] = {
            "complex": self.complex_name, "m": self.m, "rho": self.rho,
            "nonzero": not self.vanishes, "parameters": self.parameters,
        }
        if self.reason:
            out["reason"] = self.reason
        if self.representative is not None:
            out["support"] = len(self.representative)
            out["reduced_nonzero"] = not self.reduced_vanishes
            out["mod2_nonzero"] = not self.mod2_vanishes
            out["smith_nonzero"] = None if self.smith_vanishes is None else not self.smith_vanishes
            out["agrees_with_smith"] = self.agrees_with_smith
        if self.mod2_witness is not None:
            out["mod2_witness"] = [cells_to_json(c) for c in sorted(self.mod2_witness.cells())]
        if self.torsion_certificate is not None:
            out["torsion_certificate"] = self.torsion_certificate.summary()
        return out


def embedding_class_report(K: SimplicialComplex, m: int, parameters: Sequence[int] | None = None,
                           cross_check: bool = True, certify: bool = True) -> ObstructionReport:
    from .certificates import ext_certificate_search, mod2_cycle_certificate

    rho = rho_of_degree(m)
    if m > 2 * K.dim:
        return ObstructionReport(K.name, m, rho, True, reason="general position")
    D = build_deleted_product(K)
    f = moment_curve_map(K, m, parameters)
    theta = embedding_cocycle(K, m, f, D)
    Q = quotient_of(D)
    nu = reduced_embedding_cochain(D, theta)
    report = ObstructionReport(
        K.name, m, rho, class_vanishes(D, theta, rho),
        representative=theta, reduced=nu, reduced_vanishes=Q.is_coboundary(nu),
        mod2_vanishes=class_vanishes(D, theta.mod2(), rho, "Z2"),
        parameters=[f.parameters[v] for v in K.vertices])
    if cross_check:
        report.smith_vanishes = smith_classes(D, m)[m].vanishes
    if certify and not report.mod2_vanishes:
        report.mod2_witness = mod2_cycle_certificate(Q, nu.mod2())
    if certify and not report.vanishes and m % 2 == 0:
        report.torsion_certificate = ext_certificate_search(Q, nu, m)
    return report

