"""Special (co)chain subcomplexes, Smith special homomorphisms and classes.

Conventions: ``eps(rho)`` is ``+1`` for delta and ``-1`` for s.  A rho-cochain
lies in the image of ``1 + eps tau^#``, which equals the kernel of
``1 - eps tau^#``.  The class ``A^k`` starts from the constant delta-cocycle
``1``; each Smith step flips rho, so ``A^k`` is a delta-class for even ``k``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any

from .chains import Chain, Cochain
from .deleted import (QuotientComplex, Z2CellComplex, _eps, build_quotient, opposite, pullback_cochain,
                      transfer_cochain)
from .linalg import (SparseIntMatrix, image_membership, integer_kernel_basis, mod2_solve, smith_normal_form,
                     solve_integer)


class InvariantViolation(RuntimeError):
    """An identity that the theory guarantees failed to hold."""


class NotACocycleError(ValueError):
    pass


def quotient_of(X: Z2CellComplex) -> QuotientComplex:
    cache = X.__dict__
    if "_quotient" not in cache:
        cache["_quotient"] = build_quotient(X)
    return cache["_quotient"]


def rho_of_degree(k: int) -> str:
    """Special type carrying ``A^k``."""
    return "delta" if k % 2 == 0 else "s"


# special subcomplexes --------------------------------------------------------

@dataclass
class SpecialSubcomplexBasis:
    rho: str
    dim: int
    kind: str                       # "chain" or "cochain"
    generators: list                # one per orbit, keyed by domain cell order

    @property
    def rank(self) -> int:
        return len(self.generators)


def special_subcomplex_basis(X: Z2CellComplex, i: int, rho: str, kind: str = "chain") -> SpecialSubcomplexBasis:
    """Generators ``r + eps tau#(r)`` (or the cochain analogue) for each domain cell ``r``."""
    eps = _eps(rho)
    gens = []
    for r in X.domain(i):
        other, sign = X.partner(r)
        if kind == "chain":
            gens.append(X.chain(i, {r: 1, other: eps * sign}))
        elif kind == "cochain":
            gens.append(X.special_cochain(i, {r: 1}, rho))
        else:
            raise ValueError(f"kind must be 'chain' or 'cochain', got {kind!r}")
    return SpecialSubcomplexBasis(rho, i, kind, gens)


def involution_matrix(X: Z2CellComplex, i: int, kind: str = "chain") -> SparseIntMatrix:
    """Matrix of ``tau#`` on C_i (columns are cells); its transpose is ``tau^#``."""
    idx = X.index(i)
    n = len(idx)
    trip = []
    for c, cell in enumerate(X.cells(i)):
        other, sign = X.partner(cell)
        trip.append((idx[other], c, sign))
    T = SparseIntMatrix.from_triplets(n, n, trip)
    return T if kind == "chain" else T.transpose()


def one_plus(X: Z2CellComplex, i: int, eps: int, kind: str = "chain") -> SparseIntMatrix:
    """Matrix of ``1 + eps tau`` on chains or cochains of dimension ``i``."""
    T = involution_matrix(X, i, kind)
    rows = [dict(r) for r in T.rows]
    for r, row in enumerate(rows):
        for c in list(row):
            row[c] *= eps
        row[r] = row.get(r, 0) + 1
        if not row[r]:
            del row[r]
    return SparseIntMatrix(T.nrows, T.ncols, rows)


@dataclass
class ExactnessCheck:
    dim: int
    rho: str
    kind: str
    image_rank: int
    kernel_rank: int
    image_in_kernel: bool
    kernel_in_image: bool

    @property
    def exact(self) -> bool:
        return self.image_in_kernel and self.kernel_in_image and self.image_rank == self.kernel_rank


def check_exactness(X: Z2CellComplex, i: int, rho: str, kind: str = "chain") -> ExactnessCheck:
    """Test ``im(1 + eps tau) = ker(1 - eps tau)`` over the integers."""
    eps = _eps(rho)
    P = one_plus(X, i, eps, kind)
    Mn = one_plus(X, i, -eps, kind)
    ker = integer_kernel_basis(Mn)
    snf = smith_normal_form(P)
    inside = (Mn @ P).is_zero()
    n = P.nrows
    covered = all(solve_integer(P, _dense(v, n), snf) is not None for v in ker)
    return ExactnessCheck(i, rho, kind, snf.rank, len(ker), inside, covered)


def _dense(vec: dict[int, int], n: int) -> list[int]:
    out = [0] * n
    for k, v in vec.items():
        out[k] = v
    return out


# the Smith step ------------------------------------------------------------

STRATEGIES = ("explicit", "mirror", "random", "solve")


def solve_special(X: Z2CellComplex, phi: Cochain, eps: int, strategy: str = "explicit",
                  rng: random.Random | None = None) -> Cochain:
    """Some ``psi`` with ``(1 + eps tau^#) psi = phi``; ``phi`` must admit one."""
    i = phi.dim
    ring = phi.ring
    if strategy == "explicit":
        psi = Cochain(i, ((c, v) for c, v in phi.terms.items() if X.in_domain(c)), ring, X.name)
    elif strategy == "mirror":
        acc = {}
        for c, v in phi.terms.items():
            if X.in_domain(c):
                other, sign = X.partner(c)
                acc[other] = eps * sign * v
        psi = Cochain(i, acc, ring, X.name)
    elif strategy == "random":
        rng = rng or random.Random(0)
        base = solve_special(X, phi, eps, "explicit")
        noise = {c: rng.randint(-3, 3) for c in X.domain(i)}
        psi = base + X.special_cochain(i, noise, "s" if eps == 1 else "delta", ring)
    elif strategy == "solve":
        rng = rng or random.Random(0)
        n = X.n_cells(i)
        M = one_plus(X, i, eps, "cochain")
        perm = list(range(n))
        rng.shuffle(perm)
        cols = M.columns()
        Mp = SparseIntMatrix.from_columns(n, [cols[p] for p in perm])
        b = X.to_vector(phi)
        y = solve_integer(Mp, b) if ring == "Z" else _mod2(Mp, b)
        if y is None:
            raise InvariantViolation(f"(1{'+' if eps == 1 else '-'}tau^#) psi = phi has no solution in degree {i}")
        x = [0] * n
        for k, p in enumerate(perm):
            x[p] = y[k]
        psi = X.from_vector(i, x, ring, cls=Cochain)
    else:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    check = psi + X.involution_cochain(psi) * eps
    if check != phi:
        raise InvariantViolation(f"special solve failed in degree {i} ({strategy})")
    return psi


def _mod2(M: SparseIntMatrix, b):
    return mod2_solve(M, [x % 2 for x in b])


def mu_step(X: Z2CellComplex, phi: Cochain, rho: str, strategy: str = "explicit",
            rng: random.Random | None = None, check: bool = True) -> Cochain:
    """Smith special homomorphism on a representative: ``phi -> delta psi``.

    ``phi`` is a rho-cocycle; ``psi`` solves ``(1 + eps tau^#) psi = phi`` and
    the result is a cocycle of the opposite type.
    """
    if check:
        if not X.is_special(phi, rho):
            raise NotACocycleError(f"input {phi.dim}-cochain is not a {rho}-cochain")
        if not X.is_cocycle(phi):
            raise NotACocycleError(f"input {phi.dim}-cochain is not a cocycle")
    psi = solve_special(X, phi, _eps(rho), strategy, rng)
    out = X.coboundary(psi)
    if check and not X.is_special(out, opposite(rho)):
        raise InvariantViolation("Smith step left the opposite special subgroup")
    return out


def class_vanishes(X: Z2CellComplex, phi: Cochain, rho: str, ring: str | None = None) -> bool:
    """Whether the rho-cocycle ``phi`` is the coboundary of a rho-cochain."""
    ring = ring or phi.ring
    if ring == "Z2":
        phi = phi.mod2()
    if not X.is_special(phi, rho):
        raise NotACocycleError(f"{phi.dim}-cochain is not a {rho}-cochain")
    if not X.is_cocycle(phi):
        raise NotACocycleError(f"{phi.dim}-cochain is not a cocycle")
    i = phi.dim
    b = X.domain_values(phi)
    if not any(x % 2 if ring == "Z2" else x for x in b):
        return True
    if i == 0 or not X.domain(i - 1):
        return False
    return image_membership(X.special_boundary_matrix(i, rho).transpose(), b, ring)


def special_coboundary(X: Z2CellComplex, dim: int, values, rho: str, ring: str = "Z") -> Cochain:
    """``delta`` of the rho-cochain with the given domain values in degree ``dim``."""
    return X.coboundary(X.special_cochain(dim, values, rho, ring))


def constant_one(X: Z2CellComplex, ring: str = "Z") -> Cochain:
    return X.cochain(0, {v: 1 for v in X.cells(0)}, ring)


# resolutions -------------------------------------------------------------------

@dataclass
class ResolutionSequence:
    complex_name: str
    cochains: list[Cochain]
    strategy: str = "explicit"
    seed: int = 0

    def __len__(self) -> int:
        return len(self.cochains)

    def __getitem__(self, i: int) -> Cochain:
        return self.cochains[i]

    def to_json(self) -> dict:
        from .deleted import cells_to_json
        return {
            "complex": self.complex_name, "strategy": self.strategy, "seed": self.seed,
            "cochains": [{"dimension": c.dim, "ring": c.ring,
                          "terms": [{"cell": cells_to_json(k), "coeff": v} for k, v in sorted(c.terms.items())]}
                         for c in self.cochains],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ResolutionSequence":
        from .deleted import cell_from_json
        cochains = [Cochain(c["dimension"], ((cell_from_json(t["cell"]), t["coeff"]) for t in c["terms"]),
                            c.get("ring", "Z"), data.get("complex", "")) for c in data["cochains"]]
        return cls(data.get("complex", ""), cochains, data.get("strategy", "explicit"), data.get("seed", 0))


def resolution_of_one(X: Z2CellComplex, N: int | None = None, strategy: str = "explicit",
                      seed: int = 0, ring: str = "Z") -> ResolutionSequence:
    """``phi_0`` = indicator of the domain vertices, then ``(1 + (-1)^i tau^#) phi_i = delta phi_{i-1}``."""
    if N is None:
        N = X.dim
    if N > X.dim:
        raise ValueError(f"resolution length {N} exceeds the dimension {X.dim}")
    rng = random.Random(seed)
    phis = [X.cochain(0, {v: 1 for v in X.domain(0)}, ring)]
    for i in range(1, N + 1):
        target = X.coboundary(phis[-1])
        phis.append(solve_special(X, target, (-1) ** i, strategy, rng))
    res = ResolutionSequence(X.name, phis, strategy, seed)
    problems = verify_resolution(X, res)
    if problems:
        raise InvariantViolation("; ".join(problems))
    return res


def verify_resolution(X: Z2CellComplex, res: ResolutionSequence) -> list[str]:
    """Empty list when both defining relations hold exactly."""
    problems = []
    Q = quotient_of(X)
    if not res.cochains:
        return ["empty resolution"]
    phi0 = res[0]
    ring = phi0.ring
    if transfer_cochain(Q, phi0) != Q.cochain(0, {v: 1 for v in Q.cells(0)}, ring):
        problems.append("pibar^# phi_0 is not the unit cocycle")
    for i in range(1, len(res)):
        phi = res[i]
        if phi.dim != i:
            problems.append(f"phi_{i} has dimension {phi.dim}")
            continue
        lhs = phi + X.involution_cochain(phi) * (-1) ** i
        rhs = X.coboundary(res[i - 1])
        if lhs != rhs:
            problems.append(f"relation fails at index {i}")
    return problems


def restrict_resolution(res: ResolutionSequence, big, sub) -> ResolutionSequence:
    """Restriction along ``sub`` inside ``big`` (both deleted products)."""
    N = min(len(res) - 1, sub.dim)
    return ResolutionSequence(sub.name, [big.restrict(res[i], sub) for i in range(N + 1)], res.strategy, res.seed)


# reports -------------------------------------------------------------------

@dataclass
class SmithClass:
    degree: int
    rho: str
    representative: Cochain
    vanishes: bool


@dataclass
class ReducedClass:
    degree: int
    ring: str
    representative: Cochain      # on the quotient complex
    vanishes: bool


@dataclass
class SmithReport:
    complex_name: str
    max_k: int
    classes: list[SmithClass]
    reduced: list[ReducedClass] = field(default_factory=list)
    mod2: list[bool] = field(default_factory=list)   # True where A^k_2 vanishes

    @property
    def index(self) -> int | None:
        """First ``k`` with ``A^k = 0``, or ``None`` if none up to ``max_k``."""
        return next((c.degree for c in self.classes if c.vanishes), None)

    @property
    def reduced_index(self) -> int | None:
        return next((c.degree for c in self.reduced if c.vanishes), None)

    @property
    def mod2_index(self) -> int | None:
        return next((k for k, z in enumerate(self.mod2) if z), None)

    def nonzero(self, k: int) -> bool:
        return not self.classes[k].vanishes

    def obstruction(self, n: int) -> bool:
        """For a deleted product: whether the class in degree ``n`` is nonzero."""
        return self.nonzero(n)

    def summary(self) -> dict[str, Any]:
        out = {
            "complex": self.complex_name,
            "max_k": self.max_k,
            "index": self.index,
            "index_exceeds_max_k": self.index is None,
            "classes": [{"k": c.degree, "rho": c.rho, "nonzero": not c.vanishes,
                         "support": len(c.representative)} for c in self.classes],
        }
        if self.reduced:
            out["reduced"] = [{"k": c.degree, "ring": c.ring, "nonzero": not c.vanishes} for c in self.reduced]
            out["reduced_index"] = self.reduced_index
        if self.mod2:
            out["mod2"] = [{"k": k, "nonzero": not z} for k, z in enumerate(self.mod2)]
            out["mod2_index"] = self.mod2_index
        return out


def smith_classes(X: Z2CellComplex, max_k: int | None = None, ring: str = "Z",
                  strategy: str = "explicit", seed: int = 0) -> list[SmithClass]:
    if max_k is None:
        max_k = X.dim + 2
    rng = random.Random(seed)
    rep = constant_one(X, ring)
    out = []
    for k in range(max_k + 1):
        rho = rho_of_degree(k)
        if k > 0:
            rep = mu_step(X, rep, rho_of_degree(k - 1), strategy, rng)
        if ring == "Z2":
            rep = rep.mod2()
        out.append(SmithClass(k, rho, rep, class_vanishes(X, rep, rho, ring)))
    for a, b in zip(out, out[1:]):
        if a.vanishes and not b.vanishes:
            raise InvariantViolation(f"A^{b.degree} nonzero after A^{a.degree} vanished")
    return out


def reduced_classes(X: Z2CellComplex, res: ResolutionSequence) -> list[ReducedClass]:
    """``[pibar^# phi_k]`` over Z for even ``k`` and its mod-2 reduction for odd ``k``."""
    Q = quotient_of(X)
    out = []
    for k, phi in enumerate(res.cochains):
        rep = transfer_cochain(Q, phi)
        ring = "Z" if k % 2 == 0 else "Z2"
        if ring == "Z2":
            rep = rep.mod2()
        if not Q.is_cocycle(rep):
            raise InvariantViolation(f"reduced representative in degree {k} is not a cocycle")
        out.append(ReducedClass(k, ring, rep, Q.is_coboundary(rep)))
    return out


def mod2_classes(X: Z2CellComplex, max_k: int | None = None) -> list[bool]:
    """Vanishing flags of the mod-2 special classes."""
    return [c.vanishes for c in smith_classes(X, max_k, ring="Z2")]


def smith_classes_and_index(X: Z2CellComplex, max_k: int | None = None, mod2: bool = True,
                            reduced: bool = True, strategy: str = "explicit", seed: int = 0) -> SmithReport:
    if max_k is None:
        max_k = X.dim + 2
    report = SmithReport(X.name, max_k, smith_classes(X, max_k, "Z", strategy, seed))
    if reduced and X.dim >= 0:
        report.reduced = reduced_classes(X, resolution_of_one(X, X.dim, strategy, seed))
    if mod2:
        report.mod2 = mod2_classes(X, max_k)
    return report


def reduced_matches_special(X: Z2CellComplex, res: ResolutionSequence, k: int) -> bool:
    """Even ``k``: ``pi^#`` of the reduced representative is cohomologous to ``delta phi_{k-1}``."""
    if k % 2:
        raise ValueError("comparison is stated for even degrees")
    Q = quotient_of(X)
    lifted = pullback_cochain(Q, transfer_cochain(Q, res[k]))
    special = X.coboundary(res[k - 1]) if k > 0 else constant_one(X)
    diff = X.cochain(k, lifted.terms) - X.cochain(k, special.terms)
    return class_vanishes(X, diff, "delta")

