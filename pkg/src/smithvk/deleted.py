"""Complexes with a free cellular involution: deleted products and the CW sphere.

Every :class:`Z2CellComplex` knows, for each cell ``c``, its partner ``tau c``
and the sign with ``tau#(c) = sign * (tau c)``.  The fundamental domain holds
one cell per orbit.  The quotient complex keys each orbit by its domain
representative and inherits that representative's orientation.
"""
from __future__ import annotations

from typing import Hashable

from .chains import CellComplex, Chain, Cochain
from .linalg import SparseIntMatrix
from .simplicial import Simplex, SimplicialComplex

Cell = Hashable


class NotEquivariantError(ValueError):
    """A cochain that was required to be tau-invariant is not."""


class Z2CellComplex(CellComplex):
    """Cell complex with a free involution and a chosen fundamental domain."""

    def partner(self, cell: Cell) -> tuple[Cell, int]:
        raise NotImplementedError

    def in_domain(self, cell: Cell) -> bool:
        raise NotImplementedError

    def domain(self, i: int) -> list[Cell]:
        """Fundamental-domain cells of dimension ``i``, in cell order."""
        cache = self.__dict__.setdefault("_domain", {})
        if i not in cache:
            cache[i] = [c for c in self.cells(i) if self.in_domain(c)]
        return cache[i]

    def domain_index(self, i: int) -> dict[Cell, int]:
        cache = self.__dict__.setdefault("_domain_index", {})
        if i not in cache:
            cache[i] = {c: k for k, c in enumerate(self.domain(i))}
        return cache[i]

    def representative(self, cell: Cell) -> tuple[Cell, int]:
        """Domain cell ``r`` of the orbit and the coefficient of ``[r]`` in ``pi#(cell)``."""
        if self.in_domain(cell):
            return cell, 1
        other, sign = self.partner(cell)
        return other, sign

    # involution ------------------------------------------------------------
    def involution(self, chain: Chain) -> Chain:
        acc = {}
        for cell, c in chain.terms.items():
            other, sign = self.partner(cell)
            acc[other] = acc.get(other, 0) + sign * c
        return Chain(chain.dim, acc, chain.ring, chain.complex_id)

    def involution_cochain(self, phi: Cochain) -> Cochain:
        """``tau^#``: the cochain ``c -> phi(tau# c)``."""
        acc = {}
        for cell, c in phi.terms.items():
            other, sign = self.partner(cell)
            acc[other] = sign * c
        return Cochain(phi.dim, acc, phi.ring, phi.complex_id)

    def check_free_action(self) -> None:
        for i in range(self.dim + 1):
            F = set(self.domain(i))
            for cell in self.cells(i):
                other, sign = self.partner(cell)
                if other == cell:
                    raise ValueError(f"involution fixes the cell {cell!r}")
                if sign not in (1, -1) or self.partner(other) != (cell, sign):
                    raise ValueError(f"partner data of {cell!r} is not an involution")
                if (cell in F) == (other in F):
                    raise ValueError(f"orbit of {cell!r} does not meet the domain exactly once")

    # F-coordinates of special cochains ---------------------------------------
    def special_boundary_matrix(self, i: int, rho: str) -> SparseIntMatrix:
        """Boundary of the rho-chain complex written in domain coordinates.

        A rho-cochain is determined by its values on the domain, with
        ``phi(tau c) = eps * sign * phi(c)`` (``eps = +1`` for delta, ``-1``
        for s).  Rows are domain (i-1)-cells, columns domain i-cells; the
        transpose is the coboundary on domain coordinates.  For ``rho="delta"``
        this is the quotient boundary.
        """
        eps = _eps(rho)
        cache = self.__dict__.setdefault("_special_bmat", {})
        key = (i, eps)
        if key not in cache:
            rows = self.domain_index(i - 1)
            cols = self.domain(i)
            m = SparseIntMatrix(len(self.domain(i - 1)), len(cols))
            for c, cell in enumerate(cols):
                for face, a in self.boundary_of(cell).items():
                    if face in rows:
                        r, k = rows[face], a
                    else:
                        rep, sign = self.partner(face)
                        r, k = rows[rep], eps * sign * a
                    v = m.rows[r].get(c, 0) + k
                    if v:
                        m.rows[r][c] = v
                    else:
                        m.rows[r].pop(c, None)
            cache[key] = m
        return cache[key]

    def special_cochain(self, dim: int, values, rho: str, ring: str = "Z") -> Cochain:
        """Extend values on the domain (list or dict by domain cell) to a rho-cochain."""
        eps = _eps(rho)
        dom = self.domain(dim)
        items = values.items() if isinstance(values, dict) else zip(dom, values)
        acc = {}
        for cell, v in items:
            if not v:
                continue
            other, sign = self.partner(cell)
            acc[cell] = v
            acc[other] = eps * sign * v
        return Cochain(dim, acc, ring, self.name)

    def domain_values(self, phi: Cochain) -> list[int]:
        return [phi[c] for c in self.domain(phi.dim)]

    def is_special(self, phi: Cochain, rho: str) -> bool:
        """Whether ``tau^# phi = eps * phi`` (over the cochain's ring)."""
        diff = self.involution_cochain(phi) - _eps(rho) * phi
        return diff.is_zero()


def _eps(rho: str) -> int:
    if rho in ("delta", "d", "+"):
        return 1
    if rho in ("s", "-"):
        return -1
    raise ValueError(f"rho must be 'delta' or 's', got {rho!r}")


def opposite(rho: str) -> str:
    return "s" if _eps(rho) == 1 else "delta"


# deleted product -------------------------------------------------------------

ProductCell = tuple[Simplex, Simplex]


def product_cell_boundary(cell: ProductCell) -> dict[ProductCell, int]:
    """``d(a x b) = da x b + (-1)^dim(a) a x db`` with simplicial faces."""
    a, b = cell
    out: dict[ProductCell, int] = {}
    if len(a) > 1:
        for k in range(len(a)):
            out[(a[:k] + a[k + 1:], b)] = (-1) ** k
    if len(b) > 1:
        sa = (-1) ** (len(a) - 1)
        for k in range(len(b)):
            out[(a, b[:k] + b[k + 1:])] = sa * (-1) ** k
    return out


class DeletedProduct(Z2CellComplex):
    """Cells are ordered pairs of vertex-disjoint simplices of ``K``."""

    def __init__(self, K: SimplicialComplex, name: str | None = None):
        super().__init__()
        self.source = K
        self.name = name or f"D({K.name})"
        self.flags: list[str] = []
        if len(K.vertices) < 2:
            self.flags.append("fewer than two vertices: the deleted product is empty")
        simplices = [s for dim in K.simplices for s in dim]
        by_dim: dict[int, list[ProductCell]] = {}
        for a in simplices:
            sa = set(a)
            for b in simplices:
                if sa.isdisjoint(b):
                    by_dim.setdefault(len(a) + len(b) - 2, []).append((a, b))
        top = max(by_dim, default=-1)
        self._cells = [sorted(by_dim.get(i, []), key=_cell_key) for i in range(top + 1)]

    def cell_dim(self, cell: ProductCell) -> int:
        return len(cell[0]) + len(cell[1]) - 2

    def boundary_of(self, cell: ProductCell) -> dict[ProductCell, int]:
        return product_cell_boundary(cell)

    def partner(self, cell: ProductCell) -> tuple[ProductCell, int]:
        a, b = cell
        return (b, a), (-1) ** ((len(a) - 1) * (len(b) - 1))

    def in_domain(self, cell: ProductCell) -> bool:
        return cell[0] < cell[1]

    def restrict(self, phi: Cochain, sub: "DeletedProduct") -> Cochain:
        """Restriction of a cochain along the inclusion of a sub deleted product."""
        return Cochain(phi.dim, ((c, v) for c, v in phi.terms.items() if sub.has_cell(c)), phi.ring, sub.name)

    def include(self, chain: Chain) -> Chain:
        """Push a chain of a sub deleted product into this one."""
        for cell in chain.terms:
            if not self.has_cell(cell):
                raise ValueError(f"{cell!r} is not a cell of {self.name}")
        return Chain(chain.dim, chain.terms, chain.ring, self.name)


def _cell_key(cell: ProductCell):
    return (len(cell[0]), cell[0], cell[1])


def build_deleted_product(K: SimplicialComplex) -> DeletedProduct:
    return DeletedProduct(K)


def involution_on_chains(X: Z2CellComplex, chain: Chain) -> Chain:
    return X.involution(chain)


# CW sphere ---------------------------------------------------------------------

class SphereComplex(Z2CellComplex):
    """Two cells ``("+", i)`` and ``("-", i)`` per dimension, antipodally swapped.

    ``d(+,i) = (+,i-1) + (-1)^i (-,i-1)`` and symmetrically for ``(-,i)``.
    """

    def __init__(self, n: int):
        super().__init__()
        if n < 0:
            raise ValueError("sphere dimension must be non-negative")
        self.n = n
        self.name = f"S{n}"
        self._cells = [[("+", i), ("-", i)] for i in range(n + 1)]

    def cell_dim(self, cell) -> int:
        return cell[1]

    def boundary_of(self, cell) -> dict:
        side, i = cell
        if i == 0:
            return {}
        other = "-" if side == "+" else "+"
        return {(side, i - 1): 1, (other, i - 1): (-1) ** i}

    def partner(self, cell):
        side, i = cell
        return ("-" if side == "+" else "+", i), 1

    def in_domain(self, cell) -> bool:
        return cell[0] == "+"


def sphere_z2_complex(n: int) -> SphereComplex:
    return SphereComplex(n)


# quotient and transfers ------------------------------------------------------

class QuotientComplex(CellComplex):
    """Orbit complex ``X/tau``; the orbit of ``c`` is keyed by its domain cell."""

    def __init__(self, X: Z2CellComplex):
        super().__init__()
        self.source = X
        self.name = f"{X.name}/tau"
        self._cells = [list(X.domain(i)) for i in range(X.dim + 1)]
        # the quotient boundary is the delta-twisted boundary on the domain
        for i in range(1, X.dim + 1):
            self._bmat[i] = X.special_boundary_matrix(i, "delta")

    def cell_dim(self, cell) -> int:
        return self.source.cell_dim(cell)

    def boundary_of(self, cell) -> dict:
        return project_chain(self, Chain(self.cell_dim(cell) - 1, self.source.boundary_of(cell))).terms


def build_quotient(X: Z2CellComplex) -> QuotientComplex:
    return QuotientComplex(X)


def project_chain(Q: QuotientComplex, chain: Chain) -> Chain:
    """``pi#``: domain cell ``r`` goes to ``[r]``, and ``tau r`` to ``sign * [r]``."""
    X = Q.source
    acc = {}
    for cell, c in chain.terms.items():
        rep, sign = X.representative(cell)
        acc[rep] = acc.get(rep, 0) + sign * c
    return Chain(chain.dim, acc, chain.ring, Q.name)


def transfer_chain(Q: QuotientComplex, chain: Chain) -> Chain:
    """``pibar#``: ``[r] -> r + tau# r``."""
    X = Q.source
    acc = {}
    for rep, c in chain.terms.items():
        other, sign = X.partner(rep)
        acc[rep] = acc.get(rep, 0) + c
        acc[other] = acc.get(other, 0) + sign * c
    return Chain(chain.dim, acc, chain.ring, X.name)


def pullback_cochain(Q: QuotientComplex, psi: Cochain) -> Cochain:
    """``pi^#``: ``psi o pi#``, a delta-cochain upstairs."""
    X = Q.source
    acc = {}
    for rep, v in psi.terms.items():
        other, sign = X.partner(rep)
        acc[rep] = v
        acc[other] = sign * v
    return Cochain(psi.dim, acc, psi.ring, X.name)


def pullback_inverse(Q: QuotientComplex, phi: Cochain) -> Cochain:
    """Inverse of ``pi^#`` on delta-cochains; anything else is rejected."""
    X = Q.source
    if not X.is_special(phi, "delta"):
        raise NotEquivariantError(f"{phi.dim}-cochain is not a delta-cochain; pi^# is not invertible on it")
    return Cochain(phi.dim, ((c, v) for c, v in phi.terms.items() if X.in_domain(c)), phi.ring, Q.name)


def transfer_cochain(Q: QuotientComplex, phi: Cochain) -> Cochain:
    """``pibar^#``: ``[r] -> phi(r + tau# r)``."""
    X = Q.source
    acc = {}
    for cell, v in phi.terms.items():
        rep, sign = X.representative(cell)
        acc[rep] = acc.get(rep, 0) + sign * v
    return Cochain(phi.dim, acc, phi.ring, Q.name)


def cells_to_json(cell) -> list:
    """JSON-friendly form of a product or sphere cell."""
    if isinstance(cell[0], str):
        return [cell[0], cell[1]]
    return [list(cell[0]), list(cell[1])]


def cell_from_json(data) -> Cell:
    if isinstance(data[0], str):
        return (data[0], int(data[1]))
    return (tuple(data[0]), tuple(data[1]))


def orbit_count(X: Z2CellComplex) -> list[int]:
    return [len(X.domain(i)) for i in range(X.dim + 1)]

