"""Sparse chains, cochains and a minimal cellular chain-complex base class."""
from __future__ import annotations

from typing import Any, Hashable, Iterable, Iterator, Mapping

from .linalg import SparseIntMatrix, image_membership, mod2_kernel_basis, integer_kernel_basis

Cell = Hashable
RINGS = ("Z", "Z2")


def _check_ring(ring: str) -> str:
    if ring not in RINGS:
        raise ValueError(f"ring must be one of {RINGS}, got {ring!r}")
    return ring


class _SparseVector:
    """Cell -> coefficient mapping with no stored zeros and a dimension tag."""

    __slots__ = ("dim", "ring", "terms", "complex_id")

    def __init__(self, dim: int, terms: Mapping[Cell, int] | Iterable[tuple[Cell, int]] = (),
                 ring: str = "Z", complex_id: str = ""):
        self.dim = dim
        self.ring = _check_ring(ring)
        self.complex_id = complex_id
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Cell, int] = {}
        for cell, c in items:
            acc[cell] = acc.get(cell, 0) + int(c)
        if ring == "Z2":
            self.terms = {k: 1 for k, v in acc.items() if v % 2}
        else:
            self.terms = {k: v for k, v in acc.items() if v}

    def _like(self, terms, ring=None):
        return type(self)(self.dim, terms, ring or self.ring, self.complex_id)

    def _check(self, other: "_SparseVector") -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if other.ring != self.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
        if self.complex_id and other.complex_id and self.complex_id != other.complex_id:
            raise ValueError(f"complex mismatch: {self.complex_id} vs {other.complex_id}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return self._like(out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) - v
        return self._like(out)

    def __neg__(self):
        return self._like({k: -v for k, v in self.terms.items()})

    def __mul__(self, k: int):
        return self._like({c: k * v for c, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, _SparseVector) or type(other) is not type(self):
            return NotImplemented
        return self.dim == other.dim and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, self.dim, self.ring, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Cell, int]]:
        return iter(self.terms.items())

    def __getitem__(self, cell: Cell) -> int:
        return self.terms.get(cell, 0)

    def __contains__(self, cell: Cell) -> bool:
        return cell in self.terms

    def __repr__(self) -> str:
        body = " + ".join(f"{v}*{k}" for k, v in sorted(self.terms.items(), key=lambda kv: repr(kv[0])))
        return f"{type(self).__name__}[{self.dim}, {self.ring}]({body or '0'})"

    def cells(self):
        return self.terms.keys()

    def mod2(self):
        return self._like(self.terms, ring="Z2")

    def lift(self):
        """Reinterpret mod-2 coefficients as integers 0/1."""
        return self._like(self.terms, ring="Z")

    def is_zero(self) -> bool:
        return not self.terms


class Chain(_SparseVector):
    """A cellular chain."""


class Cochain(_SparseVector):
    """A cellular cochain, stored by its values on cells."""

    def evaluate(self, chain: Chain) -> int:
        if chain.dim != self.dim:
            raise ValueError(f"cannot evaluate a {self.dim}-cochain on a {chain.dim}-chain")
        small, big = (chain.terms, self.terms) if len(chain.terms) < len(self.terms) else (self.terms, chain.terms)
        total = sum(v * big.get(k, 0) for k, v in small.items())
        if self.ring == "Z2" or chain.ring == "Z2":
            return total % 2
        return total

    __call__ = evaluate


class CellComplex:
    """A finite cellular chain complex with named cells.

    Subclasses fill ``_cells`` (a list of cell lists by dimension) and
    implement :meth:`boundary_of`.  Orientation of each cell is whatever the
    subclass uses for its boundary formula.
    """

    name: str = ""
    _cells: list[list[Cell]]

    def __init__(self) -> None:
        self._index: dict[int, dict[Cell, int]] = {}
        self._bmat: dict[int, SparseIntMatrix] = {}

    # subclass hooks ------------------------------------------------------
    def boundary_of(self, cell: Cell) -> dict[Cell, int]:
        raise NotImplementedError

    def cell_dim(self, cell: Cell) -> int:
        raise NotImplementedError

    # cells ---------------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self._cells) - 1

    def cells(self, i: int) -> list[Cell]:
        if 0 <= i < len(self._cells):
            return self._cells[i]
        return []

    def n_cells(self, i: int) -> int:
        return len(self.cells(i))

    def cell_counts(self) -> list[int]:
        return [len(c) for c in self._cells]

    def all_cells(self) -> Iterator[Cell]:
        for cs in self._cells:
            yield from cs

    def index(self, i: int) -> dict[Cell, int]:
        if i not in self._index:
            self._index[i] = {c: k for k, c in enumerate(self.cells(i))}
        return self._index[i]

    def has_cell(self, cell: Cell) -> bool:
        try:
            return cell in self.index(self.cell_dim(cell))
        except (TypeError, ValueError):
            return False

    # chains ----------------------------------------------------------------
    def chain(self, dim: int, terms=(), ring: str = "Z") -> Chain:
        return Chain(dim, terms, ring, self.name)

    def cochain(self, dim: int, terms=(), ring: str = "Z") -> Cochain:
        return Cochain(dim, terms, ring, self.name)

    def boundary_matrix(self, i: int) -> SparseIntMatrix:
        """Matrix of d_i: C_i -> C_{i-1}, columns indexed by i-cells."""
        if i not in self._bmat:
            rows = self.index(i - 1)
            cols = self.cells(i)
            m = SparseIntMatrix(len(self.cells(i - 1)), len(cols))
            for c, cell in enumerate(cols):
                for face, coeff in self.boundary_of(cell).items():
                    m.rows[rows[face]][c] = coeff
            self._bmat[i] = m
        return self._bmat[i]

    def coboundary_matrix(self, i: int) -> SparseIntMatrix:
        """Matrix of delta: C^i -> C^{i+1}."""
        return self.boundary_matrix(i + 1).transpose()

    def boundary(self, chain: Chain) -> Chain:
        acc: dict[Cell, int] = {}
        for cell, c in chain.terms.items():
            for face, v in self.boundary_of(cell).items():
                acc[face] = acc.get(face, 0) + c * v
        return Chain(chain.dim - 1, acc, chain.ring, chain.complex_id)

    def coboundary(self, cochain: Cochain) -> Cochain:
        i = cochain.dim
        vals = self.to_vector(cochain)
        out = self.boundary_matrix(i + 1).transpose().matvec(vals) if self.cells(i + 1) else []
        return self.from_vector(i + 1, out, cochain.ring, cls=Cochain)

    def to_vector(self, v: _SparseVector) -> list[int]:
        idx = self.index(v.dim)
        out = [0] * len(self.cells(v.dim))
        for cell, c in v.terms.items():
            try:
                out[idx[cell]] = c
            except KeyError:
                raise KeyError(f"cell {cell!r} is not a {v.dim}-cell of {self.name or 'the complex'}") from None
        return out

    def from_vector(self, dim: int, vec, ring: str = "Z", cls=Chain):
        cells = self.cells(dim)
        if isinstance(vec, dict):
            items = ((cells[k], c) for k, c in vec.items())
        else:
            items = ((cells[k], c) for k, c in enumerate(vec) if c)
        return cls(dim, items, ring, self.name)

    def cycle_basis(self, i: int, ring: str = "Z") -> list[Chain]:
        """Basis of the i-cycles (integer kernel, or kernel over the field Z2)."""
        n = self.n_cells(i)
        if n == 0:
            return []
        d = self.boundary_matrix(i) if i > 0 else SparseIntMatrix(0, n)
        if ring == "Z2":
            return [self.from_vector(i, v, "Z2") for v in mod2_kernel_basis(d)]
        return [self.from_vector(i, v) for v in integer_kernel_basis(d)]

    def is_coboundary(self, cochain: Cochain) -> bool:
        """Whether ``cochain`` is delta of an (i-1)-cochain, over its ring."""
        i = cochain.dim
        b = self.to_vector(cochain)
        if not any(x % 2 if cochain.ring == "Z2" else x for x in b):
            return True
        if i == 0 or not self.cells(i - 1):
            return False
        return image_membership(self.coboundary_matrix(i - 1), b, cochain.ring)

    def is_cocycle(self, cochain: Cochain) -> bool:
        return self.coboundary(cochain).is_zero()

    def is_cycle(self, chain: Chain) -> bool:
        return chain.dim == 0 or self.boundary(chain).is_zero()

    def describe(self) -> dict[str, Any]:
        return {"name": self.name, "dim": self.dim, "cell_counts": self.cell_counts()}
