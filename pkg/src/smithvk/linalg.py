"""Sparse exact linear algebra over the integers and over the two-element field.

Everything here works on Python ints, so there is no overflow and no
floating point.  Matrices are stored as a list of row dictionaries.

The central routine is :func:`smith_normal_form`, which also records the
change-of-basis matrices.  Homology decompositions with explicit torsion
lifts are read off those matrices rather than recomputed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence


class DimensionError(ValueError):
    """Raised when matrix shapes do not compose."""


class SparseIntMatrix:
    """An integer matrix with only the nonzero entries stored.

    ``rows[r]`` maps a column index to a nonzero integer.
    """

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: list[dict[int, int]] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            rows = [{} for _ in range(nrows)]
        if len(rows) != nrows:
            raise DimensionError(f"expected {nrows} rows, got {len(rows)}")
        self.rows = rows

    # construction -----------------------------------------------------
    @classmethod
    def from_triplets(cls, nrows: int, ncols: int, triplets: Iterable[tuple[int, int, int]]):
        m = cls(nrows, ncols)
        for r, c, v in triplets:
            if not (0 <= r < nrows and 0 <= c < ncols):
                raise IndexError(f"entry ({r}, {c}) outside {nrows}x{ncols}")
            if v:
                row = m.rows[r]
                nv = row.get(c, 0) + int(v)
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
        return m

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], ncols: int | None = None):
        nrows = len(data)
        if ncols is None:
            ncols = len(data[0]) if nrows else 0
        rows = [{c: int(v) for c, v in enumerate(row) if v} for row in data]
        return cls(nrows, ncols, rows)

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[dict[int, int]]):
        m = cls(nrows, len(columns))
        for c, col in enumerate(columns):
            for r, v in col.items():
                if v:
                    m.rows[r][c] = v
        return m

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, [{i: 1} for i in range(n)])

    # access ------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        return self.rows[r].get(c, 0)

    def entries(self) -> list[tuple[int, int, int]]:
        return [(r, c, v) for r, row in enumerate(self.rows) for c, v in sorted(row.items())]

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for r, row in enumerate(self.rows):
            for c, v in row.items():
                out[r][c] = v
        return out

    def columns(self) -> list[dict[int, int]]:
        cols: list[dict[int, int]] = [{} for _ in range(self.ncols)]
        for r, row in enumerate(self.rows):
            for c, v in row.items():
                cols[c][r] = v
        return cols

    def column(self, c: int) -> dict[int, int]:
        return {r: row[c] for r, row in enumerate(self.rows) if c in row}

    def transpose(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.ncols, self.nrows, self.columns())

    def copy(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.nrows, self.ncols, [dict(r) for r in self.rows])

    def is_zero(self) -> bool:
        return not any(self.rows)

    # arithmetic -------------------------------------------------------
    def matvec(self, x: Sequence[int] | dict[int, int]) -> list[int]:
        if isinstance(x, dict):
            xs = x
            return [sum(v * xs.get(c, 0) for c, v in row.items()) for row in self.rows]
        if len(x) != self.ncols:
            raise DimensionError(f"vector of length {len(x)} for {self.ncols} columns")
        return [sum(v * x[c] for c, v in row.items()) for row in self.rows]

    def __matmul__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for row in self.rows:
            acc: dict[int, int] = {}
            for k, a in row.items():
                for c, b in other.rows[k].items():
                    acc[c] = acc.get(c, 0) + a * b
            out.append({c: v for c, v in acc.items() if v})
        return SparseIntMatrix(self.nrows, other.ncols, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseIntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __repr__(self) -> str:
        return f"SparseIntMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"

    def to_json(self) -> dict:
        """Triplet dump, for debugging."""
        return {"rows": self.nrows, "cols": self.ncols,
                "entries": [[r, c, v] for r, c, v in self.entries()]}

    @classmethod
    def from_json(cls, data: dict) -> "SparseIntMatrix":
        return cls.from_triplets(data["rows"], data["cols"], (tuple(e) for e in data["entries"]))


# ----------------------------------------------------------------------
# Smith normal form
# ----------------------------------------------------------------------

@dataclass
class SmithForm:
    """Result of :func:`smith_normal_form`: ``U @ M @ V == D``.

    ``U_inv`` is the inverse of ``U``; its columns form a basis of the
    target adapted to the image of ``M``.
    """

    U: SparseIntMatrix
    D: SparseIntMatrix
    V: SparseIntMatrix
    U_inv: SparseIntMatrix
    diagonal: list[int] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.diagonal if d > 1]


def _add_to(target: dict[int, int], source: dict[int, int], k: int) -> None:
    for c, v in source.items():
        nv = target.get(c, 0) + k * v
        if nv:
            target[c] = nv
        else:
            del target[c]


class _Reducer:
    """Mutable working state for the Smith elimination."""

    def __init__(self, M: SparseIntMatrix):
        self.A = [dict(r) for r in M.rows]
        self.colidx: list[set[int]] = [set() for _ in range(M.ncols)]
        for r, row in enumerate(self.A):
            for c in row:
                self.colidx[c].add(r)
        # U and its inverse are kept as rows of U and columns of U_inv.
        self.U = [{i: 1} for i in range(M.nrows)]
        self.Uinv_cols = [{i: 1} for i in range(M.nrows)]
        self.V_cols = [{i: 1} for i in range(M.ncols)]

    def add_row(self, dst: int, src: int, k: int) -> None:
        """row[dst] += k * row[src]."""
        if not k:
            return
        A, colidx = self.A, self.colidx
        target = A[dst]
        for c, v in A[src].items():
            nv = target.get(c, 0) + k * v
            if nv:
                if c not in target:
                    colidx[c].add(dst)
                target[c] = nv
            else:
                del target[c]
                colidx[c].discard(dst)
        _add_to(self.U[dst], self.U[src], k)
        _add_to(self.Uinv_cols[src], self.Uinv_cols[dst], -k)

    def add_col(self, dst: int, src: int, k: int) -> None:
        """col[dst] += k * col[src]."""
        if not k:
            return
        A, colidx = self.A, self.colidx
        for r in list(colidx[src]):
            row = A[r]
            nv = row.get(dst, 0) + k * row[src]
            if nv:
                if dst not in row:
                    colidx[dst].add(r)
                row[dst] = nv
            else:
                del row[dst]
                colidx[dst].discard(r)
        _add_to(self.V_cols[dst], self.V_cols[src], k)

    def negate_row(self, r: int) -> None:
        self.A[r] = {c: -v for c, v in self.A[r].items()}
        self.U[r] = {c: -v for c, v in self.U[r].items()}
        self.Uinv_cols[r] = {c: -v for c, v in self.Uinv_cols[r].items()}

    def combine_rows(self, i: int, j: int, s: int, t: int, p: int, q: int) -> None:
        """rows (i, j) <- (s*row_i + t*row_j, p*row_i + q*row_j), det = 1.

        Only U and U_inv are touched; callers update the working matrix.
        """
        Ui, Uj = self.U[i], self.U[j]
        self.U[i] = _lincomb(Ui, s, Uj, t)
        self.U[j] = _lincomb(Ui, p, Uj, q)
        # U_inv <- U_inv @ [[q, -t], [-p, s]] on columns (i, j)
        Ci, Cj = self.Uinv_cols[i], self.Uinv_cols[j]
        self.Uinv_cols[i] = _lincomb(Ci, q, Cj, -p)
        self.Uinv_cols[j] = _lincomb(Ci, -t, Cj, s)

    def combine_cols(self, i: int, j: int, a: int, b: int, c: int, d: int) -> None:
        """V <- V @ [[a, b], [c, d]] on columns (i, j)."""
        Vi, Vj = self.V_cols[i], self.V_cols[j]
        self.V_cols[i] = _lincomb(Vi, a, Vj, c)
        self.V_cols[j] = _lincomb(Vi, b, Vj, d)


def _lincomb(x: dict[int, int], a: int, y: dict[int, int], b: int) -> dict[int, int]:
    out: dict[int, int] = {}
    if a:
        for k, v in x.items():
            out[k] = a * v
    if b:
        for k, v in y.items():
            nv = out.get(k, 0) + b * v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
    return {k: v for k, v in out.items() if v}


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _find_pivot(A: list[dict[int, int]], live_rows: list[int]) -> tuple[int, int] | None:
    # minimal |entry|, ties broken by lowest row then lowest column
    best = None
    best_key = None
    for r in live_rows:
        row = A[r]
        if not row:
            continue
        c, v = min(row.items(), key=lambda cv: (abs(cv[1]), cv[0]))
        key = (abs(v), r, c)
        if best_key is None or key < best_key:
            best_key, best = key, (r, c)
            if key[0] == 1:
                break
    return best


def smith_normal_form(M: SparseIntMatrix) -> SmithForm:
    """Smith normal form with unimodular transforms: ``U @ M @ V == D``.

    Pivots are chosen by minimal absolute value (ties: lowest row, then
    column).  When a division leaves a remainder, the smallest remainder in
    the current pivot row or column becomes the new pivot.  The diagonal is
    positive and satisfies ``d[0] | d[1] | ...``.
    """
    red = _Reducer(M)
    A, colidx = red.A, red.colidx
    live = list(range(M.nrows))
    pivots: list[tuple[int, int, int]] = []

    while True:
        live = [r for r in live if A[r]]
        pv = _find_pivot(A, live)
        if pv is None:
            break
        r, c = pv
        while True:
            p = A[r][c]
            leftover = False
            for r2 in sorted(colidx[c]):
                if r2 == r:
                    continue
                red.add_row(r2, r, -(A[r2][c] // p))
                if c in A[r2]:
                    leftover = True
            if leftover:
                r = min(colidx[c], key=lambda x: (abs(A[x][c]), x))
                continue
            for c2 in sorted(A[r]):
                if c2 == c:
                    continue
                red.add_col(c2, c, -(A[r][c2] // p))
                if c2 in A[r]:
                    leftover = True
            if leftover:
                c = min(A[r], key=lambda x: (abs(A[r][x]), x))
                continue
            break
        # row r and column c now hold only the pivot; park it
        pivots.append((r, c, p))
        live.remove(r)
        A[r] = {}
        colidx[c].discard(r)

    diag_entries = [list(t) for t in pivots]  # [r, c, value]
    for e in diag_entries:
        if e[2] < 0:
            red.negate_row(e[0])
            e[2] = -e[2]
    units = [e for e in diag_entries if e[2] == 1]
    rest = sorted((e for e in diag_entries if e[2] != 1), key=lambda e: (e[2], e[0], e[1]))
    for i in range(len(rest)):
        for j in range(i + 1, len(rest)):
            a, b = rest[i][2], rest[j][2]
            if b % a == 0:
                continue
            g, s, t = _xgcd(a, b)
            # [[s, t], [-b/g, a/g]] diag(a, b) [[1, -t b/g], [1, s a/g]] = diag(g, ab/g)
            red.combine_rows(rest[i][0], rest[j][0], s, t, -(b // g), a // g)
            red.combine_cols(rest[i][1], rest[j][1], 1, -(t * b // g), 1, s * a // g)
            rest[i][2], rest[j][2] = g, a * b // g
    ordered = units + rest

    row_perm = [e[0] for e in ordered]
    used_rows = set(row_perm)
    row_perm += [r for r in range(M.nrows) if r not in used_rows]
    col_perm = [e[1] for e in ordered]
    used_cols = set(col_perm)
    col_perm += [c for c in range(M.ncols) if c not in used_cols]

    U = SparseIntMatrix(M.nrows, M.nrows, [red.U[r] for r in row_perm])
    U_inv = SparseIntMatrix.from_columns(M.nrows, [red.Uinv_cols[r] for r in row_perm])
    V = SparseIntMatrix.from_columns(M.ncols, [red.V_cols[c] for c in col_perm])
    diagonal = [e[2] for e in ordered]
    D = SparseIntMatrix.from_triplets(M.nrows, M.ncols, ((k, k, d) for k, d in enumerate(diagonal)))
    return SmithForm(U=U, D=D, V=V, U_inv=U_inv, diagonal=diagonal)


def solve_integer(M: SparseIntMatrix, b: Sequence[int], snf: SmithForm | None = None) -> list[int] | None:
    """Return an integer ``x`` with ``M x = b``, or ``None`` if there is none."""
    if len(b) != M.nrows:
        raise DimensionError(f"right-hand side of length {len(b)} for {M.nrows} rows")
    if snf is None:
        snf = smith_normal_form(M)
    ub = snf.U.matvec(list(b))
    y = [0] * M.ncols
    for k, d in enumerate(snf.diagonal):
        q, rem = divmod(ub[k], d)
        if rem:
            return None
        y[k] = q
    if any(ub[k] for k in range(snf.rank, M.nrows)):
        return None
    return snf.V.matvec(y)


def image_membership(M: SparseIntMatrix, b: Sequence[int], ring: str = "Z") -> bool:
    """True iff ``b`` lies in the column span of ``M`` over ``ring`` ("Z" or "Z2")."""
    if ring == "Z2":
        return mod2_solve(M, b) is not None
    if ring != "Z":
        raise ValueError(f"unknown ring {ring!r}")
    if not any(b):
        return True
    return solve_integer(M, b) is not None


def integer_kernel_basis(M: SparseIntMatrix, snf: SmithForm | None = None) -> list[dict[int, int]]:
    """A basis of the integer kernel of ``M`` (columns of V past the rank)."""
    if snf is None:
        snf = smith_normal_form(M)
    cols = snf.V.columns()
    return cols[snf.rank:]


# ----------------------------------------------------------------------
# Homology with torsion lifts
# ----------------------------------------------------------------------

@dataclass
class TorsionLift:
    order: int
    cycle: dict[int, int]   # z_j on C_i, by cell index
    lift: dict[int, int]    # c_j on C_{i+1}, with boundary order * z_j


@dataclass
class HomologyDecomposition:
    """Homology in one degree: free rank plus explicit torsion data."""

    degree: int
    betti: int
    torsion: list[TorsionLift]
    free_cycles: list[dict[int, int]]

    @property
    def torsion_orders(self) -> list[int]:
        return [t.order for t in self.torsion]


def homology_with_torsion_lifts(d_i: SparseIntMatrix | None, d_next: SparseIntMatrix | None,
                                n_cells: int | None = None, degree: int = 0) -> HomologyDecomposition:
    """Decompose ``H_i = ker d_i / im d_next``.

    ``d_i`` maps C_i -> C_{i-1} and ``d_next`` maps C_{i+1} -> C_i; either
    may be ``None`` for a zero map, in which case ``n_cells`` gives dim C_i.
    Torsion cycles are columns of U_inv from the Smith form of ``d_next``;
    lifts are the matching columns of V, so ``d_next c_j = n_j z_j`` holds
    by construction.
    """
    if n_cells is None:
        if d_i is not None:
            n_cells = d_i.ncols
        elif d_next is not None:
            n_cells = d_next.nrows
        else:
            raise ValueError("need n_cells when both maps are zero")
    if d_i is None:
        d_i = SparseIntMatrix(0, n_cells)
    if d_next is None:
        d_next = SparseIntMatrix(n_cells, 0)
    if d_i.ncols != n_cells or d_next.nrows != n_cells:
        raise DimensionError("boundary maps do not meet at the same chain group")
    if not (d_i @ d_next).is_zero():
        raise DimensionError("boundary maps do not compose to zero")

    snf = smith_normal_form(d_next)
    basis = snf.U_inv.columns()
    lifts = snf.V.columns()
    torsion = [TorsionLift(order=d, cycle=basis[k], lift=lifts[k])
               for k, d in enumerate(snf.diagonal) if d > 1]

    rest = basis[snf.rank:]
    B = SparseIntMatrix.from_columns(n_cells, rest)
    local = integer_kernel_basis(d_i @ B)
    free = []
    for vec in local:
        acc: dict[int, int] = {}
        for k, a in vec.items():
            _add_to(acc, rest[k], a)
        free.append(acc)
    return HomologyDecomposition(degree=degree, betti=len(free), torsion=torsion, free_cycles=free)


# ----------------------------------------------------------------------
# Mod-2 routines (rows packed into Python ints)
# ----------------------------------------------------------------------

def _pack_rows(M: SparseIntMatrix) -> list[int]:
    out = []
    for row in M.rows:
        bits = 0
        for c, v in row.items():
            if v & 1:
                bits |= 1 << c
        out.append(bits)
    return out


def _pack_cols(M: SparseIntMatrix) -> list[int]:
    out = [0] * M.ncols
    for r, row in enumerate(M.rows):
        for c, v in row.items():
            if v & 1:
                out[c] |= 1 << r
    return out


def mod2_rank(M: SparseIntMatrix) -> int:
    rows = _pack_rows(M)
    rank = 0
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top in pivots:
                r ^= pivots[top]
            else:
                pivots[top] = r
                rank += 1
                break
    return rank


def mod2_solve(M: SparseIntMatrix, b: Sequence[int]) -> list[int] | None:
    """Solve ``M x = b`` over the two-element field."""
    if len(b) != M.nrows:
        raise DimensionError(f"right-hand side of length {len(b)} for {M.nrows} rows")
    n = M.ncols
    # eliminate on augmented rows; bit n holds the right-hand side
    pivots: dict[int, int] = {}  # pivot column -> reduced row
    for row, rhs in zip(_pack_rows(M), b):
        r = row | ((rhs & 1) << n)
        for col, prow in pivots.items():
            if r >> col & 1:
                r ^= prow
        low = r & ((1 << n) - 1)
        if not low:
            if r:
                return None
            continue
        col = (low & -low).bit_length() - 1
        for c2 in list(pivots):
            if pivots[c2] >> col & 1:
                pivots[c2] ^= r
        pivots[col] = r
    x = [0] * n
    for col, prow in pivots.items():
        x[col] = prow >> n & 1
    return x


def mod2_kernel_basis(M: SparseIntMatrix) -> list[list[int]]:
    """Basis of the kernel of ``M`` over the two-element field, as 0/1 lists."""
    n = M.ncols
    pivots: dict[int, int] = {}
    for row in _pack_rows(M):
        r = row
        for col, prow in pivots.items():
            if r >> col & 1:
                r ^= prow
        if not r:
            continue
        col = (r & -r).bit_length() - 1
        for c2 in list(pivots):
            if pivots[c2] >> col & 1:
                pivots[c2] ^= r
        pivots[col] = r
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [0] * n
        x[f] = 1
        for col, prow in pivots.items():
            if prow >> f & 1:
                x[col] = 1
        basis.append(x)
    return basis


# ----------------------------------------------------------------------
# Small dense helpers used for checks
# ----------------------------------------------------------------------

def determinant(M: SparseIntMatrix | Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = M.to_dense() if isinstance(M, SparseIntMatrix) else [list(map(int, r)) for r in M]
    n = len(a)
    if any(len(r) != n for r in a):
        raise DimensionError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_diagonal_chain(diagonal: Sequence[int]) -> bool:
    return all(d > 0 for d in diagonal) and all(
        diagonal[k + 1] % diagonal[k] == 0 for k in range(len(diagonal) - 1))


def gcd_all(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g
