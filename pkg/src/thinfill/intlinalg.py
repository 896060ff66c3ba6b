"""Exact linear algebra over the integers.

Everything here works with arbitrary-precision Python ints; intermediate
entries in a Smith reduction can be much larger than anything in the input,
so fixed-width arithmetic is never acceptable.  Matrices are immutable.

The Smith normal form is the workhorse: kernels, integer solves, lattice
membership, canonical residues modulo a lattice, and presentations of
subquotient groups are all derived from it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix; ``entries`` is a tuple of row tuples."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows:
            raise ValueError("row count mismatch")
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("column count mismatch")

    @staticmethod
    def from_rows(rows: Iterable[Iterable[int]], cols: int | None = None) -> "IntMatrix":
        data = tuple(tuple(int(x) for x in row) for row in rows)
        if data:
            ncols = len(data[0])
        else:
            if cols is None:
                raise ValueError("empty matrix needs an explicit column count")
            ncols = cols
        return IntMatrix(len(data), ncols, data)

    @staticmethod
    def zero(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix(rows, cols, tuple(tuple(0 for _ in range(cols)) for _ in range(rows)))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @staticmethod
    def from_columns(columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        cols = len(columns)
        return IntMatrix(rows, cols, tuple(
            tuple(int(columns[j][i]) for j in range(cols)) for i in range(rows)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i][j] for i in range(self.rows))

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(
            tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        ot = other.transpose().entries
        return IntMatrix(self.rows, other.cols, tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in ot)
            for row in self.entries))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in sum")
        return IntMatrix(self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(r1, r2))
            for r1, r2 in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(tuple(-a for a in row) for row in self.entries))

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(tuple(c * a for a in row) for row in self.entries))

    def apply(self, vec: Sequence[int]) -> tuple:
        """Matrix times column vector."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * x for a, x in zip(row, vec)) for row in self.entries)

    def is_zero(self) -> bool:
        return all(all(a == 0 for a in row) for row in self.entries)

    def diagonal(self) -> tuple:
        return tuple(self.entries[i][i] for i in range(min(self.rows, self.cols)))


def hstack(mats: Sequence[IntMatrix], rows: int | None = None) -> IntMatrix:
    mats = [m for m in mats]
    if not mats:
        if rows is None:
            raise ValueError("empty hstack needs a row count")
        return IntMatrix.zero(rows, 0)
    r = mats[0].rows
    if any(m.rows != r for m in mats):
        raise ValueError("row mismatch in hstack")
    return IntMatrix(r, sum(m.cols for m in mats), tuple(
        tuple(x for m in mats for x in m.entries[i]) for i in range(r)))


def vstack(mats: Sequence[IntMatrix], cols: int | None = None) -> IntMatrix:
    mats = [m for m in mats]
    if not mats:
        if cols is None:
            raise ValueError("empty vstack needs a column count")
        return IntMatrix.zero(0, cols)
    c = mats[0].cols
    if any(m.cols != c for m in mats):
        raise ValueError("column mismatch in vstack")
    return IntMatrix(sum(m.rows for m in mats), c, tuple(
        row for m in mats for row in m.entries))


def block_diag(mats: Sequence[IntMatrix]) -> IntMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = [[0] * cols for _ in range(rows)]
    ro = co = 0
    for m in mats:
        for i in range(m.rows):
            for j in range(m.cols):
                out[ro + i][co + j] = m.entries[i][j]
        ro += m.rows
        co += m.cols
    return IntMatrix.from_rows(out, cols=cols)


@dataclass(frozen=True)
class SmithForm:
    """D = U @ M @ V with U, V unimodular and D in Smith normal form."""

    matrix: IntMatrix
    D: IntMatrix
    U: IntMatrix
    V: IntMatrix
    Uinv: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.D.diagonal() if d != 0)

    def invariant_diagonal(self) -> tuple:
        return self.D.diagonal()


def smith_normal_form(M: IntMatrix) -> SmithForm:
    """Smith normal form by exact row/column reduction.

    Pivot rule: smallest nonzero magnitude, ties broken by lowest (row, col)
    index, so the output (including the unimodular factors) is deterministic.
    """
    m, n = M.rows, M.cols
    A = [list(row) for row in M.entries]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    Ui = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_swap(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]
        for r in Ui:  # column swap on the inverse
            r[i], r[k] = r[k], r[i]

    def col_swap(j, k):
        for r in A:
            r[j], r[k] = r[k], r[j]
        for r in V:
            r[j], r[k] = r[k], r[j]

    def row_add(i, k, c):
        # row_i += c * row_k
        Ai, Ak = A[i], A[k]
        for j in range(n):
            Ai[j] += c * Ak[j]
        Uik, Ukk = U[i], U[k]
        for j in range(m):
            Uik[j] += c * Ukk[j]
        for r in Ui:  # inverse gets col_k -= c * col_i
            r[k] -= c * r[i]

    def col_add(j, k, c):
        # col_j += c * col_k
        for r in A:
            r[j] += c * r[k]
        for r in V:
            r[j] += c * r[k]

    def row_negate(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]
        for r in Ui:
            r[i] = -r[i]

    def find_pivot(t):
        best = None
        best_abs = None
        for i in range(t, m):
            Ai = A[i]
            for j in range(t, n):
                a = Ai[j]
                if a != 0:
                    aa = -a if a < 0 else a
                    if best_abs is None or aa < best_abs:
                        best, best_abs = (i, j), aa
        return best

    t = 0
    while t < min(m, n):
        pos = find_pivot(t)
        if pos is None:
            break
        if pos[0] != t:
            row_swap(t, pos[0])
        if pos[1] != t:
            col_swap(t, pos[1])
        while True:
            # clear column t, swapping in any smaller remainder as new pivot
            dirty = False
            for i in range(m):
                if i != t and A[i][t] != 0:
                    q = A[i][t] // A[t][t]
                    if q:
                        row_add(i, t, -q)
                    if A[i][t] != 0:
                        row_swap(i, t)
                        dirty = True
            for j in range(n):
                if j != t and A[t][j] != 0:
                    q = A[t][j] // A[t][t]
                    if q:
                        col_add(j, t, -q)
                    if A[t][j] != 0:
                        col_swap(j, t)
                        dirty = True
            if not dirty and all(A[i][t] == 0 for i in range(m) if i != t) \
                    and all(A[t][j] == 0 for j in range(n) if j != t):
                break
        # force the divisibility chain: pull in any entry the pivot misses
        offender = None
        for i in range(t + 1, m):
            Ai = A[i]
            for j in range(t + 1, n):
                if Ai[j] % A[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_add(t, offender, 1)
            continue
        if A[t][t] < 0:
            row_negate(t)
        t += 1

    return SmithForm(
        matrix=M,
        D=IntMatrix.from_rows(A, cols=n),
        U=IntMatrix.from_rows(U, cols=m),
        V=IntMatrix.from_rows(V, cols=n),
        Uinv=IntMatrix.from_rows(Ui, cols=m),
    )


def determinant(M: IntMatrix) -> int:
    """Exact determinant (Bareiss); used by tests to certify unimodularity."""
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    if n == 0:
        return 1
    A = [list(row) for row in M.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def kernel_basis(M: IntMatrix) -> list:
    """Basis (as column vectors) of the integer kernel lattice of M."""
    S = smith_normal_form(M)
    diag = S.D.diagonal()
    out = []
    for j in range(M.cols):
        d = diag[j] if j < len(diag) else 0
        if d == 0:
            out.append(S.V.column(j))
    return out


def solve(M: IntMatrix, b: Sequence[int]):
    """One integer solution x of M x = b, or None if none exists."""
    if len(b) != M.rows:
        raise ValueError("rhs length mismatch")
    S = smith_normal_form(M)
    y = S.U.apply(b)
    diag = S.D.diagonal()
    xprime = [0] * M.cols
    for i in range(M.rows):
        d = diag[i] if i < len(diag) else 0
        if d != 0:
            if y[i] % d != 0:
                return None
            xprime[i] = y[i] // d
        elif y[i] != 0:
            return None
    return S.V.apply(xprime)


class Lattice:
    """Column lattice of an integer matrix, with canonical residues.

    ``reduce`` maps a vector to the unique canonical representative of its
    class modulo the lattice, so two vectors agree modulo the lattice iff
    their reductions are equal.
    """

    def __init__(self, M: IntMatrix):
        self.ambient = M.rows
        self.matrix = M
        self._snf = smith_normal_form(M)
        self._diag = self._snf.D.diagonal()

    def contains(self, vec: Sequence[int]) -> bool:
        return self.reduce(vec) == (0,) * self.ambient

    def reduce(self, vec: Sequence[int]) -> tuple:
        if len(vec) != self.ambient:
            raise ValueError("vector length mismatch")
        y = list(self._snf.U.apply(vec))
        for i in range(self.ambient):
            d = self._diag[i] if i < len(self._diag) else 0
            if d != 0:
                y[i] %= d
        return self._snf.Uinv.apply(y)

    def basis(self) -> list:
        """Basis vectors of the lattice (columns)."""
        out = []
        for i, d in enumerate(self._diag):
            if d != 0:
                col = self._snf.Uinv.column(i)
                out.append(tuple(d * x for x in col))
        return out

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(c) for c in other.matrix.columns())

    def __eq__(self, other) -> bool:
        return (isinstance(other, Lattice) and self.ambient == other.ambient
                and self.contains_lattice(other) and other.contains_lattice(self))

    def __hash__(self):
        raise TypeError("lattices are not hashable")


def lattice_of_columns(columns: Sequence[Sequence[int]], ambient: int) -> Lattice:
    return Lattice(IntMatrix.from_columns(columns, ambient))


def subquotient_invariant_diagonal(numerator: Lattice, denominator_cols: Sequence[Sequence[int]]):
    """Invariant-factor data of numerator / <denominator columns>.

    The denominator columns must lie in the numerator lattice.  Returns the
    pair (free rank, torsion list); torsion entries are >= 2 in divisibility
    order.
    """
    basis = numerator.basis()
    k = len(basis)
    if k == 0:
        return 0, []
    B = IntMatrix.from_columns(basis, numerator.ambient)
    coords = []
    for c in denominator_cols:
        z = solve(B, c)
        if z is None:
            raise ValueError("denominator not contained in numerator lattice")
        coords.append(z)
    R = IntMatrix.from_columns(coords, k)
    diag = smith_normal_form(R).D.diagonal()
    nonzero = [d for d in diag if d != 0]
    rank = k - len(nonzero)
    torsion = [d for d in nonzero if d >= 2]
    return rank, torsion
