"""Exact integer matrix kernels.

Everything here works on plain Python ints (arbitrary precision) stored in
lists of rows.  The public ``IntMatrix`` type is an immutable row-major
container; the ``*_rows`` helpers operate on mutable ``list[list[int]]`` and
are what the group code calls in its inner loops.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionMismatch

Rows = list[list[int]]


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatch("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        for c in columns:
            if len(c) != rows:
                raise DimensionMismatch(f"column of length {len(c)}, expected {rows}")
        return cls.from_rows([[c[i] for c in columns] for i in range(rows)], len(columns))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows(identity_rows(n), n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> Rows:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix.from_columns(self.to_rows(), self.cols) if self.rows else IntMatrix.zeros(self.cols, 0)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        return IntMatrix.from_rows(matmul_rows(self.to_rows(), other.to_rows(), other.cols), other.cols)

    def det(self) -> int:
        if self.rows != self.cols:
            raise DimensionMismatch("determinant of a non-square matrix")
        return det_rows(self.to_rows())

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j)

    def diagonal(self) -> list[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def __repr__(self):
        return f"IntMatrix({self.to_rows()!r})"


def as_rows(A) -> Rows:
    if isinstance(A, IntMatrix):
        return A.to_rows()
    return [list(map(int, r)) for r in A]


def identity_rows(n: int) -> Rows:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul_rows(A: Rows, B: Rows, bcols: int | None = None) -> Rows:
    if bcols is None:
        bcols = len(B[0]) if B else 0
    cols = list(zip(*B)) if B else [()] * bcols
    return [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in A]


def matvec(A: Rows, v: Sequence[int]) -> list[int]:
    return [sum(a * x for a, x in zip(r, v)) for r in A]


def det_rows(A: Rows) -> int:
    """Bareiss fraction-free determinant."""
    n = len(A)
    if n == 0:
        return 1
    M = [r[:] for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = M[k][k]
        for i in range(k + 1, n):
            Mi, Mk = M[i], M[k]
            mik = Mi[k]
            for j in range(k + 1, n):
                Mi[j] = (Mi[j] * pk - mik * Mk[j]) // prev
        prev = pk
    return sign * M[n - 1][n - 1]


# ----------------------------------------------------------------------------
# Smith normal form


def smith_rows(A: Rows, ncols: int | None = None, inverses: bool = False):
    """Smith normal form with transforms.

    Returns ``(U, D, V)`` with ``U A V = D`` or, when ``inverses`` is set,
    ``(U, D, V, Uinv, Vinv)``.  Diagonal entries are nonnegative with
    ``d_i | d_{i+1}``; zeros come last.
    """
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    D = [list(r) for r in A]
    U = identity_rows(m)
    V = identity_rows(n)
    Ui = identity_rows(m) if inverses else None
    Vi = identity_rows(n) if inverses else None

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        if Ui is not None:
            for r in Ui:
                r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        if Vi is not None:
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        Dd, Ds = D[dst], D[src]
        for c in range(n):
            if Ds[c]:
                Dd[c] += q * Ds[c]
        Ud, Us = U[dst], U[src]
        for c in range(m):
            if Us[c]:
                Ud[c] += q * Us[c]
        if Ui is not None:
            for r in Ui:
                if r[dst]:
                    r[src] -= q * r[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for r in D:
            if r[src]:
                r[dst] += q * r[src]
        for r in V:
            if r[src]:
                r[dst] += q * r[src]
        if Vi is not None:
            Vd, Vs = Vi[dst], Vi[src]
            for c in range(n):
                if Vd[c]:
                    Vs[c] -= q * Vd[c]

    for k in range(min(m, n)):
        while True:
            best = None
            bi = bj = -1
            for i in range(k, m):
                Di = D[i]
                for j in range(k, n):
                    x = Di[j]
                    if x:
                        ax = x if x > 0 else -x
                        if best is None or ax < best:
                            best, bi, bj = ax, i, j
                            if ax == 1:
                                break
                if best == 1:
                    break
            if best is None:
                break
            if bi != k:
                swap_rows(k, bi)
            if bj != k:
                swap_cols(k, bj)
            p = D[k][k]
            clean = True
            for i in range(k + 1, m):
                x = D[i][k]
                if x:
                    add_row(i, k, -(x // p))
                    if D[i][k]:
                        clean = False
            Dk = D[k]
            for j in range(k + 1, n):
                x = Dk[j]
                if x:
                    add_col(j, k, -(x // p))
                    if Dk[j]:
                        clean = False
            if not clean:
                continue
            bad = -1
            for i in range(k + 1, m):
                Di = D[i]
                for j in range(k + 1, n):
                    if Di[j] % p:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad >= 0:
                add_row(k, bad, 1)
                continue
            break
        if best is None:
            break
        if D[k][k] < 0:
            D[k] = [-x for x in D[k]]
            U[k] = [-x for x in U[k]]
            if Ui is not None:
                for r in Ui:
                    r[k] = -r[k]
    if inverses:
        return U, D, V, Ui, Vi
    return U, D, V


def smith_normal_form(A) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ A @ V == D`` in Smith normal form.

    ``U`` and ``V`` are unimodular.  ``A`` may be an ``IntMatrix`` or a nested
    sequence of ints.
    """
    if isinstance(A, IntMatrix):
        m, n, rows = A.rows, A.cols, A.to_rows()
    else:
        rows = as_rows(A)
        m = len(rows)
        n = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != n:
                raise DimensionMismatch("ragged rows")
    U, D, V = smith_rows(rows, n)
    return IntMatrix.from_rows(U, m), IntMatrix.from_rows(D, n), IntMatrix.from_rows(V, n)


def invariant_factors(A) -> list[int]:
    """Diagonal of the Smith form of ``A`` (length ``min(rows, cols)``)."""
    _, D, _ = smith_normal_form(A)
    return D.diagonal()


# ----------------------------------------------------------------------------
# Row-style Hermite normal form of lattices


def hnf_rows(vectors: Iterable[Sequence[int]], dim: int, transform: bool = False):
    """Echelon Hermite form of the lattice spanned by ``vectors`` (as rows).

    Pivots are positive and entries above each pivot lie in ``[0, pivot)``,
    which makes the nonzero rows a canonical basis of the lattice.  Returns
    ``(basis, pivots)``; with ``transform`` also the unimodular ``T`` such
    that ``T @ vectors`` equals ``basis`` followed by zero rows, so
    ``T[len(basis):]`` spans the left kernel.
    """
    H = [list(v) for v in vectors]
    N = len(H)
    T = identity_rows(N) if transform else None
    pivots = []
    r = 0
    for c in range(dim):
        if r == N:
            break
        while True:
            piv, best = -1, 0
            for i in range(r, N):
                x = H[i][c]
                if x:
                    ax = x if x > 0 else -x
                    if piv < 0 or ax < best:
                        piv, best = i, ax
            if piv < 0:
                break
            if piv != r:
                H[r], H[piv] = H[piv], H[r]
                if T is not None:
                    T[r], T[piv] = T[piv], T[r]
            Hr = H[r]
            p = Hr[c]
            done = True
            for i in range(r + 1, N):
                Hi = H[i]
                x = Hi[c]
                if x:
                    q = x // p
                    for j in range(c, dim):
                        if Hr[j]:
                            Hi[j] -= q * Hr[j]
                    if T is not None:
                        Ti, Tr = T[i], T[r]
                        for j in range(N):
                            if Tr[j]:
                                Ti[j] -= q * Tr[j]
                    if Hi[c]:
                        done = False
            if done:
                break
        if piv < 0:
            continue
        Hr = H[r]
        if Hr[c] < 0:
            H[r] = Hr = [-x for x in Hr]
            if T is not None:
                T[r] = [-x for x in T[r]]
        p = Hr[c]
        for i in range(r):
            Hi = H[i]
            q = Hi[c] // p
            if q:
                for j in range(c, dim):
                    if Hr[j]:
                        Hi[j] -= q * Hr[j]
                if T is not None:
                    Ti, Tr = T[i], T[r]
                    for j in range(N):
                        if Tr[j]:
                            Ti[j] -= q * Tr[j]
        pivots.append(c)
        r += 1
    basis = H[:r]
    if transform:
        return basis, pivots, T
    return basis, pivots


def reduce_vector(v: Sequence[int], basis: Rows, pivots: Sequence[int]) -> list[int]:
    """Canonical representative of ``v`` modulo the lattice with the given HNF basis."""
    v = list(v)
    for row, c in zip(basis, pivots):
        q = v[c] // row[c]
        if q:
            for j in range(c, len(v)):
                if row[j]:
                    v[j] -= q * row[j]
    return v


def lattice_contains(v: Sequence[int], basis: Rows, pivots: Sequence[int]) -> bool:
    return not any(reduce_vector(v, basis, pivots))


def solve_rows(vectors: Sequence[Sequence[int]], target: Sequence[int], dim: int) -> list[int] | None:
    """Integer coefficients ``c`` with ``sum(c_i * vectors[i]) == target``, or None."""
    if not vectors:
        return [] if not any(target) else None
    basis, pivots, T = hnf_rows(vectors, dim, transform=True)
    v = list(target)
    coeffs = [0] * len(basis)
    for k, (row, c) in enumerate(zip(basis, pivots)):
        q = v[c] // row[c]
        if q:
            coeffs[k] = q
            for j in range(c, dim):
                if row[j]:
                    v[j] -= q * row[j]
    if any(v):
        return None
    out = [0] * len(vectors)
    for k, q in enumerate(coeffs):
        if q:
            Tk = T[k]
            for j in range(len(vectors)):
                if Tk[j]:
                    out[j] += q * Tk[j]
    return out


def left_kernel_rows(vectors: Sequence[Sequence[int]], dim: int) -> Rows:
    """Basis of ``{c : sum(c_i * vectors[i]) == 0}``."""
    if not vectors:
        return []
    basis, _, T = hnf_rows(vectors, dim, transform=True)
    return T[len(basis):]


def lattice_intersection(b1: Rows, b2: Rows, dim: int) -> Rows:
    """Spanning set of the intersection of two lattices given by bases."""
    if not b1 or not b2:
        return []
    stacked = [list(r) for r in b1] + [[-x for x in r] for r in b2]
    kern = left_kernel_rows(stacked, dim)
    k1 = len(b1)
    out = []
    for c in kern:
        w = [0] * dim
        for i in range(k1):
            ci = c[i]
            if ci:
                for j, x in enumerate(b1[i]):
                    if x:
                        w[j] += ci * x
        out.append(w)
    return out


def vec_add(a: Sequence[int], b: Sequence[int]) -> list[int]:
    return [x + y for x, y in zip(a, b)]


def vec_sub(a: Sequence[int], b: Sequence[int]) -> list[int]:
    return [x - y for x, y in zip(a, b)]


def vec_scale(k: int, a: Sequence[int]) -> list[int]:
    return [k * x for x in a]


def combine(coeffs: Sequence[int], vectors: Sequence[Sequence[int]], dim: int) -> list[int]:
    out = [0] * dim
    for c, v in zip(coeffs, vectors):
        if c:
            for j, x in enumerate(v):
                if x:
                    out[j] += c * x
    return out


def lcm(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return abs(a * b) // gcd(a, b)
