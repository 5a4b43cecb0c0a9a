"""Bit-vector linear algebra over GF(2) and the code-quadruple matrices.

A vector v in Z_2^m is stored as the Python integer sum_j v_j 2^(j-1), so
position 1 is the least significant bit. Matrices are tuples of such row
integers. Row vectors act on the left: x = u G.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, RankDeficient, Singular


def popcount(x: int) -> int:
    return x.bit_count()


def parity(x: int) -> int:
    return x.bit_count() & 1


def bits_to_int(bits: str | Sequence[int]) -> int:
    """Map a bit string or 0/1 sequence to an integer (first entry = bit 0)."""
    value = 0
    for j, b in enumerate(bits):
        b = int(b)
        if b not in (0, 1):
            raise DimensionMismatch(f"non-binary entry {b!r} at position {j + 1}")
        value |= b << j
    return value


def int_to_bits(value: int, length: int) -> str:
    """Inverse of :func:`bits_to_int`, rendered as a '0'/'1' string."""
    if value < 0 or value >> length:
        raise DimensionMismatch(f"{value} does not fit in {length} bits")
    return "".join("1" if (value >> j) & 1 else "0" for j in range(length))


@dataclass(frozen=True)
class BitMatrix:
    """Dense GF(2) matrix stored as one integer per row."""

    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.data) != self.rows:
            raise DimensionMismatch(f"expected {self.rows} rows, got {len(self.data)}")
        limit = 1 << self.cols
        for r in self.data:
            if r < 0 or r >= limit:
                raise DimensionMismatch(f"row {r} has bits beyond column {self.cols}")

    @classmethod
    def from_rows(cls, rows: Iterable[int], cols: int) -> BitMatrix:
        data = tuple(int(r) for r in rows)
        return cls(len(data), cols, data)

    @classmethod
    def from_strings(cls, rows: Sequence[str], cols: int | None = None) -> BitMatrix:
        if cols is None:
            if not rows:
                raise DimensionMismatch("cannot infer column count from zero rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatch(f"row {r!r} has length {len(r)}, expected {cols}")
        return cls.from_rows((bits_to_int(r) for r in rows), cols)

    @classmethod
    def from_array(cls, arr) -> BitMatrix:
        a = np.asarray(arr, dtype=np.int64)
        if a.ndim != 2:
            raise DimensionMismatch("expected a 2-D array")
        return cls.from_rows((bits_to_int(row) for row in a), a.shape[1])

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls.from_rows((1 << j for j in range(n)), n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(rows, cols, (0,) * rows)

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for i, r in enumerate(self.data):
            for j in range(self.cols):
                out[i, j] = (r >> j) & 1
        return out

    def to_strings(self) -> list[str]:
        return [int_to_bits(r, self.cols) for r in self.data]

    def transpose(self) -> BitMatrix:
        cols = []
        for j in range(self.cols):
            c = 0
            for i, r in enumerate(self.data):
                c |= ((r >> j) & 1) << i
            cols.append(c)
        return BitMatrix(self.cols, self.rows, tuple(cols))

    @property
    def T(self) -> BitMatrix:
        return self.transpose()

    def row_block(self, start: int, stop: int) -> BitMatrix:
        return BitMatrix(stop - start, self.cols, self.data[start:stop])

    def select_columns(self, positions: Iterable[int]) -> BitMatrix:
        """Keep the given 0-based columns, in the given order."""
        positions = list(positions)
        rows = []
        for r in self.data:
            v = 0
            for out_j, j in enumerate(positions):
                v |= ((r >> j) & 1) << out_j
            rows.append(v)
        return BitMatrix(self.rows, len(positions), tuple(rows))

    def stack(self, other: BitMatrix) -> BitMatrix:
        if other.cols != self.cols:
            raise DimensionMismatch("column counts differ")
        return BitMatrix(self.rows + other.rows, self.cols, self.data + other.data)

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        return BitMatrix(self.rows, other.cols, tuple(vec_mat(r, other) for r in self.data))

    def __str__(self) -> str:
        return "\n".join(self.to_strings())


def vec_mat(v: int, M: BitMatrix) -> int:
    """Row vector times matrix: XOR of the rows of M selected by the bits of v."""
    out = 0
    i = 0
    while v:
        if v & 1:
            out ^= M.data[i]
        v >>= 1
        i += 1
    return out


def vec_mat_t(v: int, M: BitMatrix) -> int:
    """Row vector times M transposed: bit i is the parity of v AND row i."""
    out = 0
    for i, r in enumerate(M.data):
        out |= parity(v & r) << i
    return out


def rref(M: BitMatrix) -> tuple[BitMatrix, list[int]]:
    """Reduced row echelon form and the 0-based pivot columns.

    Zero rows are dropped, so the result has exactly rank(M) rows.
    """
    rows = list(M.data)
    pivots: list[int] = []
    r = 0
    for j in range(M.cols):
        bit = 1 << j
        sel = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
        pivots.append(j)
        r += 1
        if r == len(rows):
            break
    return BitMatrix(r, M.cols, tuple(rows[:r])), pivots


def rank(M: BitMatrix) -> int:
    return rref(M)[0].rows


def invert(M: BitMatrix) -> BitMatrix:
    """Gauss-Jordan inverse over GF(2)."""
    if M.rows != M.cols:
        raise DimensionMismatch("only square matrices can be inverted")
    n = M.rows
    aug = [r | (1 << (n + i)) for i, r in enumerate(M.data)]
    for j in range(n):
        bit = 1 << j
        sel = next((i for i in range(j, n) if aug[i] & bit), None)
        if sel is None:
            raise Singular(f"matrix is singular (no pivot in column {j + 1})")
        aug[j], aug[sel] = aug[sel], aug[j]
        for i in range(n):
            if i != j and aug[i] & bit:
                aug[i] ^= aug[j]
    return BitMatrix(n, n, tuple(r >> n for r in aug))


def nullspace(M: BitMatrix) -> BitMatrix:
    """Basis of the right null space {x : M x^T = 0}, one basis vector per row."""
    R, pivots = rref(M)
    free = [j for j in range(M.cols) if j not in set(pivots)]
    basis = []
    for f in free:
        x = 1 << f
        for r, p in zip(R.data, pivots):
            if (r >> f) & 1:
                x |= 1 << p
        basis.append(x)
    return BitMatrix(len(basis), M.cols, tuple(basis))


def span(M: BitMatrix) -> np.ndarray:
    """All 2^rows combinations m G, indexed by the message integer m."""
    out = np.zeros(1 << M.rows, dtype=np.int64)
    for i, r in enumerate(M.data):
        half = 1 << i
        out[half : 2 * half] = out[:half] ^ r
    return out


@dataclass(frozen=True)
class CodePair:
    """An [n, k] code together with its complement, dual, and dual complement.

    A stacks G_C over G_Ct (the complement); B = (A^-1)^T stacks G_Ctperp
    over G_Cperp.
    """

    n: int
    k: int
    A: BitMatrix
    B: BitMatrix

    @property
    def G(self) -> BitMatrix:
        return self.A.row_block(0, self.k)

    @property
    def G_comp(self) -> BitMatrix:
        return self.A.row_block(self.k, self.n)

    @property
    def G_dual_comp(self) -> BitMatrix:
        return self.B.row_block(0, self.k)

    @property
    def G_dual(self) -> BitMatrix:
        return self.B.row_block(self.k, self.n)

    def block(self, which: str) -> BitMatrix:
        """Generator selected by name: 'C', 'Ct', 'Cperp' or 'Ctperp'."""
        try:
            return {
                "C": self.G,
                "Ct": self.G_comp,
                "Cperp": self.G_dual,
                "Ctperp": self.G_dual_comp,
            }[which]
        except KeyError:
            raise DimensionMismatch(f"unknown code selector {which!r}") from None

    def identities(self) -> dict[str, bool]:
        """Evaluate A B^T = I and the four block identities bit-exactly."""
        k, nk = self.k, self.n - self.k
        G, Gt, Gp, Gtp = self.G, self.G_comp, self.G_dual, self.G_dual_comp
        return {
            "A_Bt_identity": self.A @ self.B.T == BitMatrix.identity(self.n),
            "G_Gperp_zero": G @ Gp.T == BitMatrix.zeros(k, nk),
            "Gt_Gtperp_zero": Gt @ Gtp.T == BitMatrix.zeros(nk, k),
            "G_Gtperp_identity": G @ Gtp.T == BitMatrix.identity(k),
            "Gt_Gperp_identity": Gt @ Gp.T == BitMatrix.identity(nk),
        }


def complement_rows(G: BitMatrix) -> BitMatrix:
    """Unit vectors e_j for every non-pivot column of RREF(G), increasing j."""
    _, pivots = rref(G)
    piv = set(pivots)
    return BitMatrix.from_rows((1 << j for j in range(G.cols) if j not in piv), G.cols)


def build_pair(G: BitMatrix, complement: BitMatrix | None = None) -> CodePair:
    """Construct the code quadruple from a full-row-rank generator.

    Args:
        G: k x n generator of C. Its rows are kept verbatim as G_C.
        complement: optional (n-k) x n rows spanning a complement of C. The
            default is the deterministic unit-vector completion.

    Raises:
        RankDeficient: rows of G are dependent.
        Singular: the supplied complement does not complete G to a basis.
    """
    n, k = G.cols, G.rows
    if k > n:
        raise RankDeficient(f"{k} rows cannot be independent in length {n}")
    if rank(G) != k:
        raise RankDeficient("generator rows are linearly dependent")
    if complement is None:
        complement = complement_rows(G)
    if complement.cols != n or complement.rows != n - k:
        raise DimensionMismatch(f"complement must be {n - k}x{n}")
    A = G.stack(complement)
    B = invert(A).T
    return CodePair(n, k, A, B)


def phase(a, b) -> np.ndarray:
    """(-1)^(a . b) elementwise for integer-coded vectors, as floats."""
    odd = np.bitwise_count(np.bitwise_and(a, b)).astype(np.int64) & 1
    return 1.0 - 2.0 * odd
