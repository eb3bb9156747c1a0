# gf2.py
#
# Bit-packed dense linear algebra over the two-element field.
#
# Coordinate-to-bit map: coordinate j of a vector (or column j of a matrix row)
# is bit j of a Python int, least significant bit first. Rows of a matrix are
# stored as one int each, so every row operation is a single XOR.

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from utils.errors import ShapeError, SingularMatrixError


def _iter_bits(word):
    """Yield the positions of the set bits of word, lowest first."""
    while word:
        low = word & -word
        yield low.bit_length() - 1
        word ^= low


def _parity(word):
    return bin(word).count("1") & 1


def _rref(rows):
    """
    Reduced row echelon form of packed rows. The pivot of a row is its lowest
    set bit (first nonzero coordinate); every pivot column is cleared in all
    other rows. Returns the nonzero rows sorted by pivot.
    """
    pivots = {}
    for row in rows:
        for col, prow in pivots.items():
            if (row >> col) & 1:
                row ^= prow
        if row:
            col = (row & -row).bit_length() - 1
            for c in pivots:
                if (pivots[c] >> col) & 1:
                    pivots[c] ^= row
            pivots[col] = row
    return [pivots[c] for c in sorted(pivots)]


@dataclass(frozen=True)
class Gf2Vector:
    """Vector of `length` coordinates in F2 packed into `bits`."""
    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise ShapeError(f"negative vector length {self.length}")
        if self.bits < 0 or self.bits >> self.length:
            raise ShapeError(f"bits {self.bits:#x} do not fit in {self.length} coordinates")

    @classmethod
    def zeros(cls, length):
        return cls(length, 0)

    @classmethod
    def unit(cls, length, index):
        if not 0 <= index < length:
            raise ShapeError(f"unit index {index} outside 0..{length - 1}")
        return cls(length, 1 << index)

    @classmethod
    def from_list(cls, values: Sequence[int]):
        bits = 0
        for j, v in enumerate(values):
            if v & 1:
                bits |= 1 << j
        return cls(len(values), bits)

    def to_list(self):
        return [(self.bits >> j) & 1 for j in range(self.length)]

    def __len__(self):
        return self.length

    def __getitem__(self, index):
        if not 0 <= index < self.length:
            raise ShapeError(f"index {index} outside 0..{self.length - 1}")
        return (self.bits >> index) & 1

    def __add__(self, other):
        if self.length != other.length:
            raise ShapeError(f"cannot add vectors of lengths {self.length} and {other.length}")
        return Gf2Vector(self.length, self.bits ^ other.bits)

    def dot(self, other):
        """Row-times-column product x.w in F2."""
        if self.length != other.length:
            raise ShapeError(f"cannot pair vectors of lengths {self.length} and {other.length}")
        return _parity(self.bits & other.bits)

    def support(self):
        return list(_iter_bits(self.bits))

    def is_zero(self):
        return self.bits == 0

    def __str__(self):
        return "(" + " ".join(str(v) for v in self.to_list()) + ")"


@dataclass(frozen=True)
class Gf2Matrix:
    """rows x cols matrix over F2; data[i] packs row i, bit j = column j."""
    rows: int
    cols: int
    data: Tuple[int, ...]

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise ShapeError(f"expected {self.rows} packed rows, got {len(self.data)}")
        for row in self.data:
            if row < 0 or row >> self.cols:
                raise ShapeError(f"row {row:#x} does not fit in {self.cols} columns")

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, size):
        return cls(size, size, tuple(1 << i for i in range(size)))

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]):
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        data = []
        for row in entries:
            if len(row) != cols:
                raise ShapeError("ragged matrix rows")
            data.append(Gf2Vector.from_list(row).bits)
        return cls(rows, cols, tuple(data))

    @classmethod
    def from_row_vectors(cls, vectors: Sequence[Gf2Vector], cols=None):
        if cols is None:
            if not vectors:
                raise ShapeError("column count needed for an empty row list")
            cols = vectors[0].length
        for v in vectors:
            if v.length != cols:
                raise ShapeError(f"row of length {v.length} in a {cols}-column matrix")
        return cls(len(vectors), cols, tuple(v.bits for v in vectors))

    @classmethod
    def from_columns(cls, rows, columns: Sequence[int]):
        """Build from packed columns (bit i of columns[j] is entry (i, j))."""
        data = [0] * rows
        for j, column in enumerate(columns):
            if column < 0 or column >> rows:
                raise ShapeError(f"column {column:#x} does not fit in {rows} rows")
            for i in _iter_bits(column):
                data[i] |= 1 << j
        return cls(rows, len(columns), tuple(data))

    @property
    def shape(self):
        return self.rows, self.cols

    def is_square(self):
        return self.rows == self.cols

    def __getitem__(self, index):
        i, j = index
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise ShapeError(f"entry {index} outside a {self.rows}x{self.cols} matrix")
        return (self.data[i] >> j) & 1

    def row(self, i):
        return Gf2Vector(self.cols, self.data[i])

    def column(self, j):
        if not 0 <= j < self.cols:
            raise ShapeError(f"column {j} outside 0..{self.cols - 1}")
        bits = 0
        for i, row in enumerate(self.data):
            if (row >> j) & 1:
                bits |= 1 << i
        return Gf2Vector(self.rows, bits)

    def to_lists(self):
        return [[(row >> j) & 1 for j in range(self.cols)] for row in self.data]

    def transpose(self):
        data = [0] * self.cols
        for i, row in enumerate(self.data):
            for j in _iter_bits(row):
                data[j] |= 1 << i
        return Gf2Matrix(self.cols, self.rows, tuple(data))

    def __add__(self, other):
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape} matrices")
        return Gf2Matrix(self.rows, self.cols, tuple(a ^ b for a, b in zip(self.data, other.data)))

    def __matmul__(self, other):
        return mat_mul(self, other)

    def is_identity(self):
        return self == Gf2Matrix.identity(self.rows) if self.is_square() else False

    def permute_rows(self, order: Sequence[int]):
        """New matrix whose row i is row order[i] of this one."""
        if sorted(order) != list(range(self.rows)):
            raise ShapeError("row order is not a permutation")
        return Gf2Matrix(self.rows, self.cols, tuple(self.data[i] for i in order))

    def __str__(self):
        return "\n".join(" ".join(str(v) for v in row) for row in self.to_lists())


def mat_mul(a: Gf2Matrix, b: Gf2Matrix) -> Gf2Matrix:
    """Matrix product over F2: row i of the result is row i of a acting on b."""
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    data = []
    for row in a.data:
        acc = 0
        for j in _iter_bits(row):
            acc ^= b.data[j]
        data.append(acc)
    return Gf2Matrix(a.rows, b.cols, tuple(data))


def kron(a: Gf2Matrix, b: Gf2Matrix) -> Gf2Matrix:
    """Kronecker product: entry (i*b.rows + k, j*b.cols + l) is a[i, j] * b[k, l]."""
    data = []
    for arow in a.data:
        blocks = list(_iter_bits(arow))
        for brow in b.data:
            acc = 0
            for j in blocks:
                acc |= brow << (j * b.cols)
            data.append(acc)
    return Gf2Matrix(a.rows * b.rows, a.cols * b.cols, tuple(data))


def kron_power(a: Gf2Matrix, n: int) -> Gf2Matrix:
    """n-fold Kronecker power; the 0-th power is the 1x1 identity."""
    result = Gf2Matrix.identity(1)
    for _ in range(n):
        result = kron(result, a)
    return result


def kron_all(factors: Iterable[Gf2Matrix]) -> Gf2Matrix:
    result = Gf2Matrix.identity(1)
    for factor in factors:
        result = kron(result, factor)
    return result


def direct_sum(*blocks: Gf2Matrix) -> Gf2Matrix:
    """Block-diagonal matrix with the given blocks in order."""
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    data = []
    offset = 0
    for block in blocks:
        data.extend(row << offset for row in block.data)
        offset += block.cols
    return Gf2Matrix(rows, cols, tuple(data))


def row_action(x: Gf2Vector, m: Gf2Matrix) -> Gf2Vector:
    """Row vector times matrix, x.m."""
    if x.length != m.rows:
        raise ShapeError(f"row of length {x.length} cannot act on a {m.shape} matrix")
    acc = 0
    for j in _iter_bits(x.bits):
        acc ^= m.data[j]
    return Gf2Vector(m.cols, acc)


def col_action(m: Gf2Matrix, w: Gf2Vector) -> Gf2Vector:
    """Matrix times column vector, m.w."""
    if m.cols != w.length:
        raise ShapeError(f"{m.shape} matrix cannot act on a column of length {w.length}")
    bits = 0
    for i, row in enumerate(m.data):
        if _parity(row & w.bits):
            bits |= 1 << i
    return Gf2Vector(m.rows, bits)


def rank(m: Gf2Matrix) -> int:
    return len(_rref(m.data))


def left_kernel(m: Gf2Matrix) -> "Subspace":
    """{x : x.m = 0}, via elimination on m augmented with the identity."""
    mask = (1 << m.cols) - 1
    pivots = {}
    kernel = []
    for i, row in enumerate(m.data):
        work = row | (1 << (m.cols + i))
        low = work & mask
        while low:
            col = (low & -low).bit_length() - 1
            if col not in pivots:
                pivots[col] = work
                break
            work ^= pivots[col]
            low = work & mask
        if not low:
            kernel.append(Gf2Vector(m.rows, work >> m.cols))
    return Subspace.span(m.rows, kernel)


def fixed_space(m: Gf2Matrix) -> "Subspace":
    """{x : x.m = x}; in characteristic two the left kernel of m + I."""
    if not m.is_square():
        raise ShapeError(f"fixed space of a non-square {m.shape} matrix")
    return left_kernel(m + Gf2Matrix.identity(m.rows))


def inverse(m: Gf2Matrix) -> Gf2Matrix:
    """Two-sided inverse by Gauss-Jordan elimination on [m | I]."""
    if not m.is_square():
        raise ShapeError(f"inverse of a non-square {m.shape} matrix")
    size = m.rows
    work = [row | (1 << (size + i)) for i, row in enumerate(m.data)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if (work[r] >> col) & 1), None)
        if pivot is None:
            raise SingularMatrixError(f"matrix of size {size} is singular (no pivot in column {col})")
        work[col], work[pivot] = work[pivot], work[col]
        for r in range(size):
            if r != col and (work[r] >> col) & 1:
                work[r] ^= work[col]
    return Gf2Matrix(size, size, tuple(row >> size for row in work))


@dataclass(frozen=True)
class Subspace:
    """
    Linear subspace of F2^ambient_dim. The basis is always kept in reduced row
    echelon form, so two subspaces are equal exactly when their bases are.
    """
    ambient_dim: int
    basis: Tuple[Gf2Vector, ...]

    @classmethod
    def span(cls, ambient_dim, vectors: Iterable[Gf2Vector]):
        packed = []
        for v in vectors:
            if v.length != ambient_dim:
                raise ShapeError(f"vector of length {v.length} in a {ambient_dim}-dimensional space")
            packed.append(v.bits)
        return cls(ambient_dim, tuple(Gf2Vector(ambient_dim, row) for row in _rref(packed)))

    @classmethod
    def full(cls, ambient_dim):
        return cls.span(ambient_dim, [Gf2Vector.unit(ambient_dim, j) for j in range(ambient_dim)])

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, v: Gf2Vector) -> bool:
        if v.length != self.ambient_dim:
            raise ShapeError(f"vector of length {v.length} tested against a {self.ambient_dim}-dimensional space")
        bits = v.bits
        for b in self.basis:
            col = (b.bits & -b.bits).bit_length() - 1
            if (bits >> col) & 1:
                bits ^= b.bits
        return bits == 0

    __contains__ = contains

    def members(self):
        """Yield all 2**dim members; only sensible for small dimensions."""
        for mask in range(1 << self.dim):
            bits = 0
            for k in _iter_bits(mask):
                bits ^= self.basis[k].bits
            yield Gf2Vector(self.ambient_dim, bits)


def subspace_intersection_dim(s: Subspace, constraints: Iterable[int]) -> int:
    """Dimension of {x in s : x_i = 0 for every listed i}: dim(s) - rank of the restricted basis."""
    mask = 0
    for index in constraints:
        if not 0 <= index < s.ambient_dim:
            raise ShapeError(f"constraint index {index} outside 0..{s.ambient_dim - 1}")
        mask |= 1 << index
    return s.dim - len(_rref([b.bits & mask for b in s.basis]))


def column_space_rank(columns: List[int]) -> int:
    """Rank of a set of packed vectors."""
    return len(_rref(columns))
