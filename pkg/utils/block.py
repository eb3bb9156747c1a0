# block.py
#
# Exact F2-linear operator of a 2^n x 2^n x 2^n block of vertices, and the
# 2x2x2 direct-sum check.
#
# Coordinate convention (read by every other module from here):
#   * a vertex takes the row (u1, u2, u3) of its incoming spins, position k
#     being the edge parallel to axis k, and emits (u1, u2, u3).A
#   * the input face perpendicular to axis 1 is addressed by (b2, b3), axis 2
#     by (b1, b3) and axis 3 by (b1, b2): smaller axis index first
#   * the global index of an input (or output) spin is
#     (axis - 1) * 4^n + (first coordinate) * 2^n + (second coordinate)
#   * operator rows are inputs, columns are outputs: x_out = x_in . m

import logging
from dataclasses import dataclass
from typing import List, Tuple

from utils.errors import CapExceededError, ShapeError, SingularMatrixError
from utils.gf2 import Gf2Matrix, direct_sum, inverse, mat_mul
from utils.model import VertexModel
from utils.reporting import CheckReport

logger = logging.getLogger(__name__)

DEFAULT_MAX_N = 5

# axis -> the two lattice axes spanning its input face, in address order
FACE_AXES = {1: (2, 3), 2: (1, 3), 3: (1, 2)}


@dataclass(frozen=True)
class EdgeAddress:
    """A line of edges parallel to `axis`, identified by its point on the input face."""
    axis: int
    coords: Tuple[int, int]

    def validate(self, n):
        if self.axis not in FACE_AXES:
            raise ShapeError(f"axis must be 1, 2 or 3, got {self.axis}")
        size = 1 << n
        if len(self.coords) != 2 or not all(0 <= c < size for c in self.coords):
            raise ShapeError(f"face coordinates {self.coords} outside 0..{size - 1} at n = {n}")
        return self

    def __str__(self):
        return f"axis{self.axis}({self.coords[0]},{self.coords[1]})"


def input_index(addr: EdgeAddress, n: int) -> int:
    addr.validate(n)
    first, second = addr.coords
    return (addr.axis - 1) * (1 << (2 * n)) + (first << n) + second


def address_of(index: int, n: int) -> EdgeAddress:
    """Inverse of input_index."""
    face = 1 << (2 * n)
    if not 0 <= index < 3 * face:
        raise ShapeError(f"index {index} outside 0..{3 * face - 1}")
    axis, inner = divmod(index, face)
    return EdgeAddress(axis + 1, (inner >> n, inner & ((1 << n) - 1)))


@dataclass(frozen=True)
class BlockOperator:
    n: int
    m: Gf2Matrix
    transposed: bool = False

    @property
    def size(self):
        return self.m.rows

    def ordering(self, index):
        return address_of(index, self.n)


def _sweep(matrix: Gf2Matrix, n: int, line1: List[int], line2: List[int], line3: List[int]):
    """
    Push values through every vertex in lexicographic (x1, x2, x3) order. Each
    line list holds the current value on the lines of one axis, indexed by
    face address; on return it holds the values leaving the block. Values are
    packed ints combined by XOR, so the same sweep carries symbolic forms or
    single bits.
    """
    size = 1 << n
    # output k of a vertex is the XOR of the inputs i with matrix[i, k] = 1
    taps = [[i for i in range(3) if matrix[i, k]] for k in range(3)]
    for x1 in range(size):
        for x2 in range(size):
            for x3 in range(size):
                i1, i2, i3 = (x2 << n) | x3, (x1 << n) | x3, (x1 << n) | x2
                incoming = (line1[i1], line2[i2], line3[i3])
                outgoing = []
                for tap in taps:
                    acc = 0
                    for i in tap:
                        acc ^= incoming[i]
                    outgoing.append(acc)
                line1[i1], line2[i2], line3[i3] = outgoing


def build_block(model: VertexModel, n: int, transposed: bool = False, max_n: int = DEFAULT_MAX_N) -> BlockOperator:
    """
    Build the operator of the block of 8^n vertices, each applying A (or A^T).

    Every edge carries a linear form over the 3 * 4^n inputs, stored as a
    bitmask with bit i set when input i contributes. Since every edge points in
    a positive axis direction, lexicographic vertex order visits each vertex
    after all of its predecessors.
    """
    model.require_valid()
    if n < 0:
        raise ShapeError(f"block level must be non-negative, got {n}")
    if n > max_n:
        raise CapExceededError(f"block level {n} exceeds the cap {max_n} (operator size {3 * 4 ** n})")
    matrix = model.a.transpose() if transposed else model.a
    face = 1 << (2 * n)
    line1 = [1 << j for j in range(face)]
    line2 = [1 << (face + j) for j in range(face)]
    line3 = [1 << (2 * face + j) for j in range(face)]
    _sweep(matrix, n, line1, line2, line3)
    m = Gf2Matrix.from_columns(3 * face, line1 + line2 + line3)
    logger.debug(f"built {m.rows}x{m.cols} block operator for {model.encoding} at n = {n}")
    return BlockOperator(n=n, m=m, transposed=transposed)


def _rows_in_label_order(basis: Gf2Matrix, labels) -> Gf2Matrix:
    return basis.permute_rows([labels.index(j) for j in (1, 2, 3, 4)])


def verify_direct_sum(model: VertexModel) -> CheckReport:
    """
    Conjugate the n = 1 block by the t-bases of V1, V2, V3 and compare with
    A + A + A + A^T arranged by W_j = span(e_j of V1, e_j of V2, e_j of V3).
    """
    from utils.transform import V_ROW_LABELS, v_bases_2x2x2

    model.require_valid()
    m = build_block(model, 1).m
    bases = v_bases_2x2x2(model)
    t = direct_sum(*[_rows_in_label_order(basis, V_ROW_LABELS[i + 1]) for i, basis in enumerate(bases)])
    report = CheckReport(name="directsum", subject=model.encoding)
    try:
        t_inv = inverse(t)
    except SingularMatrixError as err:
        logger.error(f"model anomaly for {model.encoding}: {err}")
        report.fail({"anomaly": "singular t-basis change"})
        return report

    conjugated = mat_mul(mat_mul(t, m), t_inv)
    # position 4(i-1)+(j-1) holds e_j of V_i; W-order puts it at 3(j-1)+(i-1)
    w_order = [4 * (i - 1) + (j - 1) for j in range(1, 5) for i in range(1, 4)]
    regrouped = Gf2Matrix.from_lists([[conjugated[r, c] for c in w_order] for r in w_order])
    expected = direct_sum(model.a, model.a, model.a, model.a.transpose())
    for r in range(12):
        for c in range(12):
            report.count()
            if regrouped[r, c] != expected[r, c]:
                report.fail({"row": r, "col": c, "got": regrouped[r, c], "expected": expected[r, c]})
    return report
