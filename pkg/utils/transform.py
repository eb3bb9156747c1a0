# transform.py
#
# The self-similarity spin transform on face 1: ghost addressing, the matrices
# G = G13^(x)n (x) G12^(x)n and B = G^-1, the A / A^T classification of ghost
# addresses and the conversion of i-duals into t-duals.
#
# Rows of G are t-basis vectors indexed by the ghost address alpha.beta (2n-bit
# concatenation); columns are i-spins indexed by b2.b3. The most significant
# bit of alpha (or b2) belongs to the leftmost G13 factor.

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import List, Tuple

from utils.block import EdgeAddress
from utils.errors import InvalidModelError, QueryError, ShapeError, VertexError
from utils.gf2 import Gf2Matrix, Gf2Vector, col_action, kron, kron_all, mat_mul
from utils.model import VertexModel

logger = logging.getLogger(__name__)

# row labels (which e_j sits in each row) of the three 2x2x2 t-bases
V_ROW_LABELS = {1: (1, 2, 3, 4), 2: (2, 1, 3, 4), 3: (3, 1, 2, 4)}

I2 = Gf2Matrix.identity(2)


class AddressClass(Enum):
    A = "BelongsToA"
    AT = "BelongsToAT"


@dataclass(frozen=True)
class GhostAddress:
    alpha: int
    beta: int

    def validate(self, n):
        size = 1 << n
        if not (0 <= self.alpha < size and 0 <= self.beta < size):
            raise ShapeError(f"ghost address ({self.alpha}, {self.beta}) outside 0..{size - 1} at n = {n}")
        return self

    def index(self, n):
        self.validate(n)
        return (self.alpha << n) | self.beta

    @classmethod
    def from_index(cls, index, n):
        if not 0 <= index < 1 << (2 * n):
            raise ShapeError(f"ghost index {index} outside 0..{(1 << (2 * n)) - 1}")
        return cls(index >> n, index & ((1 << n) - 1))

    def binary(self, n):
        return format(self.alpha, f"0{n}b"), format(self.beta, f"0{n}b")


@dataclass(frozen=True)
class SpinTransform:
    n: int
    g: Gf2Matrix
    b: Gf2Matrix
    stepwise_verified: bool = False

    @property
    def size(self):
        return self.g.rows


def stepwise_factor(model: VertexModel, n: int, k: int) -> Gf2Matrix:
    """1^(n-k) (x) G13 (x) 1^(k-1) (x) 1^(n-k) (x) G12 (x) 1^(k-1)"""
    if not 1 <= k <= n:
        raise ShapeError(f"step {k} outside 1..{n}")
    half = lambda g: [I2] * (n - k) + [g] + [I2] * (k - 1)  # noqa: E731
    return kron_all(half(model.g13) + half(model.g12))


def stepwise_product(model: VertexModel, n: int) -> Gf2Matrix:
    result = Gf2Matrix.identity(1 << (2 * n))
    for k in range(1, n + 1):
        result = mat_mul(stepwise_factor(model, n, k), result)
    return result


@lru_cache(maxsize=64)
def build_transform(model: VertexModel, n: int, verify_stepwise: bool = True) -> SpinTransform:
    model.require_valid()
    if n < 1:
        raise ShapeError(f"transform level must be at least 1, got {n}")
    g = kron_all([model.g13] * n + [model.g12] * n)
    b = kron_all([model.b13] * n + [model.b12] * n)
    if verify_stepwise:
        if stepwise_product(model, n) != g:
            logger.error(f"stepwise and closed-form transforms disagree for {model.encoding} at n = {n}")
            raise VertexError(f"stepwise construction of G does not match the Kronecker form (n = {n})")
        logger.debug(f"stepwise construction of G confirmed for {model.encoding} at n = {n}")
    return SpinTransform(n=n, g=g, b=b, stepwise_verified=verify_stepwise)


def address_class(addr: GhostAddress, n: int) -> AddressClass:
    addr.validate(n)
    return AddressClass.AT if addr.alpha + addr.beta >= 1 << n else AddressClass.A


def class_counts(n: int) -> Tuple[int, int]:
    if n < 1:
        raise ShapeError(f"level must be at least 1, got {n}")
    size = 1 << n
    count_at = sum(1 for alpha in range(size) for beta in range(size)
                   if address_class(GhostAddress(alpha, beta), n) is AddressClass.AT)
    return size * size - count_at, count_at


def closed_form_counts(n: int) -> Tuple[int, int]:
    return 2 ** (2 * n - 1) + 2 ** (n - 1), 2 ** (2 * n - 1) - 2 ** (n - 1)


def child_addresses(addr: GhostAddress, n: int) -> List[GhostAddress]:
    """The four addresses at level n + 1 obtained by prefixing one bit to alpha and one to beta."""
    addr.validate(n)
    return [GhostAddress((a << n) | addr.alpha, (b << n) | addr.beta) for a in (0, 1) for b in (0, 1)]


def address_grid(n: int) -> List[List[AddressClass]]:
    """grid[alpha][beta] for all ghost addresses."""
    size = 1 << n
    return [[address_class(GhostAddress(alpha, beta), n) for beta in range(size)] for alpha in range(size)]


def address_grid_text(n: int) -> str:
    # '.' for A, '#' for A^T
    return "\n".join("".join("#" if c is AddressClass.AT else "." for c in row) for row in address_grid(n))


def i_dual_column(addr: EdgeAddress, n: int) -> Gf2Vector:
    if addr.axis != 1:
        raise QueryError(f"i-dual columns exist only for axis-1 edges, got axis {addr.axis}")
    addr.validate(n)
    b2, b3 = addr.coords
    return Gf2Vector.unit(1 << (2 * n), (b2 << n) | b3)


def t_dual(t: SpinTransform, z: Gf2Vector) -> Gf2Vector:
    return col_action(t.g, z)


def v_bases_2x2x2(model: VertexModel) -> Tuple[Gf2Matrix, Gf2Matrix, Gf2Matrix]:
    """t-bases of V1, V2, V3 at n = 1, rows in the orders of V_ROW_LABELS."""
    model.require_valid()
    return kron(model.g13, model.g12), kron(model.g23, model.g21), kron(model.g32, model.g31)


def _anchor_digit(g: Gf2Matrix, name):
    columns = [(g[0, j], g[1, j]) for j in (0, 1)]
    if sorted(columns) != [(1, 0), (1, 1)]:
        raise InvalidModelError(f"{name} columns {columns} are not one (1,0)^T and one (1,1)^T")
    return columns.index((1, 0))


def anchor_digits(model: VertexModel) -> Tuple[int, int]:
    """
    Digits (c2, c3) whose G13 and G12 columns are (1,0)^T. The edge
    (c2...c2, c3...c3) has a t-dual with a single unity at ghost address (0, 0).
    """
    return _anchor_digit(model.g13, "G13"), _anchor_digit(model.g12, "G12")


def repeat_digit(digit: int, n: int) -> int:
    return ((1 << n) - 1) if digit else 0


def anchor_edge(model: VertexModel, n: int) -> EdgeAddress:
    c2, c3 = anchor_digits(model)
    return EdgeAddress(1, (repeat_digit(c2, n), repeat_digit(c3, n)))
