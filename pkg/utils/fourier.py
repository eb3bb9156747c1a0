# fourier.py
#
# Discrete Fourier transform of rational-valued functions on F2^m,
# F(w) = sum_x f(x) (-1)^(x.w), computed exactly with a Walsh butterfly over a
# numpy object array of Fractions. Points x and duals w are packed ints
# (coordinate j = bit j), the same map as utils.gf2.

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from utils.errors import CapExceededError, ShapeError
from utils.gf2 import Gf2Vector
from utils.model import VertexModel, fourier_values
from utils.reporting import CheckReport
from utils.transform import AddressClass, GhostAddress, address_class

logger = logging.getLogger(__name__)

DEFAULT_MAX_DIM = 24


def _parity(word):
    return bin(word).count("1") & 1


@dataclass(frozen=True)
class BooleanFunction:
    dim: int
    values: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != 1 << self.dim:
            raise ShapeError(f"a function on F2^{self.dim} needs {1 << self.dim} values, got {len(self.values)}")

    @classmethod
    def from_values(cls, dim, values: Sequence):
        return cls(dim, tuple(Fraction(v) for v in values))

    @classmethod
    def point_mass(cls, dim, x=0):
        values = [Fraction(0)] * (1 << dim)
        values[x] = Fraction(1)
        return cls(dim, tuple(values))

    @classmethod
    def uniform(cls, dim):
        return cls(dim, (Fraction(1, 1 << dim),) * (1 << dim))

    @classmethod
    def from_mapping(cls, dim, mapping: Dict[int, Fraction]):
        values = [Fraction(0)] * (1 << dim)
        for x, v in mapping.items():
            values[x] = Fraction(v)
        return cls(dim, tuple(values))

    def is_probability(self):
        return all(v >= 0 for v in self.values) and sum(self.values) == 1

    def __getitem__(self, x):
        return self.values[x]


@dataclass(frozen=True)
class FourierTable:
    dim: int
    values: Tuple[Fraction, ...]

    def __getitem__(self, w):
        return self.values[w]


def walsh_butterfly(values: Sequence, dim: int) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform, one bit position per pass."""
    table = np.array(list(values), dtype=object)
    size = 1 << dim
    h = 1
    while h < size:
        blocks = table.reshape(-1, 2, h)
        low, high = blocks[:, 0, :], blocks[:, 1, :]
        table = np.stack([low + high, low - high], axis=1).reshape(size)
        h <<= 1
    return table


def fourier_full(f: BooleanFunction, max_dim: int = DEFAULT_MAX_DIM) -> FourierTable:
    if f.dim > max_dim:
        raise CapExceededError(f"full transform of dimension {f.dim} exceeds the cap {max_dim}")
    return FourierTable(f.dim, tuple(walsh_butterfly(f.values, f.dim).tolist()))


def subset_sums(vectors: Sequence[int]) -> List[int]:
    """All 2^k XOR combinations; entry `mask` combines the vectors whose bit is set in mask."""
    sums = [0]
    for v in vectors:
        sums += [s ^ v for s in sums]
    return sums


def subspace_sum(values: Sequence[Fraction], k: int) -> Fraction:
    """(sum of F over the span K of k independent duals) / 2^k"""
    if len(values) != 1 << k:
        raise ShapeError(f"expected {1 << k} transform values for k = {k}, got {len(values)}")
    return sum((Fraction(v) for v in values), Fraction(0)) / (1 << k)


def orthogonal_sum(f: BooleanFunction, duals: Sequence[int]) -> Fraction:
    """Direct sum of f over {x : x.w = 0 for every listed w}."""
    return sum((v for x, v in enumerate(f.values) if not any(_parity(x & w) for w in duals)), Fraction(0))


def product_eval(model: VertexModel, n: int, w: Gf2Vector) -> Fraction:
    """
    Fourier value of the t-spin distribution at the t-dual w: t-spins are
    independent, so F(w) is the product over the unities of w of Q(1) (ghost
    address belongs to A) or Q'(1) (belongs to A^T).
    """
    if w.length != 1 << (2 * n):
        raise ShapeError(f"t-dual of length {w.length} at n = {n}, expected {1 << (2 * n)}")
    q, q_t = fourier_values(model)
    result = Fraction(1)
    for index in w.support():
        belongs = address_class(GhostAddress.from_index(index, n), n)
        result *= q if belongs is AddressClass.A else q_t
        if not result:
            break
    return result


def product_function(parts: Sequence[BooleanFunction]) -> BooleanFunction:
    """f(x_1, ..., x_r) = prod f_i(x_i); part i occupies the bits above parts 0..i-1."""
    joint = np.array([Fraction(1)], dtype=object)
    dim = 0
    for part in parts:
        joint = np.outer(np.array(part.values, dtype=object), joint).reshape(-1)
        dim += part.dim
    return BooleanFunction(dim, tuple(joint.tolist()))


def product_factorization_check(parts: Sequence[BooleanFunction], max_dim: int = DEFAULT_MAX_DIM) -> CheckReport:
    total = sum(p.dim for p in parts)
    if total > max_dim:
        raise CapExceededError(f"product of total dimension {total} exceeds the cap {max_dim}")
    report = CheckReport(name="product_factorization", subject=f"{len(parts)} parts, dim {total}")
    joint = fourier_full(product_function(parts), max_dim)
    factors = [fourier_full(p, max_dim) for p in parts]
    for w in range(1 << total):
        report.count()
        expected = Fraction(1)
        shift = 0
        for part, table in zip(parts, factors):
            expected *= table[(w >> shift) & ((1 << part.dim) - 1)]
            shift += part.dim
        if joint[w] != expected:
            report.fail({"w": w, "joint": joint[w], "product": expected})
    return report


def parseval_check(f: BooleanFunction, max_dim: int = DEFAULT_MAX_DIM) -> CheckReport:
    """sum_x f(x)^2 = 2^-m sum_w F(w)^2"""
    report = CheckReport(name="parseval", subject=f"dim {f.dim}")
    table = fourier_full(f, max_dim)
    report.count()
    direct = sum((v * v for v in f.values), Fraction(0))
    via_transform = sum((Fraction(v) * v for v in table.values), Fraction(0)) / (1 << f.dim)
    if direct != via_transform:
        report.fail({"dim": f.dim, "direct": direct, "transform": via_transform})
    return report
