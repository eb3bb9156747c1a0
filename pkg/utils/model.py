# model.py
#
# Everything about a single vertex matrix A: minors, delta, the 2x2 matrices
# G_ij and their inverses, eigenvalue-1 eigenspaces of A and A^T, single-vertex
# probabilities and their Fourier values, and the classification of all 512
# matrices over F2.

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from utils.dyadic import DyadicProbability
from utils.errors import EncodingError, InvalidModelError, ShapeError
from utils.gf2 import Gf2Matrix, Gf2Vector, Subspace, fixed_space, mat_mul

logger = logging.getLogger(__name__)

# matrix of the worked example, a = (0 1 1 / 0 0 1 / 1 0 1)
EXAMPLE_ENCODING = "011001101"

# six matrices that, together with their H-conjugates, make up the twelve class
TWELVE_CLASS_GENERATORS = (
    "011001101",
    "011001110",
    "011101101",
    "111001101",
    "111001110",
    "111101101",
)

# swaps the 2nd and 3rd coordinates; H = H^-1
H = Gf2Matrix.from_lists([[1, 0, 0], [0, 0, 1], [0, 1, 0]])


class MatrixClass(Enum):
    TWELVE = "TwelveClass"
    TWENTY_SIX = "TwentySixClass"
    OTHER = "Other"
    DELTA_ZERO = "DeltaZero"

    @classmethod
    def from_tag(cls, tag):
        for member in cls:
            if member.value.lower() == tag.lower() or member.name.lower() == tag.lower():
                return member
        raise EncodingError(f"unknown matrix class {tag!r}; expected one of {[m.value for m in cls]}")


def encode_matrix(a: Gf2Matrix) -> str:
    """9-character row-major encoding a11 a12 a13 a21 ... a33."""
    if a.shape != (3, 3):
        raise ShapeError(f"vertex matrices are 3x3, got {a.shape}")
    return "".join(str(v) for row in a.to_lists() for v in row)


def decode_matrix(text: str) -> Gf2Matrix:
    text = text.strip()
    if len(text) != 9 or any(ch not in "01" for ch in text):
        raise EncodingError(f"matrix encoding must be 9 characters from {{0,1}}, got {text!r}")
    digits = [int(ch) for ch in text]
    return Gf2Matrix.from_lists([digits[0:3], digits[3:6], digits[6:9]])


def _minor(entries, j, k):
    """Determinant of the 3x3 matrix with row j and column k deleted (1-based); no signs over F2."""
    r1, r2 = [r for r in range(3) if r != j - 1]
    c1, c2 = [c for c in range(3) if c != k - 1]
    return (entries[r1][c1] * entries[r2][c2] + entries[r1][c2] * entries[r2][c1]) % 2


@dataclass(frozen=True)
class VertexModel:
    """
    A 3x3 vertex matrix with its derived data. Entries and minors are
    addressed 1-based, as a_ij and m_jk.
    """
    a: Gf2Matrix
    minors: Tuple[Tuple[int, int, int], ...]
    delta: int
    g13: Gf2Matrix
    g12: Gf2Matrix
    g23: Gf2Matrix
    g21: Gf2Matrix
    g32: Gf2Matrix
    g31: Gf2Matrix
    b13: Optional[Gf2Matrix]
    b12: Optional[Gf2Matrix]

    @property
    def valid(self):
        return self.delta != 0

    @property
    def encoding(self):
        return encode_matrix(self.a)

    def entry(self, i, j):
        return self.a[i - 1, j - 1]

    def minor(self, j, k):
        return self.minors[j - 1][k - 1]

    def g(self, i, j):
        return g_matrix(self, i, j)

    def require_valid(self):
        if not self.valid:
            raise InvalidModelError(f"matrix {self.encoding} violates the general position condition (delta = 0)")
        return self


def g_matrix(model: VertexModel, i, j) -> Gf2Matrix:
    """G_ij = (a_ij m_ji / a_ji m_ij)."""
    if i == j or not (1 <= i <= 3 and 1 <= j <= 3):
        raise ShapeError(f"G_ij needs distinct indices in 1..3, got ({i}, {j})")
    return Gf2Matrix.from_lists([
        [model.entry(i, j), model.minor(j, i)],
        [model.entry(j, i), model.minor(i, j)],
    ])


def b_matrix(model: VertexModel, i, j) -> Gf2Matrix:
    """B_ij = G_ij^-1 = (m_ij m_ji / a_ji a_ij) when delta = 1."""
    model.require_valid()
    return Gf2Matrix.from_lists([
        [model.minor(i, j), model.minor(j, i)],
        [model.entry(j, i), model.entry(i, j)],
    ])


def build_model(a: Gf2Matrix) -> VertexModel:
    """
    Assemble the vertex model of a 3x3 matrix. Invalid (delta = 0) matrices are
    still returned, with b13 = b12 = None, so they can be inspected and counted.
    """
    if a.shape != (3, 3):
        raise ShapeError(f"vertex matrices are 3x3, got {a.shape}")
    entries = a.to_lists()
    minors = tuple(tuple(_minor(entries, j, k) for k in (1, 2, 3)) for j in (1, 2, 3))

    def e(i, j):
        return entries[i - 1][j - 1]

    delta = (e(1, 2) * e(2, 3) * e(3, 1) + e(1, 3) * e(3, 2) * e(2, 1)) % 2

    def g(i, j):
        return Gf2Matrix.from_lists([[e(i, j), minors[j - 1][i - 1]], [e(j, i), minors[i - 1][j - 1]]])

    def b(i, j):
        return Gf2Matrix.from_lists([[minors[i - 1][j - 1], minors[j - 1][i - 1]], [e(j, i), e(i, j)]])

    if not delta:
        logger.debug(f"matrix {encode_matrix(a)} has delta = 0; model flagged invalid")
    return VertexModel(
        a=a, minors=minors, delta=delta,
        g13=g(1, 3), g12=g(1, 2), g23=g(2, 3), g21=g(2, 1), g32=g(3, 2), g31=g(3, 1),
        b13=b(1, 3) if delta else None,
        b12=b(1, 2) if delta else None,
    )


@lru_cache(maxsize=1024)
def model_from_encoding(text: str) -> VertexModel:
    return build_model(decode_matrix(text))


def transpose_model(model: VertexModel) -> VertexModel:
    return build_model(model.a.transpose())


@dataclass(frozen=True)
class SpectralData:
    e_space: Subspace
    e_space_t: Subspace

    @property
    def d(self):
        return self.e_space.dim

    @property
    def d_t(self):
        return self.e_space_t.dim


def spectral_data(model: VertexModel) -> SpectralData:
    return SpectralData(e_space=fixed_space(model.a), e_space_t=fixed_space(model.a.transpose()))


@dataclass(frozen=True)
class VertexDistribution:
    """
    Single-vertex distribution under the cyclic condition x.A = x:
    p uniform on the eigenspace, q the marginal of the first coordinate and
    (Q0, Q1) its two-point Fourier transform.
    """
    p: Dict[Tuple[int, int, int], DyadicProbability]
    q0: DyadicProbability
    q1: DyadicProbability
    Q0: Fraction
    Q1: Fraction
    transposed: bool = False

    def __hash__(self):
        return hash((self.q0, self.q1, self.Q0, self.Q1, self.transposed))


def _triples():
    return [(x1, x2, x3) for x1 in (0, 1) for x2 in (0, 1) for x3 in (0, 1)]


def vertex_distribution(model: VertexModel, transposed: bool = False) -> VertexDistribution:
    model.require_valid()
    matrix = model.a.transpose() if transposed else model.a
    space = fixed_space(matrix)
    weight = DyadicProbability.power_of_half(space.dim)
    zero = DyadicProbability(0, 0)
    p = {}
    for x in _triples():
        p[x] = weight if Gf2Vector.from_list(x) in space else zero
    q0 = sum((p[x].to_fraction() for x in p if x[0] == 0), Fraction(0))
    q1 = sum((p[x].to_fraction() for x in p if x[0] == 1), Fraction(0))
    return VertexDistribution(
        p=p,
        q0=DyadicProbability.from_fraction(q0),
        q1=DyadicProbability.from_fraction(q1),
        Q0=q0 + q1,
        Q1=q0 - q1,
        transposed=transposed,
    )


@lru_cache(maxsize=1024)
def fourier_values(model: VertexModel) -> Tuple[Fraction, Fraction]:
    """(Q(1), Q'(1)): the only Fourier values a nonzero dual entry can pick up."""
    return vertex_distribution(model, False).Q1, vertex_distribution(model, True).Q1


def conjugate_by_h(a: Gf2Matrix) -> Gf2Matrix:
    if a.shape != (3, 3):
        raise ShapeError(f"vertex matrices are 3x3, got {a.shape}")
    return mat_mul(mat_mul(H, a), H)


def _unique_eigenvector(space: Subspace) -> Optional[Gf2Vector]:
    # "exactly one row eigenvector" means a one-dimensional eigenspace
    if space.dim != 1:
        return None
    return space.basis[0]


@lru_cache(maxsize=1024)
def classify(a: Gf2Matrix) -> MatrixClass:
    model = build_model(a)
    if not model.valid:
        return MatrixClass.DELTA_ZERO
    spectra = spectral_data(model)
    v = _unique_eigenvector(spectra.e_space)
    v_t = _unique_eigenvector(spectra.e_space_t)
    if v is None or v_t is None or v[0] != 1:
        return MatrixClass.OTHER
    return MatrixClass.TWELVE if v_t[0] == 0 else MatrixClass.TWENTY_SIX


def all_encodings() -> List[str]:
    """All 512 encodings in lexicographic order of the 9-bit code."""
    return [format(code, "09b") for code in range(512)]


def enumerate_matrices(class_filter: Optional[MatrixClass] = None) -> List[Gf2Matrix]:
    matrices = [decode_matrix(text) for text in all_encodings()]
    if class_filter is None:
        return matrices
    return [a for a in matrices if classify(a) is class_filter]


def class_partition() -> Dict[MatrixClass, int]:
    counts = {tag: 0 for tag in MatrixClass}
    for a in enumerate_matrices():
        counts[classify(a)] += 1
    return counts
