# correlations.py
#
# k-spin correlation functions on axis-1 edges, computed from the Fourier
# values of the independent t-spins, together with the closed-form predictor
# for four spins and the lemma-level checks behind it.

import itertools
import logging
import math
from dataclasses import dataclass
from functools import lru_cache, partial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from utils.block import EdgeAddress
from utils.dyadic import DyadicProbability
from utils.errors import QueryError
from utils.fourier import product_eval, subset_sums, subspace_sum
from utils.gf2 import Gf2Vector, col_action
from utils.model import MatrixClass, VertexModel, classify, model_from_encoding
from utils.reporting import CheckReport
from utils.transform import (AddressClass, GhostAddress, address_class, anchor_digits, anchor_edge,
                             build_transform, i_dual_column, repeat_digit, t_dual)
from utils.workers import WorkerMap

logger = logging.getLogger(__name__)

__all__ = [
    "CorrelationQuery", "DyadicProbability", "k_spin_probability", "theorem_predictor",
    "is_half_period_square", "scan_quadruples", "lemma_m_check", "lemma_k_check",
    "square_witness_check", "stratified_quadruples", "correlation_table",
]

VERIFIED_MAX_K = 4


@dataclass(frozen=True)
class CorrelationQuery:
    """Probability that the i-spins on `edges` (all on face 1) are all 0."""
    n: int
    edges: Tuple[EdgeAddress, ...]

    def __post_init__(self):
        if self.n < 0:
            raise QueryError(f"level must be non-negative, got {self.n}")
        if not self.edges:
            raise QueryError("a correlation query needs at least one edge")
        for edge in self.edges:
            if edge.axis != 1:
                raise QueryError(f"edge {edge} is not parallel to axis 1")
            try:
                edge.validate(self.n)
            except ValueError as err:
                raise QueryError(str(err)) from err
        if len(set(self.edges)) != len(self.edges):
            raise QueryError(f"duplicate edges in {[str(e) for e in self.edges]}")

    @classmethod
    def from_pairs(cls, n, pairs: Iterable[Tuple[int, int]]):
        return cls(n, tuple(EdgeAddress(1, (int(b2), int(b3))) for b2, b3 in pairs))

    @classmethod
    def from_indices(cls, n, indices: Iterable[int]):
        mask = (1 << n) - 1
        return cls.from_pairs(n, [(r >> n, r & mask) for r in indices])

    @property
    def k(self):
        return len(self.edges)

    @property
    def in_verified_scope(self):
        return self.k <= VERIFIED_MAX_K

    @property
    def pairs(self):
        return [e.coords for e in self.edges]

    def face_indices(self):
        return [(b2 << self.n) | b3 for b2, b3 in self.pairs]

    def shifted(self, d2, d3):
        """Common cyclic translation of every edge."""
        size = 1 << self.n
        return CorrelationQuery.from_pairs(self.n, [((b2 + d2) % size, (b3 + d3) % size) for b2, b3 in self.pairs])


@lru_cache(maxsize=64)
def _face_duals(model: VertexModel, n: int) -> Tuple[int, ...]:
    """Packed t-dual G.z for every weight-1 i-dual z on face 1, i.e. the columns of G."""
    return tuple(row for row in build_transform(model, n).g.transpose().data)


def k_spin_probability(model: VertexModel, q: CorrelationQuery) -> DyadicProbability:
    model.require_valid()
    if not q.in_verified_scope:
        logger.warning(f"{q.k}-spin query is outside the verified scope (k <= {VERIFIED_MAX_K})")
    duals = _face_duals(model, q.n)
    length = 1 << (2 * q.n)
    ws = [duals[r] for r in q.face_indices()]
    values = [product_eval(model, q.n, Gf2Vector(length, w)) for w in subset_sums(ws)]
    return DyadicProbability.from_fraction(subspace_sum(values, q.k))


def is_half_period_square(edges: Sequence[EdgeAddress], n: int) -> bool:
    if len(edges) != 4 or len(set(edges)) != 4:
        raise QueryError(f"a square needs 4 distinct edges, got {len(edges)}")
    if any(e.axis != 1 for e in edges):
        raise QueryError("square detection works on axis-1 edges only")
    if n < 1:
        raise QueryError("half-period squares need n >= 1")
    size, half = 1 << n, 1 << (n - 1)
    points = {e.coords for e in edges}
    for x2, x3 in points:
        corners = {((x2 + d2) % size, (x3 + d3) % size) for d2 in (0, half) for d3 in (0, half)}
        if corners == points:
            return True
    return False


def theorem_predictor(q: CorrelationQuery, matrix_class: MatrixClass = MatrixClass.TWELVE) -> DyadicProbability:
    """
    1/8 for four spins on a half-period square, 1/2^k otherwise. Matrices of the
    twenty-six class have fully independent spins, so squares are not special.
    """
    if q.k > VERIFIED_MAX_K:
        raise QueryError(f"no closed-form prediction for k = {q.k}")
    if matrix_class is not MatrixClass.TWENTY_SIX and q.k == 4 and q.n >= 1 and is_half_period_square(q.edges, q.n):
        return DyadicProbability.power_of_half(3)
    return DyadicProbability.power_of_half(q.k)


def half_period_squares(n: int) -> List[Tuple[int, ...]]:
    """Every half-period square once, as sorted face indices."""
    size, half = 1 << n, 1 << (n - 1)
    squares = []
    for x2 in range(half):
        for x3 in range(half):
            corners = [(((x2 + d2) % size) << n) | ((x3 + d3) % size) for d2 in (0, half) for d3 in (0, half)]
            squares.append(tuple(sorted(corners)))
    return sorted(squares)


def stratified_quadruples(n: int, sample_size: int, seed: int = 0) -> List[Tuple[int, ...]]:
    """All half-period squares plus `sample_size` distinct other quadruples drawn uniformly."""
    face = 1 << (2 * n)
    squares = set(half_period_squares(n))
    chosen = set()
    if sample_size >= math.comb(face, 4) - len(squares):
        chosen = {quad for quad in itertools.combinations(range(face), 4) if quad not in squares}
    else:
        rng = np.random.default_rng(seed)
        while len(chosen) < sample_size:
            quad = tuple(sorted(int(r) for r in rng.choice(face, size=4, replace=False)))
            if quad not in squares:
                chosen.add(quad)
    return sorted(squares | chosen)


def _quadruple_row(encoding: str, n: int, quad: Tuple[int, ...]):
    model = model_from_encoding(encoding)
    q = CorrelationQuery.from_indices(n, quad)
    engine = k_spin_probability(model, q)
    predicted = theorem_predictor(q, classify(model.a))
    return {
        "n": n,
        "matrix": encoding,
        "edges": q.pairs,
        "square": is_half_period_square(q.edges, n),
        "engine": engine,
        "predictor": predicted,
        "match": engine == predicted,
    }


def scan_quadruples(model: VertexModel, n: int, quadruples: Optional[Sequence[Tuple[int, ...]]] = None,
                    jobs: int = 1, max_n: int = 3) -> CheckReport:
    """
    Evaluate 4-spin probabilities (every 4-subset of face 1 unless given) and
    compare with the predictor. Rows come back in quadruple order for any jobs.
    """
    model.require_valid()
    if quadruples is None:
        if n > max_n:
            raise QueryError(f"exhaustive quadruple scan at n = {n} exceeds the cap {max_n}")
        quadruples = list(itertools.combinations(range(1 << (2 * n)), 4))
    matrix_class = classify(model.a)
    report = CheckReport(name="theorem", subject=f"{model.encoding} n={n}",
                         exploratory=matrix_class not in (MatrixClass.TWELVE, MatrixClass.TWENTY_SIX))

    with WorkerMap(jobs) as mapper:
        rows = list(mapper(partial(_quadruple_row, model.encoding, n), quadruples))
    for row in rows:
        report.count()
        if not row["match"]:
            report.fail(row)

    df = pd.DataFrame({"square": [r["square"] for r in rows], "engine": [str(r["engine"]) for r in rows]})
    summary = df.groupby(["square", "engine"]).size()
    report.details = {
        "class": matrix_class.value,
        "quadruples": len(rows),
        "squares": int(df["square"].sum()),
        "distribution": {f"{'square' if sq else 'other'} {p}": int(c) for (sq, p), c in summary.items()},
    }
    if report.exploratory and not report.passed:
        logger.warning(f"{model.encoding} ({matrix_class.value}) departs from the four-spin prediction "
                       f"on {report.failed} quadruples (exploratory)")
    return report


def tensor_column(choice: int, n: int) -> int:
    """
    Tensor product of n 2-columns, (1,1)^T where bit t of choice is set and
    (1,0)^T elsewhere: the indicator of the addresses r with r & ~choice == 0.
    """
    bits = 0
    for r in range(1 << n):
        if r & ~choice == 0:
            bits |= 1 << r
    return bits


def lemma_m_check(n: int, trials: int = 10000, seed: int = 0, exhaustive_max_n: int = 3) -> CheckReport:
    """Four tensor-product columns summing to zero always split into two equal pairs."""
    if n < 1:
        raise QueryError("lemma check needs n >= 1")
    columns = [tensor_column(c, n) for c in range(1 << n)]
    if n <= exhaustive_max_n:
        quadruples = itertools.product(range(1 << n), repeat=4)
    else:
        rng = np.random.default_rng(seed)
        quadruples = (tuple(int(c) for c in rng.integers(0, 1 << n, size=4)) for _ in range(trials))
    report = CheckReport(name="lemma_m", subject=f"n={n}")
    summing = 0
    for quad in quadruples:
        report.count()
        a, b, c, d = (columns[i] for i in quad)
        if a ^ b ^ c ^ d:
            continue
        summing += 1
        s = sorted((a, b, c, d))
        if not (s[0] == s[1] and s[2] == s[3]):
            report.fail({"choices": list(quad)})
    report.details = {"zero_sum_quadruples": summing}
    return report


def lemma_k_check(model: VertexModel, n: int) -> CheckReport:
    """
    For every admissible edge (chi2, chi3) other than the exceptional one, its
    t-dual has a unity at some (alpha, beta) with alpha, beta != 0 and
    alpha + beta < 2^n.
    """
    model.require_valid()
    c2, c3 = anchor_digits(model)
    size, top = 1 << n, n - 1
    xi = (((1 - c2) << top) | (repeat_digit(c2, n) & ~(1 << top) & (size - 1)),
          ((1 - c3) << top) | (repeat_digit(c3, n) & ~(1 << top) & (size - 1)))
    t = build_transform(model, n)
    report = CheckReport(name="lemma_k", subject=f"{model.encoding} n={n}",
                         exploratory=classify(model.a) is not MatrixClass.TWELVE)
    for chi2 in range(size):
        if chi2 == repeat_digit(c2, n):
            continue
        for chi3 in range(size):
            if chi3 == repeat_digit(c3, n) or (chi2, chi3) == xi:
                continue
            report.count()
            w = t_dual(t, i_dual_column(EdgeAddress(1, (chi2, chi3)), n))
            unities = [GhostAddress.from_index(r, n) for r in w.support()]
            if not any(u.alpha and u.beta and u.alpha + u.beta < size for u in unities):
                report.fail({"chi": [chi2, chi3], "unities": [[u.alpha, u.beta] for u in unities]})
    report.details = {"anchor_digits": [c2, c3], "excluded": list(xi)}
    return report


def square_witness_check(model: VertexModel, n: int) -> CheckReport:
    """
    The half-period square at the anchor edge: the sum a of its four i-duals
    has t-dual b = G.a with a single unity at (10..0, 10..0), an A^T address,
    and B.b = a.
    """
    model.require_valid()
    if n < 1:
        raise QueryError("square witness needs n >= 1")
    size, half = 1 << n, 1 << (n - 1)
    x2, x3 = anchor_edge(model, n).coords
    a = Gf2Vector.zeros(size * size)
    for d2 in (0, half):
        for d3 in (0, half):
            a = a + i_dual_column(EdgeAddress(1, ((x2 + d2) % size, (x3 + d3) % size)), n)
    t = build_transform(model, n)
    b = t_dual(t, a)
    witness = GhostAddress(half, half)
    report = CheckReport(name="square_witness", subject=f"{model.encoding} n={n}")
    report.count(3)
    if b.support() != [witness.index(n)]:
        report.fail({"t_dual_support": [list(GhostAddress.from_index(r, n).binary(n)) for r in b.support()]})
    if address_class(witness, n) is not AddressClass.AT:
        report.fail({"witness_class": address_class(witness, n).value})
    if col_action(t.b, b) != a:
        report.fail({"inverse": "B.b differs from a"})
    return report


def correlation_table(model: VertexModel, n: int, k_max: int = VERIFIED_MAX_K) -> Dict[Tuple, DyadicProbability]:
    """Probabilities of every edge subset of size 1..k_max, keyed by the sorted (b2, b3) pairs."""
    if not 1 <= k_max <= VERIFIED_MAX_K:
        raise QueryError(f"k_max must be in 1..{VERIFIED_MAX_K}, got {k_max}")
    table = {}
    for k in range(1, k_max + 1):
        for subset in itertools.combinations(range(1 << (2 * n)), k):
            q = CorrelationQuery.from_indices(n, subset)
            table[tuple(q.pairs)] = k_spin_probability(model, q)
    return table


def probabilities_by_k(table: Dict[Tuple, object]) -> Dict[int, Dict[str, int]]:
    """How often each probability value (or its text form) occurs, per subset size."""
    counts = {}
    for key, p in table.items():
        bucket = counts.setdefault(len(key), {})
        bucket[str(p)] = bucket.get(str(p), 0) + 1
    return counts
