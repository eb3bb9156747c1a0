# oracle.py
#
# Ground truth that does not go through the spin transform: with cyclic
# boundary conditions a configuration is permitted exactly when its inputs
# equal its outputs, so the permitted set is the fixed space of the block
# operator and every probability is a ratio of two powers of two.

import itertools
import logging
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from utils.block import FACE_AXES, DEFAULT_MAX_N, EdgeAddress, build_block, input_index
from utils.correlations import CorrelationQuery
from utils.dyadic import DyadicProbability
from utils.errors import CapExceededError
from utils.gf2 import Gf2Vector, Subspace, fixed_space, row_action, subspace_intersection_dim
from utils.model import VertexModel, spectral_data, vertex_distribution
from utils.reporting import CheckReport
from utils.transform import AddressClass, GhostAddress, address_class, build_transform, class_counts

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_MAX_INPUTS = 24
INDEPENDENCE_MAX_N = 2


@lru_cache(maxsize=128)
def permitted_space(model: VertexModel, n: int, max_n: int = DEFAULT_MAX_N) -> Subspace:
    model.require_valid()
    space = fixed_space(build_block(model, n, max_n=max_n).m)
    logger.debug(f"{model.encoding} at n = {n}: {space.dim}-dimensional permitted space")
    return space


def probability_of_zeros(model: VertexModel, n: int, indices: Iterable[int],
                         max_n: int = DEFAULT_MAX_N) -> DyadicProbability:
    """Share of permitted configurations with a 0 at every listed input coordinate."""
    space = permitted_space(model, n, max_n)
    return DyadicProbability.power_of_half(space.dim - subspace_intersection_dim(space, list(indices)))


def oracle_probability(model: VertexModel, q: CorrelationQuery, max_n: int = DEFAULT_MAX_N) -> DyadicProbability:
    return probability_of_zeros(model, q.n, [input_index(e, q.n) for e in q.edges], max_n)


def predicted_permitted_dim(model: VertexModel, n: int) -> int:
    """Each ghost address contributes dim E(A) or dim E(A^T)."""
    spectra = spectral_data(model.require_valid())
    if n == 0:
        return spectra.d
    count_a, count_at = class_counts(n)
    return count_a * spectra.d + count_at * spectra.d_t


def propagate_assignment(model: VertexModel, n: int, inputs: int) -> int:
    """
    Outputs of the block for one packed input assignment, evaluated vertex by
    vertex with an explicit table of edge values.
    """
    model.require_valid()
    size = 1 << n
    leaving = {}
    outputs = 0
    for vertex in itertools.product(range(size), repeat=3):
        incoming = []
        for axis in (1, 2, 3):
            if vertex[axis - 1] == 0:
                coords = tuple(vertex[a - 1] for a in FACE_AXES[axis])
                incoming.append((inputs >> input_index(EdgeAddress(axis, coords), n)) & 1)
            else:
                before = list(vertex)
                before[axis - 1] -= 1
                incoming.append(leaving[axis, tuple(before)])
        out = row_action(Gf2Vector.from_list(incoming), model.a)
        for axis in (1, 2, 3):
            leaving[axis, vertex] = out[axis - 1]
            if vertex[axis - 1] == size - 1:
                coords = tuple(vertex[a - 1] for a in FACE_AXES[axis])
                outputs |= out[axis - 1] << input_index(EdgeAddress(axis, coords), n)
    return outputs


def enumerate_check(model: VertexModel, n: int, max_inputs: int = DEFAULT_ENUMERATION_MAX_INPUTS) -> CheckReport:
    """
    Brute force over every input assignment: the assignments equal to their
    own outputs must be exactly the permitted space, and every face-1 query
    with k <= 4 must have the oracle probability.
    """
    model.require_valid()
    total_inputs = 3 * (1 << (2 * n))
    if total_inputs > max_inputs:
        raise CapExceededError(f"enumeration over {total_inputs} inputs exceeds the cap {max_inputs}")
    permitted = [x for x in range(1 << total_inputs) if propagate_assignment(model, n, x) == x]
    space = permitted_space(model, n)
    report = CheckReport(name="enumeration", subject=f"{model.encoding} n={n}")

    report.count()
    if set(permitted) != {v.bits for v in space.members()}:
        report.fail({"enumerated": len(permitted), "permitted_space": 1 << space.dim})

    face = 1 << (2 * n)
    for k in range(1, min(4, face) + 1):
        for subset in itertools.combinations(range(face), k):
            report.count()
            mask = sum(1 << r for r in subset)
            zeros = sum(1 for x in permitted if not x & mask)
            counted = DyadicProbability.from_fraction(Fraction(zeros, len(permitted)))
            expected = oracle_probability(model, CorrelationQuery.from_indices(n, subset))
            if counted != expected:
                report.fail({"edges": list(subset), "counted": counted, "oracle": expected})
    report.details = {"assignments": 1 << total_inputs, "permitted": len(permitted)}
    return report


def t_spin_histogram(model: VertexModel, n: int) -> Counter:
    """Counts of the face-1 t-spin rows x = y.B over all permitted configurations y."""
    space = permitted_space(model, n)
    b = build_transform(model, n).b
    face = 1 << (2 * n)
    mask = (1 << face) - 1
    counts = Counter()
    for y in space.members():
        counts[row_action(Gf2Vector(face, y.bits & mask), b).bits] += 1
    return counts


def t_spin_independence_check(model: VertexModel, n: int = 1, perturb: bool = False,
                              max_n: int = INDEPENDENCE_MAX_N) -> CheckReport:
    """
    The joint distribution of the face-1 t-spins is the product of its
    marginals, and each marginal is (q0, q1) or (q'0, q'1) by address class.
    With perturb, extra mass is placed on a configuration differing from a
    likely one in two t-spins, which must break the factorization.
    """
    model.require_valid()
    if not 1 <= n <= max_n:
        raise CapExceededError(f"t-spin tabulation supports 1 <= n <= {max_n}, got {n}")
    width = 1 << (2 * n)
    counts = t_spin_histogram(model, n)
    if perturb:
        likely = min(counts, key=lambda x: (-counts[x], x))
        counts[likely ^ 0b11] += sum(counts.values())
    total = sum(counts.values())

    zero_counts = [sum(c for x, c in counts.items() if not (x >> j) & 1) for j in range(width)]
    report = CheckReport(name="independence", subject=f"{model.encoding} n={n}" + (" perturbed" if perturb else ""))

    marginals = {AddressClass.A: vertex_distribution(model, False), AddressClass.AT: vertex_distribution(model, True)}
    for j in range(width):
        report.count()
        belongs = address_class(GhostAddress.from_index(j, n), n)
        expected = marginals[belongs].q0.to_fraction()
        if expected * total != zero_counts[j]:
            report.fail({"t_spin": j, "class": belongs.value, "zero_count": zero_counts[j], "total": total})

    scale = total ** (width - 1)
    for x in range(1 << width):
        report.count()
        product = 1
        for j in range(width):
            product *= total - zero_counts[j] if (x >> j) & 1 else zero_counts[j]
            if not product:
                break
        if counts.get(x, 0) * scale != product:
            report.fail({"t_row": x, "joint_count": counts.get(x, 0), "total": total})
    report.details = {"configurations": total, "support": len(counts)}
    return report
