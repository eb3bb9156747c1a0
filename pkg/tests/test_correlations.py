import itertools

import pytest
from hypothesis import given, settings, strategies as st

from utils.block import EdgeAddress
from utils.correlations import (CorrelationQuery, correlation_table, half_period_squares, is_half_period_square,
                                k_spin_probability, lemma_k_check, lemma_m_check, probabilities_by_k,
                                scan_quadruples, square_witness_check, stratified_quadruples, tensor_column,
                                theorem_predictor)
from utils.dyadic import DyadicProbability
from utils.errors import QueryError
from utils.model import EXAMPLE_ENCODING, MatrixClass, model_from_encoding
from utils.oracle import oracle_probability

SQUARE_N2 = [(0, 0), (2, 0), (0, 2), (2, 2)]
CLUSTER_N2 = [(0, 0), (0, 1), (1, 0), (1, 1)]


def half(k):
    return DyadicProbability.power_of_half(k)


def test_query_validation():
    with pytest.raises(QueryError):
        CorrelationQuery.from_pairs(1, [(0, 0), (0, 0)])
    with pytest.raises(QueryError):
        CorrelationQuery.from_pairs(1, [(2, 0)])
    with pytest.raises(QueryError):
        CorrelationQuery.from_pairs(1, [])
    with pytest.raises(QueryError):
        CorrelationQuery(1, (EdgeAddress(2, (0, 0)),))


def test_query_indices_and_shift():
    q = CorrelationQuery.from_indices(2, [0, 5, 15])
    assert q.pairs == [(0, 0), (1, 1), (3, 3)]
    assert q.face_indices() == [0, 5, 15]
    assert q.shifted(1, 2).pairs == [(1, 2), (2, 3), (0, 1)]


@pytest.mark.parametrize("k, expected", [(1, half(1)), (2, half(2)), (3, half(3)), (4, half(3))])
def test_level_one_probabilities(example_model, k, expected):
    # at n = 1 the four face edges form the only half-period square
    for subset in itertools.combinations(range(4), k):
        assert k_spin_probability(example_model, CorrelationQuery.from_indices(1, subset)) == expected


def test_level_two_square_and_cluster(example_model):
    square = CorrelationQuery.from_pairs(2, SQUARE_N2)
    cluster = CorrelationQuery.from_pairs(2, CLUSTER_N2)
    assert k_spin_probability(example_model, square) == half(3)
    assert k_spin_probability(example_model, cluster) == half(4)
    assert oracle_probability(example_model, square) == half(3)
    assert oracle_probability(example_model, cluster) == half(4)


def test_square_probability_is_translation_invariant(example_model):
    square = CorrelationQuery.from_pairs(2, SQUARE_N2)
    for d2, d3 in itertools.product(range(4), repeat=2):
        assert k_spin_probability(example_model, square.shifted(d2, d3)) == half(3)


def test_twenty_six_class_is_fully_independent(twenty_six_model):
    square = CorrelationQuery.from_pairs(2, SQUARE_N2)
    assert k_spin_probability(twenty_six_model, square) == half(4)
    assert theorem_predictor(square, MatrixClass.TWENTY_SIX) == half(4)


def test_half_period_squares():
    assert is_half_period_square(CorrelationQuery.from_pairs(2, SQUARE_N2).edges, 2)
    assert not is_half_period_square(CorrelationQuery.from_pairs(2, CLUSTER_N2).edges, 2)
    shifted = CorrelationQuery.from_pairs(2, [(1, 3), (3, 3), (1, 1), (3, 1)])
    assert is_half_period_square(shifted.edges, 2)
    for n in (1, 2, 3):
        assert len(half_period_squares(n)) == 4 ** (n - 1)
    with pytest.raises(QueryError):
        is_half_period_square(CorrelationQuery.from_pairs(2, SQUARE_N2[:3]).edges, 2)


def test_predictor():
    assert theorem_predictor(CorrelationQuery.from_pairs(2, SQUARE_N2)) == half(3)
    assert theorem_predictor(CorrelationQuery.from_pairs(2, CLUSTER_N2)) == half(4)
    assert theorem_predictor(CorrelationQuery.from_pairs(2, [(0, 0), (3, 1)])) == half(2)
    with pytest.raises(QueryError):
        theorem_predictor(CorrelationQuery.from_indices(2, range(5)))


def test_five_spin_query_still_evaluates(example_model, caplog):
    q = CorrelationQuery.from_indices(2, range(5))
    assert not q.in_verified_scope
    p = k_spin_probability(example_model, q)
    assert p == oracle_probability(example_model, q)
    assert "outside the verified scope" in caplog.text


def test_stratified_quadruples_are_deterministic():
    first = stratified_quadruples(3, 20, seed=7)
    assert first == stratified_quadruples(3, 20, seed=7)
    assert len(first) == 20 + len(half_period_squares(3))
    assert set(half_period_squares(3)) <= set(first)
    # more samples than there are quadruples: everything is taken
    assert len(stratified_quadruples(1, 10)) == 1


@pytest.mark.parametrize("n", [1, 2])
def test_exhaustive_quadruple_scan(example_model, n):
    report = scan_quadruples(example_model, n)
    assert report.passed
    assert not report.exploratory
    assert report.details["squares"] == len(half_period_squares(n))


def test_quadruple_scan_cap(example_model):
    with pytest.raises(QueryError):
        scan_quadruples(example_model, 4, max_n=3)


@pytest.mark.slow
def test_parallel_scan_keeps_order(example_model):
    quadruples = stratified_quadruples(3, 30, seed=1)
    serial = scan_quadruples(example_model, 3, quadruples, jobs=1)
    parallel = scan_quadruples(example_model, 3, quadruples, jobs=2)
    assert serial.to_dict() == parallel.to_dict()


def test_tensor_column():
    # a set choice bit contributes (1,1)^T, a clear one (1,0)^T
    assert tensor_column(0b01, 2) == 0b0011
    assert tensor_column(0b00, 2) == 0b0001
    assert tensor_column(0b11, 2) == 0b1111


@pytest.mark.parametrize("n", [1, 2, 3])
def test_zero_sum_columns_pair_up(n):
    report = lemma_m_check(n)
    assert report.passed
    assert report.checked == 16 ** n


def test_zero_sum_columns_sampled():
    assert lemma_m_check(5, trials=500, seed=3).passed


@pytest.mark.parametrize("n", [1, 2, 3])
def test_lemma_k_and_square_witness(twelve_encodings, n):
    for text in twelve_encodings:
        model = model_from_encoding(text)
        assert lemma_k_check(model, n).passed, text
        assert square_witness_check(model, n).passed, text


def test_correlation_table(example_model):
    table = correlation_table(example_model, 1)
    assert len(table) == 4 + 6 + 4 + 1
    assert table[((0, 0), (0, 1), (1, 0), (1, 1))] == half(3)
    assert probabilities_by_k(table) == {1: {"1/2^1": 4}, 2: {"1/2^2": 6}, 3: {"1/2^3": 4}, 4: {"1/2^3": 1}}
    with pytest.raises(QueryError):
        correlation_table(example_model, 1, k_max=5)


@st.composite
def queries(draw, max_n=3):
    n = draw(st.integers(1, max_n))
    face = 1 << (2 * n)
    subset = draw(st.lists(st.integers(0, face - 1), min_size=1, max_size=min(4, face), unique=True))
    return CorrelationQuery.from_indices(n, subset)


@settings(deadline=None, max_examples=40)
@given(queries())
def test_dropping_an_edge_never_lowers_the_probability(q):
    model = model_from_encoding(EXAMPLE_ENCODING)
    p = k_spin_probability(model, q)
    for index in q.face_indices():
        rest = [r for r in q.face_indices() if r != index]
        if rest:
            assert k_spin_probability(model, CorrelationQuery.from_indices(q.n, rest)) >= p


@settings(deadline=None, max_examples=40)
@given(queries(), st.data())
def test_random_shifts_keep_probabilities(q, data):
    model = model_from_encoding(EXAMPLE_ENCODING)
    size = 1 << q.n
    d2, d3 = data.draw(st.integers(0, size - 1)), data.draw(st.integers(0, size - 1))
    shifted = q.shifted(d2, d3)
    assert k_spin_probability(model, shifted) == k_spin_probability(model, q)
    assert oracle_probability(model, shifted) == oracle_probability(model, q)


@pytest.mark.slow
def test_quadruples_are_monotone_and_shift_invariant_at_level_two(example_model):
    for quad in itertools.combinations(range(16), 4):
        q = CorrelationQuery.from_indices(2, quad)
        p = oracle_probability(example_model, q)
        assert oracle_probability(example_model, q.shifted(1, 3)) == p
        for triple in itertools.combinations(quad, 3):
            assert k_spin_probability(example_model, CorrelationQuery.from_indices(2, triple)) >= p
