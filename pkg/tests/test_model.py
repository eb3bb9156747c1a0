from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from utils.dyadic import DyadicProbability
from utils.errors import EncodingError, InvalidModelError
from utils.gf2 import mat_mul
from utils.model import (TWELVE_CLASS_GENERATORS, MatrixClass, b_matrix, build_model, class_partition, classify,
                         conjugate_by_h, decode_matrix, encode_matrix, fourier_values, model_from_encoding,
                         spectral_data, transpose_model, vertex_distribution)

encodings = st.integers(0, 511).map(lambda code: format(code, "09b"))


def test_decode_example():
    a = decode_matrix("011001101")
    assert a.to_lists() == [[0, 1, 1], [0, 0, 1], [1, 0, 1]]
    assert encode_matrix(a) == "011001101"


@pytest.mark.parametrize("text", ["01100110", "0110011010", "01100110x", ""])
def test_decode_rejects_malformed(text):
    with pytest.raises(EncodingError):
        decode_matrix(text)


def test_example_model(example_model):
    assert example_model.valid
    assert example_model.delta == 1
    assert example_model.g13.to_lists() == [[1, 1], [1, 0]]
    assert example_model.g12.to_lists() == [[1, 1], [0, 1]]
    assert example_model.minor(3, 1) == 1 and example_model.minor(1, 3) == 0
    assert example_model.minor(2, 3) == 1


def test_example_spectra(example_model):
    spectra = spectral_data(example_model)
    assert (spectra.d, spectra.d_t) == (1, 1)
    assert spectra.e_space.basis[0].to_list() == [1, 1, 1]
    assert spectra.e_space_t.basis[0].to_list() == [0, 1, 1]


def test_example_vertex_distribution(example_model):
    dist = vertex_distribution(example_model)
    assert dist.q0 == DyadicProbability.power_of_half(1)
    assert (dist.Q0, dist.Q1) == (1, 0)
    assert dist.p[(1, 1, 1)] == DyadicProbability.power_of_half(1)
    assert dist.p[(1, 0, 0)] == DyadicProbability(0, 0)

    dist_t = vertex_distribution(example_model, transposed=True)
    assert dist_t.q0 == DyadicProbability(1, 0)
    assert (dist_t.Q0, dist_t.Q1) == (1, 1)
    assert fourier_values(example_model) == (Fraction(0), Fraction(1))


@given(encodings)
def test_b_inverts_every_g(text):
    model = model_from_encoding(text)
    if not model.valid:
        assert model.b13 is None and model.b12 is None
        return
    for i, j in [(1, 3), (1, 2), (2, 3), (2, 1), (3, 2), (3, 1)]:
        assert mat_mul(model.g(i, j), b_matrix(model, i, j)).is_identity()


@given(encodings)
def test_distributions_are_normalized(text):
    model = model_from_encoding(text)
    if not model.valid:
        return
    for transposed in (False, True):
        dist = vertex_distribution(model, transposed)
        assert sum(p.to_fraction() for p in dist.p.values()) == 1
        assert dist.Q0 == 1


def test_invalid_model_is_kept_but_flagged():
    model = build_model(decode_matrix("000000000"))
    assert not model.valid
    assert classify(model.a) is MatrixClass.DELTA_ZERO
    with pytest.raises(InvalidModelError):
        model.require_valid()
    with pytest.raises(InvalidModelError):
        vertex_distribution(model)


def test_transpose_model(example_model):
    assert transpose_model(example_model).a == example_model.a.transpose()


def test_class_partition_sizes():
    counts = class_partition()
    assert counts[MatrixClass.TWELVE] == 12
    assert counts[MatrixClass.TWENTY_SIX] == 26
    assert sum(counts.values()) == 512


def test_twelve_class_is_generators_and_conjugates(twelve_encodings):
    expected = set(TWELVE_CLASS_GENERATORS)
    expected |= {encode_matrix(conjugate_by_h(decode_matrix(t))) for t in TWELVE_CLASS_GENERATORS}
    assert set(twelve_encodings) == expected


@given(encodings)
def test_class_is_invariant_under_h(text):
    a = decode_matrix(text)
    assert classify(conjugate_by_h(a)) is classify(a)


def test_twenty_six_class_has_vanishing_fourier_values(twenty_six_encodings):
    for text in twenty_six_encodings:
        assert fourier_values(model_from_encoding(text)) == (0, 0)


@pytest.mark.parametrize("tag, expected", [
    ("TwelveClass", MatrixClass.TWELVE),
    ("twentysixclass", MatrixClass.TWENTY_SIX),
    ("OTHER", MatrixClass.OTHER),
    ("DELTA_ZERO", MatrixClass.DELTA_ZERO),
])
def test_class_tags(tag, expected):
    assert MatrixClass.from_tag(tag) is expected


def test_unknown_class_tag():
    with pytest.raises(EncodingError):
        MatrixClass.from_tag("ThirteenClass")
