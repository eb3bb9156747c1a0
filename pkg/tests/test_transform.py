import pytest

from utils.block import EdgeAddress
from utils.errors import QueryError, ShapeError
from utils.gf2 import kron, kron_all, mat_mul
from utils.evaluation import verified_encodings
from utils.model import model_from_encoding, transpose_model
from utils.transform import (AddressClass, GhostAddress, address_class, address_grid_text, anchor_digits, anchor_edge,
                             build_transform, child_addresses, class_counts, closed_form_counts, i_dual_column,
                             stepwise_product, t_dual, v_bases_2x2x2)


def test_level_one_transform(example_model):
    t = build_transform(example_model, 1)
    assert t.g == kron(example_model.g13, example_model.g12)
    assert t.stepwise_verified
    assert mat_mul(t.g, t.b).is_identity()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_stepwise_matches_kronecker_form(example_model, n):
    expected = kron_all([example_model.g13] * n + [example_model.g12] * n)
    assert stepwise_product(example_model, n) == expected
    assert build_transform(example_model, n).size == 1 << (2 * n)


def test_transform_inverse_for_twelve_class(twelve_encodings):
    for text in twelve_encodings:
        t = build_transform(model_from_encoding(text), 2)
        assert mat_mul(t.b, t.g).is_identity(), text


def test_transform_level_must_be_positive(example_model):
    with pytest.raises(ShapeError):
        build_transform(example_model, 0)


@pytest.mark.parametrize("n, counts", [(1, (3, 1)), (2, (10, 6)), (3, (36, 28))])
def test_class_counts(n, counts):
    assert class_counts(n) == counts
    assert closed_form_counts(n) == counts


@pytest.mark.parametrize("n", range(1, 7))
def test_counts_follow_closed_form(n):
    assert class_counts(n) == closed_form_counts(n)


def test_address_grid_level_one():
    assert address_grid_text(1) == "..\n.#"
    assert address_class(GhostAddress(1, 1), 1) is AddressClass.AT
    assert address_class(GhostAddress(0, 1), 1) is AddressClass.A


@pytest.mark.parametrize("n", [1, 2, 3])
def test_children_keep_three_of_the_parent_class(n):
    for alpha in range(1 << n):
        for beta in range(1 << n):
            parent = GhostAddress(alpha, beta)
            children = [address_class(c, n + 1) for c in child_addresses(parent, n)]
            assert children.count(address_class(parent, n)) == 3


def test_ghost_index_round_trip():
    addr = GhostAddress(2, 3)
    assert addr.index(2) == 11
    assert GhostAddress.from_index(11, 2) == addr
    assert addr.binary(2) == ("10", "11")
    with pytest.raises(ShapeError):
        GhostAddress(4, 0).index(2)


def test_i_dual_needs_axis_one():
    assert i_dual_column(EdgeAddress(1, (1, 0)), 1).support() == [2]
    with pytest.raises(QueryError):
        i_dual_column(EdgeAddress(2, (0, 0)), 1)


def test_example_anchor(example_model):
    assert anchor_digits(example_model) == (1, 0)
    assert anchor_edge(example_model, 2) == EdgeAddress(1, (3, 0))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_anchor_edge_dual_is_a_single_unity_at_the_origin(twelve_encodings, n):
    for text in twelve_encodings:
        model = model_from_encoding(text)
        t = build_transform(model, n)
        w = t_dual(t, i_dual_column(anchor_edge(model, n), n))
        assert w.support() == [GhostAddress(0, 0).index(n)], text


def test_example_kron_rows(example_model):
    assert kron(example_model.g13, example_model.g12).to_lists() == [
        [1, 1, 1, 1],
        [0, 1, 0, 1],
        [1, 1, 0, 0],
        [0, 1, 0, 0],
    ]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_transpose_reflects_ghost_addresses(n):
    # (alpha, beta) -> (2^n - 1 - alpha, 2^n - 1 - beta) reverses the row order
    reflected = list(reversed(range(1 << (2 * n))))
    for text in verified_encodings():
        model = model_from_encoding(text)
        g = build_transform(model, n).g
        assert build_transform(transpose_model(model), n).g == g.permute_rows(reflected), text


def test_transpose_reverses_face_one_basis():
    for text in verified_encodings():
        model = model_from_encoding(text)
        v1 = v_bases_2x2x2(model)[0]
        assert v_bases_2x2x2(transpose_model(model))[0] == v1.permute_rows([3, 2, 1, 0]), text
