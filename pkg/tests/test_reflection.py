import random
from fractions import Fraction
from math import factorial

import pytest

from wonderbraid.errors import CapExceededError, UnsupportedTypeError
from wonderbraid.exact import Subspace, identity_matrix, mat_mul
from wonderbraid.reflection import (
    Arrangement,
    build_reflection_arrangement,
    build_reflection_group,
    enumerate_group,
    group_center,
    load_arrangement,
    orbit_on_subspaces,
    parabolic_subgroup,
    stabilizer_of_subspace,
)

Q = Fraction

ALL_SMALL = [("A", 2), ("A", 3), ("A", 4), ("B", 2), ("B", 3), ("B", 4), ("D", 4), ("G2", 2)]


def test_hyperplane_counts():
    arr, _ = build_reflection_arrangement("A", 3)
    assert arr.dim == 3 and len(arr.hyperplanes) == 6
    arr, _ = build_reflection_arrangement("D", 4)
    assert arr.dim == 4 and len(arr.hyperplanes) == 12
    arr, _ = build_reflection_arrangement("G2", 2)
    # 12 roots in +- pairs give 6 hyperplanes
    assert arr.dim == 2 and len(arr.hyperplanes) == 6


def test_unsupported_types_error():
    with pytest.raises(UnsupportedTypeError):
        build_reflection_arrangement("E", 8)
    with pytest.raises(UnsupportedTypeError):
        build_reflection_arrangement("A", 8)
    with pytest.raises(UnsupportedTypeError):
        build_reflection_arrangement("D", 3)


@pytest.mark.parametrize("label,rank", ALL_SMALL)
def test_generators_are_reflections(label, rank):
    data = build_reflection_group(label, rank)
    ident = identity_matrix(data.rank)
    hyper_flats = [
        Subspace.from_vectors(data.rank, [tuple(map(Q, h.normal))]).annihilator()
        for h in build_reflection_arrangement(label, rank)[0].hyperplanes
    ]
    for g in data.generators:
        assert mat_mul(g.matrix, g.matrix) == ident
        fixed = Subspace.from_vectors(
            data.rank,
            [row for row in _fixed_space_rows(g, data.rank)],
        )
        assert any(fixed == h for h in hyper_flats)


def _fixed_space_rows(g, n):
    from wonderbraid.exact import kernel_basis

    shifted = tuple(
        tuple(g.matrix[i][j] - (1 if i == j else 0) for j in range(n)) for i in range(n)
    )
    return kernel_basis(shifted)


@pytest.mark.parametrize("label,rank", ALL_SMALL)
def test_root_set_stable_under_group(label, rank):
    data = build_reflection_group(label, rank)
    roots = set(data.all_roots)
    for g in enumerate_group(data):
        assert {g.apply(r) for r in roots} == roots


@pytest.mark.parametrize(
    "label,rank,expected",
    [("A", 2, 6), ("G2", 2, 12), ("D", 4, 192)],
)
def test_enumerate_group_orders(label, rank, expected):
    data = build_reflection_group(label, rank)
    elems = enumerate_group(data)
    assert len(elems) == expected
    if label == "A":
        assert expected == factorial(rank + 1)


@pytest.mark.parametrize("label,rank", ALL_SMALL)
def test_degrees_product_is_group_order(label, rank):
    data = build_reflection_group(label, rank)
    prod = 1
    for d in data.degrees:
        prod *= d
    assert prod == len(enumerate_group(data)) == data.group_order


def test_enumerate_group_cap():
    data = build_reflection_group("A", 3)
    with pytest.raises(CapExceededError):
        enumerate_group(data, cap=10)


def test_stabilizer_trivial_cases():
    data = build_reflection_group("A", 3)
    whole = Subspace.full(3)
    assert len(stabilizer_of_subspace(data, whole, "pointwise")) == 1
    origin = Subspace.zero(3)
    assert len(stabilizer_of_subspace(data, origin, "pointwise")) == data.group_order


def test_parabolic_order_in_a3():
    # span of the first two simple roots: W_A is the S3 inside S4
    data = build_reflection_group("A", 3)
    a = Subspace.from_vectors(3, [data.simple_roots[0], data.simple_roots[1]])
    para = parabolic_subgroup(data, a)
    assert len(para) == 6


def test_orbits():
    data = build_reflection_group("A", 3)
    line = Subspace.from_vectors(3, [data.simple_roots[0]])
    assert len(orbit_on_subspaces(data, line)) == 6

    fixed = Subspace.full(3)
    assert len(orbit_on_subspaces(data, fixed)) == 1

    g2 = build_reflection_group("G2", 2)
    long_roots = [r for r in g2.positive_roots if g2.pairing(r, r) == 6]
    assert len(long_roots) == 3
    line = Subspace.from_vectors(2, [long_roots[0]])
    assert len(orbit_on_subspaces(g2, line)) == 3


def test_group_center_orders():
    assert len(group_center(build_reflection_group("A", 2))) == 1
    assert len(group_center(build_reflection_group("B", 2))) == 2
    assert len(group_center(build_reflection_group("D", 4))) == 2
    assert len(group_center(build_reflection_group("G2", 2))) == 2


def test_load_arrangement_boolean():
    arr = load_arrangement({"dim": 2, "normals": [["1", "0"], ["0", "1"]]})
    assert arr.essential and len(arr.hyperplanes) == 2


def test_load_arrangement_dedupes_scaled_normals():
    arr = load_arrangement({"dim": 2, "normals": [["1", "0"], ["2", "0"]]})
    assert len(arr.hyperplanes) == 1
    assert arr.hyperplanes[0].normal == (1, 0)


def test_load_arrangement_matches_built_a3():
    built, _ = build_reflection_arrangement("A", 3)
    doc = built.to_json()
    again = load_arrangement(doc)
    assert set(again.hyperplanes) == set(built.hyperplanes)
    assert again.dim == built.dim


def test_load_arrangement_rejects_garbage():
    with pytest.raises(ValueError):
        load_arrangement({"dim": 2, "normals": [["1", "0", "0"]]})
    with pytest.raises(ValueError):
        load_arrangement({"dim": 2, "normals": [["one", "0"]]})


def test_essentialize_quotients_common_intersection():
    # three hyperplanes in Q^3 all containing the z-axis
    doc = {"dim": 3, "normals": [["1", "0", "0"], ["0", "1", "0"], ["1", "1", "0"]]}
    arr = load_arrangement(doc)
    assert not arr.essential
    ess = load_arrangement(doc, essentialize=True)
    assert ess.essential and ess.dim == 2 and len(ess.hyperplanes) == 3


def test_essentialized_gram_matches_a_type():
    # A3 gram in the echelon basis of the sum-zero space: 2 on the diagonal, 1 off
    data = build_reflection_group("A", 3)
    expect = tuple(
        tuple(Q(2) if i == j else Q(1) for j in range(3)) for i in range(3)
    )
    assert data.gram == expect


def test_dual_lines_are_root_spans():
    arr, data = build_reflection_arrangement("G2", 2)
    lines = set(arr.dual_lines())
    root_lines = {Subspace.from_vectors(2, [r]) for r in data.positive_roots}
    assert lines == root_lines
