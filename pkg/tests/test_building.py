import itertools
from fractions import Fraction

import pytest

from wonderbraid.building import (
    BuildingSet,
    DnLabel,
    SnLabel,
    closure_under_sum,
    decompose,
    dn_label_of,
    dn_labels_nested,
    dn_subspace_of,
    enumerate_nested_sets,
    is_nested,
    maximal_nested_sets,
    minimal_building_set,
    root_route_decompose,
    sn_label_of,
    sn_labels_nested,
    sn_subspace_of,
)
from wonderbraid.errors import CapExceededError, CodecError
from wonderbraid.exact import Subspace
from wonderbraid.reflection import build_reflection_arrangement, load_arrangement

Q = Fraction


def building_for(label, rank):
    arr, data = build_reflection_arrangement(label, rank)
    return minimal_building_set(arr, data), data


def double_factorial(k):
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


# --- closure ------------------------------------------------------------

def test_closure_boolean_rank2():
    arr = load_arrangement({"dim": 2, "normals": [["1", "0"], ["0", "1"]]})
    c = closure_under_sum(arr)
    assert len(c) == 3  # two lines and the plane
    assert Subspace.full(2) in c


def test_closure_matches_subset_span_oracle_a3():
    arr, _ = build_reflection_arrangement("A", 3)
    lines = arr.dual_lines()
    spans = set()
    for r in range(1, len(lines) + 1):
        for combo in itertools.combinations(lines, r):
            acc = combo[0]
            for s in combo[1:]:
                acc = acc.sum(s)
            spans.add(acc)
    assert set(closure_under_sum(arr)) == spans


def test_closure_g2_has_seven_members():
    arr, _ = build_reflection_arrangement("G2", 2)
    c = closure_under_sum(arr)
    assert len(c) == 7  # six root lines plus the whole plane


def test_closure_cap_is_reported():
    arr, _ = build_reflection_arrangement("A", 3)
    with pytest.raises(CapExceededError) as exc:
        closure_under_sum(arr, cap=3)
    assert "closure_size" in str(exc.value)


# --- decompositions and building sets ------------------------------------

def test_lines_are_irreducible():
    building, _ = building_for("A", 3)
    for line in building.lines:
        assert decompose(line, building) == (line,)


def test_decompose_disjoint_support_pair_in_a3():
    building, data = building_for("A", 3)
    r_12 = data.positive_roots[3]  # (1,-1,0) <-> x1 - x2
    r_34 = data.positive_roots[0]  # (0,0,1)  <-> x3 - x4 in ambient terms
    u = Subspace.from_vectors(3, [r_12, r_34])
    parts = decompose(u, building)
    assert len(parts) == 2
    assert set(parts) == {
        Subspace.from_vectors(3, [r_12]),
        Subspace.from_vectors(3, [r_34]),
    }


def test_decompose_rejects_non_members():
    building, _ = building_for("A", 3)
    stray = Subspace.from_vectors(3, [(1, 1, 1)])
    with pytest.raises(ValueError):
        decompose(stray, building)


def test_g2_full_space_irreducible():
    building, data = building_for("G2", 2)
    v = Subspace.full(2)
    assert decompose(v, building) == (v,)
    assert len(building.elements) == 7


@pytest.mark.parametrize("n", [3, 4, 5])
def test_sn_building_set_count(n):
    building, _ = building_for("A", n - 1)
    assert len(building.elements) == 2 ** n - n - 1


def test_d4_routes_agree_and_count():
    arr, data = build_reflection_arrangement("D", 4)
    generic = minimal_building_set(arr)  # bipartition route only
    fast = minimal_building_set(arr, data)  # root route, cross-checked
    assert generic.elements == fast.elements
    strong = sum(1 for k in (3, 4) for _ in itertools.combinations(range(4), k))
    weak = sum(
        len(list(itertools.combinations(range(4), k))) * 2 ** (k - 1)
        for k in (2, 3, 4)
    )
    assert len(fast.elements) == strong + weak == 41


def test_root_route_decompose_parts():
    _, data = building_for("A", 3)
    r_12 = data.positive_roots[3]
    r_34 = data.positive_roots[0]
    u = Subspace.from_vectors(3, [r_12, r_34])
    assert len(root_route_decompose(data, u)) == 2


def test_unique_factorization_small_ranks():
    for label, rank in [("A", 2), ("A", 3), ("G2", 2)]:
        building, data = building_for(label, rank)
        for u in building.closure:
            parts = decompose(u, building)
            assert all(p in building for p in parts)
            total = parts[0]
            for p in parts[1:]:
                total = total.sum(p)
            assert total == u
            assert sum(p.dim for p in parts) == u.dim


# --- nested sets ----------------------------------------------------------

def test_singletons_are_nested():
    building, _ = building_for("G2", 2)
    for e in building.elements:
        assert is_nested([e], building)


def test_pair_with_sum_in_f_is_not_nested():
    building, data = building_for("A", 2)
    l1 = Subspace.from_vectors(2, [data.positive_roots[0]])
    l2 = Subspace.from_vectors(2, [data.positive_roots[1]])
    assert not is_nested([l1, l2], building)  # their sum is the plane, which is irreducible


def test_g2_v_plus_root_line_is_nested():
    building, data = building_for("G2", 2)
    v = Subspace.full(2)
    line = Subspace.from_vectors(2, [data.positive_roots[0]])
    assert is_nested([v, line], building)


def test_is_nested_rejects_strangers():
    building, _ = building_for("A", 2)
    with pytest.raises(CodecError):
        is_nested([Subspace.from_vectors(2, [(1, 1)])], building)


def test_subsets_of_nested_are_nested():
    building, _ = building_for("A", 3)
    for ns in enumerate_nested_sets(building):
        for k in range(len(ns.members)):
            sub = ns.members[:k] + ns.members[k + 1:]
            from wonderbraid.building import is_nested_indices

            assert is_nested_indices(building, sub)


@pytest.mark.parametrize(
    "label,rank,expected_max",
    [("A", 2, 3), ("A", 3, 15), ("G2", 2, 6)],
)
def test_maximal_nested_set_counts(label, rank, expected_max):
    building, _ = building_for(label, rank)
    maxima = maximal_nested_sets(building)
    assert len(maxima) == expected_max
    if label == "A":
        n = rank + 1
        assert expected_max == double_factorial(2 * n - 3)
    for ns in maxima:
        assert len(ns.members) == rank


def test_g2_maximal_sets_are_v_plus_line():
    building, _ = building_for("G2", 2)
    v = Subspace.full(2)
    for ns in maximal_nested_sets(building):
        subs = ns.subspaces(building)
        assert len(subs) == 2
        assert v in subs
        assert min(s.dim for s in subs) == 1


def test_enumerate_respects_max_cardinality():
    building, _ = building_for("A", 3)
    sets = enumerate_nested_sets(building, max_cardinality=1)
    assert all(len(s) <= 1 for s in sets)
    assert len(sets) == 1 + len(building.elements)


def test_enumerate_cap():
    building, _ = building_for("A", 3)
    with pytest.raises(CapExceededError):
        enumerate_nested_sets(building, family_cap=5)


# --- type A codec ----------------------------------------------------------

def test_sn_codec_round_trip_s4():
    building, data = building_for("A", 3)
    seen = set()
    for e in building.elements:
        label = sn_label_of(e, building, data)
        seen.add(label.indices)
        assert sn_subspace_of(label, data) == e
    assert seen == {
        t
        for k in (2, 3, 4)
        for t in itertools.combinations(range(1, 5), k)
    }


def test_sn_label_pair_is_root_line():
    building, data = building_for("A", 3)
    label = SnLabel((1, 2))
    s = sn_subspace_of(label, data)
    assert s.dim == 1
    assert sn_label_of(s, building, data) == label


def test_sn_label_nestedness_matches_subspaces():
    building, data = building_for("A", 2)
    labels = {e: sn_label_of(e, building, data) for e in building.elements}
    a = next(e for e, l in labels.items() if l.indices == (1, 2))
    b = next(e for e, l in labels.items() if l.indices == (1, 3))
    assert not sn_labels_nested([labels[a], labels[b]])
    assert not is_nested([a, b], building)


# --- type D codec ----------------------------------------------------------

def test_dn_strong_label_round_trip():
    building, data = building_for("D", 4)
    label = DnLabel(True, (1, 2, 3), ())
    s = dn_subspace_of(label, data)
    assert s.dim == 3
    # orthogonal of the strong subspace is x1 = x2 = x3 = 0
    perp = s.perp(data.gram)
    assert perp == Subspace.from_vectors(4, [(0, 0, 0, 1)])
    assert dn_label_of(s, building, data) == label


def test_dn_weak_labels_distinguish_signs():
    building, data = building_for("D", 4)
    plus = dn_subspace_of(DnLabel(False, (1, 2), (1, 1)), data)
    minus = dn_subspace_of(DnLabel(False, (1, 2), (1, -1)), data)
    assert plus != minus
    assert dn_label_of(plus, building, data).weights == (1, 1)
    assert dn_label_of(minus, building, data).weights == (1, -1)


def test_dn_codec_round_trip_all_elements():
    building, data = building_for("D", 4)
    for e in building.elements:
        label = dn_label_of(e, building, data)
        assert dn_subspace_of(label, data) == e


def test_dn_label_rules_small_cases():
    # strong sets must be linearly ordered
    s123 = DnLabel(True, (1, 2, 3), ())
    s124 = DnLabel(True, (1, 2, 4), ())
    assert not dn_labels_nested([s123, s124])

    # the split pair {1,2}, {1,-2} is allowed once
    w12 = DnLabel(False, (1, 2), (1, 1))
    w12m = DnLabel(False, (1, 2), (1, -1))
    assert dn_labels_nested([w12, w12m])

    # a strong label through both 1 and 2 is compatible with the pair
    s1234 = DnLabel(True, (1, 2, 3, 4), ())
    assert dn_labels_nested([w12, w12m, s1234])
    # but one through only one of them is not
    s134 = DnLabel(True, (1, 3, 4), ())
    assert not dn_labels_nested([w12, w12m, s134])

    # weight compatibility for nested weak labels
    w123 = DnLabel(False, (1, 2, 3), (1, 1, 1))
    assert dn_labels_nested([w12, w123])
    assert not dn_labels_nested([w12m, w123])
    # {2,-3} sits inside {1,-2,3} after a global flip
    w1m23 = DnLabel(False, (1, 2, 3), (1, -1, 1))
    w2m3 = DnLabel(False, (2, 3), (1, -1))
    assert dn_labels_nested([w2m3, w1m23])


@pytest.mark.parametrize("size", [2, 3])
def test_dn_label_rules_match_subspace_predicate_sampled(size):
    building, data = building_for("D", 4)
    labels = [dn_label_of(e, building, data) for e in building.elements]
    import random

    rng = random.Random(414)
    combos = list(itertools.combinations(range(len(labels)), size))
    rng.shuffle(combos)
    for combo in combos[:400]:
        subs = [building.elements[i] for i in combo]
        expect = is_nested(subs, building)
        got = dn_labels_nested([labels[i] for i in combo])
        assert got == expect, [str(labels[i]) for i in combo]
