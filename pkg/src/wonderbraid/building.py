"""Sum-closure, irreducible subspaces, nested sets and the A/D label codecs.

The combinatorial core of the boundary of the minimal compactification:
starting from the dual lines of a central essential arrangement, compute

* the closure C of the lines under subspace sum,
* the finest direct-sum decomposition of each member of C and hence the
  minimal building set F of irreducible members,
* the nested subsets of F (every antichain of size >= 2 must have its sum
  outside F), which index the boundary strata, and
* for types A and D, the bijections between F and set labels (subsets of
  {1..n} for type A; signed "weighted" subsets, plus 0-marked strong
  subsets, for type D) together with the label-level nestedness rules.

Irreducibility of U is decided two ways.  The generic route searches
bipartitions of the dual lines inside U for a direct-sum split; for line
closures this is exactly the decomposition condition, because every member
of C contained in U is itself a span of lines and therefore splits along
any such bipartition.  The reflection-group route declares U irreducible
when the roots inside U form a connected non-orthogonality graph.  For
small ranks the two routes are cross-checked against each other at
construction time.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from wonderbraid.errors import CapExceededError, CodecError
from wonderbraid.exact import Subspace
from wonderbraid.reflection import Arrangement, ReflectionGroupData

Q = Fraction

CLOSURE_CAP = 4096
BIPARTITION_LINES_CAP = 18
NESTED_FAMILY_CAP = 64


# ---------------------------------------------------------------------------
# Closure under sum.
# ---------------------------------------------------------------------------

def closure_under_sum(arrangement: Arrangement, cap: int = CLOSURE_CAP) -> tuple[Subspace, ...]:
    """All distinct sums of the dual lines of the arrangement, lines included.

    Breadth-first: repeatedly add line + known-subspace sums until stable.
    Raises CapExceededError (naming the cap) if the closure would exceed it.
    """
    if not arrangement.essential:
        raise ValueError("closure requires a central essential arrangement")
    lines = sorted(set(arrangement.dual_lines()), key=Subspace.sort_key)
    known = set(lines)
    frontier = list(lines)
    while frontier:
        nxt = []
        for u in frontier:
            for line in lines:
                s = u.sum(line)
                if s not in known:
                    if len(known) >= cap:
                        raise CapExceededError("closure_size", cap, len(known) + 1)
                    known.add(s)
                    nxt.append(s)
        frontier = nxt
    return tuple(sorted(known, key=Subspace.sort_key))


# ---------------------------------------------------------------------------
# Building sets.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BuildingSet:
    """The minimal building set of an arrangement: the irreducible members of C.

    `elements` are the irreducibles in canonical order (dimension, then
    lexicographic basis); `closure` is all of C with per-member
    `irreducible_flags`; `lines` are the generating dual lines.
    """

    ambient: int
    elements: tuple[Subspace, ...]
    closure: tuple[Subspace, ...]
    irreducible_flags: tuple[bool, ...]
    lines: tuple[Subspace, ...]

    def index_of(self, s: Subspace) -> int:
        try:
            return _element_index(self)[s]
        except KeyError:
            raise CodecError(f"subspace is not a member of the building set: {s!r}")

    def __contains__(self, s: Subspace) -> bool:
        return s in _element_index(self)

    @property
    def rank(self) -> int:
        return max((e.dim for e in self.elements), default=0)


@lru_cache(maxsize=None)
def _element_index(building: BuildingSet) -> dict[Subspace, int]:
    return {e: i for i, e in enumerate(building.elements)}


@lru_cache(maxsize=None)
def _closure_set(building: BuildingSet) -> frozenset[Subspace]:
    return frozenset(building.closure)


def _lines_within(u: Subspace, lines: Sequence[Subspace]) -> list[Subspace]:
    return [l for l in lines if l <= u]


class _Echelon:
    """Incremental row reduction used by the bipartition search."""

    def __init__(self):
        self.rows: list[tuple] = []

    def rank(self) -> int:
        return len(self.rows)

    def insert(self, vec) -> bool:
        """Reduce vec against the rows; add it if independent."""
        v = list(vec)
        for row in self.rows:
            c = next(i for i, x in enumerate(row) if x)
            if v[c]:
                f = v[c]
                v = [a - f * b for a, b in zip(v, row)]
        if not any(v):
            return False
        lead = next(i for i, x in enumerate(v) if x)
        inv = v[lead]
        self.rows.append(tuple(x / inv for x in v))
        return True

    def snapshot(self):
        return list(self.rows)

    def restore(self, snap):
        self.rows = snap


def _find_split(u: Subspace, lines_in_u: Sequence[Subspace]) -> Optional[tuple[list[int], list[int]]]:
    """Search bipartitions of the lines inside u for a direct-sum split of u.

    Depth-first over assignments of each line to one of two parts, keeping
    incremental echelon forms of both parts and pruning as soon as the two
    ranks can no longer add up to dim(u).  The first line is pinned to part
    one, which kills the swap symmetry.  Returns index lists or None.
    """
    k = len(lines_in_u)
    if k < 2:
        return None
    if k > BIPARTITION_LINES_CAP:
        raise CapExceededError("bipartition_lines", BIPARTITION_LINES_CAP, k)
    target = u.dim
    vecs = [l.rows[0] for l in lines_in_u]
    part1, part2 = [0], []
    e1, e2 = _Echelon(), _Echelon()
    e1.insert(vecs[0])

    def helper(i: int) -> bool:
        if e1.rank() + e2.rank() > target:
            return False
        if i == k:
            return bool(part2) and e1.rank() + e2.rank() == target
        for part, ech in ((part1, e1), (part2, e2)):
            snap = ech.snapshot()
            part.append(i)
            ech.insert(vecs[i])
            if helper(i + 1):
                return True
            part.pop()
            ech.restore(snap)
        return False

    if helper(1):
        return part1, part2
    return None


@lru_cache(maxsize=None)
def _decompose_cached(ambient: int, u: Subspace, lines: tuple[Subspace, ...]) -> tuple[Subspace, ...]:
    inside = _lines_within(u, lines)
    split = _find_split(u, inside)
    if split is None:
        return (u,)
    parts = []
    for idxs in split:
        sub = Subspace.from_vectors(ambient, [inside[i].rows[0] for i in idxs])
        parts.extend(_decompose_cached(ambient, sub, lines))
    return tuple(sorted(parts, key=Subspace.sort_key))


def decompose(u: Subspace, building: BuildingSet) -> tuple[Subspace, ...]:
    """The finest direct-sum decomposition of u in C, as building-set members.

    Returns a singleton exactly when u is irreducible.  Raises ValueError
    when u is not a member of the closure.
    """
    if u not in _closure_set(building):
        raise ValueError("subspace is not a member of the closure")
    return _decompose_cached(building.ambient, u, building.lines)


def is_irreducible(u: Subspace, building: BuildingSet) -> bool:
    return len(decompose(u, building)) == 1


def _root_components(data: ReflectionGroupData, u: Subspace) -> list[list[tuple]]:
    """Connected components of the non-orthogonality graph on the roots inside u."""
    roots = list(data.roots_in(u))
    n = len(roots)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            if data.pairing(roots[i], roots[j]):
                parent[find(i)] = find(j)
    comps: dict[int, list[tuple]] = {}
    for i, r in enumerate(roots):
        comps.setdefault(find(i), []).append(r)
    return list(comps.values())


def root_route_decompose(data: ReflectionGroupData, u: Subspace) -> tuple[Subspace, ...]:
    """Decomposition of u via the spans of its irreducible root subsystems."""
    parts = [Subspace.from_vectors(data.rank, comp) for comp in _root_components(data, u)]
    return tuple(sorted(parts, key=Subspace.sort_key))


def minimal_building_set(
    arrangement: Arrangement,
    group_data: Optional[ReflectionGroupData] = None,
    closure_cap: int = CLOSURE_CAP,
    cross_check_rank: int = 4,
) -> BuildingSet:
    """The irreducible members of the closure, plus the closure itself.

    With group data the fast root-subsystem route decides irreducibility;
    for ranks up to `cross_check_rank` its verdict (and the decomposition
    parts) are checked against the generic bipartition route.
    """
    closure = closure_under_sum(arrangement, cap=closure_cap)
    lines = tuple(sorted(set(arrangement.dual_lines()), key=Subspace.sort_key))
    building = BuildingSet(
        ambient=arrangement.dim,
        elements=(),
        closure=closure,
        irreducible_flags=(),
        lines=lines,
    )
    flags = []
    for u in closure:
        if group_data is not None:
            parts = root_route_decompose(group_data, u)
            if arrangement.dim <= cross_check_rank:
                assert parts == _decompose_cached(arrangement.dim, u, lines), (
                    "root-subsystem and bipartition decompositions disagree"
                )
            flags.append(len(parts) == 1)
        else:
            flags.append(len(_decompose_cached(arrangement.dim, u, lines)) == 1)
    elements = tuple(u for u, f in zip(closure, flags) if f)
    return BuildingSet(
        ambient=arrangement.dim,
        elements=elements,
        closure=closure,
        irreducible_flags=tuple(flags),
        lines=lines,
    )


# ---------------------------------------------------------------------------
# Nested sets.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NestedSet:
    """A nested subset of a building set, held as sorted element indices."""

    members: tuple[int, ...]

    def subspaces(self, building: BuildingSet) -> tuple[Subspace, ...]:
        return tuple(building.elements[i] for i in self.members)

    def __len__(self) -> int:
        return len(self.members)


@lru_cache(maxsize=None)
def _sum_of(building: BuildingSet, idxs: frozenset) -> Subspace:
    idx = sorted(idxs)
    if len(idx) == 1:
        return building.elements[idx[0]]
    rest = _sum_of(building, frozenset(idx[:-1]))
    return rest.sum(building.elements[idx[-1]])


@lru_cache(maxsize=None)
def _comparable(building: BuildingSet, i: int, j: int) -> bool:
    a, b = building.elements[i], building.elements[j]
    return a <= b or b <= a


def _antichains(building: BuildingSet, idxs: Sequence[int]):
    """All pairwise-incomparable subsets of size >= 2, smallest first."""
    for size in range(2, len(idxs) + 1):
        for combo in itertools.combinations(idxs, size):
            if all(
                not _comparable(building, a, b)
                for a, b in itertools.combinations(combo, 2)
            ):
                yield combo


def is_nested_indices(building: BuildingSet, idxs: Sequence[int]) -> bool:
    elements = _element_index(building)
    for combo in _antichains(building, tuple(sorted(set(idxs)))):
        if _sum_of(building, frozenset(combo)) in elements:
            return False
    return True


def is_nested(subspaces: Iterable[Subspace], building: BuildingSet) -> bool:
    """Whether every antichain of size >= 2 has its sum outside the building set.

    Raises CodecError when a member does not belong to the building set.
    """
    idxs = [building.index_of(s) for s in subspaces]
    return is_nested_indices(building, idxs)


def enumerate_nested_sets(
    building: BuildingSet,
    max_cardinality: Optional[int] = None,
    family_cap: int = NESTED_FAMILY_CAP,
) -> tuple[NestedSet, ...]:
    """Every nested set (the empty one included), in canonical order.

    Depth-first extension in canonical element order; a candidate is only
    tested against the antichains its new element creates, which the
    cached sum table makes cheap.
    """
    n = len(building.elements)
    if n > family_cap:
        raise CapExceededError("building_set_size", family_cap, n)
    bound = n if max_cardinality is None else min(max_cardinality, n)
    out = [NestedSet(())]

    def extend(current: tuple[int, ...], start: int):
        if len(current) >= bound:
            return
        for j in range(start, n):
            cand = current + (j,)
            if is_nested_indices(building, cand):
                out.append(NestedSet(cand))
                extend(cand, j + 1)

    extend((), 0)
    out.sort(key=lambda s: (len(s.members), s.members))
    return tuple(out)


def maximal_nested_sets(building: BuildingSet) -> tuple[NestedSet, ...]:
    """The nested sets not extendable by any single building-set element."""
    all_nested = enumerate_nested_sets(building)
    out = []
    n = len(building.elements)
    for ns in all_nested:
        members = set(ns.members)
        extendable = any(
            j not in members and is_nested_indices(building, ns.members + (j,))
            for j in range(n)
        )
        if not extendable:
            out.append(ns)
    return tuple(out)


# ---------------------------------------------------------------------------
# Type A codec: subsets of {1..n} with at least two elements.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SnLabel:
    """A building-set element of type A_{n-1}, as the subset of {1..n} it merges."""

    indices: tuple[int, ...]

    def __post_init__(self):
        if len(self.indices) < 2 or list(self.indices) != sorted(set(self.indices)):
            raise CodecError(f"invalid type-A label {self.indices}")


@lru_cache(maxsize=None)
def _a_type_root_pairs(data: ReflectionGroupData) -> dict[tuple, tuple[int, int]]:
    """positive root (essential coords) -> the pair {i < j} of merged coordinates."""
    if data.type_label != "A":
        raise CodecError("the subset codec needs a type A group")
    n = data.rank + 1
    pairs = {}
    for r in data.positive_roots:
        ambient = tuple(r) + (-sum(r),)
        plus = [i for i, x in enumerate(ambient) if x == 1]
        minus = [i for i, x in enumerate(ambient) if x == -1]
        assert len(plus) == 1 and len(minus) == 1
        pairs[r] = (plus[0] + 1, minus[0] + 1)
    assert len(pairs) == n * (n - 1) // 2
    return pairs


def sn_label_of(subspace: Subspace, building: BuildingSet, data: ReflectionGroupData) -> SnLabel:
    building.index_of(subspace)  # membership check
    pairs = _a_type_root_pairs(data)
    merged: set[int] = set()
    for r, (i, j) in pairs.items():
        if subspace.contains_vector(r):
            merged.update((i, j))
    label = SnLabel(tuple(sorted(merged)))
    assert sn_subspace_of(label, data) == subspace
    return label


def sn_subspace_of(label: SnLabel, data: ReflectionGroupData) -> Subspace:
    pairs = _a_type_root_pairs(data)
    idx = set(label.indices)
    if max(idx) > data.rank + 1 or min(idx) < 1:
        raise CodecError(f"label {label.indices} out of range for n={data.rank + 1}")
    vecs = [r for r, (i, j) in pairs.items() if i in idx and j in idx]
    return Subspace.from_vectors(data.rank, vecs)


def sn_labels_nested(labels: Iterable[SnLabel]) -> bool:
    """Laminar-family test: any two label sets are disjoint or nested."""
    sets = [set(l.indices) for l in labels]
    for a, b in itertools.combinations(sets, 2):
        if a & b and not (a <= b or b <= a):
            return False
    return True


# ---------------------------------------------------------------------------
# Type D codec: strong subsets {0, i1..ik} and weighted weak subsets.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DnLabel:
    """A building-set element of type D_n as a (possibly weighted) subset.

    Strong labels carry the marker 0 and no weights: the subspace whose
    orthogonal is x_{i1} = ... = x_{ik} = 0 (k >= 3).  Weak labels carry a
    sign for every index after the first: the subspace whose orthogonal is
    x_{i1} = eps_2 x_{i2} = ... = eps_k x_{ik} (k >= 2).
    """

    strong: bool
    indices: tuple[int, ...]
    weights: tuple[int, ...]

    def __post_init__(self):
        if list(self.indices) != sorted(set(self.indices)) or min(self.indices, default=1) < 1:
            raise CodecError(f"invalid index set {self.indices}")
        if self.strong:
            if len(self.indices) < 3 or self.weights != ():
                raise CodecError("strong labels need >= 3 unweighted indices")
        else:
            if len(self.indices) < 2 or len(self.weights) != len(self.indices):
                raise CodecError("weak labels need a weight per index")
            if self.weights[0] != 1 or any(w not in (1, -1) for w in self.weights):
                raise CodecError("weights are +-1 with the first normalized to +1")

    def support(self) -> frozenset[int]:
        return frozenset(self.indices)

    def marker_set(self) -> frozenset[int]:
        """The label as a plain subset of {0, 1, .., n} (weights forgotten)."""
        return self.support() | ({0} if self.strong else frozenset())

    def __str__(self) -> str:
        if self.strong:
            return "{0," + ",".join(map(str, self.indices)) + "}"
        return "{" + ",".join(
            str(i) if w == 1 else f"-{i}" for i, w in zip(self.indices, self.weights)
        ) + "}"


def _require_d(data: ReflectionGroupData):
    if data.type_label != "D":
        raise CodecError("the weighted-subset codec needs a type D group")


def dn_label_of(subspace: Subspace, building: BuildingSet, data: ReflectionGroupData) -> DnLabel:
    _require_d(data)
    building.index_of(subspace)
    n = data.rank
    support = sorted(
        i + 1
        for i in range(n)
        if any(row[i] for row in subspace.rows)
    )
    k = len(support)
    if subspace.dim == k:
        label = DnLabel(True, tuple(support), ())
    elif subspace.dim == k - 1:
        base = support[0] - 1
        weights = [1]
        for i in support[1:]:
            minus = tuple(Q(1) if j == base else (Q(-1) if j == i - 1 else Q(0)) for j in range(n))
            plus = tuple(Q(1) if j == base else (Q(1) if j == i - 1 else Q(0)) for j in range(n))
            if subspace.contains_vector(minus):
                weights.append(1)
            elif subspace.contains_vector(plus):
                weights.append(-1)
            else:
                raise CodecError("subspace is not a weak subspace of type D")
        label = DnLabel(False, tuple(support), tuple(weights))
    else:
        raise CodecError("subspace dimension fits neither a strong nor a weak label")
    assert dn_subspace_of(label, data) == subspace
    return label


def dn_subspace_of(label: DnLabel, data: ReflectionGroupData) -> Subspace:
    _require_d(data)
    n = data.rank
    if max(label.indices) > n:
        raise CodecError(f"label {label} out of range for D_{n}")
    if label.strong:
        vecs = [tuple(Q(1) if j == i - 1 else Q(0) for j in range(n)) for i in label.indices]
        return Subspace.from_vectors(n, vecs)
    base = label.indices[0] - 1
    vecs = []
    for i, w in zip(label.indices[1:], label.weights[1:]):
        vecs.append(tuple(
            Q(1) if j == base else (Q(-w) if j == i - 1 else Q(0)) for j in range(n)
        ))
    return Subspace.from_vectors(n, vecs)


def _weak_inclusion_compatible(inner: DnLabel, outer: DnLabel) -> bool:
    """Weights of inner must match outer on the common indices, up to a global flip."""
    pos = {i: w for i, w in zip(outer.indices, outer.weights)}
    rel = [w * pos[i] for i, w in zip(inner.indices, inner.weights)]
    return all(r == rel[0] for r in rel)


def dn_labels_nested(labels: Sequence[DnLabel]) -> bool:
    """The label-level nestedness rules for type D.

    Subsets containing the marker 0 must be linearly ordered by inclusion;
    otherwise any two labels must be nested or disjoint as plain sets, with
    weight compatibility for nested weak pairs.  At most one "split pair"
    {i,j}, {i,-j} over the same two indices is allowed, and every other
    label must then avoid {i,j} entirely or be a strong label containing
    both i and j.
    """
    labels = list(labels)
    strongs = [l for l in labels if l.strong]
    for a, b in itertools.combinations(strongs, 2):
        if not (a.support() <= b.support() or b.support() <= a.support()):
            return False

    weaks = [l for l in labels if not l.strong]
    split_pairs = [
        (a, b)
        for a, b in itertools.combinations(weaks, 2)
        if len(a.indices) == 2 and a.indices == b.indices and a.weights != b.weights
    ]
    if len(split_pairs) > 1:
        return False
    special = set()
    if split_pairs:
        p, q = split_pairs[0]
        special = {p, q}
        ij = p.support()
        for other in labels:
            if other in special:
                continue
            overlap = other.support() & ij
            if overlap and not (other.strong and ij <= other.support()):
                return False

    for a, b in itertools.combinations(labels, 2):
        if {a, b} == special:
            continue
        sa, sb = a.marker_set(), b.marker_set()
        if sa & sb:
            if not (sa <= sb or sb <= sa):
                return False
            if not a.strong and not b.strong:
                inner, outer = (a, b) if sa <= sb else (b, a)
                if not _weak_inclusion_compatible(inner, outer):
                    return False
    return True
