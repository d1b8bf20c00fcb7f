"""Reflection arrangements and their Coxeter groups over exact rationals.

Supported types are A (rank <= 7), B (2 <= rank <= 6), D (4 <= rank <= 6)
and G2; every one of these admits an all-rational root realization.  Types
A and G2 are first built in their natural ambient space (Q^{n} for A_{n-1}
on the sum-zero subspace, Q^3 for G2) and then *essentialized*: vectors are
re-expressed in the reduced-row-echelon basis of the root span, and the
standard inner product becomes an explicit Gram matrix in the new
coordinates.  Types B and D are already essential, with identity Gram.

A hyperplane is stored by the primitive integer normal of its defining
functional {x : n . x = 0}; the dual line used by the building-set
machinery is span(G^-1 n), which for built arrangements is exactly the
span of the corresponding root in essential coordinates.

Groups are handled exhaustively: elements are exact orthogonal matrices,
enumeration is closure of the generators under multiplication, and orbit
and stabilizer computations scan the full element list.  Outputs are
canonically sorted, so results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Literal, Sequence

from wonderbraid.errors import CapExceededError, UnsupportedTypeError
from wonderbraid.exact import (
    Subspace,
    dot,
    fraction_from_str,
    fraction_to_str,
    identity_matrix,
    mat_inverse,
    mat_mul,
    mat_vec,
    matrix_order,
    primitive_integer_vector,
    rref,
)

Q = Fraction

GROUP_ORDER_CAP = 100_000

RANK_RANGE = {"A": (1, 7), "B": (2, 6), "D": (4, 6), "G2": (2, 2)}


# ---------------------------------------------------------------------------
# Core value types.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Hyperplane:
    """A central hyperplane {x : normal . x = 0}, normal primitive-integer scaled."""

    normal: tuple[int, ...]

    @staticmethod
    def from_vector(v: Sequence[Fraction]) -> "Hyperplane":
        return Hyperplane(primitive_integer_vector(v))

    @property
    def ambient(self) -> int:
        return len(self.normal)


@dataclass(frozen=True)
class Arrangement:
    """A finite set of central hyperplanes with the pairing of its coordinates.

    `gram` is the symmetric matrix of the inner product in the current
    coordinates (identity unless the arrangement was essentialized out of a
    bigger space).  The dual line of a hyperplane, span(gram^-1 normal), is
    what the closure/building-set machinery consumes.
    """

    dim: int
    hyperplanes: tuple[Hyperplane, ...]
    essential: bool
    gram: tuple[tuple[Fraction, ...], ...]

    @staticmethod
    def build(dim: int, normals: Iterable[Sequence[Fraction]], gram=None) -> "Arrangement":
        plain = sorted({Hyperplane.from_vector(n) for n in normals}, key=lambda h: h.normal)
        for h in plain:
            if h.ambient != dim:
                raise ValueError("hyperplane dimension mismatch")
        gram = tuple(tuple(Q(x) for x in row) for row in (gram or identity_matrix(dim)))
        rank = rref(tuple(tuple(Q(x) for x in h.normal) for h in plain))[1] if plain else 0
        return Arrangement(dim, tuple(plain), rank == dim, gram)

    def dual_lines(self) -> tuple[Subspace, ...]:
        ginv = mat_inverse(self.gram)
        return tuple(
            Subspace.from_vectors(self.dim, [mat_vec(ginv, tuple(map(Q, h.normal)))])
            for h in self.hyperplanes
        )

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "normals": [[str(x) for x in h.normal] for h in self.hyperplanes],
        }


@dataclass(frozen=True)
class GroupElement:
    """An element of a reflection group, as an exact matrix in essential coordinates."""

    matrix: tuple[tuple[Fraction, ...], ...]

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(mat_mul(self.matrix, other.matrix))

    def inverse(self) -> "GroupElement":
        return GroupElement(mat_inverse(self.matrix))

    def order(self) -> int:
        return matrix_order(self.matrix)

    def apply(self, v: Sequence) -> tuple:
        return mat_vec(self.matrix, v)

    def apply_subspace(self, s: Subspace) -> Subspace:
        return Subspace.from_vectors(s.ambient, [self.apply(r) for r in s.rows])

    def is_identity(self) -> bool:
        return self.matrix == identity_matrix(len(self.matrix))

    def sort_key(self):
        return tuple(x for row in self.matrix for x in row)


@dataclass(frozen=True)
class ReflectionGroupData:
    """Roots, degrees and generator matrices of a supported Coxeter type.

    All vectors live in essential coordinates of dimension `rank`; `gram`
    is the inner product there.  `positive_roots[i]` corresponds 1:1 to
    `arrangement.hyperplanes` of the attached reflection arrangement.
    """

    type_label: str
    rank: int
    gram: tuple[tuple[Fraction, ...], ...]
    positive_roots: tuple[tuple[Fraction, ...], ...]
    simple_roots: tuple[tuple[Fraction, ...], ...]
    generator_names: tuple[str, ...]
    coxeter_matrix: tuple[tuple[int, ...], ...]
    degrees: tuple[int, ...]
    generators: tuple[GroupElement, ...]
    group_order: int

    @property
    def all_roots(self) -> tuple[tuple[Fraction, ...], ...]:
        return self.positive_roots + tuple(tuple(-x for x in r) for r in self.positive_roots)

    def pairing(self, u, v):
        return dot(u, mat_vec(self.gram, v))

    def reflection_for_root(self, root) -> GroupElement:
        return GroupElement(_reflection_matrix(root, self.gram))

    def root_span(self, roots: Iterable[Sequence[Fraction]]) -> Subspace:
        return Subspace.from_vectors(self.rank, roots)

    def roots_in(self, s: Subspace) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(r for r in self.positive_roots if s.contains_vector(r))

    def full_space(self) -> Subspace:
        return Subspace.full(self.rank)


# ---------------------------------------------------------------------------
# Construction.
# ---------------------------------------------------------------------------

def _reflection_matrix(root, gram):
    n = len(root)
    groot = mat_vec(gram, root)
    norm = dot(root, groot)
    cols = []
    for j in range(n):
        e = tuple(Q(1) if i == j else Q(0) for i in range(n))
        coeff = 2 * groot[j] / norm
        cols.append(tuple(e[i] - coeff * root[i] for i in range(n)))
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def _e(n, i, sign=1):
    return tuple(Q(sign) if j == i else Q(0) for j in range(n))


def _vsum(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _simple_system(type_label: str, rank: int):
    """Ambient simple roots and generator names for one type."""
    if type_label == "A":
        n = rank + 1
        simples = [_vsum(_e(n, i), _e(n, i + 1, -1)) for i in range(rank)]
        names = tuple(f"s{i + 1}" for i in range(rank))
    elif type_label == "B":
        n = rank
        simples = [_vsum(_e(n, i), _e(n, i + 1, -1)) for i in range(rank - 1)]
        simples.append(_e(n, rank - 1))
        names = tuple(f"s{i + 1}" for i in range(rank))
    elif type_label == "D":
        # commuting pair first; the base is the standard one, listed so that
        # s1, s1' are the fork and s2..s_{n-1} continue the chain
        n = rank
        simples = [_vsum(_e(n, n - 2), _e(n, n - 1, -1)), _vsum(_e(n, n - 2), _e(n, n - 1))]
        simples += [_vsum(_e(n, n - 2 - i), _e(n, n - 1 - i, -1)) for i in range(1, rank - 1)]
        names = ("s1", "s1'") + tuple(f"s{i}" for i in range(2, rank))
    elif type_label == "G2":
        simples = [(Q(1), Q(-1), Q(0)), (Q(-2), Q(1), Q(1))]
        names = ("s", "t")
    else:
        raise UnsupportedTypeError(f"unknown type label {type_label!r}")
    return simples, names


def _degrees_table(type_label: str, rank: int) -> tuple[int, ...]:
    if type_label == "A":
        return tuple(range(2, rank + 2))
    if type_label == "B":
        return tuple(2 * i for i in range(1, rank + 1))
    if type_label == "D":
        return tuple(sorted([2 * i for i in range(1, rank)] + [rank]))
    if type_label == "G2":
        return (2, 6)
    raise UnsupportedTypeError(type_label)


def _order_formula(type_label: str, rank: int) -> int:
    if type_label == "A":
        return factorial(rank + 1)
    if type_label == "B":
        return 2 ** rank * factorial(rank)
    if type_label == "D":
        return 2 ** (rank - 1) * factorial(rank)
    if type_label == "G2":
        return 12
    raise UnsupportedTypeError(type_label)


def _generate_roots(simples):
    """Close the simple roots under the simple reflections (ambient, identity Gram)."""
    ambient = len(simples[0])
    ident = identity_matrix(ambient)
    refls = [_reflection_matrix(s, ident) for s in simples]
    roots = set(simples)
    frontier = list(simples)
    while frontier:
        nxt = []
        for r in frontier:
            for m in refls:
                img = mat_vec(m, r)
                if img not in roots:
                    roots.add(img)
                    nxt.append(img)
        frontier = nxt
    return roots


def _essential_basis(vectors):
    """RREF basis of the span; coordinates of a member are its pivot entries."""
    red, rank, pivots = rref(tuple(vectors))
    basis = tuple(red[:rank])
    return basis, pivots


@lru_cache(maxsize=None)
def build_reflection_group(type_label: str, rank: int) -> ReflectionGroupData:
    """Roots, degrees and generators of one supported type, in essential coordinates.

    The embedded degree table is validated on the spot: the degrees must
    multiply to the group order and their maximum must equal the order of
    the Coxeter element.
    """
    lo, hi = RANK_RANGE.get(type_label, (0, -1))
    if not lo <= rank <= hi:
        raise UnsupportedTypeError(
            f"type {type_label!r} with rank {rank} is not supported "
            f"(supported: A rank 1..7, B rank 2..6, D rank 4..6, G2 rank 2)"
        )
    simples_ambient, names = _simple_system(type_label, rank)
    roots_ambient = _generate_roots(simples_ambient)

    basis, pivots = _essential_basis(sorted(roots_ambient))
    assert len(basis) == rank
    gram = mat_mul(basis, tuple(zip(*basis)))

    def coords(v):
        return tuple(v[p] for p in pivots)

    simple_coords = tuple(coords(s) for s in simples_ambient)
    all_coords = [coords(r) for r in roots_ambient]

    # positive = nonnegative expansion in the simple-root basis
    expand = mat_inverse(tuple(zip(*simple_coords)))
    positive = []
    for r in all_coords:
        k = mat_vec(expand, r)
        if all(x >= 0 for x in k):
            positive.append(r)
    positive.sort()
    assert len(positive) * 2 == len(all_coords)

    generators = tuple(GroupElement(_reflection_matrix(s, gram)) for s in simple_coords)
    cox = tuple(
        tuple(matrix_order(mat_mul(a.matrix, b.matrix)) for b in generators)
        for a in generators
    )

    degrees = _degrees_table(type_label, rank)
    order = _order_formula(type_label, rank)
    prod = 1
    for d in degrees:
        prod *= d
    assert prod == order, "degree table inconsistent with group order"
    coxeter_elt = generators[0]
    for g in generators[1:]:
        coxeter_elt = coxeter_elt * g
    assert max(degrees) == coxeter_elt.order(), "largest degree must be the Coxeter number"

    return ReflectionGroupData(
        type_label=type_label,
        rank=rank,
        gram=gram,
        positive_roots=tuple(positive),
        simple_roots=simple_coords,
        generator_names=names,
        coxeter_matrix=cox,
        degrees=degrees,
        generators=generators,
        group_order=order,
    )


def build_reflection_arrangement(type_label: str, rank: int) -> tuple[Arrangement, ReflectionGroupData]:
    """The essential reflection arrangement of a supported type plus its group data."""
    data = build_reflection_group(type_label, rank)
    normals = [mat_vec(data.gram, r) for r in data.positive_roots]
    arr = Arrangement.build(data.rank, normals, gram=data.gram)
    assert arr.essential
    assert len(arr.hyperplanes) == len(data.positive_roots)
    return arr, data


def load_arrangement(doc: dict, essentialize: bool = False) -> Arrangement:
    """Read an arrangement from its JSON form {"dim": n, "normals": [["1","-1"], ...]}.

    Normals are strings "p/q"; duplicates (up to scaling) collapse to one
    hyperplane.  With essentialize=True a non-essential arrangement is
    replaced by its quotient modulo the common intersection of all
    hyperplanes, with the inherited pairing as the Gram matrix.
    """
    try:
        dim = int(doc["dim"])
        raw = [[fraction_from_str(str(x)) for x in normal] for normal in doc["normals"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed arrangement document: {exc}") from exc
    for n in raw:
        if len(n) != dim:
            raise ValueError("normal length does not match dim")
    arr = Arrangement.build(dim, raw)
    if arr.essential or not essentialize:
        return arr
    normals = tuple(tuple(map(Q, h.normal)) for h in arr.hyperplanes)
    basis, pivots = _essential_basis(normals)
    gram = mat_mul(basis, tuple(zip(*basis)))
    # n lies in rowspan(basis): its coordinates are its pivot entries, and
    # the functional <n, .> restricted to the quotient is gram . coords(n).
    new_normals = [mat_vec(gram, tuple(n[p] for p in pivots)) for n in normals]
    return Arrangement.build(len(basis), new_normals, gram=gram)


# ---------------------------------------------------------------------------
# Exhaustive group computations.
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def enumerate_group(data: ReflectionGroupData, cap: int = GROUP_ORDER_CAP) -> tuple[GroupElement, ...]:
    """Every element of W, as matrices, canonically sorted.

    Closure of the generators under multiplication; the resulting count is
    checked against the order predicted by the degree table.
    """
    if data.group_order > cap:
        raise CapExceededError("group_order", cap, data.group_order)
    seen = {identity_matrix(data.rank)}
    frontier = [g.matrix for g in data.generators]
    seen.update(frontier)
    while frontier:
        nxt = []
        for m in frontier:
            for g in data.generators:
                prod = mat_mul(m, g.matrix)
                if prod not in seen:
                    seen.add(prod)
                    nxt.append(prod)
        frontier = nxt
    assert len(seen) == data.group_order
    elements = [GroupElement(m) for m in seen]
    elements.sort(key=GroupElement.sort_key)
    return tuple(elements)


def stabilizer_of_subspace(
    data: ReflectionGroupData,
    s: Subspace,
    mode: Literal["setwise", "pointwise"],
) -> tuple[GroupElement, ...]:
    """Subgroup of W stabilizing a subspace, by scanning the whole group.

    Pointwise mode applied to perp(A) returns the parabolic subgroup W_A.
    """
    if s.ambient != data.rank:
        raise ValueError("subspace does not live in the ambient space of W")
    if mode == "pointwise":
        keep = lambda g: all(g.apply(r) == r for r in s.rows)
    elif mode == "setwise":
        keep = lambda g: g.apply_subspace(s) == s
    else:
        raise ValueError(f"unknown stabilizer mode {mode!r}")
    return tuple(g for g in enumerate_group(data) if keep(g))


def parabolic_subgroup(data: ReflectionGroupData, a: Subspace) -> tuple[GroupElement, ...]:
    """W_A: the elements fixing perp(A) pointwise; acts essentially on A."""
    return stabilizer_of_subspace(data, a.perp(data.gram), "pointwise")


def orbit_on_subspaces(data: ReflectionGroupData, s: Subspace) -> tuple[Subspace, ...]:
    """The distinct images w . S over all w in W, canonically sorted."""
    images = {g.apply_subspace(s) for g in enumerate_group(data)}
    return tuple(sorted(images, key=Subspace.sort_key))


def group_center(data: ReflectionGroupData) -> tuple[GroupElement, ...]:
    """Brute-force center: the elements commuting with every generator."""
    return tuple(
        g for g in enumerate_group(data)
        if all(mat_mul(g.matrix, h.matrix) == mat_mul(h.matrix, g.matrix) for h in data.generators)
    )
