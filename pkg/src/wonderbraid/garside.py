"""Garside normal forms and inertia words in the Artin-Tits groups of A/B/D/G2.

Words over the standard generators (the D alphabet has the commuting pair
s1, s1') are put into left-greedy canonical form Delta^d s_1 ... s_k: the
power of the Garside element Delta (the positive lift of the longest
element) pulled to the front, followed by simple factors, consecutive pairs
left-weighted.  Two words represent the same group element exactly when
their normal forms coincide, which settles the word problem and powers
every verification below (centrality, the Delta/Delta* identities, the
center reports and the inertia words of parabolic subgroups).

Internally a group element is the permutation it induces on the full root
set, so a descent test is literally "does this element send that simple
root to a negative root", and factor-by-factor normalization needs no
group-sized tables.  Matrices are materialized only at the public surface.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable, Optional, Sequence

from wonderbraid.errors import CapExceededError
from wonderbraid.exact import Subspace, identity_matrix, mat_inverse, mat_mul, mat_vec
from wonderbraid.reflection import (
    GroupElement,
    ReflectionGroupData,
    enumerate_group,
    group_center,
)

CONJUGATOR_SEARCH_CAP = 5_000
CENTER_BRUTE_FORCE_CAP = 5_000


# ---------------------------------------------------------------------------
# Words.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BraidWord:
    """A word over the Artin generators of B(W): signed 1-based letter indices."""

    data: ReflectionGroupData
    letters: tuple[int, ...]

    def __post_init__(self):
        n = len(self.data.generator_names)
        for l in self.letters:
            if l == 0 or abs(l) > n:
                raise ValueError(f"letter {l} outside the generator alphabet")

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.data is not other.data and self.data != other.data:
            raise ValueError("words live over different groups")
        return BraidWord(self.data, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.data, tuple(-l for l in reversed(self.letters)))

    def __pow__(self, exp: int) -> "BraidWord":
        base = self if exp >= 0 else self.inverse()
        return BraidWord(self.data, base.letters * abs(exp))

    def __str__(self) -> str:
        return format_word(self)


def word(data: ReflectionGroupData, letters: Iterable[int]) -> BraidWord:
    return BraidWord(data, tuple(letters))


def generator(data: ReflectionGroupData, index: int) -> BraidWord:
    """The positive generator word for a 0-based generator index."""
    return BraidWord(data, (index + 1,))


def parse_word(data: ReflectionGroupData, text: str) -> BraidWord:
    """Parse "s1 s1' s2 S1" (capital = inverse) or integer form "1 -1 2"."""
    names = {name: i + 1 for i, name in enumerate(data.generator_names)}
    letters = []
    for tok in text.replace(",", " ").split():
        try:
            v = int(tok)
        except ValueError:
            inverse = tok[:1].isupper()
            key = tok[:1].lower() + tok[1:]
            if key not in names:
                raise ValueError(f"unknown generator token {tok!r}")
            letters.append(-names[key] if inverse else names[key])
        else:
            if v == 0 or abs(v) > len(names):
                raise ValueError(f"letter {v} outside the generator alphabet")
            letters.append(v)
    return BraidWord(data, tuple(letters))


def format_word(w: BraidWord) -> str:
    if not w.letters:
        return "<empty>"
    out = []
    for l in w.letters:
        name = w.data.generator_names[abs(l) - 1]
        out.append(name if l > 0 else name[:1].upper() + name[1:])
    return " ".join(out)


# ---------------------------------------------------------------------------
# The root-permutation engine.
# ---------------------------------------------------------------------------

class _ArtinSystem:
    """Descents, products and the longest element, on root permutations."""

    def __init__(self, data: ReflectionGroupData):
        self.data = data
        pos = list(data.positive_roots)
        self.num_positive = len(pos)
        roots = pos + [tuple(-x for x in r) for r in pos]
        self.roots = roots
        self.index = {r: i for i, r in enumerate(roots)}
        self.identity = tuple(range(len(roots)))
        self.simple_pos = tuple(self.index[s] for s in data.simple_roots)
        self.gens = tuple(self.perm_of_matrix(g.matrix) for g in data.generators)
        self._inv_cache: dict[tuple, tuple] = {}
        self.w0 = self._longest_element()

    def perm_of_matrix(self, m) -> tuple[int, ...]:
        return tuple(self.index[mat_vec(m, r)] for r in self.roots)

    @lru_cache(maxsize=None)
    def _simple_matrix_basis(self):
        cols = tuple(zip(*self.data.simple_roots))
        return mat_inverse(cols)

    def matrix_of(self, perm: tuple[int, ...]):
        images = tuple(zip(*(self.roots[perm[p]] for p in self.simple_pos)))
        return mat_mul(images, self._simple_matrix_basis())

    def mult(self, a, b):
        return tuple(a[i] for i in b)

    def inv(self, a):
        cached = self._inv_cache.get(a)
        if cached is None:
            out = [0] * len(a)
            for i, j in enumerate(a):
                out[j] = i
            cached = self._inv_cache[a] = tuple(out)
        return cached

    def right_descents(self, w) -> frozenset[int]:
        n = self.num_positive
        return frozenset(
            s for s, p in enumerate(self.simple_pos) if w[p] >= n
        )

    def left_descents(self, w) -> frozenset[int]:
        return self.right_descents(self.inv(w))

    def length(self, w) -> int:
        n = self.num_positive
        return sum(1 for i in range(n) if w[i] >= n)

    def _longest_element(self):
        w = self.identity
        total = len(self.gens)
        while True:
            desc = self.right_descents(w)
            if len(desc) == total:
                return w
            s = min(set(range(total)) - desc)
            w = self.mult(w, self.gens[s])

    def tau(self, x):
        """Conjugation by Delta, on simples: w0 x w0."""
        return self.mult(self.w0, self.mult(x, self.w0))

    def left_complement(self, x):
        """The simple u with u x = w0."""
        return self.mult(self.w0, self.inv(x))

    def reduced_word(self, w) -> tuple[int, ...]:
        """Shortlex reduced word (0-based generator indices) via left descents."""
        out = []
        while w != self.identity:
            s = min(self.left_descents(w))
            out.append(s)
            w = self.mult(self.gens[s], w)
        return tuple(out)

    def longest_element_of_parabolic(self, gens_subset: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(element, word) for the longest element of a standard parabolic."""
        w = self.identity
        letters = []
        while True:
            free = [s for s in gens_subset if s not in self.right_descents(w)]
            if not free:
                return w, tuple(letters)
            s = min(free)
            letters.append(s)
            w = self.mult(w, self.gens[s])


@lru_cache(maxsize=None)
def _system(data: ReflectionGroupData) -> _ArtinSystem:
    return _ArtinSystem(data)


def _left_weight_pair(sys_: _ArtinSystem, a, b):
    """Move letters from the front of b to the back of a until left-weighted."""
    changed = False
    while True:
        diff = sys_.left_descents(b) - sys_.right_descents(a)
        if not diff:
            return a, b, changed
        s = min(diff)
        a = sys_.mult(a, sys_.gens[s])
        b = sys_.mult(sys_.gens[s], b)
        changed = True


def _normalize_factors(sys_: _ArtinSystem, factors: list) -> tuple[int, tuple]:
    """Sweep adjacent pairs to the left-greedy fixpoint, then strip w0's and ids."""
    changed = True
    while changed:
        changed = False
        for i in range(len(factors) - 1):
            a, b, ch = _left_weight_pair(sys_, factors[i], factors[i + 1])
            if ch:
                factors[i], factors[i + 1] = a, b
                changed = True
    lead, tail = 0, len(factors)
    while lead < tail and factors[lead] == sys_.w0:
        lead += 1
    while tail > lead and factors[tail - 1] == sys_.identity:
        tail -= 1
    return lead, tuple(factors[lead:tail])


@lru_cache(maxsize=None)
def _nf_key(w: BraidWord) -> tuple[int, tuple]:
    """Internal normal form: (delta power, tuple of simple root-permutations).

    Negative letters are rewritten through the left complement
    (sigma^-1 = Delta^-1 (w0 sigma)); the collected Delta powers are then
    commuted to the front, conjugating the factors they pass over.
    """
    sys_ = _system(w.data)
    factors, dpows = [], []
    for letter in w.letters:
        g = sys_.gens[abs(letter) - 1]
        if letter > 0:
            factors.append(g)
            dpows.append(0)
        else:
            factors.append(sys_.left_complement(g))
            dpows.append(-1)
    dp = 0
    for i in range(len(factors) - 1, -1, -1):
        if dp % 2:
            factors[i] = sys_.tau(factors[i])
        dp += dpows[i]
    extra, simples = _normalize_factors(sys_, factors)
    return dp + extra, simples


@dataclass(frozen=True)
class GarsideNormalForm:
    """Delta power plus left-weighted simple factors; equal words, equal forms."""

    delta_power: int
    simples: tuple[GroupElement, ...]

    def canonical_length(self) -> int:
        return len(self.simples)


def left_greedy_nf(w: BraidWord) -> GarsideNormalForm:
    """The canonical form of a word; simples are exposed as group elements."""
    dp, simples = _nf_key(w)
    sys_ = _system(w.data)
    return GarsideNormalForm(dp, tuple(GroupElement(sys_.matrix_of(p)) for p in simples))


def nf_as_word(data: ReflectionGroupData, nf: GarsideNormalForm) -> BraidWord:
    """Reassemble a normal form into a plain word (Delta powers spelled out)."""
    sys_ = _system(data)
    delta = garside_delta(data)
    letters: list[int] = []
    if nf.delta_power >= 0:
        letters += list(delta.letters) * nf.delta_power
    else:
        letters += list(delta.inverse().letters) * (-nf.delta_power)
    for s in nf.simples:
        perm = sys_.perm_of_matrix(s.matrix)
        letters += [i + 1 for i in sys_.reduced_word(perm)]
    return BraidWord(data, tuple(letters))


def words_equal(u: BraidWord, v: BraidWord) -> bool:
    """Whether two words represent the same element of B(W)."""
    if u.data != v.data:
        raise ValueError("words live over different groups")
    return _nf_key(u) == _nf_key(v)


def image_in_W(w: BraidWord) -> GroupElement:
    """The image of a braid word under B(W) -> W."""
    acc = identity_matrix(w.data.rank)
    for letter in w.letters:
        m = w.data.generators[abs(letter) - 1].matrix
        if letter < 0:
            m = mat_inverse(m)
        acc = mat_mul(acc, m)
    return GroupElement(acc)


def is_central(w: BraidWord) -> bool:
    """Whether w commutes with every generator (decided on normal forms)."""
    for i in range(len(w.data.generator_names)):
        g = generator(w.data, i)
        if not words_equal(w * g, g * w):
            return False
    return True


def descent_sets(data: ReflectionGroupData, g: GroupElement) -> tuple[frozenset[int], frozenset[int]]:
    """(left, right) descent sets of a group element, by the negative-root test."""
    sys_ = _system(data)
    perm = sys_.perm_of_matrix(g.matrix)
    return sys_.left_descents(perm), sys_.right_descents(perm)


# ---------------------------------------------------------------------------
# Delta and Delta*.
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def garside_delta(data: ReflectionGroupData) -> BraidWord:
    """The positive lift of the longest element, as the classical pattern word.

    Type A uses the staircase s1 (s2 s1) ... (sr ... s1); types B, D and G2
    use the power-of-Coxeter-block patterns (s1..sr)^r, (s1 s1' s2 ...)^{r-1}
    and (st)^3.  The word is validated on construction: positive, of length
    equal to the number of positive roots, mapping onto the longest element.
    """
    rank = len(data.generator_names)
    if data.type_label == "A":
        letters = [j for i in range(1, rank + 1) for j in range(i, 0, -1)]
    elif data.type_label == "B":
        letters = list(range(1, rank + 1)) * rank
    elif data.type_label == "D":
        letters = list(range(1, rank + 1)) * (rank - 1)
    elif data.type_label == "G2":
        letters = [1, 2] * 3
    else:  # fall back to any reduced word of w0
        sys_ = _system(data)
        letters = [i + 1 for i in sys_.reduced_word(sys_.w0)]
    w = BraidWord(data, tuple(letters))
    sys_ = _system(data)
    assert len(w.letters) == sys_.num_positive
    assert sys_.perm_of_matrix(image_in_W(w).matrix) == sys_.w0
    return w


@lru_cache(maxsize=None)
def dual_delta(data: ReflectionGroupData) -> BraidWord:
    """A lift of a Coxeter element: every generator once, in the classical order.

    For D the order is (s1 s1' s3 s5 ...)(s2 s4 ...); all other types take
    the generators in index order.  The image in W has order equal to the
    largest degree h, and (Delta*)^h = Delta^2.
    """
    rank = len(data.generator_names)
    if data.type_label == "D":
        chain = range(2, rank)  # chain generators s2..s_{r-1} sit at letters 3..rank
        letters = [1, 2] + [k + 1 for k in chain if k % 2 == 1] + [k + 1 for k in chain if k % 2 == 0]
    else:
        letters = list(range(1, rank + 1))
    w = BraidWord(data, tuple(letters))
    assert sorted(w.letters) == list(range(1, rank + 1))
    assert image_in_W(w).order() == max(data.degrees)
    return w


# ---------------------------------------------------------------------------
# Centers.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CenterReport:
    """Generators of the centers of B(W) and P(W), with the structural checks.

    beta generates Z(B(W)) (the smallest central power of Delta), pi = Delta^2
    generates Z(P(W)), z_of_W = gcd of the degrees = |Z(W)|, and
    relation_checked records that beta^{z_of_W} = pi held as words.
    """

    beta: BraidWord
    pi: BraidWord
    z_of_W: int
    relation_checked: bool


def center_report(data: ReflectionGroupData) -> CenterReport:
    delta = garside_delta(data)
    pi = delta * delta
    beta = delta if is_central(delta) else pi
    assert is_central(beta)
    z = 0
    for d in data.degrees:
        z = gcd(z, d)
    if data.group_order <= CENTER_BRUTE_FORCE_CAP:
        assert z == len(group_center(data)), "degree gcd disagrees with the brute-force center"
    relation = words_equal(beta ** z, pi)
    assert relation, "beta^{|Z(W)|} must equal pi"
    return CenterReport(beta=beta, pi=pi, z_of_W=z, relation_checked=relation)


# ---------------------------------------------------------------------------
# Parabolic inertia words.
# ---------------------------------------------------------------------------

def _diagram_components(data: ReflectionGroupData, idxs: Sequence[int]) -> list[list[int]]:
    """Connected components of the Coxeter diagram restricted to a generator subset."""
    idxs = sorted(set(idxs))
    remaining = set(idxs)
    comps = []
    while remaining:
        seed = min(remaining)
        comp, frontier = {seed}, [seed]
        while frontier:
            s = frontier.pop()
            for t in remaining - comp:
                if data.coxeter_matrix[s][t] > 2:
                    comp.add(t)
                    frontier.append(t)
        comps.append(sorted(comp))
        remaining -= comp
    return comps


def standard_parabolic_indices(data: ReflectionGroupData, a: Subspace) -> Optional[tuple[int, ...]]:
    """Generator indices whose simple roots span `a`, or None if not standard."""
    idxs = tuple(
        i for i, root in enumerate(data.simple_roots) if a.contains_vector(root)
    )
    if idxs and Subspace.from_vectors(data.rank, [data.simple_roots[i] for i in idxs]) == a:
        return idxs
    return None


def element_as_word(data: ReflectionGroupData, g: GroupElement) -> BraidWord:
    """The positive lift of a group element: its shortlex reduced word."""
    sys_ = _system(data)
    return BraidWord(data, tuple(i + 1 for i in sys_.reduced_word(sys_.perm_of_matrix(g.matrix))))


def find_conjugator(data: ReflectionGroupData, a: Subspace, cap: int = CONJUGATOR_SEARCH_CAP) -> BraidWord:
    """Search W for an element taking `a` onto a standard-parabolic span.

    Returns its positive lift as a word; exhaustive, so capped by group order.
    """
    if data.group_order > cap:
        raise CapExceededError("conjugator_search", cap, data.group_order)
    for g in enumerate_group(data):
        if standard_parabolic_indices(data, g.apply_subspace(a)) is not None:
            return element_as_word(data, g)
    raise ValueError("subspace is not conjugate to a standard parabolic")


def inertia_element(
    data: ReflectionGroupData,
    parabolic: Subspace | Iterable[int],
    conjugator: Optional[BraidWord] = None,
) -> tuple[BraidWord, BraidWord]:
    """The inertia words (z_A, zeta_A) of a parabolic subgroup.

    `parabolic` is either a set of 0-based generator indices or a subspace
    spanned by simple roots; a subspace that is merely conjugate to a
    standard parabolic needs an explicit conjugating word, which is
    verified, never searched for implicitly (see find_conjugator).

    zeta_A concatenates, over the connected components of the parabolic's
    diagram, the smallest power of the component's Garside element that is
    central in the component's own braid group; z_A likewise concatenates
    the component full twists Delta_c^2.  Both are verified to commute with
    every generator of the parabolic; for an irreducible parabolic
    z_A = zeta_A^{|Z(W_A)|} is asserted as well.
    """
    sys_ = _system(data)
    if isinstance(parabolic, Subspace):
        idxs = standard_parabolic_indices(data, parabolic)
        if idxs is None:
            if conjugator is None:
                raise ValueError(
                    "subspace is not spanned by simple roots; supply a conjugating word"
                )
            g = image_in_W(conjugator)
            moved = g.apply_subspace(parabolic)
            idxs = standard_parabolic_indices(data, moved)
            if idxs is None:
                raise ValueError("the supplied word does not conjugate onto a standard parabolic")
            z_std, zeta_std = inertia_element(data, idxs)
            u_inv = conjugator.inverse()
            return u_inv * z_std * conjugator, u_inv * zeta_std * conjugator
    else:
        idxs = tuple(sorted(set(parabolic)))
        if not idxs or any(i < 0 or i >= len(data.generator_names) for i in idxs):
            raise ValueError("parabolic generator indices out of range")

    comps = _diagram_components(data, idxs)
    z_letters: list[int] = []
    zeta_letters: list[int] = []
    centers = []
    for comp in comps:
        _, letters = sys_.longest_element_of_parabolic(comp)
        delta_c = BraidWord(data, tuple(i + 1 for i in letters))
        central = _central_in_parabolic(delta_c, comp)
        beta_c = delta_c if central else delta_c * delta_c
        centers.append(1 if central else 2)
        zeta_letters += beta_c.letters
        z_letters += (delta_c * delta_c).letters
    z_a = BraidWord(data, tuple(z_letters))
    zeta_a = BraidWord(data, tuple(zeta_letters))
    for s in idxs:
        g = generator(data, s)
        assert words_equal(z_a * g, g * z_a)
        assert words_equal(zeta_a * g, g * zeta_a)
    if len(comps) == 1:
        z_w_a = 2 // centers[0] if centers[0] == 1 else 1
        # smallest central power beta with beta^{|Z(W_A)|} = Delta^2: |Z| = 2
        # exactly when Delta itself is central in the component.
        z_w_a = 2 if centers[0] == 1 else 1
        assert words_equal(zeta_a ** z_w_a, z_a)
    return z_a, zeta_a


def _central_in_parabolic(w: BraidWord, comp: Sequence[int]) -> bool:
    return all(
        words_equal(w * generator(w.data, s), generator(w.data, s) * w) for s in comp
    )


# ---------------------------------------------------------------------------
# Reflection length and absolute order.
# ---------------------------------------------------------------------------

def reflection_length(data: ReflectionGroupData, g: GroupElement) -> int:
    """rank minus the fixed-space dimension: the absolute length of g."""
    n = data.rank
    shifted = tuple(
        tuple(g.matrix[i][j] - (1 if i == j else 0) for j in range(n)) for i in range(n)
    )
    fixed = Subspace(n, tuple(r for r in __import__("wonderbraid.exact", fromlist=["kernel_basis"]).kernel_basis(shifted)))
    return n - fixed.dim


def absolute_order_below(data: ReflectionGroupData, w: GroupElement, c: GroupElement) -> bool:
    """w <= c in absolute order: the reflection lengths add up along w, w^-1 c."""
    return (
        reflection_length(data, w) + reflection_length(data, w.inverse() * c)
        == reflection_length(data, c)
    )


def coxeter_element(data: ReflectionGroupData) -> GroupElement:
    return image_in_W(dual_delta(data))


def count_absolute_order_ideal(data: ReflectionGroupData) -> int:
    """|{w in W : w <= c}| for the Coxeter element c of dual_delta."""
    c = coxeter_element(data)
    return sum(1 for w in enumerate_group(data) if absolute_order_below(data, w, c))


def defining_relators(data: ReflectionGroupData) -> tuple[BraidWord, ...]:
    """For each generator pair, the braid relation as a word equal to the identity."""
    rank = len(data.generator_names)
    out = []
    for s in range(rank):
        for t in range(s + 1, rank):
            m = data.coxeter_matrix[s][t]
            lhs = [(s, t)[i % 2] + 1 for i in range(m)]
            rhs = [(t, s)[i % 2] + 1 for i in range(m)]
            out.append(BraidWord(data, tuple(lhs) + tuple(-l for l in reversed(rhs))))
    return tuple(out)
