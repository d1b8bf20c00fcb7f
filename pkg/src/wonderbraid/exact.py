"""Exact scalars and linear algebra: rationals, cyclotomic fields, row reduction.

Every scalar in the package is either a `fractions.Fraction` or a `Cyc`
(an element of a cyclotomic field Q(zeta_m), stored modulo the m-th
cyclotomic polynomial).  There is no floating point anywhere; equality of
scalars, vectors, matrices and subspaces is always exact.

Vectors are tuples of scalars and matrices are tuples of row tuples.  The
row-reduction routines are generic: they only use +, -, *, /, unary - and
truthiness, so the same code runs over Q and over Q(zeta_m).

All values are immutable after construction and all functions are pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "Cyc",
    "Subspace",
    "cyclotomic_polynomial",
    "dot",
    "eigenspace",
    "fraction_from_str",
    "fraction_to_str",
    "identity_matrix",
    "kernel_basis",
    "mat_inverse",
    "mat_mul",
    "mat_vec",
    "matrix_order",
    "rref",
    "transpose",
]

QONE = Fraction(1)
QZERO = Fraction(0)


def fraction_to_str(q: Fraction) -> str:
    """Serialize a rational as "p/q", or "p" when the denominator is 1."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def fraction_from_str(s: str) -> Fraction:
    return Fraction(s.strip())


# ---------------------------------------------------------------------------
# Dense univariate polynomials over Q, ascending coefficient order.
# ---------------------------------------------------------------------------

def _poly_trim(p: Sequence[Fraction]) -> tuple[Fraction, ...]:
    k = len(p)
    while k > 0 and not p[k - 1]:
        k -= 1
    return tuple(p[:k])


def _poly_mul(p: Sequence[Fraction], q: Sequence[Fraction]) -> tuple[Fraction, ...]:
    if not p or not q:
        return ()
    out = [QZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _poly_trim(out)


def _poly_divmod(p: Sequence[Fraction], d: Sequence[Fraction]):
    """Exact long division; d must be nonzero."""
    d = _poly_trim(d)
    rem = list(_poly_trim(p))
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [QZERO] * max(0, len(rem) - len(d) + 1)
    lead = d[-1]
    while len(rem) >= len(d):
        coeff = rem[-1] / lead
        shift = len(rem) - len(d)
        quot[shift] = coeff
        for i, b in enumerate(d):
            rem[shift + i] -= coeff * b
        rem = list(_poly_trim(rem))
    return _poly_trim(quot), tuple(rem)


def _poly_mod(p: Sequence[Fraction], d: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return _poly_divmod(p, d)[1]


def _poly_sub(p: Sequence[Fraction], q: Sequence[Fraction]) -> tuple[Fraction, ...]:
    n = max(len(p), len(q))
    return _poly_trim(tuple(
        (p[i] if i < len(p) else QZERO) - (q[i] if i < len(q) else QZERO)
        for i in range(n)
    ))


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """The m-th cyclotomic polynomial, ascending integer coefficients.

    Computed by exact division of x^m - 1 by the product of the lower-order
    cyclotomic polynomials.

    >>> cyclotomic_polynomial(1)
    (-1, 1)
    >>> cyclotomic_polynomial(2)
    (1, 1)
    >>> cyclotomic_polynomial(4)
    (1, 0, 1)
    """
    if m < 1:
        raise ValueError("order must be a positive integer")
    xm1 = [QZERO] * (m + 1)
    xm1[0], xm1[m] = Fraction(-1), QONE
    divisor: tuple[Fraction, ...] = (QONE,)
    for d in range(1, m):
        if m % d == 0:
            divisor = _poly_mul(divisor, tuple(map(Fraction, cyclotomic_polynomial(d))))
    quot, rem = _poly_divmod(tuple(xm1), divisor)
    assert not rem, "cyclotomic division must be exact"
    assert all(c.denominator == 1 for c in quot)
    return tuple(int(c) for c in quot)


@lru_cache(maxsize=None)
def _phi_degree(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


# ---------------------------------------------------------------------------
# Cyclotomic field elements.
# ---------------------------------------------------------------------------

class Cyc:
    """An element of Q(zeta_m), represented modulo the m-th cyclotomic polynomial.

    Working modulo Phi_m (degree phi(m)) rather than x^m - 1 keeps the
    representation a field, so nonzero elements are invertible and kernels
    over Q(zeta_m) are well defined.  Elements of different orders are
    combined by lifting both into the field of the lcm order.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Sequence[Fraction]):
        deg = _phi_degree(order)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != deg:
            raise ValueError(f"need {deg} coefficients for order {order}, got {len(coeffs)}")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *a):  # immutable
        raise AttributeError("Cyc values are immutable")

    @staticmethod
    def from_rational(q, order: int = 1) -> "Cyc":
        c = [QZERO] * _phi_degree(order)
        poly = _poly_mod((Fraction(q),), tuple(map(Fraction, cyclotomic_polynomial(order))))
        for i, v in enumerate(poly):
            c[i] = v
        return Cyc(order, c)

    @staticmethod
    def zeta(m: int, k: int = 1) -> "Cyc":
        """The root of unity zeta_m^k as an element of Q(zeta_m)."""
        k %= m
        poly = [QZERO] * (k + 1)
        poly[k] = QONE
        red = _poly_mod(tuple(poly), tuple(map(Fraction, cyclotomic_polynomial(m))))
        coeffs = list(red) + [QZERO] * (_phi_degree(m) - len(red))
        return Cyc(m, coeffs)

    def lift(self, n: int) -> "Cyc":
        """Embed into Q(zeta_n); requires order | n (zeta_m maps to zeta_n^{n/m})."""
        if n == self.order:
            return self
        if n % self.order:
            raise ValueError(f"cannot lift order {self.order} into order {n}")
        step = n // self.order
        phi_n = tuple(map(Fraction, cyclotomic_polynomial(n)))
        acc = [QZERO] * _phi_degree(n)
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = [QZERO] * (i * step + 1)
            mono[i * step] = c
            for j, v in enumerate(_poly_mod(tuple(mono), phi_n)):
                acc[j] += v
        return Cyc(n, acc)

    def _pair(self, other) -> tuple["Cyc", "Cyc"]:
        if isinstance(other, (int, Fraction)):
            other = Cyc.from_rational(other, 1)
        elif not isinstance(other, Cyc):
            return NotImplemented, NotImplemented  # type: ignore[return-value]
        n = self.order * other.order // gcd(self.order, other.order)
        return self.lift(n), other.lift(n)

    def __add__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return Cyc(a.order, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return Cyc(a.order, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return Cyc(self.order, tuple(c * q for c in self.coeffs))
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        phi = tuple(map(Fraction, cyclotomic_polynomial(a.order)))
        prod = _poly_mod(_poly_mul(a.coeffs, b.coeffs), phi)
        coeffs = list(prod) + [QZERO] * (len(a.coeffs) - len(prod))
        return Cyc(a.order, coeffs)

    __rmul__ = __mul__

    def inverse(self) -> "Cyc":
        """Multiplicative inverse via the extended Euclidean algorithm in Q[x]."""
        if not self:
            raise ZeroDivisionError("inverse of zero cyclotomic element")
        phi = tuple(map(Fraction, cyclotomic_polynomial(self.order)))
        # Invariants: r0 = s0*phi + t0*a, r1 = s1*phi + t1*a (a = self as poly).
        r0, r1 = phi, _poly_trim(self.coeffs)
        t0, t1 = (), (QONE,)
        while r1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            t0, t1 = t1, _poly_sub(t0, _poly_mul(q, t1))
        # r0 = gcd, a nonzero constant since phi is irreducible over Q.
        assert len(r0) == 1
        inv_poly = _poly_mod(tuple(c / r0[0] for c in t0), phi)
        coeffs = list(inv_poly) + [QZERO] * (len(self.coeffs) - len(inv_poly))
        return Cyc(self.order, coeffs)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return Cyc(self.order, tuple(c / q for c in self.coeffs))
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)) or isinstance(other, Cyc):
            a, b = self._pair(other)
            if a is NotImplemented:
                return NotImplemented
            return a.coeffs == b.coeffs
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]  # no cheap order-independent canonical form

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational element")
        return self.coeffs[0] if self.coeffs else QZERO

    def __repr__(self) -> str:
        if self.is_rational():
            return f"Cyc({fraction_to_str(self.rational_value())})"
        terms = [
            f"{fraction_to_str(c)}*z{self.order}^{i}" if i else fraction_to_str(c)
            for i, c in enumerate(self.coeffs)
            if c
        ]
        return "Cyc(" + " + ".join(terms) + ")"

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [fraction_to_str(c) for c in self.coeffs]}

    @staticmethod
    def from_json(doc: dict) -> "Cyc":
        return Cyc(int(doc["order"]), [fraction_from_str(c) for c in doc["coeffs"]])


# ---------------------------------------------------------------------------
# Generic dense linear algebra.
# ---------------------------------------------------------------------------

def identity_matrix(n: int):
    return tuple(tuple(QONE if i == j else QZERO for j in range(n)) for i in range(n))


def transpose(m):
    return tuple(zip(*m)) if m else ()


def mat_mul(a, b):
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def mat_vec(m, v):
    return tuple(dot(row, v) for row in m)


def dot(u, v):
    it = iter(zip(u, v))
    try:
        a, b = next(it)
    except StopIteration:
        return QZERO
    acc = a * b
    for a, b in it:
        acc = acc + a * b
    return acc


def rref(m):
    """Gauss-Jordan reduced row echelon form over an exact field.

    Returns (reduced matrix, rank, pivot column tuple).  Idempotent, and
    generic over the scalar type (Fraction or Cyc).
    """
    rows = [list(r) for r in m]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if rows[i][c]), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = rows[r][c]
        rows[r] = [x / inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return tuple(tuple(row) for row in rows), r, tuple(pivots)


def kernel_basis(m):
    """Canonical (RREF) basis of the right kernel {x : m x = 0}."""
    if not m:
        return ()
    ncols = len(m[0])
    red, rank, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    vecs = []
    for f in free:
        v = [QZERO] * ncols
        v[f] = QONE
        for r, c in enumerate(pivots):
            v[c] = -red[r][f]
        vecs.append(tuple(v))
    if not vecs:
        return ()
    red2, _, _ = rref(tuple(vecs))
    return tuple(row for row in red2 if any(row))


def mat_inverse(m):
    n = len(m)
    aug = tuple(tuple(m[i]) + tuple(identity_matrix(n)[i]) for i in range(n))
    red, rank, _ = rref(aug)
    if rank != n:
        raise ValueError("matrix is singular")
    return tuple(row[n:] for row in red)


def matrix_order(m, cap: int = 10_000) -> int:
    """Multiplicative order of an exact matrix of finite order."""
    n = len(m)
    ident = identity_matrix(n)
    acc = m
    for k in range(1, cap + 1):
        if acc == ident:
            return k
        acc = mat_mul(acc, m)
    raise ValueError("matrix order exceeds cap")


def eigenspace(m, order: int, exponent: int):
    """Basis of ker(m - zeta * I) over Q(zeta_order), zeta = zeta_order^exponent.

    (order, exponent) must be gcd-normalized so that zeta is a primitive
    order-th root of unity.  Returns a tuple of vectors of Cyc entries
    (canonical RREF rows); empty when zeta is not an eigenvalue.
    """
    if order < 1 or (order > 1 and gcd(exponent, order) != 1):
        raise ValueError("(order, exponent) must be gcd-normalized")
    n = len(m)
    zeta = Cyc.zeta(order, exponent)
    shifted = tuple(
        tuple(
            (Cyc.from_rational(m[i][j], order) - zeta) if i == j else Cyc.from_rational(m[i][j], order)
            for j in range(n)
        )
        for i in range(n)
    )
    return kernel_basis(shifted)


# ---------------------------------------------------------------------------
# Rational subspaces in canonical form.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """A linear subspace of Q^n, held as the RREF rows of any spanning set.

    The reduced row-echelon basis is a canonical representative, so two
    Subspace values are equal exactly when they denote the same subspace,
    and they can be dictionary keys.
    """

    ambient: int
    rows: tuple[tuple[Fraction, ...], ...]

    @staticmethod
    def from_vectors(ambient: int, vectors: Iterable[Sequence[Fraction]]) -> "Subspace":
        vecs = [tuple(Fraction(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient:
                raise ValueError("vector length does not match ambient dimension")
        if not vecs:
            return Subspace(ambient, ())
        red, _, _ = rref(tuple(vecs))
        return Subspace(ambient, tuple(r for r in red if any(r)))

    @staticmethod
    def zero(ambient: int) -> "Subspace":
        return Subspace(ambient, ())

    @staticmethod
    def full(ambient: int) -> "Subspace":
        return Subspace(ambient, identity_matrix(ambient))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def is_zero(self) -> bool:
        return not self.rows

    def contains_vector(self, v: Sequence) -> bool:
        """Membership test; works for rational and cyclotomic coordinates."""
        residual = list(v)
        for row in self.rows:
            c = next(i for i, x in enumerate(row) if x)
            f = residual[c]
            if f:
                residual = [a - f * b for a, b in zip(residual, row)]
        return not any(residual)

    def __le__(self, other: "Subspace") -> bool:
        if self.ambient != other.ambient:
            raise ValueError("ambient dimensions differ")
        return all(other.contains_vector(r) for r in self.rows)

    def __lt__(self, other: "Subspace") -> bool:
        return self.dim < other.dim and self <= other

    def sum(self, other: "Subspace") -> "Subspace":
        return Subspace.from_vectors(self.ambient, self.rows + other.rows)

    def annihilator(self) -> "Subspace":
        """{x : r . x = 0 for all basis rows r} under the standard dot product."""
        if not self.rows:
            return Subspace.full(self.ambient)
        return Subspace(self.ambient, kernel_basis(self.rows))

    def intersect(self, other: "Subspace") -> "Subspace":
        return self.annihilator().sum(other.annihilator()).annihilator()

    def perp(self, gram=None) -> "Subspace":
        """Orthogonal complement with respect to a symmetric pairing.

        gram is the matrix of the pairing in the current coordinates
        (identity when omitted): perp(S) = {x : (basis . gram) x = 0}.
        """
        if gram is None:
            return self.annihilator()
        if not self.rows:
            return Subspace.full(self.ambient)
        return Subspace(self.ambient, kernel_basis(mat_mul(self.rows, gram)))

    def sort_key(self):
        return (self.dim, self.rows)

    def to_json(self) -> dict:
        return {
            "ambient": self.ambient,
            "basis": [[fraction_to_str(x) for x in row] for row in self.rows],
        }

    @staticmethod
    def from_json(doc: dict) -> "Subspace":
        return Subspace.from_vectors(
            int(doc["ambient"]),
            [[fraction_from_str(x) for x in row] for row in doc["basis"]],
        )

    def __repr__(self) -> str:
        rows = "; ".join(",".join(fraction_to_str(x) for x in r) for r in self.rows)
        return f"Subspace({self.ambient}, dim={self.dim}: {rows})"


def span_of(ambient: int, *vectors) -> Subspace:
    return Subspace.from_vectors(ambient, vectors)


def primitive_integer_vector(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a nonzero rational vector to coprime integers, first nonzero entry positive."""
    fracs = [Fraction(x) for x in v]
    if not any(fracs):
        raise ValueError("zero vector has no primitive form")
    denom_lcm = 1
    for f in fracs:
        denom_lcm = denom_lcm * f.denominator // gcd(denom_lcm, f.denominator)
    ints = [int(f * denom_lcm) for f in fracs]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)
