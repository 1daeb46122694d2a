"""Quadratic fields Q(sqrt(D)): element arithmetic, prime splitting,
prime-ideal valuations, derivatives, and logarithmic-derivative images.

Valuations at split primes are computed through a canonical Hensel root
(the embedding sending sqrt(D) to the lifted residue), so conjugate ideals
get stable labels: "plus" is the canonical root's slot. Inert and ramified
valuations come straight from the norm. Rational inputs in arbitrary
described Galois fields are handled by d_abstract_rational, which only
needs splitting data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .derivative import d_full
from .errors import DomainError
from .exact import (
    ExtendedValuation,
    factorize,
    kronecker,
    nu_int,
    require_prime,
    sqrt_mod_lift,
)

__all__ = [
    "GroupDescription",
    "PrimeIdealRef",
    "QuadraticElement",
    "QuadraticField",
    "SplittingData",
    "d_K",
    "d_K_sub",
    "d_abstract_rational",
    "groups_isomorphic",
    "height_vector",
    "ideal_valuation",
    "ld_K",
    "ld_image_generators",
    "prime_ideals_over",
    "splitting",
]


def _is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).factors.values())


@dataclass(frozen=True)
class QuadraticField:
    """Q(sqrt(D)) for a squarefree D not 0 or 1."""

    D: int

    def __post_init__(self):
        if self.D in (0, 1) or not _is_squarefree(self.D):
            raise DomainError("D must be squarefree and different from 0, 1")

    @property
    def discriminant(self) -> int:
        return self.D if self.D % 4 == 1 else 4 * self.D

    def element(self, a, b=0) -> "QuadraticElement":
        return QuadraticElement(self, Fraction(a), Fraction(b))

    def __str__(self) -> str:
        return f"Q(sqrt({self.D}))"


@dataclass(frozen=True)
class QuadraticElement:
    """a + b*sqrt(D) with rational coordinates."""

    field: QuadraticField
    a: Fraction
    b: Fraction

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def norm(self) -> Fraction:
        return self.a * self.a - self.field.D * self.b * self.b

    def conjugate(self) -> "QuadraticElement":
        return QuadraticElement(self.field, self.a, -self.b)

    def _check_field(self, other: "QuadraticElement") -> None:
        if self.field != other.field:
            raise DomainError("elements lie in different fields")

    def __add__(self, other):
        other = self._coerce(other)
        return QuadraticElement(self.field, self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        other = self._coerce(other)
        return QuadraticElement(self.field, self.a - other.a, self.b - other.b)

    def __neg__(self):
        return QuadraticElement(self.field, -self.a, -self.b)

    def __mul__(self, other):
        other = self._coerce(other)
        D = self.field.D
        return QuadraticElement(
            self.field,
            self.a * other.a + D * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __truediv__(self, other):
        other = self._coerce(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero element")
        return self * other.conjugate() * (Fraction(1) / n)

    def _coerce(self, other) -> "QuadraticElement":
        if isinstance(other, QuadraticElement):
            self._check_field(other)
            return other
        return QuadraticElement(self.field, Fraction(other), Fraction(0))

    def __str__(self) -> str:
        return f"{self.a} + {self.b}*sqrt({self.field.D})"


@dataclass(frozen=True)
class SplittingData:
    """Ramification index, inertia degree, and prime count over p."""

    p: int
    e: int
    f: int
    g: int
    type: str

    def __post_init__(self):
        if self.e * self.f * self.g != 2:
            raise DomainError("splitting data must satisfy e*f*g = 2")


@dataclass(frozen=True)
class PrimeIdealRef:
    """A prime ideal over p: slot 'only' unless p splits, in which case
    'plus' is the canonical-Hensel-root embedding and 'minus' its
    conjugate."""

    p: int
    slot: str = "only"

    def __post_init__(self):
        require_prime(self.p)
        if self.slot not in ("only", "plus", "minus"):
            raise DomainError("slot must be 'only', 'plus', or 'minus'")


def splitting(K: QuadraticField, p: int) -> SplittingData:
    """Splitting type of p in K, from the discriminant."""
    require_prime(p)
    delta = K.discriminant
    if p == 2:
        r = delta % 8
        if r == 1:
            return SplittingData(2, 1, 1, 2, "split")
        if r == 5:
            return SplittingData(2, 1, 2, 1, "inert")
        return SplittingData(2, 2, 1, 1, "ramified")
    sym = kronecker(delta, p)
    if sym == 0:
        return SplittingData(p, 2, 1, 1, "ramified")
    if sym == 1:
        return SplittingData(p, 1, 1, 2, "split")
    return SplittingData(p, 1, 2, 1, "inert")


def prime_ideals_over(K: QuadraticField, p: int) -> tuple[PrimeIdealRef, ...]:
    if splitting(K, p).type == "split":
        return (PrimeIdealRef(p, "plus"), PrimeIdealRef(p, "minus"))
    return (PrimeIdealRef(p, "only"),)


def _split_valuations(x: QuadraticElement, p: int) -> tuple[int, int]:
    """(plus, minus) valuations of x at a split prime.

    Denominators are cleared to land in Z[sqrt(D)]; the plus valuation is
    read off the canonical-root embedding at precision one past the norm
    valuation, where the residue cannot vanish spuriously because the
    conjugate valuation is nonnegative.
    """
    D = x.field.D
    d = math.lcm(x.a.denominator, x.b.denominator)
    a_i, b_i = int(x.a * d), int(x.b * d)
    shift = nu_int(d, p)
    s = nu_int(a_i * a_i - D * b_i * b_i, p) if (a_i, b_i) != (0, 0) else 0
    if s == 0:
        return -shift, -shift
    m = s + 1
    r = sqrt_mod_lift(D, p, m)
    t = (a_i + b_i * r) % p ** m
    if t == 0:
        raise AssertionError("split valuation exceeded its norm bound")
    t_plus = nu_int(t, p)
    return t_plus - shift, s - t_plus - shift


def ideal_valuation(x: QuadraticElement, P: PrimeIdealRef) -> ExtendedValuation:
    """Valuation of a nonzero element at a prime ideal.

    Inert and split ideals give integers; ramified ideals give values in
    (1/2)Z carried with ramification 2.
    """
    if x.is_zero():
        raise DomainError("valuation of 0 is infinite")
    data = splitting(x.field, P.p)
    if data.type == "split":
        if P.slot == "only":
            raise DomainError(f"{P.p} splits; choose slot 'plus' or 'minus'")
        plus, minus = _split_valuations(x, P.p)
        return ExtendedValuation(True, plus if P.slot == "plus" else minus, 1)
    if P.slot != "only":
        raise DomainError(f"{P.p} does not split; use slot 'only'")
    n_val = nu_int(x.norm(), P.p)
    if data.type == "inert":
        if n_val % 2:
            raise AssertionError("odd norm valuation at an inert prime")
        return ExtendedValuation(True, n_val // 2, 1)
    return ExtendedValuation(True, n_val, 2)


def _dividing_primes(x: QuadraticElement) -> tuple[int, ...]:
    n = x.norm()
    primes = set(factorize(n.numerator).factors)
    primes.update(factorize(n.denominator).factors)
    return tuple(sorted(primes))


def _ld_sum(x: QuadraticElement, refs) -> Fraction:
    total = Fraction(0)
    for P in refs:
        g = splitting(x.field, P.p).g
        v = ideal_valuation(x, P)
        if not v.is_zero():
            total += v.value / (P.p * g)
    return total


def d_K(x: QuadraticElement) -> QuadraticElement:
    """Arithmetic derivative on K: x times the sum of nu(x)/(p*g(p)) over
    the prime ideals dividing x. Restricts to the rational derivative on Q."""
    if x.is_zero():
        return x
    refs = [P for p in _dividing_primes(x) for P in prime_ideals_over(x.field, p)]
    return x * _ld_sum(x, refs)


def d_K_sub(x: QuadraticElement, T) -> QuadraticElement:
    """Subderivative over a finite set of prime ideals."""
    if x.is_zero():
        return x
    return x * _ld_sum(x, tuple(T))


def ld_K(x: QuadraticElement) -> Fraction:
    """Logarithmic derivative d_K(x)/x, always a rational number."""
    if x.is_zero():
        raise DomainError("logarithmic derivative undefined at 0")
    refs = [P for p in _dividing_primes(x) for P in prime_ideals_over(x.field, p)]
    return _ld_sum(x, refs)


@dataclass(frozen=True)
class GroupDescription:
    """The subgroup of Q generated by 1/p**m(p) over all primes, described
    by its finitely many exponents m(p) different from 1."""

    exceptional: tuple[tuple[int, int], ...] = ()

    def m(self, p: int) -> int:
        return dict(self.exceptional).get(p, 1)


RATIONAL_LD_IMAGE = GroupDescription()


def ld_image_generators(K: QuadraticField, prime_bound: int = 100) -> GroupDescription:
    """Image of ld_K as a group description.

    m(p) = 1 + nu_p(2) - nu_p(f(p, K)): every odd prime contributes 1/p,
    while 2 contributes 1/2 when 2 is inert (D = 5 mod 8) and 1/4 otherwise.
    """
    if prime_bound < 2:
        raise DomainError("prime_bound must be >= 2")
    exceptional = []
    m2 = 1 if splitting(K, 2).f == 2 else 2
    if m2 != 1:
        exceptional.append((2, m2))
    # odd primes: nu_p(2) = nu_p(f) = 0, so m(p) = 1; nothing to record
    return GroupDescription(tuple(exceptional))


def height_vector(G: GroupDescription, primes) -> list[int]:
    """Heights of 1 in G at the requested primes: m(p) per prime."""
    return [G.m(require_prime(p)) for p in primes]


def groups_isomorphic(G1: GroupDescription, G2: GroupDescription):
    """Isomorphism test for described subgroups of Q.

    Descriptions differ at finitely many primes with finite heights, so the
    answer is always True; the witness lists where the heights differ.
    """
    primes = {p for p, _ in G1.exceptional} | {p for p, _ in G2.exceptional}
    witness = sorted(p for p in primes if G1.m(p) != G2.m(p))
    return True, witness


def d_abstract_rational(x, fields_data: dict) -> Fraction:
    """Derivative of a rational inside an abstract Galois field given by
    splitting data p -> (e, f, g) with a common product n.

    Each of the g primes over p contributes nu_p(x)/(p*g), so the g cancels
    and the result equals the rational derivative whatever the field.
    """
    entries = {p: tuple(v) for p, v in fields_data.items()}
    products = {e * f * g for e, f, g in entries.values()}
    if len(products) > 1:
        raise DomainError("splitting data disagrees on the field degree")
    for p, (e, f, g) in entries.items():
        require_prime(p)
        if min(e, f, g) < 1:
            raise DomainError("splitting data must be positive")
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    total = Fraction(0)
    support = set(factorize(x.numerator).factors) | set(
        factorize(x.denominator).factors
    )
    for p in sorted(support):
        g = entries.get(p, (1, 1, 1))[2]
        for _ in range(g):
            total += Fraction(nu_int(x, p), p * g)
    result = x * total
    assert result == d_full(x)
    return result
