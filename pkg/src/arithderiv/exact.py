"""Exact integer and rational primitives: factorization, valuations,
Kronecker symbols, square roots modulo prime powers, and CRT.

Everything here is deterministic and allocation-light; rationals are
``fractions.Fraction`` throughout the package.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .errors import DomainError, ResidueError

__all__ = [
    "ExtendedValuation",
    "Factorization",
    "ValuationDecomposition",
    "crt",
    "factorize",
    "is_probable_prime",
    "kronecker",
    "nu",
    "nu_int",
    "require_prime",
    "sqrt_mod_lift",
]


class ValuationDecomposition(NamedTuple):
    """A valuation written as b * p**k with nu_p(b) = 0."""

    b: Fraction
    k: int

_TRIAL_BOUND = 10 ** 6
# Deterministic Miller-Rabin witnesses below this bound (Sorenson-Webster).
_MR_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_ROUNDS = 64

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_probable_prime(n: int, rounds: int = _MR_ROUNDS) -> bool:
    """Miller-Rabin primality test.

    Deterministic for n below ~3.3e24, otherwise ``rounds`` pseudorandom
    witnesses drawn from a generator seeded by n (so results are stable
    run to run).
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1

    def witness(a: int) -> bool:
        x = pow(a, d, n)
        if x in (1, n - 1):
            return False
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                return False
        return True

    if n < _MR_DETERMINISTIC_BOUND:
        bases = _MR_BASES
    else:
        rng = random.Random(n)
        bases = tuple(rng.randrange(2, n - 1) for _ in range(rounds))
    return not any(witness(a) for a in bases)


_PRIME_CACHE: dict[int, bool] = {}


def require_prime(p: int) -> int:
    known = _PRIME_CACHE.get(p)
    if known is None:
        known = _PRIME_CACHE[p] = p >= 2 and is_probable_prime(p)
        if len(_PRIME_CACHE) > 1 << 16:
            _PRIME_CACHE.clear()
    if not known:
        raise DomainError(f"{p} is not prime")
    return p


@dataclass(frozen=True)
class Factorization:
    """Signed prime factorization: sign * prod(p**e)."""

    sign: int
    factors: dict[int, int] = field(default_factory=dict)

    def value(self) -> int:
        out = self.sign
        for p, e in self.factors.items():
            out *= p ** e
        return out

    def primes(self) -> tuple[int, ...]:
        return tuple(sorted(self.factors))


def _pollard_brent(n: int, rng: random.Random) -> int:
    """Brent's cycle variant of Pollard rho; returns a nontrivial factor."""
    if n % 2 == 0:
        return 2
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _factor_into(n: int, out: dict[int, int], rng: random.Random) -> None:
    if n == 1:
        return
    if is_probable_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_brent(n, rng)
    _factor_into(d, out, rng)
    _factor_into(n // d, out, rng)


def factorize(n: int) -> Factorization:
    """Exact factorization of a nonzero integer.

    Trial division up to 10**6, then Brent-rho with probabilistic
    primality checks for any remaining cofactor.
    """
    if n == 0:
        raise DomainError("cannot factorize 0")
    sign = 1 if n > 0 else -1
    n = abs(n)
    factors: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    # 6k +- 1 wheel
    d = 7
    step = 4
    while d * d <= n and d < _TRIAL_BOUND:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += step
        step = 6 - step
    if n > 1:
        if d * d > n or is_probable_prime(n):
            factors[n] = factors.get(n, 0) + 1
        else:
            _factor_into(n, factors, random.Random(0xA1B2C3))
    return Factorization(sign, factors)


def _nu_of_int(n: int, p: int) -> int:
    if n == 0:
        raise DomainError("valuation of 0 is infinite")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def nu_int(x, p: int) -> int:
    """p-adic valuation of a nonzero int or Fraction, as a plain int."""
    require_prime(p)
    if isinstance(x, int):
        return _nu_of_int(x, p)
    x = Fraction(x)
    if x == 0:
        raise DomainError("valuation of 0 is infinite")
    return _nu_of_int(x.numerator, p) - _nu_of_int(x.denominator, p)


def nu(x, p: int) -> "ExtendedValuation":
    """p-adic valuation of a rational, +infinity at 0."""
    require_prime(p)
    x = Fraction(x)
    if x == 0:
        return ExtendedValuation.infinity()
    return ExtendedValuation(True, nu_int(x, p), 1)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n)."""
    if n == 0:
        raise DomainError("Kronecker symbol undefined for n = 0")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    # factor out 2s of n; (a|2) = 0, 1, -1 for a even, a = +-1 mod 8, else
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    a %= n
    # Jacobi with quadratic reciprocity
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _sqrt_mod_prime(a: int, p: int) -> int:
    """Tonelli-Shanks root of a modulo an odd prime p; a must be a QR."""
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # write p-1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while kronecker(z, p) != -1:
        z += 1
    c = pow(z, q, p)
    x = pow(a, (q + 1) // 2, p)
    t = pow(a, q, p)
    m = s
    while t != 1:
        i, sq = 0, t
        while sq != 1:
            sq = sq * sq % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        x = x * b % p
        t = t * b * b % p
        c = b * b % p
        m = i
    return x


def sqrt_mod_lift(D: int, p: int, m: int) -> int:
    """Canonical square root of D modulo p**m.

    For odd p the result reduces to the base root in [0, (p-1)/2] modulo p;
    for p = 2 (which requires D = 1 mod 8) the result is the residue of the
    2-adic root congruent to 1 mod 4. Both choices label one fixed embedding
    consistently across precisions.
    """
    require_prime(p)
    if m < 1:
        raise DomainError("precision m must be >= 1")
    if p == 2:
        if D % 8 != 1:
            raise ResidueError(f"{D} is not a square modulo powers of 2")
        if m == 1:
            return 1
        # Lift bit by bit one step past m so the residue mod 2^m is the
        # true 2-adic root (each step can flip bit k-1).
        # Lift one bit at a time, one step past m: the residue mod 2^m is
        # then the true 2-adic root (step k can only flip bit k-1). Starting
        # from 1 keeps r = 1 mod 4 throughout.
        r = 1
        for k in range(3, m + 2):
            if (D - r * r) % (1 << (k + 1)):
                r += 1 << (k - 1)
        return r % (1 << m)
    if kronecker(D, p) != 1:
        raise ResidueError(f"{D} is not a quadratic residue modulo {p}")
    r = _sqrt_mod_prime(D, p)
    r = min(r, p - r)
    target = p ** m
    pk = p
    while pk < target:
        pk = min(pk * pk, target)
        r = (r - (r * r - D) * pow(2 * r, -1, pk)) % pk
    if r % p > (p - 1) // 2:
        r = target - r
    return r


def crt(residues) -> int:
    """Solve x = r_j mod m_j for pairwise coprime moduli.

    Returns the unique solution in [0, prod(m_j)).
    """
    residues = list(residues)
    if not residues:
        raise DomainError("crt requires at least one congruence")
    x, modulus = 0, 1
    for r, m in residues:
        if m <= 0:
            raise DomainError("moduli must be positive")
        if math.gcd(modulus, m) != 1:
            raise DomainError("moduli are not pairwise coprime")
        # x + modulus * t = r (mod m)
        t = (r - x) * pow(modulus, -1, m) % m
        x += modulus * t
        modulus *= m
    return x % modulus


@dataclass(frozen=True)
class ExtendedValuation:
    """A value in (1/e)Z together with +infinity.

    The finite value is numerator/ramification; the ramification index is
    kept unreduced so half-integer valuations from ramified primes stay in
    their natural group. Equality and ordering compare values.
    """

    finite: bool
    numerator: int = 0
    ramification: int = 1

    def __post_init__(self):
        if self.ramification < 1:
            raise DomainError("ramification index must be positive")

    @classmethod
    def infinity(cls, ramification: int = 1) -> "ExtendedValuation":
        return cls(False, 0, ramification)

    @classmethod
    def from_value(cls, value, ramification: int = 1) -> "ExtendedValuation":
        if isinstance(value, ExtendedValuation):
            return value
        value = Fraction(value)
        num = value * ramification
        if num.denominator != 1:
            raise DomainError(
                f"{value} does not lie in (1/{ramification})Z"
            )
        return cls(True, int(num), ramification)

    @property
    def is_infinite(self) -> bool:
        return not self.finite

    @property
    def value(self) -> Fraction:
        if not self.finite:
            raise DomainError("+infinity has no finite value")
        return Fraction(self.numerator, self.ramification)

    def is_zero(self) -> bool:
        return self.finite and self.numerator == 0

    def nu_p(self, p: int) -> int:
        """Valuation of this valuation: nu_p(numerator) - nu_p(e)."""
        if not self.finite:
            raise DomainError("nu_p of +infinity is undefined")
        if self.numerator == 0:
            raise DomainError("nu_p of 0 is infinite")
        return _nu_of_int(self.numerator, p) - _nu_of_int(self.ramification, p)

    def decompose(self, p: int) -> ValuationDecomposition:
        """Write the value as b * p**k with nu_p(b) = 0."""
        k = self.nu_p(p)
        b = self.value / Fraction(p) ** k
        return ValuationDecomposition(b, k)

    def shifted(self, delta) -> "ExtendedValuation":
        """Add a rational delta, staying in the same (1/e)Z."""
        if not self.finite:
            return self
        d = Fraction(delta) * self.ramification
        if d.denominator != 1:
            raise DomainError(f"shift {delta} leaves (1/{self.ramification})Z")
        return ExtendedValuation(
            True, self.numerator + int(d), self.ramification
        )

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.finite and self.value == other
        if not isinstance(other, ExtendedValuation):
            return NotImplemented
        if not self.finite or not other.finite:
            return self.finite == other.finite
        return self.value == other.value

    def __hash__(self):
        return hash(("inf",)) if not self.finite else hash(self.value)

    def __lt__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.finite and self.value < other
        if not self.finite:
            return False
        if not other.finite:
            return True
        return self.value < other.value

    def __le__(self, other) -> bool:
        return self == other or self < other

    def __gt__(self, other) -> bool:
        return not self <= other

    def __ge__(self, other) -> bool:
        return not self < other

    def __str__(self) -> str:
        if not self.finite:
            return "inf"
        if self.ramification == 1:
            return str(self.numerator)
        return f"{self.numerator}/{self.ramification}"

    def __repr__(self) -> str:
        return f"ExtendedValuation({self})"
