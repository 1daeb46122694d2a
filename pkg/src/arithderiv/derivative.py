"""Arithmetic derivative, partial derivative, and subderivative over Q.

The full derivative of a nonzero rational x is x * sum(nu_p(x)/p) over the
primes dividing its numerator or denominator; the partial derivative keeps
one prime's term and the subderivative a finite set of them. A symbolic
prime-power form carries elements whose p-exponents are too large to
materialize.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CapacityError, DomainError
from .exact import factorize, nu_int, require_prime

__all__ = [
    "MATERIALIZE_LIMIT",
    "PrimePowerForm",
    "backward_chain",
    "backward_chain_element",
    "d_full",
    "d_partial",
    "d_sub",
    "ld_partial",
    "ppf_derivative",
    "prime_set",
]

# Largest |exponent| a PrimePowerForm will materialize into a Fraction.
MATERIALIZE_LIMIT = 1 << 16


def _support(x: Fraction) -> tuple[int, ...]:
    """Primes dividing the numerator or denominator of a nonzero rational."""
    primes = set(factorize(x.numerator).factors)
    primes.update(factorize(x.denominator).factors)
    return tuple(sorted(primes))


def d_full(x) -> Fraction:
    """Arithmetic derivative: x * sum over p | x of nu_p(x)/p."""
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    total = Fraction(0)
    for p in _support(x):
        total += Fraction(nu_int(x, p), p)
    return x * total


def d_partial(x, p: int) -> Fraction:
    """Arithmetic partial derivative x * nu_p(x)/p, zero at x = 0."""
    require_prime(p)
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    return x * Fraction(nu_int(x, p), p)


def prime_set(primes) -> tuple[int, ...]:
    """Normalize a collection of primes to a sorted tuple."""
    out = tuple(sorted({require_prime(int(p)) for p in primes}))
    if not out:
        raise DomainError("prime set must be nonempty")
    return out


def d_sub(x, T) -> Fraction:
    """Arithmetic subderivative with respect to a finite prime set."""
    T = prime_set(T)
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    return x * sum(Fraction(nu_int(x, p), p) for p in T)


def ld_partial(x, p: int) -> Fraction:
    """Logarithmic partial derivative nu_p(x)/p, a homomorphism on Q*."""
    require_prime(p)
    x = Fraction(x)
    if x == 0:
        raise DomainError("logarithmic derivative undefined at 0")
    return Fraction(nu_int(x, p), p)


@dataclass(frozen=True)
class PrimePowerForm:
    """unit * p**exponent with nu_p(unit) = 0, or zero.

    The exponent is an arbitrary precision integer, so elements like
    2**(2**64) are representable; materialize() refuses exponents beyond
    MATERIALIZE_LIMIT.
    """

    p: int
    unit: Fraction
    exponent: int
    is_zero: bool = False

    def __post_init__(self):
        require_prime(self.p)
        if not self.is_zero:
            if self.unit == 0:
                raise DomainError("unit must be nonzero; use PrimePowerForm.zero")
            if nu_int(self.unit, self.p) != 0:
                raise DomainError("unit must have zero p-valuation")

    @classmethod
    def zero(cls, p: int) -> "PrimePowerForm":
        return cls(p, Fraction(1), 0, is_zero=True)

    @classmethod
    def make(cls, p: int, unit, exponent: int) -> "PrimePowerForm":
        """Build a form, pulling all powers of p out of the unit."""
        unit = Fraction(unit)
        if unit == 0:
            return cls.zero(p)
        shift = nu_int(unit, p)
        if shift:
            unit /= Fraction(p) ** shift
        return cls(p, unit, exponent + shift)

    @classmethod
    def from_rational(cls, x, p: int) -> "PrimePowerForm":
        return cls.make(p, Fraction(x), 0)

    def materialize(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        if abs(self.exponent) > MATERIALIZE_LIMIT:
            raise CapacityError(
                f"exponent {self.exponent} exceeds the materialization limit"
            )
        return self.unit * Fraction(self.p) ** self.exponent

    def times_rational(self, c) -> "PrimePowerForm":
        c = Fraction(c)
        if c == 0 or self.is_zero:
            return PrimePowerForm.zero(self.p)
        return PrimePowerForm.make(self.p, self.unit * c, self.exponent)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PrimePowerForm):
            return NotImplemented
        if self.p != other.p:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return self.is_zero == other.is_zero
        return self.unit == other.unit and self.exponent == other.exponent

    def __hash__(self):
        return hash((self.p, self.is_zero, self.unit, self.exponent))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return f"{self.unit}*{self.p}^{self.exponent}"


def ppf_derivative(f: PrimePowerForm) -> PrimePowerForm:
    """Partial derivative of a symbolic prime-power form.

    For unit * p**w the derivative is unit * w * p**(w-1); the p-part of w
    moves into the exponent to keep the unit p-free.
    """
    if f.is_zero or f.exponent == 0:
        return PrimePowerForm.zero(f.p)
    w = f.exponent
    shift = nu_int(w, f.p)
    new_unit = f.unit * Fraction(w, f.p ** shift)
    return PrimePowerForm(f.p, new_unit, f.exponent + shift - 1)


def backward_chain_element(p: int, n: int) -> Fraction:
    """Element a_n of the infinite backward differentiation chain.

    a_1 = p**(p*p); for m >= 1, a_(2m) = p**(p*p+1)/(p*p+1)**m and
    a_(2m+1) = p**(p*p)/(p*p+1)**m, so d_partial(a_n, p) = a_(n-1).
    """
    require_prime(p)
    if n < 1:
        raise DomainError("chain index must be >= 1")
    q = p * p + 1
    if n % 2 == 1:
        return Fraction(p) ** (p * p) / Fraction(q) ** ((n - 1) // 2)
    return Fraction(p) ** (p * p + 1) / Fraction(q) ** (n // 2)


def backward_chain(p: int, m: int, parity: str) -> Fraction:
    """Chain element a_(2m) ("even") or a_(2m+1) ("odd").

    The even case needs m >= 1; m = 0 falls back to the chain base a_1.
    """
    if parity not in ("even", "odd"):
        raise DomainError("parity must be 'even' or 'odd'")
    if m < 0:
        raise DomainError("m must be nonnegative")
    if parity == "odd":
        return backward_chain_element(p, 2 * m + 1)
    return backward_chain_element(p, 2 * m if m >= 1 else 1)
