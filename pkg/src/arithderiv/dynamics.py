"""Dynamics of valuations under repeated partial differentiation.

One differentiation step sends a finite nonzero valuation v to
v + nu_p(v) - 1 (units and 0 go to +infinity). Iterating this map, every
starting value either reaches +infinity, diverges to -infinity with a
constant negative increment, or becomes periodic with period at most p.
The kappa profile predicts the periodic case exactly: the increment
sequence is kappa_0 copies of -1, then the segments of kappa_1 ... and
finally the kappa_N segment repeating forever.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .errors import ClassificationError, DomainError
from .exact import ExtendedValuation, nu_int, require_prime

__all__ = [
    "Classification",
    "EventuallyPeriodicSeq",
    "KappaProfile",
    "Segment",
    "classify",
    "coerce_valuation",
    "inc_sequence",
    "inc_step",
    "kappa_profile",
    "nu_sequence",
    "oracle_classify",
    "predicted_inc_sequence",
    "segment",
]


def coerce_valuation(v, ramification: int = 1) -> ExtendedValuation:
    if isinstance(v, ExtendedValuation):
        return v
    if isinstance(v, int):
        return ExtendedValuation(True, v * ramification, ramification)
    v = Fraction(v)
    if ramification == 1 and v.denominator != 1:
        ramification = v.denominator
    return ExtendedValuation.from_value(v, ramification)


def inc_step(v, p: int, offset: int = 0) -> ExtendedValuation:
    """One differentiation step on a valuation.

    Returns +infinity for v in {0, +infinity}; otherwise v + nu_p(v) - 1.
    A nonzero offset subtracts a further constant (the hook for ambient
    fields where p divides the number of primes above it); no periodicity
    claims are made for offset > 0.
    """
    require_prime(p)
    v = coerce_valuation(v)
    if v.is_infinite or v.is_zero():
        return ExtendedValuation.infinity(v.ramification)
    return v.shifted(v.nu_p(p) - 1 - offset)


def nu_sequence(v0, p: int, steps: int, offset: int = 0) -> list[ExtendedValuation]:
    """Iterates of inc_step, truncated after the first +infinity."""
    v = coerce_valuation(v0)
    out = [v]
    for _ in range(steps):
        if v.is_infinite:
            break
        v = inc_step(v, p, offset)
        out.append(v)
    return out


def inc_sequence(v0, p: int, steps: int) -> list[int]:
    """Consecutive differences of the finite prefix of the nu sequence."""
    seq = nu_sequence(v0, p, steps)
    out = []
    for a, b in zip(seq, seq[1:]):
        if b.is_infinite:
            break
        d = b.value - a.value
        out.append(int(d) if d.denominator == 1 else d)
    return out


@dataclass(frozen=True)
class Segment:
    """The increment block (k-1, then (k-1 mod p) copies of -1)."""

    k: int
    entries: tuple[int, ...]


def segment(k: int, p: int) -> Segment:
    require_prime(p)
    if k < 1:
        raise DomainError("segment index must be >= 1")
    return Segment(k, (k - 1,) + (-1,) * ((k - 1) % p))


@dataclass(frozen=True)
class KappaProfile:
    """The chain kappa_0, kappa_1 ... kappa_N steering the increment
    sequence; the eventual period is kappa_N."""

    kappa0: int
    kappas: tuple[int, ...]

    @property
    def N(self) -> int:
        return len(self.kappas)

    @property
    def period(self) -> int:
        return self.kappas[-1]


def _floor_p(x: int, p: int) -> int:
    return x - x % p


def kappa_profile(v0, p: int) -> KappaProfile:
    """Profile of a valuation in the eventually periodic regime.

    Requires a finite v0 with nu_p(v0) >= 0 that is not one of the
    integers 0 .. p-1 (those reach +infinity; see classify).
    """
    require_prime(p)
    v = coerce_valuation(v0)
    if v.is_infinite or v.is_zero():
        raise ClassificationError("valuation is eventually +infinity; use classify()")
    value = v.value
    if value.denominator == 1 and 0 <= value <= p - 1:
        raise ClassificationError("valuation is eventually +infinity; use classify()")
    if v.nu_p(p) < 0:
        raise ClassificationError("valuation diverges to -infinity; use classify()")
    # residue of the p-adic integer value: numerator over the p-free
    # denominator part
    kappa0 = value.numerator * pow(value.denominator, -1, p) % p
    rest = value - kappa0
    if rest == 0:
        # would need v0 in {0..p-1}, excluded above
        raise AssertionError("kappa recursion reached an excluded boundary")
    kappas = [nu_int(rest, p)]
    while not 1 <= kappas[-1] <= p:
        kappas.append(nu_int(_floor_p(kappas[-1] - 1, p), p))
    return KappaProfile(kappa0, tuple(kappas))


@dataclass(frozen=True)
class EventuallyPeriodicSeq:
    """An integer sequence given by a finite preperiod and a repeating cycle."""

    preperiod: tuple[int, ...]
    cycle: tuple[int, ...]

    def prefix(self, n: int) -> list[int]:
        out = list(self.preperiod[:n])
        i = 0
        while len(out) < n:
            out.append(self.cycle[i % len(self.cycle)])
            i += 1
        return out


def predicted_inc_sequence(profile: KappaProfile, p: int) -> EventuallyPeriodicSeq:
    """Increment sequence predicted from a kappa profile.

    kappa_0 copies of -1, the segments of kappa_1 .. kappa_(N-1), then the
    kappa_N segment repeating as the cycle.
    """
    pre: list[int] = [-1] * profile.kappa0
    for k in profile.kappas[:-1]:
        pre.extend(segment(k, p).entries)
    return EventuallyPeriodicSeq(tuple(pre), segment(profile.period, p).entries)


class Classification(NamedTuple):
    kind: str
    period: Optional[int] = None

    def __str__(self) -> str:
        if self.kind == "EventuallyPeriodic":
            return f"EventuallyPeriodic({self.period})"
        return self.kind


EVENTUALLY_ZERO = "EventuallyZero"
EVENTUALLY_PERIODIC = "EventuallyPeriodic"
DIVERGES = "DivergesToMinusInfinity"
UNDECIDED = "Undecided"


def classify(v0, p: int) -> Classification:
    """Predicted long-run behavior of the valuation iteration.

    Integers 0 .. p-1 and +infinity reach +infinity; negative nu_p(v0)
    forces a constant negative increment; everything else is eventually
    periodic with period kappa_N <= p.
    """
    require_prime(p)
    v = coerce_valuation(v0)
    if v.is_infinite or v.is_zero():
        return Classification(EVENTUALLY_ZERO)
    value = v.value
    if value.denominator == 1 and 0 <= value <= p - 1:
        return Classification(EVENTUALLY_ZERO)
    if v.nu_p(p) < 0:
        return Classification(DIVERGES)
    return Classification(EVENTUALLY_PERIODIC, kappa_profile(v, p).period)


def _floyd_cycle(v0: ExtendedValuation, p: int, cap: int):
    """Floyd tortoise/hare on inc_step; returns (preperiod, period) or None."""
    tort = inc_step(v0, p)
    hare = inc_step(tort, p)
    steps = 0
    while tort != hare:
        if steps >= cap:
            return None
        tort = inc_step(tort, p)
        hare = inc_step(inc_step(hare, p), p)
        steps += 1
    mu = 0
    tort = v0
    while tort != hare:
        tort = inc_step(tort, p)
        hare = inc_step(hare, p)
        mu += 1
    lam = 1
    hare = inc_step(tort, p)
    while tort != hare:
        hare = inc_step(hare, p)
        lam += 1
    return mu, lam


def oracle_classify(v0, p: int, cap: int = 10_000) -> Classification:
    """Classification observed by direct iteration, independent of the
    predictor.

    Floyd cycle detection with a step cap; a cycle at +infinity means the
    sequence died at a unit, any other cycle reports its length. If the
    cap is exceeded the result is Undecided rather than a guess.
    """
    require_prime(p)
    v = coerce_valuation(v0)
    found = _floyd_cycle(v, p, cap)
    if found is None:
        return Classification(UNDECIDED)
    mu, lam = found
    probe = v
    for _ in range(mu):
        probe = inc_step(probe, p)
    if probe.is_infinite:
        return Classification(EVENTUALLY_ZERO)
    return Classification(EVENTUALLY_PERIODIC, lam)
