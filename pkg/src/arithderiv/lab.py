"""Executable continuity, discontinuity, and strict-differentiability
experiments.

Each probe produces a ProbeReport: rows of (input distance valuation,
output distance valuation, optional difference-quotient value) plus a
verdict decided by explicit numeric rules:

* converges: every output valuation is +infinity, or the smallest output
  valuation in the last quarter of the run strictly exceeds the largest in
  the first quarter (unbounded growth).
* oscillates: at least two distinct finite output valuations each occur
  twice or more, and each shows up in the last quarter of the run.
* bounded: the largest output valuation in the second half does not exceed
  the largest in the first half.
* undecided: none of the above.

All arithmetic is exact; nothing here touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .derivative import d_full, d_partial, d_sub, prime_set
from .errors import DomainError, GeneratorError, SearchError
from .exact import ExtendedValuation, is_probable_prime, nu, nu_int, require_prime, sqrt_mod_lift
from .quadfield import (
    PrimeIdealRef,
    QuadraticElement,
    QuadraticField,
    d_K_sub,
    ideal_valuation,
    splitting,
)

__all__ = [
    "DerivativeMap",
    "ProbeReport",
    "ProbeRow",
    "continuity_probe",
    "discontinuity_witness",
    "full_map",
    "identity_map",
    "partial_map",
    "phi",
    "phi2",
    "special_witness",
    "strict_diff_probe",
    "sub_map",
]


@dataclass(frozen=True)
class DerivativeMap:
    """A named map f: Q -> Q used by the probes."""

    label: str
    fn: Callable[[Fraction], Fraction]

    def __call__(self, x) -> Fraction:
        return self.fn(Fraction(x))


def partial_map(p: int) -> DerivativeMap:
    require_prime(p)
    return DerivativeMap(f"pderiv[{p}]", lambda x: d_partial(x, p))


def sub_map(T) -> DerivativeMap:
    T = prime_set(T)
    return DerivativeMap("subderiv[" + ",".join(map(str, T)) + "]",
                         lambda x: d_sub(x, T))


def full_map() -> DerivativeMap:
    return DerivativeMap("deriv", d_full)


def identity_map() -> DerivativeMap:
    return DerivativeMap("identity", lambda x: x)


def phi(f, u, v) -> Fraction:
    """Difference quotient (f(u) - f(v)) / (u - v), exact."""
    u, v = Fraction(u), Fraction(v)
    if u == v:
        raise DomainError("difference quotient requires u != v")
    return (f(u) - f(v)) / (u - v)


def phi2(f, u, v, w) -> Fraction:
    """Second difference quotient (phi(u, w) - phi(v, w)) / (u - v)."""
    u, v, w = Fraction(u), Fraction(v), Fraction(w)
    if len({u, v, w}) != 3:
        raise DomainError("second difference quotient requires distinct points")
    return (phi(f, u, w) - phi(f, v, w)) / (u - v)


@dataclass(frozen=True)
class ProbeRow:
    i: int
    in_val: ExtendedValuation
    out_val: ExtendedValuation
    aux: Optional[Fraction] = None


@dataclass(frozen=True)
class ProbeReport:
    experiment: str
    params: dict
    rows: tuple[ProbeRow, ...]
    verdict: str


def _verdict(rows: Sequence[ProbeRow]) -> str:
    if not rows:
        return "undecided"
    outs = [r.out_val for r in rows]
    if all(o.is_infinite for o in outs):
        return "converges"
    n = len(outs)
    q = max(1, n // 4)
    if min(outs[-q:]) > max(outs[:q]):
        return "converges"
    counts: dict = {}
    for o in outs:
        if o.finite:
            counts[o.value] = counts.get(o.value, 0) + 1
    tail = {o.value for o in outs[-q:] if o.finite}
    if sum(1 for v, c in counts.items() if c >= 2 and v in tail) >= 2:
        return "oscillates"
    second = outs[n // 2:]
    first = outs[: n // 2] or outs[:1]
    if max(second) <= max(first):
        return "bounded"
    return "undecided"


def _distance_val(x, y, p: int) -> ExtendedValuation:
    return nu(Fraction(x) - Fraction(y), p)


def continuity_probe(f, x, generator, N: int, p: int,
                     base=None) -> ProbeReport:
    """Probe continuity of f at x along a sequence x_i -> x.

    Generators: "unit-perturbation" takes x_i = x*(1 + p**i) (x nonzero);
    "power-sequence" takes x_i = base**i converging to x = 0; or pass an
    explicit list of points. The generator must actually converge
    (nondecreasing input valuations, growing over the run).
    """
    require_prime(p)
    x = Fraction(x)
    if generator == "unit-perturbation":
        if x == 0:
            raise GeneratorError("unit perturbation needs a nonzero center")
        points = [x * (1 + Fraction(p) ** i) for i in range(1, N + 1)]
    elif generator == "power-sequence":
        if x != 0:
            raise GeneratorError("power sequence converges to 0 only")
        b = Fraction(base if base is not None else p)
        if nu_int(b, p) < 1:
            raise GeneratorError("power base must be divisible by p")
        points = [b ** i for i in range(1, N + 1)]
    else:
        points = [Fraction(t) for t in generator]
    in_vals = [_distance_val(x, xi, p) for xi in points]
    finite_in = [v for v in in_vals if v.finite]
    if any(b < a for a, b in zip(in_vals, in_vals[1:])) or (
        len(finite_in) > 1 and finite_in[-1] <= finite_in[0]
    ):
        raise GeneratorError("generator does not converge to x")
    fx = f(x)
    rows = tuple(
        ProbeRow(i + 1, in_vals[i], _distance_val(fx, f(points[i]), p))
        for i in range(len(points))
    )
    return ProbeReport(
        "continuity_probe",
        {"map": getattr(f, "label", str(f)), "x": str(x), "p": p,
         "generator": generator if isinstance(generator, str) else "custom",
         "N": N},
        rows,
        _verdict(rows),
    )


def discontinuity_witness(T, p: int, x, N: int) -> ProbeReport:
    """Witness sequence for the failure of continuity of a subderivative
    at a nonzero point, when T contains a prime other than p.

    With q0 the smallest such prime and M = 1, the points are
    x_i = q0**(p**M) * x / q_i for primes q_i = q0**(p**M) + n_i * p**i
    found by incremental search (n_i strictly increasing). Input
    valuations grow at least like i while output valuations stay bounded.
    """
    require_prime(p)
    T = prime_set(T)
    others = [q for q in T if q != p]
    if not others:
        raise DomainError("T must contain a prime different from p")
    x = Fraction(x)
    if x == 0:
        raise DomainError("witness sequences target nonzero points")
    q0 = min(others)
    M = 1
    base = q0 ** (p ** M)
    f = sub_map(T)
    fx = f(x)
    rows = []
    n_i = 0
    for i in range(1, N + 1):
        step = p ** i
        n_i += 1
        tries = 0
        while not is_probable_prime(base + n_i * step):
            n_i += 1
            tries += 1
            if tries > 10 ** 6:
                partial = ProbeReport(
                    "discontinuity_witness",
                    {"T": list(T), "p": p, "x": str(x), "N": N, "q0": q0},
                    tuple(rows),
                    "undecided",
                )
                raise SearchError(
                    f"no prime q_{i} within 10**6 candidates", partial
                )
        q_i = base + n_i * step
        x_i = base * x / q_i
        rows.append(ProbeRow(i, _distance_val(x, x_i, p),
                             _distance_val(fx, f(x_i), p)))
    rows = tuple(rows)
    return ProbeReport(
        "discontinuity_witness",
        {"T": list(T), "p": p, "x": str(x), "N": N, "q0": q0, "M": M},
        rows,
        _verdict(rows),
    )


def strict_diff_probe(f, x, N: int, p: int, pair_base=None) -> ProbeReport:
    """Difference-quotient probe at x.

    At nonzero x the pairs are u_i = x(1 + p**i), v_i = x(1 - p**i); the
    quotient equals f(x)/x exactly once valuations stabilize, and the
    second quotients vanish (recorded in params). At x = 0 the pairs are
    consecutive powers of pair_base (default p); the quotient's p-adic
    valuation then depends on i mod p and never settles.
    """
    require_prime(p)
    x = Fraction(x)
    rows = []
    if x != 0:
        limit = f(x) / x
        phi2_zero = True
        for i in range(1, N + 1):
            u = x * (1 + Fraction(p) ** i)
            v = x * (1 - Fraction(p) ** i)
            q = phi(f, u, v)
            w = x * (1 + Fraction(p) ** (i + 1))
            phi2_zero = phi2_zero and phi2(f, u, v, w) == 0
            rows.append(ProbeRow(i, _distance_val(u, v, p),
                                 nu(q - limit, p), q))
        rows = tuple(rows)
        return ProbeReport(
            "strict_diff_probe",
            {"map": getattr(f, "label", str(f)), "x": str(x), "p": p, "N": N,
             "limit": str(limit), "phi2_constant_zero": phi2_zero},
            rows,
            _verdict(rows),
        )
    b = Fraction(pair_base if pair_base is not None else p)
    if b == 0 or b == 1 or nu_int(b, p) < 1:
        raise GeneratorError("pair base must be divisible by p")
    for i in range(1, N + 1):
        u, v = b ** (i + 1), b ** i
        q = phi(f, u, v)
        rows.append(ProbeRow(i, _distance_val(u, v, p), nu(q, p), q))
    rows = tuple(rows)
    return ProbeReport(
        "strict_diff_probe",
        {"map": getattr(f, "label", str(f)), "x": "0", "p": p, "N": N,
         "pair_base": str(b)},
        rows,
        _verdict(rows),
    )


# -- special witness: CRT construction inside a quadratic field ------------


def _omega_coords(x: QuadraticElement) -> tuple[int, int]:
    """Coordinates of an algebraic integer over the basis (1, omega)."""
    D = x.field.D
    if D % 4 == 1:
        u, v = x.a - x.b, 2 * x.b
    else:
        u, v = x.a, x.b
    if u.denominator != 1 or v.denominator != 1:
        raise DomainError(f"{x} is not an algebraic integer")
    return int(u), int(v)


def _from_omega(K: QuadraticField, u: int, v: int) -> QuadraticElement:
    if K.D % 4 == 1:
        return K.element(Fraction(2 * u + v, 2), Fraction(v, 2))
    return K.element(u, v)


def _omega_root(K: QuadraticField, p: int, m: int, slot: str) -> int:
    """Embedding image of omega modulo p**m for the given split slot."""
    if K.D % 4 != 1:
        r = sqrt_mod_lift(K.D, p, m)
        return r if slot == "plus" else (-r) % p ** m
    if p == 2:
        # omega = (1 + sqrt(D))/2; a root mod 2**(m+1) pins omega mod 2**m
        r = sqrt_mod_lift(K.D, 2, m + 1)
        if slot == "minus":
            r = (-r) % 2 ** (m + 1)
        return (1 + r) // 2 % 2 ** m
    r = sqrt_mod_lift(K.D, p, m)
    if slot == "minus":
        r = (-r) % p ** m
    return (1 + r) * pow(2, -1, p ** m) % p ** m


def _uniformizer_for(K: QuadraticField, p: int) -> QuadraticElement:
    if p == 2 and K.D % 4 == 3:
        return K.element(1, 1)
    return K.element(0, 1)  # sqrt(D), valid whenever p divides D


def _solve_congruences(conditions) -> tuple[int, int]:
    """Solve a*u + b*v = t (mod m) jointly over Z**2.

    The solution set is tracked as an affine lattice x0 + B*Z**2 and
    refined one congruence at a time.
    """
    x0 = (0, 0)
    B = ((1, 0), (0, 1))  # columns are basis vectors
    overall = 1
    for a, b, t, m in conditions:
        overall = overall * m // math.gcd(overall, m)
        g1 = a * B[0][0] + b * B[1][0]
        g2 = a * B[0][1] + b * B[1][1]
        r = (t - a * x0[0] - b * x0[1]) % m
        if g1 == 0 and g2 == 0:
            if r % m:
                raise GeneratorError("incompatible ideal congruences")
            continue
        d = math.gcd(g1, g2)
        gg = math.gcd(d, m)
        if r % gg:
            raise GeneratorError("incompatible ideal congruences")
        # particular solution: p1*g1 + p2*g2 = d, then scale
        p1, p2 = _bezout(g1, g2, d)
        w = r // gg * pow(d // gg, -1, m // gg) % (m // gg)
        s1, s2 = p1 * w, p2 * w
        x0 = (x0[0] + B[0][0] * s1 + B[0][1] * s2,
              x0[1] + B[1][0] * s1 + B[1][1] * s2)
        # homogeneous basis: kernel vector and a lift of lcm(d, m)
        l = m // gg
        h1 = (g2 // d, -(g1 // d))
        h2 = (p1 * l, p2 * l)
        B = (
            (B[0][0] * h1[0] + B[0][1] * h1[1],
             B[0][0] * h2[0] + B[0][1] * h2[1]),
            (B[1][0] * h1[0] + B[1][1] * h1[1],
             B[1][0] * h2[0] + B[1][1] * h2[1]),
        )
    return x0[0] % overall, x0[1] % overall


def _bezout(a: int, b: int, d: int) -> tuple[int, int]:
    g, s, t = _xgcd(a, b)
    assert g == d
    return s, t


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _witness_conditions(K, focus: PrimeIdealRef, others, i: int):
    """Congruence conditions pinning nu_focus(1 - z) = i, nu = 1 at the
    first other ideal (in uniformizer units), and nu = 0 elsewhere."""
    conditions = []
    data_f = splitting(K, focus.p)
    p = focus.p
    if data_f.type == "split":
        om = _omega_root(K, p, i + 1, focus.slot)
        conditions.append((1, om, 1 - p ** i, p ** (i + 1)))
    elif data_f.type == "inert":
        conditions.append((1, 0, 1 - p ** i, p ** (i + 1)))
        conditions.append((0, 1, 0, p ** (i + 1)))
    else:
        pi = _uniformizer_for(K, p)
        w = pi
        for _ in range(2 * i - 1):
            w = w * pi
        wu, wv = _omega_coords(w)  # pi**(2i), normalized order 2i
        mod = p ** (i + 1)
        conditions.append((1, 0, 1 - wu, mod))
        conditions.append((0, 1, -wv, mod))
    for rank, P in enumerate(others):
        q = P.p
        data = splitting(K, q)
        target_one = rank == 0
        if data.type == "split":
            om = _omega_root(K, q, 2, P.slot)
            if target_one:
                conditions.append((1, om, q, q ** 2))
            else:
                conditions.append((1, om % q, 1, q))
        elif data.type == "inert":
            if target_one:
                conditions.append((1, 0, q, q ** 2))
                conditions.append((0, 1, 0, q ** 2))
            else:
                conditions.append((1, 0, 1, q))
                conditions.append((0, 1, 0, q))
        else:
            pi = _uniformizer_for(K, q)
            pu, pv = _omega_coords(pi)
            if target_one:
                conditions.append((1, 0, pu, q))
                conditions.append((0, 1, pv, q))
            else:
                conditions.append((1, 0, 1, q))
                conditions.append((0, 1, 0, q))
    return conditions


def _normalized_val(x: QuadraticElement, P: PrimeIdealRef) -> Fraction:
    v = ideal_valuation(x, P)
    return v.value * splitting(x.field, P.p).e


def special_witness(K: QuadraticField, T, focus: PrimeIdealRef,
                    x: QuadraticElement, N: int) -> ProbeReport:
    """Witness sequence showing a subderivative over at least two ideals
    above one rational prime (or any finite T) fails to be continuous.

    Builds x_i with nu_focus(1 - x_i) = i, uniformizer order 1 at one
    other ideal of T, and order 0 at the rest, by CRT over integral-basis
    coordinates; each witness is re-verified with ideal_valuation before
    use. The probe follows x_i * x and reports the focus-adic distances.
    """
    T = list(T)
    if focus not in T:
        raise DomainError("focus must belong to T")
    others = [P for P in T if P != focus]
    if not others:
        raise DomainError("T must contain an ideal besides the focus")
    if x.is_zero():
        raise DomainError("witness sequences target nonzero points")
    fx = d_K_sub(x, T)
    p1 = others[0]
    rows = []
    for i in range(1, N + 1):
        u, v = _solve_congruences(_witness_conditions(K, focus, others, i))
        z = _from_omega(K, u, v)
        one_minus = K.element(1) - z
        e_f = splitting(K, focus.p).e
        if _normalized_val(one_minus, focus) != e_f * i:
            raise AssertionError("witness missed its focus valuation")
        if _normalized_val(z, p1) != 1:
            raise AssertionError("witness missed its unit-order ideal")
        for P in others[1:]:
            if _normalized_val(z, P) != 0:
                raise AssertionError("witness picked up a stray ideal")
        xi = z * x
        in_v = ideal_valuation(x - xi, focus)
        diff = fx - d_K_sub(xi, T)
        out_v = (ideal_valuation(diff, focus) if not diff.is_zero()
                 else ExtendedValuation.infinity())
        rows.append(ProbeRow(i, in_v, out_v))
    rows = tuple(rows)
    g1 = splitting(K, p1.p).g
    e1 = splitting(K, p1.p).e
    expected = (ideal_valuation(x, focus).value
                + nu(Fraction(1, e1), focus.p).value
                - ideal_valuation(K.element(p1.p), focus).value
                - (nu(Fraction(g1), focus.p).value if g1 > 1 else 0))
    return ProbeReport(
        "special_witness",
        {"field": str(K), "T": [f"{P.p}:{P.slot}" for P in T],
         "focus": f"{focus.p}:{focus.slot}", "x": str(x), "N": N,
         "expected_constant": str(expected)},
        rows,
        _verdict(rows),
    )
