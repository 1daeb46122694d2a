import random
from fractions import Fraction

import pytest

from arithderiv.derivative import d_full
from arithderiv.errors import DomainError
from arithderiv.exact import factorize, nu_int
from arithderiv.quadfield import (
    GroupDescription,
    PrimeIdealRef,
    QuadraticField,
    d_K,
    d_K_sub,
    d_abstract_rational,
    groups_isomorphic,
    height_vector,
    ideal_valuation,
    ld_K,
    ld_image_generators,
    prime_ideals_over,
    splitting,
)

GAUSS = QuadraticField(-1)


def squarefree_range(lo, hi):
    out = []
    for d in range(lo, hi + 1):
        if d in (0, 1):
            continue
        if all(e == 1 for e in factorize(d).factors.values()):
            out.append(d)
    return out


def random_element(K, rng, span=30):
    while True:
        x = K.element(
            Fraction(rng.randint(-span, span), rng.randint(1, 9)),
            Fraction(rng.randint(-span, span), rng.randint(1, 9)),
        )
        if not x.is_zero():
            return x


class TestField:
    def test_discriminant(self):
        assert QuadraticField(5).discriminant == 5
        assert QuadraticField(-1).discriminant == -4
        assert QuadraticField(3).discriminant == 12

    def test_validation(self):
        for bad in (0, 1, 4, 12, -9):
            with pytest.raises(DomainError):
                QuadraticField(bad)

    def test_norm_multiplicative(self):
        rng = random.Random(61)
        K = QuadraticField(10)
        for _ in range(100):
            x, y = random_element(K, rng), random_element(K, rng)
            assert (x * y).norm() == x.norm() * y.norm()


class TestSplitting:
    def test_examples(self):
        assert splitting(GAUSS, 2).type == "ramified"
        assert splitting(GAUSS, 2).e == 2
        assert splitting(QuadraticField(5), 2).type == "inert"
        assert splitting(QuadraticField(5), 2).f == 2
        assert splitting(GAUSS, 5).type == "split"
        assert splitting(GAUSS, 5).g == 2

    def test_efg_product(self):
        rng = random.Random(67)
        fields = squarefree_range(-200, 200)
        primes = [2, 3, 5, 7, 11, 13, 17, 19, 23]
        for _ in range(1000):
            K = QuadraticField(rng.choice(fields))
            s = splitting(K, rng.choice(primes))
            assert s.e * s.f * s.g == 2

    def test_two_inert_iff_5_mod_8(self):
        for D in squarefree_range(-200, 200):
            inert = splitting(QuadraticField(D), 2).type == "inert"
            assert inert == (D % 8 == 5)


class TestIdealValuation:
    def test_ramified_half(self):
        v = ideal_valuation(GAUSS.element(1, 1), PrimeIdealRef(2))
        assert v.value == Fraction(1, 2) and v.ramification == 2

    def test_split_slots(self):
        x = GAUSS.element(3, 4)
        # canonical root of -1 mod 5 is 2; 3 + 4i lies in the conjugate slot
        assert ideal_valuation(x, PrimeIdealRef(5, "minus")) == 2
        assert ideal_valuation(x, PrimeIdealRef(5, "plus")) == 0

    def test_slot_validation(self):
        with pytest.raises(DomainError):
            ideal_valuation(GAUSS.element(3, 4), PrimeIdealRef(5))
        with pytest.raises(DomainError):
            ideal_valuation(GAUSS.element(1, 1), PrimeIdealRef(2, "plus"))
        with pytest.raises(DomainError):
            ideal_valuation(GAUSS.element(0, 0), PrimeIdealRef(2))

    def test_conjugate_sum_and_additivity(self):
        rng = random.Random(71)
        for _ in range(300):
            D = rng.choice(squarefree_range(-60, 60))
            K = QuadraticField(D)
            p = rng.choice([2, 3, 5, 7, 11, 13])
            x, y = random_element(K, rng), random_element(K, rng)
            for P in prime_ideals_over(K, p):
                assert ideal_valuation(x * y, P).value == \
                    ideal_valuation(x, P).value + ideal_valuation(y, P).value
            if splitting(K, p).type == "split":
                total = sum(
                    ideal_valuation(x, P).value
                    for P in prime_ideals_over(K, p)
                )
                assert total == nu_int(x.norm(), p)


class TestDerivative:
    def test_examples(self):
        two = d_K(GAUSS.element(2))
        assert (two.a, two.b) == (1, 0)  # agrees with the rational derivative
        d1i = d_K(GAUSS.element(1, 1))
        assert (d1i.a, d1i.b) == (Fraction(1, 4), Fraction(1, 4))
        d34 = d_K(GAUSS.element(3, 4))
        assert (d34.a, d34.b) == (Fraction(3, 5), Fraction(4, 5))

    def test_subderivative_examples(self):
        x = GAUSS.element(3, 4)
        only_minus = d_K_sub(x, [PrimeIdealRef(5, "minus")])
        assert (only_minus.a, only_minus.b) == (Fraction(3, 5), Fraction(4, 5))
        only_plus = d_K_sub(x, [PrimeIdealRef(5, "plus")])
        assert only_plus.is_zero()
        two = d_K_sub(GAUSS.element(2), [PrimeIdealRef(2)])
        assert (two.a, two.b) == (1, 0)

    def test_zero(self):
        assert d_K(GAUSS.element(0)).is_zero()

    def test_leibniz(self):
        rng = random.Random(73)
        for _ in range(300):
            K = QuadraticField(rng.choice(squarefree_range(-40, 40)))
            x, y = random_element(K, rng), random_element(K, rng)
            lhs = d_K(x * y)
            rhs = d_K(x) * y + x * d_K(y)
            assert (lhs.a, lhs.b) == (rhs.a, rhs.b)

    def test_restricts_to_rational_derivative(self):
        rng = random.Random(79)
        fields = [QuadraticField(D)
                  for D in rng.sample(squarefree_range(-150, 150), 20)]
        for _ in range(300):
            K = rng.choice(fields)
            r = Fraction(rng.randint(-300, 300) or 7, rng.randint(1, 60))
            out = d_K(K.element(r))
            assert out.b == 0 and out.a == d_full(r)


class TestLogarithmicImage:
    def test_examples(self):
        assert ld_K(GAUSS.element(1, 1)) == Fraction(1, 4)
        assert ld_K(GAUSS.element(1)) == 0
        assert ld_K(GAUSS.element(3, 4)) == Fraction(1, 5)

    def test_homomorphism_and_membership(self):
        rng = random.Random(83)
        for _ in range(200):
            K = QuadraticField(rng.choice(squarefree_range(-40, 40)))
            G = ld_image_generators(K)
            x, y = random_element(K, rng), random_element(K, rng)
            assert ld_K(x * y) == ld_K(x) + ld_K(y)
            # membership: p-part of the denominator divides p**m(p)
            den = ld_K(x).denominator
            for p, e in factorize(den).factors.items() if den > 1 else ():
                assert e <= G.m(p)

    def test_m2_table(self):
        assert ld_image_generators(QuadraticField(5)).m(2) == 1
        assert ld_image_generators(GAUSS).m(2) == 2
        assert ld_image_generators(QuadraticField(3)).m(2) == 2
        for D in squarefree_range(-200, 200):
            m2 = ld_image_generators(QuadraticField(D)).m(2)
            assert m2 in (1, 2)
            assert (m2 == 1) == (D % 8 == 5)

    def test_heights_and_isomorphism(self):
        G_rat = GroupDescription()
        assert height_vector(G_rat, [2, 3, 5]) == [1, 1, 1]
        assert height_vector(ld_image_generators(GAUSS), [2, 3, 5]) == [2, 1, 1]
        assert height_vector(ld_image_generators(QuadraticField(5)), [2, 3]) == [1, 1]
        assert groups_isomorphic(G_rat, ld_image_generators(GAUSS)) == (True, [2])
        assert groups_isomorphic(G_rat, G_rat) == (True, [])
        assert groups_isomorphic(
            ld_image_generators(QuadraticField(5)), G_rat) == (True, [])


class TestAbstractRational:
    def test_examples(self):
        assert d_abstract_rational(6, {2: (1, 1, 2), 3: (2, 1, 1)}) == 5
        assert d_abstract_rational(Fraction(-21, 16), {}) == 2
        assert d_abstract_rational(1, {7: (1, 2, 1)}) == 0

    def test_inconsistent_data(self):
        with pytest.raises(DomainError):
            d_abstract_rational(6, {2: (1, 1, 2), 3: (3, 1, 1)})

    def test_always_matches_full_derivative(self):
        rng = random.Random(89)
        for _ in range(200):
            x = Fraction(rng.randint(-500, 500) or 3, rng.randint(1, 80))
            n = rng.choice([2, 4, 6])
            data = {}
            for p in (2, 3, 5, 7):
                e = rng.choice([d for d in (1, 2, 3, 6) if n % d == 0])
                f = rng.choice([d for d in (1, 2, 3, 6) if (n // e) % d == 0])
                data[p] = (e, f, n // (e * f))
            assert d_abstract_rational(x, data) == d_full(x)
