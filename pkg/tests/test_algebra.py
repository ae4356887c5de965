"""Quantum torus kernel: relations, star, derivations, parsing, localisation."""

import random

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from ncconn.algebra import FORMAL, ONE, NotInvertible, ParseError, QuantumTorus, format_element, rep_check
from ncconn.algebra.gauss import gmul, ipow
from ncconn.algebra.rep import represent

from conftest import elements

A = QuantumTorus(FORMAL)
C = QuantumTorus(ONE)


class TestRelations:
    def test_commutation_relation(self):
        U, V, q = A.U, A.V, A.q
        assert V * U == q * U * V

    def test_frozen_product(self):
        # (U^2 V)(U^-1 V^3) = q^-1 U V^4
        lhs = A.parse("U^2*V") * A.parse("U^-1*V^3")
        assert lhs == A.monomial(1, 4, -1)
        assert str(lhs) == "q^-1*U*V^4"

    def test_frozen_star(self):
        assert (A.U * A.V).star() == A.q * A.U ** -1 * A.V ** -1

    def test_q_is_unitary_and_central(self):
        assert A.q.star() * A.q == A.one
        assert A.q.is_central()

    def test_classical_mode_is_commutative(self):
        assert C.U * C.V == C.V * C.U
        assert C.q == C.one

    def test_mixed_algebras_refuse_to_combine(self):
        with pytest.raises(ValueError):
            A.U + C.U


class TestRingLaws:
    @given(elements(A), elements(A), elements(A))
    def test_associative(self, a, b, c):
        assert (a * b) * c == a * (b * c)

    @given(elements(A), elements(A), elements(A))
    def test_distributive(self, a, b, c):
        assert a * (b + c) == a * b + a * c
        assert (a + b) * c == a * c + b * c

    @given(elements(A), elements(A))
    def test_star_is_antimultiplicative(self, a, b):
        assert (a * b).star() == b.star() * a.star()

    @given(elements(A))
    def test_star_is_involutive(self, a):
        assert a.star().star() == a

    @given(elements(A), st.sampled_from([(1, 0), (0, 1), (0, 2)]))
    def test_star_is_antilinear(self, a, c):
        z = (mpq(c[0]), mpq(c[1]))
        conj = (z[0], -z[1])
        assert a.scale(z).star() == a.star().scale(conj)


class TestDerivations:
    @given(elements(A), elements(A), st.sampled_from([1, 2]))
    def test_leibniz(self, a, b, j):
        assert (a * b).partial(j) == a.partial(j) * b + a * b.partial(j)

    @given(elements(A), st.sampled_from([1, 2]))
    def test_hermitian(self, a, j):
        assert a.star().partial(j) == a.partial(j).star()

    def test_values_on_generators(self):
        assert A.U.partial(1) == A.i * A.U
        assert A.U.partial(2) == 0
        assert A.V.partial(2) == A.i * A.V

    def test_partials_commute(self):
        x = A.parse("U^2*V - 3*q*U^-1*V^2")
        assert x.partial(1).partial(2) == x.partial(2).partial(1)

    def test_quotient_rule_in_localisation(self):
        L = QuantumTorus(ONE, C.parse("2 + U + U^-1"))
        h = L.parse("2 + U + U^-1")
        hinv = h.inverse()
        assert (h * hinv) == L.one
        assert hinv.partial(1) == -(hinv * hinv * h.partial(1))


class TestRepresentation:
    def test_generators_at_q_equals_i(self):
        U, V = represent(A.U), represent(A.V)
        assert U[1][1] == (mpq(0), mpq(1))
        assert represent(A.V * A.U) == represent(A.U * A.V.scale((mpq(0), mpq(1))))
        assert V[0][1] == (mpq(1), mpq(0))

    def test_hundred_random_pairs(self):
        rng = random.Random(7)

        def rand():
            return A.element({
                (rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(-2, 2)): (mpq(rng.randint(-5, 5)), mpq(rng.randint(-5, 5)))
                for _ in range(rng.randint(1, 4))
            })

        assert all(rep_check(rand(), rand()) for _ in range(100))

    def test_wrong_q_exponent_is_detected(self):
        # multiplication that forgets the twist q^{n m'} must fail the check
        def naive(a, b):
            out = A.zero
            for (m, n, t), c in a.terms.items():
                for (m2, n2, t2), c2 in b.terms.items():
                    out = out + A.monomial(m + m2, n + n2, t + t2, gmul(c, c2))
            return out

        assert not rep_check(A.V, A.U, naive)
        assert rep_check(A.V, A.U)

    def test_q_maps_to_i(self):
        assert represent(A.q) == represent(A.one.scale(ipow(1)))


class TestInverse:
    def test_monomials(self):
        x = A.monomial(2, -1, 3, (mpq(2), mpq(1)))
        assert x * x.inverse() == A.one
        assert x.inverse() * x == A.one

    def test_non_unit_rejected(self):
        with pytest.raises(NotInvertible):
            C.parse("2 + U + U^-1").inverse()

    def test_localised_scalar_at_formal_q(self):
        L = QuantumTorus(FORMAL, A.parse("3 + q + q^-1"))
        h = L.parse("3 + q + q^-1")
        assert h * h.inverse() == L.one
        assert (h * h).inverse() * h == h.inverse()

    def test_formal_localisation_needs_central_element(self):
        with pytest.raises(ValueError):
            QuantumTorus(FORMAL, A.parse("2 + U + U^-1"))

    def test_canonical_form_cancels_denominators(self):
        L = QuantumTorus(ONE, C.parse("2 + U + U^-1"))
        h = L.parse("2 + U + U^-1")
        x = (h * h) * h.inverse()
        assert x == h and x.den == 0


class TestParser:
    @pytest.mark.parametrize("text,expected", [
        ("3", "3"),
        ("1/2i", "1/2i"),
        ("q*U", "q*U"),
        ("(U + V)^2", None),
        ("U^-1 + 2 + U", "U^-1 + 2 + U"),
        ("-i*V", "-i*V"),
    ])
    def test_known_inputs(self, text, expected):
        x = A.parse(text)
        if expected is not None:
            assert str(x) == expected
        assert A.parse(str(x)) == x

    def test_square_expands_with_twist(self):
        assert A.parse("(U + V)^2") == A.parse("U^2 + U*V + V*U + V^2")
        assert A.parse("V*U") == A.parse("q*U*V")

    @given(elements(A))
    def test_round_trip(self, x):
        assert A.parse(format_element(x)) == x

    def test_round_trip_with_denominator(self):
        L = QuantumTorus(ONE, C.parse("2 + U + U^-1"))
        x = L.parse("(U - U^-1) / (2 + U + U^-1)")
        assert x.den == 1
        assert L.parse(str(x)) == x

    @pytest.mark.parametrize("text,pos", [
        ("U + ", 4),
        ("U ** V", 3),
        ("U $ V", 2),
        ("(U + V", 6),
        ("W", 0),
    ])
    def test_errors_carry_position(self, text, pos):
        with pytest.raises(ParseError) as info:
            A.parse(text)
        assert info.value.position == pos

    def test_division_by_non_unit(self):
        with pytest.raises(ParseError):
            C.parse("1 / (2 + U)")
