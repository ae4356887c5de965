"""Exterior derivative, junk projection and the centred calculus axioms."""

import pytest

from ncconn.calculus import P, Q, antisym, check_centred_axioms, d0, d1, junk_projection, sigma_can
from ncconn.forms import dag
from ncconn.sampling import random_element, random_form, random_tensor

from conftest import spec_named


class TestExteriorDerivative:
    def test_d0_leibniz(self, spec, rng):
        a, b = random_element(spec.algebra, rng), random_element(spec.algebra, rng)
        assert d0(spec, a * b) == d0(spec, a) * b + a * d0(spec, b)

    def test_d_squared_vanishes(self, spec, rng):
        a = random_element(spec.algebra, rng)
        assert d1(spec, d0(spec, a)) == 0

    def test_graded_leibniz(self, spec, rng):
        w = random_form(spec, rng)
        a = random_element(spec.algebra, rng)
        # d(w a) = dw a - (1 - Psi)(w (x) da)
        assert d1(spec, w * a) == d1(spec, w) * a - antisym(w.otimes(d0(spec, a)))

    def test_constants_are_closed(self, spec):
        assert d0(spec, spec.algebra.scalar(3)) == 0

    def test_d_of_generator(self):
        s = spec_named("flat_torus")
        assert d0(s, s.algebra.U) == s.e(0, s.algebra.i * s.algebra.U)


class TestProjections:
    def test_psi_idempotent(self, spec, rng):
        t = random_tensor(spec, rng, 2)
        assert junk_projection(junk_projection(t)) == junk_projection(t)

    def test_sigma_involution(self, spec, rng):
        t = random_tensor(spec, rng, 2)
        assert sigma_can(sigma_can(t)) == t

    def test_psi_commutes_with_dagger(self, spec, rng):
        t = random_tensor(spec, rng, 2)
        assert dag(spec, junk_projection(t)) == junk_projection(dag(spec, t))

    def test_P_Q_are_projections(self, spec, rng):
        t = random_tensor(spec, rng, 3)
        assert P(P(t)) == P(t)
        assert Q(Q(t)) == Q(t)

    def test_braid_relation(self, spec, rng):
        # sigma_12 sigma_23 sigma_12 = sigma_23 sigma_12 sigma_23
        t = random_tensor(spec, rng, 3)
        assert t.swap(0).swap(1).swap(0) == t.swap(1).swap(0).swap(1)


class TestAxioms:
    def test_regular_specs_pass(self, spec):
        rep = check_centred_axioms(spec)
        assert rep.passed, [r for r in rep.results if not r.passed]
        assert len(rep.results) == 11

    def test_broken_symmetry_has_witness(self):
        rep = check_centred_axioms(spec_named("broken_symmetry"))
        assert not rep.passed
        assert not rep["g symmetric"].passed
        assert "g(sigma(" in rep["g symmetric"].witness
        assert rep["metric hermitian"].passed

    def test_closed_basis_violation(self):
        rep = check_centred_axioms(spec_named("closed_basis_violation"))
        r = rep["junk in image of psi"]
        assert not r.passed and "d1(d0(" in r.witness

    def test_unknown_axiom_name(self, spec):
        with pytest.raises(KeyError):
            check_centred_axioms(spec)["no such axiom"]

    def test_extra_samples(self, spec, rng):
        samples = [random_element(spec.algebra, rng) for _ in range(3)]
        assert check_centred_axioms(spec, samples).passed
