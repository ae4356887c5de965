"""Connections: Levi-Civita construction, its properties, proof identities, curvature."""

import pytest
from gmpy2 import mpq

from ncconn.calculus import P, Q, antisym, d0
from ncconn.connection import (
    LEFT,
    RIGHT,
    Connection,
    W_tensor,
    bimodule_witness,
    conjugate,
    correction_tensor,
    curvature,
    grassmann_connection,
    hermitian_defect,
    hermitian_witness,
    is_bimodule_connection,
    is_hermitian,
    is_torsion_free,
    levi_civita,
    torsion,
    torsion_witness,
    zero_connection,
)
from ncconn.forms import alpha_right, dag, generating_pair_from_basis
from ncconn.sampling import random_element, random_form

from conftest import spec_named

TWO = (mpq(2), mpq(0))
FOUR = (mpq(4), mpq(0))
G1, GM1 = (mpq(1), mpq(0)), (mpq(-1), mpq(0))


class TestLeviCivita:
    def test_properties(self, spec):
        c = levi_civita(spec)
        assert hermitian_witness(c) is None
        assert torsion_witness(c) is None
        assert bimodule_witness(c) is None

    def test_properties_on_random_forms(self, spec, rng):
        c = levi_civita(spec)
        samples = [random_element(spec.algebra, rng) for _ in range(3)]
        assert is_hermitian(c, samples)
        assert is_torsion_free(c, samples)
        assert is_bimodule_connection(c, samples)

    def test_properties_with_localised_samples(self, rng):
        s = spec_named("conformal_classical")
        c = levi_civita(s)
        samples = [random_element(s.algebra, rng, fractions=True) for _ in range(4)]
        assert any(a.den for a in samples)
        assert is_hermitian(c, samples) and is_torsion_free(c, samples) and is_bimodule_connection(c, samples)

    def test_flat_specs_have_zero_christoffels(self):
        for name in ("flat_torus", "flat_torus_classical", "scalar_conformal", "qconformal"):
            s = spec_named(name)
            assert levi_civita(s) == zero_connection(s)

    def test_independent_of_generating_pair(self, spec):
        gp = generating_pair_from_basis(spec, [[G1, G1], [G1, GM1]])
        assert levi_civita(spec, gp) == levi_civita(spec)

    def test_right_leibniz(self, spec, rng):
        c = levi_civita(spec)
        w = random_form(spec, rng)
        a = random_element(spec.algebra, rng)
        assert c(w * a) == c(w) * a + w.otimes(d0(spec, a))

    def test_conformal_is_not_flat(self):
        s = spec_named("conformal_classical")
        assert levi_civita(s) != zero_connection(s)


class TestGrassmann:
    def test_hermitian_everywhere(self, spec):
        assert is_hermitian(grassmann_connection(spec))

    def test_has_torsion_on_curved_specs(self):
        for name in ("conformal_classical", "sheared_classical"):
            assert not is_torsion_free(grassmann_connection(spec_named(name)))


class TestDefects:
    def test_perturbation_breaks_hermitian(self, spec):
        c = levi_civita(spec)
        bad = c.perturbed(0, spec.tensor(2, {(0, 0): spec.algebra.one}))
        assert not is_hermitian(bad)
        assert hermitian_witness(bad).startswith("x = ")

    def test_symmetric_perturbation_keeps_torsion_free(self, spec):
        c = levi_civita(spec)
        delta = spec.tensor(2, {(0, 1): spec.algebra.i, (1, 0): spec.algebra.i})
        assert is_torsion_free(c.perturbed(0, delta))

    def test_antisymmetric_perturbation_adds_torsion(self, spec):
        c = levi_civita(spec)
        delta = spec.tensor(2, {(0, 1): spec.algebra.one, (1, 0): -spec.algebra.one})
        assert not is_torsion_free(c.perturbed(0, delta))

    def test_zero_connection_defect_on_conformal(self):
        s = spec_named("conformal_classical")
        d = hermitian_defect(zero_connection(s), s.e(0), s.e(0))
        assert d != 0

    def test_conjugate_is_involutive(self, spec):
        c = levi_civita(spec)
        assert conjugate(conjugate(c)) == c
        assert conjugate(c).orientation == LEFT

    def test_left_torsion_free(self, spec):
        left = conjugate(levi_civita(spec))
        T = torsion(left)
        assert all(T(spec.e(k)) == 0 for k in range(spec.rank))

    def test_connection_needs_two_tensors(self, spec):
        with pytest.raises(ValueError):
            Connection(spec, (spec.tensor(1), spec.tensor(1)), RIGHT)
        with pytest.raises(ValueError):
            Connection(spec, (spec.tensor(2), spec.tensor(2)), "up")


class TestProofIdentities:
    def test_two_P_Q(self, spec):
        W = W_tensor(spec)
        x = Q(W).scale(TWO) - W
        assert P(x).scale(TWO) - x == dag(spec, W)

    def test_QPQ(self, spec):
        W = W_tensor(spec)
        assert Q(P(Q(W))).scale(FOUR) - Q(W) == 0

    def test_correction_antisymmetrises_to_W(self, spec):
        A = alpha_right(spec, correction_tensor(spec), 1)
        B = alpha_right(spec, W_tensor(spec), 1)
        for k in range(spec.rank):
            assert antisym(A(spec.e(k))) == B(spec.e(k))

    def test_W_nonzero_on_curved_specs(self):
        for name in ("conformal_classical", "sheared_classical"):
            assert W_tensor(spec_named(name)) != 0


class TestCurvature:
    def test_flat_specs(self):
        for name in ("flat_torus", "flat_torus_classical", "scalar_conformal", "qconformal"):
            s = spec_named(name)
            R = curvature(levi_civita(s))
            assert all(R(s.e(k)) == 0 for k in range(2))

    def test_right_module_map(self, spec, rng):
        R = curvature(levi_civita(spec))
        w = random_form(spec, rng)
        a = random_element(spec.algebra, rng)
        assert R(w * a) == R(w) * a

    def test_antisymmetric_in_last_slots(self, spec, rng):
        R = curvature(levi_civita(spec))
        r = R(random_form(spec, rng))
        assert r.swap(1) == -r

    def test_left_curvature_is_dagger_of_right(self, spec, rng):
        c = levi_civita(spec)
        R, L = curvature(c), curvature(conjugate(c))
        w = random_form(spec, rng)
        assert dag(spec, R(w)) == L(dag(spec, w))

    def test_conformal_curvature_nonzero(self):
        s = spec_named("conformal_classical")
        assert curvature(levi_civita(s))(s.e(0)) != 0
