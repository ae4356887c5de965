"""Loading calculus specs from INI files."""

import pytest

from ncconn.forms import SpecError
from ncconn.specfile import bundled_specs, load, loads

FLAT = """
[algebra]
q = formal

[module]
rank = 2
dagger_signs = -1, -1

[metric]
H11 = 1
H12 = 0
H21 = 0
H22 = 1
"""


def error_for(text):
    with pytest.raises(SpecError) as info:
        loads(text)
    return info.value


class TestLoading:
    def test_minimal(self):
        sf = loads(FLAT)
        assert sf.spec.algebra.formal
        assert sf.options.bound == 1 and sf.options.seed == 0

    def test_bundled_names(self):
        names = bundled_specs()
        for n in ("flat_torus", "broken_symmetry", "conformal_classical", "noncentral_metric"):
            assert n in names

    def test_options(self):
        sf = loads(FLAT + "\n[options]\nseed = 9\nbound = 3\nsamples = 0\n")
        assert (sf.options.seed, sf.options.bound, sf.options.samples) == (9, 3, 0)

    def test_automatic_localisation(self):
        text = FLAT.replace("q = formal", "q = 1").replace("H11 = 1", "H11 = 2 + U + U^-1").replace("H22 = 1", "H22 = 2 + U + U^-1")
        sf = loads(text)
        assert sf.spec.algebra.denominator is not None

    def test_explicit_inverse(self):
        text = FLAT.replace("H11 = 1", "H11 = 2") + "Hinv11 = 1/2\nHinv12 = 0\nHinv21 = 0\nHinv22 = 1\n"
        assert loads(text).spec.metric_inverse[0][0] == loads(text).spec.algebra.parse("1/2")

    def test_differential_section(self):
        sf = load("closed_basis_violation")
        de1 = sf.spec.basis_differentials[0]
        assert de1[(0, 1)] == 1 and de1[(1, 0)] == -1

    def test_missing_file(self, tmp_path):
        with pytest.raises(SpecError) as info:
            load(tmp_path / "absent.ini")
        assert info.value.section == "file"


class TestDiagnostics:
    @pytest.mark.parametrize("old,new,section,key", [
        ("q = formal", "q = 2", "algebra", "q"),
        ("H12 = 0", "H12 = U +", "metric", "H12"),
        ("H22 = 1\n", "", "metric", "H22"),
        ("rank = 2", "rank = 3", "module", "rank"),
        ("rank = 2", "rank = two", "module", "rank"),
        ("dagger_signs = -1, -1", "dagger_signs = -1, x", "module", "dagger_signs"),
        ("dagger_signs = -1, -1", "dagger_signs = 1, 1", "module", "dagger_signs"),
        ("H11 = 1", "H11 = 2 + U", "metric", "H11"),
        ("H12 = 0", "H12 = i", "metric", "H12"),
    ])
    def test_located_errors(self, old, new, section, key):
        err = error_for(FLAT.replace(old, new))
        assert (err.section, err.key) == (section, key)
        assert err.reason

    def test_parse_error_names_position(self):
        err = error_for(FLAT.replace("H12 = 0", "H12 = U $ V"))
        assert "position 2" in err.reason

    def test_unknown_section(self):
        assert error_for(FLAT + "\n[extra]\nx = 1\n").section == "extra"

    def test_missing_metric(self):
        assert error_for("[algebra]\nq = 1\n").section == "metric"

    def test_bad_differential_key(self):
        err = error_for(FLAT + "\n[differential]\nde3_12 = 1\n")
        assert err.section == "differential"

    def test_bad_option(self):
        err = error_for(FLAT + "\n[options]\nbound = -1\n")
        assert (err.section, err.key) == ("options", "bound")

    def test_malformed_ini(self):
        assert error_for("no header\n").section == "file"
