import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from pointscatter import amplitudes as amp
from pointscatter.errors import (
    OnShellAtomError,
    SupportMismatchError,
    ValidationError,
)
from pointscatter.kernel import Dispersion, varpi

D1 = Dispersion(1.0)

finite_complex = st.complex_numbers(min_magnitude=0.0, max_magnitude=10.0,
                                    allow_nan=False, allow_infinity=False)
band_locations = st.floats(min_value=-0.95, max_value=0.95)


def band_amplitudes():
    atoms = st.lists(st.tuples(band_locations, finite_complex), max_size=4)
    return st.builds(
        lambda ats, bg: amp.GeneralizedAmplitude(tuple(ats), bg, amp.BAND),
        atoms, finite_complex)


class TestConstruction:
    def test_coincident_atoms_merge(self):
        a = amp.GeneralizedAmplitude(((0.5, 1.0), (0.5, 2.0 + 1.0j)), 0j, amp.BAND)
        assert len(a.atoms) == 1
        assert a.atoms[0].weight == 3.0 + 1.0j

    def test_atoms_sorted_by_location(self):
        a = amp.GeneralizedAmplitude(((0.7, 1.0), (-0.2, 1.0), (0.1, 1.0)))
        assert [at.location for at in a.atoms] == [-0.2, 0.1, 0.7]

    def test_zero_weight_atoms_are_kept(self):
        a = amp.GeneralizedAmplitude(((1.0, 0j),), 0j, amp.FULL_LINE)
        assert len(a.atoms) == 1

    def test_bad_support_rejected(self):
        with pytest.raises(ValidationError):
            amp.GeneralizedAmplitude((), 0j, "half-line")

    def test_nonfinite_location_rejected(self):
        with pytest.raises(ValidationError):
            amp.GeneralizedAmplitude(((math.inf, 1.0),))


class TestAdd:
    def test_zero_identity(self):
        a = amp.GeneralizedAmplitude(((0.5, 1.0 + 2.0j),), 3.0j, amp.BAND)
        assert amp.add(a, amp.zero_amplitude(amp.BAND)) == a

    def test_same_location_weights_merge(self):
        a = amp.GeneralizedAmplitude(((0.5, 1.0),), 0j, amp.BAND)
        b = amp.GeneralizedAmplitude(((0.5, 2.0),), 0j, amp.BAND)
        assert amp.add(a, b).atoms[0].weight == 3.0 + 0j

    def test_backgrounds_sum(self):
        a = amp.GeneralizedAmplitude((), 1.0, amp.BAND)
        b = amp.GeneralizedAmplitude((), 1.0j, amp.BAND)
        assert amp.add(a, b).background == 1.0 + 1.0j

    def test_support_mismatch(self):
        with pytest.raises(SupportMismatchError):
            amp.add(amp.zero_amplitude(amp.BAND), amp.zero_amplitude(amp.FULL_LINE))


class TestProjectBand:
    def test_inside_atom_unchanged(self):
        a = amp.GeneralizedAmplitude(((0.5, 1.0),), 0j, amp.FULL_LINE)
        p = amp.project_band(a, D1)
        assert p.support == amp.BAND
        assert p.atoms == a.atoms

    def test_edge_atoms_dropped_background_kept(self):
        a = amp.GeneralizedAmplitude(((1.0, 2.0), (-1.0, 3.0)), 5.0j, amp.FULL_LINE)
        p = amp.project_band(a, D1)
        assert p.atoms == ()
        assert p.background == 5.0j
        assert p.support == amp.BAND

    @given(band_amplitudes())
    def test_idempotent(self, a):
        once = amp.project_band(a, D1)
        assert amp.project_band(once, D1) == once


class TestIntegrateInverseVarpi:
    def test_source_atom_gives_two_pi(self):
        p0 = -0.4
        a = amp.GeneralizedAmplitude(
            ((p0, 2.0 * math.pi * varpi(p0, D1)),), 0j, amp.BAND)
        v = amp.integrate_inverse_varpi(a, amp.BAND_DOMAIN, D1)
        assert abs(v - 2.0 * math.pi) < 1e-14

    def test_band_background_gives_pi_exactly(self):
        a = amp.GeneralizedAmplitude((), 1.0, amp.BAND)
        assert amp.integrate_inverse_varpi(a, amp.BAND_DOMAIN, D1) == complex(math.pi)

    def test_cutoff_line_background(self):
        a = amp.GeneralizedAmplitude((), 1.0, amp.FULL_LINE)
        v = amp.integrate_inverse_varpi(a, amp.cutoff_line(10.0), D1)
        expected = complex(math.pi, -2.0 * math.acosh(10.0))
        assert abs(v - expected) < 1e-13

    def test_band_support_ignores_cutoff_domain(self):
        # a band amplitude's background lives on (-k, k) only
        a = amp.GeneralizedAmplitude((), 1.0, amp.BAND)
        v = amp.integrate_inverse_varpi(a, amp.cutoff_line(10.0), D1)
        assert v == complex(math.pi)

    def test_evanescent_atom_contributes_imaginary(self):
        p = math.sqrt(2.0)
        a = amp.GeneralizedAmplitude(((p, 1.0),), 0j, amp.FULL_LINE)
        v = amp.integrate_inverse_varpi(a, amp.cutoff_line(10.0), D1)
        assert abs(v - 1.0 / varpi(p, D1)) < 1e-15

    def test_band_domain_skips_outside_atoms(self):
        a = amp.GeneralizedAmplitude(((2.0, 1.0), (0.5, 1.0)), 0j, amp.FULL_LINE)
        v = amp.integrate_inverse_varpi(a, amp.BAND_DOMAIN, D1)
        assert abs(v - 1.0 / varpi(0.5, D1)) < 1e-15

    def test_on_shell_atom_is_typed_error(self):
        a = amp.GeneralizedAmplitude(((1.0, 2.0),), 0j, amp.FULL_LINE)
        with pytest.raises(OnShellAtomError) as err:
            amp.integrate_inverse_varpi(a, amp.cutoff_line(10.0), D1)
        assert err.value.location == 1.0

    def test_zero_weight_on_shell_atom_is_fine(self):
        a = amp.GeneralizedAmplitude(((1.0, 0j),), 1.0, amp.BAND)
        assert amp.integrate_inverse_varpi(a, amp.BAND_DOMAIN, D1) == complex(math.pi)

    def test_cutoff_must_exceed_k(self):
        a = amp.GeneralizedAmplitude((), 1.0, amp.FULL_LINE)
        with pytest.raises(ValidationError):
            amp.integrate_inverse_varpi(a, amp.cutoff_line(0.5), D1)

    @given(band_amplitudes(), band_amplitudes(), finite_complex, finite_complex)
    def test_linearity(self, a, b, ca, cb):
        lhs = amp.integrate_inverse_varpi(
            amp.add(amp.scale(a, ca), amp.scale(b, cb)), amp.BAND_DOMAIN, D1)
        rhs = (ca * amp.integrate_inverse_varpi(a, amp.BAND_DOMAIN, D1)
               + cb * amp.integrate_inverse_varpi(b, amp.BAND_DOMAIN, D1))
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs), abs(rhs))

    def test_against_brute_force_quadrature(self, rng):
        for _ in range(5):
            n = rng.integers(0, 4)
            atoms = tuple((float(rng.uniform(-0.8, 0.8)),
                           complex(rng.normal(), rng.normal())) for _ in range(n))
            bg = complex(rng.normal(), rng.normal())
            a = amp.GeneralizedAmplitude(atoms, bg, amp.BAND)
            v = amp.integrate_inverse_varpi(a, amp.BAND_DOMAIN, D1)
            # oracle: QAWS quadrature for the background, direct sum for atoms
            band, _ = integrate.quad(lambda q: 1.0, -1.0, 1.0,
                                     weight="alg", wvar=(-0.5, -0.5))
            oracle = bg * band + sum(
                w / math.sqrt((1.0 - p) * (1.0 + p)) for p, w in
                ((at.location, at.weight) for at in a.atoms))
            assert abs(v - oracle) < 1e-10


class TestIncidentWave:
    def test_transverse_momentum(self):
        w = amp.IncidentWave(2.0, math.pi)
        assert abs(w.p0) < 1e-15
        assert abs(w.varpi0 - 2.0) < 1e-15

    def test_oblique_incidence(self):
        w = amp.IncidentWave(1.0, 2.0 * math.pi / 3.0)
        assert abs(w.p0 - math.sin(2.0 * math.pi / 3.0)) < 1e-15
        assert 0.0 < w.varpi0 < 1.0

    def test_delta_source_weight(self):
        w = amp.IncidentWave(1.0, math.pi)
        src = w.delta_source(amp.BAND)
        assert src.atoms[0].location == w.p0
        assert abs(src.atoms[0].weight - 2.0 * math.pi * w.varpi0) < 1e-14

    @pytest.mark.parametrize("theta0", [0.5 * math.pi, 1.5 * math.pi, 0.0, 5.0])
    def test_grazing_and_left_incidence_rejected(self, theta0):
        with pytest.raises(ValidationError):
            amp.IncidentWave(1.0, theta0)

    def test_bad_wavenumber(self):
        with pytest.raises(ValidationError):
            amp.IncidentWave(0.0, math.pi)
