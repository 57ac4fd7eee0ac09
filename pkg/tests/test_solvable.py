import math
from collections import Counter

import numpy as np
import pytest

from threebody1d.composition import compose_spectrum
from threebody1d.errors import GridResolutionTooCoarse, TruncationRisk
from threebody1d.grids import Grid1D, PolarGrid
from threebody1d.models import HarmonicTrap
from threebody1d.onebody import analytic_spectrum, grid_orbitals_1d
from threebody1d.solvable import (
    SECTOR_ORDER,
    SectorState,
    bosonic_amplitudes,
    calogero_moser_spectrum,
    cm_angular_exponent,
    contact_levels_to_csv,
    fermionic_amplitudes,
    fit_cm_exponent,
    fit_harm_harm_frequency,
    girardeau_wavefunction,
    harm_harm_spectrum,
    relative_frequency,
    sector_state_to_json,
    silver_levels_to_csv,
    unitary_contact_spectrum,
)


def group_energies(levels, tol=1e-9):
    counts = Counter()
    for lv in levels:
        counts[round(lv.energy / tol) * tol] += 1
    return dict(sorted(counts.items()))


class TestHarmHarm:
    def test_gamma_zero_matches_composition(self, harmonic_sigma1):
        # level-by-level identity with the non-interacting composition
        silver = group_energies(harm_harm_spectrum(1.0, 0.0, 8.6))
        composed = compose_spectrum(harmonic_sigma1, 8.6)
        assert len(silver) == len(composed)
        for (e_s, d_s), lv in zip(silver.items(), composed):
            assert abs(e_s - lv.energy) < 1e-12
            assert d_s == lv.degeneracy

    def test_relative_shell_degeneracy(self):
        # 2 nu + |mu| = 2 admits (1, 0) and (0, +-2)
        levels = [l for l in harm_harm_spectrum(1.0, 0.0, 3.6)
                  if l.eta == 0 and 2 * l.nu + abs(l.mu) == 2]
        assert len(levels) == 3
        assert {(l.nu, l.mu) for l in levels} == {(1, 0), (0, 2), (0, -2)}

    def test_relative_frequency_values(self):
        assert relative_frequency(1.0, 0.0) == 1.0
        assert relative_frequency(1.0, 0.5) == pytest.approx(2.0)
        assert relative_frequency(2.0, 1.0, mass=2.0) == pytest.approx(
            math.sqrt(4.0 + 3.0))

    def test_signed_mu(self):
        levels = harm_harm_spectrum(1.0, 0.25, 5.0)
        assert any(l.mu < 0 for l in levels)
        assert any(l.mu > 0 for l in levels)

    def test_units_rescaling(self):
        m, hb, w, gn = 2.0, 3.0, 1.7, 0.4
        nat = [l.energy for l in harm_harm_spectrum(1.0, gn, 6.0)]
        exp = [l.energy for l in harm_harm_spectrum(
            w, gn * m * w**2, 6.0 * hb * w, mass=m, hbar=hb)]
        assert np.allclose(exp, hb * w * np.array(nat), rtol=1e-12)

    def test_fit_protocol_prefers_derived_radical(self):
        fit = fit_harm_harm_frequency(1.0, 0.5, grid=Grid1D(-7.0, 7.0, 128))
        assert fit.winner == "derived_6g_over_m"
        assert fit.fitted == pytest.approx(2.0, rel=1e-3)
        assert fit.fit_residual < 1e-3


class TestCalogeroMoser:
    def test_exponent_formula(self):
        assert cm_angular_exponent(0.0) == 1.0
        assert cm_angular_exponent(1.0) == pytest.approx((1 + math.sqrt(5)) / 2)
        assert cm_angular_exponent(2.0, mass=2.0, hbar=2.0) == pytest.approx(
            0.5 * (1 + math.sqrt(1 + 4.0)))

    def test_ground_energy(self):
        levels = calogero_moser_spectrum(1.0, 1.0, 8.0)
        assert levels[0].energy == pytest.approx(1.5 * (2 + math.sqrt(5)))
        assert (levels[0].eta, levels[0].nu, levels[0].mu) == (0, 0, 0)

    def test_fermionized_limit(self):
        # gamma -> 0+ reproduces the hard-wall (Tonks-Girardeau) ground energy
        levels = calogero_moser_spectrum(1.0, 1e-12, 6.0)
        assert levels[0].energy == pytest.approx(4.5, abs=1e-5)

    def test_radial_spacing_two_quanta(self):
        levels = calogero_moser_spectrum(1.0, 1.0, 14.0)
        by_qn = {(l.eta, l.nu, l.mu): l.energy for l in levels}
        for (eta, nu, mu), e in by_qn.items():
            nxt = by_qn.get((eta, nu + 1, mu))
            if nxt is not None:
                assert nxt - e == pytest.approx(2.0, abs=1e-12)

    def test_mu_multiples_of_three(self):
        levels = calogero_moser_spectrum(1.0, 1.0, 14.0)
        assert all(l.mu % 3 == 0 for l in levels)
        nonzero = sorted({abs(l.mu) for l in levels if l.mu != 0})
        assert nonzero[0] == 3

    def test_units_rescaling(self):
        m, hb, w, gn = 0.5, 2.0, 1.3, 0.7
        nat = [l.energy for l in calogero_moser_spectrum(1.0, gn, 9.0)]
        exp = [l.energy for l in calogero_moser_spectrum(
            w, gn * hb**2 / m, 9.0 * hb * w, mass=m, hbar=hb)]
        assert np.allclose(exp, hb * w * np.array(nat), rtol=1e-12)

    def test_fit_protocol_prefers_derived_radical(self):
        fit = fit_cm_exponent(1.0, 1.0,
                              grid=PolarGrid(7.5, 120, math.pi / 6, math.pi / 2, 80))
        assert fit.winner == "derived_4mg"
        assert fit.fitted == pytest.approx((1 + math.sqrt(5)) / 2, abs=2e-3)

    def test_requires_positive_gamma(self):
        with pytest.raises(ValueError):
            calogero_moser_spectrum(1.0, 0.0, 5.0)


class TestUnitaryContact:
    def test_ground_is_fermionic_filling(self, harmonic_sigma1):
        levels = unitary_contact_spectrum(harmonic_sigma1, 7.0)
        assert levels[0].energy == pytest.approx(4.5)
        assert levels[0].base == (0, 1, 2)

    def test_every_level_sixfold(self, harmonic_sigma1):
        levels = unitary_contact_spectrum(harmonic_sigma1, 9.0)
        assert all(lv.degeneracy == 6 for lv in levels)

    def test_energies_subset_of_composition(self, harmonic_sigma1):
        contact = {round(lv.energy, 9)
                   for lv in unitary_contact_spectrum(harmonic_sigma1, 8.6)}
        composed = {round(lv.energy, 9)
                    for lv in compose_spectrum(harmonic_sigma1, 8.6)}
        assert contact <= composed

    def test_truncation_risk(self, harmonic_sigma1):
        with pytest.raises(TruncationRisk):
            unitary_contact_spectrum(
                analytic_spectrum(HarmonicTrap(1.0), 4), 9.0)

    def test_sector_basis(self, harmonic_sigma1):
        lv = unitary_contact_spectrum(harmonic_sigma1, 5.0)[0]
        basis = lv.sector_basis()
        assert len(basis) == 6
        amps = np.array([s.amplitudes for s in basis])
        assert np.allclose(amps, np.eye(6))

    def test_sector_state_validation(self):
        with pytest.raises(AssertionError):
            SectorState((0, 2, 1), np.ones(6) / math.sqrt(6))


@pytest.fixture(scope="module")
def harmonic_orbitals():
    axis = Grid1D(-7.0, 7.0, 64)
    evals, orbs, _ = grid_orbitals_1d(HarmonicTrap(1.0), axis, 4)
    return axis, evals, orbs


class TestGirardeau:
    def test_fermionic_pattern_is_global_slater(self, harmonic_orbitals):
        axis, _, orbs = harmonic_orbitals
        wf = girardeau_wavefunction((0, 1, 2), fermionic_amplitudes(), orbs, axis)
        # independent construction: the Slater determinant, term by term
        from itertools import permutations

        det = np.zeros((axis.n,) * 3)
        for p in permutations(range(3)):
            sgn = (-1) ** sum(1 for i in range(3) for j in range(i + 1, 3)
                              if p[i] > p[j])
            det += sgn * (orbs[p[0]][:, None, None] * orbs[p[1]][None, :, None]
                          * orbs[p[2]][None, None, :])
        det /= np.linalg.norm(det) * math.sqrt(wf.cell_volume)
        diff = min(np.max(np.abs(wf.values - det)), np.max(np.abs(wf.values + det)))
        assert diff < 1e-12

    def test_bosonic_pattern_is_absolute_value(self, harmonic_orbitals):
        axis, _, orbs = harmonic_orbitals
        wf_f = girardeau_wavefunction((0, 1, 2), fermionic_amplitudes(), orbs, axis)
        wf_b = girardeau_wavefunction((0, 1, 2), bosonic_amplitudes(), orbs, axis)
        assert np.allclose(np.abs(wf_b.values), np.abs(wf_f.values), atol=1e-12)
        assert np.min(wf_b.values) >= -1e-12  # |det| is non-negative for 012

    def test_vanishes_on_coincidence_manifold(self, harmonic_orbitals):
        axis, _, orbs = harmonic_orbitals
        wf = girardeau_wavefunction((0, 1, 3), bosonic_amplitudes(), orbs, axis)
        x = axis.points()
        x1, x2, x3 = np.meshgrid(x, x, x, indexing="ij")
        plane = (x1 == x2) | (x2 == x3) | (x1 == x3)
        assert np.max(np.abs(wf.values[plane])) == 0.0

    def test_eigen_residual_under_masked_hamiltonian(self, harmonic_orbitals):
        from threebody1d.models import ContactInteraction, ModelSpec
        from threebody1d.oracle import apply_hamiltonian

        axis, evals, orbs = harmonic_orbitals
        spec = ModelSpec(HarmonicTrap(1.0), ContactInteraction(unitary=True))
        e = float(evals[0] + evals[1] + evals[2])
        for amps in (fermionic_amplitudes(), bosonic_amplitudes()):
            wf = girardeau_wavefunction((0, 1, 2), amps, orbs, axis)
            hw = apply_hamiltonian(spec, wf)
            resid = (np.linalg.norm(hw.values - e * wf.values)
                     * math.sqrt(wf.cell_volume))
            assert resid < 2e-2 * e

    def test_coarse_grid_raises(self):
        axis = Grid1D(-7.0, 7.0, 16)
        orbs = np.zeros((3, 16))
        with pytest.raises(GridResolutionTooCoarse):
            girardeau_wavefunction((0, 1, 2), fermionic_amplitudes(), orbs, axis)


def test_csv_and_json_exports(harmonic_sigma1):
    text = silver_levels_to_csv("harm_harm", harm_harm_spectrum(1.0, 0.5, 4.6))
    assert text.splitlines()[0] == "model,eta,nu,mu,energy,degeneracy"
    levels = unitary_contact_spectrum(harmonic_sigma1, 6.0)
    ctext = contact_levels_to_csv(levels)
    assert "unitary_contact,0,1,2,4.5,6" in ctext
    j = sector_state_to_json(levels[0].sector_basis()[0])
    assert '"base": [0, 1, 2]' in j
    assert str(list(SECTOR_ORDER[0])) in j
