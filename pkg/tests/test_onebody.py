import math

import numpy as np
import pytest

from threebody1d.errors import BoxTooSmall, GridMismatch, TooFewPoints, UnsupportedTrap
from threebody1d.grids import Grid1D
from threebody1d.models import HarmonicTrap, InfiniteWell, TabulatedTrap
from threebody1d.onebody import (
    analytic_spectrum,
    grid_orbitals_1d,
    grid_spectrum_1d,
    spectrum_to_csv,
)


def quartic_trap(half_width=6.0):
    xs = np.linspace(-half_width, half_width, 4001)
    return TabulatedTrap(tuple(xs), tuple(xs**4))


class TestAnalytic:
    def test_harmonic_ground(self):
        assert analytic_spectrum(HarmonicTrap(1.0), 0).energies[0] == 0.5

    def test_harmonic_n5(self):
        assert analytic_spectrum(HarmonicTrap(1.0), 5).energies[5] == 5.5

    def test_well_ground(self):
        sp = analytic_spectrum(InfiniteWell(math.pi), 1)
        assert sp.energies[0] == pytest.approx(0.5, abs=1e-14)
        assert sp.energies[1] == pytest.approx(2.0, abs=1e-14)

    def test_explicit_units(self):
        sp = analytic_spectrum(HarmonicTrap(2.0), 3, mass=3.0, hbar=1.5)
        assert np.allclose(sp.energies, 1.5 * 2.0 * (np.arange(4) + 0.5))
        spw = analytic_spectrum(InfiniteWell(2.0), 0, mass=2.0, hbar=1.0)
        assert spw.energies[0] == pytest.approx(math.pi**2 / 16)

    def test_unsupported(self):
        with pytest.raises(UnsupportedTrap):
            analytic_spectrum(quartic_trap(), 3)


class TestGrid:
    def test_harmonic_matches_analytic(self):
        sp = grid_spectrum_1d(HarmonicTrap(1.0), Grid1D(-8.0, 8.0, 2000), 5)
        exact = np.arange(6) + 0.5
        assert np.max(np.abs(sp.energies - exact)) < 1e-6
        assert np.all(sp.est_error < 1e-6)

    def test_well_first_excited(self):
        sp = grid_spectrum_1d(InfiniteWell(math.pi),
                              Grid1D(-math.pi / 2, math.pi / 2, 2000), 3)
        assert abs(sp.energies[1] - 2.0) < 1e-5

    def test_quartic_by_grid_halving(self):
        # Richardson-style oracle: two resolutions agreeing to 1e-6 fix
        # the value; the scaling relation E0(x^4) = 2^(-2/3) E0(-d^2 + x^4)
        # ties it to the standard quartic constant as a cross-check.
        fine = grid_spectrum_1d(quartic_trap(), Grid1D(-6.0, 6.0, 2400), 0)
        coarse = grid_spectrum_1d(quartic_trap(), Grid1D(-6.0, 6.0, 1200), 0)
        assert abs(fine.energies[0] - coarse.energies[0]) < 1e-6
        assert fine.energies[0] == pytest.approx(
            2.0 ** (-2.0 / 3.0) * 1.0603620904841829, abs=5e-6)

    def test_count_and_order(self):
        sp = grid_spectrum_1d(HarmonicTrap(1.0), Grid1D(-8.0, 8.0, 512), 7)
        assert len(sp.energies) == 8
        assert np.all(np.diff(sp.energies) > 0)

    def test_monotone_grid_convergence(self):
        errs = []
        for n in (250, 500, 1000):
            sp = grid_spectrum_1d(HarmonicTrap(1.0), Grid1D(-8.0, 8.0, n), 0)
            errs.append(abs(sp.energies[0] - 0.5))
        assert errs[0] > errs[1] > errs[2]

    def test_box_too_small(self):
        with pytest.raises(BoxTooSmall):
            grid_spectrum_1d(HarmonicTrap(1.0), Grid1D(-2.5, 2.5, 256), 5)

    def test_too_few_points(self):
        with pytest.raises(TooFewPoints):
            grid_spectrum_1d(HarmonicTrap(1.0), Grid1D(-8.0, 8.0, 32), 1)

    def test_well_grid_must_match_walls(self):
        with pytest.raises(GridMismatch):
            grid_spectrum_1d(InfiniteWell(2.0), Grid1D(-8.0, 8.0, 256), 1)

    def test_orbitals_orthonormal(self):
        axis = Grid1D(-8.0, 8.0, 512)
        evals, orbs, x = grid_orbitals_1d(HarmonicTrap(1.0), axis, 4)
        dx = x[1] - x[0]
        gram = orbs @ orbs.T * dx
        assert np.max(np.abs(gram - np.eye(5))) < 1e-9
        # ground state of the harmonic trap is a positive gaussian
        assert np.all(orbs[0] > -1e-12)


def test_csv_export():
    sp = analytic_spectrum(HarmonicTrap(1.0), 2)
    text = spectrum_to_csv(sp)
    lines = text.strip().split("\n")
    assert lines[0] == "n,energy,source,est_error"
    assert lines[1].startswith("0,0.5,analytic")
    assert len(lines) == 4
