"""One-particle 1D bound-state spectra.

Closed forms cover the harmonic trap and the infinite well; everything
else goes through a finite-difference grid diagonalization.  Smooth
confining traps use a 4th-order stencil (banded, so the eigensolver
cost stays O(N^2)); hard-wall boxes use the plain 3-point stencil,
whose eigenvectors on the box are exact discrete sines.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eig_banded

from .errors import BoxTooSmall, GridMismatch, TooFewPoints, UnsupportedTrap
from .grids import Grid1D
from .models import HarmonicTrap, InfiniteWell


@dataclass(frozen=True)
class OneBodySpectrum:
    """Ordered bound-state energies eps_0 <= eps_1 <= ...

    For the confining potentials supported here 1D bound states are
    non-degenerate, so the sequence is strictly increasing.
    """

    energies: np.ndarray
    source: str  # "analytic" | "grid"
    est_error: np.ndarray | None = None

    @property
    def n_max(self) -> int:
        return len(self.energies) - 1

    def __len__(self):
        return len(self.energies)


def analytic_spectrum(trap, n_max: int, *, mass: float = 1.0,
                      hbar: float = 1.0) -> OneBodySpectrum:
    """Closed-form spectrum for the algebraically solvable traps.

    harmonic:      eps_n = hbar*omega*(n + 1/2)
    infinite well: eps_n = (n+1)^2 pi^2 hbar^2 / (2 m L^2)
    """
    n = np.arange(n_max + 1)
    if isinstance(trap, HarmonicTrap):
        e = hbar * trap.omega * (n + 0.5)
    elif isinstance(trap, InfiniteWell):
        e = (n + 1) ** 2 * math.pi**2 * hbar**2 / (2 * mass * trap.length**2)
    else:
        raise UnsupportedTrap(
            f"no closed form for trap kind {trap.kind!r}; use grid_spectrum_1d")
    return OneBodySpectrum(energies=e.astype(float), source="analytic",
                           est_error=np.zeros(n_max + 1))


def _fd_bands(n: int, dx: float, order: int, mass: float, hbar: float):
    """Lower-band form of the FD kinetic matrix, rows = diagonals 0..b."""
    k = hbar**2 / (2 * mass * dx**2)
    if order == 2:
        bands = np.zeros((2, n))
        bands[0] = 2.0 * k
        bands[1, :-1] = -1.0 * k
    elif order == 4:
        bands = np.zeros((3, n))
        bands[0] = (30.0 / 12.0) * k
        bands[1, :-1] = (-16.0 / 12.0) * k
        bands[2, :-2] = (1.0 / 12.0) * k
    else:
        raise ValueError("order must be 2 or 4")
    return bands


def _solve_banded(x, v, n_max, order, mass, hbar):
    n = len(x)
    bands = _fd_bands(n, x[1] - x[0], order, mass, hbar)
    bands[0] += v
    vals, vecs = eig_banded(bands, lower=True, select="i",
                            select_range=(0, n_max))
    return vals, vecs


def grid_spectrum_1d(trap, grid: Grid1D, n_max: int, *, mass: float = 1.0,
                     hbar: float = 1.0) -> OneBodySpectrum:
    """Lowest n_max+1 eigenvalues of the discretized one-body problem.

    The estimated error attached to each level is the grid-halving
    delta |E(N) - E(N/2)|, a conservative bound for both stencils in
    use.  Raises BoxTooSmall when the highest requested eigenfunction
    has not decayed at the box edges.
    """
    energies, vecs, x = _grid_solve(trap, grid, n_max, mass, hbar)
    half, _, _ = _grid_solve(trap, grid.halved(), n_max, mass, hbar)
    if not isinstance(trap, InfiniteWell):
        # hard walls pin the edges to zero by construction
        edge = np.maximum(np.abs(vecs[0]), np.abs(vecs[-1]))
        peak = np.max(np.abs(vecs), axis=0)
        worst = np.max(edge / peak)
        if worst > 1e-8:
            raise BoxTooSmall(
                f"edge amplitude {worst:.2e} of max exceeds 1e-8; "
                f"enlarge [{grid.x_min}, {grid.x_max}]")
    return OneBodySpectrum(energies=energies, source="grid",
                           est_error=np.abs(energies - half))


def _grid_solve(trap, grid, n_max, mass, hbar):
    if grid.n < 64:
        raise TooFewPoints(f"need at least 64 grid points, got {grid.n}")
    if n_max + 1 > grid.n // 4:
        raise TooFewPoints(f"n_max={n_max} too large for {grid.n} points")
    if isinstance(trap, InfiniteWell):
        width = grid.x_max - grid.x_min
        if abs(width - trap.length) > 1e-9 * trap.length:
            raise GridMismatch(
                f"grid spans {width}, well walls are {trap.length} apart")
        # interior points only; psi = 0 at both walls
        dx = trap.length / (grid.n + 1)
        x = grid.x_min + (np.arange(grid.n) + 1) * dx
        v = np.zeros(grid.n)
        vals, vecs = _solve_banded(x, v, n_max, 2, mass, hbar)
    else:
        x = grid.points()
        v = trap.potential(x, mass=mass)
        vals, vecs = _solve_banded(x, v, n_max, 4, mass, hbar)
    return vals, vecs, x


def grid_orbitals_1d(trap, grid: Grid1D, n_max: int, *, mass: float = 1.0,
                     hbar: float = 1.0):
    """Eigenfunctions on the grid, unit-normalized with the dx weight.

    Returns (energies, orbitals, x) with orbitals of shape
    (n_max+1, len(x)).  The sign convention makes each orbital positive
    at its first appreciable point, so results are reproducible.
    """
    vals, vecs, x = _grid_solve(trap, grid, n_max, mass, hbar)
    dx = x[1] - x[0]
    orbs = vecs.T / math.sqrt(dx)
    for k in range(orbs.shape[0]):
        j = np.argmax(np.abs(orbs[k]) > 1e-3 * np.max(np.abs(orbs[k])))
        if orbs[k, j] < 0:
            orbs[k] = -orbs[k]
    return vals, orbs, x


def spectrum_to_csv(spectrum: OneBodySpectrum) -> str:
    """Columns: n, energy, source, est_error."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "energy", "source", "est_error"])
    err = spectrum.est_error
    for n, e in enumerate(spectrum.energies):
        w.writerow([n, repr(float(e)), spectrum.source,
                    repr(float(err[n])) if err is not None else ""])
    return buf.getvalue()
