"""Non-interacting three-particle spectra composed from a one-body spectrum."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import TruncationRisk
from .onebody import OneBodySpectrum

CLASS_SIZE = {"nondegenerate": 1, "threefold": 3, "sixfold": 6}


def multiset_class(ms) -> str:
    """Degeneracy class of one multiset {n1 <= n2 <= n3}."""
    a, b, c = ms
    if a == b == c:
        return "nondegenerate"
    if a == b or b == c:
        return "threefold"
    return "sixfold"


@dataclass(frozen=True)
class SpectrumLevel:
    energy: float
    degeneracy: int
    multisets: tuple  # sorted (n1, n2, n3) tuples at this energy
    classes: tuple  # per-multiset class tags
    accidental: bool  # more than one multiset coincides here

    def __post_init__(self):
        assert self.degeneracy == sum(CLASS_SIZE[c] for c in self.classes)


def _as_energies(sigma1):
    if isinstance(sigma1, OneBodySpectrum):
        return np.asarray(sigma1.energies, dtype=float), sigma1
    return np.asarray(sigma1, dtype=float), None


def default_group_tolerance(sigma1) -> float:
    """Energy equivalence tolerance for grouping composed levels.

    Analytic spectra get 1e-9 * max(1, |E|); numeric spectra widen to
    10x their own grid-error estimate because nearby levels cannot be
    distinguished below the discretization error anyway.
    """
    eps, spec = _as_energies(sigma1)
    base = 1e-9
    if spec is not None and spec.source == "grid" and spec.est_error is not None:
        base = max(base, 10.0 * float(np.max(spec.est_error)))
    return base


def compose_spectrum(sigma1, e_max: float, tol_group: float | None = None):
    """All three-particle levels with energy <= e_max.

    Enumerates multisets n1 <= n2 <= n3 over the one-body spectrum,
    groups them by energy and classifies each group.  Raises
    TruncationRisk unless 2*eps0 + eps_nmax > e_max, which guarantees
    no admissible multiset is lost to the one-body cutoff.
    """
    eps, _ = _as_energies(sigma1)
    if len(eps) < 1:
        raise TruncationRisk("empty one-body spectrum")
    if e_max < 3 * eps[0] - 1e-12:
        return []
    if 2 * eps[0] + eps[-1] <= e_max:
        raise TruncationRisk(
            f"one-body spectrum too shallow: 2*eps0 + eps_max = "
            f"{2 * eps[0] + eps[-1]:.6g} <= e_max = {e_max:.6g}")
    if tol_group is None:
        tol_group = default_group_tolerance(sigma1)

    entries = []
    n = len(eps)
    for i in range(n):
        if 3 * eps[i] > e_max:
            break
        for j in range(i, n):
            if eps[i] + 2 * eps[j] > e_max:
                break
            for k in range(j, n):
                e = eps[i] + eps[j] + eps[k]
                if e > e_max:
                    break
                entries.append((e, (i, j, k)))
    entries.sort(key=lambda t: (t[0], t[1]))

    levels = []
    pos = 0
    while pos < len(entries):
        e0 = entries[pos][0]
        group = [entries[pos][1]]
        pos += 1
        while pos < len(entries):
            e = entries[pos][0]
            if e - e0 > tol_group * max(1.0, abs(e0)):
                break
            group.append(entries[pos][1])
            pos += 1
        classes = tuple(multiset_class(ms) for ms in group)
        energy = float(np.mean([eps[a] + eps[b] + eps[c] for a, b, c in group]))
        levels.append(SpectrumLevel(
            energy=energy,
            degeneracy=sum(CLASS_SIZE[c] for c in classes),
            multisets=tuple(group),
            classes=classes,
            accidental=len(group) > 1,
        ))
    return levels


def detect_accidental(levels):
    """Energies whose degeneracy exceeds the largest single-multiset class.

    Those are the candidate accidental (or emergent) degeneracies: the
    permutation classes alone cannot account for them.
    """
    report = []
    for lv in levels:
        if lv.degeneracy > max(CLASS_SIZE[c] for c in lv.classes):
            report.append({
                "energy": lv.energy,
                "degeneracy": lv.degeneracy,
                "multisets": lv.multisets,
            })
    return report


def total_state_count(levels) -> int:
    """Sum of degeneracies = number of ordered triples in the window."""
    return sum(lv.degeneracy for lv in levels)


def levels_to_csv(levels) -> str:
    """Columns: E, degeneracy, class_list, accidental."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["E", "degeneracy", "class_list", "accidental"])
    for lv in levels:
        tags = ";".join(
            f"{'+'.join(map(str, ms))}:{c}" for ms, c in zip(lv.multisets, lv.classes))
        w.writerow([repr(lv.energy), lv.degeneracy, tags, int(lv.accidental)])
    return buf.getvalue()
