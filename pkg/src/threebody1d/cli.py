"""Batch command-line front end.

Exit codes: 0 success, 1 internal failure, 2 config error, 3 check
failure.  Every output directory receives exactly one manifest.json;
all other outputs are byte-identical across reruns with the same
config and seed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .composition import compose_spectrum, levels_to_csv
from .errors import ConfigError, NonIntegerMultiplicity, ThreeBodyError
from .models import (
    HarmonicInteraction,
    InverseSquareInteraction,
    classify_separability,
    classify_symmetry_group,
    load_config,
)
from .onebody import analytic_spectrum
from .solvable import (
    calogero_moser_spectrum,
    contact_levels_to_csv,
    fit_cm_exponent,
    fit_harm_harm_frequency,
    harm_harm_spectrum,
    silver_levels_to_csv,
    unitary_contact_spectrum,
)
from .symmetry import (
    build_group,
    decompose_eigenspace,
    decompositions_to_json,
    irrep_towers,
    orbit_rep_for_multisets,
    sector_permutation_rep,
)

MODELS = ("noninteracting", "harm-harm", "calogero", "unitary-contact")
CHECKS = ("oracle", "ladder", "invariants", "schmidt", "gold")


def _require_omega(spec):
    if not spec.harmonic_like:
        raise ConfigError("this model needs a harmonic trap (key 'trap.omega')")
    return spec.effective_omega()


def _require_gamma(spec, kinds, model):
    inter = spec.interaction
    if inter.kind not in kinds:
        raise ConfigError(
            f"model {model!r} needs interaction.kind in {kinds}, "
            f"got {inter.kind!r}")
    if inter.kind == "contact":
        if not inter.unitary:
            raise ConfigError(
                "model 'unitary-contact' needs interaction.gamma = unitary")
        return None
    if inter.gamma is None:
        raise ConfigError(f"missing required key 'interaction.gamma' for {model!r}")
    return inter.gamma


def _spectrum_csv(spec, model, emax):
    if model == "noninteracting":
        omega = _require_omega(spec)
        n_need = max(4, int(emax / (spec.hbar * omega)) + 2)
        sigma1 = analytic_spectrum(spec.trap, n_need, mass=spec.mass,
                                   hbar=spec.hbar)
        return levels_to_csv(compose_spectrum(sigma1, emax))
    if model == "harm-harm":
        omega = _require_omega(spec)
        gamma = _require_gamma(spec, ("harmonic",), model)
        levels = harm_harm_spectrum(omega, gamma, emax, mass=spec.mass,
                                    hbar=spec.hbar)
        return silver_levels_to_csv("harm_harm", levels)
    if model == "calogero":
        omega = _require_omega(spec)
        gamma = _require_gamma(spec, ("inverse_square",), model)
        levels = calogero_moser_spectrum(omega, gamma, emax, mass=spec.mass,
                                         hbar=spec.hbar)
        return silver_levels_to_csv("calogero_moser", levels)
    if model == "unitary-contact":
        omega = _require_omega(spec)
        _require_gamma(spec, ("contact",), model)
        n_need = max(8, int(emax / (spec.hbar * omega)) + 2)
        sigma1 = analytic_spectrum(spec.trap, n_need, mass=spec.mass,
                                   hbar=spec.hbar)
        return contact_levels_to_csv(unitary_contact_spectrum(sigma1, emax))
    raise ConfigError(f"unknown model {model!r}")


def cmd_spectrum(args) -> int:
    spec = load_config(args.config)
    csv_text = _spectrum_csv(spec, args.model, args.emax)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "levels.csv").write_text(csv_text, encoding="utf-8")
    return 0


def cmd_irreps(args) -> int:
    spec = load_config(args.config)
    omega = _require_omega(spec)
    decomps = []
    group = build_group("S3")
    if args.model == "unitary-contact":
        _require_gamma(spec, ("contact",), args.model)
        sigma1 = analytic_spectrum(
            spec.trap, max(8, int(args.emax / (spec.hbar * omega)) + 2),
            mass=spec.mass, hbar=spec.hbar)
        mats = sector_permutation_rep(group)
        for lv in unitary_contact_spectrum(sigma1, args.emax):
            decomps.append((lv.energy, decompose_eigenspace(group, mats, lv.energy)))
    elif args.model == "noninteracting":
        sigma1 = analytic_spectrum(
            spec.trap, max(4, int(args.emax / (spec.hbar * omega)) + 2),
            mass=spec.mass, hbar=spec.hbar)
        for lv in compose_spectrum(sigma1, args.emax):
            mats, _ = orbit_rep_for_multisets(lv.multisets, group)
            decomps.append((lv.energy, decompose_eigenspace(group, mats, lv.energy)))
    else:
        raise ConfigError(
            f"irreps supports noninteracting and unitary-contact, got {args.model!r}")
    towers = irrep_towers(decomps)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "irreps.json").write_text(decompositions_to_json(decomps) + "\n",
                                     encoding="utf-8")
    towers_json = {
        label: [[float(e), int(m)] for e, m in rows]
        for label, rows in towers.items()
    }
    (out / "towers.json").write_text(
        json.dumps(towers_json, indent=2, sort_keys=True) + "\n",
        encoding="utf-8")
    return 0


def cmd_classify(args) -> int:
    spec = load_config(args.config)
    verdict = classify_separability(spec)
    sym = classify_symmetry_group(spec)
    names = ", ".join(verdict.separable_systems) or "-"
    print(f"separability: {verdict.grade}"
          + (f" (witness {verdict.witness})" if verdict.witness else ""))
    print(f"separable systems: {names}")
    if verdict.sector_solvable:
        print("sector-solvable: yes (unitary contact limit)")
    print(f"symmetry group: {sym.label} ~ {sym.point_group}")
    print(f"phase space: {sym.phase_space}")
    return 0


def _run_checks(spec, which: str):
    from . import dynamics

    reports = []
    if which in ("ladder",):
        reports.append(dynamics.ladder_check(omega=_require_omega(spec), n=40,
                                             mass=spec.mass, hbar=spec.hbar))
    elif which == "invariants":
        reports.append(dynamics.superintegrability_check(
            n=10, omega=_require_omega(spec), mass=spec.mass, hbar=spec.hbar))
    elif which == "schmidt":
        rng = np.random.default_rng(0)
        d_spatial, d_spin = 12, 8
        tensor = rng.standard_normal((d_spatial, d_spin)) * 1.0 \
            + 1j * rng.standard_normal((d_spatial, d_spin))
        energies = np.sort(rng.uniform(0.5, 8.0, d_spatial))[:, None]
        state = dynamics.TruncatedState(tensor, energies=energies)
        reports.append(dynamics.schmidt_invariance_check(
            state, dynamics.TPSBipartition((0,), (1,)),
            rng.uniform(0.0, 50.0, 50), hbar=spec.hbar))
    elif which == "gold":
        reports.append(dynamics.gold_locality_check(spec, n=8))
    elif which == "oracle":
        omega = _require_omega(spec)
        inter = spec.interaction
        if isinstance(inter, InverseSquareInteraction):
            fit = fit_cm_exponent(omega, inter.gamma, mass=spec.mass,
                                  hbar=spec.hbar)
            shipped = fit.candidates["derived_4mg"]
        else:
            gamma = inter.gamma if isinstance(inter, HarmonicInteraction) else 0.0
            fit = fit_harm_harm_frequency(omega, gamma, mass=spec.mass,
                                          hbar=spec.hbar)
            shipped = fit.candidates["derived_6g_over_m"]
        rel_err = abs(fit.fitted - shipped) / shipped
        reports.append(dynamics.CheckReport(
            "oracle", 1e-4, rel_err,
            details={"fitted": fit.fitted, "winner": fit.winner,
                     "candidates": fit.candidates,
                     "fit_residual": fit.fit_residual}))
    else:
        raise ConfigError(f"unknown check {which!r}")
    return reports


def cmd_verify(args) -> int:
    spec = load_config(args.config)
    reports = _run_checks(spec, args.check)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    payload = [json.loads(r.to_json()) for r in reports]
    (out / "report.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    for r in reports:
        status = "pass" if r.passed else "FAIL"
        print(f"{r.check}: max_residual={r.max_residual:.3e} "
              f"tol={r.tolerance:.0e} {status}")
    return 0 if all(r.passed for r in reports) else 3


def _write_manifest(args, t0: float):
    out = getattr(args, "out", None)
    if out is None:
        return
    manifest = {
        "command": args.command,
        "config": str(args.config),
        "output_dir": str(out),
        "seed": args.seed,
        "tool_version": __version__,
        "wall_time_s": round(time.perf_counter() - t0, 6),
    }
    Path(out).mkdir(parents=True, exist_ok=True)
    (Path(out) / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="threebody1d",
        description="Spectra, symmetries and entanglement structures of "
                    "three particles in one dimension")
    ap.add_argument("--seed", type=int, default=0,
                    help="seed recorded in the manifest and used by "
                         "stochastic checks")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="tabulate a model spectrum")
    sp.add_argument("--config", required=True)
    sp.add_argument("--model", required=True, choices=MODELS)
    sp.add_argument("--emax", type=float, required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_spectrum)

    vf = sub.add_parser("verify", help="run a verification suite")
    vf.add_argument("--config", required=True)
    vf.add_argument("--check", required=True, choices=CHECKS)
    vf.add_argument("--out", required=True)
    vf.set_defaults(func=cmd_verify)

    ir = sub.add_parser("irreps", help="per-level irrep multiplicities")
    ir.add_argument("--config", required=True)
    ir.add_argument("--model", required=True, choices=MODELS)
    ir.add_argument("--emax", type=float, required=True)
    ir.add_argument("--out", required=True)
    ir.set_defaults(func=cmd_irreps)

    cl = sub.add_parser("classify", help="separability and symmetry verdicts")
    cl.add_argument("--config", required=True)
    cl.set_defaults(func=cmd_classify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        code = args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NonIntegerMultiplicity as exc:
        print(f"check failure: {exc}", file=sys.stderr)
        return 3
    except ThreeBodyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _write_manifest(args, t0)
    return code


if __name__ == "__main__":
    sys.exit(main())
