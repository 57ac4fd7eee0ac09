import numpy as np
import pytest

from threebody1d.errors import (
    ConfigError,
    ModelValidationError,
    NegativeCoupling,
    NonConfiningTrap,
)
from threebody1d.models import (
    COORDINATE_SYSTEMS,
    ContactInteraction,
    HarmonicInteraction,
    HarmonicTrap,
    InfiniteWell,
    InverseSquareInteraction,
    ModelSpec,
    NoInteraction,
    QuadraticTrap,
    TabulatedTrap,
    UnitsConvention,
    classify_separability,
    classify_symmetry_group,
    collect_violations,
    parse_config,
    validate_model,
)


def asymmetric_trap():
    xs = np.linspace(-8, 8, 801)
    vs = np.where(xs < 0, 0.3 * xs**2, 0.7 * xs**2)
    return TabulatedTrap(tuple(xs), tuple(vs))


def symmetric_tabulated_trap():
    xs = np.linspace(-6, 6, 601)
    return TabulatedTrap(tuple(xs), tuple(xs**4))


class TestValidation:
    def test_wellformed_harmonic(self):
        spec = ModelSpec(HarmonicTrap(1.0), NoInteraction())
        assert validate_model(spec) is spec

    def test_negative_well_length(self):
        with pytest.raises(NegativeCoupling):
            validate_model(ModelSpec(InfiniteWell(-1.0), NoInteraction()))

    def test_nonconfining_tabulated(self):
        xs = np.linspace(-4, 4, 101)
        vs = xs**2.0
        vs[-1] = vs[-2] - 1.0  # decreasing at the right edge
        with pytest.raises(NonConfiningTrap):
            validate_model(ModelSpec(TabulatedTrap(tuple(xs), tuple(vs)),
                                     NoInteraction()))

    def test_negative_gamma(self):
        with pytest.raises(NegativeCoupling):
            validate_model(ModelSpec(HarmonicTrap(1.0), HarmonicInteraction(-0.5)))

    def test_unitary_contact_is_symbolic(self):
        spec = ModelSpec(HarmonicTrap(1.0), ContactInteraction(unitary=True))
        validate_model(spec)
        assert spec.interaction.gamma is None
        bad = ModelSpec(HarmonicTrap(1.0),
                        ContactInteraction(gamma=2.0, unitary=True))
        with pytest.raises(ModelValidationError):
            validate_model(bad)

    def test_contact_requires_gamma(self):
        with pytest.raises(ModelValidationError):
            validate_model(ModelSpec(HarmonicTrap(1.0), ContactInteraction()))

    def test_natural_mode_normalizes_units(self):
        spec = ModelSpec(HarmonicTrap(1.0), NoInteraction(), mass=2.0, hbar=3.0,
                         units=UnitsConvention("natural"))
        out = validate_model(spec)
        assert out.mass == 1.0 and out.hbar == 1.0

    def test_violations_all_collected(self):
        spec = ModelSpec(InfiniteWell(-1.0), HarmonicInteraction(-2.0))
        bad = collect_violations(spec)
        assert len(bad) == 2


class TestSeparability:
    def test_harm_harm_is_gold(self):
        v = classify_separability(ModelSpec(HarmonicTrap(1.0),
                                            HarmonicInteraction(0.5)))
        assert v.grade == "gold"
        assert v.witness == "rectangular"
        assert v.systems["rectangular"] and v.systems["cylindrical"]

    def test_calogero_is_silver(self):
        v = classify_separability(ModelSpec(HarmonicTrap(1.0),
                                            InverseSquareInteraction(1.0)))
        assert v.grade == "silver"
        assert v.witness == "cylindrical"
        assert not v.systems["rectangular"]

    def test_harmonic_free_eight_of_eleven(self):
        v = classify_separability(ModelSpec(HarmonicTrap(1.0), NoInteraction()))
        assert v.grade == "gold"
        assert len(v.separable_systems) == 8
        assert v.systems["spherical"]  # the bronze witness
        assert not v.systems["parabolic"]

    def test_unitary_contact_sector_solvable(self):
        v = classify_separability(ModelSpec(HarmonicTrap(1.0),
                                            ContactInteraction(unitary=True)))
        assert v.grade == "none"
        assert v.sector_solvable
        assert not any(v.systems.values())

    def test_quadratic_with_harmonic_gold(self):
        v = classify_separability(ModelSpec(QuadraticTrap(0.7, 0.2, 0.0),
                                            HarmonicInteraction(0.3)))
        assert v.grade == "gold"

    def test_generic_combination_none(self):
        v = classify_separability(ModelSpec(InfiniteWell(3.0),
                                            HarmonicInteraction(0.3)))
        assert v.grade == "none"

    def test_tabulated_always_none(self):
        v = classify_separability(ModelSpec(symmetric_tabulated_trap(),
                                            NoInteraction()))
        assert v.grade == "none"

    def test_gold_implies_rectangular(self):
        # invariant: gold requires the rectangular entry
        specs = [
            ModelSpec(HarmonicTrap(1.0), NoInteraction()),
            ModelSpec(HarmonicTrap(2.0), HarmonicInteraction(1.0)),
            ModelSpec(QuadraticTrap(1.0), HarmonicInteraction(0.1)),
        ]
        for s in specs:
            v = classify_separability(s)
            assert v.grade == "gold"
            assert v.systems["rectangular"]

    def test_eleven_systems_enumerated(self):
        assert len(COORDINATE_SYSTEMS) == 11
        v = classify_separability(ModelSpec(HarmonicTrap(1.0), NoInteraction()))
        assert set(v.systems) == set(COORDINATE_SYSTEMS)


class TestSymmetryGroup:
    def test_asymmetric_trap_p3(self):
        spec = ModelSpec(asymmetric_trap(), ContactInteraction(gamma=2.0))
        assert classify_symmetry_group(spec).label == "P3"

    def test_symmetric_well_p3xo1(self):
        spec = ModelSpec(InfiniteWell(2.0), ContactInteraction(gamma=2.0))
        sym = classify_symmetry_group(spec)
        assert sym.label == "P3xO(1)"
        assert sym.point_group == "D3d"

    def test_harmonic_d6h_any_interaction(self):
        for inter in (NoInteraction(), HarmonicInteraction(0.5),
                      InverseSquareInteraction(1.0),
                      ContactInteraction(gamma=3.0)):
            sym = classify_symmetry_group(ModelSpec(HarmonicTrap(1.0), inter))
            assert sym.label == "P3xO(1)xO(1)"
            assert sym.point_group == "D6h"
            assert "U(1)" in sym.phase_space

    def test_monotone_in_trap_symmetry(self):
        # adding trap symmetry never shrinks the group
        order = {"P3": 6, "P3xO(1)": 12, "P3xO(1)xO(1)": 24}
        inter = ContactInteraction(gamma=1.0)
        chain = [asymmetric_trap(), symmetric_tabulated_trap(), HarmonicTrap(1.0)]
        labels = [classify_symmetry_group(ModelSpec(t, inter)).label for t in chain]
        sizes = [order[l] for l in labels]
        assert sizes == sorted(sizes)

    def test_units_mode_does_not_change_verdicts(self):
        for units in (UnitsConvention("natural"), UnitsConvention("explicit")):
            spec = ModelSpec(HarmonicTrap(1.0), HarmonicInteraction(0.5),
                             mass=1.0, hbar=1.0, units=units)
            assert classify_separability(spec).grade == "gold"
            assert classify_symmetry_group(spec).label == "P3xO(1)xO(1)"


CONFIG_OK = """
# comment line
trap.kind = harmonic
trap.omega = 1.0
interaction.kind = harmonic
interaction.gamma = 0.5
units.mode = natural
mass = 1.0
hbar = 1.0
"""


class TestConfig:
    def test_parse_valid(self):
        spec = parse_config(CONFIG_OK)
        assert isinstance(spec.trap, HarmonicTrap)
        assert spec.interaction.gamma == 0.5

    def test_unknown_key_reports_line(self):
        text = "trap.kind = harmonic\ntrap.omega = 1.0\nbogus.key = 3\n"
        with pytest.raises(ConfigError) as exc:
            parse_config(text)
        assert exc.value.line == 3
        assert "bogus.key" in str(exc.value)

    def test_missing_required_key(self):
        with pytest.raises(ConfigError, match="interaction.gamma"):
            parse_config("trap.kind = harmonic\ntrap.omega = 1\n"
                         "interaction.kind = harmonic\n")

    def test_duplicate_key(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config("trap.kind = harmonic\ntrap.omega = 1\ntrap.omega = 2\n")

    def test_bad_number(self):
        with pytest.raises(ConfigError, match="not a number"):
            parse_config("trap.kind = harmonic\ntrap.omega = abc\n")

    def test_unitary_gamma_string(self):
        spec = parse_config("trap.kind = harmonic\ntrap.omega = 1\n"
                            "interaction.kind = contact\n"
                            "interaction.gamma = unitary\n")
        assert spec.interaction.unitary

    def test_invalid_model_rejected(self):
        with pytest.raises(ConfigError):
            parse_config("trap.kind = infinite_well\ntrap.length = -2\n")
