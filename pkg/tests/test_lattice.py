"""Tests for the intersection lattice, cone tests and blow-ups."""

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, Rational

from src.errors import InvariantViolation, LatticeMismatchError, UnknownLabelError
from src.lattice import (
    SurfaceLattice,
    ample_test,
    blow_up,
    hyperplane_lattice,
    intersect,
    nef_test,
    psef_certificate,
    psef_test,
)
from src.surface_config import load_surface

rationals = st.builds(Rational, st.integers(-12, 12), st.integers(1, 4))
classes = st.tuples(rationals, rationals, rationals)


class TestIntersections:
    def test_conic_pairings(self, cls):
        conic = cls("C")
        assert intersect(conic, conic) == 3
        assert intersect(conic, cls("Fp")) == 0
        assert intersect(conic, cls("Fb")) == 1
        assert intersect(conic, cls("line")) == 1

    def test_pullback_of_line(self, cls):
        assert intersect(cls("L"), cls("L")) == 1

    def test_catalog_self_intersections(self, x_surface):
        assert {r.label: r.self_intersection for r in x_surface.curve_catalog} == {
            "line": -1, "Fb": -2, "Fp": -1,
        }

    def test_bilinear_in_rationals(self, cls):
        half = cls("1/2Fp")
        assert intersect(half, cls("Fb")) == Rational(1, 2)

    def test_different_lattices_rejected(self, p2, x_surface):
        with pytest.raises(LatticeMismatchError):
            intersect(p2.basis_class("L"), x_surface.basis_class("L"))

    @settings(deadline=None, max_examples=100)
    @given(first=classes, second=classes, third=classes, a=rationals, b=rationals)
    def test_symmetric_and_bilinear(self, first, second, third, a, b):
        surface = load_surface("p2-double-blowup")
        d1, d2, d3 = surface.divisor(first), surface.divisor(second), surface.divisor(third)
        assert intersect(d1, d2) == intersect(d2, d1)
        assert intersect(a * d1 + b * d2, d3) == a * intersect(d1, d3) + b * intersect(d2, d3)


class TestConeTests:
    @pytest.mark.parametrize("text", ["L", "C", "C+Fb+Fp", "L-Fb-Fp", "2L-Fb-2Fp"])
    def test_nef(self, cls, text):
        assert nef_test(cls(text))

    @pytest.mark.parametrize("text", ["Fb", "Fp", "line", "C+2Fp"])
    def test_not_nef(self, cls, text):
        assert not nef_test(cls(text))

    def test_ample_threshold(self, cls):
        assert not ample_test(cls("3L-2Fb-3Fp"))
        assert ample_test(cls("4L-2Fb-3Fp"))
        assert ample_test(cls("6L-2Fb-3Fp"))

    def test_nef_boundary_is_not_ample(self, cls):
        assert nef_test(cls("L")) and not ample_test(cls("L"))

    def test_ample_is_plain_bool(self, cls):
        assert ample_test(cls("4L-2Fb-3Fp")) is True
        assert ample_test(cls("L")) is False

    def test_psef(self, cls):
        assert psef_test(cls("Fb"))
        assert psef_test(cls("L+Fb"))
        assert not psef_test(cls("-Fp"))
        assert not psef_test(cls("Fb-Fp-L"))

    def test_psef_certificate_reproduces_class(self, x_surface, cls):
        d = cls("2L+Fb")
        coefficients = psef_certificate(d)
        assert coefficients is not None and all(c >= 0 for c in coefficients)
        total = x_surface.zero()
        for c, g in zip(coefficients, x_surface.mori_generators):
            total = total + c * g
        assert total == d

    def test_zero_is_psef(self, x_surface):
        assert psef_certificate(x_surface.zero()) == (0, 0, 0)

    @settings(deadline=None, max_examples=500)
    @given(coeffs=classes)
    def test_ample_implies_nef_implies_psef(self, coeffs):
        d = load_surface("p2-double-blowup").divisor(coeffs)
        if ample_test(d):
            assert nef_test(d)
        if nef_test(d):
            assert psef_test(d)


class TestLatticeInvariants:
    def test_presets_validate(self, p2, x_surface):
        p2.validate()
        x_surface.validate()

    def test_gram_must_be_hyperbolic(self):
        with pytest.raises(InvariantViolation):
            SurfaceLattice("bad", ["A", "B"], [[1, 0], [0, 1]], mori_generators=[(1, 0), (0, 1)],
                           polarization=(1, 1))

    def test_negative_curve_must_be_a_generator(self):
        with pytest.raises(InvariantViolation, match="Mori generators"):
            SurfaceLattice("bad", ["L", "E"], [[1, 0], [0, -1]], curves=[("E", (0, 1))],
                           mori_generators=[(1, -1)], polarization=(2, -1))

    def test_unknown_label(self, x_surface):
        with pytest.raises(UnknownLabelError):
            x_surface.curve("conic")
        with pytest.raises(UnknownLabelError):
            x_surface.resolve_name("G")

    def test_aliases(self, x_surface):
        assert x_surface.basis_class("F̄") == x_surface.basis_class("Fb")
        assert x_surface.basis_class("F′") == x_surface.basis_class("Fp")

    def test_class_text(self, cls):
        assert str(cls("C")) == "2L-Fb-Fp"
        assert str(cls("0")) == "0"
        assert str(cls("1/2L-3/2Fp")) == "1/2L-3/2Fp"


class TestBlowUp:
    def test_single_blow_up(self, p2):
        surface, blowdown = blow_up(p2)
        assert surface.gram == Matrix([[1, 0], [0, -1]])
        assert blowdown.contracted_curves == frozenset({"E1"})

    def test_double_blow_up_matches_preset(self, p2, x_surface):
        first, f1 = blow_up(p2, center_on="line", exceptional_label="Fb")
        surface, f2 = blow_up(first, center_on=("Fb", "line"), exceptional_label="Fp",
                              name="p2-double-blowup")
        assert surface == x_surface
        assert surface.basis_labels == ("L", "Fb", "Fp")
        assert surface.gram == Matrix([[1, 0, 0], [0, -2, 1], [0, 1, -1]])
        assert {r.label: str(r.divisor) for r in surface.curve_catalog} == {
            "line": "L-Fb-2Fp", "Fb": "Fb", "Fp": "Fp",
        }
        assert str(surface.polarization) == "4L-2Fb-3Fp"

        composite = f2.compose(f1)
        assert composite.target == p2
        assert composite.contracted_curves == frozenset({"Fb", "Fp"})
        assert str(composite.pullback(p2.basis_class("L"))) == "L"

    def test_strict_transform_drops_self_intersection(self, p2):
        surface, _ = blow_up(p2, center_on="line")
        assert surface.curve("line").self_intersection == 0

    def test_pullback_preserves_intersections(self, p2):
        surface, blowdown = blow_up(p2, center_on="line")
        pulled = blowdown.pullback(3 * p2.basis_class("L"))
        assert intersect(pulled, pulled) == 9
        assert intersect(pulled, surface.curve("E1").divisor) == 0

    def test_unknown_centre(self, p2):
        with pytest.raises(UnknownLabelError):
            blow_up(p2, center_on="conic")

    def test_exceptional_label_collision(self, x_surface):
        with pytest.raises(InvariantViolation):
            blow_up(x_surface, center_on="Fp", exceptional_label="Fb")

    def test_pullback_from_wrong_lattice(self, p2, x_surface):
        _, blowdown = blow_up(p2)
        with pytest.raises(LatticeMismatchError):
            blowdown.pullback(x_surface.basis_class("L"))

    @settings(deadline=None, max_examples=50)
    @given(first=st.tuples(rationals, rationals), second=st.tuples(rationals, rationals))
    def test_projection_formula_on_random_classes(self, first, second):
        first_blow_up, _ = blow_up(load_surface("p2"), center_on="line", exceptional_label="Fb")
        _, blowdown = blow_up(first_blow_up, center_on=("Fb", "line"), exceptional_label="Fp")
        d1, d2 = first_blow_up.divisor(first), first_blow_up.divisor(second)
        pulled1, pulled2 = blowdown.pullback(d1), blowdown.pullback(d2)
        assert intersect(pulled1, pulled2) == intersect(d1, d2)
        for label in blowdown.contracted_curves:
            assert intersect(pulled1, blowdown.source.curve(label).divisor) == 0


def test_hyperplane_lattice_matches_p2(p2):
    assert hyperplane_lattice(2) == p2
    assert hyperplane_lattice(4).ambient_dim == 4
    with pytest.raises(ValueError):
        hyperplane_lattice(0)
