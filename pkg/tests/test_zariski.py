"""Tests for Zariski decompositions on the bundled surfaces."""

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Rational

from src.lattice import intersect, nef_test
from src.surface_config import load_surface
from src.zariski import NotPseudoeffective, ZariskiDecomposition, big_test, zariski_decompose

coefficients = st.tuples(st.integers(-3, 6), st.integers(-3, 6), st.integers(-3, 6))


@pytest.mark.parametrize("text,positive,negative", [
    ("C+2Fp", "2L-Fb-Fp", {"Fp": 2}),
    ("C+Fb+2Fp", "2L", {"Fp": 1}),
    ("L+Fb", "L", {"Fb": 1}),
    ("L+Fb+Fp", "L", {"Fb": 1, "Fp": 1}),
    ("6L-2Fb-3Fp", "6L-2Fb-3Fp", {}),
    ("0", "0", {}),
])
def test_known_decompositions(cls, text, positive, negative):
    decomposition = zariski_decompose(cls(text))
    assert isinstance(decomposition, ZariskiDecomposition)
    assert str(decomposition.positive) == positive
    assert decomposition.negative == negative
    assert len(decomposition.check_invariants()) == 5


def test_support_grows_past_initial_negative_curves(cls):
    # only Fb meets L+Fb+Fp negatively, but subtracting Fb/2 makes Fp negative
    d = cls("L+Fb+Fp")
    assert [label for label in ("line", "Fb", "Fp") if intersect(d, cls(label)) < 0] == ["Fb"]
    assert zariski_decompose(d).support == frozenset({"Fb", "Fp"})


def test_not_pseudoeffective(cls):
    result = zariski_decompose(cls("-L"))
    assert isinstance(result, NotPseudoeffective)
    assert str(result.input) == "-L"


def test_big(cls):
    assert big_test(cls("C+2Fp"))
    assert big_test(cls("L+Fb"))
    assert not big_test(cls("L-Fb-Fp"))
    assert not big_test(cls("Fb+Fp"))
    assert not big_test(cls("-Fb"))


def test_big_is_plain_bool(cls):
    assert big_test(cls("C+2Fp")) is True
    assert big_test(cls("L-Fb-Fp")) is False


def test_negative_part_class(cls):
    decomposition = zariski_decompose(cls("C+Fb+2Fp"))
    assert decomposition.negative_part() == cls("Fp")
    assert decomposition.positive + decomposition.negative_part() == cls("C+Fb+2Fp")


@settings(deadline=None, max_examples=60)
@given(coeffs=coefficients)
def test_decomposition_invariants(coeffs):
    surface = load_surface("p2-double-blowup")
    result = zariski_decompose(surface.divisor(coeffs))
    if isinstance(result, NotPseudoeffective):
        return
    result.check_invariants()
    assert nef_test(result.positive)
    assert all(m > 0 for m in result.negative.values())


@settings(deadline=None, max_examples=40)
@given(coeffs=coefficients, factor=st.integers(1, 5))
def test_homogeneous_in_positive_multiples(coeffs, factor):
    surface = load_surface("p2-double-blowup")
    d = surface.divisor(coeffs)
    result = zariski_decompose(d)
    scaled = zariski_decompose(factor * d)
    if isinstance(result, NotPseudoeffective):
        assert isinstance(scaled, NotPseudoeffective)
    else:
        assert scaled == result.scaled(factor)


@settings(deadline=None, max_examples=60)
@given(weights=st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4)),
       epsilon=st.sampled_from([Rational(1, 10), Rational(1, 100)]))
def test_ample_perturbation_shrinks_support(weights, epsilon):
    surface = load_surface("p2-double-blowup")
    d = surface.zero()
    for weight, generator in zip(weights, surface.mori_generators):
        d = d + weight * generator
    perturbed = zariski_decompose(d + epsilon * surface.polarization)
    assert perturbed.support <= zariski_decompose(d).support


def test_memoised_per_class(cls):
    d = cls("C+Fb+2Fp")
    assert zariski_decompose(d) is zariski_decompose(cls("C+Fb+2Fp"))
