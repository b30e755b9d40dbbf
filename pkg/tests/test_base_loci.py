"""Tests for augmented and diminished base loci of divisors and split bundles."""

from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from src.base_loci import (
    EMPTY,
    WHOLE,
    BaseLocusResult,
    SplitBundle,
    b_minus_bundle,
    b_minus_divisor,
    b_minus_pullback_law,
    b_plus_bundle,
    b_plus_divisor,
    b_plus_pullback_law,
    b_plus_pullback_sides,
    direct_sum,
    euler_sequence_witness,
    exceptional_locus,
    l_positive_summand,
    preimage,
    quotient_certificate,
    sym_power,
    tensor,
    twist_normalize,
    v_big,
    v_psef,
)
from src.certificates import double_blowup_map
from src.errors import TwistMismatchError
from src.surface_config import load_surface

small_class = st.tuples(st.integers(-2, 4), st.integers(-2, 3), st.integers(-2, 3))


def _bundle(surface, summands, twist=None):
    return SplitBundle.of([surface.divisor(s) for s in summands],
                          surface.divisor(twist) if twist is not None else None)


class TestDivisorLoci:
    @pytest.mark.parametrize("text,expected", [
        ("L+Fb", "{Fb}"),
        ("L+Fb+Fp", "{Fb, Fp}"),
        ("C+2Fp", "{Fp}"),
        ("0", "empty"),
        ("6L-2Fb-3Fp", "empty"),
        ("-L", "whole"),
    ])
    def test_b_minus(self, cls, text, expected):
        assert str(b_minus_divisor(cls(text))) == expected

    @pytest.mark.parametrize("text,expected", [
        ("6L-2Fb-3Fp", "empty"),
        ("C+2Fp", "{Fp}"),
        ("C+Fb+2Fp", "{Fb, Fp}"),
        ("L+Fb", "{Fb, Fp}"),
        ("L-Fb-Fp", "whole"),
        ("0", "whole"),
    ])
    def test_b_plus(self, cls, text, expected):
        assert str(b_plus_divisor(cls(text))) == expected

    @settings(deadline=None, max_examples=50)
    @given(coeffs=small_class)
    def test_b_minus_inside_b_plus(self, coeffs):
        d = load_surface("p2-double-blowup").divisor(coeffs)
        assert b_minus_divisor(d).issubset(b_plus_divisor(d))


class TestLocusAlgebra:
    def test_union(self):
        a = BaseLocusResult.of_curves(["Fb"])
        assert str(a.union(BaseLocusResult.of_curves(["Fp"]))) == "{Fb, Fp}"
        assert a.union(EMPTY) == a
        assert a.union(WHOLE) == WHOLE

    def test_of_no_curves_is_empty(self):
        assert BaseLocusResult.of_curves([]) == EMPTY

    def test_issubset(self):
        a = BaseLocusResult.of_curves(["Fb"])
        assert EMPTY.issubset(a) and a.issubset(WHOLE)
        assert not WHOLE.issubset(a)


class TestBundles:
    def test_loci_are_unions_over_summands(self, x_surface):
        e = _bundle(x_surface, [(1, 1, 0), (0, 0, 0)])
        assert str(e) == "O(L+Fb) + O(0)"
        assert str(b_minus_bundle(e)) == "{Fb}"
        assert b_plus_bundle(e) == WHOLE
        assert v_psef(e) and not v_big(e)

    def test_twist_enters_every_summand(self, x_surface):
        e = _bundle(x_surface, [(0, 0, 0), (0, 1, 0)], twist=(2, -1, -1))
        assert str(e) == "(O(0) + O(Fb))<2L-Fb-Fp>"
        assert str(b_plus_bundle(e)) == "{Fb, Fp}"
        assert v_big(e)

    def test_trivial_bundle_with_ample_twist_on_p2(self, p2):
        e = _bundle(p2, [(0,), (0,)], twist=("1/2",))
        assert b_plus_bundle(e) == EMPTY
        assert b_minus_bundle(e) == EMPTY
        assert v_big(e)

    def test_rejects_bad_summands(self, x_surface):
        with pytest.raises(ValueError):
            SplitBundle.of([])
        with pytest.raises(ValueError):
            _bundle(x_surface, [("1/2", 0, 0)])

    def test_direct_sum_needs_equal_twists(self, x_surface):
        e = _bundle(x_surface, [(1, 0, 0)], twist=(0, 0, "1/2"))
        with pytest.raises(TwistMismatchError):
            direct_sum(e, _bundle(x_surface, [(1, 0, 0)]))

    def test_twist_normalize_keeps_loci(self, x_surface):
        e = _bundle(x_surface, [(1, 1, 0), (2, 0, 0)], twist=(0, 0, "3/2"))
        normalized = twist_normalize(e, x_surface.divisor((0, 0, 1)))
        assert str(normalized.twist) == "1/2Fp"
        assert b_minus_bundle(normalized) == b_minus_bundle(e)
        assert b_plus_bundle(normalized) == b_plus_bundle(e)
        with pytest.raises(ValueError):
            twist_normalize(e, x_surface.divisor((0, 0, "1/2")))

    @settings(deadline=None, max_examples=30)
    @given(summands=st.lists(small_class, min_size=1, max_size=3), c=st.integers(1, 3))
    def test_symmetric_powers_have_the_same_loci(self, summands, c):
        e = _bundle(load_surface("p2-double-blowup"), summands)
        power = sym_power(e, c)
        assert power.rank == comb(e.rank + c - 1, c)
        assert b_minus_bundle(power) == b_minus_bundle(e)
        assert b_plus_bundle(power) == b_plus_bundle(e)

    @settings(deadline=None, max_examples=30)
    @given(first=st.lists(small_class, min_size=1, max_size=2), second=st.lists(small_class, min_size=1, max_size=2))
    def test_tensor_and_sum_bounds(self, first, second):
        surface = load_surface("p2-double-blowup")
        e, f = _bundle(surface, first), _bundle(surface, second)
        for locus in (b_minus_bundle, b_plus_bundle):
            assert locus(tensor(e, f)).issubset(locus(e).union(b_minus_bundle(f)))
            assert locus(direct_sum(e, f)) == locus(e).union(locus(f))

    def test_tensor_bound_uses_diminished_locus_of_second_factor(self, cls):
        ample, partial = SplitBundle.of([cls("6L-2Fb-3Fp")]), SplitBundle.of([cls("L+Fb")])
        assert str(b_plus_bundle(partial)) == "{Fb, Fp}"
        assert str(b_minus_bundle(partial)) == "{Fb}"
        product = tensor(ample, partial)
        assert str(b_plus_bundle(product)) == "{Fb}"
        assert b_plus_bundle(product).issubset(b_plus_bundle(ample).union(b_minus_bundle(partial)))

    def test_big_tensor_psef_is_big(self, cls):
        big, psef = SplitBundle.of([cls("C+2Fp")]), SplitBundle.of([cls("L+Fb"), cls("0")])
        assert v_big(big) and v_psef(psef) and not v_big(psef)
        assert v_big(tensor(big, psef))


class TestPullback:
    def test_exceptional_locus(self):
        _, f = double_blowup_map()
        assert str(exceptional_locus(f)) == "{Fb, Fp}"

    def test_preimage_of_the_line(self):
        _, f = double_blowup_map()
        assert str(preimage(f, BaseLocusResult.of_curves(["line"]))) == "{Fb, Fp, line}"
        assert preimage(f, EMPTY) == EMPTY

    @pytest.mark.parametrize("degrees", [[1], [2], [0], [-1], [2, 1], [1, -1], [3, 0, 0]])
    def test_laws_on_line_bundle_sums(self, degrees):
        _, f = double_blowup_map()
        hyperplane = f.target.basis_class("L")
        e = SplitBundle.of([d * hyperplane for d in degrees])
        assert b_plus_pullback_law(f, e)
        assert b_minus_pullback_law(f, e)

    def test_b_plus_of_pulled_back_ample(self):
        _, f = double_blowup_map()
        lhs, rhs = b_plus_pullback_sides(f, SplitBundle.of([f.target.basis_class("L")]))
        assert str(lhs) == str(rhs) == "{Fb, Fp}"


class TestExtensions:
    def test_euler_sequence(self):
        witness = euler_sequence_witness()
        assert witness.union == WHOLE
        assert witness.middle == EMPTY
        assert witness.union_exceeds_middle
        assert not witness.middle_exceeds_union

    def test_quotient_lower_bound(self, cls):
        sub = SplitBundle.of([cls("L+Fb")])
        loci = quotient_certificate(sub, SplitBundle.of([cls("L+Fb+Fp")]), SplitBundle.of([cls("0")]))
        assert loci.middle_is_lower_bound
        assert str(loci.union) == "{Fb}"
        assert str(loci.middle) == "{Fb, Fp}"
        assert loci.middle_exceeds_union


class TestLPositivity:
    def test_summand_makes_bundle_l_positive(self, x_surface):
        e = _bundle(x_surface, [(1, 1, 0), (0, 0, -1)])
        assert str(l_positive_summand(e)) == "L+Fb"
        assert str(l_positive_summand(e, big=True)) == "L+Fb"
        assert not v_big(e)

    def test_twist_counts_toward_the_summand(self, x_surface):
        e = _bundle(x_surface, [(0, 0, 0), (0, 1, 0)], twist=(0, "-1/2", 0))
        assert str(l_positive_summand(e)) == "1/2Fb"
        assert l_positive_summand(e, big=True) is None

    @pytest.mark.parametrize("c", [1, 2, 3, 4])
    def test_symmetric_powers_keep_the_scaled_summand(self, x_surface, c):
        e = _bundle(x_surface, [(2, -1, -1), (-1, 0, 0)], twist=(0, 0, "1/2"))
        witness = l_positive_summand(e, big=True)
        assert str(witness) == "2L-Fb-1/2Fp"
        power = sym_power(e, c)
        assert c * witness in power.twisted_summands()
        assert l_positive_summand(power, big=True) is not None

    def test_positivity_can_appear_only_in_a_symmetric_power(self, x_surface):
        e = _bundle(x_surface, [(1, -2, 0), (1, 0, -3)])
        assert l_positive_summand(e) is None
        assert str(l_positive_summand(sym_power(e, 2))) == "2L-2Fb-3Fp"
