"""Tests for partitions, tableaux counts and Pieri expansions, with brute-force cross-checks."""

from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from src.errors import DomainError
from src.schur import (
    Partition,
    h_product,
    kostka,
    num_standard_tableaux,
    partitions,
    pieri_multiply,
    pieri_summand_certificate,
    schur_dim,
    semistandard_tableaux,
    standard_tableaux,
    tensor_power_decomposition,
    witness_exponents,
)


def P(*parts):
    return Partition(parts)


class TestPartition:
    def test_parse_drops_zeros(self):
        assert Partition.parse("2,1,0") == P(2, 1)
        assert str(P(3, 1)) == "(3,1)"

    def test_rejects_increasing_parts(self):
        with pytest.raises(ValueError):
            P(1, 2)

    def test_conjugate_and_hooks(self):
        assert P(3, 1).conjugate() == P(2, 1, 1)
        assert P(3, 1).hook(0, 0) == 4
        assert P(3, 1).hook(0, 2) == 1

    def test_enumeration(self):
        assert [str(p) for p in partitions(4, 2)] == ["(4)", "(3,1)", "(2,2)"]
        assert len(partitions(5, 5)) == 7
        with pytest.raises(DomainError):
            partitions(0, 3)


class TestDimensions:
    @pytest.mark.parametrize("parts,f", [((3, 1), 3), ((2, 2), 2), ((2, 1), 2), ((3, 2, 1), 16)])
    def test_hook_length(self, parts, f):
        assert num_standard_tableaux(Partition(parts)) == f

    @pytest.mark.parametrize("parts,r,dim", [
        ((2, 1), 2, 2), ((2, 1), 3, 8), ((1, 1), 3, 3), ((2,), 3, 6), ((1, 1, 1), 2, 0),
    ])
    def test_hook_content(self, parts, r, dim):
        assert schur_dim(Partition(parts), r) == dim

    def test_tensor_cube_of_rank_two(self):
        summands = tensor_power_decomposition(3, 2)
        assert [(str(s.partition), s.tableau_multiplicity, s.dimension) for s in summands] == [
            ("(3)", 1, 4), ("(2,1)", 2, 2),
        ]
        assert summands[1].dimension_at_rank(3) == 8

    @settings(deadline=None, max_examples=30)
    @given(n=st.integers(1, 6), r=st.integers(1, 4))
    def test_tensor_power_dimension(self, n, r):
        summands = tensor_power_decomposition(n, r)
        assert sum(s.tableau_multiplicity * s.dimension for s in summands) == r ** n

    @settings(deadline=None, max_examples=10)
    @given(n=st.integers(1, 7))
    def test_standard_tableaux_squares_sum_to_factorial(self, n):
        assert sum(num_standard_tableaux(p) ** 2 for p in partitions(n, n)) == factorial(n)


class TestKostka:
    @pytest.mark.parametrize("shape,content,expected", [
        ((2, 1), (1, 1, 1), 2),
        ((3, 1), (2, 1, 1), 2),
        ((2, 2), (2, 2), 1),
        ((2, 1), (3,), 0),
        ((2, 1), (0, 2, 1), 1),
    ])
    def test_values(self, shape, content, expected):
        assert kostka(Partition(shape), content) == expected

    def test_domain(self):
        with pytest.raises(DomainError):
            kostka(P(2, 1), (1, 1))
        with pytest.raises(DomainError):
            kostka(P(2, 1), (4, -1))

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_against_enumeration(self, n):
        for shape in partitions(n, n):
            assert num_standard_tableaux(shape) == len(list(standard_tableaux(shape)))
            for content in partitions(n, n):
                expected = len(list(semistandard_tableaux(shape, content.parts)))
                assert kostka(shape, content.parts) == expected


class TestPieri:
    def test_multiply(self):
        assert sorted(pieri_multiply((1,), 1)) == [(1, 1), (2,)]
        assert sorted(pieri_multiply((2, 1), 2)) == [(2, 2, 1), (3, 1, 1), (3, 2), (4, 1)]

    def test_h_product(self):
        assert h_product((2, 1)) == {P(3): 1, P(2, 1): 1}
        assert h_product((1, 1, 1)) == {P(3): 1, P(2, 1): 2, P(1, 1, 1): 1}

    def test_h_product_coefficients_are_kostka_numbers(self):
        content = (2, 2, 1)
        for shape, coefficient in h_product(content).items():
            assert coefficient == kostka(shape, content)

    def test_summand_certificate(self):
        assert pieri_summand_certificate(P(2, 1), 2) == 1
        assert pieri_summand_certificate(P(3, 2, 2), 4) == 1
        with pytest.raises(DomainError):
            pieri_summand_certificate(P(1, 1, 1), 2)


class TestWitness:
    def test_division(self):
        witness = witness_exponents(P(5, 1), m=1, q=2, M=3)
        assert (witness.a, witness.b) == ((2, 0), (1, 1))
        assert witness.lhs == witness.rhs == 4
        assert witness.holds is True

    def test_weight_must_be_mq(self):
        with pytest.raises(DomainError):
            witness_exponents(P(5, 1), m=1, q=2, M=2)
        with pytest.raises(DomainError):
            witness_exponents(P(2), m=0, q=2, M=1)

    @settings(deadline=None, max_examples=40)
    @given(m=st.integers(1, 3), q=st.integers(1, 3), M=st.integers(1, 4), data=st.data())
    def test_identity_holds_for_every_partition(self, m, q, M, data):
        shape = data.draw(st.sampled_from(partitions(M * q, M * q)))
        assert witness_exponents(shape, m, q, M).holds
