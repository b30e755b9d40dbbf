"""Cohomology of split bundles on projective space and the vanishing table for S^{nl}E(l) on P^2."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from itertools import combinations_with_replacement

from sympy import Rational, binomial

from .base_loci import SplitBundle
from .errors import DomainError
from .lattice import hyperplane_lattice

logger = logging.getLogger(__name__)

# E = M^v(-1) sits in 0 -> O(-4) -> O(-1)^3 -> E -> 0 on P^2
LCOUNTER_KERNEL_DEGREES = (-1, -1, -1)
LCOUNTER_CUBIC_DEGREE = 3


@dataclass(frozen=True)
class SplitDegrees:
    """O(d_1) + ... + O(d_r) on P^n, kept as a sorted degree list."""
    ambient_dim: int
    degrees: tuple

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise DomainError("Projective space dimension must be positive")
        degrees = tuple(sorted((int(d) for d in self.degrees), reverse=True))
        if not degrees:
            raise ValueError("A split bundle needs at least one summand")
        object.__setattr__(self, "degrees", degrees)

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def multiplicities(self) -> dict[int, int]:
        return dict(sorted(Counter(self.degrees).items(), reverse=True))

    def twisted(self, t: int) -> SplitDegrees:
        return SplitDegrees(self.ambient_dim, tuple(d + t for d in self.degrees))

    def to_bundle(self) -> SplitBundle:
        lattice = hyperplane_lattice(self.ambient_dim)
        hyperplane = lattice.basis_class("L")
        return SplitBundle.of([d * hyperplane for d in self.degrees])

    def h(self, i: int) -> int:
        return sum(h_line(self.ambient_dim, d, i) for d in self.degrees)

    def __str__(self) -> str:
        return " + ".join(
            f"O({d})" if m == 1 else f"O({d})^{m}" for d, m in self.multiplicities().items()
        )


@dataclass(frozen=True)
class LcounterRow:
    """One (n, l) entry of the S^{nl}E(l) vanishing table."""
    n: int
    l: int
    left_degree: int
    left_rank: int
    stated_left_degree: int
    middle_degree: int
    middle_rank: int
    h0_left: int
    h0_middle: int
    h0: int
    chi: int
    chi_hrr: Rational

    @property
    def vanishes(self) -> bool:
        return self.h0 == 0

    @property
    def chi_consistent(self) -> bool:
        return self.chi == self.chi_hrr

    @property
    def degree_discrepancy(self) -> bool:
        return self.left_degree != self.stated_left_degree


def h_line(n: int, d: int, i: int) -> int:
    """
    Dimension of H^i(P^n, O(d)).

    Args:
        n: Dimension of the projective space
        d: Degree of the line bundle
        i: Cohomological degree, 0 <= i <= n

    Returns:
        C(d+n, n) for i = 0, d >= 0; C(-d-1, n) for i = n, d <= -n-1; zero otherwise
    """
    if n < 1 or i < 0:
        raise DomainError(f"h_line needs n >= 1 and i >= 0, got n={n}, i={i}")
    if i > n:
        raise DomainError(f"H^{i} vanishes trivially on P^{n}; cohomological degree must be <= {n}")
    if i == 0:
        return int(binomial(d + n, n)) if d >= 0 else 0
    if i == n:
        return int(binomial(-d - 1, n)) if d <= -n - 1 else 0
    return 0


def chi_line(n: int, d: int) -> int:
    """chi(P^n, O(d)) = (d+1)(d+2)...(d+n)/n!, valid for every integer d."""
    value = Rational(1)
    for k in range(1, n + 1):
        value *= Rational(d + k, k)
    return int(value)


def chi_split(s: SplitDegrees) -> int:
    return sum(chi_line(s.ambient_dim, d) for d in s.degrees)


def sym_degrees(s: SplitDegrees, m: int) -> SplitDegrees:
    """Degrees of S^m of a split bundle: one summand per degree-m monomial."""
    if m < 1:
        raise DomainError("Symmetric power degree must be positive")
    return SplitDegrees(
        s.ambient_dim,
        tuple(sum(combo) for combo in combinations_with_replacement(s.degrees, m)),
    )


def det_twist(r: int, det_degree: int, t: int) -> int:
    """Degree of det(F(t)) for a rank-r bundle F with det F = O(det_degree)."""
    return det_degree + r * t


def _lcounter_pieces(n: int, l: int) -> tuple[SplitDegrees, SplitDegrees]:
    """Left and middle terms of 0 -> S^{nl-1}(O(-1)^3)(l-4) -> S^{nl}(O(-1)^3)(l) -> S^{nl}E(l) -> 0."""
    if n < 2:
        raise DomainError(f"The vanishing table needs n >= 2, got n={n}")
    if l < 1:
        raise DomainError(f"The vanishing table needs l >= 1, got l={l}")
    kernel = SplitDegrees(2, LCOUNTER_KERNEL_DEGREES)
    left = sym_degrees(kernel, n * l - 1).twisted(l - LCOUNTER_CUBIC_DEGREE - 1)
    middle = sym_degrees(kernel, n * l).twisted(l)
    return left, middle


def lcounter_h0(n: int, l: int) -> int:
    """h^0(S^{nl}E(l)) = h^0(middle) - h^0(left); h^1 of the split left term vanishes on P^2."""
    left, middle = _lcounter_pieces(n, l)
    return middle.h(0) - left.h(0)


def lcounter_rows(n_max: int = 6, l_max: int = 6) -> list[LcounterRow]:
    """
    Tabulate the vanishing of h^0(S^{nl}E(l)) for 2 <= n <= n_max, 1 <= l <= l_max.

    Besides h^0, every row carries chi of the quotient twice: from the
    sequence (chi(middle) - chi(left)) and from Riemann-Roch applied to
    ch(S^{nl}E) * exp(l h).
    """
    from .chern_ring import euler_characteristic, exp_class, lcounter_bundle_ch, sym_power_ch

    bundle_ch = lcounter_bundle_ch()
    ring = bundle_ch.ring
    rows = []
    for n in range(2, n_max + 1):
        for l in range(1, l_max + 1):
            left, middle = _lcounter_pieces(n, l)
            quotient_ch = sym_power_ch(bundle_ch, n * l) * exp_class(ring.hyperplane() * l)
            row = LcounterRow(
                n=n,
                l=l,
                left_degree=left.degrees[0],
                left_rank=left.rank,
                stated_left_degree=2 * l - n * l - 4,
                middle_degree=middle.degrees[0],
                middle_rank=middle.rank,
                h0_left=left.h(0),
                h0_middle=middle.h(0),
                h0=middle.h(0) - left.h(0),
                chi=chi_split(middle) - chi_split(left),
                chi_hrr=euler_characteristic(quotient_ch),
            )
            rows.append(row)

    discrepant = [(row.n, row.l) for row in rows if row.degree_discrepancy]
    if discrepant:
        logger.warning(
            "Left degrees recomputed from the sequence (l-nl-3) differ from the stated 2l-nl-4 "
            "for %d of %d rows; the table uses the recomputed degrees", len(discrepant), len(rows)
        )
    return rows
