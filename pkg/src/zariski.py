"""Exact Zariski decomposition of pseudoeffective classes on a surface."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Union

from sympy import Matrix

from .errors import InvariantViolation
from .lattice import CurveRecord, DivisorClass, intersect, nef_test, psef_test
from .linalg import solve_exact, to_rational

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NotPseudoeffective:
    """Returned (not raised) when the input class lies outside the pseudoeffective cone."""
    input: DivisorClass


@dataclass(frozen=True)
class ZariskiDecomposition:
    """
    D = P + N with P nef, N effective with negative definite support, P.C = 0 on Supp N.

    Attributes:
        input: The decomposed class D
        positive: The nef positive part P
        negative: Curve label -> multiplicity of N, in catalog order
    """
    input: DivisorClass
    positive: DivisorClass
    negative: dict = field(default_factory=dict)

    @property
    def support(self) -> frozenset:
        return frozenset(self.negative)

    def negative_part(self) -> DivisorClass:
        lattice = self.input.lattice
        total = lattice.zero()
        for label, multiplicity in self.negative.items():
            total = total + multiplicity * lattice.curve(label).divisor
        return total

    def scaled(self, factor) -> ZariskiDecomposition:
        factor = to_rational(factor)
        return ZariskiDecomposition(
            input=factor * self.input,
            positive=factor * self.positive,
            negative={label: factor * m for label, m in self.negative.items()},
        )

    def check_invariants(self) -> list[str]:
        """
        Verify the five decomposition invariants.

        Returns:
            Names of the verified invariants

        Raises:
            InvariantViolation: on the first failing invariant
        """
        lattice = self.input.lattice
        curves = [lattice.curve(label).divisor for label in self.negative]

        if self.positive + self.negative_part() != self.input:
            raise InvariantViolation(f"P + N does not reproduce {self.input}")
        if not nef_test(self.positive):
            raise InvariantViolation(f"Positive part {self.positive} is not nef")
        for label, curve in zip(self.negative, curves):
            if intersect(self.positive, curve) != 0:
                raise InvariantViolation(f"Positive part meets support curve {label}")
        if any(m <= 0 for m in self.negative.values()):
            raise InvariantViolation(f"Nonpositive multiplicity in {self.negative}")
        if curves and not _support_gram(curves).is_negative_definite:
            raise InvariantViolation(f"Support {sorted(self.negative)} is not negative definite")

        return ["sum", "positive part nef", "orthogonal to support",
                "positive multiplicities", "negative definite support"]


def _support_gram(curves: list[DivisorClass]) -> Matrix:
    return Matrix([[intersect(a, b) for b in curves] for a in curves])


def _solve_negative_part(d: DivisorClass, support: list[CurveRecord]) -> dict:
    """Solve (d - sum x_j C_j) . C_i = 0 for i in the support."""
    curves = [record.divisor for record in support]
    gram = _support_gram(curves)
    if not gram.is_negative_definite:
        raise InvariantViolation(
            f"Support {[r.label for r in support]} of {d} is not negative definite; "
            "the curve catalog is probably incomplete"
        )
    rhs = [intersect(d, curve) for curve in curves]
    solution = solve_exact(gram.tolist(), rhs)
    multiplicities = {record.label: value for record, value in zip(support, solution)}
    if any(value <= 0 for value in solution):
        raise InvariantViolation(f"Nonpositive multiplicity while decomposing {d}: {multiplicities}")
    return multiplicities


def zariski_decompose(d: DivisorClass) -> Union[ZariskiDecomposition, NotPseudoeffective]:
    """
    Compute the Zariski decomposition of d.

    The support starts with the catalog curves meeting d negatively and only
    grows: after each exact solve, curves meeting d - N negatively are added,
    until d - N is nef. Results are memoised per class, curve catalog and Mori generators.

    Returns:
        ZariskiDecomposition, or NotPseudoeffective if d is not psef
    """
    lattice = d.lattice
    catalog = (tuple((record.label, record.divisor.coeffs) for record in lattice.curve_catalog),
               tuple(g.coeffs for g in lattice.mori_generators))
    return _decompose(d, catalog)


@lru_cache(maxsize=8192)
def _decompose(d: DivisorClass, catalog: tuple) -> Union[ZariskiDecomposition, NotPseudoeffective]:
    lattice = d.lattice
    if not psef_test(d):
        logger.debug("%s is not pseudoeffective on %s", d, lattice.name)
        return NotPseudoeffective(d)

    order = {record.label: index for index, record in enumerate(lattice.curve_catalog)}
    support = [record for record in lattice.curve_catalog if intersect(d, record.divisor) < 0]
    multiplicities: dict = {}
    positive = d

    while support:
        multiplicities = _solve_negative_part(d, support)
        positive = d
        for record in support:
            positive = positive - multiplicities[record.label] * record.divisor
        logger.debug("Zariski step for %s: support %s, N = %s",
                     d, [r.label for r in support], {k: str(v) for k, v in multiplicities.items()})

        extra = [record for record in lattice.curve_catalog
                 if record.label not in multiplicities and intersect(positive, record.divisor) < 0]
        if not extra:
            break
        support = sorted(support + extra, key=lambda record: order[record.label])

    if not nef_test(positive):
        raise InvariantViolation(
            f"{positive} is not nef but no catalog curve meets it negatively; the catalog is incomplete"
        )

    decomposition = ZariskiDecomposition(d, positive, multiplicities)
    decomposition.check_invariants()
    return decomposition


def big_test(d: DivisorClass) -> bool:
    """A psef surface class is big iff its positive part has P^2 > 0."""
    decomposition = zariski_decompose(d)
    if isinstance(decomposition, NotPseudoeffective):
        return False
    return bool(intersect(decomposition.positive, decomposition.positive) > 0)
