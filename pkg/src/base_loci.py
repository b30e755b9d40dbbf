"""Augmented and diminished base loci of divisor classes and rationally twisted split bundles."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import combinations_with_replacement, product
from typing import Iterable, Optional, Sequence

from .errors import LatticeMismatchError, TwistMismatchError
from .lattice import BlowdownMap, DivisorClass, SurfaceLattice, hyperplane_lattice, intersect, psef_test
from .zariski import NotPseudoeffective, big_test, zariski_decompose

logger = logging.getLogger(__name__)


class LocusKind(Enum):
    EMPTY = "empty"
    CURVES = "curves"
    WHOLE = "whole"


@dataclass(frozen=True)
class BaseLocusResult:
    """Empty, a finite union of catalog curves, or the whole surface."""
    kind: LocusKind
    curves: frozenset = frozenset()

    @classmethod
    def of_curves(cls, labels: Iterable[str]) -> BaseLocusResult:
        labels = frozenset(labels)
        return cls(LocusKind.CURVES, labels) if labels else EMPTY

    def union(self, other: BaseLocusResult) -> BaseLocusResult:
        if WHOLE in (self, other):
            return WHOLE
        return BaseLocusResult.of_curves(self.curves | other.curves)

    def issubset(self, other: BaseLocusResult) -> bool:
        if other == WHOLE:
            return True
        if self == WHOLE:
            return False
        return self.curves <= other.curves

    def __str__(self) -> str:
        if self.kind is LocusKind.CURVES:
            return "{" + ", ".join(sorted(self.curves)) + "}"
        return self.kind.value


EMPTY = BaseLocusResult(LocusKind.EMPTY)
WHOLE = BaseLocusResult(LocusKind.WHOLE)


def union_all(loci: Iterable[BaseLocusResult]) -> BaseLocusResult:
    result = EMPTY
    for locus in loci:
        result = result.union(locus)
    return result


@dataclass(frozen=True)
class SplitBundle:
    """
    A totally split bundle O(D_1) + ... + O(D_r) with a rational twist T.

    Only the numerical classes matter, so summands are divisor classes with
    integer coefficients and the twist is any rational class.
    """
    summands: tuple
    twist: DivisorClass

    def __post_init__(self):
        summands = tuple(self.summands)
        if not summands:
            raise ValueError("A split bundle needs at least one summand")
        for summand in summands:
            if summand.lattice != self.twist.lattice:
                raise LatticeMismatchError("Summands and twist must share the lattice")
            if not summand.is_integral():
                raise ValueError(f"Summand {summand} is not an integral class")
        object.__setattr__(self, "summands", summands)

    @classmethod
    def of(cls, summands: Sequence[DivisorClass], twist: Optional[DivisorClass] = None) -> SplitBundle:
        if not summands:
            raise ValueError("A split bundle needs at least one summand")
        return cls(tuple(summands), twist if twist is not None else summands[0].lattice.zero())

    @property
    def lattice(self) -> SurfaceLattice:
        return self.twist.lattice

    @property
    def rank(self) -> int:
        return len(self.summands)

    def twisted_summands(self) -> list[DivisorClass]:
        """The classes D_i + T whose loci make up the bundle's loci."""
        return [summand + self.twist for summand in self.summands]

    def __str__(self) -> str:
        text = " + ".join(f"O({summand})" for summand in self.summands)
        if not self.twist.is_zero():
            text = f"({text})<{self.twist}>"
        return text


# ----- divisor classes -----

def b_minus_divisor(d: DivisorClass) -> BaseLocusResult:
    """Diminished base locus: the support of the Zariski negative part, whole if not psef."""
    decomposition = zariski_decompose(d)
    if isinstance(decomposition, NotPseudoeffective):
        return WHOLE
    return BaseLocusResult.of_curves(decomposition.negative)


def b_plus_divisor(d: DivisorClass) -> BaseLocusResult:
    """Augmented base locus: the null locus of the positive part, whole if not big."""
    decomposition = zariski_decompose(d)
    if isinstance(decomposition, NotPseudoeffective):
        return WHOLE
    positive = decomposition.positive
    if intersect(positive, positive) <= 0:
        return WHOLE
    return BaseLocusResult.of_curves(
        record.label for record in d.lattice.curve_catalog
        if intersect(positive, record.divisor) == 0
    )


# ----- split bundles -----

def b_minus_bundle(e: SplitBundle) -> BaseLocusResult:
    return union_all(b_minus_divisor(d) for d in e.twisted_summands())


def b_plus_bundle(e: SplitBundle) -> BaseLocusResult:
    return union_all(b_plus_divisor(d) for d in e.twisted_summands())


def v_big(e: SplitBundle) -> bool:
    return b_plus_bundle(e) != WHOLE


def v_psef(e: SplitBundle) -> bool:
    return b_minus_bundle(e) != WHOLE


def l_positive_summand(e: SplitBundle, big: bool = False) -> Optional[DivisorClass]:
    """
    First twisted summand D_i + T that is psef (big when big=True), or None.

    O(D_i)<T> is a subsheaf of E, so such a summand makes E L-psef (L-big).
    The converse fails: E can be L-positive without a positive summand.
    """
    test = big_test if big else psef_test
    return next((d for d in e.twisted_summands() if test(d)), None)


def sym_power(e: SplitBundle, c: int) -> SplitBundle:
    """S^c E<T> = (sum over degree-c monomials of O(D_i1 + ... + D_ic))<cT>."""
    if c < 1:
        raise ValueError("Symmetric power degree must be positive")
    summands = []
    for indices in combinations_with_replacement(range(e.rank), c):
        total = e.lattice.zero()
        for i in indices:
            total = total + e.summands[i]
        summands.append(total)
    return SplitBundle(tuple(summands), c * e.twist)


def tensor(e: SplitBundle, f: SplitBundle) -> SplitBundle:
    if e.lattice != f.lattice:
        raise LatticeMismatchError("Cannot tensor bundles on different lattices")
    summands = tuple(a + b for a, b in product(e.summands, f.summands))
    return SplitBundle(summands, e.twist + f.twist)


def direct_sum(e: SplitBundle, f: SplitBundle) -> SplitBundle:
    if e.lattice != f.lattice:
        raise LatticeMismatchError("Cannot add bundles on different lattices")
    if e.twist != f.twist:
        raise TwistMismatchError(f"Direct sum needs equal twists, got {e.twist} and {f.twist}")
    return SplitBundle(e.summands + f.summands, e.twist)


def twist_normalize(e: SplitBundle, integral: DivisorClass) -> SplitBundle:
    """The equivalent pair (E(T'), T - T') for an integral class T'."""
    if not integral.is_integral():
        raise ValueError(f"Only integral classes can be absorbed into the bundle, got {integral}")
    return SplitBundle(tuple(s + integral for s in e.summands), e.twist - integral)


# ----- pullback along blow-downs -----

def pullback_bundle(f: BlowdownMap, e: SplitBundle) -> SplitBundle:
    return SplitBundle(tuple(f.pullback(s) for s in e.summands), f.pullback(e.twist))


def preimage(f: BlowdownMap, locus: BaseLocusResult) -> BaseLocusResult:
    """
    f^{-1} of a base locus: strict transforms of its curves plus the
    contracted curves lying over points of it.
    """
    if locus.kind is not LocusKind.CURVES:
        return locus
    labels = {
        record.label for record in f.source.curve_catalog
        if record.label in locus.curves and record.label not in f.contracted_curves
    }
    labels |= {label for label in f.contracted_curves if f.centre_of(label) & locus.curves}
    return BaseLocusResult.of_curves(labels)


def exceptional_locus(f: BlowdownMap) -> BaseLocusResult:
    return BaseLocusResult.of_curves(f.contracted_curves)


def b_plus_pullback_sides(f: BlowdownMap, e: SplitBundle) -> tuple[BaseLocusResult, BaseLocusResult]:
    """(B+(f^*E), f^{-1}B+(E) u NF(f))"""
    lhs = b_plus_bundle(pullback_bundle(f, e))
    rhs = preimage(f, b_plus_bundle(e)).union(exceptional_locus(f))
    return lhs, rhs


def b_minus_pullback_sides(f: BlowdownMap, e: SplitBundle) -> tuple[BaseLocusResult, BaseLocusResult]:
    """(B-(f^*E), f^{-1}B-(E))"""
    return b_minus_bundle(pullback_bundle(f, e)), preimage(f, b_minus_bundle(e))


def b_plus_pullback_law(f: BlowdownMap, e: SplitBundle) -> bool:
    lhs, rhs = b_plus_pullback_sides(f, e)
    return lhs == rhs


def b_minus_pullback_law(f: BlowdownMap, e: SplitBundle) -> bool:
    lhs, rhs = b_minus_pullback_sides(f, e)
    return lhs == rhs


# ----- extensions 0 -> E' -> E -> E'' -> 0 -----

@dataclass(frozen=True)
class ExtensionLoci:
    """
    Base loci around a short exact sequence 0 -> E' -> E -> E'' -> 0.

    middle is B(E) when E is split, or the lower bound B(Q) coming from a
    quotient Q of E otherwise (B(Q) is contained in B(E)).
    """
    sub: BaseLocusResult
    middle: BaseLocusResult
    quotient: BaseLocusResult
    middle_is_lower_bound: bool = False

    @property
    def union(self) -> BaseLocusResult:
        return self.sub.union(self.quotient)

    @property
    def middle_exceeds_union(self) -> bool:
        """B(E) is not inside B(E') u B(E'')."""
        return not self.middle.issubset(self.union)

    @property
    def union_exceeds_middle(self) -> bool:
        """B(E') u B(E'') is not inside B(E)."""
        return not self.union.issubset(self.middle)


_LOCI = {"minus": b_minus_bundle, "plus": b_plus_bundle}


def quotient_certificate(sub: SplitBundle, middle_quotient: SplitBundle, quotient: SplitBundle,
                         kind: str = "minus") -> ExtensionLoci:
    """
    Loci of an extension whose middle term is only known through a quotient.

    Args:
        sub: The subbundle E'
        middle_quotient: A quotient of the middle term E
        quotient: The quotient bundle E''
        kind: "minus" for diminished, "plus" for augmented base loci

    Returns:
        ExtensionLoci with middle set to the lower bound B(middle_quotient)
    """
    locus = _LOCI[kind]
    result = ExtensionLoci(locus(sub), locus(middle_quotient), locus(quotient), middle_is_lower_bound=True)
    logger.debug("Extension loci (%s): sub %s, middle >= %s, quotient %s",
                 kind, result.sub, result.middle, result.quotient)
    return result


def euler_sequence_witness() -> ExtensionLoci:
    """0 -> O(-1) -> O^2 -> O(1) -> 0 on P^1: the union of the outer loci is not inside B-(O^2)."""
    line = hyperplane_lattice(1)
    hyperplane = line.basis_class("L")
    return ExtensionLoci(
        sub=b_minus_bundle(SplitBundle.of([-hyperplane])),
        middle=b_minus_bundle(SplitBundle.of([line.zero(), line.zero()])),
        quotient=b_minus_bundle(SplitBundle.of([hyperplane])),
    )
