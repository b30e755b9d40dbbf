"""Truncated numerical rings with Chern and log-Chern characters of split bundles."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Union

from sympy import Rational, Symbol, exp, expand, factorial, series

from .base_loci import SplitBundle
from .errors import DomainError, InvariantViolation, RingMismatchError
from .lattice import DivisorClass, SurfaceLattice, hyperplane_lattice
from .linalg import to_rational
from .split_cohomology import SplitDegrees

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NumericalRing:
    """
    N^*(X) truncated above the dimension, given by structure constants.

    Attributes:
        lattice: Lattice of the degree-1 piece
        dimension: Top degree; products landing above it are zero
        piece_labels: Basis labels of each graded piece
        products: (i, j) -> table[a][b] = coefficients of e_a * e_b in piece i + j
    """
    lattice: SurfaceLattice
    dimension: int
    piece_labels: tuple = field(compare=False)
    products: dict = field(compare=False, repr=False)

    def __post_init__(self):
        self._check_structure()

    @property
    def name(self) -> str:
        return self.lattice.name

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(len(labels) for labels in self.piece_labels)

    @property
    def is_projective_space(self) -> bool:
        return self.lattice == hyperplane_lattice(self.dimension)

    def _check_structure(self) -> None:
        basis = [(k, a) for k, rank in enumerate(self.ranks) for a in range(rank)]
        for (i, a), (j, b) in product(basis, repeat=2):
            if i + j <= self.dimension and self.products[(i, j)][a][b] != self.products[(j, i)][b][a]:
                raise InvariantViolation(f"Ring {self.name} is not commutative on e{i},{a} * e{j},{b}")
        for x, y, z in product(basis, repeat=3):
            if x[0] + y[0] + z[0] > self.dimension:
                continue
            ex, ey, ez = (self.basis(*element) for element in (x, y, z))
            if (ex * ey) * ez != ex * (ey * ez):
                raise InvariantViolation(f"Ring {self.name} is not associative on {x}, {y}, {z}")

    # ----- constructors -----

    def element(self, components) -> GradedClass:
        return GradedClass(self, components)

    def zero(self) -> GradedClass:
        return GradedClass(self, [[0] * rank for rank in self.ranks])

    def scalar(self, value) -> GradedClass:
        components = [[0] * rank for rank in self.ranks]
        components[0][0] = value
        return GradedClass(self, components)

    def one(self) -> GradedClass:
        return self.scalar(1)

    def basis(self, degree: int, index: int) -> GradedClass:
        components = [[0] * rank for rank in self.ranks]
        components[degree][index] = 1
        return GradedClass(self, components)

    def from_divisor(self, d: DivisorClass) -> GradedClass:
        if d.lattice != self.lattice:
            raise RingMismatchError(f"Class on {d.lattice.name} does not live in ring {self.name}")
        components = [[0] * rank for rank in self.ranks]
        components[1] = list(d.coeffs)
        return GradedClass(self, components)

    def hyperplane(self) -> GradedClass:
        if not self.is_projective_space:
            raise DomainError(f"Ring {self.name} is not the ring of a projective space")
        return self.basis(1, 0)

    def integrate(self, x: GradedClass) -> Rational:
        """Degree of the top-degree component (the point class of the top piece)."""
        top = x.components[self.dimension]
        if len(top) != 1:
            raise DomainError(f"Top piece of {self.name} is not one-dimensional")
        return top[0]


@lru_cache(maxsize=None)
def projective_space_ring(n: int) -> NumericalRing:
    """Z[h]/(h^{n+1}) with rational coefficients."""
    if n < 1:
        raise DomainError("Projective space dimension must be positive")
    labels = tuple(("1",) if k == 0 else ("L" if k == 1 else f"L^{k}",) for k in range(n + 1))
    products = {(i, j): [[(Rational(1),)]] for i in range(n + 1) for j in range(n + 1 - i)}
    return NumericalRing(hyperplane_lattice(n), n, labels, products)


@lru_cache(maxsize=None)
def lattice_ring(lattice: SurfaceLattice) -> NumericalRing:
    """
    Numerical ring of a surface: scalars, N^1 and the point class, with
    D.D' given by the intersection form. Rank-one lattices of P^n give the
    ring of P^n.
    """
    if lattice == hyperplane_lattice(lattice.ambient_dim):
        return projective_space_ring(lattice.ambient_dim)
    if lattice.ambient_dim != 2:
        raise DomainError(f"Only surfaces and projective spaces have numerical rings, not {lattice.name}")

    r = lattice.rank
    unit = [tuple(Rational(int(a == b)) for b in range(r)) for a in range(r)]
    products = {
        (0, 0): [[(Rational(1),)]],
        (0, 1): [[unit[b] for b in range(r)]],
        (1, 0): [[unit[a]] for a in range(r)],
        (0, 2): [[(Rational(1),)]],
        (2, 0): [[(Rational(1),)]],
        (1, 1): [[(lattice.gram[a, b],) for b in range(r)] for a in range(r)],
    }
    labels = (("1",), lattice.basis_labels, ("pt",))
    logger.debug("Built numerical ring of %s", lattice.name)
    return NumericalRing(lattice, 2, labels, products)


@dataclass(frozen=True)
class GradedClass:
    """An element of a NumericalRing, one coefficient vector per degree."""
    ring: NumericalRing = field(repr=False)
    components: tuple

    def __post_init__(self):
        components = tuple(tuple(to_rational(c) for c in part) for part in self.components)
        if tuple(len(part) for part in components) != self.ring.ranks:
            raise RingMismatchError(
                f"Components of shape {[len(p) for p in components]} do not fit ring {self.ring.name}"
            )
        object.__setattr__(self, "components", components)

    def _check_same(self, other: GradedClass) -> None:
        if not isinstance(other, GradedClass):
            raise TypeError(f"Expected a GradedClass, got {type(other).__name__}")
        if self.ring != other.ring:
            raise RingMismatchError(f"Classes live in different rings: {self.ring.name} and {other.ring.name}")

    def _zip(self, other: GradedClass, op) -> GradedClass:
        self._check_same(other)
        return GradedClass(self.ring, [
            [op(a, b) for a, b in zip(x, y)] for x, y in zip(self.components, other.components)
        ])

    def __add__(self, other: GradedClass) -> GradedClass:
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other: GradedClass) -> GradedClass:
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self) -> GradedClass:
        return GradedClass(self.ring, [[-a for a in part] for part in self.components])

    def __mul__(self, other) -> GradedClass:
        if not isinstance(other, GradedClass):
            factor = to_rational(other)
            return GradedClass(self.ring, [[factor * a for a in part] for part in self.components])

        self._check_same(other)
        ring = self.ring
        result = [[Rational(0)] * rank for rank in ring.ranks]
        for i, x in enumerate(self.components):
            for j, y in enumerate(other.components):
                if i + j > ring.dimension:
                    continue
                table = ring.products[(i, j)]
                for a, ca in enumerate(x):
                    if ca == 0:
                        continue
                    for b, cb in enumerate(y):
                        if cb == 0:
                            continue
                        for c, value in enumerate(table[a][b]):
                            result[i + j][c] += ca * cb * value
        return GradedClass(ring, result)

    def __rmul__(self, other) -> GradedClass:
        return self * other

    def __pow__(self, k: int) -> GradedClass:
        result = self.ring.one()
        for _ in range(k):
            result = result * self
        return result

    def part(self, degree: int) -> tuple:
        return self.components[degree]

    def homogeneous(self, degree: int) -> GradedClass:
        components = [[0] * rank for rank in self.ring.ranks]
        components[degree] = list(self.components[degree])
        return GradedClass(self.ring, components)

    @property
    def rank(self) -> Rational:
        return self.components[0][0]

    def is_zero(self) -> bool:
        return all(c == 0 for part in self.components for c in part)

    def __str__(self) -> str:
        terms = []
        for degree, (part, labels) in enumerate(zip(self.components, self.ring.piece_labels)):
            for coeff, label in zip(part, labels if degree else ("",)):
                if coeff == 0:
                    continue
                sign = "-" if coeff < 0 else "+"
                magnitude = abs(coeff)
                shown = "" if magnitude == 1 and label else str(magnitude)
                terms.append(f" {sign} {shown}{label}")
        if not terms:
            return "0"
        text = "".join(terms)
        return text[3:] if text.startswith(" + ") else "-" + text[3:]


@dataclass(frozen=True)
class LogClass:
    """log r + higher, with the rank kept multiplicatively so log r is never evaluated."""
    rank: int
    higher: GradedClass

    def __post_init__(self):
        if self.rank < 1:
            raise DomainError(f"Log class rank must be positive, got {self.rank}")
        if any(c != 0 for c in self.higher.part(0)):
            raise DomainError("The higher part of a log class has no degree-0 component")

    @property
    def ring(self) -> NumericalRing:
        return self.higher.ring

    def __str__(self) -> str:
        return f"log {self.rank}" if self.higher.is_zero() else f"log {self.rank} + {self.higher}"


# ----- exp / log on nilpotent classes -----

def _require_nilpotent(x: GradedClass) -> None:
    if x.rank != 0:
        raise DomainError(f"exp/log series need a class without degree-0 part, got {x}")


def exp_class(x: GradedClass) -> GradedClass:
    """exp(x) truncated at the ring dimension; x must have zero degree-0 part."""
    _require_nilpotent(x)
    total = x.ring.one()
    power = x.ring.one()
    for k in range(1, x.ring.dimension + 1):
        power = power * x
        total = total + power * Rational(1, factorial(k))
    return total


def log_one_plus(y: GradedClass) -> GradedClass:
    """log(1 + y) = sum (-1)^{k+1} y^k / k for nilpotent y."""
    _require_nilpotent(y)
    total = y.ring.zero()
    power = y.ring.one()
    for k in range(1, y.ring.dimension + 1):
        power = power * y
        total = total + power * Rational((-1) ** (k + 1), k)
    return total


# ----- characters -----

def ch_split(bundle: Union[SplitBundle, SplitDegrees]) -> GradedClass:
    """
    Chern character of a split bundle, sum of exp(D_i), times exp(T) for a twisted bundle.

    Degree lists on P^n land in the ring of P^n.
    """
    if isinstance(bundle, SplitDegrees):
        ring = projective_space_ring(bundle.ambient_dim)
        hyperplane = ring.hyperplane()
        total = ring.zero()
        for d in bundle.degrees:
            total = total + exp_class(hyperplane * d)
        return total

    ring = lattice_ring(bundle.lattice)
    total = ring.zero()
    for summand in bundle.summands:
        total = total + exp_class(ring.from_divisor(summand))
    if not bundle.twist.is_zero():
        total = total * exp_class(ring.from_divisor(bundle.twist))
    return total


def lc(x: GradedClass) -> LogClass:
    """log ch: rank r and log(1 + (x/r - 1))."""
    r = x.rank
    if not (r.is_integer and r > 0):
        raise DomainError(f"lc needs a positive integer rank, got {r}")
    y = x * Rational(1, r) - x.ring.one()
    return LogClass(int(r), log_one_plus(y))


def lc_add(x: LogClass, y: LogClass) -> LogClass:
    """lc of a tensor product: ranks multiply, higher parts add."""
    if x.ring != y.ring:
        raise RingMismatchError(f"Log classes live in different rings: {x.ring.name} and {y.ring.name}")
    return LogClass(x.rank * y.rank, x.higher + y.higher)


def exp_lc(x: LogClass) -> GradedClass:
    return exp_class(x.higher) * x.rank


def project_degree1(x: Union[GradedClass, LogClass]) -> DivisorClass:
    if isinstance(x, LogClass):
        x = x.higher
    return x.ring.lattice.divisor(x.part(1))


def lc_degree_two(rank: int, c1: GradedClass, c2: GradedClass) -> GradedClass:
    """-(1/2r^2)(2r c2 - (r-1) c1^2), the degree-2 term of lc in Chern classes."""
    return (c2 * (2 * rank) - (c1 * c1) * (rank - 1)) * Rational(-1, 2 * rank ** 2)


def chern_classes(x: GradedClass) -> GradedClass:
    """Total Chern class c = exp(sum_k (-1)^{k-1} (k-1)! ch_k)."""
    exponent = x.ring.zero()
    for k in range(1, x.ring.dimension + 1):
        exponent = exponent + x.homogeneous(k) * ((-1) ** (k - 1) * factorial(k - 1))
    return exp_class(exponent)


def adams(x: GradedClass, j: int) -> GradedClass:
    """psi^j multiplies the degree-k component by j^k."""
    return GradedClass(x.ring, [[c * j ** k for c in part] for k, part in enumerate(x.components)])


def dual(x: GradedClass) -> GradedClass:
    return adams(x, -1)


def sym_power_ch(x: GradedClass, k: int) -> GradedClass:
    """ch(S^k E) from ch(E) by the Newton recursion m ch(S^m) = sum_j psi^j(ch E) ch(S^{m-j})."""
    if k < 0:
        raise DomainError("Symmetric power degree must be nonnegative")
    powers = [x.ring.one()]
    adams_terms = [None] + [adams(x, j) for j in range(1, k + 1)]
    for m in range(1, k + 1):
        total = x.ring.zero()
        for j in range(1, m + 1):
            total = total + adams_terms[j] * powers[m - j]
        powers.append(total * Rational(1, m))
    return powers[k]


@lru_cache(maxsize=None)
def todd_class(n: int) -> GradedClass:
    """td(P^n) = (h / (1 - e^{-h}))^{n+1}, expanded as a power series in h."""
    ring = projective_space_ring(n)
    t = Symbol("t")
    expansion = expand(series((t / (1 - exp(-t))) ** (n + 1), t, 0, n + 1).removeO())
    return ring.element([[Rational(expansion.coeff(t, k))] for k in range(n + 1)])


def euler_characteristic(x: GradedClass) -> Rational:
    """Hirzebruch-Riemann-Roch on P^n: the degree of ch * td."""
    ring = x.ring
    if not ring.is_projective_space:
        raise DomainError(f"Riemann-Roch is only available on projective spaces, not {ring.name}")
    return ring.integrate(x * todd_class(ring.dimension))


def lcounter_bundle_ch() -> GradedClass:
    """
    ch(E) for E = M^v(-1), where 0 -> M -> O^3 -> O(3) -> 0 on P^2 comes
    from three general cubics.
    """
    ring = projective_space_ring(2)
    hyperplane = ring.hyperplane()
    kernel = ring.scalar(3) - exp_class(hyperplane * 3)
    return dual(kernel) * exp_class(-hyperplane)
