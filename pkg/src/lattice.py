"""Exact Neron-Severi lattices of explicitly presented surfaces."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence, Union

from sympy import ImmutableMatrix, Matrix, Rational

from .errors import InvariantViolation, LatticeMismatchError, UnknownLabelError
from .linalg import cone_combination, inertia, to_rational

logger = logging.getLogger(__name__)

LABEL_PATTERN = re.compile(r"[^\W\d][\w'′̄]*")

# Blow-up polarizations are searched as k * f^*A - e for k up to this bound.
MAX_POLARIZATION_MULTIPLE = 64


class SurfaceLattice:
    """
    Numerical lattice N^1(X) of a surface with its intersection pairing.

    Attributes:
        name: Short identifier ("p2", "p2-double-blowup", ...)
        basis_labels: Labels of the basis classes
        gram: Symmetric intersection matrix (exact rationals)
        curve_catalog: Known irreducible curves, in catalog order
        mori_generators: Classes spanning the pseudoeffective cone
        polarization: Fixed ample class A
        aliases: Alternative spellings of basis labels (e.g. unicode names)
        named_classes: Convenience classes addressable by name (e.g. "C")
        ambient_dim: 2 for surfaces, n for the rank-one lattice of P^n

    Two lattices compare equal when name, basis labels and gram agree; the
    remaining data is treated as presentation of the same lattice.
    """

    def __init__(
        self,
        name: str,
        basis_labels: Sequence[str],
        gram: Sequence[Sequence],
        curves: Sequence[tuple[str, Sequence]] = (),
        mori_generators: Sequence[Sequence] = (),
        polarization: Optional[Sequence] = None,
        aliases: Optional[Mapping[str, str]] = None,
        named_classes: Optional[Mapping[str, Sequence]] = None,
        validate: bool = True,
        ambient_dim: int = 2,
    ):
        self.name = name
        self.ambient_dim = ambient_dim
        self.basis_labels = tuple(basis_labels)
        self.gram = ImmutableMatrix([[to_rational(x) for x in row] for row in gram])

        if len(set(self.basis_labels)) != len(self.basis_labels):
            raise InvariantViolation(f"Duplicate basis labels in {name}: {self.basis_labels}")
        for label in self.basis_labels:
            if not LABEL_PATTERN.fullmatch(label):
                raise InvariantViolation(f"Invalid basis label: {label!r}")
        if self.gram.shape != (self.rank, self.rank):
            raise InvariantViolation(
                f"Gram matrix of {name} is {self.gram.shape}, expected {(self.rank, self.rank)}"
            )

        self.curve_catalog = tuple(
            CurveRecord.of(label, DivisorClass(self, coeffs)) for label, coeffs in curves
        )
        self.mori_generators = tuple(DivisorClass(self, coeffs) for coeffs in mori_generators)
        self.polarization = DivisorClass(self, polarization) if polarization is not None else None
        self.aliases = dict(aliases or {})
        self.named_classes = {
            key: DivisorClass(self, coeffs) for key, coeffs in (named_classes or {}).items()
        }

        if validate:
            self.validate()

    @property
    def rank(self) -> int:
        return len(self.basis_labels)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SurfaceLattice):
            return NotImplemented
        return (self.name, self.basis_labels, self.gram) == (other.name, other.basis_labels, other.gram)

    def __hash__(self) -> int:
        return hash((self.name, self.basis_labels, self.gram))

    def __repr__(self) -> str:
        return f"SurfaceLattice({self.name!r}, basis={self.basis_labels})"

    # ----- class constructors -----

    def divisor(self, coeffs: Sequence) -> DivisorClass:
        return DivisorClass(self, coeffs)

    def zero(self) -> DivisorClass:
        return DivisorClass(self, [0] * self.rank)

    def basis_class(self, label: str) -> DivisorClass:
        """Return the basis class with the given label (aliases accepted)."""
        label = self.aliases.get(label, label)
        if label not in self.basis_labels:
            raise UnknownLabelError(f"Unknown basis label {label!r} on {self.name}")
        coeffs = [0] * self.rank
        coeffs[self.basis_labels.index(label)] = 1
        return DivisorClass(self, coeffs)

    def from_terms(self, terms: Mapping[str, object]) -> DivisorClass:
        """Build a class from {basis label: coefficient}."""
        result = self.zero()
        for label, coeff in terms.items():
            result = result + to_rational(coeff) * self.basis_class(label)
        return result

    def curve(self, label: str) -> CurveRecord:
        for record in self.curve_catalog:
            if record.label == label:
                return record
        raise UnknownLabelError(f"Unknown curve label {label!r} on {self.name}")

    @property
    def curve_labels(self) -> tuple[str, ...]:
        return tuple(record.label for record in self.curve_catalog)

    def resolve_name(self, name: str) -> DivisorClass:
        """Resolve a basis label, alias, named class or curve label to a class."""
        if name in self.basis_labels or name in self.aliases:
            return self.basis_class(name)
        if name in self.named_classes:
            return self.named_classes[name]
        if name in self.curve_labels:
            return self.curve(name).divisor
        raise UnknownLabelError(f"Unknown name {name!r} on {self.name}")

    # ----- invariants -----

    def validate(self) -> None:
        """Check every SurfaceLattice invariant, raising InvariantViolation on failure."""
        if self.gram != self.gram.T:
            raise InvariantViolation(f"Gram matrix of {self.name} is not symmetric")

        signature = inertia(self.gram.tolist())
        if signature != (1, self.rank - 1, 0):
            raise InvariantViolation(
                f"Gram matrix of {self.name} has inertia {signature}, "
                f"expected (1, {self.rank - 1}, 0) by the Hodge index theorem"
            )

        if self.polarization is None:
            raise InvariantViolation(f"Lattice {self.name} has no polarization")

        for record in self.curve_catalog:
            if not record.divisor.is_integral():
                raise InvariantViolation(f"Curve {record.label} has non-integral class {record.divisor}")
            if intersect(record.divisor, self.polarization) <= 0:
                raise InvariantViolation(
                    f"Curve {record.label} has nonpositive degree against the polarization"
                )
            if record.self_intersection < 0 and record.divisor not in self.mori_generators:
                raise InvariantViolation(
                    f"Negative curve {record.label} is missing from the Mori generators"
                )

        if not ample_test(self.polarization):
            raise InvariantViolation(f"Polarization {self.polarization} of {self.name} is not ample")

        logger.debug("Validated lattice %s (rank %d, %d curves)", self.name, self.rank, len(self.curve_catalog))


@dataclass(frozen=True)
class DivisorClass:
    """A rational divisor class, stored as coefficients in the lattice basis."""
    lattice: SurfaceLattice = field(repr=False)
    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(to_rational(c) for c in self.coeffs)
        if len(coeffs) != self.lattice.rank:
            raise LatticeMismatchError(
                f"Class has {len(coeffs)} coefficients, lattice {self.lattice.name} has rank {self.lattice.rank}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    def _check_same(self, other: DivisorClass) -> None:
        if not isinstance(other, DivisorClass):
            raise TypeError(f"Expected a DivisorClass, got {type(other).__name__}")
        if self.lattice != other.lattice:
            raise LatticeMismatchError(
                f"Classes live on different lattices: {self.lattice.name} and {other.lattice.name}"
            )

    def __add__(self, other: DivisorClass) -> DivisorClass:
        self._check_same(other)
        return DivisorClass(self.lattice, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        self._check_same(other)
        return DivisorClass(self.lattice, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> DivisorClass:
        return DivisorClass(self.lattice, [-a for a in self.coeffs])

    def __mul__(self, scalar) -> DivisorClass:
        if isinstance(scalar, DivisorClass):
            return NotImplemented
        factor = to_rational(scalar)
        return DivisorClass(self.lattice, [factor * a for a in self.coeffs])

    __rmul__ = __mul__

    def is_integral(self) -> bool:
        return all(c.is_integer for c in self.coeffs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __str__(self) -> str:
        terms = []
        for coeff, label in zip(self.coeffs, self.lattice.basis_labels):
            if coeff == 0:
                continue
            sign = "-" if coeff < 0 else "+"
            magnitude = abs(coeff)
            terms.append(f"{sign}{'' if magnitude == 1 else magnitude}{label}")
        if not terms:
            return "0"
        text = "".join(terms)
        return text[1:] if text.startswith("+") else text


@dataclass(frozen=True)
class CurveRecord:
    """An irreducible curve of the catalog with its cached self-intersection."""
    label: str
    divisor: DivisorClass
    self_intersection: Rational

    @classmethod
    def of(cls, label: str, divisor: DivisorClass) -> CurveRecord:
        if not LABEL_PATTERN.fullmatch(label):
            raise InvariantViolation(f"Invalid curve label: {label!r}")
        return cls(label, divisor, intersect(divisor, divisor))


def intersect(d1: DivisorClass, d2: DivisorClass) -> Rational:
    """Intersection number coeffs1^T * gram * coeffs2."""
    d1._check_same(d2)
    gram = d1.lattice.gram
    total = Rational(0)
    for i, a in enumerate(d1.coeffs):
        if a == 0:
            continue
        for j, b in enumerate(d2.coeffs):
            if b != 0:
                total += a * gram[i, j] * b
    return total


def nef_test(d: DivisorClass) -> bool:
    """True iff d pairs nonnegatively with every Mori generator."""
    return all(intersect(d, g) >= 0 for g in d.lattice.mori_generators)


def ample_test(d: DivisorClass) -> bool:
    """Nakai-Moishezon on a surface with complete catalog: positive on generators and d^2 > 0."""
    if not all(intersect(d, g) > 0 for g in d.lattice.mori_generators):
        return False
    return bool(intersect(d, d) > 0)


def psef_test(d: DivisorClass) -> bool:
    """True iff d is a nonnegative combination of the Mori generators."""
    return psef_certificate(d) is not None


def psef_certificate(d: DivisorClass) -> Optional[tuple[Rational, ...]]:
    """Nonnegative coefficients on the Mori generators summing to d, or None."""
    generators = [g.coeffs for g in d.lattice.mori_generators]
    return cone_combination(generators, d.coeffs)


@dataclass(frozen=True)
class BlowdownMap:
    """
    A birational morphism f: source -> target contracting finitely many curves.

    Attributes:
        source: Lattice of the blown-up surface
        target: Lattice of the blown-down surface
        pullback_rows: Row i holds the source coordinates of f^* of target basis class i
        contracted_curves: Labels of source curves contracted by f (the locus NF(f))
        centres: For each contracted curve, the target catalog curves through its image point
    """
    source: SurfaceLattice
    target: SurfaceLattice
    pullback_rows: tuple
    contracted_curves: frozenset
    centres: tuple = ()

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.pullback_rows)
        object.__setattr__(self, "pullback_rows", rows)
        object.__setattr__(self, "contracted_curves", frozenset(self.contracted_curves))
        object.__setattr__(self, "centres", tuple(sorted(
            (label, frozenset(over)) for label, over in dict(self.centres).items()
        )))
        self.check()

    def centre_of(self, label: str) -> frozenset:
        return dict(self.centres).get(label, frozenset())

    def pullback(self, d: DivisorClass) -> DivisorClass:
        """f^*d for a class d on the target."""
        if d.lattice != self.target:
            raise LatticeMismatchError(f"Class lives on {d.lattice.name}, map target is {self.target.name}")
        coeffs = [Rational(0)] * self.source.rank
        for coeff, row in zip(d.coeffs, self.pullback_rows):
            for k, entry in enumerate(row):
                coeffs[k] += coeff * entry
        return DivisorClass(self.source, coeffs)

    def check(self) -> None:
        """Verify the projection formula on basis classes and that contracted curves are f-exceptional."""
        if len(self.pullback_rows) != self.target.rank:
            raise InvariantViolation("Pullback matrix has the wrong number of rows")
        pulled = [self.pullback(self.target.basis_class(label)) for label in self.target.basis_labels]
        for i, a in enumerate(pulled):
            for j, b in enumerate(pulled):
                if intersect(a, b) != self.target.gram[i, j]:
                    raise InvariantViolation(
                        f"Pullback {self.target.name} -> {self.source.name} does not preserve intersections"
                    )
        for label in self.contracted_curves:
            curve = self.source.curve(label).divisor
            if any(intersect(curve, p) != 0 for p in pulled):
                raise InvariantViolation(f"Contracted curve {label} meets a pulled-back class")

    def compose(self, outer: BlowdownMap) -> BlowdownMap:
        """Return outer . self, contracting the curves of both maps."""
        if self.target != outer.source:
            raise LatticeMismatchError(
                f"Cannot compose {self.source.name}->{self.target.name} with {outer.source.name}->{outer.target.name}"
            )
        rows = []
        for label in outer.target.basis_labels:
            pulled = self.pullback(outer.pullback(outer.target.basis_class(label)))
            rows.append(tuple(int(c) for c in pulled.coeffs))

        centres = {}
        for label in self.contracted_curves:
            over = set()
            for curve in self.centre_of(label):
                if curve in outer.contracted_curves:
                    over |= outer.centre_of(curve)
                else:
                    over.add(curve)
            centres[label] = frozenset(over)
        for label in outer.contracted_curves:
            centres[label] = outer.centre_of(label)

        return BlowdownMap(
            source=self.source,
            target=outer.target,
            pullback_rows=tuple(rows),
            contracted_curves=self.contracted_curves | outer.contracted_curves,
            centres=centres,
        )


def blow_up(
    lat: SurfaceLattice,
    center_on: Union[None, str, Iterable[str]] = None,
    exceptional_label: Optional[str] = None,
    name: Optional[str] = None,
) -> tuple[SurfaceLattice, BlowdownMap]:
    """
    Blow up a point of the surface.

    Args:
        lat: Lattice of the surface being blown up
        center_on: Catalog curve label(s) passing through the blown-up point.
            Those curves are replaced by their strict transforms K - e. A
            centre curve whose label is also a basis label (an earlier
            exceptional curve) has its basis class replaced by the strict
            transform, which is how (L, Fb, Fp) arises on the double blow-up.
        exceptional_label: Label of the new exceptional curve (default E<rank>)
        name: Name of the new lattice (default "<name>-blowup")

    Returns:
        (blown-up lattice, blow-down map contracting the exceptional curve)
    """
    if center_on is None:
        centres: tuple[str, ...] = ()
    elif isinstance(center_on, str):
        centres = (center_on,)
    else:
        centres = tuple(center_on)
    for label in centres:
        lat.curve(label)  # raises UnknownLabelError

    n = lat.rank
    e_label = exceptional_label or f"E{n}"
    if e_label in lat.basis_labels or e_label in lat.curve_labels:
        raise InvariantViolation(f"Exceptional label {e_label!r} already used on {lat.name}")
    if not centres:
        logger.warning(
            "Blowing up %s at a point on no catalog curve; catalog completeness is no longer guaranteed",
            lat.name,
        )

    # Pullback coordinates: old basis followed by e, gram = diag(G, -1)
    pulled_gram = Matrix.zeros(n + 1, n + 1)
    pulled_gram[:n, :n] = lat.gram
    pulled_gram[n, n] = -1

    # Basis classes named after centre curves become strict transforms b - e
    replaced = [i for i, label in enumerate(lat.basis_labels) if label in centres]
    change = Matrix.eye(n + 1)
    for i in replaced:
        change[n, i] = -1
    gram = (change.T * pulled_gram * change).tolist()

    def convert(pulled: Sequence) -> tuple:
        # new e-coordinate absorbs the replaced basis coordinates
        coords = list(pulled)
        coords[n] = coords[n] + sum(coords[i] for i in replaced)
        return tuple(coords)

    def pull(coeffs: Sequence) -> list:
        return list(coeffs) + [Rational(0)]

    centre_classes = {label: lat.curve(label).divisor for label in centres}

    curves = []
    for record in lat.curve_catalog:
        coords = pull(record.divisor.coeffs)
        if record.label in centres:
            coords[n] -= 1
        curves.append((record.label, convert(coords)))
    curves.append((e_label, convert([0] * n + [1])))

    generators = []
    for generator in lat.mori_generators:
        coords = pull(generator.coeffs)
        if generator in centre_classes.values():
            coords[n] -= 1
        generators.append(convert(coords))
    generators.append(convert([0] * n + [1]))

    named = {key: convert(pull(value.coeffs)) for key, value in lat.named_classes.items()}
    new_name = name or f"{lat.name}-blowup"
    basis = lat.basis_labels + (e_label,)

    provisional = SurfaceLattice(new_name, basis, gram, curves, generators, validate=False)
    base = lat.polarization or lat.basis_class(lat.basis_labels[0])
    polarization = None
    for k in range(1, MAX_POLARIZATION_MULTIPLE + 1):
        candidate = provisional.divisor(convert(pull((k * base).coeffs)[:n] + [-1]))
        if ample_test(candidate):
            polarization = candidate.coeffs
            break
    if polarization is None:
        raise InvariantViolation(f"No ample class k*f^*A - e with k <= {MAX_POLARIZATION_MULTIPLE}")

    blown_up = SurfaceLattice(
        new_name, basis, gram, curves, generators, polarization,
        aliases=lat.aliases, named_classes=named,
    )
    rows = [convert(pull([1 if j == i else 0 for j in range(n)])) for i in range(n)]
    blowdown = BlowdownMap(
        source=blown_up,
        target=lat,
        pullback_rows=tuple(rows),
        contracted_curves=frozenset({e_label}),
        centres={e_label: frozenset(centres)},
    )
    logger.info("Blew up %s -> %s (centre on %s)", lat.name, new_name, ", ".join(centres) or "no curve")
    return blown_up, blowdown


@lru_cache(maxsize=None)
def hyperplane_lattice(n: int) -> SurfaceLattice:
    """
    Rank-one lattice N^1(P^n) generated by the hyperplane class L.

    Positivity of O(d) on P^n only depends on the sign of d, so this lattice
    lets degree lists on any P^n reuse the surface predicates. For n = 2 it
    coincides with the bundled "p2" surface.
    """
    if n < 1:
        raise ValueError("Projective space dimension must be positive")
    curve = "line" if n == 2 else "hyperplane"
    return SurfaceLattice(
        name=f"p{n}",
        basis_labels=("L",),
        gram=[[1]],
        curves=[(curve, (1,))],
        mori_generators=[(1,)],
        polarization=(1,),
        aliases={"H": "L"},
        ambient_dim=n,
    )
