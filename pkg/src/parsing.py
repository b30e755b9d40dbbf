"""Parsers for divisor classes, bundles, degree lists and partitions given on the command line."""

from __future__ import annotations

import re
from typing import TYPE_CHECKING

from sympy import Rational

from .errors import ParseError, UnknownLabelError

if TYPE_CHECKING:
    from .lattice import DivisorClass, SurfaceLattice

CLASS_GRAMMAR = "signed terms like 2L-Fb-3/2Fp (coefficient [*] label, or 0)"

_WHITESPACE = re.compile(r"\s*")
_SIGN = re.compile(r"[+-]")
_COEFFICIENT = re.compile(r"\d+(?:/\d+)?")
_STAR = re.compile(r"\s*\*\s*")
_LABEL = re.compile(r"[^\W\d][\w'′̄]*")
_INTEGER = re.compile(r"\s*-?\d+\s*")


def parse_rational(text: str) -> Rational:
    """Parse "3", "-3/2" into an exact Rational."""
    match = re.fullmatch(r"\s*(-?\d+(?:/\d+)?)\s*", text)
    if not match:
        raise ParseError(text, 0, "a rational number like -3/2")
    numerator, _, denominator = match.group(1).partition("/")
    if denominator and int(denominator) == 0:
        raise ParseError(text, text.index("/") + 1, "a nonzero denominator")
    return Rational(match.group(1))


def parse_class(text: str, lattice: SurfaceLattice) -> DivisorClass:
    """
    Parse a signed rational combination of basis labels.

    Labels may be basis labels, aliases declared by the surface (e.g. the
    unicode F̄ for Fb), named classes (e.g. C) or curve labels.

    Raises:
        ParseError: with the failing position and the expected grammar
    """
    position = _WHITESPACE.match(text, 0).end()
    if position == len(text):
        raise ParseError(text, position, CLASS_GRAMMAR, "Empty class")

    result = lattice.zero()
    first = True

    while position < len(text):
        sign = 1
        match = _SIGN.match(text, position)
        if match:
            sign = -1 if match.group() == "-" else 1
            position = _WHITESPACE.match(text, match.end()).end()
        elif not first:
            raise ParseError(text, position, "'+' or '-' between terms")

        coefficient = None
        match = _COEFFICIENT.match(text, position)
        if match:
            coefficient = parse_rational(match.group())
            position = match.end()
            star = _STAR.match(text, position)
            position = star.end() if star else _WHITESPACE.match(text, position).end()

        match = _LABEL.match(text, position)
        if match:
            label = match.group()
            try:
                term = lattice.resolve_name(label)
            except UnknownLabelError:
                known = ", ".join(lattice.basis_labels)
                raise ParseError(text, position, f"a label of {lattice.name} ({known})",
                                 f"Unknown label {label!r}")
            result = result + sign * (coefficient if coefficient is not None else 1) * term
            position = match.end()
        elif coefficient is not None and coefficient == 0:
            pass  # bare zero term
        else:
            raise ParseError(text, position, CLASS_GRAMMAR)

        position = _WHITESPACE.match(text, position).end()
        first = False

    return result


def parse_bundle(text: str, lattice: SurfaceLattice) -> tuple[DivisorClass, ...]:
    """Parse ';'-separated summand classes, e.g. "L+Fb; 0"."""
    summands = []
    offset = 0
    for piece in text.split(";"):
        try:
            summands.append(parse_class(piece, lattice))
        except ParseError as e:
            raise ParseError(text, offset + e.position, e.expected) from e
        offset += len(piece) + 1
    return tuple(summands)


def parse_integers(text: str, allow_negative: bool = True) -> tuple[int, ...]:
    """Parse comma-separated integers, e.g. degrees "1,0,-2" or parts "3,1"."""
    values = []
    offset = 0
    for piece in text.split(","):
        if not _INTEGER.fullmatch(piece) or (not allow_negative and "-" in piece):
            expected = "an integer" if allow_negative else "a nonnegative integer"
            raise ParseError(text, offset, f"comma-separated {expected}s")
        values.append(int(piece))
        offset += len(piece) + 1
    return tuple(values)
