"""Partitions, Schur functor dimensions, Kostka numbers and Pieri expansions."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from math import factorial, prod
from typing import Iterator, Sequence

from sympy import Rational

from .errors import DomainError
from .parsing import parse_integers


@dataclass(frozen=True)
class Partition:
    """A weakly decreasing sequence of positive parts."""
    parts: tuple

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p < 1 for p in parts):
            raise ValueError(f"Partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"Partition parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str) -> Partition:
        """Parse "3,1" (zeros are dropped, so "2,1,0" is (2,1))."""
        return cls(tuple(p for p in parse_integers(text, allow_negative=False) if p))

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")"

    def cells(self) -> Iterator[tuple[int, int]]:
        for row, length in enumerate(self.parts):
            for col in range(length):
                yield row, col

    def conjugate(self) -> Partition:
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > col) for col in range(self.parts[0])))

    def hook(self, row: int, col: int) -> int:
        conjugate = self.conjugate().parts
        return self.parts[row] - col + conjugate[col] - row - 1


@dataclass(frozen=True)
class SchurSummand:
    """S_lambda E inside the n-th tensor power of a rank-r bundle, with multiplicity f^lambda."""
    partition: Partition
    tableau_multiplicity: int
    rank: int
    dimension: int

    def dimension_at_rank(self, r: int) -> int:
        return schur_dim(self.partition, r)


@dataclass(frozen=True)
class WitnessExponents:
    """Euclidean division lambda_i = a_i (mq) + b_i and the two sides of the exponent identity."""
    a: tuple
    b: tuple
    lhs: Rational
    rhs: Rational
    bound: int

    @property
    def holds(self) -> bool:
        return bool(self.lhs == self.rhs and self.lhs >= self.bound)


def _partitions(n: int, largest: int, max_parts: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first, max_parts - 1):
            yield (first,) + rest


def partitions(n: int, max_parts: int) -> list[Partition]:
    """All partitions of n with at most max_parts parts, in decreasing lexicographic order."""
    if n < 1:
        raise DomainError("partitions() needs n >= 1")
    return [Partition(parts) for parts in _partitions(n, n, max_parts)]


def num_standard_tableaux(shape: Partition) -> int:
    """Hook length formula f^lambda = n! / prod of hooks."""
    hooks = prod(shape.hook(row, col) for row, col in shape.cells())
    return factorial(shape.weight) // hooks


def schur_dim(shape: Partition, r: int) -> int:
    """Hook content formula: dim S_lambda(C^r) = prod (r + col - row) / hook; zero with more than r parts."""
    if len(shape) > r:
        return 0
    value = Rational(1)
    for row, col in shape.cells():
        value *= Rational(r + col - row, shape.hook(row, col))
    return int(value)


def tensor_power_decomposition(n: int, r: int) -> list[SchurSummand]:
    """T^n E = sum over lambda |- n with <= r parts of (S_lambda E)^{f^lambda}."""
    return [
        SchurSummand(shape, num_standard_tableaux(shape), r, schur_dim(shape, r))
        for shape in partitions(n, r)
    ]


def _horizontal_strips_removed(shape: tuple[int, ...], size: int) -> Iterator[tuple[int, ...]]:
    """Shapes nu with shape/nu a horizontal strip of the given size (lambda_{i+1} <= nu_i <= lambda_i)."""
    def extend(index: int, remaining: int) -> Iterator[tuple[int, ...]]:
        if index == len(shape):
            if remaining == 0:
                yield ()
            return
        lower = shape[index + 1] if index + 1 < len(shape) else 0
        for part in range(shape[index], lower - 1, -1):
            removed = shape[index] - part
            if removed > remaining:
                break
            for rest in extend(index + 1, remaining - removed):
                yield (part,) + rest

    for nu in extend(0, size):
        yield tuple(p for p in nu if p)


@lru_cache(maxsize=None)
def _kostka(shape: tuple[int, ...], content: tuple[int, ...]) -> int:
    if not content:
        return 1 if not shape else 0
    # the largest entry fills a horizontal strip of size content[-1]
    return sum(_kostka(nu, content[:-1]) for nu in _horizontal_strips_removed(shape, content[-1]))


def kostka(shape: Partition, content: Sequence[int]) -> int:
    """Number of semistandard tableaux of the given shape and content."""
    content = tuple(int(c) for c in content)
    if any(c < 0 for c in content):
        raise DomainError(f"Content entries must be nonnegative: {content}")
    if sum(content) != shape.weight:
        raise DomainError(f"Weight mismatch: |{shape}| = {shape.weight}, content sums to {sum(content)}")
    return _kostka(shape.parts, content)


def pieri_multiply(shape: tuple[int, ...], k: int) -> list[tuple[int, ...]]:
    """Shapes lambda with lambda/shape a horizontal strip of size k (s_shape * h_k)."""
    padded = shape + (0,)
    results = []

    def extend(index: int, remaining: int, built: tuple[int, ...]) -> None:
        if index == len(padded):
            if remaining == 0:
                results.append(tuple(p for p in built if p))
            return
        upper = remaining if index == 0 else min(remaining, padded[index - 1] - padded[index])
        for added in range(upper, -1, -1):
            extend(index + 1, remaining - added, built + (padded[index] + added,))

    extend(0, k, ())
    return results


def h_product(content: Sequence[int]) -> dict[Partition, int]:
    """Schur expansion of h_{mu_1} ... h_{mu_k} by iterated Pieri rule."""
    terms: dict[tuple[int, ...], int] = {(): 1}
    for k in content:
        if k == 0:
            continue
        expanded: dict[tuple[int, ...], int] = defaultdict(int)
        for shape, coefficient in terms.items():
            for larger in pieri_multiply(shape, k):
                expanded[larger] += coefficient
        terms = dict(expanded)
    return {Partition(shape): coefficient for shape, coefficient in sorted(terms.items(), reverse=True)}


def pieri_summand_certificate(shape: Partition, r: int) -> int:
    """Multiplicity of s_lambda in h_{lambda_1} ... h_{lambda_r}; S_lambda E is a summand of the S^{lambda_i}E product."""
    if len(shape) > r:
        raise DomainError(f"{shape} has {len(shape)} parts, more than r = {r}")
    padded = shape.parts + (0,) * (r - len(shape))
    return h_product(padded).get(shape, 0)


def witness_exponents(shape: Partition, m: int, q: int, M: int) -> WitnessExponents:
    """
    Write lambda_i = a_i (mq) + b_i with 0 <= b_i < mq.

    Returns lhs = 2M - m * sum a_i and rhs = M + (sum b_i)/q; these agree
    because sum lambda_i = Mq, and rhs >= M.
    """
    if min(m, q, M) < 1:
        raise DomainError("m, q and M must be positive")
    if shape.weight != M * q:
        raise DomainError(f"Weight of {shape} is {shape.weight}, expected M*q = {M * q}")
    a = tuple(part // (m * q) for part in shape)
    b = tuple(part % (m * q) for part in shape)
    lhs = Rational(2 * M - m * sum(a))
    rhs = M + Rational(sum(b), q)
    return WitnessExponents(a, b, lhs, rhs, M)


# ----- brute-force enumerators, used as cross-checks -----

def standard_tableaux(shape: Partition) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Every standard filling of the shape, built by placing 1..n on addable corners."""
    n = shape.weight

    def fill(rows: list[list[int]], k: int) -> Iterator[tuple[tuple[int, ...], ...]]:
        if k > n:
            yield tuple(tuple(row) for row in rows)
            return
        for i, target in enumerate(shape.parts):
            length = len(rows[i])
            if length < target and (i == 0 or len(rows[i - 1]) > length):
                rows[i].append(k)
                yield from fill(rows, k + 1)
                rows[i].pop()

    yield from fill([[] for _ in shape.parts], 1)


def semistandard_tableaux(shape: Partition, content: Sequence[int]) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Every filling with weakly increasing rows, strictly increasing columns and the given content."""
    cells = list(shape.cells())
    remaining = list(content)
    grid: dict[tuple[int, int], int] = {}

    def fill(index: int) -> Iterator[tuple[tuple[int, ...], ...]]:
        if index == len(cells):
            yield tuple(tuple(grid[(r, c)] for c in range(length)) for r, length in enumerate(shape.parts))
            return
        row, col = cells[index]
        low = 1
        if col > 0:
            low = max(low, grid[(row, col - 1)])
        if row > 0:
            low = max(low, grid[(row - 1, col)] + 1)
        for value in range(low, len(remaining) + 1):
            if remaining[value - 1] == 0:
                continue
            remaining[value - 1] -= 1
            grid[(row, col)] = value
            yield from fill(index + 1)
            remaining[value - 1] += 1
            del grid[(row, col)]

    yield from fill(0)
