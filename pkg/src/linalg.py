"""Exact linear algebra over the rationals: inertia, linear solves, cone membership."""

from itertools import combinations
from typing import Optional, Sequence

from sympy import Matrix, Rational


def to_rational(value) -> Rational:
    """Convert an int, string ("-3/2"), Fraction or sympy number to an exact Rational."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, str):
        return Rational(value.strip())
    rational = Rational(str(value)) if not isinstance(value, int) else Rational(value)
    if not rational.is_Rational:
        raise ValueError(f"Not an exact rational: {value!r}")
    return rational


def inertia(rows: Sequence[Sequence]) -> tuple[int, int, int]:
    """
    Compute the inertia of a symmetric rational matrix.

    Runs symmetric Gaussian elimination (an LDL^T factorisation with
    diagonal pivoting); when every remaining diagonal entry vanishes the
    congruence e_i -> e_i + e_j produces a nonzero pivot. By Sylvester's
    law the pivot signs count the positive and negative eigenvalues.

    Returns:
        (positive, negative, zero) counts
    """
    matrix = Matrix(rows)
    size = matrix.rows
    positive = negative = 0

    while matrix.rows > 0:
        pivot_index = next((i for i in range(matrix.rows) if matrix[i, i] != 0), None)

        if pivot_index is None:
            pair = next(
                ((i, j) for i in range(matrix.rows) for j in range(i + 1, matrix.rows)
                 if matrix[i, j] != 0),
                None,
            )
            if pair is None:
                break  # remaining block is zero
            i, j = pair
            matrix[i, :] = matrix[i, :] + matrix[j, :]
            matrix[:, i] = matrix[:, i] + matrix[:, j]
            pivot_index = i

        matrix.row_swap(0, pivot_index)
        matrix.col_swap(0, pivot_index)
        pivot = matrix[0, 0]
        if pivot > 0:
            positive += 1
        else:
            negative += 1

        # Schur complement of the pivot
        matrix = matrix[1:, 1:] - matrix[1:, 0] * matrix[0, 1:] / pivot

    return positive, negative, size - positive - negative


def solve_exact(rows: Sequence[Sequence], rhs: Sequence) -> tuple[Rational, ...]:
    """Solve the square system rows * x = rhs exactly. Raises ValueError if singular."""
    matrix = Matrix(rows)
    if matrix.det() == 0:
        raise ValueError("Singular linear system")
    solution = matrix.LUsolve(Matrix(list(rhs)))
    return tuple(Rational(x) for x in solution)


def cone_combination(generators: Sequence[Sequence], target: Sequence) -> Optional[tuple[Rational, ...]]:
    """
    Decide exactly whether target lies in the cone spanned by generators.

    By Caratheodory's theorem a point of a finitely generated cone is a
    nonnegative combination of linearly independent generators, so it is
    enough to solve the square-or-tall systems given by independent subsets.
    Subsets are tried in lexicographic order, which makes the returned
    certificate deterministic.

    Returns:
        Nonnegative coefficients (one per generator) reproducing target,
        or None if target is outside the cone.
    """
    target_vector = Matrix([to_rational(t) for t in target])
    if all(t == 0 for t in target_vector):
        return tuple(Rational(0) for _ in generators)

    columns = [Matrix([to_rational(x) for x in g]) for g in generators]
    dimension = target_vector.rows

    for size in range(1, min(len(columns), dimension) + 1):
        for subset in combinations(range(len(columns)), size):
            block = Matrix.hstack(*(columns[i] for i in subset))
            if block.rank() < size:
                continue
            try:
                solution, params = block.gauss_jordan_solve(target_vector)
            except ValueError:
                continue  # target not in the span of this subset
            if params.rows:
                continue
            if any(x < 0 for x in solution):
                continue

            coefficients = [Rational(0)] * len(columns)
            for index, value in zip(subset, solution):
                coefficients[index] = Rational(value)
            return tuple(coefficients)

    return None
