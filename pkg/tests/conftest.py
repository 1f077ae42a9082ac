"""Shared test oracles, independent of the library's own algorithms."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from treetp import ExactMatrix


def laplace_det(rows: list[list[Fraction]]) -> Fraction:
    """Cofactor-expansion determinant; the oracle for all exact det work."""
    n = len(rows)
    if n == 1:
        return Fraction(rows[0][0])
    total = Fraction(0)
    for j in range(n):
        if rows[0][j] == 0:
            continue
        sub = [row[:j] + row[j + 1 :] for row in rows[1:]]
        total += (-1) ** j * rows[0][j] * laplace_det(sub)
    return total


def oracle_minor(A: ExactMatrix, rows, cols) -> Fraction:
    return laplace_det([[A.rows[r - 1][c - 1] for c in cols] for r in rows])


def oracle_all_minors_positive(A: ExactMatrix) -> tuple[bool, int]:
    """Brute-force TP check; returns (verdict, number of minors examined)."""
    n = A.n
    checked = 0
    for size in range(1, n + 1):
        for rows in itertools.combinations(range(1, n + 1), size):
            for cols in itertools.combinations(range(1, n + 1), size):
                checked += 1
                if oracle_minor(A, rows, cols) <= 0:
                    return False, checked
    return True, checked


def _elementary(n: int, i: int, j: int, t: Fraction) -> ExactMatrix:
    rows = [[Fraction(1 if r == c else 0) for c in range(n)] for r in range(n)]
    rows[i][j] = t
    return ExactMatrix(rows)


def bidiagonal_tp(n: int, rng: random.Random) -> ExactMatrix:
    """Product of positive bidiagonal factors; totally positive by construction."""
    A = ExactMatrix.identity(n)
    for k in range(1, n):
        for i in range(n - 1, k - 1, -1):
            A = A * _elementary(n, i, i - 1, Fraction(rng.randint(1, 9), rng.randint(1, 4)))
    diag = [[Fraction(rng.randint(1, 9)) if r == c else Fraction(0) for c in range(n)] for r in range(n)]
    A = A * ExactMatrix(diag)
    for k in range(n - 1, 0, -1):
        for i in range(k, n):
            A = A * _elementary(n, i - 1, i, Fraction(rng.randint(1, 9), rng.randint(1, 4)))
    return A


def random_int_matrix(rng: random.Random, n: int, lo: int = -9, hi: int = 9) -> ExactMatrix:
    return ExactMatrix([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])


def random_rational_matrix(rng: random.Random, n: int, num: int = 20, den: int = 6) -> ExactMatrix:
    return ExactMatrix(
        [
            [Fraction(rng.randint(-num, num), rng.randint(1, den)) for _ in range(n)]
            for _ in range(n)
        ]
    )


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240809)
