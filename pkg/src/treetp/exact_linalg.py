"""Exact rational dense linear algebra on small square matrices.

Everything here is computed over arbitrary-precision rationals; no
operation ever rounds.  Minors are taken over *ordered* index lists, so
permuting a list flips the sign of the corresponding minor.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction


class SylvesterInapplicableError(ArithmeticError):
    """The central minor of the Sylvester quotient is zero.

    This signals that the identity cannot be evaluated for the given
    index lists, not that the inputs are malformed.
    """


class IndexList(tuple):
    """Ordered list of distinct 1-based indices.

    Order is significant and preserved: ``IndexList((3, 1, 4))`` selects
    row 3 first.  Derived lists drop the first and/or last entry.
    """

    def __new__(cls, indices: Iterable[int]) -> "IndexList":
        items = tuple(int(i) for i in indices)
        if any(i < 1 for i in items):
            raise ValueError(f"indices are 1-based, got {items}")
        if len(set(items)) != len(items):
            raise ValueError(f"duplicate index in {items}")
        return super().__new__(cls, items)

    def drop_last(self) -> "IndexList":
        return IndexList(self[:-1])

    def drop_first(self) -> "IndexList":
        return IndexList(self[1:])

    def drop_ends(self) -> "IndexList":
        return IndexList(self[1:-1])


def _to_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot build an exact rational from {value!r}")


class ExactMatrix:
    """Immutable square matrix of exact rationals."""

    __slots__ = ("n", "_rows")

    def __init__(self, rows: Iterable[Iterable]) -> None:
        data = tuple(tuple(_to_rational(x) for x in row) for row in rows)
        n = len(data)
        if n == 0:
            raise ValueError("matrix must have at least one row")
        if any(len(row) != n for row in data):
            raise ValueError("matrix must be square")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "_rows", data)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    def __reduce__(self):
        return (ExactMatrix, (self._rows,))

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def entry(self, i: int, j: int) -> Fraction:
        """1-based entry access."""
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise ValueError(f"entry ({i},{j}) out of range for n={self.n}")
        return self._rows[i - 1][j - 1]

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __eq__(self, other) -> bool:
        return isinstance(other, ExactMatrix) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self._rows)
        return f"ExactMatrix({self.n}x{self.n}: {body})"

    def __mul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.n != other.n:
            raise ValueError("dimension mismatch in matrix product")
        cols = tuple(zip(*other._rows))
        return ExactMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in self._rows]
        )

    def scaled(self, c) -> "ExactMatrix":
        c = _to_rational(c)
        return ExactMatrix([[c * x for x in row] for row in self._rows])

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(list(zip(*self._rows)))

    def is_symmetric(self) -> bool:
        return self._rows == tuple(zip(*self._rows))

    def column(self, j: int) -> tuple[Fraction, ...]:
        """1-based column extraction."""
        if not (1 <= j <= self.n):
            raise ValueError(f"column {j} out of range for n={self.n}")
        return tuple(row[j - 1] for row in self._rows)

    def to_float_rows(self) -> list[list[float]]:
        return [[float(x) for x in row] for row in self._rows]


class SignMatrix:
    """Square pattern of entrywise signs, each in {+1, -1, 0}."""

    __slots__ = ("n", "signs")

    def __init__(self, signs: Iterable[Iterable[int]]) -> None:
        data = tuple(tuple(int(s) for s in row) for row in signs)
        n = len(data)
        if any(len(row) != n for row in data):
            raise ValueError("sign pattern must be square")
        if any(s not in (-1, 0, 1) for row in data for s in row):
            raise ValueError("signs must be -1, 0 or +1")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "signs", data)

    def __setattr__(self, name, value):
        raise AttributeError("SignMatrix is immutable")

    def __reduce__(self):
        return (SignMatrix, (self.signs,))

    def __eq__(self, other) -> bool:
        return isinstance(other, SignMatrix) and self.signs == other.signs

    def __hash__(self) -> int:
        return hash(self.signs)

    def __repr__(self) -> str:
        sym = {1: "+", -1: "-", 0: "0"}
        body = "; ".join("".join(sym[s] for s in row) for row in self.signs)
        return f"SignMatrix({body})"


def _check_lists(A: ExactMatrix, rows: Sequence[int], cols: Sequence[int]) -> tuple[IndexList, IndexList]:
    rows = rows if isinstance(rows, IndexList) else IndexList(rows)
    cols = cols if isinstance(cols, IndexList) else IndexList(cols)
    if len(rows) != len(cols):
        raise ValueError(f"row list {rows} and column list {cols} differ in length")
    if len(rows) == 0:
        raise ValueError("index lists must be non-empty")
    for idx in (*rows, *cols):
        if idx > A.n:
            raise ValueError(f"index {idx} out of range for n={A.n}")
    return rows, cols


def submatrix(A: ExactMatrix, rows: Sequence[int], cols: Sequence[int]) -> ExactMatrix:
    """Reordered submatrix A[rows; cols]; list order is respected."""
    rows, cols = _check_lists(A, rows, cols)
    return ExactMatrix([[A.rows[r - 1][c - 1] for c in cols] for r in rows])


def _det_int(rows: list[list[int]]) -> int:
    """Bareiss fraction-free elimination for integer matrices."""
    n = len(rows)
    m = [row[:] for row in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mi = m[i]
            mk = m[k]
            fik = mi[k]
            for j in range(k + 1, n):
                mi[j] = (mi[j] * pivot - fik * mk[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def det(A: ExactMatrix) -> Fraction:
    """Exact determinant via fraction-free elimination.

    Denominators are cleared row by row first so the elimination runs over
    plain integers with no intermediate fractions.
    """
    scale = Fraction(1)
    int_rows: list[list[int]] = []
    for row in A.rows:
        lcm = 1
        for x in row:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        scale *= lcm
        int_rows.append([int(x * lcm) for x in row])
    return Fraction(_det_int(int_rows)) / scale


def minor(A: ExactMatrix, rows: Sequence[int], cols: Sequence[int]) -> Fraction:
    """det A[rows; cols] with row/column order taken from the lists."""
    return det(submatrix(A, rows, cols))


def adjugate(A: ExactMatrix) -> ExactMatrix:
    """Exact adjugate: transpose of the cofactor matrix.

    Computed as n^2 cofactors so it is valid for singular matrices too.
    """
    n = A.n
    if n < 2:
        raise ValueError("adjugate requires n >= 2")
    rows = A.rows
    out = [[Fraction(0)] * n for _ in range(n)]
    for j in range(n):
        reduced = [row[:j] + row[j + 1 :] for row in rows]
        for i in range(n):
            sub = ExactMatrix(reduced[:i] + reduced[i + 1 :])
            # adj entry (j, i) is the signed minor deleting row i, column j
            out[j][i] = (-1) ** (i + j) * det(sub)
    return ExactMatrix(out)


def _minor_or_one(A: ExactMatrix, rows: IndexList, cols: IndexList) -> Fraction:
    if len(rows) == 0:
        return Fraction(1)
    return minor(A, rows, cols)


def sylvester_rhs(A: ExactMatrix, alpha: Sequence[int], beta: Sequence[int]) -> Fraction:
    """Quotient-of-minors expansion of det A[alpha; beta].

    Evaluates (det A[a';b'] det A['a;'b] - det A[a';'b] det A['a;b'])
    / det A['a';'b'], where a' drops the last index, 'a drops the first,
    and 'a' drops both; the empty list has determinant 1.  Raises
    SylvesterInapplicableError when the central minor vanishes.
    """
    alpha, beta = _check_lists(A, alpha, beta)
    if len(alpha) < 2:
        raise ValueError("index lists must have length >= 2")
    central = _minor_or_one(A, alpha.drop_ends(), beta.drop_ends())
    if central == 0:
        raise SylvesterInapplicableError(
            f"central minor det A[{alpha.drop_ends()}; {beta.drop_ends()}] is zero"
        )
    top = minor(A, alpha.drop_last(), beta.drop_last()) * minor(
        A, alpha.drop_first(), beta.drop_first()
    ) - minor(A, alpha.drop_last(), beta.drop_first()) * minor(
        A, alpha.drop_first(), beta.drop_last()
    )
    return top / central


def sign_pattern(A: ExactMatrix) -> SignMatrix:
    """Entrywise exact signs; zero maps to 0."""
    def sgn(x: Fraction) -> int:
        return (x > 0) - (x < 0)

    return SignMatrix([[sgn(x) for x in row] for row in A.rows])


# --- matrix text format -------------------------------------------------
#
# One matrix row per line, entries whitespace separated, each an optionally
# signed integer or p/q rational.  Lines starting with '#' are comments.

def matrix_from_text(text: str) -> ExactMatrix:
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            rows.append([Fraction(tok) for tok in stripped.split()])
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad matrix entry on line {lineno}: {exc}") from exc
    if not rows:
        raise ValueError("no matrix rows found")
    width = len(rows[0])
    if any(len(r) != width for r in rows) or width != len(rows):
        raise ValueError(
            f"matrix must be square, got {len(rows)} rows of widths {sorted({len(r) for r in rows})}"
        )
    return ExactMatrix(rows)


def _format_entry(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def matrix_to_text(A: ExactMatrix) -> str:
    lines = []
    for row in A.rows:
        cells = [_format_entry(x) for x in row]
        lines.append(" ".join(cells))
    return "\n".join(lines) + "\n"
