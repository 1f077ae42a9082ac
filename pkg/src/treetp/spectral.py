"""Spectral analysis built on the exact characteristic polynomial.

Realness and simplicity of the minimum-modulus eigenvalue are decided
exactly (Sturm sequences on the square-free part of the characteristic
polynomial); complex eigenvalues are estimated numerically, which is all
they are needed for.  The eigenvector of the smallest eigenvalue prefers
the adjugate route: when the adjugate is signature similar to a positive
matrix, power iteration on that positive matrix is provably convergent.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .exact_linalg import ExactMatrix, adjugate, det
from .tree_model import LabelledTree, SigningVerdict, is_signed_according_to, tree_signing
from .positivity import AdjointCheck, check_adjoint_conclusion

MODULUS_MARGIN_RTOL = 1e-9
ISOLATION_WIDTH = Fraction(1, 10**12)


class Polynomial:
    """Dense univariate polynomial over exact rationals, ascending coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence) -> None:
        items = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        while items and items[-1] == 0:
            items.pop()
        object.__setattr__(self, "coeffs", tuple(items))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    def __reduce__(self):
        return (Polynomial, (self.coeffs,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if self.is_zero():
            return "Polynomial(0)"
        terms = [f"{c}*x^{k}" for k, c in enumerate(self.coeffs) if c != 0]
        return "Polynomial(" + " + ".join(terms) + ")"

    def __call__(self, x: Fraction | int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_complex(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + complex(c)
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial([k * c for k, c in enumerate(self.coeffs)][1:])

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        merged = list(a)
        for i, c in enumerate(b):
            merged[i] += c
        return Polynomial(merged)

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero() or other.is_zero():
            return Polynomial([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    def scaled(self, c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial([c * x for x in self.coeffs])

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scaled(Fraction(1) / self.coeffs[-1])

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = list(other.coeffs)
        q = [Fraction(0)] * max(0, len(rem) - len(d) + 1)
        lead = d[-1]
        for k in range(len(rem) - len(d), -1, -1):
            factor = rem[k + len(d) - 1] / lead
            q[k] = factor
            if factor:
                for i, c in enumerate(d):
                    rem[k + i] -= factor * c
        return Polynomial(q), Polynomial(rem[: len(d) - 1])

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[1]


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd via the Euclidean algorithm."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def squarefree_decomposition(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Yun's algorithm: p = const * prod f_i^i with the f_i squarefree, coprime."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    p = p.monic()
    if p.degree < 1:
        return []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        g = poly_gcd(b, d)
        if g.degree > 0:
            out.append((g, i))
        b = b // g
        c = d // g
        d = c - b.derivative()
        i += 1
    return out


@lru_cache(maxsize=512)
def char_poly(A: ExactMatrix) -> Polynomial:
    """Exact det(xI - A) via the Faddeev-LeVerrier recurrence."""
    n = A.n
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    N = ExactMatrix.identity(n)
    for k in range(1, n + 1):
        AN = A * N
        trace = sum(AN.rows[i][i] for i in range(n))
        c = -trace / k
        coeffs[n - k] = c
        if k < n:
            N = ExactMatrix([
                [AN.rows[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)
            ])
    return Polynomial(coeffs)


@dataclass(frozen=True)
class RootInterval:
    """Closed interval holding exactly `multiplicity` roots (a point when exact)."""

    lo: Fraction
    hi: Fraction
    multiplicity: int

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def width(self) -> Fraction:
        return self.hi - self.lo

    def is_exact(self) -> bool:
        return self.lo == self.hi


def _int_coeffs(p: Polynomial) -> tuple[int, ...]:
    """Positive rescale to coprime integer coefficients (signs preserved)."""
    lcm = 1
    for c in p.coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in p.coeffs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)


def _sign_at(ints: tuple[int, ...], x: Fraction) -> int:
    """Sign of the polynomial at x, in pure integer arithmetic."""
    num, den = x.numerator, x.denominator
    acc = ints[-1]
    dpow = 1
    for c in reversed(ints[:-1]):
        dpow *= den
        acc = acc * num + c * dpow
    return (acc > 0) - (acc < 0)


def _sturm_chain(f: Polynomial) -> list[tuple[int, ...]]:
    chain = [f, f.derivative()]
    while not chain[-1].is_zero():
        chain.append(-(chain[-2] % chain[-1]))
    chain.pop()
    return [_int_coeffs(q) for q in chain]


def _variations(chain: list[tuple[int, ...]], x: Fraction) -> int:
    signs = []
    for q in chain:
        s = _sign_at(q, x)
        if s != 0:
            signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _cauchy_bound(f: Polynomial) -> Fraction:
    lead = abs(f.coeffs[-1])
    return 1 + max(abs(c) for c in f.coeffs[:-1]) / lead if f.degree >= 1 else Fraction(1)


def _refine(
    f_ints: tuple[int, ...], lo: Fraction, hi: Fraction, width: Fraction
) -> tuple[Fraction, Fraction]:
    # one simple root in (lo, hi); f is nonzero with opposite signs at the ends
    s_lo = _sign_at(f_ints, lo)
    while hi - lo > width:
        mid = (lo + hi) / 2
        s = _sign_at(f_ints, mid)
        if s == 0:
            return mid, mid
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _isolate_squarefree(f: Polynomial) -> list[tuple[Fraction, Fraction]]:
    """Disjoint isolating intervals (or exact points) for all real roots of f."""
    exact: list[Fraction] = []
    # peel off rational roots hit during bisection by deflation
    while True:
        if f.degree == 1:
            exact.append(-f.coeffs[0] / f.coeffs[1])
            return [(r, r) for r in exact]
        if f.degree < 1:
            return [(r, r) for r in exact]
        f_ints = _int_coeffs(f)
        chain = _sturm_chain(f)
        bound = _cauchy_bound(f)
        hit = None
        intervals = []
        stack = [(-bound, bound, _variations(chain, -bound), _variations(chain, bound))]
        while stack:
            lo, hi, v_lo, v_hi = stack.pop()
            count = v_lo - v_hi
            if count == 0:
                continue
            if count == 1:
                intervals.append((lo, hi))
                continue
            mid = (lo + hi) / 2
            if _sign_at(f_ints, mid) == 0:
                hit = mid
                break
            v_mid = _variations(chain, mid)
            stack.append((lo, mid, v_lo, v_mid))
            stack.append((mid, hi, v_mid, v_hi))
        if hit is None:
            return [(r, r) for r in exact] + intervals
        exact.append(hit)
        f = f // Polynomial([-hit, 1])


@lru_cache(maxsize=512)
def _real_roots_cached(p: Polynomial, refine_to: Fraction | None) -> tuple[RootInterval, ...]:
    found: list[tuple[Fraction, Fraction, int, tuple[int, ...]]] = []
    for factor, mult in squarefree_decomposition(p):
        f_ints = _int_coeffs(factor)
        for lo, hi in _isolate_squarefree(factor):
            found.append((lo, hi, mult, f_ints))
    # roots of coprime factors are distinct; shrink any overlapping intervals
    changed = True
    while changed:
        changed = False
        for i, j in itertools.combinations(range(len(found)), 2):
            lo1, hi1, m1, f1 = found[i]
            lo2, hi2, m2, f2 = found[j]
            if hi1 >= lo2 and hi2 >= lo1:
                if lo1 != hi1:
                    found[i] = (*_refine(f1, lo1, hi1, (hi1 - lo1) / 4), m1, f1)
                    changed = True
                if lo2 != hi2:
                    found[j] = (*_refine(f2, lo2, hi2, (hi2 - lo2) / 4), m2, f2)
                    changed = True
    out = []
    for lo, hi, mult, f_ints in found:
        if refine_to is not None and hi - lo > refine_to:
            lo, hi = _refine(f_ints, lo, hi, refine_to)
        out.append(RootInterval(lo, hi, mult))
    out.sort(key=lambda r: r.lo + r.hi)
    return tuple(out)


def real_roots(p: Polynomial, refine_to: Fraction | None = None) -> list[RootInterval]:
    """Isolating intervals with exact multiplicities for all real roots of p."""
    if p.is_zero():
        raise ValueError("zero polynomial has no well-defined roots")
    return list(_real_roots_cached(p, refine_to))


@dataclass(frozen=True)
class SpectrumEstimate:
    values: tuple[complex, ...]
    converged: bool
    max_scaled_residual: float


def _roots_durand_kerner(p: Polynomial, tol: float) -> SpectrumEstimate:
    n = p.degree
    if n < 1:
        return SpectrumEstimate((), True, 0.0)
    monic = [float(c / p.coeffs[-1]) for c in p.coeffs]
    if n == 1:
        return SpectrumEstimate((complex(-monic[0]),), True, 0.0)

    def eval_monic(z: complex) -> complex:
        acc = complex(1.0)
        for c in reversed(monic[:-1]):
            acc = acc * z + c
        return acc

    radius = max(abs(monic[0]) ** (1.0 / n), 1e-3)
    seed = 0.4 + 0.9j
    z = [radius * seed**k for k in range(n)]
    for _ in range(600):
        moved = 0.0
        for j in range(n):
            denom = complex(1.0)
            for k in range(n):
                if k != j:
                    denom *= z[j] - z[k]
            if denom == 0:
                z[j] *= 1 + 1e-12
                continue
            step = eval_monic(z[j]) / denom
            z[j] -= step
            moved = max(moved, abs(step) / (1.0 + abs(z[j])))
        if moved < 1e-15:
            break

    def scaled_residual(w: complex) -> float:
        scale = sum(abs(c) * max(1.0, abs(w)) ** k for k, c in enumerate(monic))
        return abs(eval_monic(w)) / scale

    worst = max(scaled_residual(w) for w in z)
    return SpectrumEstimate(tuple(z), worst <= tol, worst)


def _pair_conjugates(values: Sequence[complex], n_real: int) -> list[complex]:
    """Snap the n_real estimates nearest the real axis; pair the rest conjugately."""
    order = sorted(range(len(values)), key=lambda i: (abs(values[i].imag), i))
    out: list[complex | None] = [None] * len(values)
    for i in order[:n_real]:
        out[i] = complex(values[i].real)
    rest = order[n_real:]
    used = set()
    for i in rest:
        if i in used:
            continue
        best = None
        for j in rest:
            if j != i and j not in used:
                d = abs(values[i] - values[j].conjugate())
                if best is None or d < best[0]:
                    best = (d, j)
        if best is None:
            out[i] = values[i]
            continue
        j = best[1]
        used.add(i)
        used.add(j)
        w = (values[i] + values[j].conjugate()) / 2
        if w.imag < 0:
            w = w.conjugate()
        out[i] = w
        out[j] = w.conjugate()
    return [v for v in out if v is not None]


@lru_cache(maxsize=512)
def full_spectrum_numeric(A: ExactMatrix, tol: float = 1e-9) -> SpectrumEstimate:
    """All n eigenvalue estimates from the exact characteristic polynomial.

    Deterministic simultaneous iteration; complex estimates are forced
    into exact conjugate pairs, with the count of real values taken from
    the exact root isolation.
    """
    p = char_poly(A)
    est = _roots_durand_kerner(p, tol)
    n_real = sum(r.multiplicity for r in real_roots(p))
    paired = _pair_conjugates(est.values, n_real)
    paired.sort(key=lambda z: (z.real, z.imag))
    return SpectrumEstimate(tuple(paired), est.converged, est.max_scaled_residual)


@dataclass(frozen=True)
class SmallestEigen:
    """Classification of the minimum-modulus eigenvalue."""

    estimate: complex
    is_real: bool
    is_simple: bool | None
    multiplicity: int | None
    interval: RootInterval | None
    modulus_margin: float
    ambiguous: bool


def _modulus_entities(rroots: list[RootInterval], spectrum: Sequence[complex]):
    """(modulus, kind, payload) per distinct eigenvalue; conjugate pairs count once."""
    entities = []
    for r in rroots:
        mid = r.midpoint()
        entities.append((abs(float(mid)), "real", r))
    nonreal = [z for z in spectrum if z.imag > 0]
    for z in nonreal:
        entities.append((abs(z), "pair", z))
    entities.sort(key=lambda t: t[0])
    return entities


def smallest_eigenvalue(A: ExactMatrix) -> SmallestEigen:
    """Identify and classify the eigenvalue of minimum modulus."""
    p = char_poly(A)
    rroots = real_roots(p, refine_to=ISOLATION_WIDTH)
    spectrum = full_spectrum_numeric(A)
    entities = _modulus_entities(rroots, spectrum.values)
    m1, kind, payload = entities[0]
    if len(entities) > 1:
        m2 = entities[1][0]
        margin = (m2 - m1) / m2 if m2 > 0 else 0.0
        ambiguous = margin < MODULUS_MARGIN_RTOL
    else:
        margin = float("inf")
        ambiguous = False
    if kind == "real":
        interval: RootInterval = payload
        return SmallestEigen(
            estimate=complex(float(interval.midpoint())),
            is_real=True,
            is_simple=interval.multiplicity == 1,
            multiplicity=interval.multiplicity,
            interval=interval,
            modulus_margin=margin,
            ambiguous=ambiguous,
        )
    return SmallestEigen(
        estimate=payload,
        is_real=False,
        is_simple=None,
        multiplicity=None,
        interval=None,
        modulus_margin=margin,
        ambiguous=ambiguous,
    )


def perron_vector(M, tol: float = 1e-12, max_iter: int = 100_000) -> tuple[float, np.ndarray]:
    """Dominant eigenvalue and positive eigenvector of a positive matrix.

    Power iteration with Collatz-Wielandt bracketing; the returned vector
    has unit max entry.
    """
    if isinstance(M, ExactMatrix):
        if any(x <= 0 for row in M.rows for x in row):
            raise ValueError("matrix must be entrywise positive")
        mat = np.array(M.to_float_rows(), dtype=float)
    else:
        mat = np.asarray(M, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("matrix must be square")
        if not (mat > 0).all():
            raise ValueError("matrix must be entrywise positive")
    n = mat.shape[0]
    v = np.ones(n)
    value = float(mat.sum() / n)
    for _ in range(max_iter):
        w = mat @ v
        ratios = w / v
        lo, hi = float(ratios.min()), float(ratios.max())
        value = (lo + hi) / 2
        v = w / w.max()
        if hi - lo <= tol * hi:
            break
    return value, v


@dataclass(frozen=True)
class SpectralSummary:
    char_poly: Polynomial
    smallest: SmallestEigen
    eigenvector_unit: tuple[float, ...] | None
    eigenvector_last1: tuple[float, ...] | None
    signed_ok: bool | None
    signing: SigningVerdict | None
    full_spectrum: tuple[complex, ...]
    residual_inf: float | None
    route: str


def _solve_exact(B: ExactMatrix, rhs: list[Fraction]) -> list[Fraction] | None:
    """Gaussian elimination over the rationals; None when B is singular."""
    n = B.n
    m = [list(row) + [rhs[i]] for i, row in enumerate(B.rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        inv = Fraction(1) / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def _nullspace_vector(B: ExactMatrix) -> list[Fraction] | None:
    """One exact nonzero kernel vector of B, or None if B is invertible."""
    n = B.n
    m = [list(row) for row in B.rows]
    pivots: list[int] = []
    row = 0
    for col in range(n):
        piv = next((r for r in range(row, n) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = Fraction(1) / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for r in range(n):
            if r != row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
        if row == n:
            return None
    free = next(c for c in range(n) if c not in pivots)
    vec = [Fraction(0)] * n
    vec[free] = Fraction(1)
    for r, col in enumerate(pivots):
        vec[col] = -m[r][free]
    return vec


def _normalizations(v: np.ndarray) -> tuple[tuple[float, ...], tuple[float, ...] | None]:
    norm = float(np.linalg.norm(v))
    unit = v / norm
    lead = next((x for x in unit if x != 0), 1.0)
    if lead < 0:
        unit = -unit
    last1 = None
    if abs(v[-1]) > 1e-300 * max(1.0, float(np.abs(v).max())):
        last1 = tuple(float(x) for x in v / v[-1])
    return tuple(float(x) for x in unit), last1


def smallest_eig_vector(
    A: ExactMatrix,
    tree: LabelledTree,
    adjoint_check: AdjointCheck | None = None,
) -> SpectralSummary:
    """Eigenvector of the smallest eigenvalue, with its tree-signing verdict.

    Prefers the signature-conjugated adjugate (a positive matrix whose
    Perron vector is the wanted eigenvector, up to signs); falls back to
    inverse iteration at the exactly isolated smallest real eigenvalue,
    and reports a complex pair when the smallest eigenvalue is not real.
    """
    if A.n != tree.n:
        raise ValueError(f"matrix is {A.n}x{A.n} but tree has {tree.n} vertices")
    p = char_poly(A)
    smallest = smallest_eigenvalue(A)
    spectrum = full_spectrum_numeric(A)
    check = adjoint_check if adjoint_check is not None else check_adjoint_conclusion(A, tree)
    if all(x == 0 for row in check.adjugate.rows for x in row):
        raise ArithmeticError("adjugate is identically zero: rank < n-1")

    a_float = np.array(A.to_float_rows(), dtype=float)
    vector: np.ndarray | None = None
    exact_vector: list[Fraction] | None = None
    lam: float | None = None
    route = "none"

    if check.ok:
        d = det(A)
        signs = tree_signing(tree, 1)
        if d != 0:
            conj = ExactMatrix(
                [
                    [signs[i] * signs[j] * check.adjugate.rows[i][j] for j in range(A.n)]
                    for i in range(A.n)
                ]
            )
            rho, w = perron_vector(conj)
            vector = np.array([signs[i] * w[i] for i in range(A.n)])
            lam = float(d) / rho
            route = "adjugate-perron"
        else:
            col = next(
                (j for j in range(1, A.n + 1) if any(x != 0 for x in check.adjugate.column(j))),
                None,
            )
            if col is None:
                raise ArithmeticError("adjugate is identically zero: rank < n-1")
            exact_vector = list(check.adjugate.column(col))
            vector = np.array([float(x) for x in exact_vector])
            lam = 0.0
            route = "adjugate-column"
    elif smallest.is_real and not smallest.ambiguous:
        interval = smallest.interval
        shift = interval.midpoint()
        shifted = ExactMatrix(
            [
                [A.rows[i][j] - (shift if i == j else 0) for j in range(A.n)]
                for i in range(A.n)
            ]
        )
        ones = [Fraction(1)] * A.n
        solution = _solve_exact(shifted, ones)
        if solution is None:
            # the midpoint hit the eigenvalue exactly; take the exact kernel
            exact_vector = _nullspace_vector(shifted)
            if exact_vector is None:
                raise ArithmeticError("shifted matrix unexpectedly invertible")
            vector = np.array([float(x) for x in exact_vector])
        else:
            biggest = max(abs(x) for x in solution)
            vector = np.array([float(x / biggest) for x in solution])
        lam = float(shift)
        route = "inverse-iteration"

    if vector is None:
        return SpectralSummary(
            char_poly=p,
            smallest=smallest,
            eigenvector_unit=None,
            eigenvector_last1=None,
            signed_ok=None,
            signing=None,
            full_spectrum=spectrum.values,
            residual_inf=None,
            route=route,
        )

    residual = float(np.abs(a_float @ vector - lam * vector).max())
    unit, last1 = _normalizations(vector)
    signing_input = exact_vector if exact_vector is not None else list(unit)
    signing = is_signed_according_to(signing_input, tree)
    return SpectralSummary(
        char_poly=p,
        smallest=smallest,
        eigenvector_unit=unit,
        eigenvector_last1=last1,
        signed_ok=signing.ok,
        signing=signing,
        full_spectrum=spectrum.values,
        residual_inf=residual,
        route=route,
    )
