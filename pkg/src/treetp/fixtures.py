"""Embedded worked examples with their exactly known expected outputs.

Three fixtures: a 4x4 matrix that is star-TP with the predicted adjugate
and eigenvector signs, and the two 5x5 matrices (star and pitchfork)
whose smallest eigenvectors break the predicted signing.
"""
from __future__ import annotations

from dataclasses import dataclass

from .exact_linalg import ExactMatrix
from .tree_model import LabelledTree, make_pitchfork, make_star


@dataclass(frozen=True)
class Fixture:
    name: str
    matrix: ExactMatrix
    tree: LabelledTree
    expected_adjugate: ExactMatrix | None
    expected_smallest: float
    expected_eigenvector_last1: tuple[float, ...]
    expected_signed_ok: bool
    expected_adjoint_ok: bool
    expected_mismatches: tuple[tuple[int, int], ...] | None
    expected_counterexample: bool
    expected_smallest_tol: float = 0.01
    expected_complex_pair: complex | None = None


STAR4_EXAMPLE = Fixture(
    name="star4-example",
    matrix=ExactMatrix(
        [
            [130, 78, 98, 96],
            [90, 108, 34, 25],
            [116, 57, 137, 44],
            [55, 1, 39, 112],
        ]
    ),
    tree=make_star(4, 1),
    expected_adjugate=ExactMatrix(
        [
            [1308414, -641920, -560896, -757860],
            [-791797, 446528, 327360, 450406],
            [-646651, 290240, 328640, 360378],
            [-410282, 210176, 158080, 292428],
        ]
    ),
    expected_smallest=2.5,
    expected_eigenvector_last1=(-3.12, 1.93, 1.55, 1.0),
    expected_signed_ok=True,
    expected_adjoint_ok=True,
    expected_mismatches=(),
    expected_counterexample=False,
    expected_smallest_tol=0.05,
    expected_complex_pair=83.6571 + 4.24099j,
)

STAR5_COUNTEREXAMPLE = Fixture(
    name="star5-counterexample",
    matrix=ExactMatrix(
        [
            [55, 77, 10, 17, 49],
            [40, 84, 3, 1, 8],
            [57, 74, 86, 15, 47],
            [94, 2, 8, 86, 58],
            [48, 41, 4, 4, 78],
        ]
    ),
    tree=make_star(5, 1),
    expected_adjugate=ExactMatrix(
        [
            [42023084, -27857784, -2494736, -6756454, -17014640],
            [-18274672, 7046528, 1241168, 2950496, 7815680],
            [2070092, 1908264, -5017752, 386110, 1240248],
            [-35907780, 21866360, 2481608, 951670, 18111768],
            [-14519176, 12220096, 1012872, 2538312, 279496],
        ]
    ),
    expected_smallest=-6.16,
    expected_eigenvector_last1=(-2.98, 1.21, -0.02, 2.39, 1.0),
    expected_signed_ok=False,
    expected_adjoint_ok=False,
    expected_mismatches=((3, 1), (3, 3)),
    expected_counterexample=True,
)

PITCHFORK_COUNTEREXAMPLE = Fixture(
    name="pitchfork-counterexample",
    matrix=ExactMatrix(
        [
            [88, 50, 35, 78, 38],
            [50, 48, 19, 27, 11],
            [35, 19, 41, 13, 6],
            [78, 27, 13, 86, 44],
            [38, 11, 6, 44, 59],
        ]
    ),
    tree=make_pitchfork(),
    expected_adjugate=None,
    expected_smallest=-2.54,
    expected_eigenvector_last1=(-68.08, 32.75, 26.69, 45.57, 1.0),
    expected_signed_ok=False,
    expected_adjoint_ok=False,
    expected_mismatches=None,
    expected_counterexample=True,
)

FIXTURES = {
    f.name: f for f in (STAR4_EXAMPLE, STAR5_COUNTEREXAMPLE, PITCHFORK_COUNTEREXAMPLE)
}


def get_fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        known = ", ".join(sorted(FIXTURES))
        raise KeyError(f"unknown fixture {name!r}; known fixtures: {known}") from None
