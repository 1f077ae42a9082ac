"""Randomized generation and batch testing of the tree-positivity conjecture.

Candidates are integer matrices screened in int64 by the kernels in
``_kernels`` (rejection sampling, plus an optional greedy repair phase),
then re-verified by the exact library before they are ever reported.
Every random decision flows from a per-slot seed stream, so a batch is
reproducible and the parallel and serial runs produce identical reports.
"""
from __future__ import annotations

import itertools
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .exact_linalg import ExactMatrix, matrix_from_text, matrix_to_text, minor
from .positivity import (
    AdjointCheck,
    HypothesisReport,
    check_adjoint_conclusion,
    is_t_tp,
    pendant_deletion_hypothesis,
)
from .spectral import SmallestEigen, SpectralSummary, smallest_eig_vector
from .tree_model import (
    LabelledTree,
    enumerate_labelled_trees,
    maximal_paths,
    pendant_vertices,
)

_SEED_MASK = 2**64 - 1
_BATCH = 4096
_REPAIR_CHUNK = 2048


@dataclass(frozen=True)
class GenConfig:
    """Settings for candidate generation.

    ``max_attempts`` counts starting matrices: screened candidates in
    rejection mode, hill-climb starts when ``repair`` is on.  Entries are
    drawn uniformly from ``entry_range`` (inclusive); positivity of the
    target class forces lo >= 1.
    """

    tree: LabelledTree
    entry_range: tuple[int, int] = (1, 150)
    seed: int = 0
    max_attempts: int = 2_000_000
    augmented: bool = False
    symmetric: bool = False
    repair: bool = False
    repair_rounds: int = 20_000

    def __post_init__(self):
        lo, hi = self.entry_range
        if lo < 1:
            raise ValueError("entry range must start at 1 or above")
        if hi < lo:
            raise ValueError("empty entry range")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be at least 1")


class _Plan:
    """Per-tree screening data shared by every candidate."""

    def __init__(self, cfg: GenConfig) -> None:
        tree = cfg.tree
        paths = [tuple(v - 1 for v in p.vertices) for p in maximal_paths(tree)]
        self.paths = paths
        self.paths_flat = np.array([v for p in paths for v in p], dtype=np.int64)
        self.path_offsets = np.cumsum([0] + [len(p) for p in paths], dtype=np.int64)
        if cfg.augmented:
            blocks = [
                tuple(v - 1 for v in range(1, tree.n + 1) if v != p)
                for p in pendant_vertices(tree)
            ]
        else:
            blocks = []
        self.pend_blocks = blocks
        self.pend_flat = np.array([v for b in blocks for v in b], dtype=np.int64)
        self.pend_offsets = np.cumsum([0] + [len(b) for b in blocks], dtype=np.int64)
        max_minor = max(len(p) for p in paths)
        if blocks:
            max_minor = max(max_minor, max(len(b) for b in blocks))
        self.int64_ok = _kernels.int64_screen_safe(max_minor, cfg.entry_range[1])


def _exact_violations(entries: np.ndarray, plan: _Plan, augmented: bool) -> int:
    """Arbitrary-precision fallback for the screening objective."""
    A = ExactMatrix([[int(x) for x in row] for row in entries])
    bad = 0
    for path in plan.paths:
        idx = tuple(v + 1 for v in path)
        length = len(idx)
        for size in range(1, length + 1):
            for j0 in range(length - size + 1):
                if minor(A, idx[:size], idx[j0 : j0 + size]) <= 0:
                    bad += 1
            for i0 in range(1, length - size + 1):
                if minor(A, idx[i0 : i0 + size], idx[:size]) <= 0:
                    bad += 1
    if augmented:
        for block in plan.pend_blocks:
            keep = tuple(v + 1 for v in block)
            for size in range(1, len(keep) + 1):
                for sel in itertools.combinations(keep, size):
                    if minor(A, sel, sel) <= 0:
                        bad += 1
    return bad


def _hypothesis_reports(A: ExactMatrix, tree: LabelledTree, augmented: bool) -> HypothesisReport:
    if augmented:
        return pendant_deletion_hypothesis(A, tree)
    return HypothesisReport(is_t_tp(A, tree), ())


def _rng_for(cfg: GenConfig, slot: int, lane: int = 0) -> np.random.Generator:
    key = (lane, slot) if lane else (slot,)
    return np.random.default_rng(np.random.SeedSequence(cfg.seed & _SEED_MASK, spawn_key=key))


def _symmetrize(batch: np.ndarray) -> np.ndarray:
    upper = np.triu(batch)
    return upper + np.swapaxes(np.triu(batch, 1), -1, -2)


def _screen(batch: np.ndarray, plan: _Plan, augmented: bool) -> int:
    if _kernels.BACKEND == "numba":
        return int(
            _kernels.active.screen_batch(
                batch, plan.paths_flat, plan.path_offsets, plan.pend_flat, plan.pend_offsets, augmented
            )
        )
    return _kernels.screen_batch_vectorized(batch, plan.paths, plan.pend_blocks, augmented)


def _generate_slot(cfg: GenConfig, slot: int, lane: int = 0) -> tuple[ExactMatrix | None, int]:
    """One deterministic candidate stream; returns (matrix, attempts used)."""
    plan = _Plan(cfg)
    rng = _rng_for(cfg, slot, lane)
    n = cfg.tree.n
    lo, hi = cfg.entry_range
    if cfg.repair:
        return _generate_repair(cfg, plan, rng, n, lo, hi)
    attempts = 0
    while attempts < cfg.max_attempts:
        size = min(_BATCH, cfg.max_attempts - attempts)
        batch = rng.integers(lo, hi + 1, size=(size, n, n), dtype=np.int64)
        if cfg.symmetric:
            batch = _symmetrize(batch)
        start = 0
        while start < size:
            if plan.int64_ok:
                idx = _screen(batch[start:], plan, cfg.augmented)
            else:
                idx = next(
                    (
                        k
                        for k in range(size - start)
                        if _exact_violations(batch[start + k], plan, cfg.augmented) == 0
                    ),
                    -1,
                )
            if idx < 0:
                attempts += size - start
                break
            attempts += idx + 1
            candidate = ExactMatrix([[int(x) for x in row] for row in batch[start + idx]])
            if _hypothesis_reports(candidate, cfg.tree, cfg.augmented).holds:
                return candidate, attempts
            start += idx + 1
    return None, attempts


def _generate_repair(cfg, plan, rng, n, lo, hi) -> tuple[ExactMatrix | None, int]:
    kern = _kernels.active if plan.int64_ok else None
    for attempt in range(cfg.max_attempts):
        a = rng.integers(lo, hi + 1, size=(n, n), dtype=np.int64)
        if cfg.symmetric:
            a = _symmetrize(a[None])[0]
        a = np.ascontiguousarray(a)
        if kern is not None:
            current = int(
                kern.hypothesis_violations(
                    a, plan.paths_flat, plan.path_offsets, plan.pend_flat, plan.pend_offsets,
                    cfg.augmented, False,
                )
            )
        else:
            current = _exact_violations(a, plan, cfg.augmented)
        rounds_left = cfg.repair_rounds
        while rounds_left > 0 and current > 0:
            size = min(_REPAIR_CHUNK, rounds_left)
            pos_i = rng.integers(0, n, size=size, dtype=np.int64)
            pos_j = rng.integers(0, n, size=size, dtype=np.int64)
            vals = rng.integers(lo, hi + 1, size=size, dtype=np.int64)
            if kern is not None:
                current, used = kern.repair_chunk(
                    a, pos_i, pos_j, vals, plan.paths_flat, plan.path_offsets,
                    plan.pend_flat, plan.pend_offsets, cfg.augmented, cfg.symmetric, current,
                )
                current, used = int(current), int(used)
            else:
                used = 0
                for t in range(size):
                    if current == 0:
                        break
                    i, j, v = int(pos_i[t]), int(pos_j[t]), int(vals[t])
                    old_ij, old_ji = int(a[i, j]), int(a[j, i])
                    a[i, j] = v
                    if cfg.symmetric:
                        a[j, i] = v
                    new = _exact_violations(a, plan, cfg.augmented)
                    if new <= current:
                        current = new
                    else:
                        a[i, j] = old_ij
                        a[j, i] = old_ji
                    used = t + 1
                else:
                    used = size
            rounds_left -= used
        if current == 0:
            candidate = ExactMatrix([[int(x) for x in row] for row in a])
            if _hypothesis_reports(candidate, cfg.tree, cfg.augmented).holds:
                return candidate, attempt + 1
    return None, cfg.max_attempts


def gen_candidate(cfg: GenConfig) -> ExactMatrix | None:
    """One hypothesis-satisfying matrix, or None when attempts run out."""
    matrix, _ = _generate_slot(cfg, 0)
    return matrix


@dataclass(frozen=True)
class ConjectureVerdict:
    hypothesis: HypothesisReport
    adjoint: AdjointCheck
    smallest: SmallestEigen
    eigenvector_signed: bool | None
    summary: SpectralSummary

    @property
    def conclusion_ok(self) -> bool:
        return (
            self.adjoint.ok
            and self.smallest.is_real
            and self.smallest.is_simple is True
            and self.eigenvector_signed is True
        )

    @property
    def is_counterexample(self) -> bool:
        return self.hypothesis.holds and not self.conclusion_ok


def test_conjecture(A: ExactMatrix, tree: LabelledTree, augmented: bool = False) -> ConjectureVerdict:
    """Full verdict chain: hypotheses, adjugate signs, smallest eigenpair."""
    if A.n != tree.n:
        raise ValueError(f"matrix is {A.n}x{A.n} but tree has {tree.n} vertices")
    hypothesis = _hypothesis_reports(A, tree, augmented)
    adjoint = check_adjoint_conclusion(A, tree)
    summary = smallest_eig_vector(A, tree, adjoint_check=adjoint)
    return ConjectureVerdict(
        hypothesis=hypothesis,
        adjoint=adjoint,
        smallest=summary.smallest,
        eigenvector_signed=summary.signed_ok,
        summary=summary,
    )


def verdict_summary(v: ConjectureVerdict) -> dict:
    """JSON-safe digest of a verdict chain."""
    return {
        "hypothesis_holds": v.hypothesis.holds,
        "t_tp": v.hypothesis.ttp.is_t_tp,
        "pendant_p_matrix": [
            {"vertex": c.vertex, "is_p_matrix": c.report.is_p_matrix}
            for c in v.hypothesis.pendant_checks
        ],
        "adjoint_ok": v.adjoint.ok,
        "adjoint_mismatches": [list(m) for m in v.adjoint.mismatches],
        "smallest": {
            "re": v.smallest.estimate.real,
            "im": v.smallest.estimate.imag,
            "is_real": v.smallest.is_real,
            "is_simple": v.smallest.is_simple,
            "ambiguous": v.smallest.ambiguous,
            "modulus_margin": v.smallest.modulus_margin,
        },
        "eigenvector_signed": v.eigenvector_signed,
        "counterexample": v.is_counterexample,
    }


@dataclass(frozen=True)
class Exemplar:
    matrix: ExactMatrix
    verdict: dict


@dataclass(frozen=True)
class BatchReport:
    trials: int
    generated: int
    hypothesis_pass: int
    conclusion_pass: int
    counterexamples: int
    exemplars: tuple[Exemplar, ...]
    seed: int
    config: dict

    def __post_init__(self):
        if self.conclusion_pass + self.counterexamples != self.hypothesis_pass:
            raise ValueError("inconsistent counts in batch report")


def _config_echo(cfg: GenConfig) -> dict:
    return {
        "tree_n": cfg.tree.n,
        "tree_edges": [list(e) for e in cfg.tree.sorted_edges()],
        "entry_range": list(cfg.entry_range),
        "seed": cfg.seed,
        "max_attempts": cfg.max_attempts,
        "augmented": cfg.augmented,
        "symmetric": cfg.symmetric,
        "repair": cfg.repair,
        "repair_rounds": cfg.repair_rounds,
    }


def _run_slot(cfg: GenConfig, slot: int, lane: int) -> dict | None:
    matrix, _ = _generate_slot(cfg, slot, lane)
    if matrix is None:
        return None
    verdict = test_conjecture(matrix, cfg.tree, cfg.augmented)
    return {
        "matrix": matrix,
        "hypothesis": verdict.hypothesis.holds,
        "conclusion": verdict.conclusion_ok,
        "counterexample": verdict.is_counterexample,
        "verdict": verdict_summary(verdict),
    }


def _worker(args) -> list:
    cfg, slots, lane = args
    return [_run_slot(cfg, s, lane) for s in slots]


def default_workers() -> int:
    value = os.environ.get("TREETP_WORKERS", "1")
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def batch_verify(
    cfg: GenConfig,
    trials: int,
    keep: int = 0,
    workers: int | None = None,
    _lane: int = 0,
) -> BatchReport:
    """Generate up to `trials` hypothesis-satisfying matrices and test each.

    Candidate slot i always uses the same seed stream, so reports are
    identical for any worker count.
    """
    workers = default_workers() if workers is None else max(1, workers)
    slots = list(range(trials))
    if workers == 1 or trials <= 1:
        results = [_run_slot(cfg, s, _lane) for s in slots]
    else:
        chunks = [(cfg, slots[w::workers], _lane) for w in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_worker = list(pool.map(_worker, chunks))
        results = [None] * trials
        for w, chunk in enumerate(chunks):
            for s, r in zip(chunk[1], per_worker[w]):
                results[s] = r
    generated = hypothesis_pass = conclusion_pass = counterexamples = 0
    exemplars = []
    for r in results:
        if r is None:
            continue
        generated += 1
        if r["hypothesis"]:
            hypothesis_pass += 1
            if r["counterexample"]:
                counterexamples += 1
                if len(exemplars) < keep:
                    exemplars.append(Exemplar(r["matrix"], r["verdict"]))
            else:
                conclusion_pass += 1
    return BatchReport(
        trials=trials,
        generated=generated,
        hypothesis_pass=hypothesis_pass,
        conclusion_pass=conclusion_pass,
        counterexamples=counterexamples,
        exemplars=tuple(exemplars),
        seed=cfg.seed,
        config=_config_echo(cfg),
    )


def search_counterexamples(
    cfg: GenConfig, trials: int, keep: int = 5, workers: int | None = None
) -> BatchReport:
    """batch_verify that stores up to `keep` counterexamples with verdicts."""
    return batch_verify(cfg, trials, keep=keep, workers=workers)


def sweep_trees(
    n: int,
    cfg_template: GenConfig,
    trials_per_tree: int,
    keep: int = 1,
    workers: int | None = None,
) -> list[tuple[LabelledTree, BatchReport]]:
    """Run the search over every labelled tree on n vertices."""
    if not (2 <= n <= 7):
        raise ValueError("sweep supports 2 <= n <= 7")
    out = []
    for lane, tree in enumerate(enumerate_labelled_trees(n), start=1):
        cfg = replace(cfg_template, tree=tree)
        out.append((tree, batch_verify(cfg, trials_per_tree, keep=keep, workers=workers, _lane=lane)))
    return out


# --- report serialization -------------------------------------------------

def report_to_json(report: BatchReport, indent: int | None = 2) -> str:
    payload = {
        "trials": report.trials,
        "generated": report.generated,
        "hypothesis_pass": report.hypothesis_pass,
        "conclusion_pass": report.conclusion_pass,
        "counterexamples": report.counterexamples,
        "seed": report.seed,
        "config": report.config,
        "exemplars": [
            {"matrix": matrix_to_text(e.matrix), "verdict": e.verdict} for e in report.exemplars
        ],
    }
    return json.dumps(payload, indent=indent)


def report_from_json(text: str) -> BatchReport:
    data = json.loads(text)
    exemplars = tuple(
        Exemplar(matrix_from_text(e["matrix"]), e["verdict"]) for e in data["exemplars"]
    )
    return BatchReport(
        trials=data["trials"],
        generated=data["generated"],
        hypothesis_pass=data["hypothesis_pass"],
        conclusion_pass=data["conclusion_pass"],
        counterexamples=data["counterexamples"],
        exemplars=exemplars,
        seed=data["seed"],
        config=data["config"],
    )
