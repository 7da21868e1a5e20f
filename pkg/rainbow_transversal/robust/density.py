import math
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple
import numpy as np
from ..configs.logger import logging
from ..models import (ColouredBipartiteGraph, Subpair, DensityParams, DensityVerdict, DenseSubpairResult,
                      FailureReport, StageFailure)


def density(graph: ColouredBipartiteGraph, subpair: Subpair) -> Fraction:
    """e(A', B') / (|A'| |B'|) as an exact rational."""
    if not subpair.part_a or not subpair.part_b:
        raise ValueError(f"[DENSITY] Subpair has an empty part (sizes {subpair.sizes}).")
    block = graph.present[np.ix_(subpair.sorted_a(), subpair.sorted_b())]
    return Fraction(int(block.sum()), len(subpair.part_a) * len(subpair.part_b))


def _threshold(epsilon: float, size: int) -> int:
    return max(1, math.ceil(Fraction(epsilon).limit_denominator(10 ** 6) * size))


def _witness(graph: ColouredBipartiteGraph, rows: Iterable[int], cols: Iterable[int],
             delta: float) -> Optional[DensityVerdict]:
    pair = Subpair(part_a=frozenset(int(r) for r in rows), part_b=frozenset(int(c) for c in cols), role="witness")
    value = density(graph, pair)
    if value < Fraction(delta).limit_denominator(10 ** 9):
        return DensityVerdict(dense=False, exact=False, witness=pair, witness_density=float(value))
    return None


def _exact_violation(graph: ColouredBipartiteGraph, delta: float, t_a: int, t_b: int) -> Optional[DensityVerdict]:
    rows, cols, block = graph.side_matrix("A")
    m = len(rows)
    masks = ((np.arange(1, 2 ** m)[:, None] >> np.arange(m)[None, :]) & 1).astype(bool)
    sizes = masks.sum(axis=1)
    keep = sizes >= t_a
    masks, sizes = masks[keep], sizes[keep]
    counts = masks.astype(np.int64) @ block.astype(np.int64)
    order = np.argsort(counts, axis=1, kind="stable")
    prefix = np.cumsum(np.take_along_axis(counts, order, axis=1), axis=1)
    widths = np.arange(1, len(cols) + 1)
    # the sparsest B' of a given width takes the columns with the fewest edges into A'
    ratios = prefix / (sizes[:, None] * widths[None, :])
    ratios[:, :t_b - 1] = np.inf
    hits = np.argwhere(ratios < delta - 1e-12)
    if hits.size == 0:
        return None
    subset, width = hits[0]
    chosen_rows = [rows[i] for i in np.flatnonzero(masks[subset])]
    chosen_cols = [cols[j] for j in order[subset, :width + 1]]
    verdict = _witness(graph, chosen_rows, chosen_cols, delta)
    if verdict is not None:
        verdict.exact = True
    return verdict


def _greedy_sparsify(graph: ColouredBipartiteGraph, delta: float, t_a: int, t_b: int) -> Optional[DensityVerdict]:
    rows, cols, block = graph.side_matrix("A")
    keep_a = np.ones(len(rows), dtype=bool)
    keep_b = np.ones(len(cols), dtype=bool)
    block = block.astype(np.int64)
    while keep_a.sum() > t_a or keep_b.sum() > t_b:
        sub = block[np.ix_(keep_a, keep_b)]
        edges, size_a, size_b = int(sub.sum()), int(keep_a.sum()), int(keep_b.sum())
        best: Optional[Tuple[float, str, int]] = None
        if size_a > t_a:
            degrees = sub.sum(axis=1)
            top = int(np.argmax(degrees))
            after = (edges - degrees[top]) / ((size_a - 1) * size_b)
            best = (after, "A", int(np.flatnonzero(keep_a)[top]))
        if size_b > t_b:
            degrees = sub.sum(axis=0)
            top = int(np.argmax(degrees))
            after = (edges - degrees[top]) / (size_a * (size_b - 1))
            if best is None or after < best[0]:
                best = (after, "B", int(np.flatnonzero(keep_b)[top]))
        _, side, position = best
        if side == "A":
            keep_a[position] = False
        else:
            keep_b[position] = False
        if best[0] < delta:
            verdict = _witness(graph, np.asarray(rows)[keep_a], np.asarray(cols)[keep_b], delta)
            if verdict is not None:
                return verdict
    return None


def is_dense(graph: ColouredBipartiteGraph, epsilon: float, delta: float, exact_limit: int = 16,
             samples: int = 200, seed: int = 0) -> DensityVerdict:
    """
    (epsilon, delta)-density of `graph`: every subpair with |A'| >= epsilon|A| and
    |B'| >= epsilon|B| has density at least delta. Exhaustive over A' when both
    parts have at most `exact_limit` vertices, sampled otherwise.
    """
    rows, cols = graph.rows, graph.cols
    if not rows or not cols:
        return DensityVerdict(dense=True, exact=True)
    t_a, t_b = _threshold(epsilon, len(rows)), _threshold(epsilon, len(cols))
    if len(rows) <= exact_limit and len(cols) <= exact_limit:
        verdict = _exact_violation(graph, delta, t_a, t_b)
        return verdict or DensityVerdict(dense=True, exact=True)

    verdict = _greedy_sparsify(graph, delta, t_a, t_b)
    if verdict is not None:
        return verdict
    rng = np.random.default_rng(seed)
    row_ids, col_ids = np.asarray(rows), np.asarray(cols)
    for _ in range(samples):
        verdict = _witness(graph, rng.choice(row_ids, size=t_a, replace=False),
                           rng.choice(col_ids, size=t_b, replace=False), delta)
        if verdict is not None:
            return verdict
    return DensityVerdict(dense=True, exact=False)


def balance_pair(graph: ColouredBipartiteGraph, part_a: Iterable[int], part_b: Iterable[int],
                 size: Optional[int] = None) -> Subpair:
    """Cut both parts to `size` (default: the smaller part) keeping highest in-pair degree, lowest index on ties."""
    part_a, part_b = sorted(part_a), sorted(part_b)
    size = min(len(part_a), len(part_b)) if size is None else min(size, len(part_a), len(part_b))
    block = graph.present[np.ix_(part_a, part_b)]

    def top(vertices: List[int], degrees: np.ndarray) -> frozenset:
        order = np.argsort(-degrees, kind="stable")[:size]
        return frozenset(vertices[i] for i in order)

    return Subpair(part_a=top(part_a, block.sum(axis=1)), part_b=top(part_b, block.sum(axis=0)))


def dense_subpair(graph: ColouredBipartiteGraph, params: DensityParams, d: float, exact_limit: int = 16,
                  samples: int = 200, seed: int = 0) -> DenseSubpairResult:
    """
    Density-increment search for a balanced (epsilon, c' d_cur)-dense subpair.

    While the current pair has a sparse witness (A'', B''), move to the densest
    balanced combination of the witness parts and their complements, provided it
    is at least (1 + c epsilon) times denser. Raises StageFailure when no such move
    exists or the result is below the size floor d^sizeExponent n / 2.
    """
    if d <= 0:
        raise ValueError(f"[DENSE SUBPAIR] Input density must be positive, got {d}.")
    n = len(graph.rows)
    size_floor = d ** params.size_exponent * n / 2
    iteration_bound = max(0, math.ceil(math.log(1 / d) / math.log(params.increment))) if d < 1 else 0
    current = balance_pair(graph, graph.rows, graph.cols)
    d_cur = float(density(graph, current))
    iterations = 0
    while True:
        delta = params.c_prime * d_cur
        verdict = is_dense(graph.restrict(current.part_a, current.part_b), params.epsilon, delta,
                           exact_limit, samples, seed + iterations)
        if verdict.dense:
            break
        witness = verdict.witness
        logging.info(f"[DENSE SUBPAIR] Iteration {iterations}: witness {witness.sizes} has density "
                     f"{verdict.witness_density:.4g} < {delta:.4g}.")
        best: Optional[Tuple[float, Subpair]] = None
        min_a = params.epsilon * len(current.part_a)
        min_b = params.epsilon * len(current.part_b)
        for side_a in (witness.part_a, current.part_a - witness.part_a):
            for side_b in (witness.part_b, current.part_b - witness.part_b):
                if len(side_a) < max(min_a, 1) or len(side_b) < max(min_b, 1):
                    continue
                candidate = balance_pair(graph, side_a, side_b)
                value = float(density(graph, candidate))
                if best is None or value > best[0]:
                    best = (value, candidate)
        target = params.increment * d_cur
        if best is None or best[0] < target:
            raise StageFailure(FailureReport(
                stage="dense_subpair", inequality="density(next) >= (1 + c*eps) * density(current)",
                lhs=best[0] if best else 0.0, rhs=target, slack=(best[0] if best else 0.0) - target,
                message=f"No density increment from witness of sizes {witness.sizes}.",
                details={"iterations": iterations, "current_sizes": list(current.sizes)}))
        current, d_cur = best[1], best[0]
        iterations += 1
        if iterations > iteration_bound:
            raise StageFailure(FailureReport(
                stage="dense_subpair", inequality="iterations <= log_{1+c*eps}(1/d)", lhs=iterations,
                rhs=iteration_bound, slack=iteration_bound - iterations,
                message="Density increments exceeded the iteration bound."))
    if len(current.part_a) < size_floor:
        raise StageFailure(FailureReport(
            stage="dense_subpair", inequality="|A'| >= d^sizeExponent * n / 2", lhs=len(current.part_a),
            rhs=size_floor, slack=len(current.part_a) - size_floor,
            message=f"Dense subpair of size {len(current.part_a)} is below the size floor {size_floor:.4g}."))
    logging.info(f"[DENSE SUBPAIR] Pair {current.sizes} with density {d_cur:.4g} after {iterations} increments "
                 f"({'exact' if verdict.exact else 'sampled'} check).")
    return DenseSubpairResult(pair=current.tagged("dense"), density=d_cur, delta=params.c_prime * d_cur,
                              iterations=iterations, iteration_bound=iteration_bound, size_floor=size_floor,
                              exact=verdict.exact)
