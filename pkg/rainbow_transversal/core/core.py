from typing import List, Optional, Union
import numpy as np
from ..configs.logger import logging
from ..models import (LatinArray, ColouredBipartiteGraph, RainbowMatching, ValidationReport,
                      Violation, NO_EDGE)

SeedLike = Union[int, np.random.Generator, None]


def as_generator(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def validate_latin(array: LatinArray) -> ValidationReport:
    """Report every broken Latin-array invariant; never raises for the conditions it reports."""
    n, k, grid = array.n, array.k, array.grid
    violations: List[Violation] = []
    if len(grid) != n or any(len(row) != n for row in grid):
        shape = [len(row) for row in grid]
        violations.append(Violation(row=-1, col=-1, colour=-1,
                                    reason=f"grid is not {n}x{n} (row lengths {shape})"))
        return ValidationReport(ok=False, violations=violations)

    seen_in_col: List[dict] = [{} for _ in range(n)]
    present = set()
    for r, row in enumerate(grid):
        seen_in_row = {}
        for c, colour in enumerate(row):
            if not 0 <= colour < k:
                violations.append(Violation(row=r, col=c, colour=colour, reason=f"colour id outside [0, {k})"))
                continue
            present.add(colour)
            if colour in seen_in_row:
                violations.append(Violation(row=r, col=c, colour=colour,
                                            reason=f"colour repeats in row {r} (also at column {seen_in_row[colour]})"))
            else:
                seen_in_row[colour] = c
            if colour in seen_in_col[c]:
                violations.append(Violation(row=r, col=c, colour=colour,
                                            reason=f"colour repeats in column {c} (also at row {seen_in_col[c][colour]})"))
            else:
                seen_in_col[c][colour] = r
    for colour in range(k):
        if colour not in present:
            violations.append(Violation(row=-1, col=-1, colour=colour, reason="colour id never used"))
    return ValidationReport(ok=not violations, violations=violations)


def to_graph(array: LatinArray) -> ColouredBipartiteGraph:
    report = validate_latin(array)
    if not report.ok:
        first = report.violations[0]
        raise ValueError(f"[TO GRAPH] Invalid Latin array ({len(report.violations)} violations), "
                         f"first at ({first.row}, {first.col}): {first.reason}.")
    return ColouredBipartiteGraph(array.as_matrix(), check=False)


def _edge_arrays(graph: ColouredBipartiteGraph):
    matrix = graph.colour_matrix
    rows, cols = np.nonzero(matrix >= 0)
    return rows, cols, matrix[rows, cols]


def canonical_colour_order(graph: ColouredBipartiteGraph) -> np.ndarray:
    """Colours of `graph` ordered by the row-major position of their first edge."""
    rows, cols, colours = _edge_arrays(graph)
    if colours.size == 0:
        return colours
    _, first = np.unique(colours, return_index=True)
    # np.nonzero is row-major, so the first index of a colour is its first edge
    return colours[np.sort(first)]


def one_edge_per_colour(graph: ColouredBipartiteGraph, rng: SeedLike) -> ColouredBipartiteGraph:
    """
    Keep exactly one edge of every colour, chosen uniformly within each colour class.

    Colour classes are visited in order of their first edge, so the choice depends
    on the positions of the classes and not on the colour ids themselves.
    """
    rng = as_generator(rng)
    rows, cols, colours = _edge_arrays(graph)
    matrix = np.full(graph.colour_matrix.shape, NO_EDGE, dtype=np.int64)
    if colours.size:
        positions = rows * graph.size_b + cols
        order = np.lexsort((positions, colours))
        _, starts, counts = np.unique(colours[order], return_index=True, return_counts=True)
        class_order = np.argsort(positions[order][starts], kind="stable")
        picks = rng.integers(0, counts[class_order])
        chosen = order[starts[class_order] + picks]
        matrix[rows[chosen], cols[chosen]] = colours[chosen]
    logging.debug(f"[ONE EDGE PER COLOUR] Kept {int((matrix >= 0).sum())} of {colours.size} edges.")
    return ColouredBipartiteGraph(matrix, graph.rows, graph.cols, check=False)


def verify_rainbow_perfect(graph: ColouredBipartiteGraph, matching: Optional[RainbowMatching]) -> bool:
    if matching is None:
        return False
    if not matching.is_rainbow() or not matching.lies_in(graph):
        return False
    return sorted(matching.rows()) == graph.rows and sorted(matching.cols()) == graph.cols
