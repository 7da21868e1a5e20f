import itertools
from functools import lru_cache
from typing import List, Optional, Tuple
import numpy as np
from ..configs.logger import logging
from ..core import validate_latin, to_graph
from ..models import LatinArray, ColouredBipartiteGraph, RainbowMatching

EXHAUSTIVE_LIMIT = 8


def _row_options(array: LatinArray, tag: str) -> List[List[Tuple[int, int, int, int]]]:
    report = validate_latin(array)
    if not report.ok:
        raise ValueError(f"[{tag}] Invalid Latin array: {report.violations[0].reason}.")
    return [[(c, colour, 1 << c, 1 << colour) for c, colour in enumerate(row)] for row in array.grid]


def count_transversals(array: LatinArray) -> int:
    """Exact transversal count by row-by-row backtracking over column and colour bitmasks."""
    options = _row_options(array, "COUNT TRANSVERSALS")
    n = array.n

    def extend(row: int, used_cols: int, used_colours: int) -> int:
        if row == n:
            return 1
        total = 0
        for _, _, col_bit, colour_bit in options[row]:
            if used_cols & col_bit or used_colours & colour_bit:
                continue
            total += extend(row + 1, used_cols | col_bit, used_colours | colour_bit)
        return total

    return extend(0, 0, 0)


@lru_cache(maxsize=EXHAUSTIVE_LIMIT)
def _permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)


def count_transversals_exhaustive(array: LatinArray) -> int:
    """Independent count: check all n! column permutations for distinct colours."""
    if array.n > EXHAUSTIVE_LIMIT:
        raise ValueError(f"[EXHAUSTIVE COUNT] n={array.n} exceeds the exhaustive limit {EXHAUSTIVE_LIMIT}.")
    _row_options(array, "EXHAUSTIVE COUNT")
    perms = _permutations(array.n)
    colours = np.sort(array.as_matrix()[np.arange(array.n), perms], axis=1)
    distinct = np.all(colours[:, 1:] != colours[:, :-1], axis=1)
    return int(distinct.sum())


def find_transversal_exact(array: LatinArray) -> Optional[RainbowMatching]:
    """First transversal in lexicographic row order, or None when there is none."""
    options = _row_options(array, "FIND TRANSVERSAL")
    n = array.n
    chosen: List[Tuple[int, int, int]] = []

    def extend(row: int, used_cols: int, used_colours: int) -> bool:
        if row == n:
            return True
        for col, colour, col_bit, colour_bit in options[row]:
            if used_cols & col_bit or used_colours & colour_bit:
                continue
            chosen.append((row, col, colour))
            if extend(row + 1, used_cols | col_bit, used_colours | colour_bit):
                return True
            chosen.pop()
        return False

    if not extend(0, 0, 0):
        logging.info(f"[FIND TRANSVERSAL] No transversal exists (n={n}).")
        return None
    return RainbowMatching.from_tuples(chosen).checked(to_graph(array), "FIND TRANSVERSAL")


def max_rainbow_matching_exact(graph: ColouredBipartiteGraph, max_rows: int = 10) -> RainbowMatching:
    """
    Maximum rainbow matching by branch and bound over the rows of `graph`.

    Each row is either matched to an admissible edge or skipped; a branch is cut
    when its size plus the rows still to decide cannot beat the best found.
    """
    rows = graph.rows
    if max(len(rows), len(graph.cols)) > max_rows:
        raise ValueError(f"[MAX RAINBOW MATCHING] Instance with parts {len(rows)}x{len(graph.cols)} "
                         f"exceeds the exact limit {max_rows}.")
    matrix = graph.colour_matrix
    options = [[(row, int(col), int(matrix[row, col])) for col in graph.adjacency_a()[row]] for row in rows]
    ceiling = min(len(rows), len(graph.cols), graph.colour_count)
    best: List[Tuple[int, int, int]] = []
    current: List[Tuple[int, int, int]] = []

    def search(index: int, used_cols: set, used_colours: set) -> None:
        nonlocal best
        if len(current) > len(best):
            best = list(current)
        if len(best) == ceiling or index == len(options) or len(current) + len(options) - index <= len(best):
            return
        for row, col, colour in options[index]:
            if col in used_cols or colour in used_colours:
                continue
            current.append((row, col, colour))
            used_cols.add(col)
            used_colours.add(colour)
            search(index + 1, used_cols, used_colours)
            current.pop()
            used_cols.discard(col)
            used_colours.discard(colour)
            if len(best) == ceiling:
                return
        search(index + 1, used_cols, used_colours)

    search(0, set(), set())
    return RainbowMatching.from_tuples(best).checked(graph, "MAX RAINBOW MATCHING")
