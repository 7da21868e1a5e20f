import heapq
from typing import Dict, List, Optional, Tuple
import numpy as np
from ..configs.logger import logging
from ..models import LatinArray, GenSpec

Cell = Tuple[int, int, int]


def cyclic_latin(n: int) -> LatinArray:
    """Addition table of Z_n: grid[r][c] = (r + c) mod n."""
    if n < 1:
        raise ValueError(f"[CYCLIC LATIN] Order must be positive, got {n}.")
    index = np.arange(n)
    return LatinArray.from_matrix((index[:, None] + index[None, :]) % n, k=n)


def z2k_table(k_half: int) -> LatinArray:
    """Addition table of Z_2k. Tables of even order have no transversal."""
    if k_half < 1:
        raise ValueError(f"[Z2K TABLE] kHalf must be positive, got {k_half}.")
    return cyclic_latin(2 * k_half)


class _Draws:
    """Chunked uniform draws from a numpy Generator, consumed one at a time."""

    def __init__(self, rng: np.random.Generator, chunk: int = 4096):
        self.rng = rng
        self.chunk = chunk
        self._buffer = rng.random(chunk)
        self._next = 0

    def below(self, bound: int) -> int:
        if self._next == self.chunk:
            self._buffer = self.rng.random(self.chunk)
            self._next = 0
        value = self._buffer[self._next]
        self._next += 1
        return min(int(value * bound), bound - 1)


class IncidenceCube:
    """
    Latin square as a 0/1 incidence cube over (row, column, symbol), stored
    sparsely with one index per line direction. In an improper state exactly one
    cell holds -1 and the three lines through it hold two 1s each.
    """

    def __init__(self, grid: np.ndarray):
        self.n = grid.shape[0]
        self.by_rc: Dict[Tuple[int, int], List[int]] = {}
        self.by_rs: Dict[Tuple[int, int], List[int]] = {}
        self.by_cs: Dict[Tuple[int, int], List[int]] = {}
        self.minus: Optional[Cell] = None
        for r in range(self.n):
            for c in range(self.n):
                self._insert((r, c, int(grid[r, c])))

    def _insert(self, cell: Cell) -> None:
        r, c, s = cell
        self.by_rc.setdefault((r, c), []).append(s)
        self.by_rs.setdefault((r, s), []).append(c)
        self.by_cs.setdefault((c, s), []).append(r)

    def _erase(self, cell: Cell) -> None:
        r, c, s = cell
        self.by_rc[(r, c)].remove(s)
        self.by_rs[(r, s)].remove(c)
        self.by_cs[(c, s)].remove(r)

    def value(self, cell: Cell) -> int:
        r, c, s = cell
        plus = 1 if s in self.by_rc.get((r, c), ()) else 0
        return plus - (1 if self.minus == cell else 0)

    def increment(self, cell: Cell) -> None:
        if self.minus == cell:
            self.minus = None
        elif self.value(cell) == 0:
            self._insert(cell)
        else:
            raise AssertionError(f"[INCIDENCE CUBE] Cell {cell} would exceed 1.")

    def decrement(self, cell: Cell) -> None:
        if self.value(cell) == 1:
            self._erase(cell)
        elif self.minus is None:
            self.minus = cell
        else:
            raise AssertionError(f"[INCIDENCE CUBE] Second negative cell {cell}.")

    @property
    def proper(self) -> bool:
        return self.minus is None

    def move(self, draws: _Draws) -> None:
        n = self.n
        if self.minus is None:
            r, c = draws.below(n), draws.below(n)
            current = self.by_rc[(r, c)][0]
            s = draws.below(n - 1)
            s = s + 1 if s >= current else s
            r2 = self.by_cs[(c, s)][0]
            c2 = self.by_rs[(r, s)][0]
            s2 = current
        else:
            r, c, s = self.minus
            options_r, options_c, options_s = self.by_cs[(c, s)], self.by_rs[(r, s)], self.by_rc[(r, c)]
            r2 = options_r[draws.below(len(options_r))]
            c2 = options_c[draws.below(len(options_c))]
            s2 = options_s[draws.below(len(options_s))]
        for cell in ((r, c, s), (r, c2, s2), (r2, c, s2), (r2, c2, s)):
            self.increment(cell)
        for cell in ((r, c, s2), (r, c2, s), (r2, c, s), (r2, c2, s2)):
            self.decrement(cell)

    def to_grid(self) -> np.ndarray:
        if not self.proper:
            raise AssertionError("[INCIDENCE CUBE] Cannot read an improper cube as a grid.")
        grid = np.empty((self.n, self.n), dtype=np.int64)
        for (r, c), symbols in self.by_rc.items():
            grid[r, c] = symbols[0]
        return grid


def random_latin(n: int, seed: int, mixing_steps: Optional[int] = None) -> LatinArray:
    """
    Latin square of order n mixed from the cyclic table by Jacobson-Matthews moves.

    `mixing_steps` defaults to n^3. After the requested number of moves the chain
    keeps moving until it is back in a proper state.
    """
    if n < 1:
        raise ValueError(f"[RANDOM LATIN] Order must be positive, got {n}.")
    steps = n ** 3 if mixing_steps is None else mixing_steps
    if steps < 0:
        raise ValueError(f"[RANDOM LATIN] Mixing steps must be non-negative, got {steps}.")
    start = cyclic_latin(n)
    if n == 1 or steps == 0:
        return start
    cube = IncidenceCube(start.as_matrix())
    draws = _Draws(np.random.default_rng(seed))
    performed = 0
    while performed < steps or not cube.proper:
        cube.move(draws)
        performed += 1
    logging.debug(f"[RANDOM LATIN] n={n} seed={seed}: {performed} moves ({steps} requested).")
    return LatinArray.from_matrix(cube.to_grid(), k=n)


def split_colours(array: LatinArray, target_colours: int, seed: int) -> LatinArray:
    """
    Recolour single cells with fresh colour ids until `target_colours` colours are used.

    Each split takes the currently largest colour class (smallest id on ties) and
    moves one of its cells, chosen uniformly, to the next unused id.
    """
    n, k = array.n, array.k
    if not n <= target_colours <= n * n:
        raise ValueError(f"[SPLIT COLOURS] Target {target_colours} outside [{n}, {n * n}].")
    if target_colours < k:
        raise ValueError(f"[SPLIT COLOURS] Target {target_colours} is below the current colour count {k}.")
    grid = array.as_matrix().copy()
    cells: Dict[int, List[Tuple[int, int]]] = {}
    for r in range(n):
        for c in range(n):
            cells.setdefault(int(grid[r, c]), []).append((r, c))
    heap = [(-len(positions), colour) for colour, positions in cells.items() if len(positions) >= 2]
    heapq.heapify(heap)
    rng = np.random.default_rng(seed)
    next_colour = k
    while next_colour < target_colours:
        if not heap:
            raise AssertionError("[SPLIT COLOURS] No colour class left to split.")
        _, colour = heapq.heappop(heap)
        positions = cells[colour]
        r, c = positions.pop(int(rng.integers(len(positions))))
        grid[r, c] = next_colour
        next_colour += 1
        if len(positions) >= 2:
            heapq.heappush(heap, (-len(positions), colour))
    return LatinArray.from_matrix(grid, k=target_colours)


def generate(spec: GenSpec) -> LatinArray:
    logging.info(f"[GENERATE] family={spec.family} n={spec.n} colours={spec.target_colours} seed={spec.seed}")
    latin_seed, split_seed = (int(s) for s in np.random.SeedSequence(spec.seed).generate_state(2))
    if spec.family == "cyclic":
        array = cyclic_latin(spec.n)
    elif spec.family == "z2k":
        array = z2k_table(spec.n // 2)
    else:
        array = random_latin(spec.n, latin_seed, spec.mixing_steps)
    target = spec.target_colours if spec.target_colours is not None else array.k
    if spec.family == "split" or target != array.k:
        array = split_colours(array, target, split_seed)
    return array
