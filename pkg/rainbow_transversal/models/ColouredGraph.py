from typing import Dict, Iterable, List, Optional, Sequence, Tuple
import numpy as np

Edge = Tuple[int, int, int]

NO_EDGE = -1


class ColouredBipartiteGraph:
    """
    Properly edge-coloured bipartite graph with parts A (rows) and B (columns).

    Backed by a dense `size_a x size_b` colour matrix where -1 marks a missing
    edge, plus masks of the vertices present in the graph. A derived subgraph
    keeps the index space of its parent, so vertex ids never change between
    pipeline stages. Instances are immutable: every operation returns a new
    graph.
    """

    def __init__(self, colours: np.ndarray, rows: Optional[Iterable[int]] = None,
                 cols: Optional[Iterable[int]] = None, check: bool = True):
        matrix = np.array(colours, dtype=np.int64, copy=True)
        if matrix.ndim != 2:
            raise ValueError(f"[GRAPH] Colour matrix must be 2-dimensional, got shape {matrix.shape}.")
        self.size_a, self.size_b = matrix.shape
        self._row_mask = self._mask(rows, self.size_a)
        self._col_mask = self._mask(cols, self.size_b)
        matrix[~self._row_mask, :] = NO_EDGE
        matrix[:, ~self._col_mask] = NO_EDGE
        if check:
            self._check_colouring(matrix)
        matrix.flags.writeable = False
        self._matrix = matrix
        self._adj_a: Optional[List[List[int]]] = None
        self._adj_b: Optional[List[List[int]]] = None
        self._by_colour: Optional[Dict[int, List[Tuple[int, int]]]] = None

    @staticmethod
    def _mask(indices: Optional[Iterable[int]], size: int) -> np.ndarray:
        if indices is None:
            return np.ones(size, dtype=bool)
        mask = np.zeros(size, dtype=bool)
        idx = np.fromiter((int(i) for i in indices), dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= size):
            raise ValueError(f"[GRAPH] Vertex index out of range [0, {size}).")
        mask[idx] = True
        return mask

    @staticmethod
    def _check_colouring(matrix: np.ndarray) -> None:
        if (matrix < NO_EDGE).any():
            raise ValueError("[GRAPH] Colour ids must be non-negative.")
        for axis, side in ((1, "row"), (0, "column")):
            ordered = np.sort(matrix, axis=axis)
            if axis == 1:
                repeats = (ordered[:, 1:] == ordered[:, :-1]) & (ordered[:, 1:] >= 0)
            else:
                repeats = (ordered[1:, :] == ordered[:-1, :]) & (ordered[1:, :] >= 0)
            if repeats.any():
                raise ValueError(f"[GRAPH] Improper colouring: a colour repeats at a {side} vertex.")

    @classmethod
    def from_edges(cls, size_a: int, size_b: int, edges: Iterable[Edge],
                   rows: Optional[Iterable[int]] = None,
                   cols: Optional[Iterable[int]] = None) -> "ColouredBipartiteGraph":
        matrix = np.full((size_a, size_b), NO_EDGE, dtype=np.int64)
        for a, b, colour in edges:
            if not (0 <= a < size_a and 0 <= b < size_b):
                raise ValueError(f"[GRAPH] Edge ({a}, {b}) outside a {size_a}x{size_b} graph.")
            if colour < 0:
                raise ValueError(f"[GRAPH] Edge ({a}, {b}) has negative colour {colour}.")
            if matrix[a, b] != NO_EDGE:
                raise ValueError(f"[GRAPH] Parallel edge ({a}, {b}).")
            matrix[a, b] = colour
        return cls(matrix, rows, cols)

    @classmethod
    def from_pairs(cls, size_a: int, size_b: int,
                   pairs: Sequence[Tuple[int, int]]) -> "ColouredBipartiteGraph":
        """Uncoloured input: the i-th pair gets colour i, which is always proper."""
        return cls.from_edges(size_a, size_b, [(a, b, i) for i, (a, b) in enumerate(pairs)])

    def _derive(self, matrix: np.ndarray, row_mask: np.ndarray, col_mask: np.ndarray) -> "ColouredBipartiteGraph":
        return ColouredBipartiteGraph(matrix, np.flatnonzero(row_mask), np.flatnonzero(col_mask), check=False)

    @property
    def colour_matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def present(self) -> np.ndarray:
        return self._matrix >= 0

    @property
    def rows(self) -> List[int]:
        return np.flatnonzero(self._row_mask).tolist()

    @property
    def cols(self) -> List[int]:
        return np.flatnonzero(self._col_mask).tolist()

    @property
    def row_mask(self) -> np.ndarray:
        return self._row_mask.copy()

    @property
    def col_mask(self) -> np.ndarray:
        return self._col_mask.copy()

    @property
    def edge_count(self) -> int:
        return int(self.present.sum())

    def colours(self) -> List[int]:
        return np.unique(self._matrix[self._matrix >= 0]).tolist()

    @property
    def colour_count(self) -> int:
        return len(self.colours())

    def colour(self, a: int, b: int) -> Optional[int]:
        value = int(self._matrix[a, b])
        return None if value == NO_EDGE else value

    def has_edge(self, a: int, b: int, colour: Optional[int] = None) -> bool:
        if not (0 <= a < self.size_a and 0 <= b < self.size_b):
            return False
        value = int(self._matrix[a, b])
        if value == NO_EDGE:
            return False
        return colour is None or value == colour

    def edges(self) -> List[Edge]:
        positions = np.argwhere(self._matrix >= 0)
        return [(int(a), int(b), int(self._matrix[a, b])) for a, b in positions]

    def edges_by_colour(self) -> Dict[int, List[Tuple[int, int]]]:
        if self._by_colour is None:
            by_colour: Dict[int, List[Tuple[int, int]]] = {}
            for a, b, colour in self.edges():
                by_colour.setdefault(colour, []).append((a, b))
            self._by_colour = by_colour
        return self._by_colour

    def adjacency_a(self) -> List[List[int]]:
        if self._adj_a is None:
            present = self.present
            self._adj_a = [np.flatnonzero(present[a]).tolist() for a in range(self.size_a)]
        return self._adj_a

    def adjacency_b(self) -> List[List[int]]:
        if self._adj_b is None:
            present = self.present
            self._adj_b = [np.flatnonzero(present[:, b]).tolist() for b in range(self.size_b)]
        return self._adj_b

    def neighbours(self, side: str, vertex: int) -> List[int]:
        return self.adjacency_a()[vertex] if side == "A" else self.adjacency_b()[vertex]

    def degrees_a(self) -> np.ndarray:
        return self.present.sum(axis=1)

    def degrees_b(self) -> np.ndarray:
        return self.present.sum(axis=0)

    def min_degree(self) -> int:
        degrees = np.concatenate([self.degrees_a()[self._row_mask], self.degrees_b()[self._col_mask]])
        return int(degrees.min()) if degrees.size else 0

    def side_matrix(self, side: str) -> Tuple[List[int], List[int], np.ndarray]:
        """Boolean adjacency restricted to present vertices, oriented from `side`."""
        rows, cols = self.rows, self.cols
        block = self.present[np.ix_(rows, cols)]
        if side == "A":
            return rows, cols, block
        return cols, rows, block.T

    def restrict(self, rows: Iterable[int], cols: Iterable[int]) -> "ColouredBipartiteGraph":
        row_mask = self._row_mask & self._mask(rows, self.size_a)
        col_mask = self._col_mask & self._mask(cols, self.size_b)
        return self._derive(self._matrix, row_mask, col_mask)

    def remove_vertices(self, rows: Iterable[int] = (), cols: Iterable[int] = ()) -> "ColouredBipartiteGraph":
        row_mask = self._row_mask & ~self._mask(rows, self.size_a)
        col_mask = self._col_mask & ~self._mask(cols, self.size_b)
        return self._derive(self._matrix, row_mask, col_mask)

    def keep_colours(self, colours: Iterable[int]) -> "ColouredBipartiteGraph":
        keep = np.isin(self._matrix, np.fromiter(colours, dtype=np.int64))
        return self._derive(np.where(keep, self._matrix, NO_EDGE), self._row_mask, self._col_mask)

    def drop_colours(self, colours: Iterable[int]) -> "ColouredBipartiteGraph":
        drop = np.isin(self._matrix, np.fromiter(colours, dtype=np.int64))
        return self._derive(np.where(drop, NO_EDGE, self._matrix), self._row_mask, self._col_mask)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ColouredBipartiteGraph):
            return NotImplemented
        return (np.array_equal(self._matrix, other._matrix)
                and np.array_equal(self._row_mask, other._row_mask)
                and np.array_equal(self._col_mask, other._col_mask))

    __hash__ = None

    def __repr__(self) -> str:
        return (f"ColouredBipartiteGraph(|A|={int(self._row_mask.sum())}, |B|={int(self._col_mask.sum())}, "
                f"edges={self.edge_count})")
