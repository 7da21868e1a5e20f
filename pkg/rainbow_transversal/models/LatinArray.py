from typing import List, Optional
import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class LatinArray(BaseModel):
    """
    Order-n square grid of colour ids. Rows are side A, columns side B.

    Properness is not enforced here; `core.validate_latin` reports violations
    so that broken inputs can still be loaded and diagnosed.
    """
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    k: int = Field(ge=1)
    grid: List[List[int]]

    def as_matrix(self) -> np.ndarray:
        return np.asarray(self.grid, dtype=np.int64).reshape(self.n, self.n)

    @property
    def density(self) -> float:
        return self.k / (self.n * self.n)

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, k: Optional[int] = None) -> "LatinArray":
        matrix = np.asarray(matrix, dtype=np.int64)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"[LATIN ARRAY] Expected a square matrix, got shape {matrix.shape}.")
        if k is None:
            k = int(matrix.max()) + 1 if matrix.size else 1
        return cls(n=matrix.shape[0], k=k, grid=matrix.tolist())
