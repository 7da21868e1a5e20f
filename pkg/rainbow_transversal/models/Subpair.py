from typing import FrozenSet, List
from pydantic import BaseModel, ConfigDict


class Subpair(BaseModel):
    """A pair of vertex subsets (A-side rows, B-side columns) tagged with its pipeline role."""
    model_config = ConfigDict(frozen=True)

    part_a: FrozenSet[int] = frozenset()
    part_b: FrozenSet[int] = frozenset()
    role: str = ""

    @property
    def balanced(self) -> bool:
        return len(self.part_a) == len(self.part_b)

    @property
    def sizes(self) -> tuple:
        return (len(self.part_a), len(self.part_b))

    def sorted_a(self) -> List[int]:
        return sorted(self.part_a)

    def sorted_b(self) -> List[int]:
        return sorted(self.part_b)

    def within(self, size_a: int, size_b: int) -> bool:
        return all(0 <= a < size_a for a in self.part_a) and all(0 <= b < size_b for b in self.part_b)

    def tagged(self, role: str) -> "Subpair":
        return Subpair(part_a=self.part_a, part_b=self.part_b, role=role)


class DenseSubpairResult(BaseModel):
    pair: Subpair
    density: float
    delta: float
    iterations: int
    iteration_bound: int
    size_floor: float
    exact: bool
