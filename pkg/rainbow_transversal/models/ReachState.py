from typing import Dict, FrozenSet, List, Literal, Optional
from pydantic import BaseModel
from .RainbowMatching import MatchedEdge


class ReachStep(BaseModel):
    step: int
    added_a: List[int] = []
    colours_a: List[int] = []
    added_b: List[int] = []
    colours_b: List[int] = []


class ReachState(BaseModel):
    """
    Outcome of the two-sided reachability iteration over M2.

    `r_a` / `r_b` map the row of an M2 edge to the phase at which it joined
    R^A / R^B (A-phase of step i is 2i-1, B-phase is 2i). `colour_pool` holds
    the colours added to C with their phase; colours unused by M2 belong to C
    from the start with timestamp 0. A colour is earlier than a phase when it is in
    C with a timestamp strictly below that phase; colour ids never break ties.
    """
    r_a: Dict[int, int] = {}
    r_b: Dict[int, int] = {}
    colour_pool: Dict[int, int] = {}
    m2_colours: FrozenSet[int] = frozenset()
    leftovers_a: List[int] = []
    leftovers_b: List[int] = []
    threshold: float
    step_log: List[ReachStep] = []
    steps: int = 0
    terminated_with: Literal["intersection", "stalled", "step cap"] = "stalled"
    intersection: Optional[MatchedEdge] = None

    def in_pool(self, colour: int) -> bool:
        return colour in self.colour_pool or colour not in self.m2_colours

    def timestamp(self, colour: int) -> int:
        return self.colour_pool.get(colour, 0)

    def earlier_than(self, colour: int, phase: int) -> bool:
        """True when `colour` was in C before `phase`."""
        return self.in_pool(colour) and self.timestamp(colour) < phase


class AugmentationRecord(BaseModel):
    input_size: int
    output_size: int
    threshold: float
    reach_steps: int
    replacement_steps: int
