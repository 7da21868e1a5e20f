from typing import Dict, FrozenSet, List, Optional
from pydantic import BaseModel, ConfigDict
from .ColouredGraph import ColouredBipartiteGraph
from .RainbowMatching import RainbowMatching
from .Subpair import Subpair


class ReservationSplit(BaseModel):
    """Reserved colours with the graphs they split off: G^r and G* = (K - G^r) - (A1 u B1)."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    p: float
    reserved_colours: FrozenSet[int]
    g_star: ColouredBipartiteGraph
    gr: ColouredBipartiteGraph
    band: List[float]
    outside_band_a: int
    outside_band_b: int
    mean_degree_b: float


class TrimmedCore(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    pair: Subpair
    graph: ColouredBipartiteGraph
    removed_a: List[int]
    removed_b: List[int]
    heavy_a: int
    heavy_b: int
    min_degree: int


class StageState(BaseModel):
    """Vertex sets and matchings of a pipeline run, filled in stage by stage."""
    core: Optional[Subpair] = None
    m2: Optional[RainbowMatching] = None
    m0: Optional[RainbowMatching] = None
    m3: Optional[RainbowMatching] = None
    a2b2: Optional[Subpair] = None
    trimmed_core: Optional[Subpair] = None
    leftovers: Optional[Subpair] = None
    hard_leftovers: Optional[Subpair] = None
    final_core: Optional[Subpair] = None
    edge_seed: Optional[int] = None
    min_degree_bound: Optional[float] = None
    sizes: Dict[str, int] = {}
